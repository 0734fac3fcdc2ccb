"""Census of the general linear-fractional recurrence against its closed form.

At n = 1 the count agrees with the direct P^2 trace; for n >= 2 the census
is reported next to the closed form without forcing agreement.

    python3 scripts/linfrac_comparison.py [--n-max 5] [--draws 3]
"""
import argparse
import random

from orbitcount import families as Fam
from orbitcount import solver as S


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=5)
    ap.add_argument("--draws", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'draw':>4} {'n':>2} {'closed':>6} {'P2':>4} {'found':>5} {'rejected':>8}  verdict")
    for k in range(args.draws):
        spec = Fam.build("LINFRAC_GENERAL", Fam.random_params("LINFRAC_GENERAL", rng))
        for n in range(1, args.n_max + 1):
            rep = S.census(spec, n, seed=k, max_degree=16)
            p = rep.prediction
            p2 = p.direct_p2 if p.direct_p2 is not None else "-"
            print(f"{k:>4} {n:>2} {p.closed_form:>6} {p2:>4} {rep.found_distinct:>5} {len(rep.rejected):>8}  "
                  f"{rep.verdict}")


if __name__ == "__main__":
    main()
