"""Prediction next to census for one random generic draw of each family.

    python3 scripts/verify_table.py [--seed 0]
"""
import argparse
import random
import time

from orbitcount import families as Fam
from orbitcount import solver as S

RUNS = [
    ("LINFRAC_SPECIAL", (1, 2, 3, 4)),
    ("LINFRAC_GENERAL", (1, 2, 3)),
    ("HOST_PARASITE", (1, 2)),
    ("COMPETITIVE", (1,)),
    ("RATIONAL_PLANAR", (1, 2, 3)),
    ("SI_MODEL", (1,)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--references", type=int, default=2)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'family':16} {'n':>2} {'predicted':>9} {'found':>5}  {'verdict':12} {'secs':>6}  flags")
    for tag, ns in RUNS:
        spec = Fam.build(tag, Fam.random_params(tag, rng))
        for n in ns:
            t0 = time.perf_counter()
            rep = S.census(spec, n, seed=args.seed, references=args.references)
            pred = rep.prediction.predicted if rep.prediction else "-"
            flags = "; ".join(rep.genericity_flags)
            print(f"{tag:16} {n:>2} {pred:>9} {rep.found_distinct:>5}  {rep.verdict:12} "
                  f"{time.perf_counter() - t0:6.1f}  {flags}")


if __name__ == "__main__":
    main()
