"""Degree sequences of the iterates and their growth ratios.

Each example has its own depth: exact composition cost grows with the
degree, so the maps with exponential degree growth stop early.

    python3 scripts/degree_growth.py
"""
import argparse

from orbitcount import families as Fam
from orbitcount import projmap as PM

EXAMPLES = [
    ("LINFRAC_GENERAL", dict(a0=2, a1=-3, a2=5, b0=7, b1=-2, b2=3), 8),
    ("LINFRAC_SPECIAL", dict(a=2, b=3), 10),
    ("HOST_PARASITE", dict(alpha=2, beta=3, gamma=5), 8),
    ("SI_MODEL", dict(alpha=2), 5),
    ("COMPETITIVE", dict(alpha=2, beta=3, a0=1, a1=2, a2=-3, b0=5, b1=-1, b2=7), 3),
    ("RATIONAL_PLANAR", dict(a=2, b=3, c=-5, d=7), 4),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--extra", type=int, default=0, help="iterate this many steps beyond the default depth")
    args = ap.parse_args()
    for tag, params, depth in EXAMPLES:
        f = PM.homogenize(Fam.build(tag, params))
        degs = PM.degree_sequence(f, depth + args.extra, max_degree=10 ** 6)
        ratio = degs[-1] / degs[-2] if len(degs) > 1 else float("nan")
        print(f"{tag:16} {degs}  last ratio {ratio:.4f}")


if __name__ == "__main__":
    main()
