"""Tabulate the region bounds and their combination over q* (plot-ready CSV on stdout)."""

import argparse
import sys

import numpy as np

from ermrev import bounds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=101)
    args = ap.parse_args()
    out = sys.stdout
    out.write("q_star,bound_R,bound_L,bound_B,combined\n")
    for q in np.linspace(0, 0.99, args.points):
        r = bounds.combined_bound(float(q))
        out.write(f"{r.q_star!r},{r.bound_R!r},{r.bound_L!r},{r.bound_B!r},{r.combined!r}\n")
    q, v = bounds.minimize_combined()
    print(f"# minimum {v!r} at q* = {q!r}", file=sys.stderr)


if __name__ == "__main__":
    main()
