"""Independent Monte Carlo checks for values that the test suite freezes.

Uses a plain two-sample simulation written against the curve's r and v only
(no engine code), so it is independent of both the quadrature and erm_mc.

    python scripts/mc_oracles.py --trials 100000000
"""

import argparse

import numpy as np

from ermrev import quadrilateral, triangular
from ermrev.curve import RevenueCurve


def two_sample_mc(curve: RevenueCurve, trials: int, seed: int, chunk: int = 1 << 22):
    rng = np.random.default_rng(seed)
    total, total_sq, done = 0.0, 0.0, 0
    while done < trials:
        m = min(chunk, trials - done)
        q1, q2 = rng.random(m), rng.random(m)
        v1, v2 = curve.v(q1), curve.v(q2)
        hi_q = np.where(v1 >= v2, q1, q2)
        lo_q = np.where(v1 >= v2, q2, q1)
        hi_v, lo_v = np.maximum(v1, v2), np.minimum(v1, v2)
        pick = np.where(hi_v >= 2 * lo_v, hi_q, lo_q)
        pick = np.where(v1 == v2, np.maximum(q1, q2), pick)
        rev = curve.r(pick)
        total += rev.sum()
        total_sq += (rev * rev).sum()
        done += m
    mean = total / trials
    se = np.sqrt((total_sq / trials - mean * mean) / trials)
    return mean, se


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10**8)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    cases = {
        "quadrilateral(0.1,0.22)": quadrilateral(0.1, 0.22),
        "triangular(0.2639513241)": triangular(0.2639513241204536),
    }
    for name, c in cases.items():
        mean, se = two_sample_mc(c, args.trials, args.seed)
        print(f"{name}: ERM2 = {mean:.9f} +- {se:.2e}")


if __name__ == "__main__":
    main()
