"""Run every canned reproduction and print a one-line verdict for each."""

import argparse
import time

from ermrev import experiments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curves", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    jobs = [
        ("prop1", experiments.reproduce_prop1),
        ("prop3", experiments.reproduce_prop3),
        ("switch", lambda: experiments.find_switch_pair()[2]),
        ("theorem", lambda: experiments.theorem_check(args.curves, args.seed)),
    ]
    ok = True
    for name, job in jobs:
        t0 = time.perf_counter()
        rep = job()
        ok &= rep.pass_
        print(f"{name:<8} {'pass' if rep.pass_ else 'FAIL'}  ({time.perf_counter() - t0:.2f}s)")
        for label, value in rep.computed:
            print(f"    {label:<28} {value:.10g}")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
