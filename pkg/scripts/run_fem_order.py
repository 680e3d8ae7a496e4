#!/usr/bin/env python3
"""Observed L2 order of the P1 solver on cos(pi x) cos(pi y)."""

import argparse

from robinhom.config import ExperimentConfig
from robinhom.experiments import manufactured_order


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--levels", type=int, default=5, help="number of mesh sizes, from h=1/8")
    p.add_argument("--eta", type=float, default=None,
                   help="zeroth-order coefficient (default: the homogenized one)")
    args = p.parse_args()
    sizes = tuple(1 / 2 ** (3 + i) for i in range(args.levels))
    study = manufactured_order(ExperimentConfig(), sizes, eta=args.eta)
    print(f"{'h':>10} {'L2 error':>12} {'rate':>6} {'CG':>5}")
    rates = (None,) + study.rates
    for h, e, r, it in zip(study.h, study.errors, rates, study.iterations):
        print(f"{h:10.6f} {e:12.4e} {'' if r is None else f'{r:6.3f}':>6} {it:5d}")


if __name__ == "__main__":
    main()
