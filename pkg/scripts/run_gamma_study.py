#!/usr/bin/env python3
"""Discrete rim sums against the closed-form limit, no finite elements.

    python3 scripts/run_gamma_study.py --config configs/gamma.json
"""

import argparse

from robinhom.config import config_from_dict, load_config
from robinhom.experiments import gamma_study


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--config")
    p.add_argument("--set", dest="overrides", action="append", default=[])
    p.add_argument("--out", default="out/gamma")
    args = p.parse_args()
    if args.config:
        cfg = load_config(args.config, args.overrides)
    else:
        cfg = config_from_dict({"epsilon_list": [1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128],
                                "h": {"kind": "sphere_trace_constant", "params": [1.0]}})
    report = gamma_study(cfg)
    report.write(args.out)
    print(f"{'eps':>10} {'holes':>6} {'gamma_sum':>12} {'gamma_closed':>12} {'rel_err':>9}")
    for r in report.rows:
        print(f"{r.eps:10.6f} {r.n_holes:6d} {r.gamma_sum:12.8f} {r.gamma_closed:12.8f} "
              f"{r.rel_err:9.5f}")


if __name__ == "__main__":
    main()
