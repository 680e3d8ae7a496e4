#!/usr/bin/env python3
"""Distance between perforated and homogenized solutions as epsilon shrinks.

    python3 scripts/run_convergence.py --config configs/study.json --out out/conv

Also reports the distance to the eta = 0 solution at the smallest epsilon,
which shows whether the zeroth-order term is visible at this resolution.
"""

import argparse
import logging

from robinhom.config import ExperimentConfig, load_config
from robinhom.experiments import (convergence_study, homogenized_mesh, solve_eps_problem,
                                  solve_homogenized)
from robinhom.fem import l2_error


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    p.add_argument("--config")
    p.add_argument("--set", dest="overrides", action="append", default=[])
    p.add_argument("--out", default="out/convergence")
    p.add_argument("--no-timing", action="store_true")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = load_config(args.config, args.overrides) if args.config else ExperimentConfig()
    report = convergence_study(cfg, out_dir=args.out, timing=not args.no_timing)
    print(report.to_csv(timing=not args.no_timing), end="")

    eps = cfg.epsilon_list[-1]
    mesh = homogenized_mesh(cfg)
    u_eps = solve_eps_problem(cfg, eps)
    u_hom = solve_homogenized(cfg, epsilon=eps, mesh=mesh)
    u_zero = solve_homogenized(cfg, epsilon=eps, eta=0.0, mesh=mesh)
    print(f"eps={eps:g}: |u_eps - u_hom| = {l2_error(u_eps.field, u_hom.field):.6f}, "
          f"|u_eps - u(eta=0)| = {l2_error(u_eps.field, u_zero.field):.6f}")


if __name__ == "__main__":
    main()
