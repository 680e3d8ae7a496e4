"""Command-line front end.

    robinhom <verb> [--config FILE] [--set key=value ...] [--out DIR]

Verbs: mesh, solve-eps, solve-hom, gamma-study, converge, consistency,
selftest.  The output directory defaults to ``$STL_OUT_DIR`` or ``./out``.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import selftest
from .config import ExperimentConfig, apply_overrides, config_from_dict, load_config
from .errors import NumericalError, ValidationError
from .experiments import (convergence_study, gamma_study, kaizu_consistency,
                          perforated_mesh, solve_eps_problem, solve_homogenized)
from .fem import write_field
from .mesh import quality_report, write_mesh

VERBS = ("mesh", "solve-eps", "solve-hom", "gamma-study", "converge", "consistency",
         "selftest")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="robinhom", description=__doc__.split("\n\n")[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--config", help="JSON experiment definition")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override a config entry (dotted path)")
    p.add_argument("--out", help="output directory (default: $STL_OUT_DIR or ./out)")
    p.add_argument("--c-g", dest="c_g", type=float, action="append",
                   help="constant boundary value for 'consistency' (repeatable; "
                        "default 0, 1, 5)")
    p.add_argument("--no-timing", action="store_true",
                   help="write wall_ms as 0 so reports are byte-reproducible")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _config(args) -> ExperimentConfig:
    if args.config:
        return load_config(args.config, args.overrides)
    return config_from_dict(apply_overrides({}, args.overrides))


def _eps_tag(eps: float) -> str:
    return f"{eps:.6g}".replace(".", "p")


def run(args) -> int:
    if args.verb == "selftest":
        return 0 if selftest.run(stream=sys.stdout) else 2
    cfg = _config(args)
    out = args.out or os.environ.get("STL_OUT_DIR") or "out"
    os.makedirs(out, exist_ok=True)
    timing = not args.no_timing

    if args.verb == "mesh":
        for eps in cfg.epsilon_list:
            mesh = perforated_mesh(cfg, eps, allow_empty=True)
            write_mesh(mesh, os.path.join(out, f"mesh_eps{_eps_tag(eps)}.txt"))
            q = quality_report(mesh)
            print(f"eps={eps:g} holes={mesh.n_holes} vertices={q.vertex_count} "
                  f"triangles={q.triangle_count} min_angle={q.min_angle:.2f}")
    elif args.verb == "solve-eps":
        for eps in cfg.epsilon_list:
            sol = solve_eps_problem(cfg, eps, allow_empty=True)
            tag = _eps_tag(eps)
            write_mesh(sol.mesh, os.path.join(out, f"mesh_eps{tag}.txt"))
            write_field(sol.field, os.path.join(out, f"field_eps{tag}.txt"))
            print(f"eps={eps:g} vertices={sol.mesh.n_vertices} cg_iters={sol.iterations}")
    elif args.verb == "solve-hom":
        sol = solve_homogenized(cfg)
        write_mesh(sol.mesh, os.path.join(out, "mesh_hom.txt"))
        write_field(sol.field, os.path.join(out, "field_hom.txt"))
        print(f"eta={sol.eta:.17g} h_bar={sol.h_bar:.17g} cg_iters={sol.iterations}")
    elif args.verb == "gamma-study":
        report = gamma_study(cfg)
        paths = report.write(out, timing=timing)
        sys.stdout.write(report.to_csv(timing))
        print(f"wrote {paths[0]}", file=sys.stderr)
    elif args.verb == "converge":
        report = convergence_study(cfg, out_dir=out, timing=timing)
        sys.stdout.write(report.to_csv(timing))
    elif args.verb == "consistency":
        values = args.c_g if args.c_g else [0.0, 1.0, 5.0]
        results = [kaizu_consistency(cfg, c).to_dict() for c in values]
        with open(os.path.join(out, "consistency.json"), "w") as fh:
            json.dump({"results": results}, fh, indent=2, sort_keys=True)
            fh.write("\n")
        for r in results:
            print(f"c_g={r['c_g']:g} max_diff={r['max_diff']:.3e}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except ValidationError as exc:
        key = f" [{exc.key}]" if exc.key else ""
        print(f"robinhom: validation error{key}: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"robinhom: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
