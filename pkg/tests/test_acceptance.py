"""Acceptance criteria, one check per criterion at its stated tolerance.

Each check returns ``(passed, detail)``.  Under pytest a summary line per
criterion is printed at the end of the session; run this file directly to
print the lines without pytest.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from meshcheck import invariants  # noqa: E402
from oracles import GAMMA_SUM, Q_BND_2D, Q_BND_3D_ROUNDED_R  # noqa: E402
from robinhom.closed_form import (AuxiliaryProfile, eta_coefficient,  # noqa: E402
                                  gamma_discrete_sum, q_boundary, robin_residual_at_hole)
from robinhom.config import ExperimentConfig  # noqa: E402
from robinhom.experiments import (convergence_study, homogenized_mesh,  # noqa: E402
                                  kaizu_consistency, manufactured_order, solve_eps_problem,
                                  solve_homogenized)
from robinhom.fem import assemble_mass, l2_error  # noqa: E402
from robinhom.functions import constant, sphere_constant  # noqa: E402
from robinhom.geometry import (DomainSpec, MicrostructureSpec, build_lattice,  # noqa: E402
                               finite_S, hole_radius, holes_for, limit_S)
from robinhom.mesh import mesh_perforated  # noqa: E402

RESULTS = {}


def criterion_1():
    a = q_boundary(AuxiliaryProfile(0.1, 0.01, 1.0, 2))
    b = q_boundary(AuxiliaryProfile(0.1, 0.0316228, 1.0, 3))
    ok = abs(a - Q_BND_2D) < 1e-6 and abs(b - Q_BND_3D_ROUNDED_R) < 1e-6
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        eps = float(10 ** rng.uniform(-4, 0))
        r = eps * float(10 ** rng.uniform(-4, math.log10(0.999)))
        alpha = float(rng.uniform(0, 20))
        worst = max(worst, abs(robin_residual_at_hole(AuxiliaryProfile(eps, r, alpha, n))))
    ok = ok and worst < 1e-13
    return ok, f"q(N=2)={a:.9f} q(N=3)={b:.9f} max|residual|={worst:.1e}", 1.0


def criterion_2():
    eta = eta_coefficient(1.0, 0.25, 2, 1.0)
    values = []
    for inv in (8, 16, 32, 64):
        spec = MicrostructureSpec(1 / inv)
        values.append(finite_S(build_lattice(spec), hole_radius(spec), 2))
    lim = limit_S(MicrostructureSpec(1 / 64))
    gap = 1 - values[-1] / lim
    ok = (abs(eta - math.pi / 2) < 1e-12 and lim == 0.25
          and all(x < y for x, y in zip(values, values[1:])) and gap < 0.13)
    return ok, f"eta={eta:.12f} S={['%.4f' % v for v in values]} gap={gap:.3f}", 1.0


def criterion_3():
    errs, sums = [], []
    for inv in (8, 16, 32, 64):
        spec = MicrostructureSpec(1 / inv)
        s = gamma_discrete_sum(spec, build_lattice(spec), constant(1.0), sphere_constant(1.0))
        sums.append(s)
        errs.append(abs(s - math.pi / 2) / (math.pi / 2))
    spec = MicrostructureSpec(1 / 8)
    zero = gamma_discrete_sum(spec, build_lattice(spec), constant(1.0), sphere_constant(0.0))
    ok = (abs(sums[0] - GAMMA_SUM[8]) < 1e-6
          and all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] < 0.10 and zero == 0.0)
    return ok, f"sum(1/8)={sums[0]:.9f} rel_err={['%.4f' % e for e in errs]} g=0 -> {zero}", 60.0


def criterion_4():
    study = manufactured_order(ExperimentConfig(), sizes=(1 / 8, 1 / 16, 1 / 32, 1 / 64))
    ok = all(1.8 <= r <= 2.2 for r in study.rates)
    return ok, f"rates={['%.3f' % r for r in study.rates]}", 60.0


def criterion_5():
    cfg = ExperimentConfig(f=constant(0.0), g_outer=constant(3.0), h=sphere_constant(3.0))
    sol = solve_eps_problem(cfg, 0.125)
    err = float(np.abs(sol.field.values - 3.0).max())
    return err < 1e-8, f"max|u-3|={err:.2e} holes={sol.mesh.n_holes}", 30.0


def criterion_6():
    cfg = ExperimentConfig(f=constant(1.0), g_outer=constant(0.0), h=sphere_constant(0.0),
                           alpha=1.0, epsilon_list=(1 / 4, 1 / 8, 1 / 16))
    report = convergence_study(cfg)
    col = report.column("l2_err")
    decreasing = all(a > b for a, b in zip(col, col[1:]))
    mesh = homogenized_mesh(cfg)
    u_hom = solve_homogenized(cfg, mesh=mesh)
    u_zero = solve_homogenized(cfg, eta=0.0, mesh=mesh)
    u_eps = solve_eps_problem(cfg, 1 / 16)
    e_hom = l2_error(u_eps.field, u_hom.field)
    e_zero = l2_error(u_eps.field, u_zero.field)
    ok = decreasing and u_hom.eta > 0 and e_hom < e_zero
    return ok, (f"l2_err={['%.4f' % e for e in col]} at 1/16: eta>0 {e_hom:.4f} "
                f"vs eta=0 {e_zero:.4f}"), 600.0


def criterion_7():
    cfg = ExperimentConfig(f=constant(0.0), g_outer=constant(0.0), h=sphere_constant(1.0))
    hom = solve_homogenized(cfg)
    res = np.linalg.norm(hom.system.residual(hom.field.values)) / np.linalg.norm(hom.system.rhs)
    # the source of the discrete system is eta * 1 tested against every basis function
    ones = np.ones(hom.mesh.n_vertices)
    source = hom.eta * (assemble_mass(hom.mesh) @ ones)
    src_err = np.abs(hom.system.rhs - source).max() / np.abs(source).max()
    eps = solve_eps_problem(cfg, 0.125)
    d_hom = l2_error(eps.field, hom.field)
    d_zero = l2_error(eps.field)
    ok = (hom.h_bar == 1.0 and src_err < 1e-14 and hom.field.max_abs() > 0
          and res < cfg.solver.rel_tol and d_hom < d_zero)
    return ok, (f"max u_hom={hom.field.max_abs():.4f} residual={res:.1e} "
                f"dist(u_eps,u_hom)={d_hom:.4f} < dist(u_eps,0)={d_zero:.4f}"), 120.0


def criterion_8():
    diffs = []
    for f in (1.0, 0.0):
        cfg = ExperimentConfig(f=constant(f))
        diffs += [kaizu_consistency(cfg, c).max_diff for c in (0.0, 1.0, 5.0)]
    ok = max(diffs) < 1e-8
    return ok, f"max|u-(v+c_g)|={max(diffs):.1e}", 30.0


def criterion_9():
    failed = []
    for k, eps in ((0, None), (1, 0.25), (9, 0.125), (49, 0.0625)):
        holes = [] if eps is None else holes_for(MicrostructureSpec(eps))
        mesh = mesh_perforated(DomainSpec(), holes, 1 / 32, 16)
        failed += [f"k={k}:{name}" for name, ok in invariants(mesh, holes).items() if not ok]
    return not failed, "all invariants hold" if not failed else ", ".join(failed), 120.0


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


def evaluate(check):
    t0 = time.perf_counter()
    ok, detail, budget = check()
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < budget
    n = check.__name__.split("_")[1]
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.2f}s / {budget:g}s)"
    RESULTS[int(n)] = line
    return ok, line


@pytest.mark.parametrize("check", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(check):
    ok, line = evaluate(check)
    assert ok, line


if __name__ == "__main__":
    all_ok = True
    for check in CRITERIA:
        ok, line = evaluate(check)
        all_ok &= ok
        print(line, flush=True)
    sys.exit(0 if all_ok else 1)
