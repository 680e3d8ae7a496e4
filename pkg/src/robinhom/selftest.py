"""Built-in oracle checks, run by ``robinhom selftest``."""

from __future__ import annotations

import math
import sys

import numpy as np

from .closed_form import AuxiliaryProfile, q_boundary, robin_residual_at_hole
from .config import ExperimentConfig, MeshControls
from .experiments import solve_eps_problem, solve_homogenized
from .fem import element_mass, element_stiffness
from .functions import constant, sphere_constant
from .mesh import Mesh


def _unit_triangle() -> Mesh:
    return Mesh(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[0, 1, 2]]),
                np.array([[0, 1], [1, 2], [2, 0]]), np.full(3, -1), h=1.0)


def _check_stiffness():
    K = element_stiffness(_unit_triangle())[0]
    ref = np.array([[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
    return float(np.abs(K - ref).max()), 1e-14


def _check_mass():
    M = element_mass(_unit_triangle())[0]
    ref = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 24.0
    return float(np.abs(M - ref).max()), 1e-15


def _check_q_boundary():
    value = q_boundary(AuxiliaryProfile(0.1, 0.01, 1.0, 2))
    return abs(value - 1.0 / (1.0 + 0.01 * math.log(10.0))), 1e-15


def _check_residuals():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 6))
        eps = float(rng.uniform(1e-3, 1.0))
        r = eps * float(rng.uniform(1e-3, 0.999))
        alpha = float(rng.uniform(0.0, 10.0))
        worst = max(worst, abs(robin_residual_at_hole(AuxiliaryProfile(eps, r, alpha, n))))
    return worst, 1e-13


def _check_constant_eps():
    cfg = ExperimentConfig(f=constant(0.0), g_outer=constant(3.0), h=sphere_constant(3.0),
                           epsilon_list=(0.25,), mesh=MeshControls(h_far=1 / 8))
    sol = solve_eps_problem(cfg, 0.25)
    return float(np.abs(sol.field.values - 3.0).max()), 1e-8


def _check_constant_hom():
    cfg = ExperimentConfig(f=constant(0.0), g_outer=constant(2.0), h=sphere_constant(2.0),
                           mesh=MeshControls(h_far=1 / 8))
    sol = solve_homogenized(cfg)
    return float(np.abs(sol.field.values - 2.0).max()), 1e-8


CHECKS = [
    ("P1 stiffness on the unit right triangle", _check_stiffness),
    ("P1 mass on the unit right triangle", _check_mass),
    ("rim trace of the auxiliary profile", _check_q_boundary),
    ("Robin residual of the auxiliary profile", _check_residuals),
    ("constant solution on a perforated mesh", _check_constant_eps),
    ("constant solution of the homogenized problem", _check_constant_hom),
]


def run(stream=sys.stdout) -> bool:
    ok = True
    for name, check in CHECKS:
        value, tol = check()
        passed = value <= tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {value:.3e} (tol {tol:.0e})",
              file=stream)
    return ok
