"""Studies comparing perforated-domain solutions with the homogenized limit.

The perforated problem is

    -lap u = f          in the rectangle minus the holes,
    du/dn + alpha u = alpha g_outer   on the rectangle,
    du/dn + alpha u = alpha h(m)      on each hole rim (m: local direction),

and the homogenized problem on the full rectangle is

    (eta - lap) u = f + eta * h_bar,   du/dn + alpha u = alpha g_outer,

with ``eta = alpha * S * omega_N / |Omega|`` and ``h_bar`` the circle mean
of ``h``.  ``S`` is the limit density or, in ``finite`` mode, the density of
the actual lattice at the given epsilon.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .closed_form import (AuxiliaryProfile, HomogenizedCoefficients, gamma_closed_form,
                          gamma_discrete_sum, h_mean, q_boundary)
from .config import ExperimentConfig, config_to_dict
from .errors import EmptyLatticeError, NumericalError, StudyError, ValidationError
from .fem import (LinearSystem, ScalarField, assemble_load, assemble_mass,
                  assemble_robin_boundary, assemble_robin_load, assemble_stiffness,
                  l2_error, solve_cg, triangle_quadrature)
from .functions import AnalyticFunction, constant
from .geometry import build_lattice, finite_S, hole_radius, holes_for, limit_S
from .mesh import Mesh, mesh_perforated, mesh_rectangle

log = logging.getLogger(__name__)

SPHERE_NODES = 64
CSV_COLUMNS = ("eps", "n_holes", "r", "S_eps", "q_bnd", "eta", "h_bar", "l2_err",
               "gamma_sum", "gamma_closed", "cg_iters", "wall_ms")
GAMMA_COLUMNS = ("eps", "n_holes", "r", "S_eps", "q_bnd", "eta", "h_bar",
                 "gamma_sum", "gamma_closed", "rel_err", "wall_ms")


@dataclass(frozen=True, eq=False)
class Solution:
    field: ScalarField
    system: LinearSystem
    iterations: int
    eta: float = 0.0
    h_bar: float = 0.0

    @property
    def mesh(self) -> Mesh:
        return self.field.mesh


def _require_2d(config: ExperimentConfig):
    if config.dimension != 2:
        raise ValidationError("finite element experiments are two-dimensional",
                              key="dimension")


def _solve(system: LinearSystem, config: ExperimentConfig):
    return solve_cg(system, config.solver.rel_tol, config.solver.max_iter)


def perforated_mesh(config: ExperimentConfig, epsilon: float, allow_empty=False) -> Mesh:
    spec = config.microstructure(epsilon)
    lattice = build_lattice(spec)
    if len(lattice) == 0 and not allow_empty:
        raise EmptyLatticeError(f"no inclusions for epsilon={epsilon}", key="epsilon_list")
    return mesh_perforated(config.domain, holes_for(spec, lattice), config.mesh.h_far,
                           config.mesh.min_segments)


def solve_eps_problem(config: ExperimentConfig, epsilon: float, *,
                      hole_alpha: Optional[float] = None, allow_empty: bool = False,
                      mesh: Optional[Mesh] = None) -> Solution:
    """Direct P1 solve on the perforated domain for one epsilon.

    ``hole_alpha`` overrides the Robin coefficient on the rims only (the
    default shares ``config.alpha`` between rims and the outer boundary).
    """
    _require_2d(config)
    try:
        mesh = perforated_mesh(config, epsilon, allow_empty) if mesh is None else mesh
        a_out = config.alpha
        a_hole = config.alpha if hole_alpha is None else float(hole_alpha)
        A = (assemble_stiffness(mesh)
             + assemble_robin_boundary(mesh, "outer", a_out)
             + assemble_robin_boundary(mesh, "holes", a_hole))
        b = (assemble_load(mesh, config.f)
             + assemble_robin_load(mesh, "outer", a_out, config.g_outer)
             + assemble_robin_load(mesh, "holes", a_hole, config.h))
        system = LinearSystem(A, b)
        res = _solve(system, config)
    except NumericalError as exc:
        raise StudyError(f"epsilon={epsilon}: {exc}", epsilon=epsilon) from exc
    return Solution(ScalarField(mesh, res.x), system, res.iterations)


def s_value(config: ExperimentConfig, epsilon: Optional[float] = None) -> float:
    eps = config.epsilon_list[-1] if epsilon is None else epsilon
    spec = config.microstructure(eps)
    if config.s_mode == "finite":
        return finite_S(build_lattice(spec), hole_radius(spec), spec.dimension)
    return limit_S(spec)


def coefficients(config: ExperimentConfig,
                 epsilon: Optional[float] = None) -> HomogenizedCoefficients:
    hb = h_mean(config.h, config.dimension, SPHERE_NODES)
    return HomogenizedCoefficients.build(config.alpha, s_value(config, epsilon),
                                         config.dimension, config.domain.area, hb)


def homogenized_mesh(config: ExperimentConfig) -> Mesh:
    return mesh_rectangle(config.domain, 0.5 * config.mesh.h_far)


def solve_homogenized(config: ExperimentConfig, *, epsilon: Optional[float] = None,
                      eta: Optional[float] = None, h_bar: Optional[float] = None,
                      f: Optional[AnalyticFunction] = None,
                      g_outer: Optional[AnalyticFunction] = None,
                      mesh: Optional[Mesh] = None) -> Solution:
    """P1 solve of the homogenized Helmholtz problem on a structured mesh of
    size ``h_far / 2``.  Keyword overrides replace the config-derived data."""
    coeffs = coefficients(config, epsilon)
    eta = coeffs.eta if eta is None else float(eta)
    h_bar = coeffs.h_bar if h_bar is None else float(h_bar)
    f = config.f if f is None else f
    g_outer = config.g_outer if g_outer is None else g_outer
    mesh = homogenized_mesh(config) if mesh is None else mesh
    M = assemble_mass(mesh)
    A = assemble_stiffness(mesh) + M.scaled(eta) + assemble_robin_boundary(
        mesh, "outer", config.alpha)
    b = (assemble_load(mesh, f) + eta * h_bar * (M @ np.ones(mesh.n_vertices))
         + assemble_robin_load(mesh, "outer", config.alpha, g_outer))
    system = LinearSystem(A, b)
    res = _solve(system, config)
    return Solution(ScalarField(mesh, res.x), system, res.iterations, eta=eta, h_bar=h_bar)


@dataclass(frozen=True)
class OrderStudy:
    h: tuple
    errors: tuple
    iterations: tuple

    @property
    def rates(self) -> tuple:
        return tuple(float(np.log(e0 / e1) / np.log(h0 / h1)) for h0, h1, e0, e1 in
                     zip(self.h, self.h[1:], self.errors, self.errors[1:]))


def manufactured_order(config: ExperimentConfig, sizes=(1 / 8, 1 / 16, 1 / 32, 1 / 64),
                       eta: Optional[float] = None) -> OrderStudy:
    """L2 errors of the homogenized solver against u* = cos(pi x) cos(pi y).

    On the unit square du*/dn vanishes on every side, so the Robin data is
    u* itself and the source is (2 pi^2 + eta) u*.  ``eta`` defaults to the
    configured coefficient.
    """
    d = config.domain
    if (d.xmin, d.xmax, d.ymin, d.ymax) != (0.0, 1.0, 0.0, 1.0):
        raise ValidationError("the manufactured solution needs the unit square", key="domain")
    eta = coefficients(config).eta if eta is None else float(eta)
    exact = AnalyticFunction("cosine_product", (1.0, 1.0, 1.0))
    f = AnalyticFunction("cosine_product", (2.0 * np.pi ** 2 + eta, 1.0, 1.0))
    errors, iterations = [], []
    for h in sizes:
        sol = solve_homogenized(config, eta=eta, h_bar=0.0, f=f, g_outer=exact,
                                mesh=mesh_rectangle(d, h))
        errors.append(l2_error(sol.field, exact))
        iterations.append(sol.iterations)
    return OrderStudy(tuple(sizes), tuple(errors), tuple(iterations))


def integrate(config: ExperimentConfig, fn: AnalyticFunction, cells: int = 256) -> float:
    """``int fn dx`` over the rectangle with the edge-midpoint rule."""
    side = min(config.domain.side_lengths)
    mesh = mesh_rectangle(config.domain, side / cells)
    pts, w, _ = triangle_quadrature(mesh)
    return float(np.sum(w * fn(pts[..., 0], pts[..., 1])))


@dataclass
class StudyRow:
    eps: float
    n_holes: int
    r: float
    S_eps: float
    q_bnd: float
    eta: float
    h_bar: float
    gamma_sum: float
    gamma_closed: float
    wall_ms: float = 0.0
    l2_err: float = float("nan")
    cg_iters: int = 0

    @property
    def rel_err(self) -> float:
        if self.gamma_closed == 0.0:
            return 0.0 if self.gamma_sum == 0.0 else float("inf")
        return abs(self.gamma_sum - self.gamma_closed) / abs(self.gamma_closed)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


@dataclass
class StudyReport:
    kind: str
    config: ExperimentConfig
    rows: List[StudyRow] = field(default_factory=list)

    @property
    def columns(self):
        return CSV_COLUMNS if self.kind == "convergence" else GAMMA_COLUMNS

    def column(self, name) -> list:
        return [getattr(r, name) for r in self.rows]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            vals = []
            for c in self.columns:
                v = getattr(r, c)
                if c == "wall_ms":
                    vals.append(f"{v:.3f}" if timing else "0")
                else:
                    vals.append(_fmt(v))
            w.writerow(vals)
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> str:
        rows = []
        for r in self.rows:
            d = {c: getattr(r, c) for c in self.columns}
            if not timing:
                d["wall_ms"] = 0
            rows.append(d)
        doc = {"kind": self.kind, "config": config_to_dict(self.config), "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, out_dir, stem=None, timing: bool = True):
        os.makedirs(out_dir, exist_ok=True)
        stem = stem or self.kind
        csv_path = os.path.join(out_dir, f"{stem}.csv")
        json_path = os.path.join(out_dir, f"{stem}.json")
        with open(csv_path, "w") as fh:
            fh.write(self.to_csv(timing))
        with open(json_path, "w") as fh:
            fh.write(self.to_json(timing))
        return csv_path, json_path


def _closed_form_row(config: ExperimentConfig, eps: float, zeta_integral: float) -> StudyRow:
    spec = config.microstructure(eps)
    lattice = build_lattice(spec)
    r = hole_radius(spec)
    coeffs = coefficients(config, eps)
    if len(lattice) == 0:
        raise EmptyLatticeError(f"no inclusions for epsilon={eps}", key="epsilon_list")
    return StudyRow(
        eps=eps, n_holes=len(lattice), r=r, S_eps=finite_S(lattice, r, spec.dimension),
        q_bnd=q_boundary(AuxiliaryProfile.from_spec(spec)), eta=coeffs.eta,
        h_bar=coeffs.h_bar,
        gamma_sum=gamma_discrete_sum(spec, lattice, config.zeta, config.h, SPHERE_NODES),
        gamma_closed=gamma_closed_form(coeffs, zeta_integral))


def gamma_study(config: ExperimentConfig) -> StudyReport:
    """Discrete rim sums versus the closed-form limit for every epsilon."""
    _require_2d(config)
    zeta_integral = integrate(config, config.zeta)
    report = StudyReport("gamma", config)
    for eps in config.epsilon_list:
        t0 = time.perf_counter()
        row = _closed_form_row(config, eps, zeta_integral)
        row.wall_ms = 1e3 * (time.perf_counter() - t0)
        report.rows.append(row)
    return report


def convergence_study(config: ExperimentConfig, out_dir=None,
                      timing: bool = True) -> StudyReport:
    """Solve the perforated problem for each epsilon and measure its L2
    distance to the homogenized solution over the perforated domain.

    On failure the rows finished so far are written to ``out_dir`` (when
    given) before the error propagates.
    """
    _require_2d(config)
    zeta_integral = integrate(config, config.zeta)
    report = StudyReport("convergence", config)
    hom_cache: Dict[float, Solution] = {}
    hmesh = homogenized_mesh(config)
    try:
        for eps in config.epsilon_list:
            t0 = time.perf_counter()
            row = _closed_form_row(config, eps, zeta_integral)
            sol = solve_eps_problem(config, eps)
            if row.eta not in hom_cache:
                try:
                    hom_cache[row.eta] = solve_homogenized(config, epsilon=eps, mesh=hmesh)
                except NumericalError as exc:
                    raise StudyError(f"epsilon={eps}: {exc}", epsilon=eps) from exc
            hom = hom_cache[row.eta]
            row.l2_err = l2_error(sol.field, hom.field)
            row.cg_iters = sol.iterations
            row.wall_ms = 1e3 * (time.perf_counter() - t0)
            log.info("eps=%g holes=%d l2_err=%.6e iters=%d", eps, row.n_holes, row.l2_err,
                     row.cg_iters)
            report.rows.append(row)
    except Exception:
        if out_dir is not None:
            report.write(out_dir, stem="convergence_partial", timing=timing)
        raise
    if out_dir is not None:
        report.write(out_dir, timing=timing)
    return report


@dataclass(frozen=True)
class ConsistencyReport:
    c_g: float
    max_diff: float
    iterations_u: int
    iterations_v: int

    def to_dict(self):
        return asdict(self)


def kaizu_consistency(config: ExperimentConfig, c_g: float) -> ConsistencyReport:
    """Compare the homogenized solution with constant data ``c_g`` (on the
    outer boundary and as rim mean) against the homogeneous solution shifted
    by ``c_g``, on the same mesh."""
    mesh = homogenized_mesh(config)
    u = solve_homogenized(config, g_outer=constant(c_g), h_bar=c_g, mesh=mesh)
    v = solve_homogenized(config, g_outer=constant(0.0), h_bar=0.0, mesh=mesh)
    diff = float(np.max(np.abs(u.field.values - (v.field.values + c_g))))
    return ConsistencyReport(float(c_g), diff, u.iterations, v.iterations)
