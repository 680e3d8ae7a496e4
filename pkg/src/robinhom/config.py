"""Experiment configuration: dataclasses plus a strict JSON schema.

Every key is optional; unknown keys are rejected so that typos cannot
silently fall back to defaults.  Defaults::

    domain               {"xmin": 0, "xmax": 1, "ymin": 0, "ymax": 1}
    alpha                1.0
    dimension            2
    radius_coefficient   1.0
    epsilon_list         [0.25, 0.125, 0.0625]
    f                    {"kind": "constant", "params": [1]}
    g_outer              {"kind": "constant", "params": [0]}
    h                    {"kind": "sphere_trace_constant", "params": [0]}
    zeta                 {"kind": "constant", "params": [1]}
    mesh                 {"h_far": 0.03125, "min_segments": 16}
    solver               {"rel_tol": 1e-10, "max_iter": null}   (null: 20*sqrt(n))
    s_mode               "limit"   ("limit" or "finite")
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Tuple

from .errors import ValidationError
from .functions import AnalyticFunction, constant, sphere_constant
from .geometry import DomainSpec, MicrostructureSpec

S_MODES = ("limit", "finite")


@dataclass(frozen=True)
class MeshControls:
    h_far: float = 1.0 / 32.0
    min_segments: int = 16


@dataclass(frozen=True)
class SolverControls:
    rel_tol: float = 1e-10
    max_iter: Optional[int] = None


@dataclass(frozen=True)
class ExperimentConfig:
    domain: DomainSpec = field(default_factory=DomainSpec)
    alpha: float = 1.0
    dimension: int = 2
    radius_coefficient: float = 1.0
    epsilon_list: Tuple[float, ...] = (0.25, 0.125, 0.0625)
    f: AnalyticFunction = field(default_factory=lambda: constant(1.0))
    g_outer: AnalyticFunction = field(default_factory=lambda: constant(0.0))
    h: AnalyticFunction = field(default_factory=lambda: sphere_constant(0.0))
    zeta: AnalyticFunction = field(default_factory=lambda: constant(1.0))
    mesh: MeshControls = field(default_factory=MeshControls)
    solver: SolverControls = field(default_factory=SolverControls)
    s_mode: str = "limit"

    def __post_init__(self):
        object.__setattr__(self, "epsilon_list", tuple(float(e) for e in self.epsilon_list))
        validate(self)

    def microstructure(self, epsilon: float) -> MicrostructureSpec:
        return MicrostructureSpec(epsilon=epsilon, alpha=self.alpha, dimension=self.dimension,
                                  radius_coefficient=self.radius_coefficient,
                                  domain=self.domain)

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def validate(cfg: ExperimentConfig) -> None:
    if not (math.isfinite(cfg.alpha) and cfg.alpha >= 0):
        raise ValidationError("alpha must be a finite number >= 0", key="alpha")
    if not (isinstance(cfg.dimension, int) and cfg.dimension >= 2):
        raise ValidationError("dimension must be an integer >= 2", key="dimension")
    if cfg.dimension != cfg.domain.dimension:
        raise ValidationError("domain dimension does not match 'dimension'", key="dimension")
    if not (math.isfinite(cfg.radius_coefficient) and cfg.radius_coefficient > 0):
        raise ValidationError("radius_coefficient must be positive", key="radius_coefficient")
    eps = cfg.epsilon_list
    if not eps:
        raise ValidationError("epsilon_list must not be empty", key="epsilon_list")
    if any(not (math.isfinite(e) and e > 0) for e in eps):
        raise ValidationError("epsilon_list entries must be positive", key="epsilon_list")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValidationError("epsilon_list must be strictly decreasing", key="epsilon_list")
    for e in eps:
        r = cfg.radius_coefficient * e ** (cfg.dimension / (cfg.dimension - 1))
        if not r < e:
            raise ValidationError(f"radius {r} >= epsilon {e}", key="radius_coefficient")
    for name in ("f", "g_outer", "zeta"):
        if not getattr(cfg, name).is_planar:
            raise ValidationError(f"{name} must be a planar function", key=name)
    if not cfg.h.is_sphere_trace:
        raise ValidationError("h must be a sphere_trace_* function", key="h")
    if not (math.isfinite(cfg.mesh.h_far) and cfg.mesh.h_far > 0):
        raise ValidationError("h_far must be positive", key="mesh.h_far")
    if not (isinstance(cfg.mesh.min_segments, int) and cfg.mesh.min_segments >= 3):
        raise ValidationError("min_segments must be an integer >= 3", key="mesh.min_segments")
    if not 0 < cfg.solver.rel_tol < 1:
        raise ValidationError("rel_tol must lie in (0, 1)", key="solver.rel_tol")
    if cfg.solver.max_iter is not None and not (
            isinstance(cfg.solver.max_iter, int) and cfg.solver.max_iter > 0):
        raise ValidationError("max_iter must be a positive integer or null",
                              key="solver.max_iter")
    if cfg.s_mode not in S_MODES:
        raise ValidationError(f"s_mode must be one of {S_MODES}", key="s_mode")


# -- JSON mapping --------------------------------------------------------------

_TOP_KEYS = {"domain", "alpha", "dimension", "radius_coefficient", "epsilon_list", "f",
             "g_outer", "h", "zeta", "mesh", "solver", "s_mode"}


def _check_keys(d, allowed, path):
    if not isinstance(d, dict):
        raise ValidationError(f"{path or 'config'} must be a JSON object", key=path or None)
    for k in d:
        if k not in allowed:
            where = f"{path}.{k}" if path else k
            raise ValidationError(f"unknown key {where!r}", key=where)


def _number(value, path, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path} must be a number", key=path)
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ValidationError(f"{path} must be an integer", key=path)
        return int(value)
    return float(value)


def _function(d, path) -> AnalyticFunction:
    _check_keys(d, {"kind", "params"}, path)
    if "kind" not in d:
        raise ValidationError(f"{path}.kind is required", key=f"{path}.kind")
    params = d.get("params", [])
    if not isinstance(params, list):
        raise ValidationError(f"{path}.params must be a list", key=f"{path}.params")
    params = [_number(p, f"{path}.params[{i}]") for i, p in enumerate(params)]
    try:
        return AnalyticFunction(d["kind"], tuple(params))
    except ValidationError as exc:
        raise ValidationError(str(exc), key=f"{path}.{exc.key or 'kind'}") from None


def config_from_dict(d: dict) -> ExperimentConfig:
    _check_keys(d, _TOP_KEYS, "")
    kw: dict[str, Any] = {}
    if "domain" in d:
        _check_keys(d["domain"], {"xmin", "xmax", "ymin", "ymax"}, "domain")
        dom = {k: _number(v, f"domain.{k}") for k, v in d["domain"].items()}
        kw["domain"] = DomainSpec(**dom)
    for k in ("alpha", "radius_coefficient"):
        if k in d:
            kw[k] = _number(d[k], k)
    if "dimension" in d:
        kw["dimension"] = _number(d["dimension"], "dimension", integer=True)
        if kw["dimension"] != 2:
            raise ValidationError("experiments support dimension 2 only", key="dimension")
    if "epsilon_list" in d:
        if not isinstance(d["epsilon_list"], list):
            raise ValidationError("epsilon_list must be a list", key="epsilon_list")
        kw["epsilon_list"] = tuple(_number(e, f"epsilon_list[{i}]")
                                   for i, e in enumerate(d["epsilon_list"]))
    for k in ("f", "g_outer", "h", "zeta"):
        if k in d:
            kw[k] = _function(d[k], k)
    if "mesh" in d:
        _check_keys(d["mesh"], {"h_far", "min_segments"}, "mesh")
        m = d["mesh"]
        kw["mesh"] = MeshControls(
            h_far=_number(m.get("h_far", MeshControls.h_far), "mesh.h_far"),
            min_segments=_number(m.get("min_segments", MeshControls.min_segments),
                                 "mesh.min_segments", integer=True))
    if "solver" in d:
        _check_keys(d["solver"], {"rel_tol", "max_iter"}, "solver")
        s = d["solver"]
        max_iter = s.get("max_iter")
        kw["solver"] = SolverControls(
            rel_tol=_number(s.get("rel_tol", SolverControls.rel_tol), "solver.rel_tol"),
            max_iter=None if max_iter is None else _number(max_iter, "solver.max_iter",
                                                           integer=True))
    if "s_mode" in d:
        kw["s_mode"] = d["s_mode"]
    return ExperimentConfig(**kw)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "domain": {"xmin": cfg.domain.xmin, "xmax": cfg.domain.xmax,
                   "ymin": cfg.domain.ymin, "ymax": cfg.domain.ymax},
        "alpha": cfg.alpha,
        "dimension": cfg.dimension,
        "radius_coefficient": cfg.radius_coefficient,
        "epsilon_list": list(cfg.epsilon_list),
        "f": cfg.f.to_dict(),
        "g_outer": cfg.g_outer.to_dict(),
        "h": cfg.h.to_dict(),
        "zeta": cfg.zeta.to_dict(),
        "mesh": {"h_far": cfg.mesh.h_far, "min_segments": cfg.mesh.min_segments},
        "solver": {"rel_tol": cfg.solver.rel_tol, "max_iter": cfg.solver.max_iter},
        "s_mode": cfg.s_mode,
    }


def apply_overrides(d: dict, overrides) -> dict:
    """Apply ``key.path=value`` strings; values are parsed as JSON when
    possible, otherwise kept as strings."""
    d = json.loads(json.dumps(d))
    for item in overrides or ():
        if "=" not in item:
            raise ValidationError(f"override {item!r} is not key=value", key=item)
        path, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = d
        parts = path.strip().split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ValidationError(f"cannot override inside {p!r}", key=path)
        node[parts[-1]] = value
    return d


def load_config(path, overrides=()) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file {path} does not exist", key="config") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path} is not valid JSON: {exc}",
                              key="config") from None
    return config_from_dict(apply_overrides(raw, overrides))
