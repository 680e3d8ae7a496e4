"""Catalog of closed-form data functions (sources, boundary data, test
functions).

Planar kinds are evaluated at points of the plane; sphere-trace kinds are
evaluated at unit vectors ``m`` and describe the data on a hole rim in the
local angle of that hole.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ValidationError

# kind -> (parameter count, domain)
CATALOG = {
    "constant": (1, "plane"),
    "linear": (3, "plane"),
    "cosine_product": (3, "plane"),
    "sphere_trace_constant": (1, "sphere"),
    "sphere_trace_first_harmonic": (3, "sphere"),
}


@dataclass(frozen=True)
class AnalyticFunction:
    """A catalog entry with its parameters.

    ``constant [c]``                      c
    ``linear [a, b, c]``                  a + b*x + c*y
    ``cosine_product [A, k, l]``          A*cos(k*pi*x)*cos(l*pi*y)
    ``sphere_trace_constant [c]``         c on the unit circle
    ``sphere_trace_first_harmonic [c0, a, b]``  c0 + a*m1 + b*m2
    """

    kind: str
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in CATALOG:
            raise ValidationError(f"unknown function kind {self.kind!r}", key="kind")
        params = tuple(float(p) for p in self.params)
        if len(params) != CATALOG[self.kind][0]:
            raise ValidationError(
                f"{self.kind} takes {CATALOG[self.kind][0]} parameters, got {len(params)}",
                key="params")
        if not all(np.isfinite(params)):
            raise ValidationError("function parameters must be finite", key="params")
        object.__setattr__(self, "params", params)

    @property
    def domain(self) -> str:
        return CATALOG[self.kind][1]

    @property
    def is_planar(self) -> bool:
        return self.domain == "plane"

    @property
    def is_sphere_trace(self) -> bool:
        return self.domain == "sphere"

    @property
    def is_constant(self) -> bool:
        return self.kind in ("constant", "sphere_trace_constant")

    def __call__(self, x, y):
        """Evaluate a planar function; broadcasts over numpy arrays."""
        if not self.is_planar:
            raise ValidationError(f"{self.kind} is a sphere trace, not a planar function")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        p = self.params
        if self.kind == "constant":
            return np.full(np.broadcast(x, y).shape, p[0])
        if self.kind == "linear":
            return p[0] + p[1] * x + p[2] * y
        return p[0] * np.cos(p[1] * np.pi * x) * np.cos(p[2] * np.pi * y)

    def on_sphere(self, m):
        """Evaluate a sphere trace at unit vectors ``m`` of shape (..., N)."""
        if not self.is_sphere_trace:
            raise ValidationError(f"{self.kind} is planar, not a sphere trace")
        m = np.asarray(m, dtype=float)
        p = self.params
        if self.kind == "sphere_trace_constant":
            return np.full(m.shape[:-1], p[0])
        return p[0] + p[1] * m[..., 0] + p[2] * m[..., 1]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": list(self.params)}

    @classmethod
    def from_dict(cls, d) -> "AnalyticFunction":
        return cls(d["kind"], tuple(d.get("params", ())))


def constant(c: float) -> AnalyticFunction:
    return AnalyticFunction("constant", (c,))


def sphere_constant(c: float) -> AnalyticFunction:
    return AnalyticFunction("sphere_trace_constant", (c,))
