"""Periodic microstructure: lattice of hole centres, hole radii, hole density.

The lattice is anchored at the origin, i.e. candidate centres are the points
of ``2*eps*Z^N``; a candidate is kept when its distance to the boundary of
the box is at least ``eps``.  Counts therefore depend on where the box sits
relative to the origin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import ValidationError

# Relative slack for the closed inequality dist >= eps; absorbs round-off in
# k*2*eps so that exact ties are kept.
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DomainSpec:
    """Axis-aligned box.  The first two axes are x and y; ``extra_bounds``
    adds further (lo, hi) pairs for N >= 3 coefficient computations."""

    xmin: float = 0.0
    xmax: float = 1.0
    ymin: float = 0.0
    ymax: float = 1.0
    extra_bounds: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValidationError("domain bounds must be finite", key="domain")
            if not hi > lo:
                raise ValidationError(
                    f"domain upper bound {hi} must exceed lower bound {lo}", key="domain")

    @property
    def bounds(self) -> Tuple[Tuple[float, float], ...]:
        return ((self.xmin, self.xmax), (self.ymin, self.ymax)) + tuple(
            (float(lo), float(hi)) for lo, hi in self.extra_bounds)

    @property
    def dimension(self) -> int:
        return 2 + len(self.extra_bounds)

    @property
    def area(self) -> float:
        """Lebesgue measure of the box (area for N=2, volume otherwise)."""
        return math.prod(hi - lo for lo, hi in self.bounds)

    @property
    def side_lengths(self) -> Tuple[float, ...]:
        return tuple(hi - lo for lo, hi in self.bounds)

    def contains(self, p, *, strict=True) -> bool:
        if strict:
            return all(lo < x < hi for x, (lo, hi) in zip(p, self.bounds))
        return all(lo <= x <= hi for x, (lo, hi) in zip(p, self.bounds))

    def boundary_distance(self, p) -> float:
        """Distance from an interior point to the boundary of the box."""
        return min(min(x - lo, hi - x) for x, (lo, hi) in zip(p, self.bounds))

    @classmethod
    def unit_box(cls, dimension: int = 2) -> "DomainSpec":
        return cls(extra_bounds=((0.0, 1.0),) * (dimension - 2))


@dataclass(frozen=True)
class MicrostructureSpec:
    epsilon: float
    alpha: float = 1.0
    dimension: int = 2
    radius_coefficient: float = 1.0
    domain: Optional[DomainSpec] = None

    def __post_init__(self):
        if not (isinstance(self.dimension, int) and self.dimension >= 2):
            raise ValidationError("dimension must be an integer >= 2", key="dimension")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError("epsilon must be positive", key="epsilon")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValidationError("alpha must be >= 0", key="alpha")
        if not (math.isfinite(self.radius_coefficient) and self.radius_coefficient > 0):
            raise ValidationError("radius_coefficient must be positive",
                                  key="radius_coefficient")
        if self.domain is None:
            object.__setattr__(self, "domain", DomainSpec.unit_box(self.dimension))
        r = _radius(self)
        if not r < self.epsilon:
            raise ValidationError(
                f"hole radius {r!r} is not smaller than epsilon {self.epsilon!r}",
                key="radius_coefficient")

    @property
    def radius(self) -> float:
        return _radius(self)


@dataclass(frozen=True)
class Lattice:
    centers: Tuple[Tuple[float, ...], ...]
    epsilon: float

    def __len__(self):
        return len(self.centers)

    def __iter__(self):
        return iter(self.centers)


@dataclass(frozen=True)
class Hole:
    center: Tuple[float, float]
    radius: float


def _radius(spec: MicrostructureSpec) -> float:
    n = spec.dimension
    return spec.radius_coefficient * spec.epsilon ** (n / (n - 1))


def hole_radius(spec: MicrostructureSpec) -> float:
    """``c_r * eps**(N/(N-1))``."""
    r = _radius(spec)
    if r >= spec.epsilon:
        raise ValidationError("radius law violates r < epsilon", key="radius_coefficient")
    return r


def _axis_indices(lo: float, hi: float, eps: float) -> range:
    step = 2.0 * eps
    slack = TIE_TOLERANCE * max(eps, abs(lo), abs(hi))
    kmin = math.ceil((lo + eps) / step) - 1
    kmax = math.floor((hi - eps) / step) + 1
    keep = [k for k in range(kmin, kmax + 1)
            if k * step - lo >= eps - slack and hi - k * step >= eps - slack]
    if not keep:
        return range(0)
    return range(keep[0], keep[-1] + 1)


def build_lattice(spec: MicrostructureSpec) -> Lattice:
    """Centres of ``2 eps Z^N`` at distance >= eps from the boundary, sorted
    lexicographically."""
    domain = spec.domain
    if domain.dimension != spec.dimension:
        raise ValidationError(
            f"domain has dimension {domain.dimension}, spec has {spec.dimension}",
            key="domain")
    step = 2.0 * spec.epsilon
    axes = [_axis_indices(lo, hi, spec.epsilon) for lo, hi in domain.bounds]
    centers = tuple(tuple(k * step for k in idx) for idx in itertools.product(*axes))
    return Lattice(centers=centers, epsilon=spec.epsilon)


def holes_for(spec: MicrostructureSpec, lattice: Optional[Lattice] = None) -> list:
    lattice = build_lattice(spec) if lattice is None else lattice
    r = hole_radius(spec)
    return [Hole(center=(c[0], c[1]), radius=r) for c in lattice.centers]


def finite_S(lattice: Lattice, radius: float, N: int) -> float:
    """Finite-epsilon hole density ``|L_eps| * r**(N-1)``."""
    return len(lattice.centers) * radius ** (N - 1)


def limit_S(spec: MicrostructureSpec) -> float:
    """Limit of ``finite_S`` for the lattice density ``|Omega| / (2 eps)**N``."""
    n = spec.dimension
    return spec.domain.area * spec.radius_coefficient ** (n - 1) / 2 ** n


def point_in_perforated_domain(p: Sequence[float], lattice: Lattice, radius: float,
                               domain: Optional[DomainSpec] = None) -> bool:
    """True iff ``p`` is in the open box and outside every closed hole."""
    domain = domain if domain is not None else DomainSpec.unit_box(len(p))
    if not domain.contains(p, strict=True):
        return False
    r2 = radius * radius
    for c in lattice.centers:
        if sum((a - b) ** 2 for a, b in zip(p, c)) <= r2:
            return False
    return True
