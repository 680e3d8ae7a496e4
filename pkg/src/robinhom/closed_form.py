"""Closed-form homogenization quantities for periodically arranged balls.

The auxiliary profile ``q`` equals 1 outside the eps-ball around each centre,
is radially harmonic in the annulus ``r <= rho <= eps`` and satisfies the
homogeneous Robin condition on the hole rim (normal pointing into the hole).
Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import EmptyLatticeError, ValidationError
from .functions import AnalyticFunction
from .geometry import Lattice, MicrostructureSpec, hole_radius


@dataclass(frozen=True)
class AuxiliaryProfile:
    epsilon: float
    radius: float
    alpha: float
    dimension: int = 2

    def __post_init__(self):
        if not 0 < self.radius < self.epsilon:
            raise ValidationError("profile needs 0 < radius < epsilon", key="radius")
        if not self.alpha >= 0:
            raise ValidationError("alpha must be >= 0", key="alpha")
        if self.dimension < 2:
            raise ValidationError("dimension must be >= 2", key="dimension")

    @classmethod
    def from_spec(cls, spec: MicrostructureSpec) -> "AuxiliaryProfile":
        return cls(spec.epsilon, hole_radius(spec), spec.alpha, spec.dimension)


@dataclass(frozen=True)
class HomogenizedCoefficients:
    eta: float
    source_shift: float
    alpha: float
    S: float
    omega_N: float
    h_bar: float

    @classmethod
    def build(cls, alpha, S, N, domain_area, h_bar=0.0) -> "HomogenizedCoefficients":
        eta = eta_coefficient(alpha, S, N, domain_area)
        return cls(eta=eta, source_shift=eta * h_bar, alpha=alpha, S=S,
                   omega_N=omega_n(N), h_bar=h_bar)


def omega_n(N: int) -> float:
    """Surface measure of the unit sphere in R^N."""
    if N < 2:
        raise ValidationError("omega_n needs N >= 2", key="dimension")
    return 2.0 * math.pi ** (N / 2) / math.gamma(N / 2)


def _denominator(p: AuxiliaryProfile) -> float:
    r, eps, a, n = p.radius, p.epsilon, p.alpha, p.dimension
    if n == 2:
        return 1.0 + a * r * math.log(eps / r)
    return 1.0 + a * r / (n - 2) * (1.0 - (r / eps) ** (n - 2))


def q_boundary(profile: AuxiliaryProfile) -> float:
    """Constant trace of the auxiliary profile on the hole rim, in (0, 1]."""
    return 1.0 / _denominator(profile)


def q_profile(profile: AuxiliaryProfile, rho: float) -> float:
    r, eps, a, n = profile.radius, profile.epsilon, profile.alpha, profile.dimension
    if rho < r:
        raise ValidationError(f"rho={rho!r} lies inside the hole (r={r!r})", key="rho")
    if rho >= eps:
        return 1.0
    if n == 2:
        num = 1.0 + a * r * math.log(rho / r)
    else:
        num = 1.0 + a * r / (n - 2) * (1.0 - (r / rho) ** (n - 2))
    return num / _denominator(profile)


def q_profile_derivative(profile: AuxiliaryProfile, rho: float) -> float:
    """Analytic d q / d rho on the annulus."""
    r, eps, a, n = profile.radius, profile.epsilon, profile.alpha, profile.dimension
    if rho < r:
        raise ValidationError("rho inside the hole", key="rho")
    if rho > eps:
        return 0.0
    if n == 2:
        return a * r / rho / _denominator(profile)
    return a * r * (r / rho) ** (n - 2) / rho / _denominator(profile)


def robin_residual_at_hole(profile: AuxiliaryProfile) -> float:
    """``dq/dn + alpha*q`` at the rim; the normal points toward the centre,
    so ``dq/dn = -dq/drho``."""
    r = profile.radius
    return -q_profile_derivative(profile, r) + profile.alpha * q_profile(profile, r)


def eta_coefficient(alpha: float, S: float, N: int, domain_area: float) -> float:
    """Strange-term coefficient ``alpha * S * omega_N / |Omega|``."""
    if not domain_area > 0:
        raise ValidationError("domain_area must be positive", key="domain")
    if S < 0 or alpha < 0:
        raise ValidationError("alpha and S must be non-negative")
    return alpha * S * omega_n(N) / domain_area


SphereData = Union[AnalyticFunction, Callable[[np.ndarray], np.ndarray]]


def circle_nodes(M: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(M) / M
    return np.column_stack([np.cos(theta), np.sin(theta)])


def _sphere_eval(h: SphereData, m: np.ndarray) -> np.ndarray:
    if isinstance(h, AnalyticFunction):
        return np.broadcast_to(h.on_sphere(m), m.shape[:-1])
    return np.broadcast_to(np.asarray(h(m), dtype=float), m.shape[:-1])


def h_mean(h: SphereData, N: int = 2, M: int = 64) -> float:
    """Spherical mean of ``h`` by the M-point trapezoid rule on the circle.

    Constants are exact in every dimension; non-constant data is only
    supported for N=2.
    """
    if M < 4:
        raise ValidationError("h_mean needs M >= 4 nodes", key="M")
    if isinstance(h, AnalyticFunction) and h.is_constant:
        return h.params[0]
    if N != 2:
        raise ValidationError("spherical quadrature is only implemented for N=2",
                              key="dimension")
    return float(np.mean(_sphere_eval(h, circle_nodes(M))))


def gamma_closed_form(coeffs: HomogenizedCoefficients, zeta_integral: float) -> float:
    return coeffs.eta * coeffs.h_bar * zeta_integral


def gamma_discrete_sum(spec: MicrostructureSpec, lattice: Lattice,
                       zeta: AnalyticFunction, g: SphereData, M: int = 64) -> float:
    """``alpha * q_bnd * r * sum_x  int_{S^1} zeta(x + r m) g(m) dm`` with an
    M-point trapezoid rule on each circle."""
    if spec.dimension != 2:
        raise ValidationError("gamma_discrete_sum is implemented for N=2", key="dimension")
    if M < 8:
        raise ValidationError("gamma_discrete_sum needs M >= 8", key="M")
    if len(lattice) == 0:
        raise EmptyLatticeError("no inclusions: the lattice is empty", key="epsilon_list")
    r = hole_radius(spec)
    qb = q_boundary(AuxiliaryProfile.from_spec(spec))
    m = circle_nodes(M)
    gm = _sphere_eval(g, m)
    centers = np.asarray(lattice.centers, dtype=float)
    px = centers[:, 0:1] + r * m[None, :, 0]
    py = centers[:, 1:2] + r * m[None, :, 1]
    z = np.broadcast_to(zeta(px, py), px.shape)
    per_hole = (2.0 * np.pi / M) * np.sum(z * gm[None, :], axis=1)
    # per-hole sums accumulated in lattice order
    total = 0.0
    for s in per_hole:
        total += float(s)
    return spec.alpha * qb * r ** (spec.dimension - 1) * total
