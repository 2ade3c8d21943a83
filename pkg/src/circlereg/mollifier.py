"""Radially symmetric mollifier families rho_eps.

Profiles are defined through a radial shape rho_hat scaled as
rho_eps(x) = eps^{-N} rho_hat(|x|/eps), with rho_hat normalized so the
family has unit mass in R^N.  The Gaussian profile uses
rho_hat(t) = c_N exp(-t^2); the compactly supported bump uses
rho_hat(t) = c_N exp(-1/(1-t^2)) on t < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import erfc

__all__ = ["MollifierSpec", "mollifier_eval", "total_mass", "tail_mass", "cutoff_radius"]

PROFILES = ("gaussian", "bump")


def _sphere_area(dim: int) -> float:
    """Surface measure of S^{N-1}: 2 for N=1, 2*pi for N=2."""
    return 2.0 if dim == 1 else 2.0 * math.pi


def _bump_shape(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = t < 1.0
    ti = t[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ti * ti))
    return out


@lru_cache(maxsize=None)
def _norm_constant(profile: str, dim: int) -> float:
    """c_N with |S^{N-1}| * int t^{N-1} rho_hat(t) dt = 1."""
    if profile == "gaussian":
        # int t^{N-1} e^{-t^2} dt = sqrt(pi)/2 (N=1), 1/2 (N=2)
        radial = math.sqrt(math.pi) / 2.0 if dim == 1 else 0.5
    else:
        radial, _ = quad(lambda t: t ** (dim - 1) * float(_bump_shape(t)), 0.0, 1.0)
    return 1.0 / (_sphere_area(dim) * radial)


@dataclass(frozen=True)
class MollifierSpec:
    """One member of a Dirac family: profile, scale eps and dimension."""

    profile: str
    epsilon: float
    dim: int

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError("epsilon must be positive")
        if self.dim not in (1, 2):
            raise ValueError("dim must be 1 or 2")

    @property
    def norm_constant(self) -> float:
        return _norm_constant(self.profile, self.dim)

    def shape(self, t):
        """Normalized radial shape rho_hat(t) = c_N * profile(t)."""
        t = np.asarray(t, dtype=float)
        if self.profile == "gaussian":
            return self.norm_constant * np.exp(-t * t)
        return self.norm_constant * _bump_shape(t)


def mollifier_eval(spec: MollifierSpec, r):
    """Density rho_eps at radius r >= 0."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    val = spec.shape(r / spec.epsilon) / spec.epsilon ** spec.dim
    if val.shape == ():
        return float(val)
    return val


def total_mass(spec: MollifierSpec) -> float:
    """Radial quadrature of the full mass; equals 1 up to quadrature error."""
    surf = _sphere_area(spec.dim)
    upper = 1.0 if spec.profile == "bump" else np.inf
    val, _ = quad(
        lambda t: t ** (spec.dim - 1) * float(spec.shape(np.asarray(t))), 0.0, upper
    )
    return surf * val


def tail_mass(spec: MollifierSpec, delta: float) -> float:
    """Mass outside the ball of radius delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    x = delta / spec.epsilon
    if spec.profile == "gaussian":
        # closed forms: erfc(x) for N=1, exp(-x^2) for N=2
        return float(erfc(x)) if spec.dim == 1 else float(np.exp(-x * x))
    if x >= 1.0:
        return 0.0
    surf = _sphere_area(spec.dim)
    val, _ = quad(lambda t: t ** (spec.dim - 1) * float(spec.shape(np.asarray(t))), x, 1.0)
    return surf * val


def cutoff_radius(spec: MollifierSpec, tol: float) -> float:
    """Smallest radius beyond which rho_eps drops below tol * rho_eps(0)."""
    if not 0 < tol <= 1:
        raise ValueError("tol must lie in (0, 1]")
    if spec.profile == "bump":
        return spec.epsilon
    return spec.epsilon * math.sqrt(math.log(1.0 / tol))
