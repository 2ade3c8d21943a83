"""The fidelity term, the double-integral regularizer and their assembly.

The continuous functional is
    F(w) = int d^p(w, v) dx + alpha * intint d^p(w(x), w(y))
           / |x - y|^{k + p s} * rho^l(x - y) d(x, y)
discretized by midpoint (Riemann) quadrature on the cell-centered grid.
Pairwise weights are precomputed once into a KernelTable; the diagonal
x = y is excluded and, for l = 1, pairs beyond the mollifier cutoff
radius are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.spatial import cKDTree

from .field import AngleField, GridSpec, Mask
from .geometry import Metric
from .mollifier import MollifierSpec, cutoff_radius, mollifier_eval

__all__ = [
    "FunctionalParams",
    "KernelTable",
    "fidelity",
    "build_kernel",
    "regularizer",
    "functional_eval",
    "fractional_seminorm",
    "param_change_inequality_check",
]


@dataclass(frozen=True)
class FunctionalParams:
    """Full parameterization (p, s, k, l, alpha) plus metric and mollifier."""

    p: float
    s: float
    k: float
    l: int
    alpha: float
    metric: Metric
    mollifier: MollifierSpec = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if not 0 < self.s <= 1:
            raise ValueError("s must lie in (0, 1]")
        if self.s == 1 and self.k != 0:
            raise ValueError("s=1 requires k=0")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.l not in (0, 1):
            raise ValueError("l must be 0 or 1")
        if self.l == 1 and self.mollifier is None:
            raise ValueError("l=1 requires a mollifier")
        if self.l == 0 and self.mollifier is not None:
            raise ValueError("l=0 admits no mollifier (rho factor is 1)")
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class KernelTable:
    """Truncated pairwise weights on a grid, stored once per (i < j) pair.

    weight = h^{2N} * rho_eps(r_ij)^l / r_ij^{k + p s}.
    """

    grid: GridSpec
    i: np.ndarray = dc_field(repr=False)
    j: np.ndarray = dc_field(repr=False)
    w: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        for name in ("i", "j", "w"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def npairs(self) -> int:
        return len(self.w)


def build_kernel(grid: GridSpec, params: FunctionalParams, trunc_tol: float = 1e-12) -> KernelTable:
    """Assemble the pairwise weight table for the regularizer on this grid."""
    if params.s == 1 and params.l == 0:
        raise ValueError("s=1 with l=0 has no finite kernel representation")
    if params.k > grid.ndim:
        raise ValueError(f"k={params.k} exceeds the grid dimension {grid.ndim}")
    if params.l == 1 and params.mollifier.dim != grid.ndim:
        raise ValueError("mollifier dimension does not match the grid")
    coords = grid.coords()
    n = grid.npoints
    if params.l == 1:
        cutoff = cutoff_radius(params.mollifier, trunc_tol)
        pairs = cKDTree(coords).query_pairs(r=cutoff, output_type="ndarray")
        if len(pairs):
            order = np.lexsort((pairs[:, 1], pairs[:, 0]))
            pairs = pairs[order]
        ii, jj = pairs[:, 0], pairs[:, 1]
    else:
        ii, jj = np.triu_indices(n, k=1)
    r = np.linalg.norm(coords[ii] - coords[jj], axis=1)
    quad = grid.cell_volume ** 2
    w = quad / r ** (params.k + params.p * params.s)
    if params.l == 1:
        w = w * mollifier_eval(params.mollifier, r)
        keep = w > 0
        ii, jj, w = ii[keep], jj[keep], w[keep]
    return KernelTable(grid, ii.astype(np.int64), jj.astype(np.int64), w)


def _check_same_grid(a: GridSpec, b: GridSpec):
    if a != b:
        raise ValueError("fields do not share a grid")


def fidelity(phi: AngleField, nu: AngleField, metric: Metric, p: float, mask: Mask = None) -> float:
    """p-th power of the metric fidelity, h^N * sum_known d^p(phi_i, nu_i)."""
    _check_same_grid(phi.grid, nu.grid)
    d = metric.dist(phi.flat, nu.flat)
    if mask is not None:
        _check_same_grid(phi.grid, mask.grid)
        d = d[mask.flat]
    return float(phi.grid.cell_volume * np.sum(d ** p))


def regularizer(u: AngleField, kernel: KernelTable, metric: Metric, p: float) -> float:
    """Symmetric double-integral value; factor 2 restores the i > j half."""
    _check_same_grid(u.grid, kernel.grid)
    vals = u.flat
    d = metric.dist(vals[kernel.i], vals[kernel.j])
    return float(2.0 * np.sum(kernel.w * d ** p))


def functional_eval(
    u: AngleField,
    data: AngleField,
    mask: Mask,
    params: FunctionalParams,
    kernel: KernelTable,
) -> float:
    """Fidelity plus alpha times the regularizer."""
    fid = fidelity(u, data, params.metric, params.p, mask)
    return fid + params.alpha * regularizer(u, kernel, params.metric, params.p)


def fractional_seminorm(u: AngleField, metric: Metric, p: float, s: float) -> float:
    """p-th power of the discrete Gagliardo seminorm (k = N, l = 0 kernel)."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    params = FunctionalParams(p=p, s=s, k=u.grid.ndim, l=0, alpha=1.0, metric=metric)
    kernel = build_kernel(u.grid, params)
    return regularizer(u, kernel, metric, p)


def param_change_inequality_check(
    u: AngleField,
    v_star: AngleField,
    v_diamond: AngleField,
    params: FunctionalParams,
    kernel: KernelTable,
    rel_tol: float = 1e-12,
) -> bool:
    """Check F^{v*}(u) <= 2^{p-1} F^{v<>}(u) + 2^{p-1} d_fid(v<>, v*)^p."""
    p = params.p
    lhs = functional_eval(u, v_star, None, params, kernel)
    rhs = 2 ** (p - 1) * (
        functional_eval(u, v_diamond, None, params, kernel)
        + fidelity(v_diamond, v_star, params.metric, p)
    )
    return lhs <= rhs * (1 + rel_tol) + rel_tol
