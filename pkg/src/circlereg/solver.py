"""Analytic gradient of the lifted functional and fixed-step gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import FunctionalParams, KernelTable, functional_eval
from .field import AngleField, Mask, canonicalize_angle

__all__ = ["DescentConfig", "NumericalError", "gradient", "descend"]


class NumericalError(RuntimeError):
    """Raised when the descent produces a non-finite energy or iterate."""


@dataclass(frozen=True)
class DescentConfig:
    steps: int
    step_size: float
    record_energy_every: int = 50

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not (np.isfinite(self.step_size) and self.step_size > 0):
            raise ValueError("step_size must be positive")
        if self.record_energy_every < 1:
            raise ValueError("record_energy_every must be >= 1")


def default_step_size(grid) -> float:
    """Heuristic fixed step, scaled so the fidelity force is grid independent."""
    return 1e-3 / grid.cell_volume


def gradient(
    u: AngleField,
    data: AngleField,
    mask: Mask,
    params: FunctionalParams,
    kernel: KernelTable,
) -> np.ndarray:
    """Gradient of the discrete functional with respect to the angles (flat)."""
    p = params.p
    if p <= 1:
        raise ValueError("gradient requires p > 1 (p = 1 is nonsmooth)")
    metric = params.metric
    uv = u.flat
    dv = data.flat

    d_fid = metric.dist(uv, dv)
    g = p * d_fid ** (p - 1) * metric.ddist(uv, dv) * u.grid.cell_volume
    if mask is not None:
        if mask.grid != u.grid:
            raise ValueError("mask does not share the field's grid")
        g = np.where(mask.flat, g, 0.0)

    ui, uj = uv[kernel.i], uv[kernel.j]
    d = metric.dist(ui, uj)
    scale = 2.0 * params.alpha * p * kernel.w * d ** (p - 1)
    np.add.at(g, kernel.i, scale * metric.ddist(ui, uj))
    np.add.at(g, kernel.j, scale * metric.ddist(uj, ui))
    return g


def descend(
    u0: AngleField,
    data: AngleField,
    mask: Mask,
    params: FunctionalParams,
    kernel: KernelTable,
    cfg: DescentConfig,
):
    """Fixed-step gradient descent; returns the final field and energy trace.

    The trace holds (step, energy) at the recording interval plus the final
    step; it is reported even when non-monotone (a fixed step may overshoot).
    """
    u = u0.flat.copy()
    trace = []

    def record(step, vals):
        e = functional_eval(u0.with_values(vals), data, mask, params, kernel)
        if not np.isfinite(e):
            raise NumericalError(f"non-finite energy at step {step}")
        trace.append((step, e))

    record(0, u)
    for t in range(1, cfg.steps + 1):
        g = gradient(u0.with_values(u), data, mask, params, kernel)
        u = canonicalize_angle(u - cfg.step_size * g)
        if not np.all(np.isfinite(u)):
            raise NumericalError(f"non-finite iterate at step {t}")
        if t % cfg.record_energy_every == 0 or t == cfg.steps:
            record(t, u)
    return u0.with_values(u), trace
