"""Uniform cell-centered grids and the fields living on them.

Angles are stored canonically in [0, 2*pi).  All types are immutable
value objects; updates produce new instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

__all__ = ["TWO_PI", "GridSpec", "AngleField", "Mask", "canonicalize_angle", "pair_distance"]


def canonicalize_angle(a):
    """Reduce an angle (or array of angles) to the canonical range [0, 2*pi).

    Idempotent; raises ValueError on non-finite input.
    """
    arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("angle must be finite")
    r = np.mod(arr, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    r = np.where(r >= TWO_PI, 0.0, r)
    if np.ndim(a) == 0 and not isinstance(a, np.ndarray):
        return float(r)
    return r


@dataclass(frozen=True)
class GridSpec:
    """Uniform cell-centered grid on a rectangular domain in R^N, N in {1, 2}.

    dims holds (n,) or (n_rows, n_cols); extent holds the physical side
    lengths.  Cell centers sit at (i + 1/2) * h on each axis, strictly
    inside the domain.
    """

    dims: tuple
    extent: tuple = None

    def __post_init__(self):
        dims = tuple(int(d) for d in np.atleast_1d(self.dims))
        if len(dims) not in (1, 2):
            raise ValueError("only 1D and 2D grids are supported")
        if any(d < 2 for d in dims):
            raise ValueError("every grid dimension must be >= 2")
        extent = self.extent
        if extent is None:
            extent = (1.0,) * len(dims)
        extent = tuple(float(e) for e in np.atleast_1d(extent))
        if len(extent) != len(dims):
            raise ValueError("extent must match the number of dimensions")
        if any(e <= 0 for e in extent):
            raise ValueError("extent must be positive")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "extent", extent)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def spacing(self) -> tuple:
        """Grid spacing h per axis."""
        return tuple(e / d for e, d in zip(self.extent, self.dims))

    @property
    def npoints(self) -> int:
        return int(np.prod(self.dims))

    @property
    def cell_volume(self) -> float:
        """Product of spacings; the quadrature weight of one cell."""
        return float(np.prod(self.spacing))

    def coords(self) -> np.ndarray:
        """Cell-center coordinates, shape (npoints, ndim), row-major order."""
        axes = [(np.arange(d) + 0.5) * h for d, h in zip(self.dims, self.spacing)]
        if self.ndim == 1:
            return axes[0][:, None]
        rr, cc = np.meshgrid(axes[0], axes[1], indexing="ij")
        return np.column_stack([rr.ravel(), cc.ravel()])

    def flat_index(self, i):
        """Accept a flat index or a per-axis tuple; return the flat index."""
        if np.ndim(i) == 0:
            idx = int(i)
            if not 0 <= idx < self.npoints:
                raise IndexError(f"index {i} out of range for grid with {self.npoints} points")
            return idx
        idx = tuple(int(v) for v in i)
        if len(idx) != self.ndim:
            raise IndexError("index tuple does not match grid dimension")
        for v, d in zip(idx, self.dims):
            if not 0 <= v < d:
                raise IndexError(f"index {i} out of range for dims {self.dims}")
        return int(np.ravel_multi_index(idx, self.dims))


def pair_distance(grid: GridSpec, i, j) -> float:
    """Euclidean distance between the cell centers of grid points i and j."""
    coords = grid.coords()
    return float(np.linalg.norm(coords[grid.flat_index(i)] - coords[grid.flat_index(j)]))


@dataclass(frozen=True)
class AngleField:
    """Angles in [0, 2*pi) on a grid; the lifted representation of a
    circle-valued function."""

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = canonicalize_angle(np.asarray(self.values, dtype=float))
        if vals.shape != self.grid.dims:
            vals = vals.reshape(self.grid.dims)
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def with_values(self, values) -> "AngleField":
        return AngleField(self.grid, values)

    @staticmethod
    def constant(grid: GridSpec, angle: float) -> "AngleField":
        return AngleField(grid, np.full(grid.dims, angle, dtype=float))


@dataclass(frozen=True)
class Mask:
    """Boolean field marking observed grid points (True = datum observed)."""

    grid: GridSpec
    known: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.known, dtype=bool)
        if arr.shape != self.grid.dims:
            arr = arr.reshape(self.grid.dims)
        if not arr.any():
            raise ValueError("mask must contain at least one known point")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "known", arr)

    @property
    def flat(self) -> np.ndarray:
        return self.known.ravel()

    @property
    def unknown(self) -> np.ndarray:
        return ~self.known

    @staticmethod
    def all_known(grid: GridSpec) -> "Mask":
        return Mask(grid, np.ones(grid.dims, dtype=bool))
