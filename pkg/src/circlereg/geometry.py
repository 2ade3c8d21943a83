"""Metrics on the unit circle, the lifting map, and wrap helpers.

Circle points are represented by their angles.  The geodesic (arc)
distance equals the absolute wrapped angle difference; the chord
distance is the ambient Euclidean distance between the corresponding
unit vectors.  At antipodal pairs the signed wrap returns +pi on both
orderings, a fixed subgradient convention for the squared distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import TWO_PI, AngleField

__all__ = [
    "signed_wrap",
    "geodesic_dist",
    "chord_dist",
    "lift_apply",
    "Metric",
    "GEODESIC",
    "CHORD",
]


def signed_wrap(a, b):
    """Signed wrapped difference a - b reduced to (-pi, pi]; +pi at antipodes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("angles must be finite")
    # pi - mod(pi - (a - b), 2*pi) lands in (-pi, pi] with ties at +pi
    r = np.pi - np.mod(np.pi - (a - b), TWO_PI)
    if r.shape == ():
        return float(r)
    return r


def geodesic_dist(a, b):
    """Arc-length distance on the circle, in [0, pi]."""
    return np.abs(signed_wrap(a, b))


def chord_dist(a, b):
    """Euclidean distance between the circle points e^{ia} and e^{ib}."""
    d = 2.0 * np.sin(0.5 * geodesic_dist(a, b))
    if np.ndim(d) == 0:
        return float(d)
    return d


def lift_apply(u: AngleField) -> np.ndarray:
    """Map angles to unit vectors (cos u, sin u); shape (*dims, 2)."""
    return np.stack([np.cos(u.values), np.sin(u.values)], axis=-1)


@dataclass(frozen=True)
class Metric:
    """Distance on angle arguments: the S1 geodesic or the Euclidean chord.

    dist gives the distance, ddist its derivative with respect to the
    first angle (the sign carrier used by the analytic gradient).
    """

    kind: str

    def __post_init__(self):
        if self.kind not in ("geodesic", "chord"):
            raise ValueError(f"unknown metric kind {self.kind!r}")

    def dist(self, a, b):
        if self.kind == "geodesic":
            return geodesic_dist(a, b)
        return chord_dist(a, b)

    def ddist(self, a, b):
        w = signed_wrap(a, b)
        if self.kind == "geodesic":
            return np.sign(w)
        return np.cos(0.5 * np.abs(w)) * np.sign(w)


GEODESIC = Metric("geodesic")
CHORD = Metric("chord")
