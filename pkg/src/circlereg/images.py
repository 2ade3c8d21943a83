"""File formats: radian CSVs, grayscale angle images, hue extraction.

Angle images use the convention angle = 2*pi * v / (max + 1) for a pixel
value v of an 8- or 16-bit grayscale image, so 0 and 2*pi are never both
representable.  Mask images mark the unknown region with nonzero pixels.
"""

from __future__ import annotations

import numpy as np
from PIL import Image

from .field import TWO_PI, AngleField, GridSpec, Mask, canonicalize_angle

__all__ = [
    "load_signal_csv",
    "save_signal_csv",
    "load_angle_image",
    "save_angle_image",
    "extract_hue",
    "render_hsv",
    "load_mask",
]


def load_signal_csv(path, extent: float = 1.0) -> AngleField:
    """Read a 1D signal, one radian value per line; values are canonicalized."""
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: cannot parse {text!r} as a number")
    if len(values) < 2:
        raise ValueError(f"{path}: need at least 2 samples, found {len(values)}")
    grid = GridSpec((len(values),), (float(extent),))
    return AngleField(grid, np.array(values))


def save_signal_csv(u: AngleField, path):
    if u.grid.ndim != 1:
        raise ValueError("CSV signals are 1D")
    with open(path, "w", encoding="utf-8") as fh:
        for v in u.flat:
            fh.write(f"{v:.17g}\n")


def _default_extent(rows: int, cols: int) -> tuple:
    # unit height, square pixels
    return (1.0, cols / rows)


def _to_gray_array(img: Image.Image):
    """Return (array, max value) for an 8- or 16-bit grayscale image."""
    if img.mode == "L":
        return np.asarray(img, dtype=float), 255
    if img.mode in ("I;16", "I;16B", "I;16L"):
        return np.asarray(img, dtype=float), 65535
    if img.mode == "I":
        arr = np.asarray(img, dtype=float)
        if arr.max() > 65535:
            raise ValueError("grayscale image exceeds 16-bit range")
        return arr, 65535
    raise ValueError(f"unsupported image mode {img.mode!r}; need 8/16-bit grayscale")


def load_angle_image(path) -> AngleField:
    """Read a grayscale PNG/PGM as angles, 2*pi * v / (max + 1)."""
    with Image.open(path) as img:
        arr, maxval = _to_gray_array(img)
    rows, cols = arr.shape
    grid = GridSpec((rows, cols), _default_extent(rows, cols))
    return AngleField(grid, TWO_PI * arr / (maxval + 1))


def save_angle_image(u: AngleField, path):
    """Write angles as a 16-bit grayscale PNG, v = floor(u / 2*pi * 65536)."""
    if u.grid.ndim != 2:
        raise ValueError("angle images are 2D")
    v = np.floor(u.values / TWO_PI * 65536.0)
    v = np.clip(v, 0, 65535).astype(np.uint16)
    Image.fromarray(v).save(path)


def extract_hue(path) -> AngleField:
    """Hexagonal hue of an RGB image in radians; gray pixels map to 0."""
    with Image.open(path) as img:
        if img.mode not in ("RGB", "RGBA"):
            raise ValueError(f"hue extraction needs an RGB image, got mode {img.mode!r}")
        rgb = np.asarray(img.convert("RGB"), dtype=float) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    mx = np.max(rgb, axis=-1)
    mn = np.min(rgb, axis=-1)
    c = mx - mn
    safe = np.where(c > 0, c, 1.0)
    h = np.zeros_like(mx)
    h = np.where(mx == r, np.mod((g - b) / safe, 6.0), h)
    h = np.where((mx == g) & (mx != r), (b - r) / safe + 2.0, h)
    h = np.where((mx == b) & (mx != r) & (mx != g), (r - g) / safe + 4.0, h)
    h = np.where(c > 0, h, 0.0)
    rows, cols = h.shape
    grid = GridSpec((rows, cols), _default_extent(rows, cols))
    return AngleField(grid, h / 6.0 * TWO_PI)


def render_hsv(u: AngleField, path):
    """Write the field as an RGB PNG with hue = angle, saturation = value = 1."""
    if u.grid.ndim != 2:
        raise ValueError("HSV rendering needs a 2D field")
    h = np.clip(np.floor(u.values / TWO_PI * 256.0), 0, 255).astype(np.uint8)
    full = np.full_like(h, 255)
    hsv = Image.merge("HSV", [Image.fromarray(a, mode="L") for a in (h, full, full)])
    hsv.convert("RGB").save(path)


def load_mask(path, grid: GridSpec = None) -> Mask:
    """Read a mask image; nonzero pixels mark the unknown region."""
    with Image.open(path) as img:
        arr = np.asarray(img)
    if arr.ndim == 3:
        arr = arr.max(axis=-1)
    unknown = arr != 0
    rows, cols = unknown.shape
    if grid is None:
        grid = GridSpec((rows, cols), _default_extent(rows, cols))
    elif grid.dims != (rows, cols):
        raise ValueError(f"mask shape {unknown.shape} does not match grid dims {grid.dims}")
    return Mask(grid, ~unknown)
