"""Analytic phantoms on the centered pixel grid.

Pixel ``img[i, j]`` has centered coordinates ``u = i - N/2``, ``v = j - N/2``
and physical position ``x = v / (N/2)``, ``y = -u / (N/2)`` in ``[-1, 1)``,
so the image displays upright with row 0 at the top.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import check_size

__all__ = ["PhantomSpec", "make_phantom", "SHEPP_LOGAN", "ELLIPSES_RECTS", "KINDS"]

KINDS = ("circle", "ellipses_rects", "shepp_logan")

# (intensity, semi-axis a, semi-axis b, x0, y0, angle in degrees);
# modified-contrast values of Toft's table, range [0, 1]
SHEPP_LOGAN = (
    (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
    (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
    (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
    (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
    (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
    (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
    (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
    (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
    (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
)

# two rotated ellipses and two rotated rectangles, disjoint
ELLIPSES_RECTS = {
    "ellipses": (
        (1.0, 0.35, 0.18, -0.35, 0.35, 30.0),
        (0.6, 0.15, 0.40, 0.40, 0.30, -20.0),
    ),
    "rects": (
        (0.8, 0.25, 0.12, -0.30, -0.40, 15.0),
        (0.4, 0.15, 0.15, 0.35, -0.40, 45.0),
    ),
}


@dataclass(frozen=True)
class PhantomSpec:
    kind: str
    N: int
    radius: float = 0.3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown phantom kind {self.kind!r}")
        check_size(self.N)
        if self.kind == "circle" and not 0 < self.radius <= 1:
            raise ValueError("radius must be in (0, 1]")


def _coords(N: int):
    c = np.arange(N) - N // 2
    x = c[None, :] / (N / 2)
    y = -c[:, None] / (N / 2)
    return np.broadcast_to(x, (N, N)), np.broadcast_to(y, (N, N))


def _rotated(x, y, x0, y0, deg):
    t = np.deg2rad(deg)
    dx, dy = x - x0, y - y0
    return dx * np.cos(t) + dy * np.sin(t), -dx * np.sin(t) + dy * np.cos(t)


def _ellipses(x, y, table):
    img = np.zeros(x.shape)
    for val, a, b, x0, y0, deg in table:
        xr, yr = _rotated(x, y, x0, y0, deg)
        img[(xr / a) ** 2 + (yr / b) ** 2 <= 1] += val
    return img


def make_phantom(spec: PhantomSpec) -> np.ndarray:
    """Piecewise-constant phantom with values in [0, 1] (no anti-aliasing)."""
    N = spec.N
    x, y = _coords(N)
    if spec.kind == "circle":
        img = (np.hypot(x, y) <= spec.radius).astype(float)
    elif spec.kind == "shepp_logan":
        img = _ellipses(x, y, SHEPP_LOGAN)
    else:
        img = _ellipses(x, y, ELLIPSES_RECTS["ellipses"])
        for val, a, b, x0, y0, deg in ELLIPSES_RECTS["rects"]:
            xr, yr = _rotated(x, y, x0, y0, deg)
            img[(np.abs(xr) <= a) & (np.abs(yr) <= b)] += val
    return np.clip(img, 0.0, 1.0)
