"""Pseudo-polar grid geometry, duplicate bookkeeping and density weights.

Array layout for every quantity living on the grid is ``(2, N, 2N)``:
axis 0 is the sector (0 = horizontal, 1 = vertical), axis 1 the slope index
``m + N/2`` with ``m`` in ``[-N/2, N/2)``, axis 2 the pseudo-radial index
``n + N`` with ``n`` in ``[-N, N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

__all__ = [
    "Sector",
    "GridIndex",
    "check_size",
    "grid_point",
    "grid_coordinates",
    "duplicate_pairs",
    "density_weights",
    "slope_indices",
    "radial_indices",
]


class Sector(IntEnum):
    HORIZONTAL = 0
    VERTICAL = 1


@dataclass(frozen=True)
class GridIndex:
    sector: Sector
    m: int
    n: int

    def position(self, N: int) -> tuple[int, int, int]:
        """Array position of this index in a ``(2, N, 2N)`` grid array."""
        return int(self.sector), self.m + N // 2, self.n + N


def check_size(N) -> int:
    if isinstance(N, bool) or int(N) != N or N < 2 or N % 2:
        raise ValueError(f"N must be a positive even integer, got {N!r}")
    return int(N)


def slope_indices(N: int) -> np.ndarray:
    return np.arange(-N // 2, N // 2)


def radial_indices(N: int) -> np.ndarray:
    return np.arange(-N, N)


def grid_point(idx: GridIndex, N: int) -> tuple[float, float]:
    """Normalized frequency ``(xi1, xi2)`` of a grid index, cycles/pixel."""
    N = check_size(N)
    sector = Sector(idx.sector)
    if not -N // 2 <= idx.m < N // 2 or not -N <= idx.n < N:
        raise ValueError(f"index {idx} out of range for N={N}")
    r = idx.n / (2 * N)
    s = 2 * idx.m / N
    if sector is Sector.HORIZONTAL:
        return r, r * s
    return r * s, r


@lru_cache(maxsize=16)
def _coords(N: int) -> tuple[np.ndarray, np.ndarray]:
    r = radial_indices(N)[None, :] / (2 * N)
    s = (2 * slope_indices(N) / N)[:, None]
    xi1 = np.stack([np.broadcast_to(r, (N, 2 * N)), r * s])
    xi2 = np.stack([r * s, np.broadcast_to(r, (N, 2 * N))])
    xi1.flags.writeable = False
    xi2.flags.writeable = False
    return xi1, xi2


def grid_coordinates(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Both frequency coordinates for the whole grid, each ``(2, N, 2N)``."""
    return _coords(check_size(N))


def duplicate_pairs(N: int) -> list[tuple[GridIndex, GridIndex]]:
    """Coincident index pairs on the slope -1 line shared by both sectors.

    ``(h, -N/2, n)`` and ``(v, -N/2, -n)`` name the same frequency for
    ``n`` in ``[-N+1, N-1]``; the ``n = 0`` pair is listed as well.
    """
    N = check_size(N)
    m = -N // 2
    return [
        (GridIndex(Sector.HORIZONTAL, m, n), GridIndex(Sector.VERTICAL, m, -n))
        for n in range(-N + 1, N)
    ]


@lru_cache(maxsize=16)
def _weights(N: int) -> np.ndarray:
    s = 2 * slope_indices(N) / N
    n = radial_indices(N)
    dsigma = np.sqrt(1 + s**2) / (2 * N)
    dtheta = (2 / N) / (1 + s**2)
    radius = np.abs(n)[None, :] / (2 * N) * np.sqrt(1 + s**2)[:, None]
    radius[:, N] = 1 / (8 * N)  # n = 0 surrogate
    w = radius * (dsigma * dtheta)[:, None]
    w = np.stack([w, w.copy()])
    # slope -1 line lives in both sectors: half weight on each copy
    w[:, 0, 1:] *= 0.5
    w /= w.sum()
    w.flags.writeable = False
    return w


def density_weights(N: int) -> np.ndarray:
    """Quadrature weights on the grid, shape ``(2, N, 2N)``, summing to one.

    Each weight is the polar area element ``|xi| * dsigma * dtheta`` of its
    sample, with ``dsigma`` the radial spacing along a line of slope
    ``s = 2m/N`` and ``dtheta`` the spacing of ``arctan(s)``.
    """
    return _weights(check_size(N))
