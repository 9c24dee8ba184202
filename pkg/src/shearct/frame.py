"""Meyer-type shearlet windows and their separable masks on the pseudo-polar grid.

Every shearlet subband ``(d, j, l)`` lives in one sector ``d`` and has mask
``R_j[n] * S_{j,l}[m]`` there. The finest radial band ``j = J-1`` reaches the
grid edge; the low-pass window is the radial complement, so the discrete
partition of unity holds to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .grid import Sector, check_size, density_weights, radial_indices, slope_indices

__all__ = [
    "meyer_nu",
    "psi1_hat",
    "psi2_hat",
    "FrameParams",
    "Subband",
    "MaskSet",
    "build_masks",
    "check_partition",
    "default_scales",
]


def meyer_nu(t):
    """Smooth step: 0 below 0, 1 above 1, ``t^4 (35 - 84t + 70t^2 - 20t^3)`` between."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    out = t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)
    return out if out.ndim else float(out)


def _psi1_sq(omega):
    a = np.abs(np.asarray(omega, dtype=float))
    return meyer_nu(16 * a - 1) * (1 - meyer_nu(4 * a - 1))


def psi1_hat(omega):
    """Even radial window; squared it ramps up on [1/16, 1/8], is flat on
    [1/8, 1/4] and ramps down on [1/4, 1/2]."""
    out = np.sqrt(_psi1_sq(omega))
    return out if np.ndim(out) else float(out)


def psi2_hat(omega):
    """Angular bump ``cos(pi/2 * nu(|omega|))`` on [-1, 1], zero outside."""
    a = np.abs(np.asarray(omega, dtype=float))
    out = np.where(a <= 1, np.cos(0.5 * np.pi * meyer_nu(a)), 0.0)
    return out if out.ndim else float(out)


def default_scales(N: int) -> int:
    return max(1, int(math.log2(N)) // 2 - 1)


@dataclass(frozen=True)
class FrameParams:
    N: int
    J: int | None = None

    def __post_init__(self):
        N = check_size(self.N)
        J = default_scales(N) if self.J is None else int(self.J)
        if J < 1:
            raise ValueError("J must be >= 1")
        # low-pass closed support is |n| <= N / 4^J; it must hold more than n = 0
        if N < 4**J:
            raise ValueError(f"J={J} too large for N={N}: low-pass support below 2 samples")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "J", J)


@dataclass(frozen=True, eq=False)
class Subband:
    sector: Sector
    j: int
    shear: int
    radial: np.ndarray   # (2N,)
    angular: np.ndarray  # (N,)
    radial_step: int     # translation step along the sector's radial axis
    slope_step: int      # translation step along the other axis

    @property
    def key(self) -> tuple[int, int, int]:
        return int(self.sector), self.j, self.shear

    def mask(self) -> np.ndarray:
        """Full ``(2, N, 2N)`` mask, zero outside this subband's sector."""
        N = self.angular.size
        out = np.zeros((2, N, 2 * N))
        out[int(self.sector)] = np.outer(self.angular, self.radial)
        return out


@dataclass(frozen=True, eq=False)
class MaskSet:
    params: FrameParams
    subbands: tuple[Subband, ...]
    lowpass: np.ndarray  # (2N,), radial, both sectors
    lowpass_step: int
    weights: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def J(self) -> int:
        return self.params.J

    @cached_property
    def keys(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(sb.key for sb in self.subbands)

    def lowpass_mask(self) -> np.ndarray:
        N = self.N
        return np.broadcast_to(self.lowpass, (2, N, 2 * N)).copy()

    def without(self, key) -> MaskSet:
        """Copy with one subband removed (diagnostics only)."""
        kept = tuple(sb for sb in self.subbands if sb.key != tuple(key))
        return MaskSet(self.params, kept, self.lowpass, self.lowpass_step, self.weights)


def build_masks(p: FrameParams) -> MaskSet:
    N, J = p.N, p.J
    omega = np.abs(radial_indices(N)) / (2 * N)
    slope = 2 * slope_indices(N) / N

    radial = []
    for j in range(J - 1):
        radial.append(psi1_hat(4 ** (J - 1 - j) * omega))
    radial.append(np.sqrt(meyer_nu(16 * omega - 1)))
    low_sq = 1 - sum(r**2 for r in radial)
    lowpass = np.sqrt(np.clip(low_sq, 0.0, None))
    # outside |n| < N / 4^J the bands sum to one analytically; drop rounding residue
    lowpass[4 ** (J - 1) * omega >= 1 / 8] = 0.0

    subbands = []
    for d in Sector:
        for j in range(J):
            for shear in range(-(2**j), 2**j + 1):
                subbands.append(Subband(
                    sector=d, j=j, shear=shear,
                    radial=radial[j],
                    angular=psi2_hat(2**j * slope - shear),
                    radial_step=4 ** (J - 1 - j),
                    slope_step=2 ** (J - 1 - j),
                ))
    return MaskSet(p, tuple(subbands), lowpass, 4 ** (J - 1), density_weights(N))


def check_partition(ms: MaskSet) -> float:
    """Max deviation of ``Phi^2 + sum (R S)^2`` from one over the whole grid."""
    N = ms.N
    total = np.broadcast_to(ms.lowpass**2, (2, N, 2 * N)).copy()
    for sb in ms.subbands:
        total[int(sb.sector)] += np.outer(sb.angular**2, sb.radial**2)
    return float(np.abs(total - 1).max())
