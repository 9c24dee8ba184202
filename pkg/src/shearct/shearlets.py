"""Shearlet analysis and synthesis directly on pseudo-polar spectra.

For a subband in sector ``d`` with mask ``M`` the coefficient at translate
``k`` is

    c[k] = A * sum_{(m, n) in d} spec[m, n] * M[m, n] * w[m, n] * exp(2j*pi*phi)

with ``phi = xi_r * a * k_r + xi_s * b * k_s``: ``xi_r`` is the frequency
along the sector's radial axis (``n / 2N``), ``xi_s`` the other one
(``n m / N^2``), ``a``/``b`` the subband's radial/slope translation steps and
``k_r, k_s`` in ``[-N/2, N/2)``. Arrays are stored as ``c[k1, k2]`` in image
axis order. ``A = 1 / ||M w||`` gives every subband unit noise gain: i.i.d.
spectral noise of variance ``s^2`` yields coefficient noise of variance
``s^2`` in every subband, whatever its scale.

The sum factors into a chirp-z over ``m`` for each ``n`` (fractional factor
``b n / N^2``) followed by a chirp-z over ``n`` (factor ``a / 2N``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .frame import MaskSet
from .grid import radial_indices
from .fourier import ChirpPlan

__all__ = [
    "CoefficientSet",
    "analyze",
    "analyze_direct_oracle",
    "synthesize",
    "frame_density",
    "tight_factors",
    "ORACLE_MAX_N",
]

ORACLE_MAX_N = 32
LOWPASS = "lowpass"


@dataclass
class CoefficientSet:
    """Per-subband ``N x N`` complex coefficient arrays keyed ``(d, j, l)``."""

    subbands: dict
    lowpass: np.ndarray
    N: int
    J: int
    info: dict = field(default_factory=dict, repr=False)

    def copy(self) -> CoefficientSet:
        return CoefficientSet({k: v.copy() for k, v in self.subbands.items()},
                              self.lowpass.copy(), self.N, self.J)

    def scaled(self, factors: dict) -> CoefficientSet:
        """New set with every array multiplied by ``factors[key]``
        (``factors["lowpass"]`` for the low-pass array)."""
        return CoefficientSet({k: v * factors[k] for k, v in self.subbands.items()},
                              self.lowpass * factors[LOWPASS], self.N, self.J)

    def arrays(self):
        """All arrays, shearlet subbands first, low-pass last."""
        yield from self.subbands.values()
        yield self.lowpass

    @property
    def count(self) -> int:
        """Number of shearlet (non low-pass) coefficients."""
        return sum(a.size for a in self.subbands.values())

    def finest(self) -> list[np.ndarray]:
        return [a for (d, j, l), a in self.subbands.items() if j == self.J - 1]

    def vdot(self, other: CoefficientSet) -> complex:
        total = sum(np.vdot(self.subbands[k], other.subbands[k]) for k in self.subbands)
        return total + np.vdot(self.lowpass, other.lowpass)

    def norm2(self) -> float:
        return float(sum(np.sum(np.abs(a) ** 2) for a in self.arrays()))


@dataclass(frozen=True)
class _Band:
    """Cropped description of one analysis atom family within one sector."""

    sector: int
    mask: np.ndarray        # (m_count, n_count) crop of the mask (no weights)
    m0: int                 # first slope index in the crop (centered)
    n0: int                 # first radial index in the crop (centered)
    radial_step: int
    slope_step: int
    inner: ChirpPlan = field(repr=False)  # over m for each n, to k_s
    outer: ChirpPlan = field(repr=False)  # over n for each k_s, to k_r


def _make_band(sector: int, mask: np.ndarray, m0: int, n0: int, a: int, b: int, N: int) -> _Band:
    m_count, n_count = mask.shape
    n = n0 + np.arange(n_count)
    inner = ChirpPlan(-b * n / N**2, m_count, N, m0, -N // 2)
    outer = ChirpPlan(-a / (2 * N), n_count, N, n0, -N // 2)
    return _Band(sector, mask, m0, n0, a, b, inner, outer)


def _support(v: np.ndarray, offset: int) -> tuple[int, int]:
    nz = np.flatnonzero(v > 0)
    return int(nz[0]) + offset, int(nz[-1]) + 1 + offset


@dataclass(frozen=True)
class _Plan:
    bands: dict             # key -> tuple[_Band, ...]
    amplitude: dict         # key -> float
    tight: dict             # key -> float, see tight_factors


@lru_cache(maxsize=8)
def _plan(ms: MaskSet) -> _Plan:
    N = ms.N
    w = ms.weights
    bands, amp, tight = {}, {}, {}
    for sb in ms.subbands:
        ms0, ms1 = _support(sb.angular, -N // 2)
        n0, n1 = _support(sb.radial, -N)
        mask = np.outer(sb.angular[ms0 + N // 2: ms1 + N // 2], sb.radial[n0 + N: n1 + N])
        b = _make_band(int(sb.sector), mask, ms0, n0, sb.radial_step, sb.slope_step, N)
        wc = w[b.sector, ms0 + N // 2: ms1 + N // 2, n0 + N: n1 + N]
        bands[sb.key] = (b,)
        amp[sb.key] = 1.0 / np.linalg.norm(mask * wc)
        tight[sb.key] = np.sqrt(sb.radial_step * sb.slope_step) / N / amp[sb.key]
    n0, n1 = _support(ms.lowpass, -N)
    mask = np.broadcast_to(ms.lowpass[n0 + N: n1 + N], (N, n1 - n0)).copy()
    lp0 = _make_band(0, mask, -N // 2, n0, ms.lowpass_step, ms.lowpass_step, N)
    lp = (lp0, replace(lp0, sector=1))
    bands[LOWPASS] = lp
    wlp = w[:, :, n0 + N: n1 + N]
    amp[LOWPASS] = 1.0 / np.sqrt(sum(np.sum((mask * wlp[d]) ** 2) for d in (0, 1)))
    tight[LOWPASS] = ms.lowpass_step / N / amp[LOWPASS]
    return _Plan(bands, amp, tight)


def _check_pair(spec: np.ndarray, ms: MaskSet) -> np.ndarray:
    spec = np.asarray(spec)
    if spec.shape != (2, ms.N, 2 * ms.N):
        raise ValueError(f"spectrum shape {spec.shape} does not match N={ms.N}")
    return spec


def _band_analyze(g: np.ndarray, b: _Band) -> np.ndarray:
    """``sum_{m,n} g[m,n] exp(+2j*pi*phi)`` for one cropped band -> c[k1, k2]."""
    inner = b.inner(g.T)          # rows n, columns k_s
    out = b.outer(inner.T)        # rows k_s, columns k_r
    return out.T if b.sector == 0 else out


def _band_synthesize(c: np.ndarray, b: _Band) -> np.ndarray:
    """Adjoint of :func:`_band_analyze` (no weights), returned on the crop."""
    rows = c.T if b.sector == 0 else c          # rows k_s, columns k_r
    h = b.outer.adjoint(rows)                    # rows k_s, columns n
    return b.inner.adjoint(h.T).T                # (m_count, n_count)


def _crop(b: _Band, N: int) -> tuple[slice, slice]:
    m_count, n_count = b.mask.shape
    return (slice(b.m0 + N // 2, b.m0 + N // 2 + m_count),
            slice(b.n0 + N, b.n0 + N + n_count))


def analyze(spec, ms: MaskSet) -> CoefficientSet:
    """Shearlet coefficients of a pseudo-polar spectrum (fast chirp-z path)."""
    spec = _check_pair(spec, ms)
    plan = _plan(ms)
    N = ms.N
    gw = spec * ms.weights
    out = {}
    for key, bands in plan.bands.items():
        acc = np.zeros((N, N), dtype=complex)
        for b in bands:
            sm, sn = _crop(b, N)
            acc += _band_analyze(gw[b.sector, sm, sn] * b.mask, b)
        out[key] = plan.amplitude[key] * acc
    low = out.pop(LOWPASS)
    return CoefficientSet(out, low, N, ms.J)


def synthesize(cs: CoefficientSet, ms: MaskSet) -> np.ndarray:
    """Adjoint of :func:`analyze` with the density weights left out.

    ``<analyze(x), c> == <x, w * synthesize(c)>`` for all ``x`` and ``c``.
    """
    if cs.N != ms.N or set(cs.subbands) != set(ms.keys):
        raise ValueError("coefficient set does not match the mask set")
    plan = _plan(ms)
    N = ms.N
    spec = np.zeros((2, N, 2 * N), dtype=complex)
    for key, bands in plan.bands.items():
        c = cs.lowpass if key == LOWPASS else cs.subbands[key]
        a = plan.amplitude[key]
        for b in bands:
            sm, sn = _crop(b, N)
            spec[b.sector, sm, sn] += a * b.mask * _band_synthesize(c, b)
    return spec


def tight_factors(ms: MaskSet) -> dict:
    """Per-subband factors that rescale unit-noise coefficients to the amplitude
    ``sqrt(a * b) / N`` (``a``, ``b`` the translation steps).

    Under that rescaling every atom carries energy in proportion to its
    translation cell, and the frame operator is close to a multiple of the
    identity. Keys are the subband keys plus ``"lowpass"``.
    """
    return dict(_plan(ms).tight)


def frame_density(ms: MaskSet, tight: bool = False) -> np.ndarray:
    """Real part of ``synthesize(analyze(1))``: the frame operator's response to
    the all-ones spectrum (a centered delta image), used as a diagonal
    approximation of the frame operator.

    With ``tight`` the coefficients are weighted by ``tight_factors(ms)**2``
    before synthesis, giving the diagonal of the weighted frame operator.
    """
    return _density_cached(ms, bool(tight))


@lru_cache(maxsize=8)
def _density_cached(ms: MaskSet, tight: bool) -> np.ndarray:
    N = ms.N
    cs = analyze(np.ones((2, N, 2 * N), dtype=complex), ms)
    if tight:
        cs = cs.scaled({k: f**2 for k, f in _plan(ms).tight.items()})
    D = synthesize(cs, ms).real
    if not np.all(D > 0):
        raise ArithmeticError("frame density is not positive")
    D.flags.writeable = False
    return D


def analyze_direct_oracle(spec, ms: MaskSet) -> CoefficientSet:
    """Literal quadruple-sum evaluation of :func:`analyze`; refuses ``N > 32``.

    Phases are reduced exactly over the common denominator ``2N^2``.
    Because every phase is linear in ``k``, conjugation acts as
    ``analyze(conj(F))[k] == conj(analyze(F)[-k])`` for every translate whose
    negation is in range.
    """
    spec = _check_pair(spec, ms)
    N = ms.N
    if N > ORACLE_MAX_N:
        raise ValueError(f"direct oracle refuses N={N} > {ORACLE_MAX_N}")
    plan = _plan(ms)
    D = 2 * N * N
    m = np.arange(-N // 2, N // 2)
    n = radial_indices(N)
    k = np.arange(-N // 2, N // 2)
    out = {}
    for key, bands in plan.bands.items():
        acc = np.zeros((N, N), dtype=complex)
        for b in bands:
            full = np.zeros((N, 2 * N))
            sm, sn = _crop(b, N)
            full[sm, sn] = b.mask
            g = spec[b.sector] * full * ms.weights[b.sector]
            for kr in k:
                for ks in k:
                    # phi = n*a*kr/(2N) + n*m*b*ks/N^2 over denominator 2N^2
                    num = (n[None, :] * b.radial_step * kr * N
                           + 2 * n[None, :] * m[:, None] * b.slope_step * ks)
                    val = np.sum(g * np.exp(2j * np.pi * (np.mod(num, D) / D)))
                    k1, k2 = (kr, ks) if b.sector == 0 else (ks, kr)
                    acc[k1 + N // 2, k2 + N // 2] += val
        out[key] = plan.amplitude[key] * acc
    low = out.pop(LOWPASS)
    return CoefficientSet(out, low, N, ms.J)
