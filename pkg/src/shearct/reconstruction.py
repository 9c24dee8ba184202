"""Thresholding, noise estimation and frame inversion back to an image.

The frame maps an image ``x`` to coefficients ``G x = analyze(ppfft_forward(x))``.
Coefficients have unit noise gain, which is what a scale-independent
threshold needs. For inversion each subband's misfit is weighted by the
square of its :func:`~shearct.shearlets.tight_factors` entry, the scaling under
which the frame is close to tight. Exact coefficient sets invert to the same
image either way. For edited sets this picks the dual frame of the
near-tight system.

:func:`invert_frame` starts from the diagonal approximation
``ppfft_inverse(synthesize(L c) / D)`` and refines it with preconditioned
conjugate gradients on ``G^T L G x = G^T L c``, where ``L`` is the subband
weighting. The preconditioner approximates the inverse by
``B^-1 P^H (W / D) P B^-1`` with ``B = P^H W P`` the normal operator of the
pseudo-polar transform. ``B^-1`` is replaced by a fixed odd-degree Chebyshev
polynomial in ``B``, which keeps the preconditioner linear, symmetric and
positive definite.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .frame import MaskSet
from .grid import density_weights
from .ppfft import SolveInfo, _run_cg, ppfft_adjoint, ppfft_forward, ppfft_inverse
from .radon import Linogram, radon_to_spectrum
from .shearlets import CoefficientSet, analyze, frame_density, synthesize, tight_factors

__all__ = [
    "ThresholdRule",
    "ReconInfo",
    "threshold",
    "threshold_value",
    "estimate_sigma",
    "keep_largest",
    "invert_frame",
    "reconstruct",
    "MAD_SCALE",
]

log = logging.getLogger(__name__)

MAD_SCALE = 0.6745
CHEB_DEGREE = 3
START_TOL = 1e-3


@dataclass(frozen=True)
class ThresholdRule:
    """Scale-independent threshold.

    Either a fixed level ``t`` or the universal policy
    ``t = sigma * sqrt(2 ln K)`` with ``K`` the number of shearlet
    coefficients. A universal rule without ``sigma`` estimates it from the
    finest subbands with :func:`estimate_sigma`.
    """

    kind: str = "hard"
    t: float | None = None
    universal: bool = False
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in ("hard", "soft"):
            raise ValueError(f"unknown threshold kind {self.kind!r}")
        if self.universal == (self.t is not None):
            raise ValueError("give exactly one of a fixed t or the universal policy")
        if self.t is not None and not self.t >= 0:
            raise ValueError("threshold t must be >= 0")
        if self.sigma is not None and not self.sigma >= 0:
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class ReconInfo:
    solve: SolveInfo
    threshold: float | None = None
    sigma: float | None = None


def threshold_value(cs: CoefficientSet, rule: ThresholdRule) -> tuple[float, float | None]:
    """Level ``t`` a rule applies to ``cs`` and the noise level it used."""
    if not rule.universal:
        return float(rule.t), rule.sigma
    sigma = estimate_sigma(cs) if rule.sigma is None else float(rule.sigma)
    return sigma * math.sqrt(2.0 * math.log(max(cs.count, 2))), sigma


def threshold(cs: CoefficientSet, rule: ThresholdRule) -> CoefficientSet:
    """Hard or soft thresholding with one level for every shearlet subband.

    The low-pass array is copied unchanged.
    """
    t, _ = threshold_value(cs, rule)
    out = cs.copy()
    for c in out.subbands.values():
        mag = np.abs(c)
        if rule.kind == "hard":
            c[mag <= t] = 0
        else:
            with np.errstate(invalid="ignore", divide="ignore"):
                gain = np.where(mag > t, 1.0 - t / mag, 0.0)
            c *= gain
    return out


def estimate_sigma(cs: CoefficientSet) -> float:
    """Noise level from the median absolute deviation of the finest subbands.

    Each finest subband gives ``median(|Re c - median(Re c)|) / 0.6745``; the
    result is their mean.
    """
    finest = cs.finest()
    if not finest:
        raise ValueError("coefficient set has no finest-scale subbands")
    vals = []
    for c in finest:
        r = c.real
        vals.append(np.median(np.abs(r - np.median(r))) / MAD_SCALE)
    return float(np.mean(vals))


def keep_largest(cs: CoefficientSet, ms: MaskSet, fraction: float) -> CoefficientSet:
    """Keep the ``fraction`` of all coefficients (low-pass included) that
    matter most for the image and zero the rest.

    Coefficients are ranked by magnitude after rescaling with
    :func:`~shearct.shearlets.tight_factors`, which puts every subband on the
    energy scale of the image. Ties at the cut are broken by a stable sort, so
    the kept count is exact.
    """
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must be in [0, 1]")
    scaled = cs.scaled(tight_factors(ms))
    mags = np.concatenate([np.abs(a).ravel() for a in scaled.arrays()])
    keep = int(round(fraction * mags.size))
    mask = np.zeros(mags.size, dtype=bool)
    if keep:
        mask[np.argsort(-mags, kind="stable")[:keep]] = True
    out = cs.copy()
    pos = 0
    for a in out.arrays():
        a.ravel()[~mask[pos:pos + a.size]] = 0
        pos += a.size
    return out


@lru_cache(maxsize=8)
def _normal_bounds(N: int) -> tuple[float, float]:
    """Safe bounds on the spectrum of ``B = Re P^H W P`` from Lanczos.

    Ritz values approach the extremes from inside, so they are widened.
    A fixed start vector keeps the result deterministic.
    """
    w = density_weights(N)
    op = LinearOperator((N * N, N * N), dtype=float,
                        matvec=lambda x: ppfft_adjoint(w * ppfft_forward(x.reshape(N, N))).real.ravel())
    v0 = np.cos(np.arange(N * N) * 0.7) + 1.0
    lo = eigsh(op, k=1, which="SA", tol=1e-2, v0=v0, return_eigenvectors=False)[0]
    hi = eigsh(op, k=1, which="LA", tol=1e-2, v0=v0, return_eigenvectors=False)[0]
    return 0.9 * float(lo), 1.05 * float(hi)


def _chebyshev_solver(apply_B, lo: float, hi: float, degree: int):
    """Fixed Chebyshev iteration for ``B z = r`` from ``z = 0`` (linear in ``r``)."""
    theta, delta = 0.5 * (hi + lo), 0.5 * (hi - lo)
    sigma1 = theta / delta

    def solve(r):
        rho = 1.0 / sigma1
        d = r / theta
        z = np.zeros_like(r)
        for _ in range(degree):
            z = z + d
            r = r - apply_B(d)
            rho_next = 1.0 / (2.0 * sigma1 - rho)
            d = rho_next * rho * d + (2.0 * rho_next / delta) * r
            rho = rho_next
        return z

    return solve


def invert_frame(cs: CoefficientSet, ms: MaskSet, tol: float = 1e-6, max_iter: int = 10):
    """Least-squares image whose coefficients best match ``cs``.

    Returns ``(image, SolveInfo)``. ``max_iter = 0`` returns the diagonal
    approximation without refinement.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    N = ms.N
    w = ms.weights
    D = frame_density(ms, tight=True)
    weights = {k: f**2 for k, f in tight_factors(ms).items()}
    spec = synthesize(cs.scaled(weights), ms)
    x0 = ppfft_inverse(spec / D, tol=START_TOL, max_iter=50)
    b = ppfft_adjoint(w * spec).real.ravel()

    def shape(f):
        return lambda x: f(x.reshape(N, N)).ravel()

    A = LinearOperator((N * N, N * N), dtype=float, matvec=shape(
        lambda x: ppfft_adjoint(w * synthesize(analyze(ppfft_forward(x), ms).scaled(weights), ms)).real))
    if max_iter == 0:
        res = float(np.linalg.norm(b - A @ x0.ravel()) / max(np.linalg.norm(b), 1e-300))
        return x0, SolveInfo(0, res, res <= tol)

    apply_B = shape(lambda x: ppfft_adjoint(w * ppfft_forward(x)).real)
    apply_M = shape(lambda x: ppfft_adjoint((w / D) * ppfft_forward(x)).real)
    cheb = _chebyshev_solver(apply_B, *_normal_bounds(N), CHEB_DEGREE)
    M = LinearOperator((N * N, N * N), dtype=float, matvec=lambda r: cheb(apply_M(cheb(r))))
    x, info = _run_cg(A, b, tol, max_iter, x0=x0.ravel(), M=M)
    return x.reshape(N, N), info


def reconstruct(lin: Linogram, ms: MaskSet, rule: ThresholdRule | None = None,
                tol: float = 1e-6, max_iter: int = 10, *, full_output: bool = False):
    """Image from a linogram through the shearlet coefficients.

    Linogram to spectrum, analysis, optional thresholding, then
    :func:`invert_frame`. Deterministic in its inputs.
    """
    if lin.N != ms.N:
        raise ValueError(f"linogram N={lin.N} does not match mask set N={ms.N}")
    cs = analyze(radon_to_spectrum(lin), ms)
    t = sigma = None
    if rule is not None:
        t, sigma = threshold_value(cs, rule)
        cs = threshold(cs, ThresholdRule(rule.kind, t=t))
    img, info = invert_frame(cs, ms, tol, max_iter)
    if not info.converged:
        log.info("frame refinement stopped at residual %.3g after %d iterations",
                 info.residual, info.iterations)
    return (img, ReconInfo(info, t, sigma)) if full_output else img
