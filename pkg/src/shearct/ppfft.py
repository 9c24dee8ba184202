"""Pseudo-polar Fourier transform: forward, adjoint, oracle and CG inverse.

Images are ``N x N`` arrays indexed ``img[u + N/2, v + N/2]`` with centered
pixel coordinates ``u, v`` in ``[-N/2, N/2)``; ``u`` pairs with ``xi1``.
Spectra use the ``(2, N, 2N)`` layout of :mod:`shearct.grid`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft as sfft
from scipy.sparse.linalg import LinearOperator, cg

from .fourier import ChirpPlan
from .grid import check_size, density_weights, radial_indices

__all__ = [
    "SolveInfo",
    "ppfft_forward",
    "ppfft_adjoint",
    "ppfft_direct_oracle",
    "ppfft_inverse",
    "centered_chirp",
]

log = logging.getLogger(__name__)

ORACLE_MAX_N = 64


@dataclass(frozen=True)
class SolveInfo:
    iterations: int
    residual: float
    converged: bool


def _check_image(img) -> tuple[np.ndarray, int]:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise ValueError(f"expected a square image, got shape {img.shape}")
    N = check_size(img.shape[0])
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains NaN or Inf")
    return img, N


def _check_spectrum(spec) -> tuple[np.ndarray, int]:
    spec = np.asarray(spec)
    if spec.ndim != 3 or spec.shape[0] != 2 or spec.shape[2] != 2 * spec.shape[1]:
        raise ValueError(f"expected a (2, N, 2N) spectrum, got shape {spec.shape}")
    return spec, check_size(spec.shape[1])


def centered_chirp(x, alpha, in0: int, out0: int, K: int) -> np.ndarray:
    """Row-wise ``sum_i x[r, i] exp(-2j*pi*alpha[r]*(in0 + i)*(out0 + k))``."""
    x = np.atleast_2d(x)
    return ChirpPlan(alpha, x.shape[1], K, in0, out0)(x)


@lru_cache(maxsize=4)
def _slope_plan(N: int) -> ChirpPlan:
    """Chirp along the slope axis, one row per radial index ``n`` in FFT order
    (``0 .. N-1`` then ``-N .. -1``)."""
    n = np.fft.ifftshift(radial_indices(N))
    return ChirpPlan(n / N**2, N, N, -N // 2, -N // 2)


@lru_cache(maxsize=4)
def _half_plan(N: int) -> ChirpPlan:
    """Slope chirp for the radial indices ``n = 0 .. N`` only."""
    return ChirpPlan(np.arange(N + 1) / N**2, N, N, -N // 2, -N // 2)


def _wrapped(img: np.ndarray, N: int) -> np.ndarray:
    """Zero-pad to ``2N`` rows with row ``u`` at index ``u mod 2N``."""
    h = N // 2
    pad = np.zeros((2 * N, N), dtype=img.dtype)
    pad[:h] = img[h:]
    pad[-h:] = img[:h]
    return pad


def _sector_forward(img: np.ndarray, out: np.ndarray, N: int) -> None:
    """Fill ``out[m + N/2, n + N]`` with one sector of the transform.

    For a real image row ``-n`` is the conjugate of row ``n`` (the chirp phase
    is odd in ``n``), so only ``n = 0 .. N`` is computed.
    """
    if np.isrealobj(img):
        R = _half_plan(N)(sfft.rfft(_wrapped(img, N), axis=0))  # rows n = 0 .. N
        out[:, N:] = R[:N].T
        out[:, :N] = R[N:0:-1].T.conj()
    else:
        R = _slope_plan(N)(sfft.fft(_wrapped(img, N), axis=0))  # rows n in FFT order
        out[:, N:] = R[:N].T
        out[:, :N] = R[N:].T


def ppfft_forward(img) -> np.ndarray:
    """Pseudo-polar DTFT of an ``N x N`` image in O(N^2 log N).

    ``out[s, m, n] = sum_{u,v} img[u, v] exp(-2j*pi*(xi1*u + xi2*v))`` at the
    grid point of ``(s, m, n)``. Length-2N FFTs run along the radial axis,
    chirp-z along the slope axis.
    """
    img, N = _check_image(img)
    out = np.empty((2, N, 2 * N), dtype=complex)
    _sector_forward(img, out[0], N)
    _sector_forward(img.T, out[1], N)
    return out


def _sector_adjoint(data: np.ndarray, N: int) -> np.ndarray:
    rows = np.concatenate([data[:, N:].T, data[:, :N].T])  # rows n in FFT order
    full = sfft.ifft(_slope_plan(N).adjoint(rows), axis=0, overwrite_x=True)
    h = N // 2
    return np.concatenate([full[-h:], full[:h]]) * (2 * N)


def ppfft_adjoint(spec) -> np.ndarray:
    """Exact adjoint of :func:`ppfft_forward` (complex image)."""
    spec, N = _check_spectrum(spec)
    return _sector_adjoint(spec[0], N) + _sector_adjoint(spec[1], N).T


def ppfft_direct_oracle(img) -> np.ndarray:
    """Brute-force pseudo-polar DTFT, O(N^4); refuses ``N > 64``.

    Phases are reduced exactly in integer arithmetic over the common
    denominator ``2N^2`` before exponentiation.
    """
    img, N = _check_image(img)
    if N > ORACLE_MAX_N:
        raise ValueError(f"direct oracle refuses N={N} > {ORACLE_MAX_N}")
    D = 2 * N * N
    u = np.arange(-N // 2, N // 2)
    n = radial_indices(N)
    m = np.arange(-N // 2, N // 2)
    img = img.astype(complex)
    out = np.empty((2, N, 2 * N), dtype=complex)
    # radial phase n*u/(2N) = n*u*N / D ; slope phase n*m*v/N^2 = 2*n*m*v / D
    E_rad = np.exp(-2j * np.pi * (np.mod(np.outer(n, u) * N, D) / D))  # (2N, N)
    for mi, mm in enumerate(m):
        E_slope = np.exp(-2j * np.pi * (np.mod(np.outer(n, u) * 2 * mm, D) / D))
        # horizontal: radial on u (axis 0), slope on v (axis 1)
        out[0, mi] = np.einsum("nu,uv,nv->n", E_rad, img, E_slope)
        out[1, mi] = np.einsum("nv,uv,nu->n", E_rad, img, E_slope)
    return out


def _normal_op(N: int, w: np.ndarray):
    def apply(x):
        x = x.reshape(N, N)
        return ppfft_adjoint(w * ppfft_forward(x)).real.ravel()

    return LinearOperator((N * N, N * N), matvec=apply, dtype=float)


def ppfft_inverse(spec, tol: float = 1e-9, max_iter: int = 200, *, x0=None,
                  full_output: bool = False):
    """Weighted least-squares inverse of :func:`ppfft_forward`.

    Minimizes ``sum w * |ppfft_forward(x) - spec|**2`` over real images ``x``
    by conjugate gradients on the normal equations, with the density weights
    of :func:`shearct.grid.density_weights`. Stops at relative residual
    ``tol`` or after ``max_iter`` iterations; a non-converged result is still
    returned. With ``full_output`` a :class:`SolveInfo` is returned as well.
    """
    spec, N = _check_spectrum(spec)
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = density_weights(N)
    b = ppfft_adjoint(w * spec).real.ravel()
    A = _normal_op(N, w)
    x, info = _run_cg(A, b, tol, max_iter, x0=None if x0 is None else np.ravel(x0))
    if not info.converged:
        log.warning("ppfft_inverse stopped at residual %.3g after %d iterations",
                    info.residual, info.iterations)
    x = x.reshape(N, N)
    return (x, info) if full_output else x


def _run_cg(A, b, tol, max_iter, x0=None, M=None) -> tuple[np.ndarray, SolveInfo]:
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return np.zeros_like(b), SolveInfo(0, 0.0, True)
    count = 0

    def cb(_):
        nonlocal count
        count += 1

    x, _ = cg(A, b, x0=x0, rtol=tol, atol=0.0, maxiter=max_iter, M=M, callback=cb)
    res = float(np.linalg.norm(b - A @ x) / bnorm)
    return x, SolveInfo(count, res, res <= tol * (1 + 1e-6))
