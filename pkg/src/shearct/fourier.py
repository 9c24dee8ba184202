"""One-dimensional Fourier kernels: unitary DFT and Bluestein chirp-z.

Sign convention used throughout the package: forward transforms carry
``exp(-2j*pi*...)``. Sums with a positive exponent are obtained by negating
the chirp-z fractional factor.
"""

from __future__ import annotations

import numpy as np
import scipy.fft as sfft

__all__ = [
    "dft_unitary",
    "chirp_z",
    "chirp_z_direct",
    "chirp_z_batch",
    "ChirpPlan",
    "frac_product",
]


def _check_finite(v: np.ndarray) -> None:
    if not np.all(np.isfinite(v)):
        raise ValueError("input contains NaN or Inf")


def dft_unitary(v, direction: str = "forward", axis: int = -1) -> np.ndarray:
    """Unitary DFT along ``axis``.

    ``forward`` computes ``V[k] = M**-0.5 * sum_u v[u] exp(-2j*pi*u*k/M)`` with
    zero-based indices; ``inverse`` is its exact inverse. Callers that use
    centered indices wrap this with ``ifftshift``/``fftshift``.
    """
    v = np.asarray(v)
    if v.shape[axis] < 1:
        raise ValueError("length must be >= 1")
    _check_finite(v)
    if direction == "forward":
        return np.fft.fft(v, axis=axis, norm="ortho")
    if direction == "inverse":
        return np.fft.ifft(v, axis=axis, norm="ortho")
    raise ValueError(f"unknown direction {direction!r}")


def frac_product(alpha, q) -> np.ndarray:
    """Fractional part of ``alpha * q`` for integer-valued ``q`` up to 2**26.

    Veltkamp split of ``alpha`` keeps the high product exact, so the phase of
    ``exp(2j*pi*alpha*q)`` stays accurate even when ``alpha*q`` is large.
    """
    alpha = np.asarray(alpha, dtype=float)
    q = np.asarray(q, dtype=float)
    t = alpha * 134217729.0  # 2**27 + 1
    hi = t - (t - alpha)
    lo = alpha - hi
    p = hi * q
    return (p - np.floor(p)) + lo * q


_BLOCK_ELEMS = 1 << 14


def _next_pow2(n: int) -> int:
    return 1 << (int(n) - 1).bit_length()


class ChirpPlan:
    """Precomputed row-wise chirp-z with centered index offsets.

    Applies ``G[r, k] = sum_i x[r, i] exp(-2j*pi*alpha[r]*(in0 + i)*(out0 + k))``
    for ``i < M`` and ``k < K`` through Bluestein's identity
    ``u*k = (u**2 + k**2 - (k-u)**2) / 2`` and a zero-padded FFT convolution of
    power-of-two length ``>= M + K - 1``. The chirps and the kernel spectrum
    are built once, so repeated applications cost three FFTs per row.
    :meth:`adjoint` reuses the same kernel spectrum.
    """

    def __init__(self, alpha, M: int, K: int, in0: int = 0, out0: int = 0):
        M, K = int(M), int(K)
        if M < 1 or K < 1:
            raise ValueError("M and K must be >= 1")
        # a scalar alpha keeps one kernel row that broadcasts over the input rows
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        if alpha.ndim != 1:
            raise ValueError("alpha must be a scalar or a 1-D array")
        alpha = alpha[:, None]
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha must be finite")
        self.M, self.K = M, K
        self.L = L = _next_pow2(M + K - 1)
        half = 0.5 * alpha
        u = np.arange(M)
        k = np.arange(K)
        # offsets: (in0+u)(out0+k) = u*k + u*out0 + in0*(out0+k)
        self.pre = np.exp(-2j * np.pi * (frac_product(half, u * u) + frac_product(alpha, u * out0)))
        self.post = np.exp(-2j * np.pi * (frac_product(half, k * k)
                                          + frac_product(alpha, in0 * (out0 + k))))
        # kernel b[t] = exp(+i*pi*alpha*t^2) for t in [-(M-1), K-1], stored circularly
        b = np.zeros((alpha.shape[0], L), dtype=complex)
        b[:, :K] = np.exp(2j * np.pi * frac_product(half, k**2))
        if M > 1:
            t = np.arange(-(M - 1), 0)
            b[:, L - (M - 1):] = np.exp(2j * np.pi * frac_product(half, t**2))
        self.kernel = sfft.fft(b, axis=1)
        self._kernel_conj = np.conj(self.kernel)
        self._pre_conj = np.conj(self.pre)
        self._post_conj = np.conj(self.post)

    def _apply(self, x, pre, kernel, post, n_out):
        x = np.atleast_2d(x)
        rows = x.shape[0]
        out = np.empty((rows, n_out), dtype=complex)
        # row blocks keep the FFT working set cache-sized
        step = max(1, _BLOCK_ELEMS // self.L)
        for i in range(0, rows, step):
            sl = slice(i, i + step)
            rsl = sl if kernel.shape[0] > 1 else slice(None)
            f = sfft.fft(x[sl] * pre[rsl], n=self.L, axis=1, overwrite_x=True)
            f *= kernel[rsl]
            np.multiply(sfft.ifft(f, axis=1, overwrite_x=True)[:, :n_out], post[rsl], out=out[sl])
        return out

    def __call__(self, x) -> np.ndarray:
        return self._apply(x, self.pre, self.kernel, self.post, self.K)

    def adjoint(self, y) -> np.ndarray:
        """Conjugate transpose: ``(R, K)`` -> ``(R, M)``."""
        return self._apply(y, self._post_conj, self._kernel_conj, self._pre_conj, self.M)


def chirp_z_batch(x, alpha, K: int) -> np.ndarray:
    """Row-wise chirp-z: ``G[r, k] = sum_u x[r, u] exp(-2j*pi*alpha[r]*u*k)``.

    ``x`` has shape ``(R, M)`` and ``alpha`` shape ``(R,)`` (or scalar).
    """
    x = np.atleast_2d(np.asarray(x, dtype=complex))
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim and alpha.shape != (x.shape[0],):
        raise ValueError("alpha must be a scalar or have one entry per row")
    return ChirpPlan(alpha, x.shape[1], K)(x)


def chirp_z(v, alpha: float, K: int) -> np.ndarray:
    """Chirp-z transform of a single vector.

    Returns ``G[k] = sum_{u<M} v[u] exp(-2j*pi*alpha*u*k)`` for ``k < K``.
    ``alpha = 1/M`` reproduces the unnormalized DFT.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("v must be a non-empty 1-D vector")
    _check_finite(v)
    if not np.isfinite(alpha):
        raise ValueError("alpha must be finite")
    return chirp_z_batch(v[None, :], alpha, K)[0]


def chirp_z_direct(v, alpha: float, K: int) -> np.ndarray:
    """O(M*K) reference evaluation of :func:`chirp_z` in extended precision."""
    v = np.asarray(v, dtype=complex)
    if int(K) < 1:
        raise ValueError("K must be >= 1")
    u = np.arange(v.size, dtype=np.longdouble)
    k = np.arange(int(K), dtype=np.longdouble)
    ph = np.longdouble(alpha) * np.outer(k, u)
    ph = 2 * np.pi * (ph - np.floor(ph))
    E = (np.cos(ph) - 1j * np.sin(ph)).astype(complex)
    return E @ v
