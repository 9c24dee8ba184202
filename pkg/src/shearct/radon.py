"""Discrete Radon transform on the linogram and the additive noise model.

A linogram line is the inverse unitary DFT, along the pseudo-radial index,
of one pseudo-polar line. A line of ``2N`` real samples cannot carry the
quadrature (sine) part of its Nyquist term ``n = -N``, which has no
conjugate partner on the grid; it is kept in :attr:`Linogram.nyquist` so the
Fourier-slice identity holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fourier import dft_unitary
from .grid import check_size
from .ppfft import ppfft_forward, ppfft_inverse

__all__ = [
    "Linogram",
    "NoiseSpec",
    "radon_forward",
    "radon_to_spectrum",
    "radon_inverse",
    "add_noise",
    "REALNESS_TOL",
]

REALNESS_TOL = 1e-9


@dataclass(frozen=True)
class Linogram:
    """Projections: ``data[sector, m + N/2, t + N]`` with intercept ``t`` in
    ``[-N, N)``. ``nyquist[sector, m + N/2]`` is the imaginary part of the
    line's ``n = -N`` spectral sample (zero for measured data)."""

    data: np.ndarray
    nyquist: np.ndarray = field(default=None)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 3 or data.shape[0] != 2 or data.shape[2] != 2 * data.shape[1]:
            raise ValueError(f"expected (2, N, 2N) linogram, got {data.shape}")
        check_size(data.shape[1])
        nyq = np.zeros(data.shape[:2]) if self.nyquist is None else np.asarray(self.nyquist, float)
        if nyq.shape != data.shape[:2]:
            raise ValueError("nyquist must have shape (2, N)")
        if not (np.all(np.isfinite(data)) and np.all(np.isfinite(nyq))):
            raise ValueError("linogram contains NaN or Inf")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "nyquist", nyq)

    @property
    def N(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be >= 0")


def _lines_inverse(spec: np.ndarray) -> np.ndarray:
    shifted = np.fft.ifftshift(spec, axes=-1)
    return np.fft.fftshift(dft_unitary(shifted, "inverse"), axes=-1)


def _lines_forward(lines: np.ndarray) -> np.ndarray:
    shifted = np.fft.ifftshift(lines, axes=-1)
    return np.fft.fftshift(dft_unitary(shifted, "forward"), axes=-1)


def radon_forward(img) -> Linogram:
    """Linogram of an image via the Fourier-slice theorem."""
    spec = ppfft_forward(img)
    N = spec.shape[1]
    nyquist = spec[..., 0].imag.copy()
    hermitian = spec.copy()
    hermitian[..., 0] = hermitian[..., 0].real
    lines = _lines_inverse(hermitian)
    resid = np.abs(lines.imag).max() if lines.size else 0.0
    scale = max(1.0, np.abs(lines.real).max())
    if resid > REALNESS_TOL * scale * N:
        raise ArithmeticError(f"non-real linogram residue {resid:.3g}")
    return Linogram(lines.real, nyquist)


def radon_to_spectrum(lin: Linogram) -> np.ndarray:
    """Pseudo-polar spectrum of a linogram: unitary DFT along each line."""
    spec = _lines_forward(lin.data.astype(complex))
    spec[..., 0] += 1j * lin.nyquist
    return spec


def radon_inverse(lin: Linogram, tol: float = 1e-9, max_iter: int = 200, *,
                  full_output: bool = False):
    """Image from a linogram: :func:`radon_to_spectrum` then ``ppfft_inverse``."""
    return ppfft_inverse(radon_to_spectrum(lin), tol, max_iter, full_output=full_output)


def add_noise(lin: Linogram, ns: NoiseSpec) -> Linogram:
    """Add i.i.d. N(0, sigma^2) to every measured intercept sample.

    Samples are drawn from a Philox counter-based generator keyed by
    ``ns.seed`` in row-major sample order, so the output depends only on
    ``(lin, sigma, seed)``. Duplicated slope -1 lines get independent draws.
    The Nyquist quadrature channel is not a measured sample and is left as is.
    """
    if ns.sigma == 0:
        return lin
    rng = np.random.Generator(np.random.Philox(key=int(ns.seed) & (2**64 - 1)))
    noise = rng.standard_normal(lin.data.shape)
    return Linogram(lin.data + ns.sigma * noise, lin.nyquist)
