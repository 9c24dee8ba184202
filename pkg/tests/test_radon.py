import numpy as np
import pytest

from shearct.fourier import dft_unitary
from shearct.phantoms import PhantomSpec, make_phantom
from shearct.ppfft import ppfft_forward
from shearct.radon import Linogram, NoiseSpec, add_noise, radon_forward, radon_inverse, radon_to_spectrum

from conftest import rel


def test_zero_maps():
    N = 16
    lin = radon_forward(np.zeros((N, N)))
    assert not np.any(lin.data) and not np.any(lin.nyquist)
    assert not np.any(radon_to_spectrum(lin))
    assert not np.any(radon_inverse(lin))


@pytest.mark.parametrize("N", [32, 128])
def test_fourier_slice_identity(rng, N):
    x = rng.standard_normal((N, N))
    assert rel(radon_to_spectrum(radon_forward(x)), ppfft_forward(x)) <= 1e-12


def test_line_sums_conserve_mass(rng):
    N = 32
    x = rng.random((N, N))
    sums = radon_forward(x).data.sum(axis=-1)
    np.testing.assert_allclose(sums, np.sqrt(2 * N) * x.sum(), rtol=1e-9)


def test_dc_consistency(rng):
    N = 16
    x = rng.standard_normal((N, N))
    lines = radon_forward(x).data
    dc = dft_unitary(np.fft.ifftshift(lines, axes=-1))[..., 0]
    np.testing.assert_allclose(dc, x.sum(), atol=1e-9)


def test_delta_gives_identical_lines():
    N = 16
    x = np.zeros((N, N))
    x[N // 2, N // 2] = 1
    lines = radon_forward(x).data.reshape(-1, 2 * N)
    profile = np.fft.fftshift(dft_unitary(np.ones(2 * N), "inverse")).real
    np.testing.assert_allclose(lines, np.broadcast_to(profile, lines.shape), atol=1e-12)


def test_inverse_shepp_logan_roundtrip():
    x = make_phantom(PhantomSpec("shepp_logan", 64))
    assert rel(radon_inverse(radon_forward(x)), x) <= 1e-5


def test_inverse_is_linear(rng):
    N = 16
    a, b = radon_forward(rng.standard_normal((N, N))), radon_forward(rng.standard_normal((N, N)))
    combo = Linogram(2 * a.data - 3 * b.data, 2 * a.nyquist - 3 * b.nyquist)
    lhs = radon_inverse(combo, tol=1e-13)
    rhs = 2 * radon_inverse(a, tol=1e-13) - 3 * radon_inverse(b, tol=1e-13)
    assert rel(lhs, rhs) <= 1e-10


def test_noise_zero_sigma_is_identity(rng):
    lin = radon_forward(rng.standard_normal((8, 8)))
    out = add_noise(lin, NoiseSpec(0.0, 5))
    np.testing.assert_array_equal(out.data, lin.data)


def test_noise_is_deterministic_and_seed_dependent():
    lin = radon_forward(np.zeros((16, 16)))
    a = add_noise(lin, NoiseSpec(1.0, 42)).data
    b = add_noise(lin, NoiseSpec(1.0, 42)).data
    c = add_noise(lin, NoiseSpec(1.0, 43)).data
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_noise_std_and_spectral_variance():
    N = 128
    lin = radon_forward(np.zeros((N, N)))
    noisy = add_noise(lin, NoiseSpec(1.0, 0))
    assert abs(noisy.data.std() - 1) <= 0.02
    np.testing.assert_array_equal(noisy.nyquist, lin.nyquist)
    pooled = []
    for seed in range(8):  # 8 * 4 N^2 > 10^6 samples
        pooled.append(radon_to_spectrum(add_noise(lin, NoiseSpec(1.0, seed))).ravel())
    var = np.mean(np.abs(np.concatenate(pooled)) ** 2)
    assert abs(var - 1) <= 0.05


@pytest.mark.parametrize("bad", [
    dict(data=np.zeros((2, 4, 7))),
    dict(data=np.zeros((3, 4, 8))),
    dict(data=np.full((2, 4, 8), np.inf)),
    dict(data=np.zeros((2, 4, 8)), nyquist=np.zeros((2, 5))),
])
def test_linogram_validation(bad):
    with pytest.raises(ValueError):
        Linogram(**bad)


def test_noise_spec_rejects_negative_sigma():
    with pytest.raises(ValueError):
        NoiseSpec(-1.0)
