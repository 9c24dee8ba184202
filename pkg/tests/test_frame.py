import numpy as np
import pytest
from hypothesis import given, strategies as st

from shearct.frame import (
    FrameParams, build_masks, check_partition, default_scales, meyer_nu, psi1_hat, psi2_hat,
)
from shearct.grid import slope_indices


def test_meyer_nu_values():
    assert meyer_nu(0) == 0 and meyer_nu(1) == 1
    assert meyer_nu(-3) == 0 and meyer_nu(7) == 1
    assert meyer_nu(0.5) == pytest.approx(0.5, abs=1e-15)
    assert meyer_nu(0.25) + meyer_nu(0.75) == pytest.approx(1, abs=1e-15)


@given(st.floats(-1, 2))
def test_meyer_nu_symmetry(t):
    assert meyer_nu(t) + meyer_nu(1 - t) == pytest.approx(1, abs=1e-14)


def test_psi1_values():
    assert psi1_hat(3 / 16) == pytest.approx(1, abs=1e-15)
    assert psi1_hat(0.5) == 0 and psi1_hat(1 / 16) == 0
    w = np.linspace(-0.6, 0.6, 101)
    np.testing.assert_array_equal(psi1_hat(w), psi1_hat(-w))


def test_psi2_values():
    assert psi2_hat(1) == pytest.approx(0, abs=1e-16) and psi2_hat(-1) == pytest.approx(0, abs=1e-16)
    assert psi2_hat(0) == 1
    assert psi2_hat(1.5) == 0
    w = 0.3
    total = psi2_hat(w - 1) ** 2 + psi2_hat(w) ** 2 + psi2_hat(w + 1) ** 2
    assert total == pytest.approx(1, abs=1e-14)


@given(st.floats(-1, 1), st.integers(0, 3))
def test_psi2_shear_sum_is_one(w, j):
    # at scale j the shears l = -2^j .. 2^j tile the slope interval [-1, 1]
    total = sum(psi2_hat(2**j * w - l) ** 2 for l in range(-(2**j), 2**j + 1))
    assert total == pytest.approx(1, abs=1e-14)


def test_default_scales():
    assert default_scales(128) == 2
    assert default_scales(256) == 3
    assert FrameParams(8).J == 1


@pytest.mark.parametrize("N, J", [(8, 2), (16, 3), (64, 0)])
def test_frame_params_rejects(N, J):
    with pytest.raises(ValueError):
        FrameParams(N, J)


@pytest.mark.parametrize("J", [1, 2, 3])
def test_partition_of_unity(J):
    assert check_partition(build_masks(FrameParams(64, J))) <= 1e-12


def test_subband_count():
    ms = build_masks(FrameParams(64, 2))
    assert len(ms.subbands) == 2 * ((2 + 1) + (4 + 1))
    assert len(set(ms.keys)) == len(ms.keys)


def test_removing_a_subband_breaks_partition():
    ms = build_masks(FrameParams(64, 2))
    sb = ms.subbands[5]
    dev = check_partition(ms.without(sb.key))
    assert dev > 0.1
    assert dev == pytest.approx(float(np.max(sb.mask() ** 2)), abs=1e-12)


@pytest.mark.parametrize("J", [1, 2, 3])
def test_window_properties(J):
    N = 64
    ms = build_masks(FrameParams(N, J))
    slope = 2 * slope_indices(N) / N
    for sb in ms.subbands:
        assert 0 <= sb.radial.min() and sb.radial.max() <= 1
        assert 0 <= sb.angular.min() and sb.angular.max() <= 1
        # angular support stays inside the cone of the shear
        centre = sb.shear / 2**sb.j
        assert np.all(sb.angular[np.abs(slope - centre) >= 2**-sb.j] <= 1e-15)
        m = sb.mask()
        assert not np.any(m[1 - int(sb.sector)])
    assert 0 <= ms.lowpass.min() and ms.lowpass.max() <= 1
    radials = {sb.j: sb.radial for sb in ms.subbands}
    for j in range(J):
        for k in range(j + 2, J):
            assert not np.any(radials[j] * radials[k])
        shears = [sb.angular for sb in ms.subbands if sb.j == j and int(sb.sector) == 0]
        np.testing.assert_allclose(np.sum(np.square(shears), axis=0), 1, atol=1e-14)


@pytest.mark.parametrize("N, J", [(4, 1), (16, 2), (64, 3), (128, 2), (256, 4)])
def test_lowpass_closed_support(N, J):
    # the low-pass window lives on |n| <= N / 4^J, which holds at least n = -1, 0, 1
    ms = build_masks(FrameParams(N, J))
    n = np.arange(-N, N)
    edge = N // 4**J
    assert edge >= 1
    assert ms.lowpass[N] == 1
    assert np.all(ms.lowpass[np.abs(n) > edge] == 0)
    assert np.all(ms.lowpass[np.abs(n) < edge] > 0)
