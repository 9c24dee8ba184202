import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shearct.fourier import ChirpPlan, chirp_z, chirp_z_batch, chirp_z_direct, dft_unitary, frac_product

from conftest import crandn, rel


def naive_sum(v, alpha, K, in0=0, out0=0):
    """Double loop in Python floats, independent of the library oracle."""
    out = []
    for k in range(K):
        acc = 0j
        for u, x in enumerate(v):
            acc += x * np.exp(-2j * np.pi * alpha * (in0 + u) * (out0 + k))
        out.append(acc)
    return np.array(out)


def test_dft_unitary_constant():
    np.testing.assert_allclose(dft_unitary([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("M", [1, 2, 7, 128, 4096])
def test_dft_unitary_roundtrip_and_plancherel(rng, M):
    v = crandn(rng, M)
    f = dft_unitary(v, "forward")
    assert rel(dft_unitary(f, "inverse"), v) <= 1e-12
    assert abs(np.linalg.norm(f) - np.linalg.norm(v)) <= 1e-12 * np.linalg.norm(v)


def test_dft_unitary_rejects_bad_direction():
    with pytest.raises(ValueError):
        dft_unitary([1.0], "sideways")


def test_chirp_dft_of_constant():
    np.testing.assert_allclose(chirp_z([1, 1, 1, 1], 1 / 4, 4), [4, 0, 0, 0], atol=1e-14)


def test_chirp_zero_alpha_sums(rng):
    v = crandn(rng, 9)
    np.testing.assert_allclose(chirp_z(v, 0.0, 5), np.full(5, v.sum()), rtol=1e-13)


def test_chirp_matches_double_loop(rng):
    v = crandn(rng, 37)
    assert rel(chirp_z(v, 0.013, 51), naive_sum(v, 0.013, 51)) <= 1e-10


@given(st.integers(1, 64), st.integers(1, 64), st.floats(-2, 2, allow_nan=False))
def test_chirp_matches_direct_property(M, K, alpha):
    v = crandn(np.random.default_rng(M * 1000 + K), M)
    ref = chirp_z_direct(v, alpha, K)
    err = np.linalg.norm(chirp_z(v, alpha, K) - ref)
    assert err <= 1e-10 * max(np.linalg.norm(ref), np.linalg.norm(v) * np.sqrt(K))


def test_chirp_direct_oracle_agrees_with_double_loop(rng):
    v = crandn(rng, 20)
    assert rel(chirp_z_direct(v, 0.37, 11), naive_sum(v, 0.37, 11)) <= 1e-12


def test_chirp_large_size_fast(rng):
    v = crandn(rng, 512)
    t0 = time.perf_counter()
    fast = chirp_z(v, 0.123456, 512)
    assert time.perf_counter() - t0 < 1.0
    assert rel(fast, chirp_z_direct(v, 0.123456, 512)) <= 1e-10


def test_chirp_linearity(rng):
    x, y = crandn(rng, 30), crandn(rng, 30)
    a, b = 0.3 - 1.2j, 2.5
    lhs = chirp_z(a * x + b * y, 0.07, 40)
    rhs = a * chirp_z(x, 0.07, 40) + b * chirp_z(y, 0.07, 40)
    assert rel(lhs, rhs) <= 1e-12


@pytest.mark.parametrize("M, K, in0, out0", [(8, 8, -4, -4), (13, 29, 3, -7), (1, 5, 0, 0)])
def test_plan_centered_offsets_and_adjoint(rng, M, K, in0, out0):
    alpha = rng.uniform(-0.2, 0.2, 3)
    plan = ChirpPlan(alpha, M, K, in0, out0)
    x, y = crandn(rng, 3, M), crandn(rng, 3, K)
    for r in range(3):
        assert rel(plan(x)[r], naive_sum(x[r], alpha[r], K, in0, out0)) <= 1e-12
    assert abs(np.vdot(y, plan(x)) - np.vdot(plan.adjoint(y), x)) <= 1e-12 * abs(np.vdot(y, plan(x)))


def test_plan_blocks_many_rows(rng):
    # more rows than one cache block
    alpha = rng.uniform(-0.1, 0.1, 300)
    x = crandn(rng, 300, 16)
    out = ChirpPlan(alpha, 16, 16)(x)
    ref = np.stack([chirp_z_direct(x[r], alpha[r], 16) for r in range(300)])
    assert rel(out, ref) <= 1e-12


def test_batch_rejects_bad_alpha_shape(rng):
    with pytest.raises(ValueError):
        chirp_z_batch(crandn(rng, 3, 4), [0.1, 0.2], 4)


@pytest.mark.parametrize("args", [([], 0.1, 3), ([1.0], 0.1, 0), ([np.nan], 0.1, 2), ([1.0], np.inf, 2)])
def test_chirp_rejects_bad_input(args):
    with pytest.raises(ValueError):
        chirp_z(*args)


@pytest.mark.parametrize("alpha", [1 / 3, 0.013, -0.7071067811865476, 1 / 512**2])
@pytest.mark.parametrize("q", [1, 12345, 2**26 - 3])
def test_frac_product_matches_exact_rational(alpha, q):
    from fractions import Fraction

    exact = (Fraction(alpha) * q) % 1
    got = float(frac_product(np.array([alpha]), np.array([q]))[0]) % 1.0
    diff = abs(got - float(exact))
    assert min(diff, 1 - diff) <= 1e-15
