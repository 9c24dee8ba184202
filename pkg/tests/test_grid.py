import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shearct.grid import (
    GridIndex, Sector, check_size, density_weights, duplicate_pairs, grid_coordinates,
    grid_point,
)

H, V = Sector.HORIZONTAL, Sector.VERTICAL


def brute_force_duplicates(N):
    """Coincident grid points found by exact rational coordinate comparison."""
    seen = {}
    for s, m, n in itertools.product((H, V), range(-N // 2, N // 2), range(-N, N)):
        key = tuple(round(c * 4 * N * N) for c in grid_point(GridIndex(s, m, n), N))
        seen.setdefault(key, []).append(GridIndex(s, m, n))
    return {k: v for k, v in seen.items() if len(v) > 1}


@pytest.mark.parametrize("idx, N, expected", [
    (GridIndex(H, 0, 4), 8, (0.25, 0.0)),
    (GridIndex(V, 2, -4), 8, (-0.125, -0.25)),
    (GridIndex(H, -4, 4), 8, (0.25, -0.25)),
])
def test_grid_point_examples(idx, N, expected):
    assert grid_point(idx, N) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("idx", [GridIndex(H, 4, 0), GridIndex(H, 0, 8), GridIndex(V, -5, 0)])
def test_grid_point_rejects_out_of_range(idx):
    with pytest.raises(ValueError):
        grid_point(idx, 8)


@pytest.mark.parametrize("N", [0, 3, -2, 2.5, True])
def test_check_size_rejects(N):
    with pytest.raises(ValueError):
        check_size(N)


@given(st.sampled_from([4, 8, 16]), st.data())
def test_grid_point_max_norm_and_index_recovery(N, data):
    s = data.draw(st.sampled_from([H, V]))
    m = data.draw(st.integers(-N // 2, N // 2 - 1))
    n = data.draw(st.integers(-N, N - 1))
    xi1, xi2 = grid_point(GridIndex(s, m, n), N)
    assert max(abs(xi1), abs(xi2)) == pytest.approx(abs(n) / (2 * N), abs=1e-15)
    assert -0.5 <= xi1 <= 0.5 and -0.5 <= xi2 <= 0.5
    if 0.5 in (xi1, xi2):  # only the far end of the slope -1 line reaches +1/2
        assert (m, n) == (-N // 2, -N)
    if n != 0:
        radial, other = (xi1, xi2) if s == H else (xi2, xi1)
        assert round(radial * 2 * N) == n
        assert round(other / radial * N / 2) == m


def test_grid_coordinates_match_grid_point():
    N = 8
    xi1, xi2 = grid_coordinates(N)
    assert xi1.shape == xi2.shape == (2, N, 2 * N)
    for s, m, n in itertools.product((H, V), range(-N // 2, N // 2), range(-N, N)):
        pos = GridIndex(s, m, n).position(N)
        assert (xi1[pos], xi2[pos]) == grid_point(GridIndex(s, m, n), N)


def test_duplicate_pairs_examples():
    pairs = duplicate_pairs(4)
    assert (GridIndex(H, -2, 1), GridIndex(V, -2, -1)) in pairs
    assert all(GridIndex(H, 0, 1) not in p for p in pairs)
    assert len(duplicate_pairs(8)) == 15


@pytest.mark.parametrize("N", [4, 8, 16])
def test_duplicate_pairs_match_brute_force(N):
    groups = brute_force_duplicates(N)
    origin = [g for g in groups.values() if all(i.n == 0 for i in g)]
    assert len(origin) == 1  # n = 0 is shared by every line
    off_origin = {frozenset(g) for g in groups.values() if any(i.n != 0 for i in g)}
    listed = {frozenset(p) for p in duplicate_pairs(N) if p[0].n != 0}
    assert off_origin == listed
    for a, b in duplicate_pairs(N):
        assert grid_point(a, N) == pytest.approx(grid_point(b, N), abs=1e-15)


@pytest.mark.parametrize("N", [4, 8, 16, 64, 256])
def test_weights_sum_to_one_and_nonnegative(N):
    w = density_weights(N)
    assert w.shape == (2, N, 2 * N)
    assert np.all(w >= 0)
    assert abs(w.sum() - 1) <= 1e-6


@pytest.mark.parametrize("N", [8, 32])
def test_weights_symmetries(N):
    w = density_weights(N)
    np.testing.assert_array_equal(w[0], w[1])          # sector swap
    np.testing.assert_allclose(w, w[:, :, ::-1][:, :, np.r_[-1, 0:2 * N - 1]], rtol=1e-15)  # |n|
    # strictly increasing in |n| away from n = 0
    pos = w[:, :, N + 1:]
    assert np.all(np.diff(pos, axis=-1) > 0)


def test_duplicate_line_carries_half_weight():
    N = 16
    w = density_weights(N)
    for a, b in duplicate_pairs(N):
        if a.n == 0:
            continue
        assert w[a.position(N)] == pytest.approx(w[b.position(N)], rel=1e-14)
        # the polar area element is |n| / (2 N^3) on every line, whatever its slope
        assert w[a.position(N)] == pytest.approx(0.5 * w[0, 1, a.n + N], rel=1e-14)


def test_weights_follow_polar_area_element():
    N = 16
    w = density_weights(N)
    raw = np.zeros((2, N, 2 * N))
    for s, m, n in itertools.product((0, 1), range(-N // 2, N // 2), range(-N, N)):
        slope = 2 * m / N
        radius = abs(n) / (2 * N) * np.hypot(1, slope) if n else 1 / (8 * N)
        dsigma, dtheta = np.hypot(1, slope) / (2 * N), (2 / N) / (1 + slope**2)
        raw[s, m + N // 2, n + N] = radius * dsigma * dtheta
        if m == -N // 2 and n > -N:
            raw[s, m + N // 2, n + N] /= 2
    np.testing.assert_allclose(w, raw / raw.sum(), rtol=1e-13)


def test_weights_are_read_only():
    with pytest.raises(ValueError):
        density_weights(8)[0, 0, 0] = 1.0
