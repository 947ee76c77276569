import numpy as np
import pytest

from fcae.errors import ParameterError
from fcae.rsvd import (check_optimized_rank, compress_at_ratio, compress_opt, energy_fraction, ratio_rank,
                       rsvd, singular_values)


def _orthonormal_cols(M):
    return np.abs(M.T @ M - np.eye(M.shape[1])).max()


def test_rank_one_recovery(rng):
    u, v = rng.standard_normal(20), rng.standard_normal(15)
    A = 3.0 * np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))
    out = rsvd(A, 1, 5, seed=1)
    assert out.S[0] == pytest.approx(3.0, abs=1e-8)
    assert np.linalg.norm(out.reconstruct() - A) < 1e-8


def test_embedded_diagonal():
    A = np.zeros((8, 6))
    A[:5, :5] = np.diag([5.0, 4.0, 3.0, 2.0, 1.0])
    out = rsvd(A, 3, 2, seed=0)
    np.testing.assert_allclose(out.S, np.linalg.svd(A, compute_uv=False)[:3], atol=1e-6)


def test_near_optimal_on_random_matrix(rng):
    A = rng.standard_normal((100, 80))
    s = np.linalg.svd(A, compute_uv=False)
    optimal = np.sqrt(np.sum(s[10:] ** 2))
    out = rsvd(A, 10, 5, seed=3)
    assert np.linalg.norm(A - out.reconstruct()) <= 1.05 * optimal


def test_factors_are_orthonormal_and_sorted(rng):
    out = rsvd(rng.standard_normal((60, 40)), 8, 5, seed=4)
    assert _orthonormal_cols(out.U) < 1e-8 and _orthonormal_cols(out.V) < 1e-8
    assert np.all(np.diff(out.S) <= 0) and np.all(out.S >= 0)


def test_zero_matrix():
    out = rsvd(np.zeros((12, 9)), 3, 2, seed=0)
    np.testing.assert_array_equal(out.S, 0.0)
    assert _orthonormal_cols(out.U) < 1e-8 and _orthonormal_cols(out.V) < 1e-8


def test_deterministic_for_seed(rng):
    A = rng.standard_normal((30, 20))
    a, b = rsvd(A, 4, 3, seed=9), rsvd(A, 4, 3, seed=9)
    np.testing.assert_array_equal(a.U, b.U)
    np.testing.assert_array_equal(a.S, b.S)


@pytest.mark.parametrize("r, p", [(0, 2), (3, 0), (6, 2), (3, 5)])
def test_parameter_errors(r, p):
    with pytest.raises(ParameterError):
        rsvd(np.ones((8, 6)), r, p)


def test_exact_when_rank_below_target(rng):
    A = rng.standard_normal((50, 3)) @ rng.standard_normal((3, 40))
    assert np.linalg.norm(rsvd(A, 5, 5, seed=2).reconstruct() - A) < 1e-8


@pytest.mark.parametrize("S, expected", [
    ([10, 0, 0], 1),
    ([4, 3, 2, 1], 3),
    ([1, 1, 1, 1, 1], 5),
    ([0, 0, 0], 1),
])
def test_check_optimized_rank(S, expected):
    assert check_optimized_rank(S, 0.9) == expected


def test_energy_fraction():
    assert energy_fraction([4, 3, 2, 1], 4) == (1.0, 1.0)
    E, F = energy_fraction([4, 3, 2, 1], 2)
    assert E == pytest.approx(0.7) and F == 0.5
    with pytest.raises(ParameterError):
        energy_fraction([4, 3], 3)
    with pytest.raises(ParameterError):
        energy_fraction([4, 3], 0)


def test_compress_opt_keeps_exact_low_rank(rng):
    U, _ = np.linalg.qr(rng.standard_normal((30, 2)))
    V, _ = np.linalg.qr(rng.standard_normal((20, 2)))
    W = 5.0 * U @ V.T
    assert np.linalg.norm(compress_opt(W) - W) < 1e-6
    np.testing.assert_array_equal(compress_opt(np.zeros((10, 8))), 0.0)


def test_compress_opt_energy_bookkeeping(rng):
    W = rng.standard_normal((150, 250))
    Wc = compress_opt(W, seed=5)
    S = singular_values(W)
    r_opt = np.linalg.matrix_rank(Wc)
    assert energy_fraction(S, r_opt)[0] >= 0.9
    assert energy_fraction(S, r_opt - 1)[0] < 0.9
    # discarded values are the smallest, so their share of sum(S^2) is at most
    # their share of sum(S)
    err = np.linalg.norm(W - Wc)
    assert err ** 2 == pytest.approx(np.sum(S[r_opt:] ** 2), rel=1e-8)
    assert err / np.linalg.norm(W) <= np.sqrt(1 - 0.9)
    assert Wc.shape == W.shape


def test_ratio_rank_arithmetic():
    assert ratio_rank((100, 100), 0.5) == 50
    assert ratio_rank((150, 75), 0.95) == 3
    assert ratio_rank((100, 100), 0.95) == 5
    assert ratio_rank((4, 4), 0.99) == 1
    with pytest.raises(ParameterError):
        ratio_rank((4, 4), 1.0)


def test_compress_at_ratio_zero_is_lossless(rng):
    W = rng.standard_normal((40, 40))
    assert np.linalg.norm(W - compress_at_ratio(W, 0.0)) / np.linalg.norm(W) < 1e-6


def test_compress_at_ratio_error_monotone(rng):
    W = rng.standard_normal((150, 75))
    errors = [np.linalg.norm(W - compress_at_ratio(W, c, seed=1)) for c in np.arange(0.5, 0.96, 0.05)]
    assert all(a <= b + 1e-9 for a, b in zip(errors, errors[1:]))
