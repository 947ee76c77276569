"""Randomized SVD with subspace iteration and rank-reduced weight compression."""
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

DEFAULT_P_ITERS = 5
DEFAULT_ENERGY_FRACTION = 0.9


@dataclass(frozen=True, eq=False)
class SVDTriple:
    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    def reconstruct(self):
        return (self.U * self.S) @ self.V.T


def _orth(M):
    Q, _ = np.linalg.qr(M)
    return Q


def rsvd(A, r, p_iters=DEFAULT_P_ITERS, seed=0):
    """Rank-``r`` randomized SVD of ``A`` (n x m).

    ``p_iters`` is both the oversampling count of the Gaussian sketch (which
    has ``r + p_iters`` columns) and the number of subspace iterations.
    """
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    r, p_iters = int(r), int(p_iters)
    if r < 1 or p_iters < 1:
        raise ParameterError(f"need r >= 1 and p_iters >= 1, got r={r}, p_iters={p_iters}")
    if r + p_iters >= n:
        raise ParameterError(f"r + p_iters = {r + p_iters} must be < n = {n}")
    if r > min(n, m):
        raise ParameterError(f"r = {r} exceeds min(A.shape) = {min(n, m)}")

    rng = np.random.default_rng(seed)
    omega = rng.standard_normal((m, r + p_iters))
    Q = _orth(A @ omega)
    for _ in range(p_iters):
        G = _orth(A.T @ Q)
        Q = _orth(A @ G)

    B = Q.T @ A
    Ub, S, Vt = np.linalg.svd(B, full_matrices=False)
    U = Q @ Ub
    return SVDTriple(U[:, :r], S[:r], Vt[:r].T)


def exact_svd(A, r=None):
    U, S, Vt = np.linalg.svd(np.asarray(A, dtype=float), full_matrices=False)
    r = len(S) if r is None else r
    return SVDTriple(U[:, :r], S[:r], Vt[:r].T)


def factorize(A, r, p_iters=DEFAULT_P_ITERS, seed=0):
    """``rsvd`` when its preconditions hold, otherwise the exact truncated SVD."""
    n, m = np.shape(A)
    r = max(1, min(int(r), n, m))
    if r + p_iters < n:
        return rsvd(A, r, p_iters, seed)
    return exact_svd(A, r)


def singular_values(A):
    return np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)


def check_optimized_rank(S, fraction=DEFAULT_ENERGY_FRACTION):
    """Smallest r whose cumulative singular-value sum reaches ``fraction`` of the total."""
    S = np.asarray(S, dtype=float)
    if S.size == 0:
        raise ParameterError("singular value list is empty")
    if not 0.0 < fraction <= 1.0:
        raise ParameterError(f"fraction must lie in (0, 1], got {fraction}")
    total = S.sum()
    if total <= 0.0:
        return 1
    cum = np.cumsum(S)
    # relative slack absorbs summation rounding when fraction == 1
    r = int(np.searchsorted(cum, fraction * total * (1.0 - 1e-12))) + 1
    return min(r, S.size)


def energy_fraction(S, r):
    """Return ``(E, F_s)`` for keeping the leading ``r`` of ``len(S)`` singular values."""
    S = np.asarray(S, dtype=float)
    R = S.size
    r = int(r)
    if not 1 <= r <= R:
        raise ParameterError(f"r must lie in [1, {R}], got {r}")
    total = S.sum()
    E = 1.0 if total == 0.0 else float(S[:r].sum() / total)
    return E, r / R


def compress_opt(W, p_iters=DEFAULT_P_ITERS, seed=0, fraction=DEFAULT_ENERGY_FRACTION):
    """Low-rank approximation of ``W`` keeping ``fraction`` of its singular-value energy."""
    W = np.asarray(W, dtype=float)
    if W.size == 0:
        raise ParameterError("cannot compress an empty matrix")
    # full rank, so the threshold is taken against the whole spectrum
    svd = factorize(W, min(W.shape), p_iters, seed)
    r_opt = check_optimized_rank(svd.S, fraction)
    return (svd.U[:, :r_opt] * svd.S[:r_opt]) @ svd.V[:, :r_opt].T


def ratio_rank(shape, c_r):
    """Rank kept at compression ratio ``c_r``: ``max(1, floor((1 - c_r) * min(shape)))``."""
    if not 0.0 <= c_r < 1.0:
        raise ParameterError(f"compression ratio must lie in [0, 1), got {c_r}")
    # round before flooring so that e.g. 0.05 * 100 is not floored to 4
    return max(1, int(np.floor(round((1.0 - c_r) * min(shape), 9))))


def compress_at_ratio(W, c_r, p_iters=DEFAULT_P_ITERS, seed=0):
    W = np.asarray(W, dtype=float)
    r = ratio_rank(W.shape, c_r)
    return factorize(W, r, p_iters, seed).reconstruct()
