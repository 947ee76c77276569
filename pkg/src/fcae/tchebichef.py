"""Orthonormal discrete Tchebichef polynomials and 1-D moment transforms.

The basis matrix ``Q`` has shape ``(order, length)``; row ``m`` holds
``t_m(0), ..., t_m(N-1)``. Moments of a signal ``x`` are ``x @ Q.T`` and the
reconstruction is ``moments @ Q``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, InvalidLengthError, InvalidOrderError


@dataclass(frozen=True, eq=False)
class TchebichefBasis:
    length: int
    order: int
    Q: np.ndarray

    def __post_init__(self):
        self.Q.setflags(write=False)


@dataclass(frozen=True, eq=False)
class MomentVector:
    coeffs: np.ndarray
    basis_length: int


def recurrence_coefficients(m, N):
    """Coefficients (a1, a2) of t_m = a1 (2x+1-N) t_{m-1} + a2 t_{m-2}, m >= 2."""
    a1 = np.sqrt((4.0 * m * m - 1.0) / (N * N - m * m)) / m
    a2 = ((1.0 - m) / m) * np.sqrt((2.0 * m + 1.0) / (2.0 * m - 3.0)) \
        * np.sqrt((N * N - (m - 1.0) ** 2) / (N * N - m * m))
    return a1, a2


def _generate(N, p):
    # Stepping in the order direction loses orthogonality for N in the low
    # hundreds, so we step in x for every order at once and mirror the rest.
    n = np.arange(p, dtype=float)
    Q = np.empty((p, N))

    t0 = np.empty(p)
    t0[0] = 1.0 / np.sqrt(N)
    for m in range(1, p):
        t0[m] = -np.sqrt((N - m) / (N + m)) * np.sqrt((2 * m + 1) / (2 * m - 1)) * t0[m - 1]
    Q[:, 0] = t0
    Q[:, 1] = (1.0 + n * (n + 1.0) / (1.0 - N)) * t0

    half = (N + 1) // 2
    for x in range(2, half):
        g1 = (-n * (n + 1.0) - (2 * x - 1) * (x - N - 1) - x) / (x * (N - x))
        g2 = ((x - 1) * (x - N - 1)) / (x * (N - x))
        Q[:, x] = g1 * Q[:, x - 1] + g2 * Q[:, x - 2]
    parity = np.where(np.arange(p) % 2 == 0, 1.0, -1.0)
    Q[:, half:] = parity[:, None] * Q[:, N - half - 1::-1]

    x = np.arange(N, dtype=float)
    Q[0] = 1.0 / np.sqrt(N)
    if p > 1:
        Q[1] = (2.0 * x + 1.0 - N) * np.sqrt(3.0 / (N * (N * N - 1.0)))
    return Q


@lru_cache(maxsize=32)
def _cached(N, p):
    return TchebichefBasis(N, p, _generate(N, p))


def build_basis(length, order):
    """Return the (memoized) orthonormal Tchebichef basis of ``order`` rows."""
    length, order = int(length), int(order)
    if length < 2:
        raise InvalidLengthError(f"basis length must be >= 2, got {length}")
    if order < 1 or order > length:
        raise InvalidOrderError(f"order must be in [1, {length}], got {order}")
    return _cached(length, order)


def forward_moments(signal, basis):
    """Moments of one signal (1-D) or of each row of a 2-D batch."""
    x = np.asarray(signal, dtype=float)
    if x.shape[-1] != basis.length:
        raise DimensionError(f"signal length {x.shape[-1]} != basis length {basis.length}")
    coeffs = x @ basis.Q.T
    if coeffs.ndim == 1:
        return MomentVector(coeffs, basis.length)
    return coeffs


def inverse_moments(moments, basis):
    """Reconstruct a signal (or batch of signals) from its moments."""
    c = moments.coeffs if isinstance(moments, MomentVector) else np.asarray(moments, dtype=float)
    if c.shape[-1] != basis.order:
        raise DimensionError(f"got {c.shape[-1]} moments, basis has order {basis.order}")
    return c @ basis.Q
