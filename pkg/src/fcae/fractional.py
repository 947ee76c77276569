"""Caputo power-rule kernels used by fractional backpropagation.

For a weight ``w`` and order ``1 <= alpha < 2`` the Caputo derivative of a
power gives the multiplicative factor ``w**(1-alpha) / Gamma(2-alpha)`` on the
integer-order gradient and the regularizer term
``lambda * w**(2-alpha) / Gamma(3-alpha)``. Non-positive weights use the
magnitude (sign kept by the integer gradient, or restored for the regularizer)
and magnitudes below ``eps`` are clamped.
"""
import math

import numpy as np

from .errors import DomainError, ParameterError

DEFAULT_EPS = 1e-8


def check_alpha(alpha):
    alpha = float(alpha)
    if not 1.0 <= alpha < 2.0:
        raise ParameterError(f"fractional order must lie in [1, 2), got {alpha}")
    return alpha


def gamma_fn(x):
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_fn is defined here for x > 0 only, got {x}")
    return math.gamma(x)


def caputo_weight_factor(w, alpha, eps=DEFAULT_EPS):
    """``max(|w|, eps)**(1-alpha) / Gamma(2-alpha)``; identically 1 at alpha=1."""
    alpha = check_alpha(alpha)
    w = np.asarray(w, dtype=float)
    if alpha == 1.0:
        out = np.ones_like(w)
    else:
        out = np.maximum(np.abs(w), eps) ** (1.0 - alpha) / gamma_fn(2.0 - alpha)
    return out if out.ndim else float(out)


def caputo_reg_term(w, alpha, lam, eps=DEFAULT_EPS):
    """``lam * sign(w) * max(|w|, eps)**(2-alpha) / Gamma(3-alpha)``; ``lam*w`` at alpha=1."""
    alpha = check_alpha(alpha)
    w = np.asarray(w, dtype=float)
    if alpha == 1.0:
        out = lam * w
    else:
        mag = np.maximum(np.abs(w), eps) ** (2.0 - alpha) / gamma_fn(3.0 - alpha)
        out = lam * np.sign(w) * mag
    return out if out.ndim else float(out)
