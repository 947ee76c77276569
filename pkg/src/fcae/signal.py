"""Signal-domain helpers: noise, fragmentation, min-max scaling and metrics."""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRangeError, DimensionError, ParameterError, UndefinedReferenceError


@dataclass(eq=False)
class Signal:
    samples: np.ndarray
    sample_rate_hz: float = 250.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise DimensionError("a signal must be a non-empty 1-D array")
        if not np.all(np.isfinite(self.samples)):
            raise ParameterError("signal contains non-finite samples")

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class NormState:
    min_val: float | np.ndarray
    max_val: float | np.ndarray

    @property
    def per_feature(self):
        return np.ndim(self.min_val) > 0


@dataclass(frozen=True)
class MetricReport:
    snr_db: float
    prd_pct: float


def _samples(x):
    return x.samples if isinstance(x, Signal) else np.asarray(x, dtype=float)


def noise_rng(seed):
    """Counter-based generator so that streams are reproducible per seed."""
    return np.random.Generator(np.random.Philox(seed))


def add_gaussian_noise(x, sigma, seed=0):
    """Return ``x + zeta`` with ``zeta ~ N(0, sigma^2)`` i.i.d."""
    if sigma < 0:
        raise ParameterError(f"sigma must be >= 0, got {sigma}")
    s = _samples(x)
    y = s + sigma * noise_rng(seed).standard_normal(s.shape) if sigma > 0 else s.copy()
    if isinstance(x, Signal):
        return Signal(y, x.sample_rate_hz)
    return y


def fragment(x, frag_len):
    """Non-overlapping windows of ``frag_len``; a short trailing remainder is dropped."""
    if frag_len < 1:
        raise ParameterError(f"frag_len must be >= 1, got {frag_len}")
    s = _samples(x)
    count = s.size // frag_len
    return [s[i * frag_len:(i + 1) * frag_len].copy() for i in range(count)]


def reassemble(fragments, sample_rate_hz=250.0):
    fragments = [np.asarray(f, dtype=float) for f in fragments]
    if not fragments:
        raise DimensionError("nothing to reassemble")
    if len({f.shape for f in fragments}) != 1:
        raise DimensionError("fragments have differing lengths")
    return Signal(np.concatenate(fragments), sample_rate_hz)


def fit_minmax(data, per_feature=False):
    """Fit min-max bounds globally (one scalar pair) or per column."""
    data = np.asarray(data, dtype=float)
    if per_feature:
        lo, hi = data.min(axis=0), data.max(axis=0)
        if np.any(hi <= lo):
            raise DegenerateRangeError("at least one feature is constant")
        return NormState(lo, hi)
    lo, hi = float(data.min()), float(data.max())
    if hi <= lo:
        raise DegenerateRangeError(f"data is constant ({lo}); cannot min-max scale")
    return NormState(lo, hi)


def apply_minmax(data, norm):
    # values outside the fitted range are deliberately left unclipped
    return (np.asarray(data, dtype=float) - norm.min_val) / (norm.max_val - norm.min_val)


def invert_minmax(data, norm):
    return np.asarray(data, dtype=float) * (norm.max_val - norm.min_val) + norm.min_val


def _error_energy(x, x_hat):
    x, x_hat = _samples(x), _samples(x_hat)
    if x.shape != x_hat.shape:
        raise DimensionError(f"length mismatch: {x.shape} vs {x_hat.shape}")
    ref = float(np.sum(x * x))
    if ref == 0.0:
        raise UndefinedReferenceError("reference signal is all zeros")
    return ref, float(np.sum((x - x_hat) ** 2))


def snr(x, x_hat):
    """SNR in dB of reference ``x`` against reconstruction ``x_hat``; +inf if exact."""
    ref, err = _error_energy(x, x_hat)
    if err == 0.0:
        return float("inf")
    return 10.0 * np.log10(ref / err)


def prd(x, x_hat):
    """Percentage root-mean-square difference."""
    ref, err = _error_energy(x, x_hat)
    return 100.0 * np.sqrt(err / ref)


def prd_from_snr(snr_db):
    return 100.0 * 10.0 ** (-snr_db / 20.0)


def metrics(x, x_hat):
    return MetricReport(snr(x, x_hat), prd(x, x_hat))
