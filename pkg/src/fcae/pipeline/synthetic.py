"""Desk-scale stand-in for EEG recordings: sums of random sinusoids."""
import numpy as np

from ..signal import Signal


def gen_synthetic(n_signals, length, seed, frag_len=250, sigma=15.0,
                  snr_range=(-3.0, 6.0), sample_rate_hz=250.0):
    """Return ``n_signals`` clean signals of ``length`` samples.

    Each signal is a sum of 3-5 sinusoids with frequencies in [1, 40] cycles
    per ``frag_len`` samples (log-uniform), relative amplitudes in [5, 50]
    decaying roughly as 1/sqrt(frequency), and random phases.
    The amplitudes are then rescaled together so that additive noise of std
    ``sigma`` gives an input SNR drawn uniformly from ``snr_range`` (dB).
    """
    if n_signals < 1 or length < 1:
        raise ValueError("n_signals and length must be positive")
    rng = np.random.default_rng(seed)
    t = np.arange(length, dtype=float)
    out = []
    for _ in range(n_signals):
        k = int(rng.integers(3, 6))
        # log-uniform frequencies with a 1/sqrt(f) amplitude falloff mimic the
        # 1/f shape of EEG spectra
        freqs = np.exp(rng.uniform(0.0, np.log(40.0), size=k))
        amps = np.clip(50.0 / np.sqrt(freqs) * rng.uniform(0.5, 1.5, size=k), 5.0, 50.0)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
        x = (amps[:, None] * np.sin(2.0 * np.pi * freqs[:, None] * t / frag_len + phases[:, None])).sum(axis=0)
        target_snr = rng.uniform(*snr_range)
        target_power = sigma ** 2 * 10.0 ** (target_snr / 10.0)
        x *= np.sqrt(target_power / np.mean(x * x))
        out.append(Signal(x, sample_rate_hz))
    return out
