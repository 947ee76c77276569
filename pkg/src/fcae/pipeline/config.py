"""Experiment configuration: dataclass, presets and the flat key/value file format.

A config file is flat TOML, one ``key = value`` per line. Keys are the
:class:`ExperimentConfig` fields plus the training fields, which are not
nested::

    data_source = "synthetic:40x2500"
    sigma = 15.0
    alpha = 1.7
    lambda = 1e-6
    sweep_ratios = [0.5, 0.75, 0.95]

Unknown keys raise :class:`~fcae.errors.ConfigError`.
"""
import dataclasses
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..autoencoder import LayerSpec, TrainingConfig
from ..errors import ConfigError, FCAEError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SWEEP_ALPHAS = tuple(round(1.0 + 0.1 * i, 1) for i in range(9))
SWEEP_RATIOS = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))

# Hyperparameters reported for the two EEG corpora, and the desk-scale default.
PRESETS = {
    "desk": TrainingConfig(eta=0.07, lam=1e-4, epochs=500, batch_size=4, recompress_every=110, eps_clamp=0.1),
    "keirn": TrainingConfig(eta=0.01, epochs=3000, batch_size=256, recompress_every=200, alpha=1.7),
    "motor": TrainingConfig(eta=0.01, epochs=500, batch_size=1024, recompress_every=50, alpha=1.6),
}


@dataclass(frozen=True)
class ExperimentConfig:
    data_source: str = "synthetic:40x2500"
    sigma: float = 15.0
    frag_len: int = 250
    train_split: float = 0.7
    per_feature_norm: bool = False
    training: TrainingConfig = field(default_factory=lambda: PRESETS["desk"])
    sweep_alphas: tuple = (1.0,)
    sweep_ratios: tuple = SWEEP_RATIOS
    layer_subset: tuple = (1, 2, 3, 4)
    output_dir: str = "out"

    def __post_init__(self):
        if not 0.0 < self.train_split < 1.0:
            raise ConfigError(f"train_split must lie in (0, 1), got {self.train_split}")
        if self.sigma < 0 or self.frag_len < 2:
            raise ConfigError("need sigma >= 0 and frag_len >= 2")
        if self.training.layer_spec.n_in != self.frag_len:
            raise ConfigError(f"n_in ({self.training.layer_spec.n_in}) must equal frag_len ({self.frag_len})")
        if any(not 1.0 <= a < 2.0 for a in self.sweep_alphas):
            raise ConfigError("sweep_alphas must lie in [1, 2)")
        if any(not 0.0 <= c < 1.0 for c in self.sweep_ratios):
            raise ConfigError("sweep_ratios must lie in [0, 1)")
        check_layers(self.layer_subset)

    def with_training(self, **changes):
        return replace(self, training=replace(self.training, **changes))

    def to_flat(self):
        """Flat dict with the same keys a config file uses."""
        flat = {}
        for f in dataclasses.fields(self):
            if f.name != "training":
                v = getattr(self, f.name)
                flat[f.name] = list(v) if isinstance(v, tuple) else v
        flat.update(_training_to_flat(self.training))
        return flat


def check_layers(layers):
    layers = tuple(int(l) for l in layers)
    if not layers or any(l not in (1, 2, 3, 4) for l in layers) or len(set(layers)) != len(layers):
        raise ConfigError(f"layer subset must be distinct indices from 1..4, got {layers}")
    return layers


_TRAINING_KEYS = {"lambda": "lam"}
_SPEC_KEYS = ("n_in", "n_h", "n_e")


def _training_to_flat(tc):
    flat = {}
    for f in dataclasses.fields(tc):
        if f.name == "layer_spec":
            for k in _SPEC_KEYS:
                flat[k] = getattr(tc.layer_spec, k)
        else:
            key = {v: k for k, v in _TRAINING_KEYS.items()}.get(f.name, f.name)
            flat[key] = getattr(tc, f.name)
    return flat


def from_flat(values, preset="desk"):
    """Build an :class:`ExperimentConfig` from flat keys over a named preset."""
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
    base = ExperimentConfig(training=PRESETS[preset])
    known = _training_to_flat(base.training).keys() | {
        f.name for f in dataclasses.fields(ExperimentConfig) if f.name != "training"}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    exp_kw, train_kw, spec_kw = {}, {}, {}
    training_fields = {f.name for f in dataclasses.fields(TrainingConfig)}
    for key, value in values.items():
        if key in _SPEC_KEYS:
            spec_kw[key] = int(value)
        elif _TRAINING_KEYS.get(key, key) in training_fields:
            train_kw[_TRAINING_KEYS.get(key, key)] = value
        else:
            exp_kw[key] = tuple(value) if isinstance(value, list) else value
    try:
        if spec_kw:
            spec = base.training.layer_spec
            train_kw["layer_spec"] = LayerSpec(**{k: spec_kw.get(k, getattr(spec, k)) for k in _SPEC_KEYS})
        training = replace(base.training, **train_kw)
        if "frag_len" in exp_kw and "n_in" not in spec_kw:
            raise ConfigError("frag_len changed without n_in; set both")
        return replace(base, training=training, **exp_kw)
    except ConfigError:
        raise
    except (FCAEError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, preset="desk"):
    path = Path(path)
    try:
        with path.open("rb") as fh:
            values = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    nested = [k for k, v in values.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"{path}: config must be flat, found tables {nested}")
    return from_flat(values, preset)


def seed_streams(seed, n):
    """``n`` independent child seeds (as ints) derived from ``seed``."""
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(n)]
