"""End-to-end flows: data preparation, training, denoising and compression sweeps."""
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import rsvd as _rsvd
from ..autoencoder import N_LAYERS, NetworkParams, predict, train
from ..errors import ConfigError
from ..signal import NormState, Signal, add_gaussian_noise, apply_minmax, fit_minmax, fragment, \
    invert_minmax, metrics, reassemble
from ..tchebichef import build_basis, forward_moments, inverse_moments
from . import io
from .config import ExperimentConfig, check_layers, seed_streams
from .synthetic import gen_synthetic

log = logging.getLogger(__name__)

CHECKPOINT_NAME = "model.fcae"
META_NAME = "model.json"
TEST_CLEAN_NAME = "test_clean.csv"
TEST_NOISY_NAME = "test_noisy.csv"


@dataclass(eq=False)
class DenoisingModel:
    """Trained weights plus everything needed to map signals through them."""
    params: NetworkParams
    norm: NormState
    frag_len: int
    alpha: float

    @property
    def basis(self):
        return build_basis(self.frag_len, self.frag_len)

    def with_params(self, params):
        return DenoisingModel(params, self.norm, self.frag_len, self.alpha)


@dataclass(eq=False)
class Dataset:
    clean: list
    noisy: list
    train_idx: np.ndarray
    test_idx: np.ndarray

    def subset(self, idx):
        return [self.clean[i] for i in idx], [self.noisy[i] for i in idx]


@dataclass(eq=False)
class TrainingResult:
    model: DenoisingModel
    checkpoint: Path
    metadata: Path
    losses: list
    dataset: Dataset


@dataclass(eq=False)
class DenoiseResult:
    signal: Signal
    report: object = None


@dataclass(frozen=True)
class SweepCell:
    alpha: float
    c_r: float
    layer_subset: tuple
    mean_snr_db: float
    mean_prd_pct: float
    n_signals: int


def load_signals(source, seed, frag_len=250, sigma=15.0):
    """``synthetic:<count>x<length>`` or a CSV path."""
    if source.startswith("synthetic:"):
        try:
            count, length = (int(v) for v in source.split(":", 1)[1].lower().split("x"))
        except ValueError:
            raise ConfigError(f"bad synthetic data source {source!r}; expected synthetic:<count>x<length>") from None
        return gen_synthetic(count, length, seed, frag_len=frag_len, sigma=sigma)
    return io.ingest_csv(source)


def prepare_dataset(config: ExperimentConfig):
    data_seed, noise_seed, split_seed = seed_streams(config.training.seed, 3)
    clean = load_signals(config.data_source, data_seed, config.frag_len, config.sigma)
    noise_seeds = seed_streams(noise_seed, len(clean))
    noisy = [add_gaussian_noise(c, config.sigma, s) for c, s in zip(clean, noise_seeds)]

    # split whole signals so that test signals can be reassembled end to end
    order = np.random.default_rng(split_seed).permutation(len(clean))
    n_train = int(round(config.train_split * len(clean)))
    n_train = min(max(n_train, 1), len(clean) - 1) if len(clean) > 1 else 1
    return Dataset(clean, noisy, np.sort(order[:n_train]), np.sort(order[n_train:]))


def fragment_moments(signals, frag_len):
    basis = build_basis(frag_len, frag_len)
    frags = [f for s in signals for f in fragment(s, frag_len)]
    if not frags:
        return np.empty((0, frag_len))
    return forward_moments(np.array(frags), basis)


def run_training(config: ExperimentConfig, on_epoch=None, write=True):
    """Train on the 70% split and write checkpoint, metadata and the test split."""
    data = prepare_dataset(config)
    X_all = fragment_moments(data.noisy, config.frag_len)
    Y_all = fragment_moments(data.clean, config.frag_len)
    if len(X_all) == 0:
        raise ConfigError(f"no signal is at least frag_len={config.frag_len} samples long")
    norm = fit_minmax(np.vstack([X_all, Y_all]), per_feature=config.per_feature_norm)

    train_clean, train_noisy = data.subset(data.train_idx)
    X = apply_minmax(fragment_moments(train_noisy, config.frag_len), norm)
    Y = apply_minmax(fragment_moments(train_clean, config.frag_len), norm)
    if len(X) == 0:
        raise ConfigError("training split contains no complete fragment")

    losses = []

    def record(epoch, loss):
        losses.append(loss)
        if epoch % 50 == 0:
            log.info("epoch %d loss %.6g", epoch, loss)
        if on_epoch is not None:
            on_epoch(epoch, loss)

    params = train(X, Y, config.training, on_epoch=record)
    model = DenoisingModel(params, norm, config.frag_len, config.training.alpha)

    out = Path(config.output_dir)
    ckpt, meta = out / CHECKPOINT_NAME, out / META_NAME
    if write:
        try:
            out.mkdir(parents=True, exist_ok=True)
            io.write_checkpoint(ckpt, params, config.training.alpha)
            io.write_json(meta, {
                "norm": {"min_val": np.asarray(norm.min_val).tolist(), "max_val": np.asarray(norm.max_val).tolist()},
                "frag_len": config.frag_len,
                "config": config.to_flat(),
                "initial_loss": losses[0],
                "final_loss": losses[-1],
                "train_signals": data.train_idx.tolist(),
                "test_signals": data.test_idx.tolist(),
            })
            test_clean, test_noisy = data.subset(data.test_idx)
            io.write_signals_csv(out / TEST_CLEAN_NAME, test_clean)
            io.write_signals_csv(out / TEST_NOISY_NAME, test_noisy)
        except OSError as exc:
            raise OSError(f"cannot write training outputs to {out}: {exc}") from exc
    return TrainingResult(model, ckpt, meta, losses, data)


def load_model(checkpoint, metadata=None):
    """Read a checkpoint and its JSON sidecar (default: ``model.json`` next to it)."""
    checkpoint = Path(checkpoint)
    params, header = io.read_checkpoint(checkpoint)
    metadata = Path(metadata) if metadata else checkpoint.with_suffix(".json")
    meta = io.read_json(metadata)
    lo, hi = meta["norm"]["min_val"], meta["norm"]["max_val"]
    norm = NormState(np.array(lo), np.array(hi)) if isinstance(lo, list) else NormState(lo, hi)
    frag_len = int(meta["frag_len"])
    if frag_len != header["N"]:
        raise ConfigError(f"checkpoint width {header['N']} does not match frag_len {frag_len}")
    return DenoisingModel(params, norm, frag_len, header["alpha"])


def _default_predictor(model):
    return lambda Xn: predict(model.params, Xn)


def denoise_signal(model, signal, predictor=None):
    """Denoise one signal; output covers the whole fragments only."""
    predictor = predictor or _default_predictor(model)
    samples = signal.samples if isinstance(signal, Signal) else np.asarray(signal, dtype=float)
    frags = fragment(samples, model.frag_len)
    if not frags:
        raise ConfigError(f"signal of length {samples.size} is shorter than frag_len={model.frag_len}")
    basis = model.basis
    moments = apply_minmax(forward_moments(np.array(frags), basis), model.norm)
    estimate = invert_minmax(predictor(moments), model.norm)
    rate = signal.sample_rate_hz if isinstance(signal, Signal) else 250.0
    return reassemble(list(inverse_moments(estimate, basis)), rate)


def run_denoise(model, signals, clean=None, predictor=None):
    if model.params.spec.n_in != model.frag_len:
        raise ConfigError("model width does not match its frag_len")
    if clean is not None and len(clean) != len(signals):
        raise ConfigError(f"{len(signals)} noisy signals but {len(clean)} clean references")
    results = []
    for i, s in enumerate(signals):
        out = denoise_signal(model, s, predictor)
        report = None
        if clean is not None:
            ref = clean[i].samples if isinstance(clean[i], Signal) else np.asarray(clean[i], dtype=float)
            report = metrics(ref[:len(out)], out.samples)
        results.append(DenoiseResult(out, report))
    return results


def compress_params(params, c_r, layers, p_iters=_rsvd.DEFAULT_P_ITERS, seed=0):
    """Copy of ``params`` with the 1-based ``layers`` compressed at ratio ``c_r``."""
    layers = check_layers(layers)
    seeds = seed_streams(seed, N_LAYERS)
    W = [_rsvd.compress_at_ratio(w, c_r, p_iters, seeds[l]) if l + 1 in layers else w.copy()
         for l, w in enumerate(params.W)]
    return NetworkParams(W, [b.copy() for b in params.B])


def evaluate(model, noisy, clean):
    reports = [r.report for r in run_denoise(model, noisy, clean)]
    return float(np.mean([r.snr_db for r in reports])), float(np.mean([r.prd_pct for r in reports]))


def run_sweep(models, noisy, clean, ratios, layer_subsets=((1, 2, 3, 4),), alphas=None,
              p_iters=_rsvd.DEFAULT_P_ITERS, seed=0):
    """Evaluate every (alpha, layer subset, ratio) cell.

    ``models`` holds one trained model per fractional order; ``alphas``
    optionally names the orders that must be present.
    """
    models = list(models)
    if not noisy:
        raise ConfigError("sweep needs at least one test signal")
    available = {round(m.alpha, 9) for m in models}
    if alphas is not None:
        missing = sorted({round(float(a), 9) for a in alphas} - available)
        if missing:
            raise ConfigError(f"no checkpoint trained at alpha {missing}")
        models = [m for m in models if round(m.alpha, 9) in {round(float(a), 9) for a in alphas}]
    cells = []
    for model in models:
        for subset in layer_subsets:
            subset = check_layers(subset)
            for c_r in ratios:
                compressed = model.with_params(compress_params(model.params, c_r, subset, p_iters, seed))
                snr_db, prd_pct = evaluate(compressed, noisy, clean)
                cells.append(SweepCell(model.alpha, float(c_r), subset, snr_db, prd_pct, len(noisy)))
    return cells


def energy_profile(params):
    """Per layer, the (F_s, E) pairs for every retained rank 1..R."""
    profile = {}
    for l, W in enumerate(params.W, start=1):
        S = _rsvd.singular_values(W)
        profile[l] = [_rsvd.energy_fraction(S, r)[::-1] for r in range(1, S.size + 1)]
    return profile
