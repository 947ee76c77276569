"""Five-layer (four weight matrices) autoencoder trained with fractional SGD.

Layout: ``N -> N_h -> N_e -> N_h -> N``. Hidden layers are linear, the output
layer is a sigmoid. Batches are row-major (one sample per row) so that
``Z[l] = A[l-1] @ W[l].T + B[l]``.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import rsvd as _rsvd
from .errors import DimensionError, DivergenceError, ParameterError
from .fractional import DEFAULT_EPS, caputo_reg_term, caputo_weight_factor, check_alpha

N_LAYERS = 4


@dataclass(frozen=True)
class LayerSpec:
    n_in: int = 250
    n_h: int = 150
    n_e: int = 75

    def __post_init__(self):
        if not 0 < self.n_e < self.n_h < self.n_in:
            raise ParameterError(f"need 0 < n_e < n_h < n_in, got {self}")

    @property
    def widths(self):
        return (self.n_in, self.n_h, self.n_e, self.n_h, self.n_in)

    @property
    def weight_shapes(self):
        w = self.widths
        return [(w[l + 1], w[l]) for l in range(N_LAYERS)]


@dataclass(eq=False)
class NetworkParams:
    W: list
    B: list

    @property
    def spec(self):
        return LayerSpec(self.W[0].shape[1], self.W[0].shape[0], self.W[1].shape[0])

    def copy(self):
        return NetworkParams([w.copy() for w in self.W], [b.copy() for b in self.B])

    def validate(self):
        spec = self.spec
        if len(self.W) != N_LAYERS or len(self.B) != N_LAYERS:
            raise DimensionError(f"expected {N_LAYERS} layers")
        for l, shape in enumerate(spec.weight_shapes):
            if self.W[l].shape != shape or self.B[l].shape != (shape[0],):
                raise DimensionError(f"layer {l + 1} has W {self.W[l].shape}, B {self.B[l].shape}; "
                                     f"expected {shape}, ({shape[0]},)")
        return self


@dataclass(eq=False)
class ForwardCache:
    Z: list
    A: list


@dataclass(eq=False)
class Gradients:
    dW: list
    dB: list


@dataclass(frozen=True)
class TrainingConfig:
    alpha: float = 1.0
    eta: float = 0.01
    lam: float = 1e-6
    epochs: int = 500
    batch_size: int = 32
    recompress_every: int = 50
    energy_fraction: float = 0.9
    eps_clamp: float = DEFAULT_EPS
    p_iters: int = _rsvd.DEFAULT_P_ITERS
    seed: int = 0
    layer_spec: LayerSpec = field(default_factory=LayerSpec)

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.eta <= 0 or self.lam < 0 or self.eps_clamp <= 0:
            raise ParameterError("need eta > 0, lam >= 0, eps_clamp > 0")
        if self.epochs < 1 or self.batch_size < 1 or self.p_iters < 1:
            raise ParameterError("epochs, batch_size and p_iters must be positive")
        if not 0 <= self.recompress_every <= self.epochs:
            raise ParameterError("recompress_every must be 0 (off) or <= epochs")
        if not 0.0 < self.energy_fraction <= 1.0:
            raise ParameterError("energy_fraction must lie in (0, 1]")

    def with_(self, **changes):
        return replace(self, **changes)


def sigmoid(z):
    # split form avoids overflow in exp for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def init_params(spec, seed):
    """Glorot-uniform weights, zero biases."""
    rng = np.random.default_rng(seed)
    W, B = [], []
    for fan_out, fan_in in spec.weight_shapes:
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        W.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        B.append(np.zeros(fan_out))
    return NetworkParams(W, B)


def forward(params, X):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != params.W[0].shape[1]:
        raise DimensionError(f"input width {X.shape[1]} != network width {params.W[0].shape[1]}")
    Z, A = [], [X]
    for l in range(N_LAYERS):
        z = A[-1] @ params.W[l].T + params.B[l]
        Z.append(z)
        A.append(sigmoid(z) if l == N_LAYERS - 1 else z)
    return ForwardCache(Z, A)


def predict(params, X):
    return forward(params, X).A[-1]


def cost(pred, target, params, lam):
    """Half mean (over rows) squared error plus ``lam/2 * sum ||W||_F^2``."""
    pred, target = np.atleast_2d(pred), np.atleast_2d(target)
    if pred.shape != target.shape:
        raise DimensionError(f"prediction {pred.shape} vs target {target.shape}")
    data = 0.5 * np.sum((pred - target) ** 2) / pred.shape[0]
    reg = 0.5 * lam * sum(float(np.sum(w * w)) for w in params.W)
    return float(data + reg)


def fractional_backward(params, cache, Y, alpha, lam, eps=DEFAULT_EPS):
    """Fractional-order gradients of the regularized cost.

    The integer-order weight gradient of each layer is scaled elementwise by
    the Caputo factor of the current weights, then the Caputo regularizer term
    is added. Bias gradients are the plain batch-mean of ``dZ``.
    """
    Y = np.atleast_2d(Y)
    A, Z = cache.A, cache.Z
    if len(A) != N_LAYERS + 1 or A[-1].shape != Y.shape:
        raise DimensionError("cache does not match target batch")
    for l in range(N_LAYERS):
        if Z[l].shape[1] != params.W[l].shape[0] or A[l].shape[1] != params.W[l].shape[1]:
            raise DimensionError(f"cache does not match params at layer {l + 1}")
    m = Y.shape[0]
    dW, dB = [None] * N_LAYERS, [None] * N_LAYERS

    out = A[-1]
    dZ = (out - Y) * out * (1.0 - out)
    for l in range(N_LAYERS - 1, -1, -1):
        W = params.W[l]
        grad = dZ.T @ A[l] / m
        dW[l] = grad * caputo_weight_factor(W, alpha, eps) + caputo_reg_term(W, alpha, lam, eps)
        dB[l] = dZ.mean(axis=0)
        if l > 0:
            # hidden activations are linear, so g' = 1
            dZ = dZ @ W
    return Gradients(dW, dB)


def sgd_step(params, grads, eta):
    return NetworkParams([w - eta * g for w, g in zip(params.W, grads.dW)],
                         [b - eta * g for b, g in zip(params.B, grads.dB)])


def _streams(seed):
    init, shuffle, compress = np.random.SeedSequence(seed).spawn(3)
    return init, np.random.default_rng(shuffle), np.random.default_rng(compress)


def recompress(params, p_iters, fraction, rng):
    """Replace every weight matrix by its energy-thresholded low-rank approximation."""
    W = [_rsvd.compress_opt(w, p_iters, int(rng.integers(2**63)), fraction) for w in params.W]
    return NetworkParams(W, [b.copy() for b in params.B])


def train(X, Y, config, on_epoch=None, params=None):
    """Fractional mini-batch SGD on (noisy moments X -> clean moments Y).

    ``on_epoch(epoch, loss)`` is called with the full-data cost once before
    training (epoch 0) and after each epoch.
    """
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2:
        raise DimensionError(f"inputs {X.shape} and targets {Y.shape} must be equal 2-D shapes")
    if X.shape[1] != config.layer_spec.n_in:
        raise DimensionError(f"data width {X.shape[1]} != layer spec n_in {config.layer_spec.n_in}")
    init_seq, shuffle_rng, compress_rng = _streams(config.seed)
    if params is None:
        params = init_params(config.layer_spec, init_seq)
    params = params.copy().validate()

    def report(epoch):
        loss = cost(predict(params, X), Y, params, config.lam)
        if not np.isfinite(loss):
            raise DivergenceError(epoch, loss)
        if on_epoch is not None:
            on_epoch(epoch, loss)
        return loss

    report(0)
    M = X.shape[0]
    for epoch in range(1, config.epochs + 1):
        order = shuffle_rng.permutation(M)
        for start in range(0, M, config.batch_size):
            idx = order[start:start + config.batch_size]
            cache = forward(params, X[idx])
            grads = fractional_backward(params, cache, Y[idx], config.alpha, config.lam, config.eps_clamp)
            params = sgd_step(params, grads, config.eta)
        if config.recompress_every and epoch % config.recompress_every == 0:
            params = recompress(params, config.p_iters, config.energy_fraction, compress_rng)
        report(epoch)
    return params
