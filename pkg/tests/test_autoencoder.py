import numpy as np
import pytest

from fcae.autoencoder import (LayerSpec, NetworkParams, TrainingConfig, cost, forward, fractional_backward,
                              init_params, predict, sgd_step, train)
from fcae.errors import DimensionError, DivergenceError, ParameterError
from fcae.fractional import caputo_reg_term, caputo_weight_factor

SMALL = LayerSpec(16, 8, 4)


def numeric_gradients(params, X, Y, lam, h=1e-6):
    """Central finite differences of the regularized cost for every parameter."""
    def J(p):
        return cost(predict(p, X), Y, p, lam)

    dW, dB = [], []
    for group, out in ((params.W, dW), (params.B, dB)):
        for arr in group:
            g = np.zeros_like(arr)
            for idx in np.ndindex(arr.shape):
                old = arr[idx]
                arr[idx] = old + h
                up = J(params)
                arr[idx] = old - h
                down = J(params)
                arr[idx] = old
                g[idx] = (up - down) / (2 * h)
            out.append(g)
    return dW, dB


def random_problem(seed, spec=SMALL, batch=6, scale=1.0):
    r = np.random.default_rng(seed)
    params = init_params(spec, seed)
    params.W = [w * scale for w in params.W]
    params.B = [r.normal(0, 0.1, b.shape) for b in params.B]
    X = r.uniform(0, 1, (batch, spec.n_in))
    Y = r.uniform(0, 1, (batch, spec.n_in))
    return params, X, Y


def assert_gradients_match(analytic, numeric):
    for a, n in zip(analytic, numeric):
        # relative per entry, with an absolute floor at finite-difference roundoff
        np.testing.assert_allclose(a, n, rtol=1e-5, atol=1e-9)


def test_layer_spec():
    assert LayerSpec().weight_shapes == [(150, 250), (75, 150), (150, 75), (250, 150)]
    with pytest.raises(ParameterError):
        LayerSpec(10, 4, 6)


def test_init_is_deterministic_and_bounded():
    spec = LayerSpec(250, 150, 75)
    a, b = init_params(spec, 7), init_params(spec, 7)
    assert [w.shape for w in a.W] == [(150, 250), (75, 150), (150, 75), (250, 150)]
    assert [x.shape for x in a.B] == [(150,), (75,), (150,), (250,)]
    for wa, wb in zip(a.W, b.W):
        np.testing.assert_array_equal(wa, wb)
        fan_out, fan_in = wa.shape
        assert np.abs(wa).max() <= np.sqrt(6 / (fan_in + fan_out))
    assert all(np.all(x == 0) for x in a.B)


def test_forward_zero_network_outputs_half():
    spec = LayerSpec(5, 3, 2)
    params = NetworkParams([np.zeros(s) for s in spec.weight_shapes], [np.zeros(s[0]) for s in spec.weight_shapes])
    cache = forward(params, np.random.default_rng(0).uniform(size=(7, 5)))
    np.testing.assert_array_equal(cache.A[-1], 0.5)
    assert all(a.shape[0] == 7 for a in cache.A) and all(z.shape[0] == 7 for z in cache.Z)


def test_forward_hand_computed():
    # N=3, N_h=2, N_e=1; hidden layers are linear
    W = [np.array([[1.0, 0.0, -1.0], [0.5, 0.5, 0.0]]), np.array([[2.0, -1.0]]),
         np.array([[1.0], [-1.0]]), np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])]
    B = [np.array([0.0, 0.1]), np.array([-0.2]), np.array([0.0, 0.3]), np.array([0.1, 0.0, -0.1])]
    x = np.array([0.2, 0.4, 0.6])
    a1 = np.array([0.2 - 0.6, 0.1 + 0.2 + 0.1])        # [-0.4, 0.4]
    a2 = np.array([2 * -0.4 - 0.4 - 0.2])               # [-1.4]
    a3 = np.array([-1.4, 1.4 + 0.3])                     # [-1.4, 1.7]
    z4 = np.array([-1.4 + 0.1, 1.7, -1.4 + 1.7 - 0.1])
    out = predict(NetworkParams(W, B), x[None])[0]
    np.testing.assert_allclose(out, 1 / (1 + np.exp(-z4)), atol=1e-15)


def test_cost_values():
    params = init_params(LayerSpec(4, 3, 2), 0)
    Y = np.random.default_rng(1).uniform(size=(3, 4))
    assert cost(Y, Y, params, 0.0) == 0.0
    pred = np.zeros((1, 4))
    target = np.zeros((1, 4))
    pred[0, 0] = 1.0
    assert cost(pred, target, params, 0.0) == 0.5
    reg = sum(float(np.sum(w ** 2)) for w in params.W)
    assert cost(Y, Y, params, 1e-6) == pytest.approx(0.5e-6 * reg, rel=1e-14)
    with pytest.raises(DimensionError):
        cost(np.zeros((2, 4)), np.zeros((2, 3)), params, 0.0)


@pytest.mark.parametrize("lam", [0.0, 1e-6, 1e-2])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_integer_order_gradient_matches_finite_differences(seed, lam):
    params, X, Y = random_problem(seed, scale=2.0)
    grads = fractional_backward(params, forward(params, X), Y, 1.0, lam)
    dW, dB = numeric_gradients(params, X, Y, lam)
    assert_gradients_match(grads.dW, dW)
    assert_gradients_match(grads.dB, dB)


def test_fractional_gradient_is_scaled_integer_gradient():
    params, X, Y = random_problem(5, scale=2.0)
    alpha, lam = 1.7, 1e-3
    base = fractional_backward(params, forward(params, X), Y, 1.0, 0.0)
    frac = fractional_backward(params, forward(params, X), Y, alpha, lam)
    for W, g1, ga in zip(params.W, base.dW, frac.dW):
        np.testing.assert_allclose(ga, g1 * caputo_weight_factor(W, alpha) + caputo_reg_term(W, alpha, lam),
                                   rtol=1e-12, atol=1e-15)
    for b1, ba in zip(base.dB, frac.dB):
        np.testing.assert_array_equal(b1, ba)


def test_fractional_output_layer_entry_by_hand():
    params, X, Y = random_problem(6, batch=1)
    cache = forward(params, X)
    a4, a3 = cache.A[4][0], cache.A[3][0]
    i, j = 3, 2
    integer = (a4[i] - Y[0, i]) * a4[i] * (1 - a4[i]) * a3[j]
    w = params.W[3][i, j]
    # |w|**(1 - 1.7) / Gamma(0.3), Gamma(0.3) = 2.99156898768759 (mpmath)
    expected = integer * abs(w) ** -0.7 / 2.99156898768759
    grads = fractional_backward(params, cache, Y, 1.7, 0.0)
    assert grads.dW[3][i, j] == pytest.approx(expected, rel=1e-12)


def test_backward_rejects_mismatched_cache():
    params, X, Y = random_problem(0)
    other = init_params(LayerSpec(16, 10, 4), 0)
    with pytest.raises(DimensionError):
        fractional_backward(other, forward(params, X), Y, 1.0, 0.0)


def test_sgd_step():
    params = init_params(SMALL, 0)
    zero = fractional_backward(params, forward(params, np.zeros((1, 16))), np.zeros((1, 16)), 1.0, 0.0)
    zero.dW = [np.zeros_like(w) for w in zero.dW]
    zero.dB = [np.zeros_like(b) for b in zero.dB]
    same = sgd_step(params, zero, 0.5)
    for a, b in zip(same.W, params.W):
        np.testing.assert_array_equal(a, b)
    scalar = NetworkParams([np.array([[1.0]])], [np.array([0.0])])
    grads = type(zero)([np.array([[2.0]])], [np.array([0.0])])
    assert sgd_step(scalar, grads, 0.01).W[0][0, 0] == pytest.approx(0.98)
    grads = fractional_backward(params, forward(params, np.ones((1, 16))), np.zeros((1, 16)), 1.0, 0.0)
    for a, b in zip(sgd_step(params, grads, 0.0).W, params.W):
        np.testing.assert_array_equal(a, b)


def tiny_task(seed=0):
    # 8 distinct clean fragments on a 3-dim affine subspace (fits the bottleneck)
    r = np.random.default_rng(seed)
    directions = r.standard_normal((3, 16)) / 4
    distinct = 0.5 + 0.8 * r.uniform(-1, 1, (8, 3)) @ directions
    Y = np.repeat(distinct, 8, axis=0)
    X = np.clip(Y + r.normal(0, 0.05, Y.shape), 0, 1)
    return X, Y


TINY = TrainingConfig(eta=0.2, epochs=500, batch_size=16, recompress_every=0, seed=11, layer_spec=SMALL)


def test_tiny_task_learns():
    X, Y = tiny_task()
    losses = []
    train(X, Y, TINY, on_epoch=lambda e, l: losses.append(l))
    assert len(losses) == TINY.epochs + 1
    assert losses[-1] < 0.1 * losses[0]
    # 20-epoch window means decrease over the first 80% of training
    windows = np.array(losses[1:]).reshape(-1, 20).mean(axis=1)
    head = windows[:int(0.8 * len(windows))]
    assert np.all(np.diff(head) < 0)


def test_training_is_deterministic():
    X, Y = tiny_task()
    cfg = TINY.with_(epochs=40, recompress_every=20)
    runs = []
    for _ in range(2):
        losses = []
        params = train(X, Y, cfg, on_epoch=lambda e, l: losses.append(l))
        runs.append((losses, params))
    assert runs[0][0] == runs[1][0]
    for a, b in zip(runs[0][1].W, runs[1][1].W):
        np.testing.assert_array_equal(a, b)


def test_recompression_changes_rank_not_shape():
    X, Y = tiny_task()
    params = train(X, Y, TINY.with_(epochs=10, recompress_every=10))
    assert [w.shape for w in params.W] == SMALL.weight_shapes
    ranks = [np.linalg.matrix_rank(w) for w in params.W]
    assert any(r < full for r, full in zip(ranks, [8, 4, 4, 8]))


def test_recompression_disabled_leaves_weights_full_rank():
    X, Y = tiny_task()
    full = train(X, Y, TINY.with_(epochs=20, recompress_every=0))
    assert [np.linalg.matrix_rank(w) for w in full.W] == [8, 4, 4, 8]


def test_outputs_stay_in_open_unit_interval():
    params = init_params(SMALL, 0)
    params.W = [w * 50 for w in params.W]
    out = predict(params, np.random.default_rng(0).uniform(size=(20, 16)))
    assert np.all(np.isfinite(out)) and np.all(out >= 0) and np.all(out <= 1)


def test_divergence_names_epoch():
    X, Y = tiny_task()
    X = X.copy()
    X[0, 0] = np.inf
    with pytest.raises(DivergenceError) as err, np.errstate(invalid="ignore"):
        train(X, Y, TINY.with_(epochs=5))
    assert err.value.epoch == 0


def test_config_validation():
    with pytest.raises(ParameterError):
        TrainingConfig(alpha=2.0)
    with pytest.raises(ParameterError):
        TrainingConfig(epochs=10, recompress_every=20)
