import numpy as np
import pytest

import frets


def test_rfft_matches_numpy():
    x = np.random.default_rng(0).standard_normal((3, 17))
    np.testing.assert_allclose(frets.rfft(x), np.fft.rfft(x), atol=1e-12)
    np.testing.assert_allclose(frets.rfft(x, axis=0), np.fft.rfft(x, axis=0), atol=1e-12)


def test_irfft_round_trip():
    x = np.random.default_rng(1).standard_normal((4, 12))
    back = frets.irfft(frets.rfft(x), 12)
    np.testing.assert_allclose(back, x, atol=1e-12)


def test_bin_mismatch_raises():
    with pytest.raises(frets.DimensionError):
        frets.irfft(np.zeros(5, dtype=complex), 12)


def test_circular_conv_example():
    out = frets.circular_conv([1.0, 2.0, 3.0], [0.0, 1.0, 0.0])
    np.testing.assert_allclose(out, [3.0, 1.0, 2.0], atol=1e-12)


def test_fremlp_identity_layer():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    out = frets.fremlp_forward(x, np.eye(4), np.zeros(4), activation="identity")
    np.testing.assert_allclose(out, x, atol=1e-15)


def test_fremlp_matches_complex_product():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    w = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    out = frets.fremlp_forward(x, w, b, activation="identity")
    np.testing.assert_allclose(out, x @ w + b, atol=1e-12)
    y = x @ w + b
    relu = np.maximum(y.real, 0) + 1j * np.maximum(y.imag, 0)
    np.testing.assert_allclose(frets.fremlp_forward(x, w, b), relu, atol=1e-12)


def test_model_forward_shapes_and_determinism():
    config = frets.ModelConfig(lookback=12, horizon=4, channels=3, embed_dim=8, hidden_dim=16, seed=5)
    params = frets.init_params(config)
    assert params == frets.init_params(config)
    x = np.random.default_rng(4).standard_normal((2, 3, 12))
    y = frets.frets_forward(x, params, config)
    assert y.shape == (2, 3, 4)
    np.testing.assert_array_equal(y, frets.frets_forward(x, params, config))
    blocks = params.blocks()
    assert blocks["embedding"].shape == (8,)
    assert params.parameter_count() == sum(v.size for v in blocks.values())


def test_unknown_config_option():
    with pytest.raises(frets.ConfigError):
        frets.ModelConfig(lookback=4, bogus=1)


def test_wrong_input_shape_raises():
    config = frets.ModelConfig(lookback=12, horizon=4, channels=3, embed_dim=8, hidden_dim=16)
    params = frets.init_params(config)
    with pytest.raises(frets.Error):
        frets.frets_forward(np.zeros((2, 2, 12)), params, config)


def test_gradient_matches_finite_difference():
    config = frets.ModelConfig(lookback=6, horizon=3, channels=2, embed_dim=4, hidden_dim=8,
                               seed=1, learner_activation=frets.Activation.IDENTITY,
                               projection_activation=frets.Activation.IDENTITY)
    params = frets.init_params(config)
    rng = np.random.default_rng(5)
    x = rng.standard_normal((2, 2, 6))
    t = rng.standard_normal((2, 2, 3))
    _, grads = frets.loss_and_grad(x, t, params, config)
    w2 = params.blocks()["projection.w2"]
    eps = 1e-6
    for index in [(0, 0), (3, 2)]:
        up = w2.copy()
        up[index] += eps
        down = w2.copy()
        down[index] -= eps
        params.set_block("projection.w2", up)
        loss_up, _ = frets.loss_and_grad(x, t, params, config)
        params.set_block("projection.w2", down)
        loss_down, _ = frets.loss_and_grad(x, t, params, config)
        params.set_block("projection.w2", w2)
        numeric = (loss_up - loss_down) / (2 * eps)
        assert abs(numeric - grads["projection.w2"][index]) < 1e-6


def test_synth_and_train_reduce_error():
    series = frets.synth_sinusoids(2, 400, [(0, 1.0, 1.0, 0.0), (1, 2.0, 0.5, 0.3)],
                                   period_base=24)
    assert series.shape == (2, 400)
    np.testing.assert_allclose(series[0, :3], np.sin(2 * np.pi * np.arange(3) / 24), atol=1e-12)
    config = frets.ModelConfig(lookback=24, horizon=6, channels=2, embed_dim=8, hidden_dim=16)
    train, val = series[:, :300], series[:, 300:]
    before = frets.evaluate(frets.init_params(config), config, val)
    params, log = frets.train(config, train, val, epochs=3, batch_size=16)
    after = frets.evaluate(params, config, val)
    assert len(log) == 3
    assert after[0] < before[0]
    assert after[0] == pytest.approx(min(r["val_mae"] for r in log), rel=0, abs=0)


def test_run_checks_pass():
    results = frets.run_checks(seed=3)
    assert {r["name"] for r in results} >= {"parseval", "fft_oracle", "frets_gradient"}
    assert all(r["passed"] for r in results)


def test_missing_checkpoint_is_io_error(tmp_path):
    with pytest.raises(frets.IoError):
        frets.load_checkpoint(str(tmp_path / "missing.frets"))
