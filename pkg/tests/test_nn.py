import math
import os
import subprocess
import sys

import numpy as np
import pytest

from shlearn.nn import (
    Adam,
    Model,
    ModelConfig,
    ModelFormatError,
    TrainSchedule,
    VocabError,
    backward,
    forward,
    init_model,
    load_model,
    loss,
    predict,
    save_model,
    train,
)
from shlearn.nn import kernels
from shlearn.nn.model import softmax
from shlearn.tokens import CoverageTask


def tiny(seed, bidirectional=True, V=7, H=3, C=4, E=4):
    cfg = ModelConfig(V, C, H, bidirectional, embed=E, seed=seed, free_shape=True)
    return init_model(cfg)


def numeric_grad(model, trs, ys, eps=1e-5):
    g = np.zeros_like(model.theta)
    for i in range(model.theta.size):
        old = model.theta[i]
        model.theta[i] = old + eps
        up = loss(forward(model, trs), ys)
        model.theta[i] = old - eps
        down = loss(forward(model, trs), ys)
        model.theta[i] = old
        g[i] = (up - down) / (2 * eps)
    return g


def relative_error(a, b):
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a) + np.linalg.norm(b), 1e-12))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    worst = 0.0
    for trial in range(100):
        m = tiny(trial, bidirectional=bool(trial % 2))
        m.theta[:] = rng.normal(scale=0.8, size=m.theta.size)
        T = int(rng.integers(1, 9))
        trs = rng.integers(0, 7, size=T)
        ys = rng.integers(0, 4, size=T)
        analytic, numeric = backward(m, trs, ys), numeric_grad(m, trs, ys)
        worst = max(worst, relative_error(analytic, numeric))
        # per component, allowing the ~1e-11 cancellation noise of the difference quotient
        np.testing.assert_allclose(analytic, numeric, rtol=1e-4, atol=1e-9)
    assert worst < 1e-4


def hand_forward(m, trs):
    """Scalar re-implementation with math.tanh / math.exp."""
    p = {k: v.tolist() for k, v in m.blocks.items()}
    H, C = m.config.hidden, m.config.n_classes

    def run(seq, wx, wh, b):
        h = [0.0] * H
        out = []
        for tr in seq:
            x = p["emb"][tr]
            h = [math.tanh(b[j] + sum(x[i] * wx[i][j] for i in range(len(x)))
                           + sum(h[i] * wh[i][j] for i in range(H))) for j in range(H)]
            out.append(h)
        return out

    fw = run(trs, p["wx"], p["wh"], p["b"])
    if m.config.bidirectional:
        bw = run(trs[::-1], p["wx_r"], p["wh_r"], p["b_r"])[::-1]
        states = [f + b for f, b in zip(fw, bw)]
    else:
        states = fw
    probs = []
    for s in states:
        z = [p["bo"][c] + sum(s[i] * p["wo"][i][c] for i in range(len(s))) for c in range(C)]
        e = [math.exp(v) for v in z]
        probs.append([v / sum(e) for v in e])
    return np.array(probs)


@pytest.mark.parametrize("bidirectional", [False, True])
def test_forward_matches_hand_computation(bidirectional):
    m = tiny(3, bidirectional, V=5, H=2, C=3, E=3)
    m.theta[:] = np.linspace(-1.3, 1.1, m.theta.size)
    trs = [0, 3, 1, 4, 4, 2]
    np.testing.assert_allclose(forward(m, trs), hand_forward(m, trs), rtol=0, atol=1e-9)


def test_zero_model_is_uniform():
    m = Model(ModelConfig(3, 2, 2, False, embed=2, free_shape=True))
    probs = forward(m, [0, 1, 2])
    np.testing.assert_array_equal(probs, 0.5)
    assert loss(probs, [0, 1, 0]) == pytest.approx(math.log(2), abs=1e-12)


def test_softmax_rows_sum_to_one():
    rng = np.random.default_rng(1)
    for i in range(1000):
        m = tiny(i % 10, bool(i % 2))
        m.theta[:] = rng.normal(scale=3.0, size=m.theta.size)
        probs = forward(m, rng.integers(0, 7, size=int(rng.integers(1, 20))))
        assert np.all(np.abs(probs.sum(axis=1) - 1) <= 1e-6)
    extreme = softmax(np.array([[1000.0, -1000.0, 0.0]]))
    assert np.isfinite(extreme).all() and extreme.sum() == pytest.approx(1.0)


def test_loss_floor():
    assert loss(np.array([[1.0, 0.0]]), [1]) == pytest.approx(-math.log(1e-12))


def test_parameter_count():
    assert ModelConfig(64, 12, 16, True).n_params() == 13228
    assert ModelConfig(64, 12, 16, False).n_params() == 64 * 128 + 128 * 16 + 16 * 16 + 16 + 16 * 12 + 12


def test_shape_constraints():
    with pytest.raises(ValueError):
        ModelConfig(46, 12, hidden=20)
    with pytest.raises(ValueError):
        ModelConfig(46, 12, embed=64)
    with pytest.raises(ValueError):
        ModelConfig(46, 1)
    assert ModelConfig(46, 12, 32).name == "brnn32"
    assert ModelConfig(46, 12, 16, False).name == "rnn16"


def test_vocab_and_input_checks():
    m = tiny(0)
    with pytest.raises(VocabError):
        forward(m, [7])
    with pytest.raises(VocabError):
        forward(m, [-1])
    with pytest.raises(ValueError):
        forward(m, [])
    with pytest.raises(ValueError):
        backward(m, [1, 2], [0])


def test_predict_is_argmax():
    m = tiny(4)
    trs = [1, 2, 3, 0]
    np.testing.assert_array_equal(predict(m, trs), forward(m, trs).argmax(axis=1))


def test_long_sequences_have_finite_gradients():
    m = init_model(ModelConfig(46, 12, 16, True))
    rng = np.random.default_rng(2)
    trs = rng.integers(0, 46, size=10_000)
    g = backward(m, trs, rng.integers(0, 12, size=10_000))
    assert np.isfinite(g).all()


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled kernels not built")
@pytest.mark.parametrize("H,T", [(1, 1), (3, 7), (16, 300), (32, 50)])
def test_backends_agree(H, T):
    rng = np.random.default_rng(H * 100 + T)
    A = rng.normal(size=(T, H))
    Wh = rng.normal(scale=0.4, size=(H, H))
    py, cy = kernels.python_backend, kernels.compiled_backend
    Hs = py.rnn_forward(A, Wh)
    np.testing.assert_allclose(cy.rnn_forward(A, Wh), Hs, rtol=1e-12, atol=1e-14)
    dHs = rng.normal(size=(T, H))
    for a, b in zip(py.rnn_backward(Hs, dHs, Wh), cy.rnn_backward(Hs, dHs, Wh)):
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)


def test_pure_python_fallback_is_selectable():
    code = "from shlearn.nn import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, SHLEARN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_adam_matches_reference():
    theta = np.array([0.5, -1.0])
    opt = Adam(2)
    m = v = np.zeros(2)
    ref = theta.copy()
    for t, (g, lr) in enumerate([([0.1, -0.2], 1e-3), ([0.3, 0.0], 1e-3), ([-0.1, 0.5], 1e-4)], start=1):
        g = np.array(g)
        opt.step(theta, g, lr)
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        ref = ref - lr * (m / (1 - 0.9 ** t)) / (np.sqrt(v / (1 - 0.999 ** t)) + 1e-8)
        np.testing.assert_allclose(theta, ref, rtol=1e-13)
    assert opt.steps == 3


def test_schedule():
    s = TrainSchedule()
    assert s.epochs == 4
    assert s.learning_rates() == [1e-3, 1e-3, 1e-4, 1e-4]


def _task_model(task, seed=0, bidirectional=True):
    return init_model(ModelConfig(46, len(CoverageTask.parse(task).class_list), 16, bidirectional, seed=seed))


def test_training_steps_and_determinism(small_corpus):
    data = small_corpus[:30]
    runs = []
    for _ in range(2):
        m = _task_model("T4")
        res = train(m, data, small_corpus[30:35], CoverageTask.T4)
        runs.append(m.theta.copy())
        assert res.steps == 4 * len(data)
        assert [h["lr"] for h in res.history] == [1e-3, 1e-3, 1e-4, 1e-4]
    assert runs[0].tobytes() == runs[1].tobytes()


def test_training_learns(small_corpus):
    m = _task_model("T1", bidirectional=True)
    res = train(m, small_corpus[:80], small_corpus[80:100], CoverageTask.T1)
    assert res.history[-1]["train_loss"] < res.history[0]["train_loss"]
    assert res.history[-1]["val_accuracy"] > 0.9


def test_training_rejects_wrong_head(small_corpus):
    with pytest.raises(ValueError):
        train(_task_model("T2"), small_corpus[:3], [], CoverageTask.T4)


def test_save_load_roundtrip(tmp_path):
    m = init_model(ModelConfig(46, 8, 32, False, seed=9))
    p = tmp_path / "m.model"
    save_model(p, m, CoverageTask.T2, fold=1)
    s = load_model(p)
    assert s.model.config == m.config
    assert s.task is CoverageTask.T2 and s.fold == 1 and s.vocabulary == "minilang"
    assert s.model.theta.tobytes() == m.theta.tobytes()
    save_model(tmp_path / "again.model", s.model, s.task, fold=1)
    assert (tmp_path / "again.model").read_bytes() == p.read_bytes()


def test_load_rejects_damaged_files(tmp_path):
    m = init_model(ModelConfig(46, 8, 16, True))
    p = tmp_path / "m.model"
    save_model(p, m, CoverageTask.T1)
    data = p.read_bytes()
    cases = {
        "truncated": data[:-8],
        "magic": b"x" + data[1:],
        "header": data.replace(b'"task": "T1"', b'"task": "T9"'),
        "nan": data[:-8] + np.array([np.nan]).tobytes(),
    }
    for name, blob in cases.items():
        (tmp_path / name).write_bytes(blob)
        with pytest.raises(ModelFormatError):
            load_model(tmp_path / name)
