"""Embedding -> Elman RNN (optionally bidirectional) -> linear -> softmax.

All parameters live in one flat float64 vector; named blocks are views
into it, which keeps Adam and gradient checks to single-array operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

EMBEDDING_DIM = 128
HIDDEN_WIDTHS = (16, 32)
PROB_FLOOR = 1e-12


class VocabError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    vocab: int
    n_classes: int
    hidden: int = 16
    bidirectional: bool = True
    embed: int = EMBEDDING_DIM
    seed: int = 0
    # Lifts the fixed embedding/width constraint; used for tiny test models.
    free_shape: bool = False

    def __post_init__(self):
        if self.vocab < 1:
            raise ValueError("vocab must be >= 1")
        if self.n_classes < 2 and not self.free_shape:
            raise ValueError("n_classes must be >= 2")
        if not self.free_shape:
            if self.hidden not in HIDDEN_WIDTHS:
                raise ValueError(f"hidden width must be one of {HIDDEN_WIDTHS}, got {self.hidden}")
            if self.embed != EMBEDDING_DIM:
                raise ValueError(f"embedding dimension is fixed at {EMBEDDING_DIM}")

    @property
    def name(self) -> str:
        return f"{'brnn' if self.bidirectional else 'rnn'}{self.hidden}"

    def block_shapes(self) -> list[tuple[str, tuple[int, ...]]]:
        V, E, H, C = self.vocab, self.embed, self.hidden, self.n_classes
        shapes = [("emb", (V, E)), ("wx", (E, H)), ("wh", (H, H)), ("b", (H,))]
        if self.bidirectional:
            shapes += [("wx_r", (E, H)), ("wh_r", (H, H)), ("b_r", (H,))]
        D = 2 * H if self.bidirectional else H
        shapes += [("wo", (D, C)), ("bo", (C,))]
        return shapes

    def n_params(self) -> int:
        return sum(int(np.prod(s)) for _, s in self.block_shapes())


class Model:
    def __init__(self, config: ModelConfig, theta: np.ndarray | None = None):
        self.config = config
        n = config.n_params()
        if theta is None:
            theta = np.zeros(n)
        theta = np.ascontiguousarray(theta, dtype=np.float64)
        if theta.shape != (n,):
            raise ValueError(f"expected {n} parameters, got {theta.shape}")
        self.theta = theta
        self.blocks = unflatten(config, theta)

    def __getattr__(self, name):
        blocks = self.__dict__.get("blocks")
        if blocks is not None and name in blocks:
            return blocks[name]
        raise AttributeError(name)

    def copy(self) -> "Model":
        return Model(self.config, self.theta.copy())


def unflatten(config: ModelConfig, flat: np.ndarray) -> dict[str, np.ndarray]:
    views = {}
    off = 0
    for name, shape in config.block_shapes():
        size = int(np.prod(shape))
        views[name] = flat[off:off + size].reshape(shape)
        off += size
    return views


def init_model(config: ModelConfig) -> Model:
    """Uniform init: embedding on +-1/sqrt(E), everything else on +-1/sqrt(H)."""
    rng = np.random.default_rng(config.seed)
    model = Model(config)
    k_e = 1.0 / np.sqrt(config.embed)
    k_h = 1.0 / np.sqrt(config.hidden)
    for name, block in model.blocks.items():
        k = k_e if name == "emb" else k_h
        block[...] = rng.uniform(-k, k, size=block.shape)
    return model


@dataclass
class Trace:
    """Intermediates of one forward pass, reused by ``backward``."""

    trs: np.ndarray
    X: np.ndarray
    Hf: np.ndarray
    Hb: np.ndarray | None  # reverse pass states in reverse (processing) order
    Hcat: np.ndarray
    probs: np.ndarray


def _as_trs(model: Model, tr_seq) -> np.ndarray:
    trs = np.asarray(tr_seq, dtype=np.intp)
    if trs.ndim != 1 or trs.size == 0:
        raise ValueError("token rule sequence must be a non-empty 1-d sequence")
    if trs.min() < 0 or trs.max() >= model.config.vocab:
        raise VocabError(f"token rule outside vocabulary of size {model.config.vocab}")
    return trs


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    np.exp(z, out=z)
    z /= z.sum(axis=1, keepdims=True)
    return z


def logits_of(model: Model, tr_seq) -> tuple[np.ndarray, Trace]:
    trs = _as_trs(model, tr_seq)
    p = model.blocks
    X = p["emb"][trs]
    Hf = kernels.rnn_forward(np.ascontiguousarray(X @ p["wx"] + p["b"]), p["wh"])
    if model.config.bidirectional:
        # gather reversed rows directly; negative-stride matmuls are slow
        Ar = p["emb"][trs[::-1]] @ p["wx_r"] + p["b_r"]
        Hb = kernels.rnn_forward(Ar, p["wh_r"])
        Hcat = np.concatenate([Hf, Hb[::-1]], axis=1)
    else:
        Hb = None
        Hcat = Hf
    logits = Hcat @ p["wo"] + p["bo"]
    return logits, Trace(trs, X, Hf, Hb, Hcat, None)


def forward_trace(model: Model, tr_seq) -> Trace:
    logits, trace = logits_of(model, tr_seq)
    trace.probs = softmax(logits)
    return trace


def forward(model: Model, tr_seq) -> np.ndarray:
    """Per-position class probabilities, shape (T, C)."""
    return forward_trace(model, tr_seq).probs


def predict(model: Model, tr_seq) -> np.ndarray:
    """Per-position argmax class index; ties go to the lowest index."""
    logits, _ = logits_of(model, tr_seq)
    return logits.argmax(axis=1)


def loss(probs: np.ndarray, targets) -> float:
    """Mean cross-entropy over positions."""
    targets = np.asarray(targets, dtype=np.intp)
    if probs.shape[0] != targets.shape[0]:
        raise ValueError(f"length mismatch: {probs.shape[0]} predictions, {targets.shape[0]} targets")
    if targets.size and (targets.min() < 0 or targets.max() >= probs.shape[1]):
        raise ValueError("target class out of range")
    picked = probs[np.arange(len(targets)), targets]
    return float(-np.log(np.maximum(picked, PROB_FLOOR)).mean())


def backward(model: Model, tr_seq, targets, trace: Trace | None = None) -> np.ndarray:
    """Exact gradient of ``loss`` w.r.t. the flat parameter vector (full BPTT)."""
    if trace is None:
        trace = forward_trace(model, tr_seq)
    targets = np.asarray(targets, dtype=np.intp)
    T = trace.trs.shape[0]
    if targets.shape != (T,):
        raise ValueError(f"length mismatch: {T} tokens, {targets.shape} targets")
    cfg = model.config
    H = cfg.hidden
    p = model.blocks
    grad = np.zeros_like(model.theta)
    g = unflatten(cfg, grad)

    dlogits = trace.probs.copy()
    dlogits[np.arange(T), targets] -= 1.0
    dlogits /= T
    g["wo"][...] = trace.Hcat.T @ dlogits
    g["bo"][...] = dlogits.sum(axis=0)
    dHcat = dlogits @ p["wo"].T

    dA, g["wh"][...] = kernels.rnn_backward(trace.Hf, np.ascontiguousarray(dHcat[:, :H]), p["wh"])
    g["wx"][...] = trace.X.T @ dA
    g["b"][...] = dA.sum(axis=0)
    dX = dA @ p["wx"].T
    if cfg.bidirectional:
        dAr, g["wh_r"][...] = kernels.rnn_backward(
            trace.Hb, np.ascontiguousarray(dHcat[::-1, H:]), p["wh_r"])
        Xr = np.ascontiguousarray(trace.X[::-1])
        g["wx_r"][...] = Xr.T @ dAr
        g["b_r"][...] = dAr.sum(axis=0)
        dX += (dAr @ p["wx_r"].T)[::-1]
    rows = np.zeros((cfg.vocab, T))
    rows[trace.trs, np.arange(T)] = 1.0
    g["emb"][...] = rows @ dX
    return grad
