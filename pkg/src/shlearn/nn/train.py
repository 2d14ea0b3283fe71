"""Per-sample Adam training with the fixed two-phase schedule."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..tokens import CoverageTask
from .model import Model, backward, forward_trace, loss, predict

log = logging.getLogger(__name__)

DEFAULT_PHASES = ((2, 1e-3), (2, 1e-4))


@dataclass(frozen=True)
class TrainSchedule:
    phases: tuple[tuple[int, float], ...] = DEFAULT_PHASES
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @property
    def epochs(self) -> int:
        return sum(e for e, _ in self.phases)

    def learning_rates(self) -> list[float]:
        return [lr for n, lr in self.phases for _ in range(n)]


class Adam:
    def __init__(self, n: int, beta1=0.9, beta2=0.999, eps=1e-8):
        self.m = np.zeros(n)
        self.v = np.zeros(n)
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.steps = 0

    def step(self, theta: np.ndarray, grad: np.ndarray, lr: float) -> None:
        self.steps += 1
        b1, b2 = self.beta1, self.beta2
        self.m *= b1
        self.m += (1 - b1) * grad
        self.v *= b2
        self.v += (1 - b2) * grad * grad
        bc1 = 1 - b1 ** self.steps
        bc2 = 1 - b2 ** self.steps
        denom = np.sqrt(self.v / bc2)
        denom += self.eps
        theta -= (lr / bc1) * self.m / denom


def class_index_table(task: CoverageTask) -> np.ndarray:
    """Map a T4 class code to the task's compact output index (ANY -> 0)."""
    table = np.zeros(12, dtype=np.intp)
    for i, hc in enumerate(task.class_list):
        table[int(hc)] = i
    return table


def encode(records, task: CoverageTask) -> list[tuple[np.ndarray, np.ndarray]]:
    """(token rules, compact target indices) per record; empty records dropped."""
    table = class_index_table(task)
    out = []
    for r in records:
        if not r.hetas:
            continue
        trs = np.fromiter((h.tr for h in r.hetas), dtype=np.intp, count=len(r.hetas))
        hcs = np.fromiter((int(h.hc) for h in r.hetas), dtype=np.intp, count=len(r.hetas))
        out.append((trs, table[hcs]))
    return out


def token_accuracy(model: Model, data: Sequence[tuple[np.ndarray, np.ndarray]]) -> float:
    hit = total = 0
    for trs, ys in data:
        hit += int((predict(model, trs) == ys).sum())
        total += len(ys)
    return hit / total if total else float("nan")


@dataclass
class TrainResult:
    model: Model
    history: list[dict] = field(default_factory=list)
    steps: int = 0


def train(model: Model, train_records, val_records, task: CoverageTask,
          schedule: TrainSchedule = TrainSchedule(), seed: int | None = None) -> TrainResult:
    """Train in place, one optimizer step per training file.

    The training order is shuffled once and reused for every epoch.
    Validation data is only used for monitoring.
    """
    task = CoverageTask.parse(task)
    if model.config.n_classes != len(task.class_list):
        raise ValueError(f"model has {model.config.n_classes} outputs, task {task.value} needs {len(task.class_list)}")
    data = encode(train_records, task)
    if not data:
        raise ValueError("empty training set")
    val = encode(val_records, task)
    order = list(range(len(data)))
    random.Random(model.config.seed if seed is None else seed).shuffle(order)
    opt = Adam(model.theta.size, schedule.beta1, schedule.beta2, schedule.eps)
    result = TrainResult(model)
    for epoch, lr in enumerate(schedule.learning_rates(), start=1):
        total = 0.0
        for i in order:
            trs, ys = data[i]
            trace = forward_trace(model, trs)
            total += loss(trace.probs, ys)
            opt.step(model.theta, backward(model, trs, ys, trace), lr)
        entry = {
            "epoch": epoch,
            "lr": lr,
            "train_loss": total / len(data),
            "val_accuracy": token_accuracy(model, val) if val else float("nan"),
        }
        result.history.append(entry)
        log.info("epoch %d lr=%g loss=%.5f val_acc=%.5f", epoch, lr, entry["train_loss"], entry["val_accuracy"])
    result.steps = opt.steps
    return result
