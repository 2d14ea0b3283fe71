"""Character-level accuracy, corpus summaries and latency benchmarking."""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .highlighters import Highlighter
from .minilang import LexError, ParseError
from .oracle import describe
from .tokens import HETA, CoverageTask, HighlightClass

DEFAULT_REPS = 30


class SpanOutOfRange(ValueError):
    pass


class TaskMismatch(ValueError):
    pass


def char_assignments(length: int, hetas: Iterable[HETA]) -> np.ndarray:
    """Paint each token's class over its characters; everything else is ANY."""
    out = np.zeros(length, dtype=np.int8)
    prev_end = -1
    for h in hetas:
        if h.start < 0 or h.end >= length or h.end < h.start:
            raise SpanOutOfRange(f"span [{h.start}, {h.end}] outside text of length {length}")
        if h.start <= prev_end:
            raise SpanOutOfRange(f"span [{h.start}, {h.end}] overlaps the previous token")
        out[h.start:h.end + 1] = int(h.hc)
        prev_end = h.end
    return out


def char_accuracy(predicted: np.ndarray, oracle: np.ndarray) -> float:
    if len(predicted) != len(oracle):
        raise ValueError(f"length mismatch: {len(predicted)} vs {len(oracle)}")
    if len(oracle) == 0:
        raise ValueError("accuracy is undefined on empty input")
    return float(np.count_nonzero(np.asarray(predicted) == np.asarray(oracle))) / len(oracle)


def _task_table(task: CoverageTask) -> np.ndarray:
    table = np.zeros(len(HighlightClass), dtype=np.int8)
    for hc in task.classes:
        table[int(hc)] = int(hc)
    return table


@dataclass
class CorpusEvaluation:
    approach: str
    task: CoverageTask
    ids: list[str]
    accuracies: list[float]
    failures: int = 0  # files the highlighter could not process (scored all-ANY)

    @property
    def summary(self) -> dict[str, float]:
        return describe(self.accuracies)

    @property
    def median(self) -> float:
        return statistics.median(self.accuracies)


def evaluate_corpus(highlighter: Highlighter, records, task: CoverageTask) -> CorpusEvaluation:
    """Per-file character accuracy after adapting prediction and oracle to ``task``.

    Files the highlighter rejects (BF on invalid code) score as all-ANY.
    """
    task = CoverageTask.parse(task)
    if not task.classes <= highlighter.task.classes:
        raise TaskMismatch(
            f"{highlighter.name} predicts {highlighter.task.value} classes and cannot be scored on {task.value}")
    records = list(records)
    if not records:
        raise ValueError("no records to evaluate")
    table = _task_table(task)
    result = CorpusEvaluation(highlighter.name, task, [], [])
    for r in records:
        n = len(r.chars)
        if n == 0:
            continue
        try:
            pred = table[char_assignments(n, highlighter.highlight(r.chars))]
        except (LexError, ParseError):
            pred = np.zeros(n, dtype=np.int8)
            result.failures += 1
        oracle = table[char_assignments(n, r.hetas)]
        result.ids.append(r.id)
        result.accuracies.append(char_accuracy(pred, oracle))
    return result


@dataclass
class TimingReport:
    approach: str
    ids: list[str]
    samples: list[list[int]]  # per file, one latency (ns) per repetition
    warmup: int = 1

    @property
    def per_file(self) -> list[dict[str, float]]:
        return [describe(s) | {"reps": len(s)} for s in self.samples]

    @property
    def file_medians(self) -> list[float]:
        return [statistics.median(s) for s in self.samples]

    @property
    def aggregate(self) -> dict[str, float]:
        """Descriptive statistics over the per-file median latencies (ns)."""
        return describe(self.file_medians)


def time_highlighter(highlighter: Highlighter, records, reps: int = DEFAULT_REPS,
                     clock: Callable[[], int] = time.perf_counter_ns) -> TimingReport:
    """Time ``highlighter.run`` per file; one discarded warmup pass first.

    Only the prediction path is inside the timed region: no output
    formatting and no I/O.
    """
    records = list(records)
    run = highlighter.run
    errors = (LexError, ParseError)
    for r in records:
        try:
            run(r.chars)
        except errors:
            pass
    samples: list[list[int]] = [[] for _ in records]
    for _ in range(reps):
        for i, r in enumerate(records):
            chars = r.chars
            t0 = clock()
            try:
                run(chars)
            except errors:
                pass
            samples[i].append(clock() - t0)
    return TimingReport(highlighter.name, [r.id for r in records], samples)


# -- CSV output ----------------------------------------------------------------

SUMMARY_FIELDS = ("mean", "sd", "min", "median", "max")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_accuracy_csv(path: str | Path, evaluations: Sequence[CorpusEvaluation]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "approach", "task", "accuracy"])
        for ev in evaluations:
            for rid, acc in zip(ev.ids, ev.accuracies):
                w.writerow([rid, ev.approach, ev.task.value, _fmt(acc)])


def write_accuracy_summary_csv(path: str | Path, evaluations: Sequence[CorpusEvaluation]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["approach", "task", "files", *SUMMARY_FIELDS])
        for ev in evaluations:
            s = ev.summary
            w.writerow([ev.approach, ev.task.value, len(ev.accuracies), *(_fmt(s[k]) for k in SUMMARY_FIELDS)])


def write_timing_csv(path: str | Path, reports: Sequence[TimingReport], task: str = "-") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "approach", "task", "latency_ns", "reps"])
        for rep in reports:
            for rid, s in zip(rep.ids, rep.samples):
                w.writerow([rid, rep.approach, task, int(statistics.median(s)), len(s)])


def write_timing_summary_csv(path: str | Path, reports: Sequence[TimingReport]) -> None:
    """Latency summary in milliseconds, one row per approach."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["approach", "files", *(f"{k}_ms" for k in SUMMARY_FIELDS)])
        for rep in reports:
            s = rep.aggregate
            w.writerow([rep.approach, len(rep.ids), *(f"{s[k] / 1e6:.3f}" for k in SUMMARY_FIELDS)])
