import csv
import statistics

import numpy as np
import pytest

from shlearn.evaluate import (
    SpanOutOfRange,
    TaskMismatch,
    char_accuracy,
    char_assignments,
    evaluate_corpus,
    time_highlighter,
    write_accuracy_csv,
    write_accuracy_summary_csv,
    write_timing_csv,
    write_timing_summary_csv,
)
from shlearn.highlighters import BruteForceHighlighter, Highlighter, NeuralHighlighter, RegexHighlighter
from shlearn.nn import ModelConfig, SavedModel, init_model
from shlearn.oracle import OracleRecord, build_corpus
from shlearn.snippets import cut_snippet
from shlearn.tokens import HETA, CoverageTask, HighlightClass as HC


def test_char_assignments():
    hs = [HETA(1, 2, "ab", 13, HC.KEYWORD), HETA(4, 4, "c", 13, HC.COMMENT)]
    np.testing.assert_array_equal(char_assignments(6, hs), [0, 1, 1, 0, 4, 0])
    with pytest.raises(SpanOutOfRange):
        char_assignments(3, [HETA(1, 3, "abc", 13, HC.ANY)])
    with pytest.raises(SpanOutOfRange):
        char_assignments(6, [HETA(1, 2, "ab", 13, HC.ANY), HETA(2, 2, "b", 13, HC.ANY)])


def test_char_accuracy():
    assert char_accuracy(np.array([1, 2, 3, 0]), np.array([1, 2, 0, 0])) == 0.75
    with pytest.raises(ValueError):
        char_accuracy(np.array([1]), np.array([1, 2]))
    with pytest.raises(ValueError):
        char_accuracy(np.array([]), np.array([]))


def test_bf_scores_one_on_its_own_oracle(small_corpus):
    for task in CoverageTask:
        ev = evaluate_corpus(BruteForceHighlighter(), small_corpus, task)
        assert ev.accuracies == [1.0] * len(small_corpus)
        assert ev.failures == 0


class Fixed(Highlighter):
    def __init__(self, hc, task=CoverageTask.T4):
        self.name, self.hc, self.task = "fixed", hc, task

    def run(self, chars):
        return [HETA(0, len(chars) - 1, chars, 13, self.hc)]


def test_adapter_applies_to_both_sides():
    r = OracleRecord("r", "abcd", (HETA(0, 1, "ab", 13, HC.FUNCTION_IDENTIFIER),))
    # in T1 the oracle's FUNCTION_IDENTIFIER becomes ANY, and so does the prediction
    assert evaluate_corpus(Fixed(HC.FIELD_IDENTIFIER), [r], "T1").accuracies == [1.0]
    assert evaluate_corpus(Fixed(HC.FIELD_IDENTIFIER), [r], "T2").accuracies == [0.0]
    assert evaluate_corpus(Fixed(HC.FUNCTION_IDENTIFIER), [r], "T2").accuracies == [0.5]


def test_task_guard():
    r = OracleRecord("r", "ab", ())
    with pytest.raises(TaskMismatch):
        evaluate_corpus(Fixed(HC.ANY, CoverageTask.T2), [r], "T4")
    with pytest.raises(TaskMismatch):
        evaluate_corpus(Fixed(HC.ANY, CoverageTask.T1), [r], "T2")
    evaluate_corpus(Fixed(HC.ANY, CoverageTask.T3), [r], "T2")


def test_bf_on_snippet_scores_all_any():
    src = "class K {\n    fun f() {\n        int x = 1;\n    }\n}\n"
    rec = build_corpus([("k", src)], 1)[0]
    snip = cut_snippet(rec, 1, 2).to_record()
    ev = evaluate_corpus(BruteForceHighlighter(), [snip], "T4")
    assert ev.failures == 1
    oracle = char_assignments(len(snip.chars), snip.hetas)
    assert ev.accuracies == [float(np.mean(oracle == 0))]


def test_neural_highlighter_shapes(small_corpus):
    task = CoverageTask.T2
    model = init_model(ModelConfig(46, len(task.class_list), 16, True))
    h = NeuralHighlighter(SavedModel(model, task, "minilang", 0))
    assert h.name == "brnn16" and h.fold == 0
    hs = h.highlight('x # "open')
    assert [t.text for t in hs] == ["x", '"open']
    assert all(t.hc in task.classes for t in hs)
    assert h.highlight("") == []
    ev = evaluate_corpus(h, small_corpus[:5], task)
    assert len(ev.accuracies) == 5


class Counting(Highlighter):
    name = "count"

    def __init__(self):
        self.calls = 0

    def run(self, chars):
        self.calls += 1
        return []


class FakeClock:
    def __init__(self):
        self.t = 0
        self.reads = 0

    def __call__(self):
        self.reads += 1
        self.t += 1000
        return self.t


def test_timing_protocol(small_corpus):
    h, clock = Counting(), FakeClock()
    rep = time_highlighter(h, small_corpus[:4], reps=30, clock=clock)
    assert h.calls == 4 * 31  # one warmup pass plus 30 timed
    assert clock.reads == 2 * 4 * 30
    assert all(len(s) == 30 for s in rep.samples)
    assert rep.file_medians == [1000] * 4
    assert rep.aggregate["median"] == 1000


def test_timed_region_has_no_io(small_corpus, monkeypatch):
    import builtins

    def no_io(*a, **k):
        raise AssertionError("I/O inside the timed path")

    hs = [BruteForceHighlighter(), RegexHighlighter(),
          NeuralHighlighter(SavedModel(init_model(ModelConfig(46, 12)), CoverageTask.T4, "minilang"))]
    monkeypatch.setattr(builtins, "open", no_io)
    monkeypatch.setattr(builtins, "print", no_io)
    for h in hs:
        time_highlighter(h, small_corpus[:3], reps=2)


def test_csv_outputs(tmp_path, small_corpus):
    ev = evaluate_corpus(RegexHighlighter(), small_corpus[:6], "T4")
    write_accuracy_csv(tmp_path / "a.csv", [ev])
    rows = list(csv.DictReader(open(tmp_path / "a.csv")))
    assert [r["id"] for r in rows] == ev.ids
    assert {r["task"] for r in rows} == {"T4"}
    assert [float(r["accuracy"]) for r in rows] == ev.accuracies
    write_accuracy_summary_csv(tmp_path / "s.csv", [ev])
    (row,) = csv.DictReader(open(tmp_path / "s.csv"))
    assert float(row["median"]) == statistics.median(ev.accuracies)

    rep = time_highlighter(RegexHighlighter(), small_corpus[:3], reps=3)
    write_timing_csv(tmp_path / "t.csv", [rep])
    rows = list(csv.DictReader(open(tmp_path / "t.csv")))
    assert [int(r["reps"]) for r in rows] == [3, 3, 3]
    write_timing_summary_csv(tmp_path / "ts.csv", [rep])
    (row,) = csv.DictReader(open(tmp_path / "ts.csv"))
    assert float(row["median_ms"]) == pytest.approx(statistics.median(rep.file_medians) / 1e6, abs=1e-3)
