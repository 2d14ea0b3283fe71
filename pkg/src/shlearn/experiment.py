"""Run configuration and the end-to-end experiment pipeline."""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .evaluate import CorpusEvaluation, evaluate_corpus
from .highlighters import Highlighter, NeuralHighlighter
from .minilang import FRONTEND_NAME, VOCAB_SIZE
from .nn import ModelConfig, SavedModel, TrainSchedule, init_model, train
from .oracle import FoldSplit, OracleRecord
from .snippets import PRESETS, LengthParams, parent_id
from .tokens import CoverageTask

log = logging.getLogger(__name__)


def parse_schedule(text: str) -> TrainSchedule:
    """``"2:1e-3,2:1e-4"`` -> phases of (epochs, learning rate)."""
    phases = []
    for part in text.split(","):
        epochs, lr = part.split(":")
        phases.append((int(epochs), float(lr)))
    return TrainSchedule(tuple(phases))


def format_schedule(schedule: TrainSchedule) -> str:
    return ",".join(f"{e}:{lr!r}" for e, lr in schedule.phases)


def parse_length_params(text: str) -> LengthParams:
    """A preset name (java/kotlin/python) or ``mean,sd,min,max``."""
    if text.lower() in PRESETS:
        return PRESETS[text.lower()]
    mean, sd, lo, hi = text.split(",")
    return LengthParams(float(mean), float(sd), int(lo), int(hi))


@dataclass
class RunConfig:
    seed: int = 0
    corpus_size: int = 5000
    budget: int = 200
    folds: int = 3
    task: str = "T4"  # comma-separated list allowed
    hidden: int = 16
    bidirectional: bool = True
    schedule: str = "2:0.001,2:0.0001"
    snippets: int = 1000  # per fold
    snippet_params: str = "java"

    @property
    def tasks(self) -> list[CoverageTask]:
        return [CoverageTask.parse(t.strip()) for t in self.task.split(",") if t.strip()]

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in types:
                raise ValueError(f"config line {lineno}: unknown or malformed entry {raw!r}")
            kind = types[key]
            if kind == "bool":
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(f"config line {lineno}: {key} expects a boolean")
                values[key] = value.lower() in ("true", "1", "yes")
            elif kind == "int":
                values[key] = int(value)
            else:
                values[key] = value
        return cls(**values)

    def dump(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name}={str(v).lower() if isinstance(v, bool) else v}")
        return "\n".join(lines) + "\n"


def model_config(cfg: RunConfig, task: CoverageTask) -> ModelConfig:
    return ModelConfig(VOCAB_SIZE, len(task.class_list), cfg.hidden, cfg.bidirectional, seed=cfg.seed)


def train_fold(records: dict[str, OracleRecord], fold: FoldSplit, task: CoverageTask, config: ModelConfig,
               schedule: TrainSchedule) -> SavedModel:
    model = init_model(config)
    result = train(model, [records[i] for i in fold.train], [records[i] for i in fold.val], task, schedule)
    log.info("fold %d %s %s: %s", fold.fold, config.name, task.value, result.history[-1])
    return SavedModel(model, task, FRONTEND_NAME, fold.fold)


def fold_of(folds: Sequence[FoldSplit]) -> dict[str, int]:
    return {rid: f.fold for f in folds for rid in f.test}


def evaluate_folded(highlighters: Sequence[Highlighter], records: Sequence[OracleRecord],
                    folds: Sequence[FoldSplit] | None, task: CoverageTask,
                    name: str | None = None) -> CorpusEvaluation:
    """Pool per-file accuracies over folds.

    A neural highlighter with a fold is scored only on that fold's test
    files (snippets follow their parent file); others score every record.
    """
    test_fold = fold_of(folds) if folds else {}
    pooled = None
    for h in highlighters:
        fold = getattr(h, "fold", None)
        if folds and fold is not None:
            subset = [r for r in records if test_fold.get(parent_id(r.id)) == fold]
        else:
            subset = list(records)
        if not subset:
            continue
        ev = evaluate_corpus(h, subset, task)
        if pooled is None:
            pooled = ev
            pooled.approach = name or h.name
        else:
            pooled.ids += ev.ids
            pooled.accuracies += ev.accuracies
            pooled.failures += ev.failures
    if pooled is None:
        raise ValueError("no records matched the given highlighters")
    return pooled


def neural_highlighters(saved: Sequence[SavedModel]) -> list[NeuralHighlighter]:
    return [NeuralHighlighter(s) for s in saved]


# -- pipeline --------------------------------------------------------------------

@dataclass
class PipelineResult:
    out: Path
    records: list[OracleRecord]
    folds: list[FoldSplit]
    snippets: list[list[OracleRecord]]
    models: dict[CoverageTask, list[SavedModel]]
    files: list[CorpusEvaluation]
    snippet_evals: list[CorpusEvaluation]


def run_pipeline(cfg: RunConfig, out: str | Path) -> PipelineResult:
    """gen -> oracle -> split -> snippets -> train -> eval, all from ``cfg.seed``.

    Writes the run config, the oracle, fold lists, snippet oracles, one
    model per task and fold, and accuracy CSVs for files and snippets.
    """
    from .evaluate import write_accuracy_csv, write_accuracy_summary_csv
    from .highlighters import BruteForceHighlighter, RegexHighlighter
    from .nn import save_model
    from .oracle import GeneratorSource, build_corpus, split_folds, write_folds, write_oracle
    from .snippets import sample_snippets

    out = Path(out)
    (out / "models").mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.dump(), encoding="utf-8")
    schedule = parse_schedule(cfg.schedule)
    params = parse_length_params(cfg.snippet_params)

    corpus = build_corpus(GeneratorSource(cfg.seed, cfg.budget), cfg.corpus_size)
    records = corpus.records
    write_oracle(out / "corpus.oracle", records)
    by_id = {r.id: r for r in records}
    folds = split_folds(records, cfg.folds, cfg.seed)
    write_folds(out / "folds", folds)

    snippets = []
    for f in folds:
        snips = sample_snippets([by_id[i] for i in f.test], cfg.snippets, params, cfg.seed * 1_000_003 + f.fold)
        snips = [s.to_record() for s in snips]
        write_oracle(out / f"snippets.fold{f.fold}.oracle", snips)
        snippets.append(snips)

    models: dict[CoverageTask, list[SavedModel]] = {}
    for task in cfg.tasks:
        mc = model_config(cfg, task)
        models[task] = []
        for f in folds:
            saved = train_fold(by_id, f, task, mc, schedule)
            save_model(out / "models" / f"{mc.name}.{task.value}.fold{f.fold}.model", saved.model, task,
                       saved.vocabulary, saved.fold)
            models[task].append(saved)

    all_snips = [s for group in snippets for s in group]
    file_evals, snip_evals = [], []
    for task in cfg.tasks:
        for evals, recs in ((file_evals, records), (snip_evals, all_snips)):
            evals.append(evaluate_folded(neural_highlighters(models[task]), recs, folds, task))
            evals.append(evaluate_folded([BruteForceHighlighter()], recs, None, task))
            evals.append(evaluate_folded([RegexHighlighter()], recs, None, task))
    write_accuracy_csv(out / "accuracy.files.csv", file_evals)
    write_accuracy_summary_csv(out / "accuracy.files.summary.csv", file_evals)
    write_accuracy_csv(out / "accuracy.snippets.csv", snip_evals)
    write_accuracy_summary_csv(out / "accuracy.snippets.summary.csv", snip_evals)
    return PipelineResult(out, records, folds, [list(s) for s in snippets], models, file_evals, snip_evals)
