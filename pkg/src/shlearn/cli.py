"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 data/format error, 3 lex/parse error.
Failures print one line to stderr: ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys
from collections import defaultdict
from pathlib import Path

from . import __version__
from .evaluate import (
    TaskMismatch,
    time_highlighter,
    write_accuracy_csv,
    write_accuracy_summary_csv,
    write_timing_csv,
    write_timing_summary_csv,
)
from .experiment import (
    RunConfig,
    evaluate_folded,
    model_config,
    parse_length_params,
    parse_schedule,
    run_pipeline,
    train_fold,
)
from .highlighters import BruteForceHighlighter, NeuralHighlighter, RegexHighlighter
from .minilang import LexError, ParseError
from .nn import ModelFormatError, VocabError, save_model
from .oracle import (
    DirectorySource,
    FormatError,
    GeneratorSource,
    SourceExhausted,
    build_corpus,
    corpus_stats,
    read_folds,
    read_oracle,
    split_folds,
    write_folds,
    write_oracle,
)
from .render import to_ansi, to_html, to_spans
from .snippets import sample_snippets
from .tokens import CoverageTask

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SYNTAX = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tasks(text: str) -> list[CoverageTask]:
    if text.lower() == "all":
        return list(CoverageTask)
    try:
        return [CoverageTask.parse(t.strip()) for t in text.split(",")]
    except ValueError as e:
        raise UsageError(str(e)) from None


def _approaches(args) -> list:
    """Highlighters named on the command line; per-fold models stay grouped by name."""
    out = []
    if args.bf:
        out.append(BruteForceHighlighter())
    if args.regex:
        out.append(RegexHighlighter())
    for path in args.model or ():
        out.append(NeuralHighlighter.from_file(path))
    if not out:
        raise UsageError("choose at least one of --model, --bf, --regex")
    return out


def _read_oracles(paths) -> list:
    return [r for p in paths for r in read_oracle(p)]


# -- commands -------------------------------------------------------------------

def cmd_gen(args) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    src = GeneratorSource(args.seed, args.budget)
    for rid, chars in itertools.islice(src, args.count):
        (out / f"{rid}.mini").write_text(chars, encoding="utf-8")


def cmd_oracle(args) -> None:
    if args.generate is not None:
        corpus = build_corpus(GeneratorSource(args.seed, args.budget), args.generate)
    else:
        if not Path(args.input).is_dir():
            raise FileNotFoundError(f"{args.input} is not a directory")
        corpus = build_corpus(DirectorySource(Path(args.input)), None)
        if not corpus.records:
            raise ValueError(f"no valid files in {args.input}")
    write_oracle(args.out, corpus.records)
    print(f"records={len(corpus)} skipped={corpus.skipped} duplicates={corpus.duplicates}", file=sys.stderr)
    if args.stats:
        print(json.dumps(corpus_stats(corpus.records), indent=2, sort_keys=True))


def cmd_split(args) -> None:
    folds = split_folds(read_oracle(args.oracle), args.folds, args.seed)
    write_folds(args.out, folds)


def cmd_snippets(args) -> None:
    records = {r.id: r for r in read_oracle(args.oracle)}
    params = parse_length_params(args.params)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for f in read_folds(args.folds):
        test = [records[i] for i in f.test]
        snips = sample_snippets(test, args.count, params, args.seed * 1_000_003 + f.fold)
        write_oracle(out / f"snippets.fold{f.fold}.oracle", [s.to_record() for s in snips])


def cmd_train(args) -> None:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.task:
        cfg.task = args.task
    if args.hidden is not None:
        cfg.hidden = args.hidden
    if args.bidirectional is not None:
        cfg.bidirectional = args.bidirectional
    if args.seed is not None:
        cfg.seed = args.seed
    schedule = parse_schedule(cfg.schedule)
    records = {r.id: r for r in read_oracle(args.oracle)}
    folds = read_folds(args.folds)
    if args.fold is not None:
        folds = [f for f in folds if f.fold == args.fold]
        if not folds:
            raise UsageError(f"no fold {args.fold}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for task in _tasks(cfg.task):
        mc = model_config(cfg, task)
        for f in folds:
            saved = train_fold(records, f, task, mc, schedule)
            path = out / f"{mc.name}.{task.value}.fold{f.fold}.model"
            save_model(path, saved.model, task, saved.vocabulary, saved.fold)
            print(path)


def cmd_highlight(args) -> None:
    chars = sys.stdin.read() if args.source == "-" else Path(args.source).read_text(encoding="utf-8")
    if args.bf:
        h = BruteForceHighlighter()
    elif args.regex:
        h = RegexHighlighter()
    else:
        h = NeuralHighlighter.from_file(args.model)
    hetas = h.highlight(chars)
    if args.format == "spans":
        sys.stdout.write(to_spans(hetas))
    elif args.format == "html":
        sys.stdout.write(to_html(chars, hetas))
    else:
        sys.stdout.write(to_ansi(chars, hetas))


def _grouped(highlighters) -> dict[str, list]:
    groups = defaultdict(list)
    for h in highlighters:
        groups[h.name].append(h)
    return groups


def cmd_eval(args) -> None:
    tasks = _tasks(args.task)
    highlighters = _approaches(args)
    records = _read_oracles(args.oracle)
    folds = read_folds(args.folds) if args.folds else None
    evaluations = []
    for task in tasks:
        for name, group in _grouped(highlighters).items():
            exact = [h for h in group if h.task == task]
            chosen = exact or [h for h in group if task.classes <= h.task.classes]
            if not chosen:
                raise TaskMismatch(f"{name} predicts {group[0].task.value} classes and cannot be scored on {task.value}")
            evaluations.append(evaluate_folded(chosen, records, folds, task, name))
    write_accuracy_csv(args.out, evaluations)
    if args.summary:
        write_accuracy_summary_csv(args.summary, evaluations)
    for ev in evaluations:
        print(f"{ev.approach} {ev.task.value} median={ev.median:.4f} files={len(ev.ids)} failures={ev.failures}")


def cmd_bench(args) -> None:
    highlighters = [group[0] for group in _grouped(_approaches(args)).values()]
    records = _read_oracles(args.oracle)
    if args.limit is not None:
        records = records[:args.limit]
    if not records:
        raise ValueError("no records to benchmark")
    reports = [time_highlighter(h, records, args.reps) for h in highlighters]
    write_timing_csv(args.out, reports)
    if args.summary:
        write_timing_summary_csv(args.summary, reports)
    for rep in reports:
        print(f"{rep.approach} median_ms={rep.aggregate['median'] / 1e6:.3f} files={len(rep.ids)}")


def cmd_pipeline(args) -> None:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    _tasks(cfg.task)
    result = run_pipeline(cfg, args.out)
    for ev in result.files + result.snippet_evals:
        print(f"{ev.approach} {ev.task.value} median={ev.median:.4f} files={len(ev.ids)}")


# -- parser -----------------------------------------------------------------------

def _add_approaches(p, multi_model: bool) -> None:
    if multi_model:
        p.add_argument("--model", action="append", metavar="PATH", help="model file (repeatable)")
        p.add_argument("--bf", action="store_true", help="brute-force highlighter")
        p.add_argument("--regex", action="store_true", help="regex baseline")
    else:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--model", metavar="PATH", help="model file")
        g.add_argument("--bf", action="store_true", help="brute-force highlighter")
        g.add_argument("--regex", action="store_true", help="regex baseline")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="shlearn", description="Learned syntax highlighting for MiniLang.")
    p.add_argument("--version", action="version", version=f"shlearn {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="generate MiniLang source files")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=200, help="approximate tokens per file")
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("oracle", help="highlight sources with BF and write an oracle file")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", metavar="DIR", help="directory of *.mini files")
    src.add_argument("--generate", type=int, metavar="N", help="generate until N deduplicated records")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=200)
    s.add_argument("--out", required=True, metavar="FILE")
    s.add_argument("--stats", action="store_true", help="print corpus statistics as JSON")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("split", help="write k-fold train/val/test id lists")
    s.add_argument("--oracle", required=True)
    s.add_argument("--folds", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("snippets", help="sample snippet oracles from each fold's test set")
    s.add_argument("--oracle", required=True)
    s.add_argument("--folds", required=True, metavar="DIR")
    s.add_argument("--count", type=int, default=1000, help="snippets per fold")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--params", default="java", help="java, kotlin, python or mean,sd,min,max")
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_snippets)

    s = sub.add_parser("train", help="train one model per fold")
    s.add_argument("--oracle", required=True)
    s.add_argument("--folds", required=True, metavar="DIR")
    s.add_argument("--config", help="key=value run config")
    s.add_argument("--task", help="T1..T4, comma list or 'all'")
    s.add_argument("--hidden", type=int)
    d = s.add_mutually_exclusive_group()
    d.add_argument("--bidirectional", dest="bidirectional", action="store_true", default=None)
    d.add_argument("--unidirectional", dest="bidirectional", action="store_false")
    s.add_argument("--seed", type=int)
    s.add_argument("--fold", type=int, help="train only this fold")
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("highlight", help="highlight one file")
    _add_approaches(s, multi_model=False)
    s.add_argument("--format", choices=("ansi", "html", "spans"), default="ansi")
    s.add_argument("source", help="source file, or - for stdin")
    s.set_defaults(func=cmd_highlight)

    s = sub.add_parser("eval", help="per-file character accuracy")
    _add_approaches(s, multi_model=True)
    s.add_argument("--oracle", required=True, action="append", help="oracle file (repeatable)")
    s.add_argument("--folds", metavar="DIR", help="score each fold model on its own test files")
    s.add_argument("--task", default="T4", help="T1..T4, comma list or 'all'")
    s.add_argument("--out", required=True, metavar="CSV")
    s.add_argument("--summary", metavar="CSV")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bench", help="prediction latency per file")
    _add_approaches(s, multi_model=True)
    s.add_argument("--oracle", required=True, action="append")
    s.add_argument("--reps", type=int, default=30)
    s.add_argument("--limit", type=int, help="only the first N records")
    s.add_argument("--out", required=True, metavar="CSV")
    s.add_argument("--summary", metavar="CSV")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("pipeline", help="gen, oracle, split, snippets, train and eval in one go")
    s.add_argument("--config", help="key=value run config")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True, metavar="DIR")
    s.set_defaults(func=cmd_pipeline)
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(f"error: {kind}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args)
    except UsageError as e:
        return _fail(EXIT_USAGE, "usage", e)
    except (LexError, ParseError) as e:
        return _fail(EXIT_SYNTAX, type(e).__name__.lower().replace("error", ""), e)
    except (FormatError, ModelFormatError) as e:
        return _fail(EXIT_DATA, "format", e)
    except (SourceExhausted, TaskMismatch, VocabError) as e:
        return _fail(EXIT_DATA, "data", e)
    except (OSError, UnicodeDecodeError) as e:
        return _fail(EXIT_DATA, "io", e)
    except (KeyError, ValueError) as e:
        return _fail(EXIT_DATA, "data", e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
