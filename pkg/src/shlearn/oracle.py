"""Highlighting oracles: corpus building, dedup, fold splits and the
``oracle-v1`` file format."""

from __future__ import annotations

import json
import logging
import random
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .minilang import FRONTEND_NAME, VOCAB_SIZE, LexError, ParseError, bf_highlight, generate_program
from .tokens import HETA, HighlightClass, check_spans

log = logging.getLogger(__name__)

ORACLE_VERSION = "oracle-v1"


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class SourceExhausted(Exception):
    def __init__(self, accepted: int, target: int, skipped: int):
        super().__init__(f"only {accepted} of {target} valid files available ({skipped} skipped)")
        self.accepted = accepted
        self.skipped = skipped


@dataclass(frozen=True)
class OracleRecord:
    id: str
    chars: str
    hetas: tuple[HETA, ...]

    @property
    def trs(self) -> tuple[int, ...]:
        return tuple(h.tr for h in self.hetas)


# -- corpus building --------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSource:
    """Programs drawn from the MiniLang generator; file ``i`` uses its own seed."""

    seed: int = 0
    budget: int = 200

    def __iter__(self) -> Iterator[tuple[str, str]]:
        i = 0
        while True:
            yield f"gen{self.seed}-{i:06d}", generate_program(self.seed * 1_000_003 + i, self.budget)
            i += 1


@dataclass(frozen=True)
class DirectorySource:
    path: Path
    pattern: str = "*.mini"

    def __iter__(self) -> Iterator[tuple[str, str]]:
        for p in sorted(Path(self.path).glob(self.pattern)):
            yield p.stem, p.read_text(encoding="utf-8")


@dataclass
class Corpus:
    records: list[OracleRecord]
    skipped: int = 0
    duplicates: int = 0

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[OracleRecord]:
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]


def build_corpus(source: Iterable[tuple[str, str]], target: int | None, dedupe: bool = True) -> Corpus:
    """Highlight candidates with BF until ``target`` records are accepted.

    Unparsable files are skipped and counted. Duplicated token-rule
    sequences are dropped before counting toward ``target``. With
    ``target=None`` a finite source is consumed entirely.
    """
    if target is not None and target < 1:
        raise ValueError("target must be >= 1")
    out = Corpus([])
    seen: set[tuple[int, ...]] = set()
    for rid, chars in source:
        try:
            hetas = tuple(bf_highlight(chars))
        except (LexError, ParseError) as e:
            log.debug("skipping %s: %s", rid, e)
            out.skipped += 1
            continue
        rec = OracleRecord(rid, chars, hetas)
        if dedupe:
            key = rec.trs
            if key in seen:
                out.duplicates += 1
                continue
            seen.add(key)
        out.records.append(rec)
        if len(out.records) == target:
            return out
    if target is None:
        return out
    raise SourceExhausted(len(out.records), target, out.skipped)


def dedup(records: Iterable[OracleRecord]) -> list[OracleRecord]:
    """Keep the first record of every distinct token-rule sequence."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for r in records:
        key = r.trs
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def describe(values: Sequence[float]) -> dict[str, float]:
    """mean / sd / min / median / max (sd is the sample standard deviation)."""
    if not values:
        raise ValueError("no values")
    return {
        "mean": statistics.fmean(values),
        "sd": statistics.stdev(values) if len(values) > 1 else 0.0,
        "min": min(values),
        "median": statistics.median(values),
        "max": max(values),
    }


def corpus_stats(records: Sequence[OracleRecord]) -> dict[str, dict[str, float]]:
    """Chars / whitespaces / lines / tokens summary per record."""
    return {
        "chars": describe([len(r.chars) for r in records]),
        "whitespaces": describe([sum(c.isspace() for c in r.chars) for r in records]),
        "lines": describe([len(r.chars.splitlines()) for r in records]),
        "tokens": describe([len(r.hetas) for r in records]),
    }


# -- folds ---------------------------------------------------------------------

@dataclass(frozen=True)
class FoldSplit:
    fold: int
    test: tuple[str, ...]
    train: tuple[str, ...]
    val: tuple[str, ...]


def split_folds(records: Sequence[OracleRecord], n_folds: int = 3, seed: int = 0,
                val_fraction: float = 0.1) -> list[FoldSplit]:
    """Shuffle once, then rotate thirds: shuffled position j is tested in fold j mod n."""
    if len(records) < n_folds:
        raise ValueError(f"need at least {n_folds} records")
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("record ids must be unique")
    random.Random(seed).shuffle(ids)
    folds = []
    for k in range(n_folds):
        test = tuple(rid for j, rid in enumerate(ids) if j % n_folds == k)
        rest = [rid for j, rid in enumerate(ids) if j % n_folds != k]
        random.Random(seed * 1_000_003 + k + 1).shuffle(rest)
        n_val = round(len(rest) * val_fraction)
        folds.append(FoldSplit(k, test, tuple(rest[n_val:]), tuple(rest[:n_val])))
    return folds


def write_folds(directory: str | Path, folds: Sequence[FoldSplit]) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for f in folds:
        for part in ("test", "train", "val"):
            ids = getattr(f, part)
            (d / f"fold{f.fold}.{part}").write_text("".join(i + "\n" for i in ids), encoding="utf-8")


def read_folds(directory: str | Path) -> list[FoldSplit]:
    d = Path(directory)
    folds = []
    k = 0
    while (d / f"fold{k}.test").exists():
        parts = {
            part: tuple((d / f"fold{k}.{part}").read_text(encoding="utf-8").split())
            for part in ("test", "train", "val")
        }
        folds.append(FoldSplit(k, **parts))
        k += 1
    if not folds:
        raise FileNotFoundError(f"no fold files in {d}")
    return folds


# -- oracle-v1 files -----------------------------------------------------------

def _record_line(r: OracleRecord) -> str:
    toks = [[h.start, h.end, h.text, h.tr, int(h.hc)] for h in r.hetas]
    return json.dumps({"id": r.id, "chars": r.chars, "toks": toks}, separators=(",", ":"))


def write_oracle(path: str | Path, records: Iterable[OracleRecord],
                 frontend: str = FRONTEND_NAME, vocab: int = VOCAB_SIZE) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{ORACLE_VERSION} {frontend} {vocab}\n")
        for r in records:
            fh.write(_record_line(r))
            fh.write("\n")


def _parse_header(line: str) -> tuple[str, int]:
    parts = line.rstrip("\n").split(" ")
    if len(parts) != 3 or parts[0] != ORACLE_VERSION or not parts[2].isdigit():
        raise FormatError(1, f"expected '{ORACLE_VERSION} <frontend> <vocab-size>' header")
    return parts[1], int(parts[2])


def oracle_header(path: str | Path) -> tuple[str, int]:
    with open(path, encoding="utf-8") as fh:
        return _parse_header(fh.readline())


def _parse_record(obj, lineno: int, vocab: int) -> OracleRecord:
    if not isinstance(obj, dict) or set(obj) != {"id", "chars", "toks"}:
        raise FormatError(lineno, "record must have exactly the keys id, chars, toks")
    rid, chars, toks = obj["id"], obj["chars"], obj["toks"]
    if not isinstance(rid, str) or not isinstance(chars, str) or not isinstance(toks, list):
        raise FormatError(lineno, "bad field types")
    hetas = []
    for t in toks:
        if (not isinstance(t, list) or len(t) != 5
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in (t[0], t[1], t[3], t[4]))
                or not isinstance(t[2], str)):
            raise FormatError(lineno, f"malformed token {t!r}")
        i_s, i_e, text, tr, hc = t
        if not 0 <= tr < vocab:
            raise FormatError(lineno, f"token rule {tr} outside vocabulary")
        if not 0 <= hc < len(HighlightClass):
            raise FormatError(lineno, f"highlight class {hc} out of range")
        hetas.append(HETA(i_s, i_e, text, tr, HighlightClass(hc)))
    try:
        check_spans(hetas, len(chars))
    except ValueError as e:
        raise FormatError(lineno, str(e)) from None
    for h in hetas:
        if chars[h.start:h.end + 1] != h.text:
            raise FormatError(lineno, f"token text at {h.start} does not match chars")
    return OracleRecord(rid, chars, tuple(hetas))


def iter_oracle(path: str | Path) -> Iterator[OracleRecord]:
    with open(path, encoding="utf-8") as fh:
        _, vocab = _parse_header(fh.readline())
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise FormatError(lineno, f"invalid JSON: {e.msg}") from None
            yield _parse_record(obj, lineno, vocab)


def read_oracle(path: str | Path) -> list[OracleRecord]:
    return list(iter_oracle(path))
