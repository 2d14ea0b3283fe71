"""Incomplete-file (snippet) generation from test-fold oracles."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .oracle import OracleRecord
from .tokens import HETA


@dataclass(frozen=True)
class LengthParams:
    """Snippet line-count distribution: normal(mean, sd) truncated to [min, max]."""

    mean: float
    sd: float
    min: int
    max: int

    def __post_init__(self):
        if not 1 <= self.min <= self.max or self.sd < 0:
            raise ValueError(f"invalid length parameters {self}")


# StackOverflow snippet line statistics (mean, sd, min, max)
JAVA = LengthParams(17.00, 28.75, 1, 1117)
KOTLIN = LengthParams(15.00, 22.05, 1, 703)
PYTHON = LengthParams(14.00, 20.39, 1, 1341)
PRESETS = {"java": JAVA, "kotlin": KOTLIN, "python": PYTHON}


@dataclass(frozen=True)
class SnippetRecord:
    parent: str
    first: int  # 0-based inclusive line range
    last: int
    n: int
    chars: str
    hetas: tuple[HETA, ...]

    @property
    def id(self) -> str:
        return f"{self.parent}#{self.first}-{self.last}#{self.n}"

    def to_record(self) -> OracleRecord:
        return OracleRecord(self.id, self.chars, self.hetas)


def parent_id(record_id: str) -> str:
    """Parent file id of a snippet id (identity for plain record ids)."""
    return record_id.split("#", 1)[0]


def draw_length(params: LengthParams, rng: random.Random) -> int:
    while True:
        k = round(rng.gauss(params.mean, params.sd))
        if params.min <= k <= params.max:
            return k


def _line_starts(chars: str) -> list[int]:
    starts = [0]
    for i, c in enumerate(chars):
        if c == "\n" and i + 1 < len(chars):
            starts.append(i + 1)
    return starts


def cut_snippet(record: OracleRecord, first: int, last: int, n: int = 0) -> SnippetRecord:
    """Extract lines [first, last]; tokens straddling the range are dropped."""
    starts = _line_starts(record.chars)
    lo = starts[first]
    if last + 1 < len(starts):
        hi = starts[last + 1] - 1
    else:
        hi = len(record.chars)
        if record.chars.endswith("\n"):
            hi -= 1
    chars = record.chars[lo:hi]
    hetas = tuple(
        HETA(h.start - lo, h.end - lo, h.text, h.tr, h.hc)
        for h in record.hetas
        if h.start >= lo and h.end < hi
    )
    return SnippetRecord(record.id, first, last, n, chars, hetas)


def sample_snippets(test_set: Sequence[OracleRecord], count: int, params: LengthParams = JAVA,
                    seed: int = 0) -> list[SnippetRecord]:
    """Draw ``count`` snippets; files and line ranges are sampled with replacement."""
    if not test_set:
        raise ValueError("test set is empty")
    if not any(r.hetas for r in test_set):
        raise ValueError("test set contains no tokens")
    rng = random.Random(seed)
    out: list[SnippetRecord] = []
    while len(out) < count:
        rec = rng.choice(test_set)
        n_lines = len(_line_starts(rec.chars))
        length = min(draw_length(params, rng), n_lines)
        first = rng.randint(0, n_lines - length)
        snip = cut_snippet(rec, first, first + length - 1, len(out))
        if snip.hetas:
            out.append(snip)
    return out
