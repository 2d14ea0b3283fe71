"""Token and highlighting entities plus the coverage-task algebra."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Sequence


class HighlightClass(IntEnum):
    ANY = 0
    # Lexical
    KEYWORD = 1
    LITERAL = 2
    CHAR_STRING_LITERAL = 3
    COMMENT = 4
    # Identifier
    TYPE_IDENTIFIER = 5
    FUNCTION_IDENTIFIER = 6
    FIELD_IDENTIFIER = 7
    # Declarator
    CLASS_DECLARATOR = 8
    FUNCTION_DECLARATOR = 9
    VARIABLE_DECLARATOR = 10
    # Annotation
    ANNOTATION_DECLARATOR = 11


LEXICAL = frozenset({
    HighlightClass.KEYWORD,
    HighlightClass.LITERAL,
    HighlightClass.CHAR_STRING_LITERAL,
    HighlightClass.COMMENT,
})
IDENTIFIER = frozenset({
    HighlightClass.TYPE_IDENTIFIER,
    HighlightClass.FUNCTION_IDENTIFIER,
    HighlightClass.FIELD_IDENTIFIER,
})
DECLARATOR = frozenset({
    HighlightClass.CLASS_DECLARATOR,
    HighlightClass.FUNCTION_DECLARATOR,
    HighlightClass.VARIABLE_DECLARATOR,
})
ANNOTATION = frozenset({HighlightClass.ANNOTATION_DECLARATOR})

_BASE = frozenset({HighlightClass.ANY}) | LEXICAL


class CoverageTask(Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"

    @property
    def classes(self) -> frozenset[HighlightClass]:
        return _TASK_CLASSES[self]

    @property
    def class_list(self) -> tuple[HighlightClass, ...]:
        """Task classes in ascending code order; position = model output index."""
        return _TASK_LISTS[self]

    @classmethod
    def parse(cls, name: str | "CoverageTask") -> "CoverageTask":
        if isinstance(name, CoverageTask):
            return name
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown coverage task {name!r}") from None


_TASK_CLASSES = {
    CoverageTask.T1: _BASE | DECLARATOR,
    CoverageTask.T2: _BASE | IDENTIFIER,
    CoverageTask.T3: _BASE | DECLARATOR | IDENTIFIER,
    CoverageTask.T4: _BASE | DECLARATOR | IDENTIFIER | ANNOTATION,
}
_TASK_LISTS = {t: tuple(sorted(cs)) for t, cs in _TASK_CLASSES.items()}


@dataclass(frozen=True, slots=True)
class ETA:
    """A lexed token: inclusive character span, exact text and token rule id."""

    start: int
    end: int
    text: str
    tr: int


@dataclass(frozen=True, slots=True)
class HETA:
    start: int
    end: int
    text: str
    tr: int
    hc: HighlightClass

    @classmethod
    def of(cls, eta: ETA, hc: HighlightClass) -> "HETA":
        return cls(eta.start, eta.end, eta.text, eta.tr, hc)

    @property
    def eta(self) -> ETA:
        return ETA(self.start, self.end, self.text, self.tr)


def classes_for_task(task: CoverageTask) -> frozenset[HighlightClass]:
    return CoverageTask.parse(task).classes


def adapt_class(hc: HighlightClass, task: CoverageTask) -> HighlightClass:
    """Task adapter: keep ``hc`` if the task covers it, otherwise ANY."""
    return hc if hc in task.classes else HighlightClass.ANY


def adapt_oracle(seq: Iterable[HETA], task: CoverageTask) -> list[HETA]:
    classes = task.classes
    return [
        h if h.hc in classes else HETA(h.start, h.end, h.text, h.tr, HighlightClass.ANY)
        for h in seq
    ]


def check_spans(tokens: Sequence[ETA | HETA], length: int | None = None) -> None:
    """Raise ValueError unless spans are well formed, increasing and disjoint."""
    prev_end = -1
    for i, tok in enumerate(tokens):
        if tok.start < 0 or tok.end < tok.start:
            raise ValueError(f"token {i}: bad span [{tok.start}, {tok.end}]")
        if len(tok.text) != tok.end - tok.start + 1:
            raise ValueError(f"token {i}: text length does not match span")
        if tok.start <= prev_end:
            raise ValueError(f"token {i}: span overlaps or precedes previous token")
        if length is not None and tok.end >= length:
            raise ValueError(f"token {i}: span ends past input length {length}")
        prev_end = tok.end
