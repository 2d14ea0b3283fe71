"""The three highlighting approaches behind one interface.

``run`` is the timed prediction path; ``highlight`` additionally builds the
HETA output.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .minilang.lexer import lex
from .minilang.walker import bf_highlight
from .nn.io import SavedModel, load_model
from .nn.model import predict
from .regex_baseline import scan
from .tokens import HETA, CoverageTask


class Highlighter:
    name: str
    task: CoverageTask = CoverageTask.T4

    def run(self, chars: str) -> Any:
        raise NotImplementedError

    def finish(self, chars: str, raw: Any) -> list[HETA]:
        return raw

    def highlight(self, chars: str) -> list[HETA]:
        return self.finish(chars, self.run(chars))


class BruteForceHighlighter(Highlighter):
    """Lex, parse, walk. Raises on invalid input."""

    name = "bf"

    def run(self, chars: str) -> list[HETA]:
        return bf_highlight(chars)


class RegexHighlighter(Highlighter):
    name = "regex"

    def run(self, chars: str):
        return scan(chars)

    def finish(self, chars: str, raw) -> list[HETA]:
        return [HETA(s, e, chars[s:e + 1], int(rule), hc) for s, e, rule, hc in raw]


class NeuralHighlighter(Highlighter):
    """Tolerant lexing to token rules, then the recurrent labeler."""

    def __init__(self, saved: SavedModel, name: str | None = None):
        self.model = saved.model
        self.task = saved.task
        self.fold = saved.fold
        self.classes = saved.task.class_list
        self.name = name or saved.model.config.name

    @classmethod
    def from_file(cls, path, name: str | None = None) -> "NeuralHighlighter":
        return cls(load_model(path), name)

    def run(self, chars: str):
        tokens = lex(chars, tolerant=True)
        if not tokens:
            return tokens, np.zeros(0, dtype=np.intp)
        trs = np.fromiter((t.tr for t in tokens), dtype=np.intp, count=len(tokens))
        return tokens, predict(self.model, trs)

    def finish(self, chars: str, raw) -> list[HETA]:
        tokens, pred = raw
        classes = self.classes
        return [HETA.of(t, classes[k]) for t, k in zip(tokens, pred.tolist())]
