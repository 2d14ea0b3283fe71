"""Brute-force highlighter: lex, parse, then a listener walk over the AST."""

from __future__ import annotations

from typing import Callable, Sequence

from ..tokens import ETA, HETA, HighlightClass as HC
from . import lexer as L
from .parser import AstNode, parse


def lexical_class(tr: int) -> HC:
    """Class decidable from the token rule alone (ANY for everything else)."""
    return _LEXICAL.get(tr, HC.ANY)


_LEXICAL: dict[int, HC] = {k: HC.KEYWORD for k in L.KEYWORD_IDS}
_LEXICAL.update({
    L.INT_LIT: HC.LITERAL,
    L.FLOAT_LIT: HC.LITERAL,
    L.BOOL_LIT: HC.LITERAL,
    L.NULL_LIT: HC.LITERAL,
    L.STRING_LIT: HC.CHAR_STRING_LITERAL,
    L.CHAR_LIT: HC.CHAR_STRING_LITERAL,
    L.LINE_COMMENT: HC.COMMENT,
    L.BLOCK_COMMENT: HC.COMMENT,
})


class HighlightListener:
    """Assigns structural classes to identifier tokens, one per token."""

    def __init__(self, tokens: Sequence[ETA]):
        self.tokens = tokens
        self.hc = [lexical_class(t.tr) for t in tokens]
        self._structural: set[int] = set()
        self._handlers: dict[str, Callable[[AstNode], None]] = {
            "type": self.enter_type,
            "annotation": self.enter_annotation,
            "class_name": self._mark_first(HC.CLASS_DECLARATOR),
            "method_name": self._mark_first(HC.FUNCTION_DECLARATOR),
            "var_name": self._mark_first(HC.VARIABLE_DECLARATOR),
            "call": self.enter_call,
            "method_call": self.enter_method_call,
            "field_access": self.enter_field_access,
        }

    def mark(self, index: int, hc: HC) -> None:
        if index in self._structural:
            raise AssertionError(f"token {index} highlighted twice")
        self._structural.add(index)
        self.hc[index] = hc

    def _mark_first(self, hc: HC) -> Callable[[AstNode], None]:
        def enter(node: AstNode) -> None:
            self.mark(node.children[0], hc)
        return enter

    def enter_type(self, node: AstNode) -> None:
        first = node.children[0]
        if self.tokens[first].tr == L.IDENT:
            self.mark(first, HC.TYPE_IDENTIFIER)

    def enter_annotation(self, node: AstNode) -> None:
        for i in node.children:
            self.mark(i, HC.ANNOTATION_DECLARATOR)

    def enter_call(self, node: AstNode) -> None:
        callee = node.children[0]
        if isinstance(callee, int):
            self.mark(callee, HC.FUNCTION_IDENTIFIER)

    def enter_method_call(self, node: AstNode) -> None:
        self.mark(node.children[2], HC.FUNCTION_IDENTIFIER)

    def enter_field_access(self, node: AstNode) -> None:
        self.mark(node.children[2], HC.FIELD_IDENTIFIER)

    def walk(self, root: AstNode) -> list[HETA]:
        handlers = self._handlers
        for node in root.walk():
            h = handlers.get(node.kind)
            if h is not None:
                h(node)
        return [HETA.of(t, hc) for t, hc in zip(self.tokens, self.hc)]


def highlight_tokens(tokens: Sequence[ETA]) -> list[HETA]:
    return HighlightListener(tokens).walk(parse(tokens))


def bf_highlight(chars: str) -> list[HETA]:
    """Ground-truth highlighting of a valid MiniLang file (T4 coverage).

    Raises LexError / ParseError on invalid input.
    """
    return highlight_tokens(L.lex(chars))
