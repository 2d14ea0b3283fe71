"""Recursive-descent parser for MiniLang.

Comment tokens stay in the ETA sequence but are invisible to the parser.
AST children are either nested nodes or integer indices into the full ETA
sequence, so the highlighting walker can address tokens directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from ..tokens import ETA
from . import lexer as L

Child = Union["AstNode", int]


@dataclass(frozen=True, slots=True)
class AstNode:
    kind: str
    children: tuple[Child, ...]
    span: tuple[int, int] | None  # (first, last) ETA index; None when empty

    def tokens(self) -> Iterator[int]:
        for c in self.children:
            if isinstance(c, int):
                yield c
            else:
                yield from c.tokens()

    def walk(self) -> Iterator["AstNode"]:
        yield self
        for c in self.children:
            if isinstance(c, AstNode):
                yield from c.walk()


class ParseError(Exception):
    def __init__(self, index: int, expected: Sequence[str]):
        self.index = index
        self.expected = tuple(expected)
        super().__init__(f"unexpected token at index {index}, expected one of {', '.join(self.expected)}")


def _node(kind: str, children: list[Child]) -> AstNode:
    first = last = None
    for c in children:
        if isinstance(c, int):
            lo = hi = c
        elif c.span is None:
            continue
        else:
            lo, hi = c.span
        if first is None:
            first = lo
        last = hi
    return AstNode(kind, tuple(children), None if first is None else (first, last))


_PRIM_IDS = frozenset(L.RULE_ID[p.upper()] for p in L.PRIMITIVES)
_LITERALS = frozenset({L.INT_LIT, L.FLOAT_LIT, L.BOOL_LIT, L.NULL_LIT, L.STRING_LIT, L.CHAR_LIT})
_R = L.RULE_ID

_BINARY_LEVELS = (
    frozenset({_R["OR"]}),
    frozenset({_R["AND"]}),
    frozenset({_R["EQ"], _R["NE"]}),
    frozenset({_R["LT"], _R["GT"], _R["LE"], _R["GE"]}),
    frozenset({_R["PLUS"], _R["MINUS"]}),
    frozenset({_R["STAR"], _R["SLASH"]}),
)


class _Parser:
    def __init__(self, tokens: Sequence[ETA]):
        # parser position indexes ``idx``; ``idx`` maps to full ETA indices
        self.idx = [i for i, t in enumerate(tokens) if t.tr not in L.COMMENT_IDS]
        self.trs = [tokens[i].tr for i in self.idx]
        self.n_total = len(tokens)
        self.pos = 0

    # -- helpers ---------------------------------------------------------
    def peek(self, k: int = 0) -> int:
        p = self.pos + k
        return self.trs[p] if p < len(self.trs) else -1

    def error(self, *expected: str) -> ParseError:
        at = self.idx[self.pos] if self.pos < len(self.idx) else self.n_total
        return ParseError(at, expected)

    def expect(self, rule: str) -> int:
        if self.peek() != _R[rule]:
            raise self.error(rule)
        i = self.idx[self.pos]
        self.pos += 1
        return i

    def accept(self, rule: str) -> int | None:
        if self.peek() == _R[rule]:
            i = self.idx[self.pos]
            self.pos += 1
            return i
        return None

    def take(self) -> int:
        i = self.idx[self.pos]
        self.pos += 1
        return i

    # -- declarations ----------------------------------------------------
    def compilation_unit(self) -> AstNode:
        parts: list[Child] = []
        while self.peek() == _R["IMPORT"]:
            parts.append(self.import_decl())
        while self.peek() != -1:
            parts.append(self.class_decl())
        return _node("unit", parts)

    def import_decl(self) -> AstNode:
        parts: list[Child] = [self.expect("IMPORT"), self.expect("IDENT")]
        while (dot := self.accept("DOT")) is not None:
            parts += [dot, self.expect("IDENT")]
        parts.append(self.expect("SEMI"))
        return _node("import", parts)

    def annotations(self) -> list[Child]:
        out: list[Child] = []
        while self.peek() == L.AT:
            out.append(_node("annotation", [self.take(), self.expect("IDENT")]))
        return out

    def class_decl(self) -> AstNode:
        parts = self.annotations()
        if self.peek() != _R["CLASS"]:
            raise self.error("AT", "CLASS")
        parts += [self.take(), _node("class_name", [self.expect("IDENT")]), self.expect("LBRACE")]
        while self.peek() != _R["RBRACE"]:
            if self.peek() == -1:
                raise self.error("RBRACE")
            parts.append(self.member())
        parts.append(self.take())
        return _node("class", parts)

    def is_type_start(self) -> bool:
        t = self.peek()
        return t in _PRIM_IDS or t == L.IDENT

    def type_(self) -> AstNode:
        if not self.is_type_start():
            raise self.error("IDENT", "INT", "FLOAT", "BOOL", "STRING")
        parts: list[Child] = [self.take()]
        if self.peek() == _R["LBRACK"] and self.peek(1) == _R["RBRACK"]:
            parts += [self.take(), self.take()]
        return _node("type", parts)

    def member(self) -> AstNode:
        annos = self.annotations()
        t = self.peek()
        is_fun = t == _R["FUN"]
        head: Child
        if is_fun or (t == _R["VAR"] and not annos):
            head = self.take()
        elif self.is_type_start():
            head = self.type_()
        else:
            raise self.error("AT", "FUN", "VAR", "IDENT", "INT", "FLOAT", "BOOL", "STRING")
        name = self.expect("IDENT")
        if annos or is_fun or (t != _R["VAR"] and self.peek() == _R["LPAREN"]):
            return self.method_rest(annos, head, name)
        return self.var_rest("field_decl", head, name)

    def method_rest(self, annos: list[Child], head: Child, name: int) -> AstNode:
        parts = annos + [head, _node("method_name", [name]), self.expect("LPAREN")]
        if self.peek() != _R["RPAREN"]:
            parts.append(self.param())
            while (comma := self.accept("COMMA")) is not None:
                parts += [comma, self.param()]
        parts += [self.expect("RPAREN"), self.block()]
        return _node("method", parts)

    def param(self) -> AstNode:
        return _node("param", [self.type_(), _node("var_name", [self.expect("IDENT")])])

    def var_rest(self, kind: str, head: Child, name: int) -> AstNode:
        parts: list[Child] = [head, _node("var_name", [name])]
        if (eq := self.accept("ASSIGN")) is not None:
            parts += [eq, self.expr()]
        parts.append(self.expect("SEMI"))
        return _node(kind, parts)

    # -- statements ------------------------------------------------------
    def block(self) -> AstNode:
        parts: list[Child] = [self.expect("LBRACE")]
        while self.peek() != _R["RBRACE"]:
            if self.peek() == -1:
                raise self.error("RBRACE")
            parts.append(self.statement())
        parts.append(self.take())
        return _node("block", parts)

    def looks_like_decl(self) -> bool:
        t = self.peek()
        if t in _PRIM_IDS or t == _R["VAR"]:
            return True
        if t != L.IDENT:
            return False
        nxt = self.peek(1)
        if nxt == L.IDENT:
            return True
        # `T[] x` is a declaration: an index expression needs an operand
        return nxt == _R["LBRACK"] and self.peek(2) == _R["RBRACK"]

    def statement(self) -> AstNode:
        t = self.peek()
        if t == _R["LBRACE"]:
            return self.block()
        if t == _R["IF"]:
            parts: list[Child] = [self.take(), self.expect("LPAREN"), self.expr(), self.expect("RPAREN"), self.statement()]
            if (els := self.accept("ELSE")) is not None:
                parts += [els, self.statement()]
            return _node("if", parts)
        if t == _R["WHILE"]:
            return _node("while", [self.take(), self.expect("LPAREN"), self.expr(), self.expect("RPAREN"), self.statement()])
        if t == _R["RETURN"]:
            parts = [self.take()]
            if self.peek() != _R["SEMI"]:
                parts.append(self.expr())
            parts.append(self.expect("SEMI"))
            return _node("return", parts)
        if self.looks_like_decl():
            head: Child = self.take() if t == _R["VAR"] else self.type_()
            return self.var_rest("var_decl", head, self.expect("IDENT"))
        return _node("expr_stmt", [self.expr(), self.expect("SEMI")])

    # -- expressions -----------------------------------------------------
    def expr(self) -> AstNode:
        left = self.binary(0)
        if (eq := self.accept("ASSIGN")) is not None:
            return _node("assign", [left, eq, self.expr()])
        return left

    def binary(self, level: int) -> AstNode:
        if level == len(_BINARY_LEVELS):
            return self.unary()
        ops = _BINARY_LEVELS[level]
        left = self.binary(level + 1)
        while self.peek() in ops:
            op = self.take()
            left = _node("binary", [left, op, self.binary(level + 1)])
        return left

    def unary(self) -> AstNode:
        if self.peek() in (_R["BANG"], _R["MINUS"]):
            op = self.take()
            return _node("unary", [op, self.unary()])
        return self.postfix()

    def args(self) -> list[Child]:
        parts: list[Child] = [self.expect("LPAREN")]
        if self.peek() != _R["RPAREN"]:
            parts.append(self.expr())
            while (comma := self.accept("COMMA")) is not None:
                parts += [comma, self.expr()]
        parts.append(self.expect("RPAREN"))
        return parts

    def postfix(self) -> AstNode:
        expr = self.primary()
        while True:
            t = self.peek()
            if t == _R["LPAREN"]:
                expr = _node("call", [expr] + self.args())
            elif t == _R["DOT"]:
                dot = self.take()
                name = self.expect("IDENT")
                if self.peek() == _R["LPAREN"]:
                    expr = _node("method_call", [expr, dot, name] + self.args())
                else:
                    expr = _node("field_access", [expr, dot, name])
            elif t == _R["LBRACK"]:
                expr = _node("index", [expr, self.take(), self.expr(), self.expect("RBRACK")])
            else:
                return expr

    def primary(self) -> AstNode:
        t = self.peek()
        if t in _LITERALS:
            return _node("literal", [self.take()])
        if t == L.IDENT:
            name = self.take()
            if self.peek() == _R["LPAREN"]:
                return _node("call", [name] + self.args())
            return _node("name", [name])
        if t == _R["LPAREN"]:
            return _node("paren", [self.take(), self.expr(), self.expect("RPAREN")])
        if t == _R["NEW"]:
            return _node("new", [self.take(), _node("type", [self.expect("IDENT")])] + self.args())
        raise self.error("literal", "IDENT", "LPAREN", "NEW")


def parse(tokens: Sequence[ETA]) -> AstNode:
    """Parse a full ETA sequence into a compilation-unit AST."""
    return _Parser(tokens).compilation_unit()
