"""Random MiniLang program generator (weighted top-down production sampling).

Every program it emits parses. The token budget is a soft target: members
are added until the running token count reaches it.
"""

from __future__ import annotations

import random

_VARS = (
    "a", "b", "i", "j", "k", "n", "x", "y", "idx", "count", "total", "value",
    "result", "item", "node", "user", "name", "size", "data", "buf", "key",
    "left", "right", "tmp", "acc", "flag", "msg", "path", "line", "row",
    "col", "score", "limit", "offset", "list", "map", "cache", "ctx", "req", "res",
)
_TYPES = (
    "String", "List", "Map", "Node", "User", "Config", "Buffer", "Point",
    "Request", "Response", "Handler", "Item", "Tree", "Graph", "Queue",
    "Logger", "Parser", "Token", "Matrix", "Vector", "Reader", "Writer",
    "Session", "Context", "Result",
)
_METHODS = (
    "get", "set", "run", "add", "remove", "size", "init", "update", "apply",
    "parse", "build", "read", "write", "next", "find", "load", "save",
    "compute", "reset", "close", "open", "emit", "visit", "push", "pop",
    "check", "merge", "split", "render", "format",
)
_FIELDS = (
    "length", "first", "last", "parent", "owner", "id", "width", "height",
    "head", "tail", "root", "label", "weight", "count", "items", "data",
)
_ANNOS = ("Override", "Test", "Deprecated", "Inject", "Nullable", "Export", "Cached")
_WORDS = (
    "hello", "world", "error", "ok", "value", "missing", "done", "retry",
    "java", "kotlin", "python", "on the fly", "token", "stream", "x", "",
)
_COMMENT_WORDS = (
    "TODO", "fix", "this", "later", "compute", "the", "next", "value", "note",
    "edge", "case", "handles", "empty", "input", "returns", "result", "cache",
)
_PRIMS = ("int", "float", "bool", "string")
_PACKAGES = ("util", "io", "net", "core", "lang", "app", "model", "data")


class _Gen:
    def __init__(self, rng: random.Random, budget: int):
        self.rng = rng
        self.budget = budget
        self.n = 0
        self.lines: list[str] = []

    # -- token helpers ---------------------------------------------------
    def t(self, *texts: str) -> str:
        self.n += len(texts)
        return " ".join(texts)

    def left(self) -> int:
        return self.budget - self.n

    def emit(self, depth: int, text: str) -> None:
        self.lines.append("    " * depth + text)

    def pick(self, seq):
        return self.rng.choice(seq)

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    def ident(self, pool=_VARS) -> str:
        self.n += 1
        return self.pick(pool)

    # -- lexical pieces --------------------------------------------------
    def comment_text(self) -> str:
        return " ".join(self.pick(_COMMENT_WORDS) for _ in range(self.rng.randint(1, 6)))

    def comment(self, depth: int) -> None:
        r = self.rng.random()
        self.n += 1
        if r < 0.6:
            self.emit(depth, "// " + self.comment_text())
        elif r < 0.8:
            self.emit(depth, "/* " + self.comment_text() + " */")
        else:
            self.emit(depth, "/*")
            for _ in range(self.rng.randint(1, 3)):
                self.emit(depth, " * " + self.comment_text())
            self.emit(depth, " */")

    def string_lit(self) -> str:
        self.n += 1
        s = self.pick(_WORDS)
        if self.chance(0.15):
            s += self.pick(("\\n", "\\t", '\\"', "\\\\"))
        return '"' + s + '"'

    def literal(self) -> str:
        r = self.rng.random()
        self.n += 1
        if r < 0.35:
            return str(self.rng.choice((0, 1, 2, 10, 42, 100, self.rng.randint(0, 9999))))
        if r < 0.45:
            return f"{self.rng.randint(0, 99)}.{self.rng.randint(0, 99)}"
        if r < 0.55:
            return self.pick(("true", "false"))
        if r < 0.62:
            return "null"
        if r < 0.7:
            return "'" + self.pick(("a", "z", "0", " ", "\\n", "\\'")) + "'"
        self.n -= 1
        return self.string_lit()

    def type_(self, allow_array: bool = True) -> str:
        if self.chance(0.4):
            base = self.t(self.pick(_PRIMS))
        else:
            base = self.ident(_TYPES)
        if allow_array and self.chance(0.15):
            self.n += 2
            base += "[]"
        return base

    # -- expressions -----------------------------------------------------
    def args(self, depth: int) -> str:
        k = self.rng.choice((0, 0, 1, 1, 1, 2, 2, 3))
        self.n += 2 + max(0, k - 1)
        return "(" + ", ".join(self.expr(depth + 1) for _ in range(k)) + ")"

    def postfix(self, depth: int, must_call: bool = False) -> str:
        r = self.rng.random()
        if must_call or r < 0.25:
            s = self.ident(_METHODS) + self.args(depth)
        else:
            s = self.ident()
        for _ in range(self.rng.choice((0, 0, 1, 1, 2, 3))):
            if depth > 3:
                break
            r = self.rng.random()
            if r < 0.45:
                self.n += 1
                s += "." + self.ident(_FIELDS)
            elif r < 0.85:
                self.n += 1
                s += "." + self.ident(_METHODS) + self.args(depth)
            else:
                self.n += 2
                s += "[" + self.expr(depth + 1) + "]"
        if must_call and not s.endswith(")"):
            self.n += 1
            s += "." + self.ident(_METHODS) + self.args(depth)
        return s

    def primary(self, depth: int) -> str:
        r = self.rng.random()
        if r < 0.35 or depth > 3:
            return self.literal() if r < 0.2 or depth > 3 and r < 0.6 else self.ident()
        if r < 0.75:
            return self.postfix(depth)
        if r < 0.85:
            return self.t("new") + " " + self.ident(_TYPES) + self.args(depth)
        if r < 0.92:
            self.n += 2
            return "(" + self.expr(depth + 1) + ")"
        op = self.pick(("!", "-"))
        self.n += 1
        return op + self.primary(depth + 1)

    def expr(self, depth: int = 0) -> str:
        s = self.primary(depth)
        if depth < 3 and self.chance(0.3):
            op = self.pick(("+", "-", "*", "/", "==", "!=", "<", ">", "<=", ">=", "&&", "||"))
            self.n += 1
            s = s + " " + op + " " + self.expr(depth + 1)
        return s

    def lvalue(self) -> str:
        s = self.ident()
        r = self.rng.random()
        if r < 0.25:
            self.n += 1
            s += "." + self.ident(_FIELDS)
        elif r < 0.4:
            self.n += 2
            s += "[" + self.expr(2) + "]"
        return s

    # -- statements ------------------------------------------------------
    def var_decl(self) -> str:
        head = self.t("var") if self.chance(0.15) else self.type_()
        s = head + " " + self.ident()
        if head == "var" or self.chance(0.75):
            self.n += 1
            s += " = " + self.expr()
        self.n += 1
        return s + ";"

    def statement(self, depth: int, nest: int) -> None:
        if self.chance(0.08):
            self.comment(depth)
        r = self.rng.random()
        if nest >= 2:
            r *= 0.6
        if r < 0.3:
            self.emit(depth, self.var_decl())
        elif r < 0.45:
            self.n += 2
            self.emit(depth, self.lvalue() + " = " + self.expr() + ";")
        elif r < 0.6:
            self.n += 1
            self.emit(depth, self.postfix(0, must_call=True) + ";")
        elif r < 0.7:
            self.n += 2
            ret = "return;" if self.chance(0.2) else "return " + self.expr() + ";"
            self.n -= 1 if ret == "return;" else 0
            self.emit(depth, ret)
        elif r < 0.85:
            self.n += 4
            self.emit(depth, "if (" + self.expr() + ") {")
            self.statements(depth + 1, nest + 1, self.rng.randint(1, 3))
            if self.chance(0.35):
                self.n += 3
                self.emit(depth, "} else {")
                self.statements(depth + 1, nest + 1, self.rng.randint(1, 2))
            self.emit(depth, "}")
        elif r < 0.95:
            self.n += 5
            self.emit(depth, "while (" + self.expr() + ") {")
            self.statements(depth + 1, nest + 1, self.rng.randint(1, 3))
            self.emit(depth, "}")
        else:
            self.n += 2
            self.emit(depth, "{")
            self.statements(depth + 1, nest + 1, self.rng.randint(1, 2))
            self.emit(depth, "}")

    def statements(self, depth: int, nest: int, count: int) -> None:
        for i in range(count):
            if i and self.left() <= 0:
                break
            self.statement(depth, nest)

    # -- declarations ----------------------------------------------------
    def annotations(self, depth: int, p: float) -> None:
        while self.chance(p):
            self.n += 2
            self.emit(depth, "@" + self.pick(_ANNOS))
            p *= 0.3

    def field(self, depth: int) -> None:
        if self.chance(0.12):
            head = self.t("var")
        else:
            head = self.type_()
        s = head + " " + self.ident(_VARS + _FIELDS)
        if head == "var" or self.chance(0.5):
            self.n += 1
            s += " = " + self.expr(1)
        self.n += 1
        self.emit(depth, s + ";")

    def method(self, depth: int) -> None:
        self.annotations(depth, 0.3)
        head = self.t("fun") if self.chance(0.3) else self.type_()
        params = [self.type_() + " " + self.ident() for _ in range(self.rng.choice((0, 1, 1, 2, 2, 3)))]
        self.n += 4 + max(0, len(params) - 1)
        self.emit(depth, head + " " + self.ident(_METHODS) + "(" + ", ".join(params) + ") {")
        self.statements(depth + 1, 0, self.rng.randint(1, 6))
        self.emit(depth, "}")

    def class_decl(self) -> None:
        self.annotations(0, 0.3)
        self.n += 3
        self.emit(0, "class " + self.ident(_TYPES) + " {")
        limit = self.rng.randint(1, 6)
        k = 0
        while k < limit and self.left() > 0:
            if k:
                self.lines.append("")
            if self.chance(0.15):
                self.comment(1)
            if self.chance(0.35):
                self.field(1)
            else:
                self.method(1)
            k += 1
        self.n += 1
        self.emit(0, "}")

    def program(self) -> str:
        if self.chance(0.15):
            self.comment(0)
        for _ in range(self.rng.choice((0, 0, 1, 2, 3))):
            parts = [self.pick(_PACKAGES) for _ in range(self.rng.randint(1, 3))] + [self.pick(_TYPES)]
            self.n += 2 * len(parts) + 1
            self.emit(0, "import " + ".".join(parts) + ";")
        while True:
            if self.lines:
                self.lines.append("")
            self.class_decl()
            if self.left() <= 0:
                break
        return "\n".join(self.lines) + "\n"


def generate_program(seed: int, budget: int = 200) -> str:
    """Generate one valid MiniLang compilation unit of roughly ``budget`` tokens."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    return _Gen(random.Random(seed), budget).program()
