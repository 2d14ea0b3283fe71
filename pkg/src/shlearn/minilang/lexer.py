"""MiniLang lexer.

Token rule ids are fixed by the order of ``RULES``; docs/grammar.md lists
them and is normative for oracle files.
"""

from __future__ import annotations

import re

from ..tokens import ETA

KEYWORDS = (
    "class", "fun", "var", "if", "else", "while", "return", "new", "import",
    "int", "float", "bool", "string",
)
PRIMITIVES = frozenset({"int", "float", "bool", "string"})

# (rule name, literal text or None)
_PUNCT = (
    ("LPAREN", "("), ("RPAREN", ")"), ("LBRACE", "{"), ("RBRACE", "}"),
    ("LBRACK", "["), ("RBRACK", "]"), ("SEMI", ";"), ("COMMA", ","),
    ("DOT", "."), ("ASSIGN", "="), ("EQ", "=="), ("NE", "!="),
    ("LT", "<"), ("GT", ">"), ("LE", "<="), ("GE", ">="),
    ("PLUS", "+"), ("MINUS", "-"), ("STAR", "*"), ("SLASH", "/"),
    ("BANG", "!"), ("AND", "&&"), ("OR", "||"),
)

RULES: tuple[str, ...] = (
    tuple(k.upper() for k in KEYWORDS)
    + ("IDENT", "INT_LIT", "FLOAT_LIT", "BOOL_LIT", "NULL_LIT", "STRING_LIT",
       "CHAR_LIT", "LINE_COMMENT", "BLOCK_COMMENT", "AT")
    + tuple(name for name, _ in _PUNCT)
)
RULE_ID: dict[str, int] = {name: i for i, name in enumerate(RULES)}
VOCAB_SIZE = len(RULES)
FRONTEND_NAME = "minilang"

KEYWORD_IDS = frozenset(RULE_ID[k.upper()] for k in KEYWORDS)
PUNCT_TEXT: dict[str, str] = dict(_PUNCT)
_PUNCT_ID = {text: RULE_ID[name] for name, text in _PUNCT}

IDENT = RULE_ID["IDENT"]
INT_LIT = RULE_ID["INT_LIT"]
FLOAT_LIT = RULE_ID["FLOAT_LIT"]
BOOL_LIT = RULE_ID["BOOL_LIT"]
NULL_LIT = RULE_ID["NULL_LIT"]
STRING_LIT = RULE_ID["STRING_LIT"]
CHAR_LIT = RULE_ID["CHAR_LIT"]
LINE_COMMENT = RULE_ID["LINE_COMMENT"]
BLOCK_COMMENT = RULE_ID["BLOCK_COMMENT"]
AT = RULE_ID["AT"]
COMMENT_IDS = frozenset({LINE_COMMENT, BLOCK_COMMENT})

_WORD_ID = {k: RULE_ID[k.upper()] for k in KEYWORDS}
_WORD_ID.update({"true": BOOL_LIT, "false": BOOL_LIT, "null": NULL_LIT})

_ESC = r'\\[\\"\'nt]'
_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n]+)
    | (?P<line_comment>//[^\n]*)
    | (?P<block_comment>/\*(?:[^*]|\*(?!/))*\*/)
    | (?P<open_comment>/\*)
    | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<float>[0-9]+\.[0-9]+)
    | (?P<int>[0-9]+)
    | (?P<string>"(?:[^"\\\n]|""" + _ESC + r""")*")
    | (?P<char>'(?:[^'\\\n]|""" + _ESC + r""")')
    | (?P<at>@)
    | (?P<punct>==|!=|<=|>=|&&|\|\||[(){}\[\];,.=<>+\-*/!])
    """,
    re.VERBOSE,
)


class LexError(Exception):
    def __init__(self, position: int, message: str = "unexpected character"):
        super().__init__(f"{message} at index {position}")
        self.position = position


def _unterminated(chars: str, pos: int) -> tuple[str, int] | None:
    """Classify an unterminated string/char/comment opening at ``pos``."""
    if chars.startswith("/*", pos):
        return "block comment", BLOCK_COMMENT
    c = chars[pos]
    if c == '"':
        return "string", STRING_LIT
    if c == "'":
        return "char literal", CHAR_LIT
    return None


def lex(chars: str, tolerant: bool = False) -> list[ETA]:
    """Maximal-munch tokenization of ``chars``; comments are emitted.

    With ``tolerant`` the lexer never raises: an unterminated block comment
    runs to end of input, an unterminated string or char literal runs to end
    of line, and any other unmatched character is skipped.
    """
    out: list[ETA] = []
    pos = 0
    n = len(chars)
    match = _TOKEN_RE.match
    while pos < n:
        m = match(chars, pos)
        if m is None or m.lastgroup == "open_comment":
            bad = _unterminated(chars, pos)
            if not tolerant:
                if bad is None:
                    raise LexError(pos)
                raise LexError(pos, f"unterminated {bad[0]}")
            if bad is None:
                pos += 1
                continue
            if bad[1] == BLOCK_COMMENT:
                end = n
            else:
                nl = chars.find("\n", pos)
                end = n if nl < 0 else nl
            out.append(ETA(pos, end - 1, chars[pos:end], bad[1]))
            pos = end
            continue
        kind = m.lastgroup
        text = m.group()
        end = m.end()
        if kind != "ws":
            if kind == "word":
                tr = _WORD_ID.get(text, IDENT)
            elif kind == "punct":
                tr = _PUNCT_ID[text]
            elif kind == "line_comment":
                tr = LINE_COMMENT
            elif kind == "block_comment":
                tr = BLOCK_COMMENT
            elif kind == "int":
                tr = INT_LIT
            elif kind == "float":
                tr = FLOAT_LIT
            elif kind == "string":
                tr = STRING_LIT
            elif kind == "char":
                tr = CHAR_LIT
            else:
                tr = AT
            out.append(ETA(pos, end - 1, text, tr))
        pos = end
    return out


def token_rules(chars: str, tolerant: bool = True) -> list[int]:
    return [t.tr for t in lex(chars, tolerant=tolerant)]
