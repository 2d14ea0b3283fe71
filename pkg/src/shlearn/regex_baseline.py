"""Pattern-matching highlighter for MiniLang, in the style of Pygments lexers.

Lexically decidable classes are exact. Structural classes come from local
patterns only (``class X``, ``T name(`` headers, ``T name =``), so types,
calls and field-vs-method accesses are not told apart.
"""

from __future__ import annotations

import re
from enum import IntEnum

from .minilang.lexer import KEYWORDS, PRIMITIVES
from .tokens import HETA, HighlightClass as HC


class Rule(IntEnum):
    """Baseline-local token rule table (independent of the MiniLang lexer)."""

    COMMENT = 0
    STRING = 1
    CHAR = 2
    NUMBER = 3
    KEYWORD = 4
    CONSTANT = 5
    NAME = 6
    DECLARED_NAME = 7
    ATTRIBUTE = 8
    DECORATOR = 9
    OPERATOR = 10
    ERROR = 11


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_CONSTANTS = frozenset({"true", "false", "null"})
_NON_TYPE_WORDS = frozenset(KEYWORDS) - PRIMITIVES | _CONSTANTS

# (pattern, [(rule, class) per group] or a named action); first match wins
_RULES: list[tuple[re.Pattern, list[tuple[Rule, HC]] | str]] = [
    (re.compile(r"//[^\n]*"), [(Rule.COMMENT, HC.COMMENT)]),
    (re.compile(r"/\*.*?(?:\*/|\Z)", re.S), [(Rule.COMMENT, HC.COMMENT)]),
    (re.compile(r'"(?:[^"\\\n]|\\.)*"?'), [(Rule.STRING, HC.CHAR_STRING_LITERAL)]),
    (re.compile(r"'(?:[^'\\\n]|\\.)'?"), [(Rule.CHAR, HC.CHAR_STRING_LITERAL)]),
    (re.compile(rf"(@)\s*({_IDENT})"), [(Rule.DECORATOR, HC.ANNOTATION_DECLARATOR)] * 2),
    (re.compile(rf"(class)\s+({_IDENT})"), [(Rule.KEYWORD, HC.KEYWORD), (Rule.DECLARED_NAME, HC.CLASS_DECLARATOR)]),
    (re.compile(rf"(fun)\s+({_IDENT})"), [(Rule.KEYWORD, HC.KEYWORD), (Rule.DECLARED_NAME, HC.FUNCTION_DECLARATOR)]),
    # method header: `T name(`
    (re.compile(rf"({_IDENT})(?:\s*(\[)\s*(\]))?\s+({_IDENT})(?=\s*\()"), "header"),
    # variable: `T name =` / `T name;`
    (re.compile(rf"({_IDENT})(?:\s*(\[)\s*(\]))?\s+({_IDENT})(?=\s*[=;])"), "variable"),
    (re.compile(r"[0-9]+(?:\.[0-9]+)?"), [(Rule.NUMBER, HC.LITERAL)]),
    (re.compile(rf"(\.)\s*({_IDENT})"), [(Rule.OPERATOR, HC.ANY), (Rule.ATTRIBUTE, HC.FIELD_IDENTIFIER)]),
    (re.compile(_IDENT), "word"),
    (re.compile(r"==|!=|<=|>=|&&|\|\||[(){}\[\];,.=<>+\-*/!]"), [(Rule.OPERATOR, HC.ANY)]),
]
_WS = re.compile(r"\s+")


def _word(text: str) -> tuple[Rule, HC]:
    if text in _CONSTANTS:
        return Rule.CONSTANT, HC.LITERAL
    if text in KEYWORDS:
        return Rule.KEYWORD, HC.KEYWORD
    return Rule.NAME, HC.ANY


def scan(chars: str) -> list[tuple[int, int, Rule, HC]]:
    """Single left-to-right scan; never fails. Returns (start, end, rule, class)."""
    out: list[tuple[int, int, Rule, HC]] = []
    pos, n = 0, len(chars)
    while pos < n:
        m = _WS.match(chars, pos)
        if m:
            pos = m.end()
            continue
        for pattern, action in _RULES:
            m = pattern.match(chars, pos)
            if m is None:
                continue
            if action == "word":
                out.append((pos, m.end() - 1, *_word(m.group())))
            elif action in ("header", "variable"):
                head, name = m.group(1), m.group(4)
                if name in KEYWORDS or name in _CONSTANTS:
                    continue
                if head in _NON_TYPE_WORDS and not (action == "variable" and head == "var"):
                    continue
                out.append((m.start(1), m.end(1) - 1, *_word(head)))
                if m.group(2):
                    out.append((m.start(2), m.start(2), Rule.OPERATOR, HC.ANY))
                    out.append((m.start(3), m.start(3), Rule.OPERATOR, HC.ANY))
                hc = HC.FUNCTION_DECLARATOR if action == "header" else HC.VARIABLE_DECLARATOR
                out.append((m.start(4), m.end(4) - 1, Rule.DECLARED_NAME, hc))
            elif m.lastindex:
                for g, (rule, hc) in enumerate(action, start=1):
                    out.append((m.start(g), m.end(g) - 1, rule, hc))
            else:
                rule, hc = action[0]
                out.append((pos, m.end() - 1, rule, hc))
            pos = m.end()
            break
        else:
            out.append((pos, pos, Rule.ERROR, HC.ANY))
            pos += 1
    return out


def regex_highlight(chars: str) -> list[HETA]:
    return [HETA(s, e, chars[s:e + 1], int(rule), hc) for s, e, rule, hc in scan(chars)]
