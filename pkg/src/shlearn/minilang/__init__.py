"""MiniLang: the built-in demonstration front-end."""

from .generator import generate_program
from .lexer import FRONTEND_NAME, RULES, VOCAB_SIZE, LexError, lex
from .parser import AstNode, ParseError, parse
from .walker import bf_highlight

__all__ = [
    "AstNode",
    "FRONTEND_NAME",
    "LexError",
    "ParseError",
    "RULES",
    "VOCAB_SIZE",
    "bf_highlight",
    "generate_program",
    "lex",
    "parse",
]
