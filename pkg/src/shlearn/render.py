"""Output emitters: ANSI terminal colours, HTML and the plain span format."""

from __future__ import annotations

import html
from typing import Iterable, Sequence

from .tokens import HETA, HighlightClass as HC

# SGR codes from the 16-colour palette; ANY is left unstyled.
ANSI_PALETTE: dict[HC, int] = {
    HC.KEYWORD: 94,
    HC.LITERAL: 36,
    HC.CHAR_STRING_LITERAL: 32,
    HC.COMMENT: 90,
    HC.TYPE_IDENTIFIER: 33,
    HC.FUNCTION_IDENTIFIER: 35,
    HC.FIELD_IDENTIFIER: 95,
    HC.CLASS_DECLARATOR: 93,
    HC.FUNCTION_DECLARATOR: 96,
    HC.VARIABLE_DECLARATOR: 92,
    HC.ANNOTATION_DECLARATOR: 31,
}


def _pieces(chars: str, hetas: Sequence[HETA]):
    pos = 0
    for h in hetas:
        if h.start > pos:
            yield chars[pos:h.start], HC.ANY
        yield chars[h.start:h.end + 1], h.hc
        pos = h.end + 1
    if pos < len(chars):
        yield chars[pos:], HC.ANY


def to_ansi(chars: str, hetas: Sequence[HETA]) -> str:
    out = []
    for text, hc in _pieces(chars, hetas):
        code = ANSI_PALETTE.get(hc)
        out.append(text if code is None else f"\x1b[{code}m{text}\x1b[0m")
    return "".join(out)


def to_html(chars: str, hetas: Sequence[HETA]) -> str:
    out = ['<pre class="shlearn">']
    for text, hc in _pieces(chars, hetas):
        if hc == HC.ANY:
            out.append(html.escape(text))
        else:
            out.append(f'<span class="{hc.name.lower()}">{html.escape(text)}</span>')
    out.append("</pre>\n")
    return "".join(out)


def to_spans(hetas: Iterable[HETA]) -> str:
    """One line per token: ``i_s i_e hc`` with the integer class code."""
    return "".join(f"{h.start} {h.end} {int(h.hc)}\n" for h in hetas)


def parse_spans(text: str) -> list[tuple[int, int, HC]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'i_s i_e hc'")
        s, e, hc = (int(p) for p in parts)
        out.append((s, e, HC(hc)))
    return out
