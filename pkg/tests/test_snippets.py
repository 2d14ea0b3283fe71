import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from shlearn.oracle import build_corpus
from shlearn.snippets import (
    JAVA,
    KOTLIN,
    PYTHON,
    LengthParams,
    cut_snippet,
    draw_length,
    parent_id,
    sample_snippets,
)
from shlearn.tokens import HighlightClass as HC, check_spans


def rounded_truncated_mean(p: LengthParams) -> float:
    """Exact mean of round(N(mean, sd)) conditioned on [min, max], by summing cells."""
    cdf = lambda x: 0.5 * (1 + math.erf((x - p.mean) / (p.sd * math.sqrt(2))))
    mass = {k: cdf(k + 0.5) - cdf(k - 0.5) for k in range(p.min, p.max + 1)}
    z = sum(mass.values())
    return sum(k * m for k, m in mass.items()) / z


@pytest.mark.parametrize("params", [JAVA, KOTLIN, PYTHON])
def test_length_distribution_mean(params):
    rng = random.Random(5)
    draws = [draw_length(params, rng) for _ in range(100_000)]
    assert min(draws) >= params.min and max(draws) <= params.max
    assert abs(sum(draws) / len(draws) - rounded_truncated_mean(params)) < 0.5


def test_length_params_validate():
    with pytest.raises(ValueError):
        LengthParams(10, -1, 1, 5)
    with pytest.raises(ValueError):
        LengthParams(10, 1, 5, 1)


SRC = """class K {
    /* one
     * two */
    int x = 1;
    fun f() { g(); }
}
"""


@pytest.fixture()
def record():
    return build_corpus([("k", SRC)], 1)[0]


def test_cut_drops_straddling_block_comment(record):
    s = cut_snippet(record, 2, 3)
    assert s.chars == "     * two */\n    int x = 1;"
    assert [h.text for h in s.hetas] == ["int", "x", "=", "1", ";"]
    assert s.hetas[0].start == s.chars.index("int")
    assert {h.text: h.hc for h in s.hetas}["x"] == HC.VARIABLE_DECLARATOR
    check_spans(s.hetas, len(s.chars))


def test_cut_whole_and_last_line(record):
    whole = cut_snippet(record, 0, 5)
    assert whole.chars == SRC[:-1]
    assert len(whole.hetas) == len(record.hetas)
    last = cut_snippet(record, 5, 5)
    assert last.chars == "}"


def test_snippet_ids(record):
    s = cut_snippet(record, 1, 3, 7)
    assert s.id == "k#1-3#7"
    assert parent_id(s.id) == "k" and parent_id("k") == "k"
    assert s.to_record().id == s.id


def test_sample_snippets(small_corpus):
    snips = sample_snippets(small_corpus, 200, JAVA, seed=3)
    assert len(snips) == 200
    assert len({s.id for s in snips}) == 200
    parents = {r.id: r for r in small_corpus}
    for s in snips:
        assert s.hetas
        check_spans(s.hetas, len(s.chars))
        for h in s.hetas:
            assert s.chars[h.start:h.end + 1] == h.text
        assert s.chars in parents[s.parent].chars
    assert sample_snippets(small_corpus, 50, JAVA, seed=3) == snips[:50]


def test_sample_snippets_rejects_empty():
    with pytest.raises(ValueError):
        sample_snippets([], 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_snippet_tokens_match_parent(seed):
    rec = build_corpus([("p", __import__("shlearn").minilang.generate_program(seed, 80))], 1)[0]
    n_lines = len(rec.chars.rstrip("\n").split("\n"))
    rng = random.Random(seed)
    a = rng.randrange(n_lines)
    b = rng.randrange(a, n_lines)
    s = cut_snippet(rec, a, b)
    lines = rec.chars.split("\n")
    assert s.chars == "\n".join(lines[a:b + 1])
    offset = sum(len(l) + 1 for l in lines[:a])
    full = {(h.start - offset, h.end - offset, h.hc) for h in rec.hetas}
    assert {(h.start, h.end, h.hc) for h in s.hetas} <= full
