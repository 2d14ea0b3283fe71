import json

import pytest

from shlearn.oracle import (
    Corpus,
    DirectorySource,
    FormatError,
    GeneratorSource,
    OracleRecord,
    SourceExhausted,
    build_corpus,
    corpus_stats,
    dedup,
    oracle_header,
    read_folds,
    read_oracle,
    split_folds,
    write_folds,
    write_oracle,
)
from shlearn.tokens import HETA, HighlightClass as HC


def rec(rid, trs):
    hetas = tuple(HETA(2 * i, 2 * i, "x", tr, HC.ANY) for i, tr in enumerate(trs))
    return OracleRecord(rid, " ".join("x" * len(trs)), hetas)


def test_build_corpus_skips_and_dedups():
    src = [("a", "class A { }"), ("b", "class { }"), ("c", "class C { }"), ("d", "class D { int x; }")]
    c = build_corpus(src, 2)
    assert [r.id for r in c] == ["a", "d"]
    assert c.skipped == 1 and c.duplicates == 1
    with pytest.raises(SourceExhausted) as e:
        build_corpus(src, 3)
    assert e.value.accepted == 2
    assert len(build_corpus(src, None)) == 2
    assert len(build_corpus(src, None, dedupe=False)) == 3


def test_generator_source_ids_are_stable():
    a = build_corpus(GeneratorSource(3, 50), 5)
    b = build_corpus(GeneratorSource(3, 50), 5)
    assert [r.id for r in a] == [r.id for r in b]
    assert a[0].id.startswith("gen3-")
    assert a.records == b.records


def test_directory_source(tmp_path):
    (tmp_path / "b.mini").write_text("class B { }")
    (tmp_path / "a.mini").write_text("class A { }")
    (tmp_path / "skip.txt").write_text("class X { }")
    assert [rid for rid, _ in DirectorySource(tmp_path)] == ["a", "b"]


def test_dedup_keeps_first():
    rs = [rec("a", [1, 2]), rec("b", [1, 2]), rec("c", [2, 1]), rec("d", [1, 2, 3])]
    assert [r.id for r in dedup(rs)] == ["a", "c", "d"]


def test_corpus_has_no_duplicate_rule_sequences(small_corpus):
    seqs = [r.trs for r in small_corpus]
    assert len(set(seqs)) == len(seqs)


def test_stats(small_corpus):
    s = corpus_stats(small_corpus)
    assert set(s) == {"chars", "whitespaces", "lines", "tokens"}
    assert s["tokens"]["min"] <= s["tokens"]["median"] <= s["tokens"]["max"]


def test_folds_partition():
    rs = [rec(f"r{i}", [i]) for i in range(300)]
    folds = split_folds(rs, 3, seed=1)
    ids = {r.id for r in rs}
    tests = [set(f.test) for f in folds]
    assert set().union(*tests) == ids
    assert sum(len(t) for t in tests) == 300
    for f in folds:
        assert (len(f.test), len(f.train), len(f.val)) == (100, 180, 20)
        assert set(f.train) | set(f.val) == ids - set(f.test)
        assert not set(f.train) & set(f.val)
    assert split_folds(rs, 3, seed=1) == folds
    assert split_folds(rs, 3, seed=2) != folds


def test_folds_reject_bad_input():
    with pytest.raises(ValueError):
        split_folds([rec("a", [1])], 3)
    with pytest.raises(ValueError):
        split_folds([rec("a", [1]), rec("a", [2]), rec("b", [3])], 3)


def test_fold_files_roundtrip(tmp_path, small_corpus):
    folds = split_folds(small_corpus, 3)
    write_folds(tmp_path, folds)
    assert read_folds(tmp_path) == folds
    with pytest.raises(FileNotFoundError):
        read_folds(tmp_path / "none")


def test_oracle_roundtrip(tmp_path, small_corpus):
    p = tmp_path / "c.oracle"
    write_oracle(p, small_corpus)
    assert oracle_header(p) == ("minilang", 46)
    assert read_oracle(p) == list(small_corpus)
    text = p.read_text()
    write_oracle(p, read_oracle(p))
    assert p.read_text() == text


def test_oracle_unicode_roundtrip(tmp_path):
    src = 'class K { string s = "héllo ✓"; }'
    r = build_corpus([("u", src)], 1)[0]
    write_oracle(tmp_path / "u.oracle", [r])
    assert read_oracle(tmp_path / "u.oracle") == [r]


def _write(tmp_path, *lines):
    p = tmp_path / "x.oracle"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p


def _line(**over):
    obj = {"id": "a", "chars": "ab c", "toks": [[0, 1, "ab", 13, 0], [3, 3, "c", 13, 5]]}
    obj.update(over)
    return json.dumps(obj)


@pytest.mark.parametrize("line", [
    "{not json",
    _line(extra=1),
    _line(toks=[[0, 1, "ab", 99, 0]]),
    _line(toks=[[0, 1, "ab", 13, 12]]),
    _line(toks=[[0, 1, "xx", 13, 0]]),
    _line(toks=[[0, 1, "ab", 13, 0], [1, 1, "b", 13, 0]]),
    _line(toks=[[0, 9, "ab", 13, 0]]),
    _line(toks=[[0, 1, "ab", 13]]),
    _line(toks=[[0, 1, "ab", True, 0]]),
    _line(id=5),
])
def test_oracle_rejects_bad_records(tmp_path, line):
    p = _write(tmp_path, "oracle-v1 minilang 46", _line(), line)
    with pytest.raises(FormatError) as e:
        read_oracle(p)
    assert e.value.line == 3


@pytest.mark.parametrize("header", ["oracle-v2 minilang 46", "oracle-v1 minilang", "", "oracle-v1 minilang x"])
def test_oracle_rejects_bad_header(tmp_path, header):
    with pytest.raises(FormatError) as e:
        read_oracle(_write(tmp_path, header, _line()))
    assert e.value.line == 1


def test_corpus_container():
    c = Corpus([rec("a", [1])])
    assert len(c) == 1 and c[0].id == "a" and [r.id for r in c] == ["a"]
