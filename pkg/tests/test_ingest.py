import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affclust.ingest import (
    AuthorEntry,
    Observation,
    PaperRecord,
    clean_affiliation,
    extract_observations,
    normalize_author,
    parse_corpus,
    read_observations,
    write_observations,
)


def _stream(*lines):
    return io.BytesIO("".join(line + "\n" for line in lines).encode())


def test_parse_single_record():
    line = '{"doi":"10.1/x","authors":[{"name":"A. Kumar","affiliations":["AIIMS, New Delhi"]}]}'
    parsed = parse_corpus(_stream(line))
    assert parsed.skipped_lines == 0
    assert parsed.records == [PaperRecord("10.1/x", (AuthorEntry("A. Kumar", ("AIIMS, New Delhi",)),))]


def test_parse_empty_stream():
    parsed = parse_corpus(io.BytesIO(b""))
    assert parsed.records == [] and parsed.skipped_lines == 0


def test_parse_record_without_authors():
    parsed = parse_corpus(_stream('{"doi":"10.1/y"}'))
    assert parsed.records == [PaperRecord("10.1/y", ())]


def test_given_family_join():
    line = json.dumps({"doi": "d", "authors": [{"given": "A.", "family": "Kumar", "affiliations": []}]})
    assert parse_corpus(_stream(line)).records[0].authors[0].name == "A. Kumar"


@pytest.mark.parametrize(
    "bad",
    [
        "not json",
        "[1, 2]",
        '{"authors": []}',
        '{"doi": "", "authors": []}',
        '{"doi": "d", "authors": "x"}',
        '{"doi": "d", "authors": [17]}',
        '{"doi": "d", "authors": [{"name": "X", "affiliations": "AIIMS"}]}',
    ],
)
def test_malformed_lines_are_counted_not_fatal(bad):
    good = '{"doi":"10.1/z","authors":[]}'
    parsed = parse_corpus(_stream(good, bad, good))
    assert parsed.skipped_lines == 1
    assert len(parsed.records) == 2


def test_invalid_utf8_line_is_skipped():
    stream = io.BytesIO(b'{"doi":"a"}\n\xff\xfe\n{"doi":"b"}\n')
    parsed = parse_corpus(stream)
    assert [r.doi for r in parsed.records] == ["a", "b"]
    assert parsed.skipped_lines == 1


def test_blank_lines_ignored_and_order_kept():
    parsed = parse_corpus(_stream('{"doi":"1"}', "", "   ", '{"doi":"2"}'))
    assert [r.doi for r in parsed.records] == ["1", "2"] and parsed.skipped_lines == 0


def test_text_stream_accepted():
    parsed = parse_corpus(io.StringIO('{"doi":"1"}\n'))
    assert parsed.records[0].doi == "1"


def test_crossref_style_affiliation_objects():
    line = json.dumps({"doi": "d", "authors": [{"name": "X", "affiliation": [{"name": "IIT Delhi"}]}]})
    assert parse_corpus(_stream(line)).records[0].authors[0].affiliations == ("IIT Delhi",)


def test_empty_author_name_dropped_and_counted():
    line = json.dumps({"doi": "d", "authors": [{"name": "  ", "affiliations": ["A"]}, {"name": "B", "affiliations": ["A"]}]})
    parsed = parse_corpus(_stream(line))
    assert parsed.dropped_authors == 1
    assert [a.name for a in parsed.records[0].authors] == ["B"]


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("1 Department of Physics, IIT Delhi", "Department of Physics, IIT Delhi"),
        ("AIIMS,  New Delhi ", "AIIMS, New Delhi"),
        ("42", ""),
        ("3M Company", "3M Company"),
        ("12. School of Medicine", "School of Medicine"),
        ("2) Dept", "Dept"),
        ("1-IIT Bombay", "IIT Bombay"),
        ("1, 2 Dept of X", "Dept of X"),
        ("  \t7\tLab  ", "Lab"),
        ("University", "University"),
    ],
)
def test_clean_affiliation(raw, expected):
    assert clean_affiliation(raw) == expected


@pytest.mark.parametrize("raw, expected", [(" A.  Kumar ", "A. Kumar"), ("", ""), ("A.\tKumar", "A. Kumar")])
def test_normalize_author(raw, expected):
    assert normalize_author(raw) == expected


@given(st.text())
def test_clean_is_idempotent(s):
    once = clean_affiliation(s)
    assert clean_affiliation(once) == once


_word = st.text(alphabet=st.characters(blacklist_characters=" "), min_size=1).filter(
    lambda w: not any(c.isspace() for c in w)
)


@given(st.characters(whitelist_categories=("Lu", "Ll")), st.lists(_word, max_size=5), _word)
def test_clean_leaves_plain_strings_alone(first, words, tail):
    s = " ".join([first + tail, *words])
    assert clean_affiliation(s) == s


def test_no_case_folding():
    assert clean_affiliation("UNIVERSITY of X") == "UNIVERSITY of X"


def test_extract_pairs_each_affiliation():
    rec = PaperRecord("d", (AuthorEntry("X", ("A", "B")), AuthorEntry("Y", ())))
    out = extract_observations([rec])
    assert out.observations == [Observation("X", "A", "d"), Observation("X", "B", "d")]
    assert out.dropped_affiliations == 0


def test_extract_keeps_multiplicity():
    recs = [PaperRecord(d, (AuthorEntry("X", ("A",)),)) for d in ("p1", "p2")]
    assert len(extract_observations(recs).observations) == 2


def test_extract_drops_empty_affiliations():
    rec = PaperRecord("d", (AuthorEntry("X", ("42", "1 A", "   ")),))
    out = extract_observations([rec])
    assert out.observations == [Observation("X", "A", "d")]
    assert out.dropped_affiliations == 2


_affs = st.lists(st.sampled_from(["A", "1 B", "7", " ", "C,  D", "12"]), max_size=4)


@given(st.lists(st.lists(st.tuples(st.sampled_from(["X", "Y", "  ", "Z"]), _affs), max_size=4), max_size=5))
def test_observation_conservation(layout):
    records = [
        PaperRecord(f"d{k}", tuple(AuthorEntry(name, tuple(affs)) for name, affs in authors))
        for k, authors in enumerate(layout)
    ]
    out = extract_observations(records)
    total = sum(len(a.affiliations) for r in records for a in r.authors)
    assert len(out.observations) == total - out.dropped_affiliations
    assert all(o.author_key and o.affiliation_key for o in out.observations)


def test_observations_round_trip():
    obs = [Observation("X", "A", "d1"), Observation("Ü", "B, C", "d2")]
    buf = io.StringIO()
    assert write_observations(obs, buf) == 2
    lines = buf.getvalue().splitlines()
    assert json.loads(lines[0]) == {"author": "X", "affiliation": "A", "doi": "d1"}
    assert read_observations(io.StringIO(buf.getvalue())) == obs


def test_read_observations_rejects_bad_records():
    with pytest.raises(ValueError):
        read_observations(io.StringIO('{"author": "X"}\n'))
