import json

import pytest

from affclust.ingest import AuthorEntry, Observation, PaperRecord

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")


@pytest.fixture
def two_author_observations():
    """Author 1: Univ A twice, Univ B once.  Author 2: Univ C three times."""
    return [
        Observation("Author 1", "Univ A", "10.1/p1"),
        Observation("Author 1", "Univ A", "10.1/p2"),
        Observation("Author 1", "Univ B", "10.1/p3"),
        Observation("Author 2", "Univ C", "10.1/p4"),
        Observation("Author 2", "Univ C", "10.1/p5"),
        Observation("Author 2", "Univ C", "10.1/p6"),
    ]


@pytest.fixture
def two_author_records(two_author_observations):
    return [PaperRecord(o.paper_doi, (AuthorEntry(o.author_key, (o.affiliation_key,)),)) for o in two_author_observations]


@pytest.fixture
def two_author_corpus(tmp_path, two_author_records):
    path = tmp_path / "two_author.jsonl"
    with open(path, "w") as fh:
        for r in two_author_records:
            fh.write(json.dumps({"doi": r.doi, "authors": [{"name": a.name, "affiliations": list(a.affiliations)} for a in r.authors]}) + "\n")
    return path
