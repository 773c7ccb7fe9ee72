"""Parse Crossref-style JSON-Lines metadata into (author, affiliation) observations.

Input is one JSON object per line::

    {"doi": "10.1/x", "authors": [{"name": "A. Kumar", "affiliations": ["AIIMS, New Delhi"]}]}

Authors may carry ``given`` + ``family`` instead of ``name``.  Lines that do
not match this shape are skipped and counted, never fatal.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, NamedTuple

logger = logging.getLogger(__name__)

# One leading number plus at most one separator.  The digit run must be
# followed by a separator or end of string, so "3M Company" is left alone.
_LEADING_NUMBER = re.compile(r"^\d+(?:[\s.,)\-]|$)")


@dataclass(frozen=True)
class AuthorEntry:
    name: str
    affiliations: tuple[str, ...] = ()


@dataclass(frozen=True)
class PaperRecord:
    doi: str
    authors: tuple[AuthorEntry, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class Observation:
    author_key: str
    affiliation_key: str
    paper_doi: str

    def to_json(self) -> dict:
        return {"author": self.author_key, "affiliation": self.affiliation_key, "doi": self.paper_doi}


class ParsedCorpus(NamedTuple):
    records: list[PaperRecord]
    skipped_lines: int
    dropped_authors: int


class ExtractedObservations(NamedTuple):
    observations: list[Observation]
    dropped_affiliations: int


def clean_affiliation(raw: str) -> str:
    """Strip leading numbering and normalize whitespace.

    Leading digit runs followed by a separator (space, ``.``, ``,``, ``)``,
    ``-``) or by the end of the string are removed repeatedly, so marker lists
    like ``"1, 2 Dept"`` lose every marker and the function is idempotent.
    Case and all other characters are preserved.  An empty return value means
    the affiliation should be dropped.
    """
    s = raw.strip()
    while True:
        m = _LEADING_NUMBER.match(s)
        if m is None:
            break
        s = s[m.end():].lstrip()
    return " ".join(s.split())


def normalize_author(raw: str) -> str:
    return " ".join(raw.split())


def _author_name(obj: dict) -> str:
    name = obj.get("name")
    if isinstance(name, str) and name.strip():
        return normalize_author(name)
    parts = [obj.get("given"), obj.get("family")]
    return normalize_author(" ".join(p for p in parts if isinstance(p, str)))


def _affiliation_text(item) -> str:
    # Crossref proper uses {"name": ...}; accept it alongside bare strings.
    if isinstance(item, str):
        return item
    if isinstance(item, dict) and isinstance(item.get("name"), str):
        return item["name"]
    raise ValueError(f"unsupported affiliation entry: {item!r}")


def _parse_record(obj) -> tuple[PaperRecord, int]:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    doi = obj.get("doi")
    if not isinstance(doi, str) or not doi.strip():
        raise ValueError("missing or empty doi")
    raw_authors = obj.get("authors", [])
    if raw_authors is None:
        raw_authors = []
    if not isinstance(raw_authors, list):
        raise ValueError("authors is not a list")

    authors = []
    dropped = 0
    for a in raw_authors:
        if not isinstance(a, dict):
            raise ValueError("author entry is not an object")
        affs = a.get("affiliations", a.get("affiliation", []))
        if affs is None:
            affs = []
        if not isinstance(affs, list):
            raise ValueError("affiliations is not a list")
        texts = tuple(_affiliation_text(x) for x in affs)
        name = _author_name(a)
        if not name:
            dropped += 1
            continue
        authors.append(AuthorEntry(name=name, affiliations=texts))
    return PaperRecord(doi=doi.strip(), authors=tuple(authors)), dropped


def parse_corpus(stream: IO | Iterable) -> ParsedCorpus:
    """Parse a JSON-Lines corpus.

    ``stream`` may be a binary or text file object, or any iterable of lines.
    Blank lines are ignored; lines that fail to decode or do not match the
    record shape increment ``skipped_lines``.  I/O errors from the stream
    propagate.
    """
    records: list[PaperRecord] = []
    skipped = 0
    dropped_authors = 0
    for lineno, line in enumerate(stream, 1):
        try:
            if isinstance(line, bytes):
                line = line.decode("utf-8")
            if not line.strip():
                continue
            record, dropped = _parse_record(json.loads(line))
        except (UnicodeDecodeError, ValueError) as exc:
            # json.JSONDecodeError is a ValueError
            logger.debug("skipping line %d: %s", lineno, exc)
            skipped += 1
            continue
        records.append(record)
        dropped_authors += dropped
    return ParsedCorpus(records, skipped, dropped_authors)


def extract_observations(records: Iterable[PaperRecord]) -> ExtractedObservations:
    """Pair each author with each of their cleaned affiliations, per paper.

    Multiplicity is kept: the same pair seen on two papers gives two
    observations.
    """
    out: list[Observation] = []
    dropped = 0
    for rec in records:
        for author in rec.authors:
            key = normalize_author(author.name)
            if not key:
                dropped += len(author.affiliations)
                continue
            for raw in author.affiliations:
                aff = clean_affiliation(raw)
                if not aff:
                    dropped += 1
                    continue
                out.append(Observation(key, aff, rec.doi))
    return ExtractedObservations(out, dropped)


def write_observations(observations: Iterable[Observation], fh: IO[str]) -> int:
    n = 0
    for obs in observations:
        fh.write(json.dumps(obs.to_json(), ensure_ascii=False))
        fh.write("\n")
        n += 1
    return n


def read_observations(stream: IO | Iterable) -> list[Observation]:
    """Read an observations file; unlike corpora, malformed lines are fatal."""
    out = []
    for lineno, line in enumerate(stream, 1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if not line.strip():
            continue
        obj = json.loads(line)
        try:
            out.append(Observation(obj["author"], obj["affiliation"], obj["doi"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"line {lineno}: not an observation record") from exc
    return out


def record_to_json(rec: PaperRecord) -> dict:
    return {
        "doi": rec.doi,
        "authors": [{"name": a.name, "affiliations": list(a.affiliations)} for a in rec.authors],
    }


def write_corpus(records: Iterable[PaperRecord], fh: IO[str]) -> None:
    for rec in records:
        fh.write(json.dumps(record_to_json(rec), ensure_ascii=False))
        fh.write("\n")
