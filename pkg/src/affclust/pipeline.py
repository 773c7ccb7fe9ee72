"""End-to-end helpers shared by the CLI and tests.

Inputs are auto-detected from their first non-blank line: a matrix snapshot
header, an observations record (``author``/``affiliation``/``doi``), or
otherwise a paper corpus.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Sequence

from .cooccur import CooccurrenceMatrix, binarize, cooccurrence_parallel
from .graph import Clustering, build_graph, components
from .ingest import Observation, PaperRecord, extract_observations, parse_corpus, read_observations
from .matrix import AuthorAffiliationMatrix, Interner, build_matrix, is_snapshot_header, read_snapshot

KIND_CORPUS = "corpus"
KIND_OBSERVATIONS = "observations"
KIND_MATRIX = "matrix"


@dataclass
class LoadedInput:
    kind: str
    matrix: AuthorAffiliationMatrix
    authors: Interner
    affiliations: Interner
    report: dict = field(default_factory=dict)


def detect_kind(path: str | os.PathLike) -> str:
    with open(path, "rb") as fh:
        for raw in fh:
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            if is_snapshot_header(line):
                return KIND_MATRIX
            try:
                obj = json.loads(line)
            except ValueError:
                return KIND_CORPUS
            if isinstance(obj, dict) and "author" in obj and "affiliation" in obj and "authors" not in obj:
                return KIND_OBSERVATIONS
            return KIND_CORPUS
    return KIND_CORPUS


def load_input(path: str | os.PathLike) -> LoadedInput:
    kind = detect_kind(path)
    if kind == KIND_MATRIX:
        with open(path, encoding="utf-8") as fh:
            m, authors, affiliations = read_snapshot(fh)
        return LoadedInput(kind, m, authors, affiliations)
    if kind == KIND_OBSERVATIONS:
        with open(path, "rb") as fh:
            obs = read_observations(fh)
        m, authors, affiliations = build_matrix(obs)
        return LoadedInput(kind, m, authors, affiliations, {"observations": len(obs)})
    with open(path, "rb") as fh:
        parsed = parse_corpus(fh)
    extracted = extract_observations(parsed.records)
    m, authors, affiliations = build_matrix(extracted.observations)
    report = {
        "records": len(parsed.records),
        "skipped_lines": parsed.skipped_lines,
        "dropped_authors": parsed.dropped_authors,
        "dropped_affiliations": extracted.dropped_affiliations,
        "observations": len(extracted.observations),
    }
    return LoadedInput(kind, m, authors, affiliations, report)


def cooccurrence_of(m: AuthorAffiliationMatrix, affiliations: Interner, workers: int = 1) -> CooccurrenceMatrix:
    return cooccurrence_parallel(binarize(m), workers, labels=affiliations.strings)


def cluster_observations(observations: Sequence[Observation], threshold: int, workers: int = 1) -> Clustering:
    m, _, affiliations = build_matrix(observations)
    return components(build_graph(cooccurrence_of(m, affiliations, workers), threshold))


def cluster_records(records: Sequence[PaperRecord], threshold: int, workers: int = 1) -> Clustering:
    """Ingest-through-clustering for in-memory records."""
    return cluster_observations(extract_observations(records).observations, threshold, workers)
