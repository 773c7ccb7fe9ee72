"""Cluster affiliation strings into institutes using shared-author context."""

__version__ = "0.1.0"

from .errors import AffclustError, DataValidationError, RankError
from .ingest import (
    AuthorEntry,
    Observation,
    PaperRecord,
    clean_affiliation,
    extract_observations,
    normalize_author,
    parse_corpus,
)
from .matrix import AuthorAffiliationMatrix, Interner, build_matrix, matrix_stats
from .cooccur import BinaryMask, CooccurrenceMatrix, binarize, cooccurrence, cooccurrence_parallel
from .graph import Clustering, Component, ThresholdGraph, build_graph, components, largest_component, sweep

__all__ = [
    "AffclustError",
    "DataValidationError",
    "RankError",
    "AuthorEntry",
    "Observation",
    "PaperRecord",
    "clean_affiliation",
    "extract_observations",
    "normalize_author",
    "parse_corpus",
    "AuthorAffiliationMatrix",
    "Interner",
    "build_matrix",
    "matrix_stats",
    "BinaryMask",
    "CooccurrenceMatrix",
    "binarize",
    "cooccurrence",
    "cooccurrence_parallel",
    "Clustering",
    "Component",
    "ThresholdGraph",
    "build_graph",
    "components",
    "largest_component",
    "sweep",
]
