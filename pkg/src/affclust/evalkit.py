"""Pairwise scoring of clusterings and a token-overlap string-matching baseline."""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .errors import DataValidationError
from .graph import Clustering, cluster_edges
from .synth import SyntheticTruth

_TOKEN = re.compile(r"[^\W_]+")


def _pairs(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True)
class PairwiseScore:
    """Pair-counting precision/recall.  A rate is ``None`` when its denominator is zero."""

    precision: float | None
    recall: float | None
    f1: float | None
    true_pairs: int
    predicted_pairs: int
    intersecting_pairs: int

    def to_json(self) -> dict:
        return asdict(self)


def _truth_map(truth: SyntheticTruth | Mapping[str, int]) -> Mapping[str, int]:
    return truth.affiliations if isinstance(truth, SyntheticTruth) else truth


def pairwise_score(predicted: Clustering, truth: SyntheticTruth | Mapping[str, int]) -> PairwiseScore:
    """Score ``predicted`` against institute labels.

    Pairs are counted over the predicted clustering's universe (clustered
    members plus singletons), every string of which must have a truth label.
    """
    labels = _truth_map(truth)
    universe = predicted.universe
    missing = [s for s in universe if s not in labels]
    if missing:
        sample = ", ".join(repr(s) for s in sorted(missing)[:3])
        raise DataValidationError(f"{len(missing)} clustered strings have no truth label (e.g. {sample})")

    true_pairs = sum(_pairs(k) for k in Counter(labels[s] for s in universe).values())
    predicted_pairs = 0
    hits = 0
    for c in predicted.clusters:
        predicted_pairs += _pairs(c.size)
        hits += sum(_pairs(k) for k in Counter(labels[m] for m in c.members).values())

    precision = hits / predicted_pairs if predicted_pairs else None
    recall = hits / true_pairs if true_pairs else None
    if precision is None or recall is None:
        f1 = None
    elif precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return PairwiseScore(precision, recall, f1, true_pairs, predicted_pairs, hits)


def tokens(s: str) -> frozenset[str]:
    """Lowercased alphanumeric tokens; punctuation and underscores separate tokens."""
    return frozenset(_TOKEN.findall(s.lower()))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def token_baseline(affiliations: Iterable[str], similarity_cutoff: float) -> Clustering:
    """Single-link clustering of strings whose token-set Jaccard similarity >= cutoff.

    Duplicate inputs are collapsed; the result does not depend on input order.
    Edge weights in the returned components are the similarities.
    """
    if not 0.0 < similarity_cutoff <= 1.0:
        raise ValueError(f"similarity_cutoff must lie in (0, 1], got {similarity_cutoff}")
    labels = tuple(sorted(set(affiliations)))
    toks = [tokens(s) for s in labels]

    index: dict[str, list[int]] = defaultdict(list)
    for i, t in enumerate(toks):
        for tok in t:
            index[tok].append(i)
    candidates: set[tuple[int, int]] = set()
    for ids in index.values():
        candidates.update(combinations(ids, 2))

    edges = []
    for i, j in sorted(candidates):
        sim = jaccard(toks[i], toks[j])
        if sim >= similarity_cutoff:
            edges.append((i, j, round(sim, 6)))
    return cluster_edges(len(labels), labels, edges, similarity_cutoff)


@dataclass(frozen=True)
class OverlapRow:
    rank: int
    size: int
    by_b: dict[int, int]
    unclustered_in_b: int


@dataclass(frozen=True)
class ClusterComparison:
    """How clustering A's clusters land in clustering B.

    "Size" everywhere means member-string count.
    """

    overlaps: tuple[OverlapRow, ...]
    unclustered_by_b: int
    largest_a: int
    largest_b: int
    largest_a_fragments: tuple[int, ...]
    largest_a_unclustered: int

    def to_json(self) -> dict:
        return {
            "overlaps": [
                {"rank": r.rank, "size": r.size, "by_b": {str(k): v for k, v in r.by_b.items()},
                 "unclustered_in_b": r.unclustered_in_b}
                for r in self.overlaps
            ],
            "unclustered_by_b": self.unclustered_by_b,
            "largest_a": self.largest_a,
            "largest_b": self.largest_b,
            "largest_a_fragments": list(self.largest_a_fragments),
            "largest_a_unclustered": self.largest_a_unclustered,
        }

    def to_text(self) -> str:
        header = ("rank_a", "size", "b_clusters", "largest_piece", "unclustered_in_b")
        rows = [
            (str(r.rank), str(r.size), str(len(r.by_b)), str(max(r.by_b.values(), default=0)),
             str(r.unclustered_in_b))
            for r in self.overlaps
        ]
        widths = [max(len(h), *(len(row[k]) for row in rows)) if rows else len(h) for k, h in enumerate(header)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows]
        lines.append(f"unclustered by B: {self.unclustered_by_b}")
        lines.append(f"largest cluster size: A={self.largest_a} B={self.largest_b}")
        lines.append(
            f"A's largest cluster under B: pieces {list(self.largest_a_fragments)}, "
            f"unclustered {self.largest_a_unclustered}"
        )
        return "\n".join(lines) + "\n"


def compare_clusterings(a: Clustering, b: Clustering) -> ClusterComparison:
    if a.universe != b.universe:
        raise DataValidationError("clusterings cover different sets of strings")
    b_rank = b.assignment()
    overlaps = []
    for c in a.clusters:
        hits = Counter(b_rank[m] for m in c.members if m in b_rank)
        overlaps.append(OverlapRow(c.rank, c.size, dict(sorted(hits.items())), c.size - sum(hits.values())))
    if overlaps:
        top = overlaps[0]
        fragments = tuple(sorted(top.by_b.values(), reverse=True))
        top_unclustered = top.unclustered_in_b
    else:
        fragments, top_unclustered = (), 0
    return ClusterComparison(
        overlaps=tuple(overlaps),
        unclustered_by_b=sum(r.unclustered_in_b for r in overlaps),
        largest_a=a.clusters[0].size if a.clusters else 0,
        largest_b=b.clusters[0].size if b.clusters else 0,
        largest_a_fragments=fragments,
        largest_a_unclustered=top_unclustered,
    )


def format_score(score: PairwiseScore, title: str = "score") -> str:
    def rate(x):
        return "undefined" if x is None else f"{x:.6f}"

    return (
        f"{title}\n"
        f"  precision         {rate(score.precision)}\n"
        f"  recall            {rate(score.recall)}\n"
        f"  f1                {rate(score.f1)}\n"
        f"  true_pairs        {score.true_pairs}\n"
        f"  predicted_pairs   {score.predicted_pairs}\n"
        f"  intersecting      {score.intersecting_pairs}\n"
    )
