"""Threshold graph over affiliations and its connected components."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cooccur import CooccurrenceMatrix
from .errors import RankError


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True, eq=False)
class ThresholdGraph:
    """Affiliation pairs with co-occurrence weight >= threshold (``rows < cols``)."""

    threshold: int
    n: int
    labels: tuple[str, ...]
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.weights.size)

    @property
    def nodes(self) -> np.ndarray:
        return np.union1d(self.rows, self.cols)

    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.weights.tolist()))


@dataclass(frozen=True)
class Component:
    rank: int
    members: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "size": self.size,
            "members": list(self.members),
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self, name: str | None = None) -> str:
        """Undirected DOT graph; nodes are labelled with the affiliation string."""
        name = name or f"component_{self.rank}"
        lines = [f"graph {_dot_quote(name)} {{"]
        for m in self.members:
            lines.append(f"  {_dot_quote(m)};")
        for a, b, w in self.edges:
            lines.append(f'  {_dot_quote(a)} -- {_dot_quote(b)} [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


@dataclass(frozen=True)
class Clustering:
    """Connected components of size >= 2, plus the strings left unclustered.

    ``clusters`` are ordered by size descending, then by their smallest member;
    members are sorted.  ``threshold`` is the edge cutoff that produced the
    clustering (an integer weight, or a similarity for string baselines).
    """

    threshold: int | float
    clusters: tuple[Component, ...]
    singletons: tuple[str, ...]

    @property
    def singleton_count(self) -> int:
        return len(self.singletons)

    @property
    def clustered_count(self) -> int:
        return sum(c.size for c in self.clusters)

    @property
    def universe(self) -> frozenset[str]:
        return frozenset(self.singletons).union(*(c.members for c in self.clusters))

    def assignment(self) -> dict[str, int]:
        """Member string -> cluster rank (singletons omitted)."""
        return {m: c.rank for c in self.clusters for m in c.members}

    def to_json(self, include_singletons: bool = False) -> dict:
        clusters = [c.to_json() for c in self.clusters]
        if include_singletons:
            rank = len(clusters)
            for s in self.singletons:
                clusters.append({"rank": rank, "size": 1, "members": [s], "edges": []})
                rank += 1
        return {"threshold": self.threshold, "clusters": clusters, "singletons": self.singleton_count}

    def dumps(self, include_singletons: bool = False) -> str:
        return json.dumps(self.to_json(include_singletons), ensure_ascii=False, indent=2) + "\n"


def build_graph(c: CooccurrenceMatrix, threshold: int) -> ThresholdGraph:
    if isinstance(threshold, bool) or not isinstance(threshold, (int, np.integer)):
        raise TypeError(f"threshold must be an integer, got {threshold!r}")
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    keep = c.weights >= threshold
    return ThresholdGraph(int(threshold), c.n, c.labels, c.rows[keep], c.cols[keep], c.weights[keep])


def cluster_edges(
    n: int, labels: tuple[str, ...], edges, threshold: int | float
) -> Clustering:
    """Connected components of an undirected graph given as ``(i, j, w)`` id triples."""
    uf = UnionFind(n)
    for i, j, _ in edges:
        uf.union(i, j)

    touched = set()
    for i, j, _ in edges:
        touched.add(i)
        touched.add(j)
    groups: dict[int, list[int]] = {}
    for v in touched:
        groups.setdefault(uf.find(v), []).append(v)
    group_edges: dict[int, list[tuple[str, str, int]]] = {}
    for i, j, w in edges:
        a, b = labels[i], labels[j]
        group_edges.setdefault(uf.find(i), []).append((a, b, w) if a < b else (b, a, w))

    comps = []
    for root, ids in groups.items():
        members = tuple(sorted(labels[v] for v in ids))
        comps.append((members, tuple(sorted(group_edges.get(root, ())))))
    comps.sort(key=lambda ce: (-len(ce[0]), ce[0][0]))

    singletons = tuple(sorted(labels[v] for v in range(n) if v not in touched))
    return Clustering(
        threshold=threshold,
        clusters=tuple(Component(k, m, e) for k, (m, e) in enumerate(comps)),
        singletons=singletons,
    )


def components(g: ThresholdGraph) -> Clustering:
    return cluster_edges(g.n, g.labels, g.edges(), g.threshold)


def largest_component(cl: Clustering, k: int) -> Component:
    """The ``k``-th component (0 = largest) under the clustering's ordering."""
    if not 0 <= k < len(cl.clusters):
        raise RankError(f"rank {k} out of range: clustering has {len(cl.clusters)} clusters")
    return cl.clusters[k]


class SweepRow(NamedTuple):
    threshold: int
    clusters: int
    largest: int
    clustered_nodes: int
    edges: int


SWEEP_COLUMNS = SweepRow._fields


def summarize(g: ThresholdGraph, cl: Clustering) -> SweepRow:
    largest = cl.clusters[0].size if cl.clusters else 0
    return SweepRow(g.threshold, len(cl.clusters), largest, cl.clustered_count, g.edge_count)


def sweep(c: CooccurrenceMatrix, t_min: int, t_max: int) -> list[SweepRow]:
    if not 1 <= t_min <= t_max:
        raise ValueError(f"need 1 <= t_min <= t_max, got {t_min}..{t_max}")
    rows = []
    for t in range(t_min, t_max + 1):
        g = build_graph(c, t)
        rows.append(summarize(g, components(g)))
    return rows
