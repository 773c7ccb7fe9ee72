"""Binary masking and affiliation x affiliation co-occurrence counting.

The co-occurrence matrix is ``C = B.T @ B`` for the binary author x
affiliation mask ``B``: entry ``(i, j)`` is the number of distinct authors
who used both affiliation strings.  Because ``B`` is binary and row-sparse,
``C`` is the sum over authors of the outer product of each author's
affiliation set with itself.  That sum is what the kernel below computes,
one author-row range at a time.

Everything is integer arithmetic; the result is identical for any worker
count because partial results are merged in a fixed order and reduced by a
sort on pair keys.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .matrix import AuthorAffiliationMatrix


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Presence pattern of an author x affiliation matrix (stored entries are 1)."""

    n_authors: int
    n_affiliations: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_authors, self.n_affiliations), dtype=np.int64)
        rows = np.repeat(np.arange(self.n_authors), np.diff(self.indptr))
        out[rows, self.indices] = 1
        return out

    def equals(self, other: "BinaryMask") -> bool:
        return (
            self.n_authors == other.n_authors
            and self.n_affiliations == other.n_affiliations
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Symmetric co-occurrence counts.

    Off-diagonal entries are stored once, as the strict upper triangle
    ``rows < cols`` sorted by ``(row, col)``; only pairs with a nonzero
    weight are stored.  ``diagonal[i]`` is the number of distinct authors
    using affiliation ``i``.
    """

    n: int
    labels: tuple[str, ...]
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    diagonal: np.ndarray

    @property
    def nnz_pairs(self) -> int:
        return int(self.weights.size)

    def weight(self, i: int, j: int) -> int:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError((i, j))
        if i == j:
            return int(self.diagonal[i])
        if i > j:
            i, j = j, i
        key = i * self.n + j
        keys = self.rows * self.n + self.cols
        k = int(np.searchsorted(keys, key))
        if k < keys.size and keys[k] == key:
            return int(self.weights[k])
        return 0

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.int64)
        out[self.rows, self.cols] = self.weights
        out[self.cols, self.rows] = self.weights
        out[np.arange(self.n), np.arange(self.n)] = self.diagonal
        return out

    def equals(self, other: "CooccurrenceMatrix") -> bool:
        return (
            self.n == other.n
            and self.labels == other.labels
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.diagonal, other.diagonal)
        )


def binarize(m: AuthorAffiliationMatrix | BinaryMask) -> BinaryMask:
    """Drop the counts, keeping the sparsity pattern; a BinaryMask passes through."""
    if isinstance(m, BinaryMask):
        return m
    if m.nnz and int(m.counts.min()) < 1:
        # explicit zeros would otherwise become ones
        keep = m.counts > 0
        rows = np.repeat(np.arange(m.n_authors), np.diff(m.indptr))[keep]
        indptr = np.zeros(m.n_authors + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=m.n_authors), out=indptr[1:])
        return BinaryMask(m.n_authors, m.n_affiliations, indptr, m.indices[keep])
    return BinaryMask(m.n_authors, m.n_affiliations, m.indptr, m.indices)


def _row_pair_counts(indptr: np.ndarray, indices: np.ndarray, lo: int, hi: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate upper-triangle pair keys ``i * n + j`` for author rows ``[lo, hi)``.

    Returns sorted unique keys and their counts.  Rows are grouped by degree
    so each group expands with a single gather; rows with fewer than two
    affiliations add nothing off the diagonal and are skipped.
    """
    starts = indptr[lo:hi]
    degree = indptr[lo + 1:hi + 1] - starts
    chunks = []
    for d in np.unique(degree[degree >= 2]):
        d = int(d)
        s = starts[degree == d]
        cols = indices[s[:, None] + np.arange(d)]
        p, q = np.triu_indices(d, 1)
        chunks.append((cols[:, p] * n + cols[:, q]).ravel())
    if not chunks:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    keys, counts = np.unique(np.concatenate(chunks), return_counts=True)
    return keys, counts.astype(np.int64)


def _merge(parts: Sequence[tuple[np.ndarray, np.ndarray]]) -> tuple[np.ndarray, np.ndarray]:
    keys = np.concatenate([k for k, _ in parts]) if parts else np.empty(0, dtype=np.int64)
    counts = np.concatenate([c for _, c in parts]) if parts else np.empty(0, dtype=np.int64)
    if keys.size == 0:
        return keys.astype(np.int64), counts.astype(np.int64)
    order = np.argsort(keys, kind="stable")
    keys, counts = keys[order], counts[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(keys)) + 1))
    return keys[starts], np.add.reduceat(counts, starts)


def _assemble(mask: BinaryMask, keys: np.ndarray, weights: np.ndarray, labels) -> CooccurrenceMatrix:
    n = mask.n_affiliations
    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError(f"expected {n} labels, got {len(labels)}")
    diagonal = np.bincount(mask.indices, minlength=n).astype(np.int64)
    return CooccurrenceMatrix(
        n=n,
        labels=labels,
        rows=(keys // max(n, 1)).astype(np.int64),
        cols=(keys % max(n, 1)).astype(np.int64),
        weights=weights.astype(np.int64),
        diagonal=diagonal,
    )


def cooccurrence(mask: BinaryMask, labels: Sequence[str] | None = None) -> CooccurrenceMatrix:
    """Distinct-author co-occurrence counts for every pair of affiliations.

    ``labels`` names the affiliation columns; defaults to the column ids.
    """
    keys, weights = _row_pair_counts(mask.indptr, mask.indices, 0, mask.n_authors, mask.n_affiliations)
    return _assemble(mask, keys, weights, labels)


def _partition_rows(indptr: np.ndarray, parts: int) -> list[tuple[int, int]]:
    # balance by pair workload, not row count: a row of degree d costs d*(d-1)/2
    degree = np.diff(indptr)
    work = np.cumsum(degree * (degree - 1) // 2)
    total = int(work[-1]) if work.size else 0
    n_rows = degree.size
    bounds = [0]
    for k in range(1, parts):
        b = int(np.searchsorted(work, total * k // parts, side="right")) if total else n_rows * k // parts
        bounds.append(max(bounds[-1], min(b, n_rows)))
    bounds.append(n_rows)
    return list(zip(bounds[:-1], bounds[1:]))


def cooccurrence_parallel(
    mask: BinaryMask, worker_count: int, labels: Sequence[str] | None = None
) -> CooccurrenceMatrix:
    """Same result as :func:`cooccurrence`, computed by ``worker_count`` threads.

    Author rows are split into contiguous ranges; each worker builds its own
    sparse accumulator and the partials are merged in range order.
    """
    if not isinstance(worker_count, (int, np.integer)) or worker_count < 1:
        raise ValueError(f"worker_count must be a positive integer, got {worker_count!r}")
    worker_count = int(worker_count)
    n = mask.n_affiliations
    ranges = _partition_rows(mask.indptr, worker_count)
    if worker_count == 1:
        parts = [_row_pair_counts(mask.indptr, mask.indices, lo, hi, n) for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            futures = [pool.submit(_row_pair_counts, mask.indptr, mask.indices, lo, hi, n) for lo, hi in ranges]
            parts = [f.result() for f in futures]
    keys, weights = _merge(parts)
    return _assemble(mask, keys, weights, labels)


def cooccurrence_records(c: CooccurrenceMatrix) -> list[tuple[str, str, int]]:
    """All stored entries as ``(i_label, j_label, w)`` with ``i_label <= j_label``, sorted."""
    out = []
    labels = c.labels
    for i, j, w in zip(c.rows.tolist(), c.cols.tolist(), c.weights.tolist()):
        a, b = labels[i], labels[j]
        out.append((a, b, w) if a < b else (b, a, w))
    for i, w in enumerate(c.diagonal.tolist()):
        out.append((labels[i], labels[i], w))
    out.sort()
    return out


def write_cooccurrence_snapshot(fh: IO[str], c: CooccurrenceMatrix) -> None:
    for a, b, w in cooccurrence_records(c):
        fh.write(json.dumps({"i_label": a, "j_label": b, "w": w}, ensure_ascii=False))
        fh.write("\n")
