"""Author x affiliation count matrix in compressed-row form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple

import numpy as np

from .ingest import Observation

SNAPSHOT_MAGIC = "AFFCLUST-MATRIX"
SNAPSHOT_VERSION = 1


class Interner:
    """Assign consecutive integer ids to strings in first-seen order."""

    def __init__(self, strings: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._strings: list[str] = []
        for s in strings:
            self.intern(s)

    def intern(self, s: str) -> int:
        i = self._ids.get(s)
        if i is None:
            i = len(self._strings)
            self._ids[s] = i
            self._strings.append(s)
        return i

    def id_of(self, s: str) -> int:
        return self._ids[s]

    def __getitem__(self, i: int) -> str:
        return self._strings[i]

    def __contains__(self, s: str) -> bool:
        return s in self._ids

    def __len__(self) -> int:
        return len(self._strings)

    def __iter__(self) -> Iterator[str]:
        return iter(self._strings)

    @property
    def strings(self) -> tuple[str, ...]:
        return tuple(self._strings)


@dataclass(frozen=True, eq=False)
class AuthorAffiliationMatrix:
    """Sparse counts; row ``a`` holds ``indices[indptr[a]:indptr[a+1]]``.

    Column indices are strictly increasing within each row and every stored
    count is >= 1.
    """

    n_authors: int
    n_affiliations: int
    indptr: np.ndarray
    indices: np.ndarray
    counts: np.ndarray

    def row(self, a: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[a], self.indptr[a + 1]
        return self.indices[lo:hi], self.counts[lo:hi]

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_authors, self.n_affiliations), dtype=np.int64)
        rows = np.repeat(np.arange(self.n_authors), np.diff(self.indptr))
        out[rows, self.indices] = self.counts
        return out

    def equals(self, other: "AuthorAffiliationMatrix") -> bool:
        return (
            self.n_authors == other.n_authors
            and self.n_affiliations == other.n_affiliations
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.counts, other.counts)
        )

    @classmethod
    def from_dense(cls, dense) -> "AuthorAffiliationMatrix":
        dense = np.asarray(dense, dtype=np.int64)
        if dense.ndim != 2:
            raise ValueError("expected a 2-d array")
        if (dense < 0).any():
            raise ValueError("counts must be nonnegative")
        rows, cols = np.nonzero(dense)
        indptr = np.zeros(dense.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=dense.shape[0]), out=indptr[1:])
        return cls(dense.shape[0], dense.shape[1], indptr, cols.astype(np.int64), dense[rows, cols])


class MatrixStats(NamedTuple):
    rows: int
    cols: int
    nonzeros: int
    total: int


def _from_pairs(n_rows: int, n_cols: int, rows: np.ndarray, cols: np.ndarray) -> AuthorAffiliationMatrix:
    keys = rows * max(n_cols, 1) + cols
    uniq, counts = np.unique(keys, return_counts=True)
    r = uniq // max(n_cols, 1)
    indptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=n_rows), out=indptr[1:])
    return AuthorAffiliationMatrix(n_rows, n_cols, indptr, uniq % max(n_cols, 1), counts.astype(np.int64))


def build_matrix(
    observations: Iterable[Observation],
) -> tuple[AuthorAffiliationMatrix, Interner, Interner]:
    """Intern authors and affiliations and count each (author, affiliation) pair."""
    authors, affiliations = Interner(), Interner()
    rows: list[int] = []
    cols: list[int] = []
    for obs in observations:
        rows.append(authors.intern(obs.author_key))
        cols.append(affiliations.intern(obs.affiliation_key))
    m = _from_pairs(
        len(authors),
        len(affiliations),
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
    )
    return m, authors, affiliations


def matrix_stats(m: AuthorAffiliationMatrix) -> MatrixStats:
    return MatrixStats(m.n_authors, m.n_affiliations, m.nnz, int(m.counts.sum()))


# Snapshot layout, one JSON document per line:
#   1: {"magic": "AFFCLUST-MATRIX", "version": 1, "n_authors", "n_affiliations", "nnz"}
#   2: {"authors": [...]}          id order
#   3: {"affiliations": [...]}     id order
#   4: {"indptr": [...], "indices": [...], "counts": [...]}


def write_snapshot(fh: IO[str], m: AuthorAffiliationMatrix, authors: Interner, affiliations: Interner) -> None:
    header = {
        "magic": SNAPSHOT_MAGIC,
        "version": SNAPSHOT_VERSION,
        "n_authors": m.n_authors,
        "n_affiliations": m.n_affiliations,
        "nnz": m.nnz,
    }
    for doc in (
        header,
        {"authors": list(authors)},
        {"affiliations": list(affiliations)},
        {"indptr": m.indptr.tolist(), "indices": m.indices.tolist(), "counts": m.counts.tolist()},
    ):
        fh.write(json.dumps(doc, ensure_ascii=False))
        fh.write("\n")


def is_snapshot_header(line: str) -> bool:
    try:
        obj = json.loads(line)
    except ValueError:
        return False
    return isinstance(obj, dict) and obj.get("magic") == SNAPSHOT_MAGIC


def read_snapshot(fh: IO[str]) -> tuple[AuthorAffiliationMatrix, Interner, Interner]:
    docs = [json.loads(line) for line in fh if line.strip()]
    if len(docs) != 4 or docs[0].get("magic") != SNAPSHOT_MAGIC:
        raise ValueError("not a matrix snapshot")
    header = docs[0]
    if header.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {header.get('version')!r}")
    authors = Interner(docs[1]["authors"])
    affiliations = Interner(docs[2]["affiliations"])
    body = docs[3]
    m = AuthorAffiliationMatrix(
        header["n_authors"],
        header["n_affiliations"],
        np.asarray(body["indptr"], dtype=np.int64),
        np.asarray(body["indices"], dtype=np.int64),
        np.asarray(body["counts"], dtype=np.int64),
    )
    if (
        len(authors) != m.n_authors
        or len(affiliations) != m.n_affiliations
        or m.indptr.size != m.n_authors + 1
        or m.nnz != header["nnz"]
        or m.counts.size != m.nnz
    ):
        raise ValueError("snapshot is internally inconsistent")
    return m, authors, affiliations
