"""Independent brute-force references.  Pure Python, no numpy, no package internals."""

from collections import defaultdict, deque
from itertools import combinations


def cooccurrence_dense(dense_counts):
    """co[i][j] = number of authors (rows) with positive counts in both columns i and j."""
    n_cols = len(dense_counts[0]) if dense_counts else 0
    users = [set() for _ in range(n_cols)]
    for a, row in enumerate(dense_counts):
        for f, v in enumerate(row):
            if v > 0:
                users[f].add(a)
    return [[len(users[i] & users[j]) for j in range(n_cols)] for i in range(n_cols)]


def components_bfs(n, edges):
    """Connected components (as frozensets of ids, size >= 2) by breadth-first search."""
    adj = defaultdict(set)
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, out = set(), []
    for start in range(n):
        if start in seen or start not in adj:
            continue
        comp, queue = {start}, deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        out.append(frozenset(comp))
    return out


def pairwise_counts(clusters, labels):
    """(true, predicted, intersect) pair counts by enumerating every unordered pair."""
    universe = sorted({m for c in clusters for m in c} | set(labels))
    where = {m: k for k, c in enumerate(clusters) for m in c}
    true = pred = both = 0
    for x, y in combinations(universe, 2):
        t = labels[x] == labels[y]
        p = x in where and y in where and where[x] == where[y]
        true += t
        pred += p
        both += t and p
    return true, pred, both
