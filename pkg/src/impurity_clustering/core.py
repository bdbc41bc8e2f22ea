"""Data model and objective functions for entropy-impurity clustering.

Impurities are in bits; KL divergence is in nats. For an instance of
probability vectors the two are tied by

    log2(e) * sum_i KL(p_i, centroid(group(i)))
        = clustering_impurity - sum_i entropy_impurity(p_i)
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

LOG2E = float(np.log2(np.e))
TOL = 1e-9


def as_vector(v) -> np.ndarray:
    """Validate a nonnegative vector and return it as a float array."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector has non-finite components")
    if np.any(arr < 0):
        raise DomainError("vector has negative components")
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """n nonnegative vectors of a common dimension d, stored as an n x d array."""

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.array(self.vectors, dtype=float)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise DomainError(f"instance needs n >= 1 vectors of dimension d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise DomainError("instance vectors must be finite and nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "Instance":
        rows = [list(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise DomainError("vectors have mixed dimensions")
        return cls(np.array(rows, dtype=float))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Instance) and np.array_equal(self.vectors, other.vectors)

    def __hash__(self):
        return hash(self.vectors.tobytes())


@dataclass(frozen=True)
class Clustering:
    """Group label per item. Groups may be empty."""

    assignment: tuple
    k: int

    def __post_init__(self):
        labels = tuple(int(a) for a in self.assignment)
        k = int(self.k)
        if k < 1:
            raise DomainError("k must be positive")
        if any(a < 0 or a >= k for a in labels):
            raise DomainError(f"labels must lie in 0..{k - 1}")
        object.__setattr__(self, "assignment", labels)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_labels(cls, labels: Sequence[int], k: int | None = None) -> "Clustering":
        labels = [int(a) for a in labels]
        if k is None:
            k = max(labels, default=0) + 1
        return cls(tuple(labels), k)

    @classmethod
    def from_groups(cls, groups: Sequence[Iterable[int]], n: int) -> "Clustering":
        labels = [-1] * n
        for g, members in enumerate(groups):
            for i in members:
                if labels[i] != -1:
                    raise DomainError(f"item {i} appears in two groups")
                labels[i] = g
        if -1 in labels:
            raise DomainError("groups do not cover every item")
        return cls(tuple(labels), max(len(groups), 1))

    @property
    def n(self) -> int:
        return len(self.assignment)

    def groups(self) -> list[list[int]]:
        out = [[] for _ in range(self.k)]
        for i, a in enumerate(self.assignment):
            out[a].append(i)
        return out

    def nonempty_groups(self) -> list[list[int]]:
        return [g for g in self.groups() if g]

    def canonical(self) -> "Clustering":
        """Relabel groups by first appearance (restricted-growth form)."""
        relabel = {}
        for a in self.assignment:
            relabel.setdefault(a, len(relabel))
        return Clustering(tuple(relabel[a] for a in self.assignment), self.k)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n_vertices-1; edges stored as sorted (u, v) with u < v."""

    n_vertices: int
    edges: tuple

    def __post_init__(self):
        n = int(self.n_vertices)
        if n < 0:
            raise DomainError("vertex count must be nonnegative")
        norm = []
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            norm.append((min(u, v), max(u, v)))
        norm.sort()
        if len(set(norm)) != len(norm):
            raise DomainError("duplicate edge")
        object.__setattr__(self, "n_vertices", n)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def adjacency(self) -> tuple:
        adj = [set() for _ in range(self.n_vertices)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set


def edge_key(e) -> tuple:
    u, v = e
    return (min(u, v), max(u, v))


def entropy_impurity(v) -> float:
    """||v||_1 times the Shannon entropy (bits) of v / ||v||_1; 0 for the zero vector."""
    arr = as_vector(v)
    total = arr.sum()
    if total == 0:
        return 0.0
    nz = arr[arr > 0]
    return float(np.sum(nz * (np.log2(total) - np.log2(nz))))


def group_sums(inst: Instance, clustering: Clustering) -> np.ndarray:
    """k x d matrix whose row g is the sum of the vectors in group g."""
    if clustering.n != inst.n:
        raise DomainError(f"assignment has length {clustering.n}, instance has {inst.n} vectors")
    sums = np.zeros((clustering.k, inst.d))
    np.add.at(sums, np.asarray(clustering.assignment, dtype=int), inst.vectors)
    return sums


def _as_clustering(c, n=None) -> Clustering:
    if isinstance(c, Clustering):
        return c
    return Clustering.from_labels(c)


def clustering_impurity(inst: Instance, c) -> float:
    """Sum over groups of the entropy impurity of the group's vector sum."""
    c = _as_clustering(c)
    return float(sum(entropy_impurity(row) for row in group_sums(inst, c)))


def item_impurities(inst: Instance) -> np.ndarray:
    return np.array([entropy_impurity(row) for row in inst.vectors])


def kl_divergence(p, q) -> float:
    """KL(p, q) in nats; +inf when p has mass where q has none."""
    p = as_vector(p)
    q = as_vector(q)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.size} vs {q.size}")
    support = p > 0
    if np.any(q[support] == 0):
        return float("inf")
    ps, qs = p[support], q[support]
    return float(np.sum(ps * np.log(ps / qs)))


def centroid(vectors) -> np.ndarray:
    rows = [as_vector(v) for v in vectors]
    if not rows:
        raise DomainError("centroid of an empty set")
    if len({r.size for r in rows}) != 1:
        raise DomainError("vectors have mixed dimensions")
    return np.mean(rows, axis=0)


def check_normalized(inst: Instance, tol: float = TOL):
    sums = inst.vectors.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > tol)
    if bad.size:
        raise DomainError(f"vector {int(bad[0])} has l1 norm {sums[bad[0]]!r}, expected 1")


def mtc_kl_objective(inst: Instance, c) -> float:
    """Total KL divergence (nats) from each distribution to its group's centroid."""
    c = _as_clustering(c)
    check_normalized(inst)
    if c.n != inst.n:
        raise DomainError(f"assignment has length {c.n}, instance has {inst.n} vectors")
    total = 0.0
    for members in c.nonempty_groups():
        cen = centroid(inst.vectors[members])
        total += sum(kl_divergence(inst.vectors[i], cen) for i in members)
    return total


def edge_set_impurity(g: Graph, edge_subset) -> float:
    """Impurity of a set of edges computed from vertex degrees inside the set.

    Equals 2|C| * H(deg_C(v) / 2|C|) in bits, i.e. the entropy impurity of the
    sum of the edges' incidence vectors.
    """
    edges = [edge_key(e) for e in edge_subset]
    if len(set(edges)) != len(edges):
        raise DomainError("edge subset lists an edge twice")
    for e in edges:
        if e not in g.edge_set:
            raise DomainError(f"edge {e} is not in the graph")
    if not edges:
        return 0.0
    deg = Counter(x for e in edges for x in e)
    two_m = 2 * len(edges)
    return float(sum(c * np.log2(two_m / c) for c in deg.values()))
