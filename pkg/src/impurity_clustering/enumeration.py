"""Isomorphism-free enumeration of small edge sets and triangle-free graphs.

Both generators grow graphs one step at a time (an edge, or a vertex) from
the representatives of the previous level. The constraints used here (degree
bound, no triangle) survive edge and vertex deletion, so every class is
reached. Isomorphs are removed exactly: graphs are bucketed by a cheap
invariant and compared with VF2 inside a bucket.
"""
from __future__ import annotations

from itertools import combinations

import networkx as nx

from .core import Graph
from .errors import ResourceError

MAX_P = 7


def _nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n_vertices))
    G.add_edges_from(g.edges)
    return G


class _IsoSet:
    def __init__(self):
        self._buckets = {}

    def add(self, g: Graph) -> bool:
        """Insert g unless an isomorphic graph is present; report insertion."""
        G = _nx(g)
        key = (g.n_vertices, g.m, tuple(sorted(g.degrees())), nx.weisfeiler_lehman_graph_hash(G, iterations=3))
        bucket = self._buckets.setdefault(key, [])
        if any(nx.is_isomorphic(G, H) for H in bucket):
            return False
        bucket.append(G)
        return True


def _allowed(adj, u, v, max_degree, triangle_free) -> bool:
    if max_degree is not None and (len(adj[u]) >= max_degree or len(adj[v]) >= max_degree):
        return False
    if triangle_free and adj[u] & adj[v]:
        return False
    return True


def _extend_by_edge(g: Graph, max_degree, triangle_free):
    n = g.n_vertices
    adj = [set(a) for a in g.adjacency] + [set(), set()]
    cands = [(u, v) for u, v in combinations(range(n), 2) if v not in adj[u]]
    cands += [(u, n) for u in range(n)]
    cands.append((n, n + 1))
    for u, v in cands:
        if _allowed(adj, u, v, max_degree, triangle_free):
            yield Graph(max(n, v + 1), g.edges + ((u, v),))


def enumerate_edge_sets(p: int, max_degree: int | None = 3, triangle_free: bool = True, limit: int = MAX_P):
    """Yield (graph, edges) for one representative of every isomorphism class
    of p-edge graphs without isolated vertices meeting the constraints.

    ``limit`` guards the running time (p = 9 takes several seconds)."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if p > limit:
        raise ResourceError(f"edge-set enumeration is capped at p = {limit}")
    level = [Graph(0, ())]
    for _ in range(p):
        seen = _IsoSet()
        nxt = []
        for g in level:
            for h in _extend_by_edge(g, max_degree, triangle_free):
                if seen.add(h):
                    nxt.append(h)
        level = nxt
    for g in level:
        yield g, g.edges


def triangle_free_graphs(n: int, max_degree: int | None = None):
    """All triangle-free graphs on exactly n vertices (isolated ones allowed), up to isomorphism.

    A new vertex may only attach to an independent set, which keeps the graph
    triangle-free.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    level = [Graph(0, ())]
    for size in range(n):
        seen = _IsoSet()
        nxt = []
        for g in level:
            adj = g.adjacency
            for r in range(size + 1):
                for nb in combinations(range(size), r):
                    if any(b in adj[a] for a, b in combinations(nb, 2)):
                        continue
                    if max_degree is not None and (r > max_degree or any(len(adj[a]) >= max_degree for a in nb)):
                        continue
                    h = Graph(size + 1, g.edges + tuple((a, size) for a in nb))
                    if seen.add(h):
                        nxt.append(h)
        level = nxt
    return level


def non_isolated_count(g: Graph) -> int:
    return sum(1 for d in g.degrees() if d > 0)
