"""Graph helpers: cover predicates, exact vertex cover, generators, cluster shapes."""
from __future__ import annotations

import enum
from collections import Counter, deque
from itertools import combinations

import numpy as np

from .core import Graph, Instance, edge_key
from .errors import DomainError, ResourceError

MAX_EXACT_VC_VERTICES = 40


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def is_regular(g: Graph, d: int) -> bool:
    return all(x == d for x in g.degrees())


def random_4_regular(n: int, seed: int = 0, max_tries: int = 100_000) -> Graph:
    """Uniform-ish 4-regular simple graph from the pairing model with rejection."""
    if n < 5:
        raise DomainError("a simple 4-regular graph needs at least 5 vertices")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), 4)
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = points.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {edge_key((int(u), int(v))) for u, v in pairs}
        if len(edges) == 2 * n:
            return Graph(n, tuple(edges))
    raise ResourceError(f"pairing model found no simple graph in {max_tries} tries")


def find_triangle(g: Graph):
    adj = g.adjacency
    for u, v in g.edges:
        common = adj[u] & adj[v]
        if common:
            return (u, v, min(common))
    return None


def is_triangle_free(g: Graph) -> bool:
    return find_triangle(g) is None


def two_coloring(n: int, edges):
    """BFS 2-colouring of (range(n), edges); None if an odd cycle exists."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * n
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    return color


def is_bipartite(n: int, edges) -> bool:
    return two_coloring(n, edges) is not None


def is_vertex_cover(g: Graph, cover) -> bool:
    s = set(cover)
    return all(u in s or v in s for u, v in g.edges)


def is_minimal_cover(g: Graph, cover) -> bool:
    """A cover from which no single vertex can be dropped."""
    s = set(cover)
    if not is_vertex_cover(g, s):
        return False
    adj = g.adjacency
    # v is removable iff all its neighbours are in the cover
    return all(not adj[v] <= s for v in s)


def _without(adj: dict, removed: set) -> dict:
    out = {}
    for v, nb in adj.items():
        if v in removed:
            continue
        rest = nb - removed
        if rest:
            out[v] = rest
    return out


def _matching_bound(adj: dict) -> int:
    used = set()
    size = 0
    for v in sorted(adj):
        if v in used:
            continue
        for w in sorted(adj[v]):
            if w not in used:
                used.update((v, w))
                size += 1
                break
    return size


def exact_min_vertex_cover(g: Graph, max_vertices: int = MAX_EXACT_VC_VERTICES) -> frozenset:
    """Minimum vertex cover by branch and bound.

    Degree-1 vertices force their neighbour; a degree-2 vertex whose
    neighbours are adjacent forces both neighbours. Otherwise branch on a
    maximum-degree vertex v: take v, or take all of N(v). Greedy matching size
    is the lower bound.
    """
    if g.n_vertices > max_vertices:
        raise ResourceError(f"exact vertex cover is capped at {max_vertices} vertices, graph has {g.n_vertices}")
    adj0 = {v: set(nb) for v, nb in enumerate(g.adjacency) if nb}
    best = [frozenset(adj0)]

    def rec(adj, chosen):
        adj = dict(adj)
        chosen = set(chosen)
        while True:
            forced = None
            for v in sorted(adj):
                nb = adj[v]
                if len(nb) == 1:
                    forced = set(nb)
                    break
                if len(nb) == 2:
                    a, b = sorted(nb)
                    if b in adj.get(a, ()):
                        forced = {a, b}
                        break
            if forced is None:
                break
            chosen |= forced
            adj = _without(adj, forced)
            if len(chosen) >= len(best[0]):
                return
        if not adj:
            if len(chosen) < len(best[0]):
                best[0] = frozenset(chosen)
            return
        if len(chosen) + _matching_bound(adj) >= len(best[0]):
            return
        v = max(sorted(adj), key=lambda x: len(adj[x]))
        rec(_without(adj, {v}), chosen | {v})
        nb = set(adj[v])
        rec(_without(adj, nb), chosen | nb)

    rec(adj0, set())
    return best[0]


def min_vertex_cover_size(g: Graph, max_vertices: int = MAX_EXACT_VC_VERTICES) -> int:
    return len(exact_min_vertex_cover(g, max_vertices))


def incidence_vectors(g: Graph) -> Instance:
    """One 0/1 vector per edge (in g.edges order) with ones at its two endpoints."""
    U = np.zeros((g.m, g.n_vertices))
    for i, (u, v) in enumerate(g.edges):
        U[i, u] = U[i, v] = 1.0
    return Instance(U)


class ClusterType(enum.Enum):
    THREE_STAR = "ThreeStar"
    TWO_STAR = "TwoStar"
    SINGLE_EDGE = "SingleEdge"
    TWO_MATCHING = "TwoMatching"
    OTHER = "Other"


def is_star(edges) -> bool:
    edges = [edge_key(e) for e in edges]
    if not edges:
        return False
    common = set(edges[0])
    for e in edges[1:]:
        common &= set(e)
    return bool(common)


def classify_cluster(edges) -> ClusterType:
    edges = [edge_key(e) for e in edges]
    if not edges:
        raise DomainError("cannot classify an empty cluster")
    p = len(edges)
    if p == 1:
        return ClusterType.SINGLE_EDGE
    if p == 2:
        return ClusterType.TWO_STAR if is_star(edges) else ClusterType.TWO_MATCHING
    if p == 3 and is_star(edges):
        return ClusterType.THREE_STAR
    return ClusterType.OTHER


def cluster_profile(edge_groups) -> dict:
    """Counts a (3-stars), b (2-stars), c (single edges), d (2-matchings),
    e (anything else) and q (edges inside the e-group); empty groups skipped."""
    counts = Counter()
    q = 0
    for grp in edge_groups:
        if not grp:
            continue
        t = classify_cluster(grp)
        counts[t] += 1
        if t is ClusterType.OTHER:
            q += len(grp)
    return {
        "a": counts[ClusterType.THREE_STAR],
        "b": counts[ClusterType.TWO_STAR],
        "c": counts[ClusterType.SINGLE_EDGE],
        "d": counts[ClusterType.TWO_MATCHING],
        "e": counts[ClusterType.OTHER],
        "q": q,
    }
