"""Hard-instance pipeline from 4-regular graphs to binary edge vectors.

    G' (4-regular) --half cut + double subdivision--> H (max degree 4, triangle-free)
      --split degree-4 vertices into paths a-b-c--> G (max degree 3, triangle-free)
      --edge incidence vectors--> U

Vertex numbering is fixed: in H the vertices of G' keep their ids and the
subdivision vertices of the j-th subdivided edge (u, v), u < v, are n + 2j
(next to u) and n + 2j + 1 (next to v). R2 walks H's vertices in order and
gives a split vertex three consecutive ids a, b, c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Clustering, Graph, Instance, clustering_impurity, edge_key
from .errors import DomainError, InvariantError, ParseError
from .graphs import (
    classify_cluster,
    ClusterType,
    incidence_vectors,
    is_bipartite,
    is_minimal_cover,
    is_regular,
    is_vertex_cover,
)
from .io import fmt, format_graph, format_instance, parse_graph, parse_instance

LOG2_3 = math.log2(3)


@dataclass(frozen=True)
class R1Map:
    g_prime: Graph
    cut_set: tuple
    h: Graph
    paths: dict  # subdivided edge (u, v) of G' -> (u', v') in H, u' adjacent to u

    @property
    def subdivided(self) -> tuple:
        return tuple(sorted(self.paths))


@dataclass(frozen=True)
class R2Map:
    h: Graph
    g: Graph
    split: dict  # degree-4 vertex of H -> (a, b, c) in G
    vertex_map: tuple  # H vertex -> G vertex, -1 for split vertices

    def side(self, v: int, w: int) -> int:
        """G vertex that carries H-edge (v, w) at v's end."""
        if v not in self.split:
            return self.vertex_map[v]
        a, _, c = self.split[v]
        first_two = sorted(self.h.neighbors(v))[:2]
        return a if w in first_two else c


@dataclass(frozen=True)
class ReductionTrace:
    r1: R1Map
    r2: R2Map

    @property
    def g_prime(self) -> Graph:
        return self.r1.g_prime

    @property
    def cut_set(self) -> tuple:
        return self.r1.cut_set

    @property
    def h(self) -> Graph:
        return self.r1.h

    @property
    def g(self) -> Graph:
        return self.r2.g

    @property
    def n(self) -> int:
        return self.g_prime.n_vertices

    def triple(self, v: int) -> tuple:
        """(v_a, v_b, v_c) in G for a vertex v of G'."""
        return self.r2.split[v]

    def path_in_g(self, e) -> tuple:
        """(u', v') in G for a subdivided edge e = (u, v) of G'."""
        pu, pv = self.r1.paths[edge_key(e)]
        return self.r2.vertex_map[pu], self.r2.vertex_map[pv]

    def path_ends_in_g(self, e) -> tuple:
        """(u_side, u', v', v_side): the G path replacing subdivided edge (u, v)."""
        u, v = edge_key(e)
        pu, pv = self.r1.paths[(u, v)]
        return self.r2.side(u, pu), self.r2.vertex_map[pu], self.r2.vertex_map[pv], self.r2.side(v, pv)


@dataclass(frozen=True)
class HardInstance:
    instance: Instance
    k: int
    kappa: float
    epsilon: float
    eta: float
    trace: ReductionTrace


def kappa_value(k: int, n_vectors: int) -> float:
    """Impurity of a k-clustering into 2-stars and 3-stars of n_vectors edges."""
    return 6 * k + 3 * (n_vectors - 2 * k) * LOG2_3


def eta_value(epsilon: float) -> float:
    return (1.25 - 0.75 * LOG2_3) * epsilon / (6 + 3 * LOG2_3)


def half_cut(g_prime: Graph, seed: int = 0) -> tuple:
    """Exactly m/2 edges of a locally maximal cut of a 4-regular graph.

    Starts from a seeded random bipartition and flips any vertex with fewer
    cut than uncut edges. At a local optimum every vertex has at least two of
    its four edges cut, so the cut holds at least m/2 edges; the first m/2 in
    sorted order are kept.
    """
    if g_prime.n_vertices == 0 or not is_regular(g_prime, 4):
        raise DomainError("half_cut needs a 4-regular graph")
    n = g_prime.n_vertices
    rng = np.random.default_rng(seed)
    side = rng.integers(0, 2, size=n)
    adj = g_prime.adjacency
    improved = True
    while improved:
        improved = False
        for v in range(n):
            cut = sum(side[w] != side[v] for w in adj[v])
            if 2 * cut < len(adj[v]):
                side[v] ^= 1
                improved = True
    cut_edges = [e for e in g_prime.edges if side[e[0]] != side[e[1]]]
    half = g_prime.m // 2
    if len(cut_edges) < half:
        raise InvariantError("local search produced a cut below m/2")
    return tuple(cut_edges[:half])


def reduce_r1(g_prime: Graph, cut) -> R1Map:
    """Double-subdivide every edge of g_prime outside ``cut``."""
    cut = tuple(sorted(edge_key(e) for e in cut))
    if not set(cut) <= g_prime.edge_set:
        raise DomainError("cut contains edges not in the graph")
    if not is_bipartite(g_prime.n_vertices, cut):
        raise DomainError("cut edges do not form a bipartite graph")
    n = g_prime.n_vertices
    cut_set = set(cut)
    edges = list(cut)
    paths = {}
    nxt = n
    for u, v in g_prime.edges:
        if (u, v) in cut_set:
            continue
        pu, pv = nxt, nxt + 1
        nxt += 2
        paths[(u, v)] = (pu, pv)
        edges += [(u, pu), (pu, pv), (pv, v)]
    return R1Map(g_prime, cut, Graph(nxt, tuple(edges)), paths)


def reduce_r2(h: Graph) -> R2Map:
    """Replace each degree-4 vertex by a path a-b-c; a takes the two
    lowest-id neighbours, c the other two."""
    if h.max_degree() > 4:
        raise DomainError("reduce_r2 needs maximum degree <= 4")
    split = {}
    vertex_map = []
    nxt = 0
    for v in range(h.n_vertices):
        if h.degree(v) == 4:
            split[v] = (nxt, nxt + 1, nxt + 2)
            vertex_map.append(-1)
            nxt += 3
        else:
            vertex_map.append(nxt)
            nxt += 1
    r2 = R2Map(h, Graph(0, ()), split, tuple(vertex_map))
    edges = []
    for a, b, c in split.values():
        edges += [(a, b), (b, c)]
    for v, w in h.edges:
        edges.append((r2.side(v, w), r2.side(w, v)))
    return R2Map(h, Graph(nxt, tuple(edges)), split, tuple(vertex_map))


def reduce_r3(g: Graph) -> Instance:
    return incidence_vectors(g)


def build_trace(g_prime: Graph, seed: int = 0, cut=None) -> ReductionTrace:
    if cut is None:
        cut = half_cut(g_prime, seed)
    r1 = reduce_r1(g_prime, cut)
    return ReductionTrace(r1, reduce_r2(r1.h))


def generate_hard_instance(g_prime: Graph, k: int, epsilon: float, seed: int = 0) -> HardInstance:
    if not is_regular(g_prime, 4):
        raise DomainError("generate_hard_instance needs a 4-regular graph")
    if k < 1:
        raise DomainError("k must be positive")
    if epsilon < 0:
        raise DomainError("epsilon must be nonnegative")
    trace = build_trace(g_prime, seed)
    U = reduce_r3(trace.g)
    return HardInstance(U, int(k), kappa_value(k, U.n), float(epsilon), eta_value(epsilon), trace)


def _r1(trace) -> R1Map:
    return trace.r1 if isinstance(trace, ReductionTrace) else trace


def _r2(trace) -> R2Map:
    return trace.r2 if isinstance(trace, ReductionTrace) else trace


def lift_cover_r1(trace, a_prime) -> frozenset:
    """Cover of H of size |A'| + n: A' plus v' when u is in A', else u'."""
    r1 = _r1(trace)
    a_prime = set(a_prime)
    if not is_vertex_cover(r1.g_prime, a_prime):
        raise DomainError("not a vertex cover of G'")
    out = set(a_prime)
    for (u, _v), (pu, pv) in r1.paths.items():
        out.add(pv if u in a_prime else pu)
    return frozenset(out)


def project_cover_r1(trace, a_h) -> frozenset:
    """Cover of G' from a cover of H. Where both u', v' are taken they are
    swapped for {u, v'}; then the original vertices are kept. For a minimum
    cover of H the result has size |A_H| - n."""
    r1 = _r1(trace)
    s = set(a_h)
    if not is_vertex_cover(r1.h, s):
        raise DomainError("not a vertex cover of H")
    for (u, _v), (pu, pv) in r1.paths.items():
        if pu in s and pv in s:
            s -= {pu, pv}
            s |= {u, pv}
    n = r1.g_prime.n_vertices
    return frozenset(x for x in s if x < n)


def lift_cover_r2(trace, c_h) -> frozenset:
    """Cover of G of size |C_H| + (number of degree-4 vertices)."""
    r2 = _r2(trace)
    c_h = set(c_h)
    if not is_vertex_cover(r2.h, c_h):
        raise DomainError("not a vertex cover of H")
    out = set()
    for v in range(r2.h.n_vertices):
        if v in r2.split:
            a, b, c = r2.split[v]
            out |= {a, c} if v in c_h else {b}
        elif v in c_h:
            out.add(r2.vertex_map[v])
    return frozenset(out)


def project_cover_r2(trace, c) -> frozenset:
    """Cover of H: a split vertex is taken iff at least two of its path vertices are."""
    r2 = _r2(trace)
    c = set(c)
    if not is_vertex_cover(r2.g, c):
        raise DomainError("not a vertex cover of G")
    out = set()
    for v in range(r2.h.n_vertices):
        if v in r2.split:
            if len(c & set(r2.split[v])) >= 2:
                out.add(v)
        elif r2.vertex_map[v] in c:
            out.add(v)
    return frozenset(out)


def satisfies_split_property(trace: ReductionTrace, s) -> bool:
    """Each triple meets the cover in exactly {v_a, v_c} or exactly {v_b}."""
    s = set(s)
    for v in range(trace.n):
        a, b, c = trace.triple(v)
        if (s & {a, b, c}) not in ({a, c}, {b}):
            return False
    return True


def satisfies_path_property(trace: ReductionTrace, s) -> bool:
    """Exactly one of u', v' is in the cover for each subdivided edge."""
    s = set(s)
    for e in trace.r1.subdivided:
        pu, pv = trace.path_in_g(e)
        if (pu in s) == (pv in s):
            return False
    return True


def is_normalized_cover(trace: ReductionTrace, s) -> bool:
    return is_vertex_cover(trace.g, s) and satisfies_split_property(trace, s) and satisfies_path_property(trace, s)


def normalize_minimal_cover(trace: ReductionTrace, s) -> frozenset:
    """Same-size cover of G with the split and path properties.

    Local swaps: a cover holding v_b and one of v_a, v_c trades v_b for the
    other; a cover holding both u' and v' trades v' for v. Swaps can make a
    vertex redundant (e.g. all of v_a, v_b, v_c taken), in which case it is
    dropped and the size is restored at the end by switching {v_b} triples to
    {v_a, v_c}. Any cover with both properties is minimal.
    """
    g = trace.g
    s0 = set(s)
    if not is_vertex_cover(g, s0):
        raise DomainError("not a vertex cover of G")
    if not is_minimal_cover(g, s0):
        raise DomainError("cover is not minimal: some vertex can be removed")
    n = trace.n
    if len(s0) > 3 * n:
        raise DomainError(f"cover size {len(s0)} exceeds 3n = {3 * n}; no 2/3-star clustering has that many groups")
    S = set(s0)
    deficit = 0
    changed = True
    while changed:
        changed = False
        for v in range(n):
            a, b, c = trace.triple(v)
            if b not in S:
                continue
            if a in S and c in S:
                S.discard(b)
                deficit += 1
                changed = True
            elif a in S:
                S.discard(b)
                S.add(c)
                changed = True
            elif c in S:
                S.discard(b)
                S.add(a)
                changed = True
        for e in trace.r1.subdivided:
            u_side, pu, pv, v_side = trace.path_ends_in_g(e)
            if pu in S and pv in S:
                if v_side not in S:
                    S.discard(pv)
                    S.add(v_side)
                elif u_side not in S:
                    S.discard(pu)
                    S.add(u_side)
                else:
                    S.discard(pv)
                    deficit += 1
                changed = True
    for v in range(n):
        if deficit == 0:
            break
        a, b, c = trace.triple(v)
        if S & {a, b, c} == {b}:
            S.discard(b)
            S |= {a, c}
            deficit -= 1
    if deficit or len(S) != len(s0) or not is_normalized_cover(trace, S) or not is_minimal_cover(g, S):
        raise InvariantError("cover normalization failed")
    return frozenset(S)


def _star_sets(trace: ReductionTrace, s) -> dict:
    """Centre -> list of G edges, following the 2/3-star construction."""
    s = set(s)
    if not is_normalized_cover(trace, s):
        raise DomainError("star decomposition needs a cover with the split and path properties")
    n = trace.n
    triple_vertices = {x for v in range(n) for x in trace.triple(v)}
    S1 = s & triple_vertices

    # G1: G with the subdivisions undone. Collapsed edges remember their path.
    collapsed = {}
    g1_edges = [e for e in trace.g.edges if e[0] in triple_vertices and e[1] in triple_vertices]
    for e in trace.r1.subdivided:
        u_side, pu, pv, v_side = trace.path_ends_in_g(e)
        key = edge_key((u_side, v_side))
        collapsed[key] = (u_side, pu, pv, v_side)
        g1_edges.append(key)
    g1_edges.sort()

    D1 = {v: [] for v in sorted(S1)}
    E1 = []
    for x, y in g1_edges:
        if x in S1 and y in S1:
            E1.append((x, y))
        elif x in S1:
            D1[x].append((x, y))
        elif y in S1:
            D1[y].append((x, y))
        else:
            raise InvariantError(f"G1 edge {(x, y)} is uncovered")
    if any(len(d) == 0 for d in D1.values()):
        raise InvariantError("a cover vertex has no edge to a non-cover vertex in G1")

    remaining = list(E1)
    progress = True
    while progress:
        progress = False
        for e in list(remaining):
            x, y = e
            if len(D1[y]) == 2:
                D1[x].append(e)
            elif len(D1[x]) == 2:
                D1[y].append(e)
            else:
                continue
            remaining.remove(e)
            progress = True

    # Leftover edges must form disjoint cycles; orient each cycle.
    res_adj = {}
    for x, y in remaining:
        res_adj.setdefault(x, []).append((x, y))
        res_adj.setdefault(y, []).append((x, y))
    for v, inc in res_adj.items():
        if len(inc) != 2 or len(D1[v]) != 1:
            raise InvariantError(f"residual graph is not a union of cycles at vertex {v}")
    done = set()
    for start in sorted(res_adj):
        if start in done:
            continue
        v, e = start, res_adj[start][0]
        while v not in done:
            done.add(v)
            D1[v].append(e)
            w = e[0] if e[1] == v else e[1]
            e = res_adj[w][0] if res_adj[w][1] == e else res_adj[w][1]
            v = w
        if v != start:
            raise InvariantError("residual walk did not close a cycle")
    if any(not 2 <= len(d) <= 3 for d in D1.values()):
        raise InvariantError("G1 star sizes outside {2, 3}")

    # Lift back over the subdivided paths.
    D = {}
    for v, star in D1.items():
        D[v] = []
        for e in star:
            if e not in collapsed:
                D[v].append(e)
                continue
            u_side, pu, pv, v_side = collapsed[e]
            if v == u_side:
                D[v].append(edge_key((u_side, pu)))
                D[pv] = [edge_key((pv, v_side)), edge_key((pu, pv))]
            else:
                D[v].append(edge_key((v_side, pv)))
                D[pu] = [edge_key((pu, u_side)), edge_key((pu, pv))]
    return D


def star_decomposition(trace: ReductionTrace, s) -> Clustering:
    """k-clustering of the edge vectors of G into 2-stars and 3-stars, where
    k = |s| and s is a cover with the split and path properties. Groups are
    numbered by increasing centre id; labels follow G's edge order."""
    D = _star_sets(trace, s)
    g = trace.g
    labels = [-1] * g.m
    for label, centre in enumerate(sorted(D)):
        for e in D[centre]:
            i = g.edge_index[e]
            if labels[i] != -1:
                raise InvariantError(f"edge {e} assigned twice")
            labels[i] = label
    if -1 in labels:
        raise InvariantError("some edge was not assigned to a star")
    k = len(D)
    if k != len(set(s)):
        raise InvariantError(f"{k} stars for a cover of size {len(set(s))}")
    clustering = Clustering(tuple(labels), k)
    for grp in clustering.groups():
        t = classify_cluster([g.edges[i] for i in grp])
        if t not in (ClusterType.TWO_STAR, ClusterType.THREE_STAR):
            raise InvariantError(f"group {grp} is {t.value}, not a 2-star or 3-star")
    value = clustering_impurity(reduce_r3(g), clustering)
    if abs(value - kappa_value(k, g.m)) > 1e-9:
        raise InvariantError(f"decomposition impurity {value!r} differs from kappa {kappa_value(k, g.m)!r}")
    return clustering


# Hard-instance bundles -------------------------------------------------------

def format_certificate(hi: HardInstance) -> str:
    return f"k {hi.k}\nkappa {fmt(hi.kappa)}\nepsilon {fmt(hi.epsilon)}\neta {fmt(hi.eta)}\n"


def format_trace_maps(trace: ReductionTrace) -> str:
    lines = []
    for v in range(trace.n):
        a, b, c = trace.triple(v)
        lines.append(f"{v} -> {a} {b} {c}")
    for e in trace.r1.subdivided:
        pu, pv = trace.path_in_g(e)
        lines.append(f"{e[0]} {e[1]} -> {pu} {pv}")
    return "\n".join(lines) + "\n"


def write_bundle(hi: HardInstance, directory) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    (out / "instance.txt").write_text(format_instance(hi.instance))
    (out / "graph_gprime.txt").write_text(format_graph(hi.trace.g_prime))
    (out / "graph_h.txt").write_text(format_graph(hi.trace.h))
    (out / "graph_g.txt").write_text(format_graph(hi.trace.g))
    (out / "certificate.txt").write_text(format_certificate(hi))
    (out / "trace.txt").write_text(format_trace_maps(hi.trace))
    return out


def _parse_certificate(text: str, path: str) -> dict:
    vals = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks:
            continue
        if len(toks) != 2 or toks[0] not in ("k", "kappa", "epsilon", "eta"):
            raise ParseError("expected '<k|kappa|epsilon|eta> <value>'", no, path)
        try:
            vals[toks[0]] = int(toks[1]) if toks[0] == "k" else float(toks[1])
        except ValueError:
            raise ParseError(f"bad number {toks[1]!r}", no, path) from None
    missing = {"k", "kappa", "epsilon", "eta"} - set(vals)
    if missing:
        raise ParseError(f"certificate lacks {sorted(missing)}", None, path)
    return vals


def read_bundle(directory) -> HardInstance:
    """Load a bundle and rebuild its trace, checking every file agrees."""
    d = Path(directory)

    def read(name):
        p = d / name
        if not p.exists():
            raise ParseError("missing bundle file", None, str(p))
        return p.read_text(), str(p)

    g_prime = parse_graph(*read("graph_gprime.txt"))
    text, tpath = read("trace.txt")
    subdivided = set()
    triples = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks:
            continue
        if "->" not in toks:
            raise ParseError("expected a '->' record", no, tpath)
        i = toks.index("->")
        try:
            lhs = [int(t) for t in toks[:i]]
            rhs = [int(t) for t in toks[i + 1:]]
        except ValueError:
            raise ParseError("non-integer vertex id", no, tpath) from None
        if len(lhs) == 1 and len(rhs) == 3:
            triples[lhs[0]] = tuple(rhs)
        elif len(lhs) == 2 and len(rhs) == 2:
            subdivided.add(edge_key(lhs))
        else:
            raise ParseError("expected 'v -> va vb vc' or 'u v -> u_ v_'", no, tpath)
    cut = [e for e in g_prime.edges if e not in subdivided]
    try:
        trace = build_trace(g_prime, cut=cut)
    except DomainError as exc:
        raise ParseError(f"trace is inconsistent with G': {exc}", None, tpath) from None
    if trace.r2.split != triples or set(trace.r1.paths) != subdivided:
        raise ParseError("trace maps do not match the rebuilt reduction", None, tpath)
    if format_trace_maps(trace) != format_trace_maps_from(text):
        raise ParseError("trace path ids do not match the rebuilt reduction", None, tpath)
    for name, graph in (("graph_h.txt", trace.h), ("graph_g.txt", trace.g)):
        if parse_graph(*read(name)) != graph:
            raise ParseError("graph does not match the rebuilt reduction", None, str(d / name))
    inst = parse_instance(*read("instance.txt"))
    if inst != reduce_r3(trace.g):
        raise ParseError("instance does not match the edge vectors of G", None, str(d / "instance.txt"))
    cert = _parse_certificate(*read("certificate.txt"))
    return HardInstance(inst, cert["k"], cert["kappa"], cert["epsilon"], cert["eta"], trace)


def format_trace_maps_from(text: str) -> str:
    return "\n".join(" ".join(line.split()) for line in text.splitlines() if line.split()) + "\n"
