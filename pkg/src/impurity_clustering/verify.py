"""Brute-force checks of the entropy bounds behind the hardness reduction.

Each check returns a VerificationReport whose ``min_slack`` is the smallest
margin observed (bound side minus claimed side; negative means violated).
Lower-bound checks fail below -1e-9; equality checks use slack = -|error|.
A violating edge set is re-evaluated through the incidence-vector path
before it is reported.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from .core import Graph, clustering_impurity, edge_set_impurity, entropy_impurity
from .enumeration import enumerate_edge_sets, non_isolated_count, triangle_free_graphs
from .errors import InvariantError, ResourceError
from .graphs import (
    ClusterType,
    classify_cluster,
    cluster_profile,
    complete_graph,
    exact_min_vertex_cover,
    incidence_vectors,
    is_star,
    min_vertex_cover_size,
    random_4_regular,
)
from .reductions import (
    LOG2_3,
    build_trace,
    eta_value,
    kappa_value,
    normalize_minimal_cover,
    star_decomposition,
)
from .solvers import count_partitions, enumerate_partitions, solve_exact

TOL = 1e-9


@dataclass
class VerificationReport:
    name: str
    parameters: str
    min_slack: float
    counterexample: object = None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    def line(self, counterexample_file=None) -> str:
        if self.passed:
            return f"{self.name} PASS slack={self.min_slack + 0.0:.12g}"
        return f"{self.name} FAIL {counterexample_file or self.counterexample!r}"


class _Tracker:
    def __init__(self, name, parameters):
        self.name = name
        self.parameters = parameters
        self.min_slack = math.inf
        self.counterexample = None
        self.details = {}
        self._t0 = time.perf_counter()

    def observe(self, slack, witness=None, recheck=None):
        if slack < self.min_slack:
            self.min_slack = slack
        if slack < -TOL and self.counterexample is None:
            if recheck is not None and recheck() >= -TOL:
                raise InvariantError(f"{self.name}: two impurity evaluations disagree on {witness!r}")
            self.counterexample = witness

    def report(self) -> VerificationReport:
        return VerificationReport(
            self.name, self.parameters, self.min_slack, self.counterexample, self.details,
            time.perf_counter() - self._t0,
        )


def star_formula(p: int) -> float:
    """Impurity of a p-star: 2p + p log2 p."""
    return 2 * p + p * math.log2(p) if p > 0 else 0.0


def star_graph(p: int) -> Graph:
    return Graph(p + 1, tuple((0, i) for i in range(1, p + 1)))


def vector_impurity(g: Graph, edges) -> float:
    """Impurity of the summed incidence vectors; independent of edge_set_impurity."""
    total = np.zeros(g.n_vertices)
    for u, v in edges:
        total[u] += 1
        total[v] += 1
    return entropy_impurity(total)


def entropy(dist) -> float:
    p = np.asarray(dist, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def verify_star_impurity(p_max: int = 10) -> VerificationReport:
    tr = _Tracker("star_impurity", f"p=1..{p_max}")
    for p in range(1, p_max + 1):
        g = star_graph(p)
        value = edge_set_impurity(g, g.edges)
        tr.observe(-abs(value - star_formula(p)), {"p": p, "value": value},
                   recheck=lambda g=g, p=p: -abs(vector_impurity(g, g.edges) - star_formula(p)))
    return tr.report()


# Degree distributions (counts over 2p) used as entropy floors for p = 4..8, with closed forms.
DEGREE_ENTROPIES = {
    "p4_degrees_2222": ([2, 2, 2, 2], 8, lambda: 2.0),
    "p5_degrees_33211": ([3, 3, 2, 1, 1], 10, lambda: math.log2(5) + 0.8 - 0.6 * LOG2_3),
    "p6_degrees_33222": ([3, 3, 2, 2, 2], 12, lambda: 1 + math.log2(6) / 2),
    "p6_degrees_333111": ([3, 3, 3, 1, 1, 1], 12, lambda: 2 + 0.25 * LOG2_3),
    "p7_degrees_333311": ([3, 3, 3, 3, 1, 1], 14, lambda: 1 + math.log2(7) - 6 / 7 * LOG2_3),
    "p8_degrees_333331": ([3, 3, 3, 3, 3, 1], 16, lambda: 4 - 15 / 16 * LOG2_3),
}


def verify_degree_entropies() -> VerificationReport:
    """Closed forms of the floor entropies, each >= 1 + log2(p)/2; for p >= 9 the
    cap of 3 on degrees alone gives the bound."""
    tr = _Tracker("degree_entropies", "cases 3-7")
    for name, (counts, total, closed) in DEGREE_ENTROPIES.items():
        h = entropy(np.array(counts) / total)
        p = total // 2
        tr.observe(-abs(h - closed()), (name, "closed form", h, closed()))
        tr.observe(h - (1 + math.log2(p) / 2), (name, "bound", h))
        tr.details[name] = h
    for p in range(9, 200):
        # degrees capped at 3 give H >= log2(2p/3) = 1 + log2(p/3)
        tr.observe(1 + math.log2(p / 3) - (1 + math.log2(p) / 2), ("degrees capped at 3", p))
    return tr.report()


def verify_star_lower_bound(p_range=range(2, 8), limit: int = 7) -> VerificationReport:
    """Every p-edge set from a 3-bounded triangle-free graph has impurity >= 2p + p log2 p."""
    p_range = list(p_range)
    tr = _Tracker("star_lower_bound", f"p in {p_range[0]}..{p_range[-1]}, max degree 3, triangle-free")
    minima = {}
    for p in p_range:
        best = None
        for g, edges in enumerate_edge_sets(p, 3, True, limit=limit):
            value = edge_set_impurity(g, edges)
            bound = star_formula(p)
            tr.observe(value - bound, {"p": p, "edges": edges},
                       recheck=lambda g=g, edges=edges, bound=bound: vector_impurity(g, edges) - bound)
            if best is None or value < best[0] - TOL:
                best = (value, edges)
        minima[p] = best
    tr.details["minima"] = minima
    return tr.report()


def verify_three_edge_fact() -> VerificationReport:
    """3-edge triangle-free sets that are not 3-stars have impurity >= 2 + 6 log2 3."""
    bound = 2 + 6 * LOG2_3
    tr = _Tracker("three_edge_fact", "3 edges, triangle-free, not a 3-star")
    best = None
    for g, edges in enumerate_edge_sets(3, None, True):
        if is_star(edges):
            continue
        value = edge_set_impurity(g, edges)
        tr.observe(value - bound, {"edges": edges},
                   recheck=lambda g=g, edges=edges: vector_impurity(g, edges) - bound)
        if best is None or value < best[0]:
            best = (value, edges)
    tr.details["minimum"] = best[0]
    tr.details["achiever"] = best[1]
    tr.details["achiever_is_path"] = _is_path(Graph(1 + max(max(e) for e in best[1]), best[1]))
    return tr.report()


def _is_path(g: Graph) -> bool:
    degs = sorted(d for d in g.degrees() if d > 0)
    return non_isolated_count(g) == g.m + 1 and degs == [1, 1] + [2] * (g.m - 1)


def _majorized_pair(rng, length):
    """(p, q) sorted non-increasing with p majorized by q, built from T-transforms of q."""
    q = np.sort(rng.dirichlet(np.ones(length) * rng.uniform(0.2, 2.0)))[::-1]
    if rng.random() < 0.2:
        q[rng.integers(1, length):] = 0
        q = q / q.sum()
    p = q.copy()
    for _ in range(rng.integers(1, 6)):
        i, j = sorted(rng.choice(length, size=2, replace=False))
        lam = rng.random()
        pi, pj = p[i], p[j]
        p[i], p[j] = lam * pi + (1 - lam) * pj, lam * pj + (1 - lam) * pi
    return np.sort(p)[::-1], q


def verify_schur(trials: int = 2000, seed: int = 0) -> VerificationReport:
    """If p, q are sorted and p's prefix sums never exceed q's, then H(p) >= H(q)."""
    rng = np.random.default_rng(seed)
    tr = _Tracker("schur", f"{trials} random majorization pairs, seed={seed}")
    cases = []
    for length in range(2, 7):
        uni = np.full(length, 1 / length)
        point = np.zeros(length)
        point[0] = 1
        other = np.sort(rng.dirichlet(np.ones(length)))[::-1]
        cases += [(uni, other), (other, point), (uni, point)]
    for _ in range(trials):
        cases.append(_majorized_pair(rng, int(rng.integers(2, 9))))
    for p, q in cases:
        if np.any(np.cumsum(p) > np.cumsum(q) + 1e-12):
            raise InvariantError("generated pair violates the majorization hypothesis")
        tr.observe(entropy(p) - entropy(q), {"p": p.tolist(), "q": q.tolist()})
    return tr.report()


def _ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def verify_mantel(n_max: int = 8) -> VerificationReport:
    """Triangle-free graphs with m edges touch at least ceil(sqrt(4m)) vertices."""
    tr = _Tracker("mantel", f"all triangle-free graphs on <= {n_max} vertices")
    graphs = triangle_free_graphs(n_max)
    for g in graphs:
        tr.observe(non_isolated_count(g) - _ceil_sqrt(4 * g.m), {"edges": g.edges})
    tr.details["graphs"] = len(graphs)
    return tr.report()


def verify_convexity_proposition(samples: int = 2000, seed: int = 0) -> VerificationReport:
    """n1 f(x) + n2 f(x+1) >= (n1+n2) f(xbar) for f(x) = 2x + x log2 x, x >= 2."""
    rng = np.random.default_rng(seed)
    tr = _Tracker("convexity_proposition", f"{samples} samples, x in 2..50, n1,n2 in 0..50")
    params = [(2, 1, 1), (2, 1, 0), (7, 3, 0)]
    params += [tuple(int(t) for t in (rng.integers(2, 51), rng.integers(1, 51), rng.integers(0, 51)))
               for _ in range(samples)]
    for x, n1, n2 in params:
        xbar = (n1 * x + n2 * (x + 1)) / (n1 + n2)
        lhs = n1 * star_formula(x) + n2 * star_formula(x + 1)
        rhs = (n1 + n2) * (2 * xbar + xbar * math.log2(xbar))
        tr.observe(lhs - rhs, {"x": x, "n1": n1, "n2": n2})
    return tr.report()


def _cluster_minima(p_max: int) -> dict:
    """Smallest impurity of a p-edge e-group cluster (not a 3-star), p = 3..p_max."""
    out = {}
    for p in range(3, p_max + 1):
        vals = [edge_set_impurity(g, edges) for g, edges in enumerate_edge_sets(p, 3, True, limit=p_max)
                if classify_cluster(edges) is ClusterType.OTHER]
        out[p] = min(vals)
    return out


def verify_egroup_bounds(e_max: int = 3, q_max: int = 9, cluster_max: int | None = None) -> VerificationReport:
    """Lower bounds on the total impurity of e clusters holding q edges.

    Each cluster has >= 3 edges and is not a 3-star. The sum is smallest when
    each cluster of size p is the cheapest such p-edge set, so every multiset
    of sizes is checked with per-size minima. Clusters larger than
    ``cluster_max`` edges (default q_max) are skipped.
    """
    if cluster_max is None:
        cluster_max = q_max
    tr = _Tracker("egroup_bounds", f"e<={e_max}, q<={q_max}, cluster sizes 3..{cluster_max}")
    minima = _cluster_minima(min(cluster_max, q_max))
    tr.details["cluster_minima"] = minima
    checked = 0
    for e in range(1, e_max + 1):
        for sizes in combinations_with_replacement(sorted(minima), e):
            q = sum(sizes)
            if q > q_max:
                continue
            total = sum(minima[p] for p in sizes)
            stated = 2 * q + (q / e) * math.log2(q / e)
            averaged = 2 * q + q * math.log2(q / e)
            tr.observe(total - stated, {"sizes": sizes, "bound": "2q + (q/e)log(q/e)"})
            tr.observe(total - averaged, {"sizes": sizes, "bound": "2q + q log(q/e)"})
            if q < 4 * e:
                small = 16 * (q - 3 * e) + (4 * e - q) * (2 + 6 * LOG2_3)
                tr.observe(total - small, {"sizes": sizes, "bound": "16(q-3e) + (4e-q)(2+6log3)"})
            checked += 1
    tr.details["multisets"] = checked
    return tr.report()


def _edge_groups(g: Graph, labels, k):
    groups = [[] for _ in range(k)]
    for i, a in enumerate(labels):
        groups[a].append(g.edges[i])
    return groups


def small_test_graphs(max_edges: int = 7):
    """Every 3-bounded triangle-free graph with 2..max_edges edges (one per class)."""
    for p in range(2, max_edges + 1):
        for g, _ in enumerate_edge_sets(p, 3, True):
            yield g


def _check_profile(tr, g, vstar, k, labels):
    eps = vstar / k - 1
    groups = _edge_groups(g, labels, k)
    pr = cluster_profile(groups)
    nonempty = sum(1 for grp in groups if grp)
    ident = (pr["a"] + pr["b"] + pr["c"] + pr["d"] + pr["e"] - nonempty,
             3 * pr["a"] + 2 * pr["b"] + pr["c"] + 2 * pr["d"] + pr["q"] - g.m)
    if ident != (0, 0):
        raise InvariantError(f"profile accounting broken for {labels}")
    wit = {"edges": g.edges, "k": k, "labels": tuple(labels)}
    tr.observe(pr["c"] + pr["d"] + pr["q"] - k * eps / 2, wit)
    tr.observe(pr["a"] + pr["b"] + pr["c"] + 2 * pr["d"] + pr["q"] - vstar, wit)


def default_pipelines():
    """K5 plus seeded random 4-regular graphs on 6 and 8 vertices."""
    return [(_k5(), 0), (random_4_regular(6, 1), 1), (random_4_regular(8, 2), 2), (random_4_regular(8, 3), 3)]


def verify_cover_gap_proposition(graphs=None, pipelines=None, max_clusterings: int = 200_000,
                                 samples: int = 200, seed: int = 0):
    """c + d + q >= k*eps/2 whenever every cover has size >= k(1 + eps).

    For each graph and each k below its cover number v*, eps is the largest
    value allowed (v*/k - 1). Small graphs are checked over every clustering
    into at most k groups. Pipeline graphs are far too large for that, so
    they get seeded random clusterings plus every merge of two groups of a
    star decomposition (k = v* - 1), the clusterings closest to the gap.
    Also checks the underlying count a + b + c + 2d + q >= v* and the
    accounting identities.
    """
    rng = np.random.default_rng(seed)
    graphs = list(small_test_graphs(6)) if graphs is None else list(graphs)
    pipelines = default_pipelines() if pipelines is None else list(pipelines)
    tr = _Tracker("cover_gap_proposition", f"{len(graphs)} small graphs, {len(pipelines)} pipelines")
    exhaustive = sampled = 0
    for g in graphs:
        vstar = min_vertex_cover_size(g)
        for k in range(1, vstar):
            if count_partitions(g.m, k) > max_clusterings:
                raise ResourceError(f"{count_partitions(g.m, k)} clusterings exceed {max_clusterings}")
            for labels in enumerate_partitions(g.m, k):
                _check_profile(tr, g, vstar, k, labels)
            exhaustive += 1
    for g_prime, pseed in pipelines:
        trace = build_trace(g_prime, pseed)
        g = trace.g
        cover = exact_min_vertex_cover(g)
        vstar = len(cover)
        stars = star_decomposition(trace, normalize_minimal_cover(trace, cover)).assignment
        for i in range(vstar):
            for j in range(i + 1, vstar):
                merged = [i if a == j else a for a in stars]
                merged = [a - 1 if a > j else a for a in merged]
                _check_profile(tr, g, vstar, vstar - 1, merged)
                sampled += 1
        for k in range(1, vstar):
            for _ in range(samples // vstar + 1):
                _check_profile(tr, g, vstar, k, rng.integers(0, k, size=g.m).tolist())
                sampled += 1
    tr.details.update(exhaustive_cases=exhaustive, sampled_clusterings=sampled)
    return tr.report()


def _k5() -> Graph:
    return complete_graph(5)


def verify_gap_constants() -> VerificationReport:
    tr = _Tracker("gap_constants", "eta(eps), kappa(k, |U|)")
    c = 1.25 - 0.75 * LOG2_3
    tr.observe(c, ("1.25 - 0.75 log2 3 > 0", c))
    eta02 = eta_value(0.2)
    tr.observe(-abs(float(f"{eta02:.3g}") - 1.14e-3), ("eta(0.2) to 3 significant digits", eta02))
    k39 = kappa_value(5, 12)
    tr.observe(-abs(k39 - (30 + 6 * LOG2_3)), ("kappa(5, 12)", k39))
    tr.details.update(eta_coefficient=c, eta_0_2=eta02, kappa_5_12=k39)
    return tr.report()


def verify_gap_theorem_desk_scale(pipelines=None, graphs=None, budget: int = 2_000_000):
    """Both sides of the gap at sizes where they can be decided.

    Condition 1 (cover <= k implies a clustering of impurity <= kappa) is
    checked on pipeline graphs: an exact minimum cover padded to size k is
    normalized and decomposed into stars, a clustering of impurity exactly
    kappa. Exact minimum impurity is out of reach for the 30+ vectors of a
    pipeline, so condition 2 (every cover >= k(1+eps) implies impurity
    >= kappa(1+eta)) is checked with the exact solver on small 3-bounded
    triangle-free graphs, for every k with |U| <= 3k below the cover number.
    """
    if pipelines is None:
        pipelines = default_pipelines()
    if graphs is None:
        graphs = list(small_test_graphs(7))
    tr = _Tracker("gap_theorem_desk_scale", f"{len(pipelines)} pipelines, {len(graphs)} small graphs")
    ratios = []
    for g_prime, seed in pipelines:
        trace = build_trace(g_prime, seed)
        cover = exact_min_vertex_cover(trace.g)
        vstar = len(cover)
        U = incidence_vectors(trace.g)
        for k in range(vstar, 3 * trace.n + 1):
            s = normalize_minimal_cover(trace, cover)
            s = _pad_normalized(trace, s, k)
            value = clustering_impurity(U, star_decomposition(trace, s))
            kap = kappa_value(k, U.n)
            tr.observe(kap - value, {"pipeline": g_prime.edges, "seed": seed, "k": k})
    for g in graphs:
        vstar = min_vertex_cover_size(g)
        U = incidence_vectors(g)
        for k in range(math.ceil(g.m / 3), vstar):
            eps = vstar / k - 1
            kap = kappa_value(k, g.m)
            opt = solve_exact(U, k, budget=budget).objective
            ratios.append(opt / kap)
            tr.observe(opt - kap * (1 + eta_value(eps)), {"edges": g.edges, "k": k, "eps": eps, "opt": opt})
    tr.details["min_ratio_opt_over_kappa"] = min(ratios) if ratios else None
    tr.details["condition2_cases"] = len(ratios)
    return tr.report()


def _pad_normalized(trace, s, k):
    """Grow a normalized cover to size k by switching {v_b} triples to {v_a, v_c}."""
    s = set(s)
    for v in range(trace.n):
        if len(s) >= k:
            break
        a, b, c = trace.triple(v)
        if s & {a, b, c} == {b}:
            s.discard(b)
            s |= {a, c}
    if len(s) != k:
        raise InvariantError(f"cannot pad cover to size {k}")
    return s


SUITES = {
    "stars": ("star_impurity", "degree_entropies", "star_lower_bound", "three_edge_fact"),
    "schur": ("schur",),
    "mantel": ("mantel",),
    "gap": ("gap_constants", "convexity_proposition", "egroup_bounds", "cover_gap_proposition",
            "gap_theorem_desk_scale"),
}
SUITES["all"] = tuple(name for key in ("stars", "schur", "mantel", "gap") for name in SUITES[key])


def run_suite(suite: str = "all", p_max: int = 7, seed: int = 0):
    """Yield reports for every check in ``suite``.

    ``p_max`` bounds the star checks; values above 9 get slow quickly.
    """
    checks = {
        "star_impurity": lambda: verify_star_impurity(max(p_max, 1)),
        "degree_entropies": verify_degree_entropies,
        "star_lower_bound": lambda: verify_star_lower_bound(range(2, p_max + 1), limit=max(p_max, 7)),
        "three_edge_fact": verify_three_edge_fact,
        "schur": lambda: verify_schur(seed=seed),
        "mantel": verify_mantel,
        "gap_constants": verify_gap_constants,
        "convexity_proposition": lambda: verify_convexity_proposition(seed=seed),
        "egroup_bounds": verify_egroup_bounds,
        "cover_gap_proposition": lambda: verify_cover_gap_proposition(seed=seed),
        "gap_theorem_desk_scale": verify_gap_theorem_desk_scale,
    }
    for name in SUITES[suite]:
        yield checks[name]()
