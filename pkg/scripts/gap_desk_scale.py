"""Measure both sides of the impurity gap at desk scale.

Condition 1 on pipeline graphs: minimum cover -> star clustering of
impurity kappa. Condition 2 on small 3-bounded triangle-free graphs: the
exact optimum against kappa (1 + eta) when every cover exceeds k.
"""
import argparse
from dataclasses import dataclass

from impurity_clustering.graphs import exact_min_vertex_cover, incidence_vectors, min_vertex_cover_size, random_4_regular
from impurity_clustering.io import fmt
from impurity_clustering.reductions import (
    build_trace,
    eta_value,
    kappa_value,
    normalize_minimal_cover,
    reduce_r3,
    star_decomposition,
)
from impurity_clustering.core import clustering_impurity
from impurity_clustering.solvers import solve_exact
from impurity_clustering.verify import small_test_graphs


@dataclass
class Config:
    pipeline_sizes: tuple = (6, 8)
    seeds: tuple = (0, 1, 2)
    max_edges: int = 7


def condition_one(cfg: Config):
    print("# n seed |U| v* impurity kappa")
    for n in cfg.pipeline_sizes:
        for seed in cfg.seeds:
            t = build_trace(random_4_regular(n, seed), seed)
            cover = exact_min_vertex_cover(t.g)
            c = star_decomposition(t, normalize_minimal_cover(t, cover))
            U = reduce_r3(t.g)
            print(n, seed, U.n, len(cover), fmt(clustering_impurity(U, c)), fmt(kappa_value(len(cover), U.n)))


def condition_two(cfg: Config):
    print("# |U| k v* eps OPT kappa OPT/kappa 1+eta")
    worst = None
    for g in small_test_graphs(cfg.max_edges):
        vstar = min_vertex_cover_size(g)
        U = incidence_vectors(g)
        for k in range(-(-g.m // 3), vstar):
            eps = vstar / k - 1
            opt = solve_exact(U, k).objective
            kap = kappa_value(k, g.m)
            ratio = opt / kap
            if worst is None or ratio - (1 + eta_value(eps)) < worst[0]:
                worst = (ratio - (1 + eta_value(eps)), g.edges, k)
            print(g.m, k, vstar, fmt(eps), fmt(opt), fmt(kap), fmt(ratio), fmt(1 + eta_value(eps)))
    print("# smallest margin OPT/kappa - (1+eta):", fmt(worst[0]), "at", worst[1], "k =", worst[2])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=Config.max_edges)
    cfg = Config(max_edges=ap.parse_args().max_edges)
    condition_one(cfg)
    condition_two(cfg)
