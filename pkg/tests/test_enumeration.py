import math

import networkx as nx
import pytest

from impurity_clustering.enumeration import enumerate_edge_sets, non_isolated_count, triangle_free_graphs
from impurity_clustering.errors import ResourceError
from impurity_clustering.graphs import is_triangle_free

# Class counts per edge count p = 1..5 for 3-bounded triangle-free graphs
# without isolated vertices, from an unpruned run over all p-subsets of the
# edges of K_{2p} deduplicated by networkx isomorphism tests.
BRUTE_FORCE_TF_DEG3 = [1, 2, 4, 8, 16]
# Graphs with p edges and no isolated vertices (OEIS A000664).
ALL_GRAPHS_BY_EDGES = [1, 2, 5, 11, 26, 68, 177]
# Triangle-free graphs on n vertices (OEIS A006785).
TRIANGLE_FREE_BY_VERTICES = [1, 1, 2, 3, 7, 14, 38, 107, 410]


@pytest.mark.parametrize("p", range(1, 6))
def test_counts_match_unpruned_run(p):
    assert sum(1 for _ in enumerate_edge_sets(p, 3, True)) == BRUTE_FORCE_TF_DEG3[p - 1]


@pytest.mark.parametrize("p", range(1, 7))
def test_unconstrained_counts(p):
    assert sum(1 for _ in enumerate_edge_sets(p, None, False)) == ALL_GRAPHS_BY_EDGES[p - 1]


@pytest.mark.parametrize("n", range(0, 8))
def test_triangle_free_vertex_counts(n):
    assert len(triangle_free_graphs(n)) == TRIANGLE_FREE_BY_VERTICES[n]


def test_small_catalogues():
    (g1, e1), = enumerate_edge_sets(1)
    assert e1 == ((0, 1),)
    p3 = [g for g, _ in enumerate_edge_sets(3)]
    degs = sorted(tuple(sorted(d for d in g.degrees() if d)) for g in p3)
    # 3-star, 3-path, 2-star plus an edge, 3-matching
    assert degs == [(1, 1, 1, 1, 1, 1), (1, 1, 1, 1, 2), (1, 1, 1, 3), (1, 1, 2, 2)]
    c4 = nx.cycle_graph(4)
    assert any(nx.is_isomorphic(nx.Graph(list(e)), c4) for _, e in enumerate_edge_sets(4))


@pytest.mark.parametrize("p", range(1, 7))
def test_representatives_satisfy_constraints_and_are_distinct(p):
    seen = []
    for g, edges in enumerate_edge_sets(p, 3, True):
        assert len(edges) == p and g.max_degree() <= 3 and is_triangle_free(g)
        assert non_isolated_count(g) == g.n_vertices
        G = nx.Graph(list(edges))
        assert not any(nx.is_isomorphic(G, H) for H in seen)
        seen.append(G)


def test_cap_and_override():
    with pytest.raises(ResourceError):
        list(enumerate_edge_sets(8))
    with pytest.raises(ValueError):
        list(enumerate_edge_sets(-1))
    assert sum(1 for _ in enumerate_edge_sets(8, 3, True, limit=8)) > 0


def test_mantel_on_generated_graphs():
    for g in triangle_free_graphs(7):
        assert g.m <= g.n_vertices ** 2 // 4
        assert non_isolated_count(g) >= math.isqrt(4 * g.m - 1) + 1 if g.m else True
