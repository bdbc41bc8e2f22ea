import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from impurity_clustering.core import Graph
from impurity_clustering.errors import InvariantError
from impurity_clustering import verify as V

LOG2_3 = math.log2(3)


def test_star_formula_examples():
    assert V.star_formula(1) == 2
    assert V.star_formula(2) == 6
    assert V.star_formula(3) == pytest.approx(6 + 3 * LOG2_3)


def test_star_impurity_report():
    r = V.verify_star_impurity(10)
    assert r.passed and r.min_slack >= -1e-9


def test_star_lower_bound_minima():
    r = V.verify_star_lower_bound(range(2, 6))
    assert r.passed
    minima = r.details["minima"]
    assert minima[2][0] == pytest.approx(6.0)
    assert minima[4][0] == pytest.approx(16.0)
    assert len(minima[4][1]) == 4 and Graph(4, minima[4][1]).degrees() == [2, 2, 2, 2]
    assert minima[5][0] >= 10 + 5 * math.log2(5) - 1e-9


def test_degree_entropies():
    r = V.verify_degree_entropies()
    assert r.passed
    assert r.details["p5_degrees_33211"] == pytest.approx(math.log2(5) + 0.8 - 0.6 * LOG2_3)


def test_three_edge_fact():
    r = V.verify_three_edge_fact()
    assert r.passed
    assert r.details["minimum"] == pytest.approx(2 + 6 * LOG2_3, abs=1e-9)
    assert r.details["achiever_is_path"]


def test_schur_and_mantel_and_convexity():
    assert V.verify_schur(trials=300, seed=3).passed
    r = V.verify_mantel(6)
    assert r.passed and r.details["graphs"] == 38
    assert V.verify_convexity_proposition(samples=300, seed=1).passed


@given(st.lists(st.floats(0.01, 1), min_size=2, max_size=6), st.floats(0, 1), st.data())
def test_t_transform_raises_entropy(q, lam, data):
    q = np.sort(np.array(q) / sum(q))[::-1]
    i, j = data.draw(st.tuples(st.integers(0, len(q) - 1), st.integers(0, len(q) - 1)))
    p = q.copy()
    p[i], p[j] = lam * q[i] + (1 - lam) * q[j], lam * q[j] + (1 - lam) * q[i]
    assert V.entropy(p) >= V.entropy(q) - 1e-12


def test_egroup_bounds_small():
    r = V.verify_egroup_bounds(e_max=2, q_max=7)
    assert r.passed
    assert r.details["cluster_minima"][3] == pytest.approx(2 + 6 * LOG2_3)
    assert r.details["cluster_minima"][4] == pytest.approx(16.0)


def test_cover_gap_and_gap_theorem():
    small = list(V.small_test_graphs(5))
    r = V.verify_cover_gap_proposition(graphs=small, pipelines=V.default_pipelines()[:2], samples=50)
    assert r.passed and r.details["exhaustive_cases"] > 0
    r = V.verify_gap_theorem_desk_scale(pipelines=V.default_pipelines()[:1], graphs=small)
    assert r.passed and r.details["min_ratio_opt_over_kappa"] > 1


def test_gap_constants():
    r = V.verify_gap_constants()
    assert r.passed
    assert r.details["eta_coefficient"] == pytest.approx(0.0613, abs=1e-4)


def test_tracker_reports_counterexample_and_recheck():
    tr = V._Tracker("x", "")
    tr.observe(0.5)
    tr.observe(-1.0, "bad", recheck=lambda: -1.0)
    rep = tr.report()
    assert not rep.passed and rep.counterexample == "bad" and rep.min_slack == -1.0
    assert "FAIL" in rep.line("cx.txt")
    tr = V._Tracker("y", "")
    with pytest.raises(InvariantError):
        tr.observe(-1.0, "bad", recheck=lambda: 0.0)


def test_report_invariant_small_negative_slack_passes():
    tr = V._Tracker("z", "")
    tr.observe(-5e-10, "noise")
    rep = tr.report()
    assert rep.passed and rep.min_slack >= -1e-9


def test_suites_cover_every_check():
    names = set(V.SUITES["all"])
    assert {"star_impurity", "schur", "mantel", "gap_theorem_desk_scale"} <= names
    reports = list(V.run_suite("stars", p_max=5))
    assert [r.name for r in reports] == list(V.SUITES["stars"])
    assert all(r.passed for r in reports)
