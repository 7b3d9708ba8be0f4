import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from graphdep.concentration import (
    BoundError,
    bound_reports,
    exp_tail,
    forest_bound,
    forest_denominator,
    graph_general_bound,
    graph_uniform_bound,
    janson_fractional_bound,
    mcdiarmid_bound,
    tightest_bound,
)
from graphdep.covers import chi_f_exact
from graphdep.graph import connected_components, cycle_graph, empty_graph, grid_graph, is_forest, make_graph, path_graph

from test_graph import graphs

coef = st.floats(0.0, 5.0, allow_nan=False)


@st.composite
def forests(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(1, n):
        parent = draw(st.integers(-1, v - 1))
        if parent >= 0:
            edges.append((parent, v))
    return make_graph(n, edges)


def test_mcdiarmid_examples():
    assert mcdiarmid_bound([1, 1], 1) == pytest.approx(math.exp(-1))
    assert mcdiarmid_bound([3, 4], 0) == 1.0
    assert mcdiarmid_bound([1] * 100, 10) == pytest.approx(math.exp(-2))
    assert mcdiarmid_bound([0, 0], 1) == 0.0


def test_janson_examples():
    assert janson_fractional_bound([1, 1], 1, 1) == pytest.approx(math.exp(-1), rel=1e-12)
    assert janson_fractional_bound([1, 1], 2, 1) == pytest.approx(0.606531, abs=1e-6)
    chi = chi_f_exact(cycle_graph(5)).value
    # 2 t^2 / (chi_f ||c||^2) = 8 / 12.5
    assert janson_fractional_bound([1] * 5, chi, 2) == pytest.approx(math.exp(-0.64), rel=1e-9)
    with pytest.raises(BoundError):
        janson_fractional_bound([1], 0.5, 1)


def test_forest_examples():
    assert forest_bound(make_graph(2, [(0, 1)]), [1, 1], 1) == pytest.approx(math.exp(-2 / 5))
    with pytest.raises(BoundError):
        forest_bound(cycle_graph(3), [1, 1, 1], 1)


def test_general_and_uniform_examples():
    p, tp = graph_general_bound(make_graph(2, [(0, 1)]), [1, 2], 1, search="exact")
    assert p == pytest.approx(0.800737, abs=1e-6)
    assert graph_uniform_bound(cycle_graph(6), 1, 3) == pytest.approx(math.exp(-18 / 35))
    assert graph_uniform_bound(empty_graph(1), 1, 0.7) == pytest.approx(math.exp(-2 * 0.49))
    assert graph_uniform_bound(grid_graph(4), 1, 5) == pytest.approx(math.exp(-50 / 167))
    p, _ = graph_general_bound(empty_graph(6), [1] * 6, 2)
    assert p == pytest.approx(mcdiarmid_bound([1] * 6, 2), rel=1e-12)


def test_tightest_c6_prefers_janson():
    res = tightest_bound(cycle_graph(6), [1] * 6, 2)
    assert res.best == "janson_fractional"
    fams = {r.family for r in res.reports}
    assert "mcdiarmid" not in fams and "forest" not in fams


def test_tightest_edgeless_all_tie():
    res = tightest_bound(empty_graph(5), [1] * 5, 1)
    vals = {r.family: r.tail[0][1] for r in res.reports}
    assert set(vals) == {"mcdiarmid", "janson_fractional", "forest", "graph_general", "graph_uniform"}
    assert len({round(v, 14) for v in vals.values()}) == 1
    # ties go to the first family
    assert res.best == "mcdiarmid"


def test_reports_t_zero_row():
    for rep in bound_reports(cycle_graph(6), [1] * 6, [0.0, 1.0]):
        assert rep.tail[0] == (0.0, 1.0)


def test_chi_f_override_note():
    (rep,) = bound_reports(path_graph(3), [1] * 3, [1.0], ["janson_fractional"], chi_f=0.5)
    assert rep.parameters["chi_f"] == 0.5 and rep.notes


@given(forests())
def test_uniform_forest_denominator(g):
    k = len(connected_components(g))
    assert forest_denominator(g, [1.0] * g.n) == 4 * g.n - 3 * k
    assert forest_denominator(g, [2.0] * g.n) == pytest.approx((4 * g.n - 3 * k) * 4, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(forests(max_n=7), st.data())
def test_general_vs_forest(g, data):
    c = data.draw(st.lists(coef, min_size=g.n, max_size=g.n))
    t = 1.0
    pf = forest_bound(g, c, t)
    ph, _ = graph_general_bound(g, c, t, search="heuristic")
    pe, _ = graph_general_bound(g, c, t, search="exact")
    # heuristic partition of a forest is the identity partition
    assert ph == pytest.approx(pf, rel=1e-12)
    assert pe <= pf + 1e-15


@settings(max_examples=50, deadline=None)
@given(graphs(max_n=7), st.data())
def test_exact_bound_below_heuristic(g, data):
    c = data.draw(st.lists(coef, min_size=g.n, max_size=g.n))
    pe, _ = graph_general_bound(g, c, 1.3, search="exact")
    ph, _ = graph_general_bound(g, c, 1.3, search="heuristic")
    assert pe <= ph + 1e-15


@given(st.lists(st.floats(0.01, 5), min_size=1, max_size=10), st.floats(0.01, 10), st.floats(0.1, 10), st.floats(1, 5))
def test_scale_covariance(c, t, s, chi):
    assert mcdiarmid_bound([s * x for x in c], s * t) == pytest.approx(mcdiarmid_bound(c, t), rel=1e-9)
    assert janson_fractional_bound([s * x for x in c], chi, s * t) == pytest.approx(
        janson_fractional_bound(c, chi, t), rel=1e-9
    )


@given(st.lists(st.floats(0.01, 5), min_size=1, max_size=10), st.floats(0.01, 10), st.floats(0.01, 10))
def test_monotone_in_t(c, t1, t2):
    lo, hi = sorted((t1, t2))
    assume(hi > lo)
    p_lo, p_hi = mcdiarmid_bound(c, lo), mcdiarmid_bound(c, hi)
    assert 0 <= p_hi <= p_lo <= 1


@given(st.lists(st.floats(0, 5), min_size=1, max_size=8))
def test_janson_one_is_mcdiarmid(c):
    for t in (0.1, 1.0, 3.0):
        assert janson_fractional_bound(c, 1.0, t) == pytest.approx(mcdiarmid_bound(c, t), rel=1e-12)


@given(forests(max_n=7), st.data())
def test_adding_edge_grows_denominator(g, data):
    c = data.draw(st.lists(coef, min_size=g.n, max_size=g.n))
    comps = connected_components(g)
    assume(len(comps) >= 2)
    u, v = comps[0][0], comps[1][0]
    h = make_graph(g.n, list(g.edges) + [(u, v)])
    assert is_forest(h)
    assert forest_denominator(h, c) >= forest_denominator(g, c) - 1e-12


def test_exp_tail_edges():
    assert exp_tail(-1, 5) == 1.0
    assert exp_tail(1, 0) == 0.0
    assert exp_tail(1e6, 1) == 0.0
