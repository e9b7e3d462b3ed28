import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugespace.compactify import (CompletenessSlackError, EvaluationDatum, ExhaustionChain, FunctionDict,
                                   LocatednessError, TailChain, TargetNotReachable, cauchy_from_evaluation,
                                   compose_dict, distance_dictionary, enumerate_ultrafilters,
                                   evaluate_all, evaluate_point, extend_map, extension_entries,
                                   infinity_profile, one_point_gauge, refine_datum, stone_cech_gauge,
                                   tail_datum, tails_toward, validate_datum)
from gaugespace.completion import CauchyPoint, find_representative, validate_cauchy_point
from gaugespace.covers import greedy_net
from gaugespace.gauges import Gauge
from gaugespace.metrics import (InputError, PointSet, ToleranceProfile, ball, coordinate_metric,
                                distance_to_set, restrict, truncate, validate_metric)
from gaugespace.relations import MapTable, topologically_equivalent


def integer_line(lo, hi, id="abs"):
    s = PointSet(range(lo, hi + 1), np.arange(lo, hi + 1.0))
    return Gauge([coordinate_metric(s, id=id)])


def window(lo, hi):
    return list(range(lo, hi + 1))


def min_cover(d, eps):
    D = d.values < eps
    for k in range(1, d.n + 1):
        for C in itertools.combinations(range(d.n), k):
            if D[list(C)].any(axis=0).all():
                return k


def point_xi(fdict, x, gauge=None):
    sc = gauge or stone_cech_gauge(fdict)
    return cauchy_from_evaluation(EvaluationDatum.point(fdict, x).midpoints(), sc, label=x)


# -- one-point gauge -------------------------------------------------------------

def test_one_point_line_values():
    g = integer_line(-10, 10)
    chain = ExhaustionChain(g.space, [window(-5, 5)])
    op = one_point_gauge(g, chain)
    dK = op["abs|K1"]
    assert dK(-10, 10) == 0.0
    assert dK(0, 10) == 6.0
    for eps in (1.0, 3.0, 6.0):
        assert ball(dK, 0, eps) == ball(g["abs"], 0, eps)
    xi = infinity_profile(g, chain, op)
    assert xi["abs|K1"][g.space.index(0)] == 6.0
    assert xi["abs|K1"][g.space.index(8)] == 0.0
    assert validate_cauchy_point(xi, 0).valid
    assert find_representative(xi, 0) == -10


def test_one_point_chain_closure_and_dominance():
    g = integer_line(-12, 12)
    chain = ExhaustionChain(g.space, [window(-3, 3), window(-6, 6), window(-9, 9)])
    op = one_point_gauge(g, chain)
    assert op.ids == ("abs|K1", "abs|K2", "abs|K3")
    for a in range(3):
        for b in range(a, 3):
            assert (op[f"abs|K{b + 1}"].values >= op[f"abs|K{a + 1}"].values).all()
    xi = infinity_profile(g, chain, op)
    outer = set(chain.complement(2))
    assert {p for p in g.space.ids if xi.stacked().max(axis=0)[g.space.index(p)] == 0} == outer


def test_chain_errors():
    s = PointSet(range(4))
    for bad in ([], [[]], [[0, 1], [0]], [[0, 1, 2, 3]], [[9]]):
        with pytest.raises(InputError):
            ExhaustionChain(s, bad)


# -- Stone-Čech gauge --------------------------------------------------------------

def clamp_line():
    xs = np.array([0, 0.5, 1, 2, 3])
    s = PointSet(range(5), xs)
    return s, FunctionDict(s, {"phi": np.minimum(np.abs(xs), 1)})


def test_stone_cech_single_entry():
    s, fd = clamp_line()
    g = stone_cech_gauge(fd)
    assert g.ids == ("phi",)
    assert g["phi"](0, 1) == 0.5
    assert g["phi"](3, 4) == 0.0


def test_stacking_is_entrywise_max():
    rng = np.random.default_rng(3)
    s = PointSet(range(9))
    fd = FunctionDict(s, {"a": rng.random(9), "b": rng.random(9), "c": rng.random(9)}).with_stack("ab", ["a", "b"])
    g = stone_cech_gauge(fd)
    assert g.ids == ("a", "b", "c", "ab", "all")
    assert np.array_equal(g["ab"].values, np.maximum(g["a"].values, g["b"].values))
    assert np.array_equal(g["all"].values, np.maximum(g["ab"].values, g["c"].values))
    for m in g.members:
        assert validate_metric(m.values).valid
    assert g.dominance[g.ids.index("a"), g.ids.index("ab")]
    assert not g.dominance[g.ids.index("c"), g.ids.index("ab")]


def test_dictionary_errors():
    s = PointSet(range(2))
    with pytest.raises(InputError):
        FunctionDict(s, {"a": [0, 2]})
    with pytest.raises(InputError):
        FunctionDict(s, {"a": [0]})
    with pytest.raises(InputError):
        FunctionDict(s, {})
    with pytest.raises(InputError):
        FunctionDict(s, {"a": [0, 1]}, {"a": ["a"]})
    with pytest.raises(InputError):
        FunctionDict(s, {"a": [0, 1]}, {"s": ["z"]})


def test_distance_dictionary_equivalence():
    g = integer_line(0, 7)
    fd = FunctionDict(g.space, distance_dictionary(g, clamp=1))
    tol = ToleranceProfile(0, (2.0, 1.0, 0.5))
    assert topologically_equivalent(g, stone_cech_gauge(fd), tol)
    flat = FunctionDict(g.space, {"const": np.zeros(8)})
    assert not topologically_equivalent(g, stone_cech_gauge(flat), tol)
    for m in stone_cech_gauge(fd).members:
        assert m.values.max() <= 1.0


# -- evaluation -----------------------------------------------------------------

def test_evaluate_hand_built_bracket():
    s = PointSet("pq")
    fd = FunctionDict(s, {"phi": [0.1, 0.5]})
    xi = CauchyPoint(stone_cech_gauge(fd), {"phi": [0.2, 0.2]})
    ev = evaluate_point(xi, "phi", ToleranceProfile(0.2, (1.0, 0.5)))
    assert ev.value == pytest.approx(0.3)
    assert ev.brackets[-1] == (0.2, 0.1, 0.5)


def test_evaluate_represented_and_round_trip():
    s, fd = clamp_line()
    fd = fd.with_entries({"half": [0.0, 0.25, 0.5, 0.75, 1.0]})
    tol = ToleranceProfile(0, (0.5, 0.1))
    for x in s.ids:
        xi = point_xi(fd, x)
        vals = evaluate_all(xi, tol)
        assert vals == {k: float(fd[k][s.index(x)]) for k in fd.ids}
        again = cauchy_from_evaluation(vals, xi.gauge)
        assert all(np.array_equal(again[m.id], xi[m.id]) for m in xi.gauge.members)


def test_evaluation_locatedness_failures():
    s = PointSet(range(3))
    fd = FunctionDict(s, {"zero": [0, 0, 0]})
    with pytest.raises(LocatednessError) as e:
        cauchy_from_evaluation({"zero": 1.0}, stone_cech_gauge(fd))
    assert e.value.family == ("zero",)
    xi = CauchyPoint(stone_cech_gauge(fd), {"zero": [0.5, 0.5, 0.5]})
    with pytest.raises(LocatednessError) as e:
        evaluate_point(xi, "zero", ToleranceProfile(0.1, (1.0,)))
    assert e.value.eps == 0.1


def test_brackets_shrink_with_eps():
    rng = np.random.default_rng(8)
    s = PointSet(range(30))
    vals = rng.random(30)
    vals[7] = 0.4
    fd = FunctionDict(s, {"f": vals})
    xi = CauchyPoint(stone_cech_gauge(fd), {"f": np.abs(fd["f"] - 0.4)})
    br = evaluate_point(xi, "f", ToleranceProfile(0.0, (0.5, 0.3, 0.1, 0.05))).brackets
    for (e1, a1, b1), (e2, a2, b2) in zip(br, br[1:]):
        assert e2 < e1 and a1 <= a2 <= b2 <= b1
        assert b2 - a2 <= 2 * e2


# -- evaluation data ------------------------------------------------------------

def test_validate_datum_examples():
    s = PointSet(range(5))
    phi = np.array([0.3, 0.4, 0.5, 0.6, 0.7])
    fd = FunctionDict(s, {"phi": phi, "co": 1 - phi})
    assert validate_datum(EvaluationDatum.point(fd, 2), fd).witness == 2
    assert validate_datum(EvaluationDatum.full(fd), fd).valid
    v = validate_datum(EvaluationDatum({"phi": (0, 0.1), "co": (0, 0.1)}), fd)
    assert not v.valid and v.family == ("co",)
    # best point is phi = co = 0.5, at distance 0.4 from both intervals
    assert validate_datum(EvaluationDatum({"phi": (0, 0.1), "co": (0, 0.1)}), fd, slack=0.4).witness == 2
    assert not validate_datum(EvaluationDatum({"phi": (0, 0.1), "co": (0, 0.1)}), fd, slack=0.39).valid


def test_refine_examples():
    s = PointSet("ab")
    fd = FunctionDict(s, {"phi": [0.2, 0.8]})
    assert refine_datum(EvaluationDatum.full(fd), fd)["phi"] == (0.2, 0.2)
    J = EvaluationDatum.point(fd, "b")
    assert refine_datum(J, fd) == J
    coarse = refine_datum(EvaluationDatum.full(fd), fd, width_tol=0.3)
    assert coarse["phi"] == (0.0, 0.25)
    with pytest.raises(InputError):
        refine_datum(EvaluationDatum({"phi": (0.4, 0.6)}), fd)
    with pytest.raises(InputError):
        refine_datum(EvaluationDatum.full(fd), fd, width_tol=0, slack=0.1)


def test_tail_examples():
    xs = np.arange(1, 101)
    s = PointSet(range(1, 101), xs.astype(float))
    fd = FunctionDict(s, {"inv": np.minimum(1, 1 / xs)})
    chain = TailChain(s, [[x for x in s.ids if x > z] for z in (0, 50, 90, 99)])
    assert tail_datum(chain, fd)["inv"] == (0.01, 0.01)

    xs = np.arange(0, 10001) / 100
    s = PointSet(range(len(xs)), xs)
    fd = FunctionDict(s, {"wave": (1 + np.sin(xs)) / 2})
    chain = TailChain(s, [[i for i in s.ids if xs[i] > z] for z in (0, 50, 80)])
    lo, hi = tail_datum(chain, fd)["wave"]
    assert lo < 0.01 and hi > 0.99

    pts = [(i, j) for j in (0, 1) for i in range(20)]
    s = PointSet([f"{i},{j}" for i, j in pts], np.array(pts, dtype=float))
    fd = FunctionDict(s, {"y": [float(j) for _, j in pts]})
    tails = [[[f"{i},{j}" for i in range(20) if i > z] for z in (5, 10, 15)] for j in (0, 1)]
    J0, J1 = (tail_datum(TailChain(s, t), fd) for t in tails)
    assert J0["y"] == (0.0, 0.0) and J1["y"] == (1.0, 1.0)


def test_tail_chain_errors():
    s = PointSet(range(3))
    with pytest.raises(InputError):
        TailChain(s, [[0, 1], [0, 1]])
    with pytest.raises(InputError):
        TailChain(s, [[0], []])


# -- extension ------------------------------------------------------------------------

def identity_setup(n=8):
    g = integer_line(0, n - 1)
    gY = Gauge([truncate(g["abs"], 1.0, id="t")])
    ident = MapTable(g.space, g.space, {x: x for x in g.space.ids})
    fd = FunctionDict(g.space, extension_entries(ident, gY))
    return ident, gY, fd


def test_extend_identity_at_represented_points():
    ident, gY, fd = identity_setup()
    sc = stone_cech_gauge(fd)
    for x in ident.domain.ids:
        assert extend_map(ident, gY, point_xi(fd, x, sc)) == x


def test_extend_needs_entries_and_slack():
    ident, gY, fd = identity_setup()
    bare = FunctionDict(ident.domain, {"f": np.zeros(8)})
    with pytest.raises(InputError, match="extension entry"):
        extend_map(ident, gY, point_xi(bare, 0), 0)
    # a datum refined only to width 0.3 leaves the target profile unresolved
    sc = stone_cech_gauge(fd)
    J = refine_datum(EvaluationDatum.full(fd), fd, width_tol=0.3)
    xi = cauchy_from_evaluation(J.midpoints(), sc, slack=0.15)
    with pytest.raises((CompletenessSlackError, TargetNotReachable, InputError)):
        extend_map(ident, gY, xi, 0)


def test_tails_toward_round_trip():
    ident, gY, fd = identity_setup(12)
    sc = stone_cech_gauge(fd)
    chain = tails_toward(ident, gY["t"], 5, [2, 1, 0.5])
    J = refine_datum(tail_datum(chain, fd), fd)
    xi = cauchy_from_evaluation(J.midpoints(), sc)
    assert extend_map(ident, gY, xi) == 5
    with pytest.raises(TargetNotReachable):
        tails_toward(ident, gY["t"], 5, [0.0])


def test_compose_dict():
    s, fd = clamp_line()
    same = compose_dict(fd, lambda t: t, "phi", id="idphi")
    assert np.array_equal(same["idphi"], fd["phi"])
    sq = compose_dict(fd, lambda t: t * t, "phi")
    tol = ToleranceProfile(0, (0.5,))
    for x in s.ids:
        xi = point_xi(sq, x)
        assert evaluate_point(xi, "psi(phi)", tol).value == evaluate_point(xi, "phi", tol).value ** 2
    table = {v: 1 - v for v in fd["phi"].tolist()}
    assert compose_dict(fd, table, "phi", id="flip")["flip"].tolist() == [1, 0.5, 0, 0, 0]
    with pytest.raises(InputError):
        compose_dict(fd, {0.0: 1.0}, "phi")


# -- ultrafilters -------------------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ultrafilters_are_principal(n):
    us = enumerate_ultrafilters(n)
    assert sorted(u.principal_point for u in us) == list(range(1, n + 1))
    assert all(u.is_ultrafilter() for u in us)


def test_ultrafilter_size_limit():
    with pytest.raises(InputError):
        enumerate_ultrafilters(5)


# -- properties -------------------------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_one_point_ball_and_cover_properties(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, 13))
    xs = np.sort(rng.random(n) * 10)
    s = PointSet(range(n), xs)
    g = Gauge([coordinate_metric(s, id="d")])
    cut = sorted(rng.choice(np.arange(1, n - 1), 2, replace=False))
    K = list(range(cut[0], cut[1] + 1))
    chain = ExhaustionChain(s, [K])
    dK = one_point_gauge(g, chain)["d|K1"]
    to_out = distance_to_set(g["d"], chain.complement(0))
    for eps in (2.0, 1.0, 0.5, 0.2):
        # the +1 bound is about minimum covers; greedy sizes can overshoot it
        assert min_cover(dK, eps) <= min_cover(restrict(g["d"], K), eps) + 1
        assert min_cover(dK, eps) <= len(greedy_net(dK, eps))
        for i in np.nonzero(to_out >= eps)[0]:
            assert ball(dK, i, eps) == ball(g["d"], i, eps)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_refinement_nested_and_valid(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(2, 10)), int(rng.integers(1, 6))
    s = PointSet(range(n))
    fd = FunctionDict(s, {f"f{j}": rng.integers(0, 5, n) / 4 for j in range(m)})
    x = int(rng.integers(n))
    J = EvaluationDatum({k: (max(0.0, v[x] - rng.random() / 2), min(1.0, v[x] + rng.random() / 2))
                         for k, v in fd.entries.items()})
    out = refine_datum(J, fd)
    assert J.contains(out) and set(out.widths().values()) == {0.0}
    xi = cauchy_from_evaluation(out.midpoints(), stone_cech_gauge(fd))
    assert validate_cauchy_point(xi, 0).valid
    mid = refine_datum(J, fd, width_tol=0.2)
    assert J.contains(mid) and mid.contains(out)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_extension_agrees_and_is_order_stable(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 10))
    X = PointSet(range(n))
    Y = PointSet(range(6), np.arange(6) / 2)
    gY = Gauge([truncate(coordinate_metric(Y, id="e"), 1.0, id="t")])
    gmap = MapTable.from_indices(X, Y, rng.integers(0, 6, n))
    fd = FunctionDict(X, extension_entries(gmap, gY))
    sc = stone_cech_gauge(fd)
    perm = list(rng.permutation(Y.ids))
    for x in X.ids:
        xi = point_xi(fd, x, sc)
        y1 = extend_map(gmap, gY, xi)
        y2 = extend_map(gmap, gY, xi, order=perm)
        assert gY["t"](y1, gmap(x)) == 0 and gY["t"](y1, y2) == 0
