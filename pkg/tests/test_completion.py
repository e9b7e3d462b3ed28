import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from gaugespace.completion import (CauchyPoint, CauchyPointError, cauchy_from_partial, complete_space,
                                   deleted_point_profile, find_representative, hat_distance,
                                   profiles_from_generators, represent_point, validate_cauchy_point)
from gaugespace.gauges import Gauge, generate_gauge, is_separated
from gaugespace.metrics import (InputError, PointSet, coordinate_metric, coordinate_tables, discrete,
                                indiscrete)


def integer_line(lo, hi):
    s = PointSet(range(lo, hi + 1), np.arange(lo, hi + 1.0))
    return Gauge([coordinate_metric(s, id="abs")])


def random_gauge(rng, n, members):
    s = PointSet.from_coords(rng.random((n, members)) * 4)
    return generate_gauge(coordinate_tables(s)[:members])


def top_member(g):
    D = g.dominance
    return g.members[int(np.nonzero(D.all(axis=0))[0][0])].id


def same_order(a, b):
    """Pointwise comparabilities of the members agree on both gauges."""
    return np.array_equal(a.dominance, b.dominance)


# -- oracles -----------------------------------------------------------------

def test_represented_point_rows():
    g = integer_line(0, 2)
    z = represent_point(g, 1)
    assert z["abs"].tolist() == [1.0, 0.0, 1.0]
    assert validate_cauchy_point(z, 0).valid
    assert find_representative(z, 0) == 1
    assert hat_distance("abs", z, represent_point(g, 2)) == 1.0


def test_zero_profile_breaks_triangle_b():
    g = Gauge([discrete(PointSet("ab"))])
    r = validate_cauchy_point(CauchyPoint(g, {"discrete": [0, 0]}))
    assert not r.valid and r.first()[0] == "triangle B"


def test_deleted_profile_small_example():
    xi = deleted_point_profile(integer_line(0, 2), 1)
    assert xi.gauge.space.ids == (0, 2)
    assert xi["abs"].tolist() == [1.0, 1.0]


def test_deleted_profile_locatedness_threshold():
    # 0.1-separated sample; nearest neighbour of the deleted point is 0.1 away
    s = PointSet(range(11), np.arange(11) / 10)
    g = Gauge([coordinate_metric(s, id="abs")])
    xi = deleted_point_profile(g, 5)
    gap = float(xi["abs"].min())
    assert gap == pytest.approx(0.1)
    assert not validate_cauchy_point(xi, gap / 2).valid
    assert validate_cauchy_point(xi, gap).valid
    assert find_representative(xi, 0) is None
    assert find_representative(xi, gap) == 4


def test_planar_grid_deleted_origin():
    s = PointSet.from_coords([[i, j] for i in range(-3, 4) for j in range(-3, 4)])
    g = Gauge([coordinate_metric(s, id="e")])
    origin = s.ids[24]
    xi = deleted_point_profile(g, origin)
    rest = xi.gauge.space
    expected = np.hypot(*np.asarray(s.coords)[s.indices(rest.ids)].T)
    assert np.array_equal(xi["e"], expected)
    assert validate_cauchy_point(xi, 1.0).valid
    assert not validate_cauchy_point(xi, 0.5).valid


def test_hat_distance_between_deleted_points():
    amb = integer_line(0, 10)
    keep = [p for p in amb.space.ids if p not in (3, 7)]
    sub = amb.restricted(keep)
    a = deleted_point_profile(amb, 3, sub)
    b = deleted_point_profile(amb, 7, sub)
    assert hat_distance("abs", a, b) == 4.0
    assert hat_distance("abs", a, a) <= 2 * 1.0


def test_complete_integer_line_round_trip():
    amb = integer_line(0, 10)
    keep = [p for p in amb.space.ids if p not in (3, 7)]
    sub = amb.restricted(keep)
    cands = [deleted_point_profile(amb, y, sub) for y in (3, 7)]
    done = complete_space(sub, cands, slack=1.0)
    assert len(done.space) == 11 and done.adjoined == (3, 7)
    order = [done.embedding[p] for p in amb.space.ids]
    T = done.gauge["abs"].rows(done.space.indices(order))[:, done.space.indices(order)]
    assert np.array_equal(T, amb["abs"].values)


def test_complete_with_represented_candidates_is_isomorphic():
    rng = np.random.default_rng(4)
    g = random_gauge(rng, 9, 2)
    done = complete_space(g, [represent_point(g, z) for z in g.space.ids])
    assert done.adjoined == ()
    assert len(done.space) == len(g.space)
    for d in g.members:
        idx = done.space.indices([done.embedding[p] for p in g.space.ids])
        assert np.array_equal(done.gauge[d.id].values[np.ix_(idx, idx)], d.values)


def test_complete_indiscrete_collapses():
    done = complete_space(Gauge([indiscrete(PointSet(range(3)))]), [])
    assert len(done.space) == 1


def test_complete_rejects_invalid_candidate():
    g = Gauge([discrete(PointSet("ab"))])
    with pytest.raises(InputError, match="triangle B"):
        complete_space(g, [CauchyPoint(g, {"discrete": [0, 0]}, label="bad")])


def test_partial_full_domain_is_identity():
    rng = np.random.default_rng(5)
    g = random_gauge(rng, 8, 2)
    z = represent_point(g, g.space.ids[3])
    doms = {d.id: g.space.ids for d in g.members}
    out = cauchy_from_partial(g, doms, z.profiles)
    for d in g.members:
        assert np.array_equal(out[d.id], z[d.id])


def test_partial_four_point_toy():
    s = PointSet("abcd", [[0.0], [1.0], [3.0], [7.0]])
    g = Gauge([coordinate_metric(s, id="d")])
    out = cauchy_from_partial(g, {"d": ["b", "c"]}, {"d": [0.5, 1.5]}, slack=0.5)
    # min over a in {b, c} of |x - a| + v_a, worked by hand
    assert out["d"].tolist() == [1.5, 0.5, 1.5, 5.5]
    assert validate_cauchy_point(out, 0.5).valid


def test_partial_errors():
    s = PointSet("abc", [[0.0], [1.0], [2.0]])
    g = Gauge([coordinate_metric(s, id="d")])
    with pytest.raises(CauchyPointError, match="condition 1"):
        cauchy_from_partial(g, {"d": ["a", "c"]}, {"d": [0.0, 5.0]})
    with pytest.raises(CauchyPointError, match="condition 2"):
        cauchy_from_partial(g, {"d": ["a", "c"]}, {"d": [0.5, 0.5]})
    with pytest.raises(CauchyPointError, match="condition 3"):
        cauchy_from_partial(g, {"d": ["a", "c"]}, {"d": [1.0, 1.0]})
    with pytest.raises(InputError):
        cauchy_from_partial(g, {}, {})
    with pytest.raises(CauchyPointError, match="condition 4"):
        two = generate_gauge(coordinate_tables(PointSet.from_coords([[0, 0], [1, 2], [2, 1]])))
        doms = {"d0": ["0"], "d1": ["0"], "max(d0,d1)": ["1"]}
        cauchy_from_partial(two, doms, {"d0": [0.0], "d1": [0.0], "max(d0,d1)": [0.0]})


def test_missing_profile_and_mismatch():
    g = integer_line(0, 2)
    with pytest.raises(InputError):
        CauchyPoint(g, {})
    with pytest.raises(InputError):
        hat_distance("abs", represent_point(g, 0), represent_point(integer_line(0, 3), 0))


def test_generator_profiles_extend_by_max():
    s = PointSet.from_coords([[0, 0], [1, 3], [3, 1]])
    g = generate_gauge(coordinate_tables(s))
    prof = profiles_from_generators(g, {"d0": [0, 1, 3], "d1": [0, 3, 1]})
    assert prof["max(d0,d1)"].tolist() == [0.0, 3.0, 3.0]
    with pytest.raises(InputError):
        profiles_from_generators(g, {"d0": [0, 1, 3]})


# -- properties ----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_yoneda_and_hat_metric(seed):
    rng = np.random.default_rng(seed)
    amb = random_gauge(rng, int(rng.integers(4, 12)), int(rng.integers(1, 3)))
    ys = list(rng.choice(len(amb.space), 2, replace=False))
    ys = [amb.space.ids[i] for i in ys]
    sub = amb.restricted([p for p in amb.space.ids if p not in ys])
    pts = [represent_point(sub, z) for z in sub.space.ids[:3]] + \
          [deleted_point_profile(amb, y, sub) for y in ys]
    for d in sub.members:
        for z in sub.space.ids:
            zh = represent_point(sub, z)
            for xi in pts:
                assert abs(hat_distance(d.id, zh, xi) - xi[d.id][sub.space.index(z)]) <= 1e-12
        H = np.array([[hat_distance(d.id, a, b) for b in pts] for a in pts])
        assert np.array_equal(H, H.T)
        for i in range(len(pts)):
            for j in range(len(pts)):
                for k in range(len(pts)):
                    assert H[i, k] <= H[i, j] + H[j, k] + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_valid_points_are_monotone_and_complete_separated(seed):
    rng = np.random.default_rng(seed)
    amb = random_gauge(rng, int(rng.integers(4, 10)), 2)
    y = amb.space.ids[int(rng.integers(len(amb.space)))]
    sub = amb.restricted([p for p in amb.space.ids if p != y])
    # a comparability that only appears on the sample is not inherited by the profile
    assume(same_order(amb, sub))
    xi = deleted_point_profile(amb, y, sub)
    slack = float(max(xi[d.id].min() for d in sub.members))
    assert validate_cauchy_point(xi, slack).valid
    top = xi[top_member(sub)]
    assert all((xi[d.id] <= top).all() for d in sub.members)
    done = complete_space(sub, [xi], slack)
    assert is_separated(done.gauge, 0.0)
    assert len(done.space) == len(amb.space)
    order = [done.embedding[p] for p in amb.space.ids]
    idx = done.space.indices(order)
    for d in amb.members:
        assert np.abs(done.gauge[d.id].values[np.ix_(idx, idx)] - d.values).max() <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_partial_restriction_reconstructs(seed):
    rng = np.random.default_rng(seed)
    g = random_gauge(rng, int(rng.integers(3, 10)), 2)
    z = g.space.ids[int(rng.integers(len(g.space)))]
    zh = represent_point(g, z)
    doms, part = {}, {}
    for d in g.members:
        extra = [p for p in g.space.ids if rng.random() < 0.4]
        dom = [p for p in g.space.ids if p == z or p in extra]
        doms[d.id] = dom
        part[d.id] = zh[d.id][g.space.indices(dom)]
    # the top member's domain must sit inside both others
    top = top_member(g)
    doms[top] = [z]
    part[top] = zh[top][g.space.indices([z])]
    out = cauchy_from_partial(g, doms, part)
    for d in g.members:
        assert np.abs(out[d.id] - zh[d.id]).max() <= 1e-12
    assert validate_cauchy_point(out, 0).valid
