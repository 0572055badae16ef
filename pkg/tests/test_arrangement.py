import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from arrkpi.arrangement import (
    Arrangement,
    EmptyRegionError,
    NotAChamberError,
    bounded_fans,
    build_dual_complex,
    enumerate_fans,
    fan_leq,
    local_arrangement,
    separation_distance,
)
from arrkpi.exactgeom import Hyperplane, sign_vector
from arrkpi.families import family_H, family_K, reflection_arrangement
from arrkpi.posetlab import FinitePoset, is_partial_order, order_complex

from _oracles import brute_force_covectors

H = Hyperplane.make


def two_lines():
    return Arrangement.build(2, [((1, 0), 0), ((0, 1), 0)])


def dims(fans):
    out = {}
    for f in fans:
        out[f.dim] = out.get(f.dim, 0) + 1
    return out


@pytest.mark.parametrize(
    "arr, total, by_dim",
    [
        (two_lines(), 9, {2: 4, 1: 4, 0: 1}),
        (reflection_arrangement("skewedA", 2), 13, {2: 6, 1: 6, 0: 1}),
        (reflection_arrangement("B", 2), 17, {2: 8, 1: 8, 0: 1}),
    ],
)
def test_fan_counts(arr, total, by_dim):
    fans = enumerate_fans(arr)
    assert len(fans) == total
    assert dims(fans) == by_dim


def test_fans_match_brute_force_on_reflection_arrangements():
    for arr in (reflection_arrangement("B", 2), reflection_arrangement("D", 3)):
        rows = [(h.normal, h.offset) for h in arr.hyperplanes]
        got = sorted(f.covector for f in enumerate_fans(arr))
        assert got == sorted(brute_force_covectors(rows, arr.region))


def test_empty_arrangement_single_fan():
    fans = enumerate_fans(Arrangement.build(2, []))
    assert len(fans) == 1 and fans[0].dim == 2 and not fans[0].bounded


def test_region_without_chamber():
    a = Arrangement.build(1, [((1,), 0)], [(0, 0)])
    with pytest.raises(EmptyRegionError):
        enumerate_fans(a)


def test_fan_leq_examples():
    dc = build_dual_complex(reflection_arrangement("B", 2))
    origin = dc.vertices()[0]
    assert all(fan_leq(origin, c) for c in dc.chambers)
    c1, c2 = dc.chambers[:2]
    assert not fan_leq(c1, c2) and not fan_leq(c2, c1)
    assert fan_leq((1, 0), (1, 1))
    assert not fan_leq((1, 0), (-1, 1))


def test_separation_examples():
    assert separation_distance((1, 1), (-1, -1)) == 2
    assert separation_distance((1, 1), (1, -1)) == 1
    dc = build_dual_complex(reflection_arrangement("B", 2))
    for c in dc.chambers:
        anti = tuple(-s for s in c.covector)
        assert separation_distance(c, dc.fan(anti)) == 4
        assert dc.graph_distance(c, anti) == 4
    with pytest.raises(NotAChamberError):
        separation_distance((1, 0), (1, 1))


def test_gate_examples():
    dc = build_dual_complex(two_lines())
    assert dc.gate((-1, -1), (1, 0)).covector == (1, -1)
    for c in dc.chambers:
        assert dc.gate(c, c) == c
    dcb = build_dual_complex(reflection_arrangement("B", 2))
    origin = dcb.vertices()[0]
    for c in dcb.chambers:
        assert dcb.gate(c, origin) == c


def test_project_face_examples():
    dc = build_dual_complex(reflection_arrangement("B", 2))
    rays = [f for f in dc.fans if f.dim == 1]
    origin = dc.vertices()[0]
    for e in rays:
        assert dc.project_face(e, e) == e
        assert dc.project_face(origin, e) == e
    # hyperplanes are x1, x2, x1+x2, x1-x2; the rays on the positive axes
    # are perpendicular and their projection collapses to one chamber
    e = next(f for f in rays if f.witness[1] == 0 and f.witness[0] > 0)
    f = next(f for f in rays if f.witness[0] == 0 and f.witness[1] > 0)
    p = dc.project_face(e, f)
    assert p.dim == 2
    assert dc.face_of[p.covector] == {dc.gate(v, f).covector for v in dc.face_of[e.covector]}


def test_bounded_fans_examples():
    b = bounded_fans(reflection_arrangement("B", 3))
    assert len(b) == 1 and b[0].dim == 0
    one = bounded_fans(Arrangement.build(1, [((1,), 0)]))
    assert len(one) == 1 and one[0].dim == 0
    hb = bounded_fans(family_H(1, 2))
    assert all(all(-3 <= x <= 3 for x in f.witness) for f in hb)
    # 3x3 grid of squares; the two diagonals halve the four corner squares
    # and quarter the centre one
    assert sum(1 for f in hb if f.dim == 2) == 16
    assert sum((-1) ** f.dim for f in hb) == 1


def _lp_bounded(cov, hs, n):
    # the closure of a nonempty cell is bounded iff every coordinate is
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for s, h in zip(cov, hs):
        a = [float(x) for x in h.normal]
        if s == 0:
            A_eq.append(a)
            b_eq.append(float(h.offset))
        else:
            A_ub.append([-s * x for x in a])
            b_ub.append(-s * float(h.offset))
    for i in range(n):
        for sgn in (1, -1):
            c = [0.0] * n
            c[i] = sgn
            res = linprog(
                c,
                A_ub=np.array(A_ub) if A_ub else None,
                b_ub=b_ub or None,
                A_eq=np.array(A_eq) if A_eq else None,
                b_eq=b_eq or None,
                bounds=[(None, None)] * n,
                method="highs",
            )
            if res.status == 3:
                return False
    return True


def test_local_arrangement_examples():
    k = family_K(1, 2, [(-1, 1), (-1, 1)])
    loc = local_arrangement(k, (0, 0))
    assert set(loc.hyperplanes) == {H((1, 0)), H((0, 1)), H((1, -1))}
    assert loc.is_central()
    loc = local_arrangement(k, (Fraction(1, 2), Fraction(1, 2)))
    assert set(loc.hyperplanes) == {H((1, -1)), H((1, 1))}
    assert len(local_arrangement(k, (Fraction(1, 3), Fraction(1, 7)))) == 0


def test_json_round_trip():
    a = family_H(1, 2)
    assert Arrangement.from_json(a.to_json()) == a


rows2 = st.lists(
    st.tuples(
        st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any),
        st.integers(-2, 2),
    ),
    min_size=1,
    max_size=4,
)


def _random_arrangement(rows):
    return Arrangement.build(2, rows, [(-3, 3), (-3, 3)])


@settings(max_examples=25)
@given(rows2)
def test_enumeration_matches_lp_brute_force(rows):
    a = _random_arrangement(rows)
    fans = enumerate_fans(a)
    hs = a.hyperplanes
    want = brute_force_covectors([(h.normal, h.offset) for h in hs], a.region)
    assert sorted(f.covector for f in fans) == sorted(want)
    for f in fans:
        assert sign_vector(hs, f.witness) == f.covector
        zeros = [h for s, h in zip(f.covector, hs) if s == 0]
        assert f.dim == (2 if not zeros else f.support.dim)
        assert f.bounded == _lp_bounded(f.covector, hs, 2)


@settings(max_examples=25)
@given(rows2)
def test_separation_is_graph_distance_and_gates_minimize(rows):
    dc = build_dual_complex(_random_arrangement(rows))
    for c1, c2 in itertools.combinations(dc.chambers, 2):
        assert separation_distance(c1, c2) == dc.graph_distance(c1, c2)
    for f in dc.fans:
        verts = dc.face_of[f.covector]
        assert verts
        for c in dc.chambers:
            d = {v: separation_distance(c.covector, v) for v in verts}
            best = min(d.values())
            winners = [v for v, x in d.items() if x == best]
            assert winners == [dc.gate(c, f).covector]


@settings(max_examples=15)
@given(rows2)
def test_fan_order_and_projection_idempotence(rows):
    dc = build_dual_complex(_random_arrangement(rows))
    p = FinitePoset.from_pairs(range(len(dc.fans)), dc.leq_pairs())
    assert is_partial_order(p.leq).ok
    for e, f in itertools.product(dc.fans, repeat=2):
        pe = dc.project_face(e, f)
        assert dc.project_face(pe, f) == pe
        assert fan_leq(f, pe)


@pytest.mark.parametrize(
    "arr",
    [two_lines(), reflection_arrangement("B", 2), Arrangement.build(2, [((1, 0), 0), ((1, 0), 1)], [(-2, 2)] * 2)],
)
def test_fan_poset_order_complex_is_contractible(arr):
    dc = build_dual_complex(arr)
    p = FinitePoset.from_pairs(range(len(dc.fans)), dc.leq_pairs())
    assert order_complex(p).euler_characteristic() == 1
