import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arrkpi.arrangement import Arrangement
from arrkpi.exactgeom import Hyperplane
from arrkpi.families import (
    AdmissibleType,
    NotAdmissible,
    arrangement_vertices,
    classify_local,
    family_H,
    family_K,
    h_prediction,
    parity_prediction,
    reflection_arrangement,
    type_hyperplanes,
    verify_admissible,
)

H = Hyperplane.make
F = Fraction


def hset(*rows):
    return {H(a, c) for a, c in rows}


def test_reflection_arrangements():
    assert len(reflection_arrangement("B", 2)) == 4
    d3 = reflection_arrangement("D", 3)
    want = set()
    for i, j in itertools.combinations(range(3), 2):
        for s in (1, -1):
            v = [0, 0, 0]
            v[i], v[j] = 1, s
            want.add(H(v))
    assert set(d3.hyperplanes) == want
    assert set(reflection_arrangement("skewedA", 2).hyperplanes) == hset(((1, 0), 0), ((0, 1), 0), ((1, -1), 0))
    for bad in (("D", 1), ("B", 0), ("E", 3)):
        with pytest.raises(ValueError):
            reflection_arrangement(*bad)


def test_family_H_counts():
    assert len(family_H(1, 2)) == 10
    assert len(family_H(1, 3)) == 18
    levels = sorted(h.offset for h in family_H(2, 2).hyperplanes if h.normal == (1, 0))
    assert levels == [-5, -3, -1, 1, 3, 5]
    for k, n in [(2, 3), (3, 4)]:
        assert len(family_H(k, n)) == n * (2 * k + 2) + n * (n - 1)


def _k_oracle(k, n, box):
    """Lines of each congruence class whose range over the box hits the level."""
    out = set()
    rng = range(-20, 21)
    for i in range(n):
        lo, hi = box[i]
        out |= {H([int(t == i) for t in range(n)], c) for c in rng if lo <= c <= hi}
    for i, j in itertools.combinations(range(n), 2):
        (li, hi_), (lj, hj) = box[i], box[j]
        for c in rng:
            v = [0] * n
            v[i] = 1
            if c % (2 * k) == 1 % (2 * k) and li + lj <= c <= hi_ + hj:
                v[j] = 1
                out.add(H(v, c))
            if c % (2 * k) == 0 and li - hj <= c <= hi_ - lj:
                v[j] = -1
                out.add(H(v, c))
    return out


def test_family_K_on_unit_square():
    a = family_K(1, 2, [(-1, 1), (-1, 1)])
    hs = set(a.hyperplanes)
    coord = {h for h in hs if 0 in h.normal}
    plus = {h.offset for h in hs if h.normal == (1, 1)}
    minus = {h.offset for h in hs if h.normal == (1, -1)}
    assert len(coord) == 6
    assert plus == {-1, 1}
    assert minus == {-2, 0, 2}
    assert len(hs) == 11


@pytest.mark.parametrize("k, n, r", [(1, 2, 2), (2, 2, 4), (1, 3, 2), (3, 2, F(7, 2))])
def test_family_K_matches_congruence_oracle(k, n, r):
    box = [(-r, r)] * n
    assert set(family_K(k, n, box).hyperplanes) == _k_oracle(k, n, box)


def test_family_K_diagonal_spacing():
    a = family_K(2, 2, [(-6, 6), (-6, 6)])
    assert all(h.offset % 4 == 0 for h in a.hyperplanes if h.normal == (1, -1))
    assert all(h.offset % 4 == 1 for h in a.hyperplanes if h.normal == (1, 1))


def test_family_K_empty_box():
    a = family_K(1, 2, [(1, 0), (0, 1)])
    assert len(a) == 0


def test_classify_examples():
    t = classify_local(Arrangement.build(2, [((1, 0), 0), ((0, 1), 0), ((1, -1), 0)]))
    (b,) = t.factors
    assert (b.kind, b.mask) == ("skewedA", (1, 1))
    t = classify_local(Arrangement.build(2, [((1, 0), 0), ((0, 1), 0), ((1, 1), 0)]))
    (b,) = t.factors
    assert (b.kind, b.mask) == ("skewedA", (1, -1))
    t = classify_local(Arrangement.build(2, [((1, -1), 0), ((1, 1), 0)]))
    (b,) = t.factors
    assert b.kind == "D" and b.coords == (0, 1)


def test_classify_products_and_failures():
    t = classify_local(Arrangement.build(3, [((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((0, 1, 1), 0), ((0, 1, -1), 0)]))
    assert [b.kind for b in t.factors] == ["skewedA", "B"]
    assert not classify_local(Arrangement.build(2, [((1, -1), 0)]))
    assert not classify_local(Arrangement.build(3, [((1, 1, 1), 0), ((1, 0, 0), 0), ((0, 1, 0), 0)]))
    assert not classify_local(Arrangement.build(2, [((1, 0), 0)]))
    assert isinstance(classify_local(Arrangement.build(2, [((1, 0), 1), ((0, 1), 0)])), NotAdmissible)


def test_verify_admissible_vertex_examples():
    k = family_K(1, 2, [(-2, 2), (-2, 2)])
    rep = {r.vertex: r.result for r in verify_admissible(k).vertices}
    (b,) = rep[(0, 1)].factors
    assert (b.kind, b.mask) == ("skewedA", (1, -1))
    (b,) = rep[(F(1, 2), F(1, 2))].factors
    assert b.kind == "D"
    h = {r.vertex: r.result for r in verify_admissible(family_H(1, 2)).vertices}
    (b,) = h[(1, 1)].factors
    assert (b.kind, b.mask) == ("skewedA", (1, 1))


@pytest.mark.parametrize("k, n", [(1, 2), (1, 3), (2, 2)])
def test_H_admissible(k, n):
    rep = verify_admissible(family_H(k, n))
    assert rep.ok and rep.vertices


@pytest.mark.parametrize("k, n", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_K_admissible_with_parity_cases(k, n):
    rep = verify_admissible(family_K(k, n, [(-2 * k, 2 * k)] * n))
    assert rep.ok and rep.vertices
    for r in rep.vertices:
        assert r.result.kinds() == parity_prediction(r.vertex, k)


def test_window_must_lie_in_region():
    with pytest.raises(ValueError):
        verify_admissible(family_H(1, 2), window=[(-10, 10), (-1, 1)])
    rep = verify_admissible(family_H(1, 2), window=[(-2, 2), (-2, 2)])
    assert all(all(-2 < x < 2 for x in r.vertex) for r in rep.vertices)


def test_vertices_match_pairwise_intersections():
    a = family_H(1, 2)
    want = set()
    for g, h in itertools.combinations(a.hyperplanes, 2):
        (a1, a2), (b1, b2) = g.normal, h.normal
        det = a1 * b2 - a2 * b1
        if det:
            x = F(g.offset * b2 - a2 * h.offset, det)
            y = F(a1 * h.offset - g.offset * b1, det)
            if all(-4 < c < 4 for c in (x, y)):
                want.add((x, y))
    assert set(arrangement_vertices(a)) == want


blocks = st.lists(st.sampled_from(["skewedA", "B", "D"]), min_size=1, max_size=3)


@st.composite
def admissible(draw):
    kinds = draw(blocks)
    sizes = [draw(st.integers(2 if k == "D" else 1, 2)) for k in kinds]
    n = sum(sizes)
    perm = draw(st.permutations(range(n)))
    hs, start, spec = set(), 0, []
    for kind, m in zip(kinds, sizes):
        coords = tuple(sorted(perm[start:start + m]))
        mask = None
        if kind == "skewedA":
            mask = (1,) + tuple(draw(st.sampled_from((1, -1))) for _ in range(m - 1))
        hs |= type_hyperplanes(kind, coords, n, mask)
        spec.append((kind, coords, mask))
        start += m
    return n, hs, spec


@given(admissible(), st.data())
def test_classifier_recovers_blocks_and_is_mask_covariant(case, data):
    n, hs, spec = case
    t = classify_local(Arrangement.build(n, sorted(hs)))
    assert isinstance(t, AdmissibleType)
    got = sorted((b.kind, b.coords, b.mask) for b in t.factors)
    # a skewedA block of size 1 and a B block of size 1 are the same thing
    norm = lambda k, c, m: (("B", c, None) if len(c) == 1 else (k, c, m))
    assert sorted(norm(*x) for x in got) == sorted(norm(*x) for x in spec)
    eps = [data.draw(st.sampled_from((1, -1))) for _ in range(n)]
    flipped = [Hyperplane.make([e * a for e, a in zip(eps, h.normal)], 0) for h in hs]
    t2 = classify_local(Arrangement.build(n, flipped))
    for b, b2 in zip(sorted(t.factors, key=lambda b: b.coords), sorted(t2.factors, key=lambda b: b.coords)):
        assert (b.kind, b.coords) == (b2.kind, b2.coords)
        if b.mask is not None:
            m = [eps[c] * s for c, s in zip(b.coords, b.mask)]
            m = [x * m[0] for x in m]
            assert tuple(m) == b2.mask


@given(admissible(), st.data())
def test_classifier_permutation_invariant(case, data):
    n, hs, _ = case
    perm = data.draw(st.permutations(range(n)))
    moved = []
    for h in hs:
        v = [0] * n
        for i, a in enumerate(h.normal):
            v[perm[i]] = a
        moved.append(Hyperplane.make(v, 0))
    t = classify_local(Arrangement.build(n, sorted(hs)))
    t2 = classify_local(Arrangement.build(n, sorted(moved)))
    sig = lambda t: sorted((b.kind, len(b.coords)) for b in t.factors)
    assert sig(t) == sig(t2)


@pytest.mark.parametrize("k, n", [(1, 2), (1, 3), (2, 3)])
def test_H_blocks_follow_absolute_values(k, n):
    rep = verify_admissible(family_H(k, n))
    assert rep.ok
    for r in rep.vertices:
        assert r.result.kinds() == h_prediction(r.vertex)


def test_h_prediction_examples():
    assert h_prediction((1, 1)) == (("skewedA", (0, 1)),)
    assert h_prediction((0, 0, 3)) == (("D", (0, 1)), ("skewedA", (2,)))
    with pytest.raises(ValueError):
        h_prediction((0, 1))
