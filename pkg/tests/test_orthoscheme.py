import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arrkpi.orthoscheme import (
    cube_space,
    helly_check,
    linf,
    make_point,
    orthoscheme_space,
    string_distance,
)
from arrkpi.posetlab import FinitePoset, PosetError

F = Fraction


def chain(n):
    return FinitePoset.from_pairs(list(range(n + 1)), [(i, i + 1) for i in range(n)])


def test_chain_is_one_orthoscheme():
    sp = orthoscheme_space(chain(3))
    assert len(sp.simplices) == 1 and sp.rank == 3
    assert sp.local_distance(sp.vertex(0), sp.vertex(3)) == 1
    assert string_distance(sp, sp.vertex(0), sp.vertex(3), 2) == 1
    # vertex v_i sits at i ones: distances between vertices are all 1
    for i, j in itertools.combinations(range(4), 2):
        assert sp.local_distance(sp.vertex(i), sp.vertex(j)) == 1


def test_requires_minimum_and_grading():
    anti = FinitePoset(["a", "b"], [[1, 0], [0, 1]])
    with pytest.raises(PosetError):
        orthoscheme_space(anti)
    ungraded = FinitePoset.from_pairs(list("0abc1"), [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    with pytest.raises(PosetError):
        orthoscheme_space(ungraded)


def test_two_chains_glued():
    p = FinitePoset.from_pairs(["0", "a", "b", "1"], [(0, 1), (1, 3), (0, 2), (2, 3)])
    sp = orthoscheme_space(p)
    assert len(sp.simplices) == 2
    mid_a = make_point({1: 1})
    mid_b = make_point({2: 1})
    # a and b are not in a common simplex; the path runs through 0 or 1
    assert string_distance(sp, mid_a, mid_b, 3) == 1


def test_cube_corners():
    cs = cube_space(2)
    a = cs.from_ambient((1, 1))
    b = cs.from_ambient((-1, -1))
    assert string_distance(cs, a, b, 0) == 2
    assert string_distance(cs, a, b, 4) == 2


def test_level_monotone():
    cs = cube_space(2)
    rng = random.Random(3)
    for _ in range(5):
        x = [F(rng.randint(-8, 8), 8) for _ in range(2)]
        y = [F(rng.randint(-8, 8), 8) for _ in range(2)]
        a, b = cs.from_ambient(x), cs.from_ambient(y)
        d = [string_distance(cs, a, b, lv) for lv in (0, 1, 3)]
        assert d[0] >= d[1] >= d[2] >= linf(x, y)


coord = st.integers(-16, 16).map(lambda k: F(k, 16))


@given(st.lists(coord, min_size=3, max_size=3))
def test_barycentric_round_trip(x):
    cs = cube_space(3)
    p = cs.from_ambient(x)
    assert cs.to_ambient(p) == tuple(x)
    assert sum(w for _, w in p) == 1


@given(st.lists(coord, min_size=2, max_size=2), st.lists(coord, min_size=2, max_size=2))
def test_in_simplex_distance_is_ambient(x, y):
    cs = cube_space(2)
    a, b = cs.from_ambient(x), cs.from_ambient(y)
    support = {i for i, _ in a} | {i for i, _ in b}
    if cs.is_chain(support):
        assert cs.local_distance(a, b) == linf(x, y)


@given(st.lists(coord, min_size=3, max_size=3), st.lists(coord, min_size=3, max_size=3))
def test_shared_faces_agree(x, y):
    cs = cube_space(3)
    a, b = cs.from_ambient(x), cs.from_ambient(y)
    common = [s for s in cs.simplices_of(a) if cs.in_simplex(b, s)]
    gaps = {max(abs(u - v) for u, v in zip(cs.cumulative(a, s), cs.cumulative(b, s))) for s in common}
    assert len(gaps) <= 1
    if gaps:
        assert gaps == {cs.local_distance(a, b)}


def test_helly_examples():
    cs = cube_space(2)
    corners = [cs.from_ambient(c) for c in [(1, 1), (-1, 1), (1, -1)]]
    rep = helly_check(cs, corners, [1, 1, 1], level=2)
    assert rep.ok and rep.checked >= 1
    one = helly_check(cs, [cs.from_ambient((0, 0))], [F(1, 2)], level=1)
    assert one.ok and one.checked == 1
    path = orthoscheme_space(chain(3))
    rep = helly_check(path, [path.vertex(0), path.vertex(3), path.vertex(1)], [F(1, 2), F(1, 2), F(1, 4)], level=2)
    assert rep.ok


def test_helly_disjoint_balls_pass_vacuously():
    # radii below half the distance: no pair meets, nothing to check
    cs = cube_space(2)
    pts = [cs.from_ambient(c) for c in [(1, 1), (-1, -1)]]
    rep = helly_check(cs, pts, [F(1, 2), F(1, 2)], level=2)
    assert rep.ok and rep.checked == 0


@pytest.mark.parametrize("n", [2, 3])
def test_helly_on_cube_and_bn_posets(n):
    cs = cube_space(n)
    rng = random.Random(n)
    centers = [cs.from_ambient([F(rng.randint(-2, 2), 2) for _ in range(n)]) for _ in range(4)]
    radii = [F(rng.randint(1, 3), 2) for _ in range(4)]
    assert helly_check(cs, centers, radii, level=1 if n == 3 else 2).ok
