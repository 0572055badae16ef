import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from arrkpi import coxmodel as cm
from arrkpi.posetlab import (
    FinitePoset,
    PosetError,
    SimplicialComplex,
    all_posets,
    is_bowtie_free,
    is_downward_flag,
    is_flag_complex,
    is_graded,
    is_lattice,
    is_partial_order,
    is_upward_flag,
    iter_posets,
    maximal_chains,
    order_complex,
    product_poset,
    transitive_closure,
)


def bowtie():
    return FinitePoset.from_pairs(list("abcd"), [(0, 2), (0, 3), (1, 2), (1, 3)])


def chain(n):
    return FinitePoset.from_pairs(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def boolean(k):
    subsets = [frozenset(s) for r in range(k + 1) for s in itertools.combinations(range(k), r)]
    return FinitePoset.from_function(subsets, lambda a, b: a <= b)


def test_bowtie_examples():
    chk = is_bowtie_free(bowtie())
    assert not chk.ok and set(chk.witness) == set("abcd")
    assert is_bowtie_free(chain(5)).ok
    assert is_bowtie_free(boolean(3)).ok


def test_flag_examples():
    assert not is_upward_flag(cm.bn_complex(2).u_relation_poset()).ok
    assert is_upward_flag(cm.bn_complex(3).s_poset()).ok
    for p in (boolean(3), chain(4)):
        assert is_upward_flag(p).ok and is_downward_flag(p).ok


def test_lattice_examples():
    assert is_lattice(boolean(3))
    bt = bowtie().with_bottom("0").with_top("1")
    assert not is_lattice(bt) and not is_bowtie_free(bt).ok
    square = cm.bn_complex(2).s_poset().with_bottom("0").with_top("1")
    assert is_lattice(square)
    with pytest.raises(PosetError):
        is_lattice(bowtie())
    # 0 < a < b < 1 next to 0 < c < 1
    ungraded = FinitePoset.from_pairs(list("0abc1"), [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
    assert is_graded(ungraded) is False
    with pytest.raises(PosetError):
        is_lattice(ungraded)


def test_join_meet():
    b = boolean(2)
    e = b.elements
    assert b.join(frozenset({0}), frozenset({1})) == frozenset({0, 1})
    assert b.meet(frozenset({0}), frozenset({1})) == frozenset()
    assert bowtie().join("a", "b") is None


def test_rank_function():
    r = boolean(3).rank_function()
    assert all(r[s] == len(s) for s in r)
    assert bowtie().rank_function() is None


@pytest.mark.parametrize(
    "n, count",
    [(0, 1), (1, 1), (2, 2), (3, 5), (4, 16), (5, 63), (6, 318)],
)
def test_poset_enumeration_counts(n, count):
    assert len(all_posets(n)[n]) == count


def test_generated_posets_are_posets_and_distinct():
    for p in iter_posets(5):
        assert is_partial_order(p.leq).ok


def _brute_bowtie(L):
    n = L.shape[0]
    lt = L & ~np.eye(n, dtype=bool)
    for x1, x2 in itertools.combinations(range(n), 2):
        for y1, y2 in itertools.combinations(range(n), 2):
            if len({x1, x2, y1, y2}) < 4:
                continue
            if all(lt[x, y] for x in (x1, x2) for y in (y1, y2)):
                if not any(L[x1, z] and L[x2, z] and L[z, y1] and L[z, y2] for z in range(n)):
                    return True
    return False


def _brute_upflag(L):
    n = L.shape[0]
    ub = lambda *xs: any(all(L[x, z] for x in xs) for z in range(n))
    for a, b, c in itertools.combinations(range(n), 3):
        if ub(a, b) and ub(a, c) and ub(b, c) and not ub(a, b, c):
            return True
    return False


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 8))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=14))
    # orient every pair upward in a random linear order to stay acyclic
    perm = draw(st.permutations(range(n)))
    rank = {v: i for i, v in enumerate(perm)}
    L = np.eye(n, dtype=bool)
    for i, j in pairs:
        if rank[i] < rank[j]:
            L[i, j] = True
    return FinitePoset(list(range(n)), transitive_closure(L))


@given(random_posets())
def test_kernels_match_brute_force(p):
    assert is_bowtie_free(p).ok == (not _brute_bowtie(p.leq))
    assert is_upward_flag(p).ok == (not _brute_upflag(p.leq))
    assert is_downward_flag(p).ok == (not _brute_upflag(p.leq.T))


def _brute_lattice(p):
    n = len(p)
    L = p.leq
    for i, j in itertools.combinations(range(n), 2):
        for M in (L, L.T):
            ub = [u for u in range(n) if M[i, u] and M[j, u]]
            if not any(all(M[u, v] for v in ub) for u in ub):
                return False
    return True


def test_lattice_iff_bowtie_free_small():
    checked = 0
    for p in iter_posets(6):
        if len(p) < 2 or not p.is_bounded() or not is_graded(p):
            continue
        checked += 1
        lat = is_lattice(p)
        assert lat == _brute_lattice(p)
        assert lat == is_bowtie_free(p).ok
    assert checked > 10


def test_order_complex_examples():
    c = order_complex(chain(4))
    assert c.f_vector() == [4, 6, 4, 1]
    anti = FinitePoset(list("xyz"), np.eye(3, dtype=bool))
    assert order_complex(anti).f_vector() == [3]
    oc = order_complex(cm.bn_complex(2).s_poset())
    assert oc.f_vector() == [8, 8] and oc.euler_characteristic() == 0
    assert is_flag_complex(oc).ok


def test_hollow_triangle_not_flag():
    hollow = SimplicialComplex.from_facets([(0, 1), (1, 2), (0, 2)])
    assert not is_flag_complex(hollow).ok
    assert is_flag_complex(SimplicialComplex.from_facets([(0, 1, 2)])).ok


def test_product_poset_size():
    prod = product_poset(chain(2), chain(3))
    assert len(prod) == 3 * 4 - 1
    assert is_partial_order(prod.leq).ok


def test_json_round_trip_and_errors():
    p = bowtie()
    q = FinitePoset.from_json(json.dumps(p.to_json()))
    assert q.elements == p.elements and (q.leq == p.leq).all()
    with pytest.raises(PosetError):
        FinitePoset.from_json({"elements": ["a", "b"], "leq": [["a", "b"]]})
    with pytest.raises(PosetError):
        FinitePoset.from_json({"elements": ["a", "b"], "leq": [[0, 5]]})
    with pytest.raises(PosetError):
        FinitePoset(["a", "b"], [[1, 1], [1, 1]])


def test_maximal_chains_of_boolean():
    assert len(maximal_chains(boolean(3))) == 6
