"""Cube model of the type B_n Coxeter complex and its relatives.

Vertices are the points of ``{-1, 0, 1}^n`` other than the origin, viewed as
barycentres of faces of ``[-1, 1]^n``.  The s-order is face inclusion, i.e.
``v <=_s w`` iff every nonzero coordinate of ``v`` agrees with ``w``.

The skewed A_n sphere uses only the *real* vertices (non-negative or
non-positive); its u-type is ``#pos`` for non-negative vertices and
``n + 1 - #neg`` for non-positive ones.  The remaining *fake* vertices
subdivide real edges between the two octant families.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .arrangement import DualComplex, fan_leq
from .families import reflection_arrangement
from .posetlab import Check, FinitePoset, SimplicialComplex, is_flag_complex, maximal_chains


class ModelError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class CoxVertex:
    coords: tuple

    def __post_init__(self):
        if not any(self.coords) or any(c not in (-1, 0, 1) for c in self.coords):
            raise ValueError(f"{self.coords} is not a nonzero point of {{-1,0,1}}^n")

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def pos(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.coords) if c > 0)

    @property
    def neg(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.coords) if c < 0)

    @property
    def support(self) -> frozenset:
        return self.pos | self.neg

    @property
    def s_type(self) -> int:
        return len(self.pos) + len(self.neg)

    @property
    def nonnegative(self) -> bool:
        return not self.neg

    @property
    def nonpositive(self) -> bool:
        return not self.pos

    @property
    def real(self) -> bool:
        return self.nonnegative or self.nonpositive

    @property
    def u_type(self) -> int:
        if self.nonnegative:
            return len(self.pos)
        if self.nonpositive:
            return self.n + 1 - len(self.neg)
        raise ModelError(f"fake vertex {self.coords} has no u-type")

    def __neg__(self) -> "CoxVertex":
        return CoxVertex(tuple(-c for c in self.coords))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def V(*coords) -> CoxVertex:
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = tuple(coords[0])
    return CoxVertex(tuple(coords))


def cube_points(n: int) -> list:
    return [CoxVertex(c) for c in itertools.product((-1, 0, 1), repeat=n) if any(c)]


def s_leq(v: CoxVertex, w: CoxVertex) -> bool:
    return v.pos <= w.pos and v.neg <= w.neg


def s_adjacent(v: CoxVertex, w: CoxVertex) -> bool:
    return v != w and (s_leq(v, w) or s_leq(w, v))


def u_adjacent(v: CoxVertex, w: CoxVertex) -> tuple:
    """Adjacency of real vertices in the unsubdivided sphere.

    Returns ``(adjacent, midpoint)``; the midpoint is the fake vertex on the
    edge when one endpoint is non-negative and the other non-positive.
    """
    if not (v.real and w.real):
        raise ModelError("u-adjacency is defined on real vertices only")
    if v == w:
        return False, None
    same = (v.nonnegative and w.nonnegative) or (v.nonpositive and w.nonpositive)
    if same:
        return s_adjacent(v, w), None
    if v.nonpositive:
        v, w = w, v
    if v.support & w.support:
        return False, None
    b = tuple(vc if vc else wc for vc, wc in zip(v.coords, w.coords))
    return True, CoxVertex(b)


def u_lt(v: CoxVertex, w: CoxVertex) -> bool:
    return u_adjacent(v, w)[0] and v.u_type < w.u_type


def plus_minus(b: CoxVertex) -> tuple:
    if b.real:
        raise ModelError(f"{b} is real")
    return (
        CoxVertex(tuple(max(c, 0) for c in b.coords)),
        CoxVertex(tuple(min(c, 0) for c in b.coords)),
    )


def inversion(v: CoxVertex) -> CoxVertex:
    return -v


class TypedComplex:
    """A set of cube vertices with s-adjacency, s-order and real marking."""

    def __init__(self, n: int, vertices):
        self.n = n
        self.vertices = sorted(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    @property
    def real(self) -> list:
        return [v for v in self.vertices if v.real]

    @property
    def fake(self) -> list:
        return [v for v in self.vertices if not v.real]

    def s_type_counts(self) -> list:
        out = [0] * self.n
        for v in self.vertices:
            out[v.s_type - 1] += 1
        return out

    def s_matrix(self) -> np.ndarray:
        P = np.array([[1 if i in v.pos else 0 for i in range(self.n)] for v in self.vertices], dtype=np.int32)
        N = np.array([[1 if i in v.neg else 0 for i in range(self.n)] for v in self.vertices], dtype=np.int32)
        # v <= w iff pos(v) misses no coordinate of pos(w) ... computed as set inclusion counts
        inc_p = (P @ P.T) == P.sum(axis=1)[:, None]
        inc_n = (N @ N.T) == N.sum(axis=1)[:, None]
        return inc_p & inc_n

    def s_poset(self) -> FinitePoset:
        return FinitePoset(self.vertices, self.s_matrix(), validate=False)

    def s_relation_poset(self) -> FinitePoset:
        """s-order built literally from adjacency and types (``v < w`` iff
        adjacent and ``s(v) < s(w)``), without assuming it is an order."""
        vs = self.vertices
        L = np.array(
            [[v == w or (s_adjacent(v, w) and v.s_type < w.s_type) for w in vs] for v in vs], dtype=bool
        )
        return FinitePoset(vs, L, validate=False)

    def u_relation_poset(self) -> FinitePoset:
        vs = self.real
        L = np.array([[v == w or u_lt(v, w) for w in vs] for v in vs], dtype=bool)
        return FinitePoset(vs, L, validate=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [
                {
                    "coords": list(v.coords),
                    "s_type": v.s_type,
                    "real": v.real,
                    **({"u_type": v.u_type} if v.real else {}),
                }
                for v in self.vertices
            ],
        }


def bn_complex(n: int) -> TypedComplex:
    if n < 1:
        raise ValueError("n must be positive")
    return TypedComplex(n, cube_points(n))


def positive_part(n: int) -> TypedComplex:
    return TypedComplex(n, [v for v in cube_points(n) if v.nonnegative])


def _ray_point(fan) -> CoxVertex:
    """Scale a ray witness onto the cube boundary."""
    w = fan.witness
    m = max(abs(x) for x in w)
    pt = tuple(x / m for x in w)
    if any(x not in (-1, 0, 1) for x in pt):
        raise ModelError(f"ray through {w} does not hit a cube vertex of the model")
    return CoxVertex(tuple(int(x) for x in pt))


@dataclass
class ASphere:
    """Real complex of the skewed A_n arrangement on the cube boundary, and
    the subdivided complex (the B_n cube model)."""

    n: int
    dual: DualComplex
    ray_of: dict  # ray covector -> CoxVertex
    subdivided: TypedComplex

    @cached_property
    def real_vertices(self) -> list:
        return sorted(self.ray_of.values())

    @cached_property
    def facets(self) -> list:
        """Chambers as sets of real vertices."""
        rays = [f for f in self.dual.fans if f.dim == 1]
        out = []
        for c in self.dual.chambers:
            out.append(frozenset(self.ray_of[r.covector] for r in rays if fan_leq(r, c)))
        return out

    @cached_property
    def real_complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(self.facets)

    @cached_property
    def _edges(self) -> frozenset:
        return frozenset(
            frozenset(e) for f in self.facets for e in itertools.combinations(f, 2)
        )

    def arrangement_adjacent(self, v: CoxVertex, w: CoxVertex) -> bool:
        return v != w and frozenset((v, w)) in self._edges

    def cross_check(self) -> list:
        """Disagreements between the arrangement and the pos/neg calculus."""
        problems = []
        model_real = {v for v in self.subdivided.vertices if v.real}
        if set(self.real_vertices) != model_real:
            problems.append(("real vertex sets differ", tuple(sorted(model_real ^ set(self.real_vertices)))))
        rv = self.real_vertices
        for v, w in itertools.combinations(rv, 2):
            if self.arrangement_adjacent(v, w) != u_adjacent(v, w)[0]:
                problems.append(("u-adjacency differs", (v, w)))
        for f in self.facets:
            if sorted(v.u_type for v in f) != list(range(1, self.n + 1)):
                problems.append(("chamber types are not 1..n", tuple(sorted(f))))
        return problems

    def is_flag(self) -> Check:
        return is_flag_complex(self.real_complex)


def an_sphere(n: int) -> ASphere:
    dual = DualComplex(reflection_arrangement("skewedA", n))
    ray_of = {f.covector: _ray_point(f) for f in dual.fans if f.dim == 1}
    sph = ASphere(n, dual, ray_of, bn_complex(n))
    probs = sph.cross_check()
    if probs:
        raise ModelError(f"skewed A_{n} sphere disagrees with the cube model: {probs[:3]}")
    return sph


def contrast_witness(n: int = 2) -> Optional[tuple]:
    """Three u-type-1 vertices that are pairwise u-upper-bounded with no
    common upper bound (exists for the hexagon)."""
    sph = bn_complex(n)
    p = sph.u_relation_poset()
    ones = [v for v in p.elements if v.u_type == 1]
    L = p.leq
    ix = p.index
    for a, b, c in itertools.combinations(ones, 3):
        ups = [L[ix[x]] for x in (a, b, c)]
        pairwise = all((ups[i] & ups[j]).any() for i, j in ((0, 1), (0, 2), (1, 2)))
        if pairwise and not (ups[0] & ups[1] & ups[2]).any():
            return (a, b, c)
    return None


# -------------------------------------------------------------------------------------
# D_n and its (s_n, s_{n-1}) subdivision


@dataclass
class DnSubdivision:
    n: int
    rays: list  # D_n rays on the cube boundary
    midpoints: list  # vertices typed m
    facets: list  # top simplices after cutting, as frozensets of CoxVertex
    t_label: dict

    @property
    def vertices(self) -> list:
        return sorted(set(self.rays) | set(self.midpoints))

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex.from_facets(self.facets)

    def t_poset(self) -> FinitePoset:
        """``x < y`` iff adjacent in the subdivided complex and ``t(x) < t(y)``."""
        vs = self.vertices
        idx = {v: i for i, v in enumerate(vs)}
        L = np.eye(len(vs), dtype=bool)
        for f in self.facets:
            for a, b in itertools.permutations(f, 2):
                if self.t_label[a] < self.t_label[b]:
                    L[idx[a], idx[b]] = True
        return FinitePoset(vs, L, validate=False)


def dn_subdivision(n: int) -> DnSubdivision:
    if n < 3:
        raise ValueError("D_n subdivision needs n >= 3")
    dual = DualComplex(reflection_arrangement("D", n))
    ray_fans = [f for f in dual.fans if f.dim == 1]
    ray_of = {f.covector: _ray_point(f) for f in ray_fans}
    facets, mids = [], set()
    for c in dual.chambers:
        verts = [ray_of[r.covector] for r in ray_fans if fan_leq(r, c)]
        full = [v for v in verts if v.s_type == n]
        if len(verts) != n or len(full) != 2:
            raise ModelError(f"unexpected chamber shape {verts}")
        a, b = full
        diff = [i for i in range(n) if a.coords[i] != b.coords[i]]
        if len(diff) != 1:
            raise ModelError("spin vertices of a chamber differ in more than one sign")
        m = CoxVertex(tuple((x + y) // 2 for x, y in zip(a.coords, b.coords)))
        mids.add(m)
        rest = [v for v in verts if v not in full]
        facets.append(frozenset(rest + [m, a]))
        facets.append(frozenset(rest + [m, b]))
    t = {v: (v.s_type if v.s_type <= n - 2 else n) for v in ray_of.values()}
    t.update({m: n - 1 for m in mids})
    return DnSubdivision(n, sorted(ray_of.values()), sorted(mids), facets, t)


def dn_isomorphism_check(sub: DnSubdivision) -> list:
    """Compare with the B_n cube model under the identity on coordinates.

    Returns a list of problems (empty when the complexes agree as typed
    complexes, with t-label equal to s-type)."""
    problems = []
    bn = bn_complex(sub.n)
    if sorted(sub.vertices) != bn.vertices:
        problems.append("vertex sets differ")
    for v, t in sub.t_label.items():
        if t != v.s_type:
            problems.append(f"t-label of {v} is {t}, s-type {v.s_type}")
    p = bn.s_poset()
    bn_facets = {frozenset(p.elements[i] for i in ch) for ch in maximal_chains(p)}
    if set(sub.facets) != bn_facets:
        problems.append("top simplices differ")
    return problems


# -------------------------------------------------------------------------------------
# exhaustive property checks


def fake_adjacent_violations(n: int) -> list:
    """Pairs (real a, fake b), s-adjacent, with ``s(a) >= s(b)``."""
    vs = cube_points(n)
    return [
        (a, b)
        for a in vs if a.real
        for b in vs if not b.real and s_adjacent(a, b) and a.s_type >= b.s_type
    ]


def inversion_violations(n: int) -> list:
    """Failures of: s-order isomorphism on all vertices; u-order
    anti-isomorphism on real vertices; pos/neg swap; s-type kept."""
    bad = []
    vs = cube_points(n)
    for v in vs:
        iv = inversion(v)
        if iv.pos != v.neg or iv.neg != v.pos or iv.s_type != v.s_type:
            bad.append(("types", v))
        if v.real and iv.u_type != n + 1 - v.u_type:
            bad.append(("u-type", v))
    for v, w in itertools.product(vs, repeat=2):
        if s_leq(v, w) != s_leq(-v, -w):
            bad.append(("s-order", v, w))
        if v.real and w.real and u_lt(v, w) != u_lt(-w, -v):
            bad.append(("u-order", v, w))
    return bad


def product_complex(*posets) -> FinitePoset:
    from .posetlab import product_poset

    return product_poset(*posets)


def skewed_a1_poset() -> FinitePoset:
    """The 0-sphere: two incomparable points."""
    return FinitePoset([1, -1], np.eye(2, dtype=bool), validate=False)


def to_dot(p: FinitePoset, name: str = "hasse") -> str:
    cov = p.covers()
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, e in enumerate(p.elements):
        lines.append(f'  n{i} [label="{e}"];')
    for i, j in zip(*np.nonzero(cov)):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
