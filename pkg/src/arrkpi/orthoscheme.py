"""l-infinity orthoscheme realization of a graded poset with a minimum.

Each maximal chain ``x_0 < x_1 < ... < x_k`` spans a unit orthoscheme whose
vertex ``x_i`` sits at ``(1, ..., 1, 0, ..., 0)`` with ``i`` ones.  A point
with barycentric weights ``lam`` has ``j``-th coordinate equal to the mass
carried by ``x_j, ..., x_k``, so the in-simplex distance of two points is the
largest gap between their upper cumulative masses.  That quantity only
depends on the chain spanned by the two supports, which makes the metrics of
different simplices agree on shared faces.

Global distances are approximated from above by shortest paths through a
dyadic barycentric grid.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .kernels import relax_blocks
from .posetlab import FinitePoset, PosetError, is_graded, maximal_chains

Point = tuple  # sorted tuple of (element index, Fraction weight), weights > 0


def make_point(weights: dict) -> Point:
    pts = tuple(sorted((int(i), Fraction(w)) for i, w in weights.items() if w))
    if sum(w for _, w in pts) != 1 or any(w < 0 for _, w in pts):
        raise ValueError("barycentric weights must be nonnegative and sum to 1")
    return pts


class OrthoschemeSpace:
    def __init__(self, poset: FinitePoset):
        m = poset.minimum()
        if m is None:
            raise PosetError("orthoscheme realization needs a minimum")
        if not is_graded(poset):
            raise PosetError("orthoscheme realization needs a graded poset")
        self.poset = poset
        self.bottom = m
        self.simplices = [tuple(c) for c in maximal_chains(poset)]
        self.rank = max(len(c) for c in self.simplices) - 1
        self._strict = poset.strict

    # points ------------------------------------------------------------------------

    def vertex(self, i: int) -> Point:
        return ((int(i), Fraction(1)),)

    def point(self, simplex: int, weights: Sequence) -> Point:
        chain = self.simplices[simplex]
        if len(weights) != len(chain):
            raise ValueError("one weight per chain vertex expected")
        return make_point(dict(zip(chain, weights)))

    def is_chain(self, idx) -> bool:
        idx = list(idx)
        return all(self.poset.leq[a, b] or self.poset.leq[b, a] for a, b in itertools.combinations(idx, 2))

    def in_simplex(self, p: Point, s: int) -> bool:
        chain = set(self.simplices[s])
        return all(i in chain for i, _ in p)

    def simplices_of(self, p: Point) -> list:
        return [s for s in range(len(self.simplices)) if self.in_simplex(p, s)]

    def cumulative(self, p: Point, s: int) -> list:
        chain = self.simplices[s]
        w = dict(p)
        out = []
        acc = Fraction(0)
        for x in reversed(chain[1:]):
            acc += w.get(x, 0)
            out.append(acc)
        out.reverse()
        return out + [Fraction(0)] * (self.rank - len(out))

    def local_distance(self, p: Point, q: Point) -> Fraction:
        """Exact in-simplex distance; the supports must span a chain."""
        support = sorted({i for i, _ in p} | {i for i, _ in q}, key=lambda i: self.poset.leq[:, i].sum())
        if not self.is_chain(support):
            raise ValueError("points do not lie in a common simplex")
        wp, wq = dict(p), dict(q)
        best = Fraction(0)
        up_p = up_q = Fraction(0)
        for x in reversed(support):
            up_p += wp.get(x, 0)
            up_q += wq.get(x, 0)
            if x != self.bottom:
                best = max(best, abs(up_p - up_q))
        return best

    # grids -------------------------------------------------------------------------

    def grid(self, level: int) -> dict:
        """Dyadic barycentric samples: point -> list of simplices containing it."""
        D = 2 ** level
        out: dict = {}
        for s, chain in enumerate(self.simplices):
            k = len(chain)
            for comp in _compositions(D, k):
                p = tuple((chain[i], Fraction(c, D)) for i, c in enumerate(comp) if c)
                p = tuple(sorted(p))
                out.setdefault(p, []).append(s)
        return out

    # shortest paths ------------------------------------------------------------------

    def _block_rows(self, nodes: list, member: list, offset: int = 0):
        """Per-simplex node ids and cumulative-mass rows."""
        ids = [[] for _ in self.simplices]
        rows = [[] for _ in self.simplices]
        for v, ss in enumerate(member):
            for s in ss:
                ids[s].append(v + offset)
                rows[s].append([float(x) for x in self.cumulative(nodes[v], s)])
        return ids, rows

    def _pack(self, *parts):
        ptr = [0]
        gidx, rows = [], []
        for s in range(len(self.simplices)):
            for ids, rr in parts:
                gidx.extend(ids[s])
                rows.extend(rr[s])
            ptr.append(len(gidx))
        return (
            np.array(ptr, dtype=np.int64),
            np.array(gidx, dtype=np.int64),
            np.array(rows, dtype=np.float64).reshape(len(gidx), self.rank),
        )

    def _blocks(self, nodes: list, member: list):
        return self._pack(self._block_rows(nodes, member))

    def transit_graph(self, level: int):
        """Cached grid samples lying in at least two top simplices."""
        cache = self.__dict__.setdefault("_transit", {})
        if level not in cache:
            grid = self.grid(level)
            nodes = [p for p, ss in grid.items() if len(ss) >= 2]
            member = [grid[p] for p in nodes]
            index = {p: i for i, p in enumerate(nodes)}
            cache[level] = (nodes, index, self._block_rows(nodes, member))
        return cache[level]

    def _exact_path_length(self, nodes, pred, source, target) -> Fraction:
        total = Fraction(0)
        v = target
        while v != source:
            u = int(pred[v])
            if u < 0:
                raise RuntimeError("target unreachable")
            total += self.local_distance(nodes[u], nodes[v])
            v = u
        return total


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def orthoscheme_space(p: FinitePoset) -> OrthoschemeSpace:
    return OrthoschemeSpace(p)


def string_distance(sp: OrthoschemeSpace, a: Point, b: Point, level: int) -> Fraction:
    """Upper bound for the string distance from shortest paths through the
    level-``level`` grid.

    Only samples lying in two or more top simplices (plus ``a`` and ``b``)
    are kept: edge weights satisfy the triangle inequality inside a simplex,
    so a shortest path only needs to stop where it changes simplex.
    """
    if a == b:
        return Fraction(0)
    base, index, base_rows = sp.transit_graph(level)
    pos = dict.fromkeys(())
    for q in (a, b):
        if q in index:
            pos[q] = index[q]
    extra, extra_member = [], []
    for q in (a, b):
        if q not in pos:
            ss = sp.simplices_of(q)
            if not ss:
                raise ValueError(f"{q} is not a point of the realization")
            pos[q] = len(base) + len(extra)
            extra.append(q)
            extra_member.append(ss)
    nodes = base + extra
    ptr, gidx, C = sp._pack(base_rows, sp._block_rows(extra, extra_member, offset=len(base)))
    d = np.full(len(nodes), np.inf)
    d[pos[a]] = 0.0
    pred = np.full(len(nodes), -1, dtype=np.int64)
    relax_blocks(d, pred, ptr, gidx, C)
    return sp._exact_path_length(nodes, pred, pos[a], pos[b])


@dataclass
class HellyReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "checked_count": self.checked,
            "violation_count": len(self.violations),
            "violations": [list(v) for v in self.violations[:20]],
        }


def helly_check(
    sp: OrthoschemeSpace,
    centers: Sequence[Point],
    radii: Sequence,
    tolerance: float = 1e-6,
    level: int = 3,
    max_family: int = 4,
) -> HellyReport:
    """Sampled Helly test for closed balls.

    Distances from each center to every level-``level`` grid sample come from
    shortest paths through the full grid.  For each sub-collection of at most
    ``max_family`` balls that pairwise intersect, some sample must lie within
    ``radius + tolerance`` of every center.
    """
    grid = sp.grid(level)
    nodes = list(grid)
    member = [grid[p] for p in nodes]
    pos = {p: i for i, p in enumerate(nodes)}
    for c in centers:
        if c not in pos:
            pos[c] = len(nodes)
            nodes.append(c)
            member.append(sp.simplices_of(c))
    ptr, gidx, C = sp._blocks(nodes, member)
    dist = []
    for c in centers:
        d = np.full(len(nodes), np.inf)
        d[pos[c]] = 0.0
        pred = np.full(len(nodes), -1, dtype=np.int64)
        relax_blocks(d, pred, ptr, gidx, C)
        dist.append(d)
    dist = np.array(dist)
    r = np.array([float(x) for x in radii])
    k = len(centers)
    inside = dist <= (r[:, None] + tolerance)
    meets = np.array(
        [[dist[i, pos[centers[j]]] <= r[i] + r[j] + tolerance for j in range(k)] for i in range(k)]
    )
    report = HellyReport()
    for size in range(2, min(max_family, k) + 1):
        for fam in itertools.combinations(range(k), size):
            if not all(meets[i, j] for i, j in itertools.combinations(fam, 2)):
                continue
            report.checked += 1
            if not inside[list(fam)].all(axis=0).any():
                report.violations.append(fam)
    if k == 1:
        report.checked += 1
    return report


# ---------------------------------------------------------------------------------------
# the cube [-1, 1]^n as the realization of the B_n cube model plus a minimum


class CubeSpace(OrthoschemeSpace):
    def __init__(self, n: int):
        from .coxmodel import bn_complex

        self.n = n
        super().__init__(bn_complex(n).s_poset().with_bottom("0"))
        self._coords = [
            (0,) * n if e == "0" else e.coords for e in self.poset.elements
        ]
        self._index = {c: i for i, c in enumerate(self._coords)}

    def from_ambient(self, x: Sequence) -> Point:
        """Barycentric coordinates of a point of ``[-1, 1]^n``."""
        x = [Fraction(v) for v in x]
        if any(abs(v) > 1 for v in x):
            raise ValueError("point outside the cube")
        order = sorted(range(self.n), key=lambda i: -abs(x[i]))
        mags = [abs(x[i]) for i in order] + [Fraction(0)]
        weights = {self.bottom: 1 - mags[0]}
        for k in range(1, self.n + 1):
            lam = mags[k - 1] - mags[k]
            if lam:
                v = [0] * self.n
                for i in order[:k]:
                    v[i] = 1 if x[i] > 0 else -1
                weights[self._index[tuple(v)]] = weights.get(self._index[tuple(v)], 0) + lam
        return make_point(weights)

    def to_ambient(self, p: Point) -> tuple:
        out = [Fraction(0)] * self.n
        for i, w in p:
            for j, c in enumerate(self._coords[i]):
                out[j] += w * c
        return tuple(out)


def cube_space(n: int) -> CubeSpace:
    return CubeSpace(n)


def linf(x, y) -> Fraction:
    return max(abs(Fraction(a) - Fraction(b)) for a, b in zip(x, y))
