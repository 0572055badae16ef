"""Fans of a finite affine arrangement restricted to a box, and the dual complex.

A fan is identified by its covector (a tuple of -1/0/1, one entry per
hyperplane).  The dual complex has one vertex per chamber; the face dual
to a fan ``U`` has vertex set ``face_of[U]``, the chambers whose closure
contains ``U``.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactgeom import (
    AffineFlat,
    Hyperplane,
    _affine_param,
    _eq_key,
    box_is_empty,
    eval_sign,
    flat_of,
    make_box,
    solve_system,
)

log = logging.getLogger(__name__)


class EmptyRegionError(ValueError):
    """The region meets no chamber of the arrangement."""


class NotAChamberError(ValueError):
    pass


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple
    region: tuple

    def __post_init__(self):
        if len(set(self.hyperplanes)) != len(self.hyperplanes):
            raise ValueError("hyperplanes must be pairwise distinct")
        if len(self.region) != self.dim:
            raise ValueError("region must be a box in R^dim")
        for h in self.hyperplanes:
            if h.dim != self.dim:
                raise ValueError(f"hyperplane {h} not in R^{self.dim}")

    @classmethod
    def build(cls, dim: int, hyperplanes: Iterable, region=None) -> "Arrangement":
        """Canonicalize and deduplicate, keeping first-occurrence order.

        *hyperplanes* may hold :class:`Hyperplane` objects or ``(normal, offset)``
        pairs.  The default region is ``[-1, 1]^dim``.
        """
        seen = {}
        for h in hyperplanes:
            if not isinstance(h, Hyperplane):
                h = Hyperplane.make(*h)
            seen.setdefault(h, None)
        if region is None:
            region = [(-1, 1)] * dim
        return cls(dim, tuple(seen), make_box(region))

    @classmethod
    def from_json(cls, doc) -> "Arrangement":
        """``{"dim": n, "hyperplanes": [[a_1, ..., a_n, c], ...], "region": [[lo, hi], ...]}``
        with each row meaning ``a . x = c``."""
        n = int(doc["dim"])
        rows = doc.get("hyperplanes", [])
        for r in rows:
            if len(r) != n + 1:
                raise ValueError(f"hyperplane row {r} needs {n + 1} entries")
        return cls.build(n, [(r[:n], r[n]) for r in rows], doc.get("region"))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "hyperplanes": [list(h.normal) + [h.offset] for h in self.hyperplanes],
            "region": [[_num(lo), _num(hi)] for lo, hi in self.region],
        }

    def __len__(self):
        return len(self.hyperplanes)

    def is_central(self) -> bool:
        return all(h.offset == 0 for h in self.hyperplanes)


def _num(x):
    return int(x) if x.denominator == 1 else str(x)


@dataclass(frozen=True)
class Fan:
    covector: tuple
    support: AffineFlat = field(compare=False, repr=False)
    dim: int = field(compare=False)
    bounded: bool = field(compare=False)
    witness: tuple = field(compare=False, repr=False)

    @property
    def is_vertex(self) -> bool:
        return self.dim == 0


def compose(f: Sequence[int], c: Sequence[int]) -> tuple:
    """Covector composition: ``f`` where nonzero, ``c`` elsewhere."""
    return tuple(a if a else b for a, b in zip(f, c))


def fan_leq(u1, u2) -> bool:
    """Closure order on fans (or bare covectors)."""
    c1 = u1.covector if isinstance(u1, Fan) else u1
    c2 = u2.covector if isinstance(u2, Fan) else u2
    return all(a == 0 or a == b for a, b in zip(c1, c2))


def _region_rows(box):
    """Box bounds as integer rows ``coeffs . x <= rhs``."""
    rows = []
    n = len(box)
    for i, (lo, hi) in enumerate(box):
        for sgn, bound in ((1, Fraction(hi)), (-1, -Fraction(lo))):
            e = [0] * n
            e[i] = sgn * bound.denominator
            rows.append((tuple(e), bound.numerator, False))
    return rows


def _cell_rows(cov, hs):
    eqs, ineqs = [], []
    for s, h in zip(cov, hs):
        if s == 0:
            eqs.append((h.normal, h.offset))
        elif s > 0:
            ineqs.append((tuple(-a for a in h.normal), -h.offset, True))
        else:
            ineqs.append((h.normal, h.offset, True))
    return eqs, ineqs


def is_bounded(cov: Sequence[int], hs: Sequence[Hyperplane], n: int) -> bool:
    """Exact boundedness of the (unclipped) cell with covector *cov*.

    The cell is bounded iff its recession cone is ``{0}``; the cone is
    scale invariant, so a nonzero direction exists iff some ``+-d_j >= 1``
    is feasible.
    """
    eqs = [(h.normal, 0) for s, h in zip(cov, hs) if s == 0]
    cone = []
    for s, h in zip(cov, hs):
        if s > 0:
            cone.append((tuple(-a for a in h.normal), 0, False))
        elif s < 0:
            cone.append((h.normal, 0, False))
    for j in range(n):
        for sgn in (1, -1):
            e = [0] * n
            e[j] = -sgn
            if solve_system(eqs, cone + [(tuple(e), -1, False)], n) is not None:
                return False
    return True


def _nudge(p, basis, h, cov, hs, box):
    """Witnesses on both sides of *h* near a point *p* of the cell *cov*
    lying on *h*, or ``None`` when *p* touches the box boundary.

    Moving along a flat direction keeps the zero signs of *cov*; the step
    is kept below every strict slack so the other signs survive.
    """
    if any(not (lo < x < hi) for x, (lo, hi) in zip(p, box)):
        return None
    v = next(b for b in basis if sum(ai * bi for ai, bi in zip(h.normal, b)) != 0)
    slack = [min(x - lo, hi - x) / abs(vi) for x, vi, (lo, hi) in zip(p, v, box) if vi]
    # p = P / D with integer P keeps the slack computation integral
    D = 1
    for x in p:
        D = D * x.denominator // math.gcd(D, x.denominator)
    P = [x.numerator * (D // x.denominator) for x in p]
    best = None
    for s, g in zip(cov, hs):
        if s:
            rate = abs(sum(ai * bi for ai, bi in zip(g.normal, v)))
            if rate:
                val = abs(sum(ai * xi for ai, xi in zip(g.normal, P)) - g.offset * D)
                if best is None or val * best[1] < best[0] * rate:
                    best = (val, rate)
    if best is not None:
        slack.append(Fraction(best[0], best[1] * D))
    eps = min(slack) / 2
    hv = sum(ai * bi for ai, bi in zip(h.normal, v))
    plus = tuple(x + eps * vi for x, vi in zip(p, v))
    minus = tuple(x - eps * vi for x, vi in zip(p, v))
    if hv < 0:
        plus, minus = minus, plus
    return [(1, plus), (-1, minus)]


def _flat_basis(eqs, n: int):
    """Integer direction vectors of the flat cut out by *eqs*."""
    if not eqs:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return _affine_param(_eq_key(eqs), n)[2]


def _shrink(w, box):
    """Scale a point of a cone into the interior of a box around the origin."""
    m = max((abs(x) for x in w), default=0)
    if not m:
        return w
    r = min(min(-lo, hi) for lo, hi in box)
    if m < r:
        return w
    f = r / (2 * m)
    return tuple(x * f for x in w)


def _enumerate_covectors(a: Arrangement):
    """Depth-first sign extension; yields ``(covector, witness)`` pairs."""
    hs = a.hyperplanes
    n = a.dim
    box_rows = _region_rows(a.region)
    m = len(hs)
    # any point of the box works as the root witness
    root = tuple((lo + hi) / 2 for lo, hi in a.region)
    # cells of a central arrangement are cones; with the origin inside the
    # box every cone meets it, so the box rows can be dropped
    conic = a.is_central() and all(lo < 0 < hi for lo, hi in a.region)
    out = []
    stack = [((), root, [])]
    calls = 0
    while stack:
        cov, p, eqs = stack.pop()
        k = len(cov)
        if k == m:
            out.append((cov, p))
            continue
        h = hs[k]
        s0 = eval_sign(h, p)
        # is h constant on the flat of the zero entries?
        basis = _flat_basis(eqs, n)
        constant = all(sum(ai * bi for ai, bi in zip(h.normal, b)) == 0 for b in basis)
        children = [(s0, p)]
        if not constant:
            def test(s):
                nonlocal calls
                calls += 1
                e, ineq = _cell_rows(cov + (s,), hs[: k + 1])
                if conic:
                    w = solve_system(e, ineq, n)
                    return None if w is None else _shrink(w, a.region)
                return solve_system(e, ineq + box_rows, n)
            if s0 == 0:
                pair = _nudge(p, basis, h, cov, hs, a.region)
                if pair is not None:
                    children += pair
                else:
                    for s in (1, -1):
                        w = test(s)
                        if w is not None:
                            children.append((s, w))
            else:
                w0 = test(0)
                if w0 is not None:
                    children.append((0, w0))
                    pair = _nudge(w0, basis, h, cov, hs, a.region)
                    if pair is not None:
                        children.append(next(c for c in pair if c[0] == -s0))
                    else:
                        w1 = test(-s0)
                        if w1 is not None:
                            children.append((-s0, w1))
        for s, w in children:
            neq = eqs + [(h.normal, h.offset)] if s == 0 else eqs
            stack.append((cov + (s,), w, neq))
    log.debug("enumerated %d cells with %d feasibility calls", len(out), calls)
    return out


def enumerate_fans(a: Arrangement) -> list:
    """All fans meeting the region, sorted by (dim, covector).

    Raises :class:`EmptyRegionError` when the region meets no chamber.
    """
    fans = []
    central = a.is_central()
    for cov, w in _enumerate_covectors(a):
        zeros = [h for s, h in zip(cov, a.hyperplanes) if s == 0]
        flat = flat_of(zeros, a.dim)
        # a cell of a central arrangement is a cone, bounded only when a point
        bounded = flat.dim == 0 if central else is_bounded(cov, a.hyperplanes, a.dim)
        fans.append(Fan(cov, flat, flat.dim, bounded, w))
    if not any(f.dim == a.dim for f in fans):
        raise EmptyRegionError("region contains no chamber")
    fans.sort(key=lambda f: (f.dim, f.covector))
    return fans


def separation_distance(c1, c2) -> int:
    """Number of hyperplanes separating two chambers."""
    for c in (c1, c2):
        if isinstance(c, Fan) and c.dim != len(c.witness):
            raise NotAChamberError(f"{c.covector} is not a chamber")
        cov = c.covector if isinstance(c, Fan) else c
        if 0 in cov:
            raise NotAChamberError(f"{cov} is not a chamber")
    a = c1.covector if isinstance(c1, Fan) else c1
    b = c2.covector if isinstance(c2, Fan) else c2
    return sum(1 for x, y in zip(a, b) if x != y)


class DualComplex:
    """Fans of an arrangement with the dual-complex structure on chambers."""

    def __init__(self, arrangement: Arrangement, fans: Optional[list] = None):
        self.arrangement = arrangement
        self.fans = fans if fans is not None else enumerate_fans(arrangement)
        self.by_covector = {f.covector: f for f in self.fans}
        self.chambers = [f for f in self.fans if f.dim == arrangement.dim]
        self._chamber_set = {c.covector for c in self.chambers}
        self.face_of = self._faces()

    def _faces(self) -> dict:
        """Chambers in the closure of each fan: ``f <= c`` iff ``f`` agrees
        with ``c`` off its zero set."""
        chambers = [c.covector for c in self.chambers]
        if not self.fans or not self.arrangement.hyperplanes:
            return {f.covector: frozenset(chambers) for f in self.fans}
        C = np.array(chambers, dtype=np.int8)
        out = {}
        for f in self.fans:
            fv = np.array(f.covector, dtype=np.int8)
            nz = fv != 0
            hit = (C[:, nz] == fv[nz]).all(axis=1)
            out[f.covector] = frozenset(chambers[i] for i in np.flatnonzero(hit))
        return out

    def __len__(self):
        return len(self.fans)

    def fan(self, cov) -> Fan:
        return self.by_covector[tuple(cov)]

    def counts_by_dim(self) -> dict:
        out = {}
        for f in self.fans:
            out[f.dim] = out.get(f.dim, 0) + 1
        return out

    def bounded_fans(self) -> list:
        return [f for f in self.fans if f.bounded]

    def vertices(self) -> list:
        return [f for f in self.fans if f.dim == 0]

    def gate(self, c, f):
        """The chamber of ``face_of[f]`` nearest to chamber *c*."""
        cc = c.covector if isinstance(c, Fan) else tuple(c)
        fc = f.covector if isinstance(f, Fan) else tuple(f)
        if cc not in self._chamber_set:
            raise NotAChamberError(f"{cc} is not a chamber")
        g = compose(fc, cc)
        if g not in self._chamber_set:
            raise RuntimeError(f"gate covector {g} is not a chamber")
        return self.by_covector[g]

    def project_face(self, e, f) -> Fan:
        """The fan whose dual face is the gate image of the face dual to *e*."""
        ec = e.covector if isinstance(e, Fan) else tuple(e)
        fc = f.covector if isinstance(f, Fan) else tuple(f)
        target = compose(fc, ec)
        if target not in self.by_covector:
            raise RuntimeError(f"projected covector {target} is not a fan")
        image = frozenset(self.gate(v, fc).covector for v in self.face_of[ec])
        if image != self.face_of[target]:
            raise RuntimeError("gate image is not the vertex set of a face")
        return self.by_covector[target]

    @cached_property
    def chamber_graph(self) -> dict:
        """Adjacency of chambers separated by exactly one hyperplane."""
        adj = {c.covector: [] for c in self.chambers}
        for f in self.fans:
            if f.dim == self.arrangement.dim - 1:
                ends = sorted(self.face_of[f.covector])
                if len(ends) == 2:
                    u, v = ends
                    adj[u].append(v)
                    adj[v].append(u)
        return adj

    def graph_distance(self, c1, c2) -> int:
        a = c1.covector if isinstance(c1, Fan) else tuple(c1)
        b = c2.covector if isinstance(c2, Fan) else tuple(c2)
        seen = {a: 0}
        q = deque([a])
        while q:
            u = q.popleft()
            if u == b:
                return seen[u]
            for w in self.chamber_graph[u]:
                if w not in seen:
                    seen[w] = seen[u] + 1
                    q.append(w)
        raise ValueError("chambers not connected")

    def leq_pairs(self):
        """Strict closure relations as index pairs into ``self.fans``."""
        idx = {f.covector: i for i, f in enumerate(self.fans)}
        for f in self.fans:
            for g in self.fans:
                if f is not g and fan_leq(f, g):
                    yield idx[f.covector], idx[g.covector]


def build_dual_complex(a: Arrangement) -> DualComplex:
    return DualComplex(a)


def bounded_fans(a: Arrangement) -> list:
    return [f for f in enumerate_fans(a) if f.bounded]


def gate(dc: DualComplex, c, f) -> Fan:
    return dc.gate(c, f)


def project_face(dc: DualComplex, e, f) -> Fan:
    return dc.project_face(e, f)


def local_arrangement(a: Arrangement, v: Sequence) -> Arrangement:
    """Hyperplanes through *v*, translated so that *v* becomes the origin."""
    v = tuple(Fraction(x) for x in v)
    if len(v) != a.dim:
        raise ValueError("point dimension mismatch")
    hs = [h.translate(v) for h in a.hyperplanes if eval_sign(h, v) == 0]
    return Arrangement.build(a.dim, hs, [(-1, 1)] * a.dim)
