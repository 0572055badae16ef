"""Arrangement families and the admissibility classifier.

The catalogue of local types is: ``B_m`` (all ``x_i = 0`` and ``x_i +- x_j = 0``),
``D_m`` (only ``x_i +- x_j = 0``, ``m >= 2``) and skewed ``A_m`` (``x_i = 0``
and ``x_i = x_j``, possibly reflected coordinatewise by a sign mask), plus
products of these in disjoint coordinate blocks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .arrangement import Arrangement, local_arrangement
from .exactgeom import Hyperplane, box_is_empty, make_box
from .kernels import subset_solve

KINDS = ("skewedA", "B", "D")


def _unit(n, i, s=1):
    v = [0] * n
    v[i] = s
    return v


def _pair(n, i, j, s):
    v = [0] * n
    v[i] = 1
    v[j] = s
    return v


def type_hyperplanes(kind: str, coords: Sequence[int], n: int, mask=None) -> frozenset:
    """Canonical hyperplanes of one catalogue block embedded in R^n."""
    coords = list(coords)
    out = []
    if kind in ("skewedA", "B"):
        out += [_unit(n, i) for i in coords]
    for a, b in itertools.combinations(range(len(coords)), 2):
        i, j = coords[a], coords[b]
        if kind == "skewedA":
            eps = 1 if mask is None else mask[a] * mask[b]
            out.append(_pair(n, i, j, -eps))
        else:
            out.append(_pair(n, i, j, 1))
            out.append(_pair(n, i, j, -1))
    return frozenset(Hyperplane.make(v, 0) for v in out)


def reflection_arrangement(kind: str, n: int, region=None) -> Arrangement:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1 or (kind == "D" and n < 2):
        raise ValueError(f"invalid rank {n} for type {kind}")
    hs = sorted(type_hyperplanes(kind, range(n), n), key=_hkey)
    return Arrangement.build(n, hs, region)


def _hkey(h: Hyperplane):
    # coordinate hyperplanes first, then pairs in lexicographic order
    supp = tuple(i for i, a in enumerate(h.normal) if a)
    return (len(supp), supp, tuple(-a for a in h.normal), h.offset)


def family_H(k: int, n: int) -> Arrangement:
    """Odd coordinate levels up to ``2k+1`` plus ``x_i +- x_j = 0``.

    The region is ``[-(2k+2), 2k+2]^n`` so every bounded fan lies inside.
    """
    if k < 1 or n < 2:
        raise ValueError("family_H needs k >= 1 and n >= 2")
    hs = []
    for i in range(n):
        for c in range(-2 * k - 1, 2 * k + 2, 2):
            hs.append((_unit(n, i), c))
    for i, j in itertools.combinations(range(n), 2):
        hs.append((_pair(n, i, j, 1), 0))
        hs.append((_pair(n, i, j, -1), 0))
    r = 2 * k + 2
    return Arrangement.build(n, hs, [(-r, r)] * n)


def _ints_in(lo: Fraction, hi: Fraction):
    return range(math.ceil(lo), math.floor(hi) + 1)


def family_K(k: int, n: int, box) -> Arrangement:
    """All hyperplanes of ``x_i in Z``, ``x_i + x_j in 2kZ+1``,
    ``x_i - x_j in 2kZ`` that meet *box*."""
    if k < 1 or n < 1:
        raise ValueError("family_K needs k >= 1 and n >= 1")
    box = make_box(box)
    if len(box) != n:
        raise ValueError("box dimension mismatch")
    if box_is_empty(box):
        return Arrangement(n, (), box)
    hs = []
    for i in range(n):
        for c in _ints_in(*box[i]):
            hs.append((_unit(n, i), c))
    for i, j in itertools.combinations(range(n), 2):
        (li, hi_), (lj, hj) = box[i], box[j]
        for c in _ints_in(li + lj, hi_ + hj):
            if c % (2 * k) == 1 % (2 * k):
                hs.append((_pair(n, i, j, 1), c))
        for c in _ints_in(li - hj, hi_ - lj):
            if c % (2 * k) == 0:
                hs.append((_pair(n, i, j, -1), c))
    return Arrangement.build(n, hs, box)


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Block:
    kind: str
    coords: tuple
    mask: Optional[tuple] = None

    def to_json(self):
        d = {"kind": self.kind, "coords": [c + 1 for c in self.coords]}
        if self.mask is not None:
            d["mask"] = "".join("+" if m > 0 else "-" for m in self.mask)
        return d

    def __str__(self):
        s = f"{self.kind}{len(self.coords)}{{{','.join(str(c + 1) for c in self.coords)}}}"
        if self.mask is not None:
            s += "(" + "".join("+" if m > 0 else "-" for m in self.mask) + ")"
        return s


@dataclass(frozen=True)
class AdmissibleType:
    factors: tuple

    def __str__(self):
        return " x ".join(map(str, self.factors))

    def to_json(self):
        return [b.to_json() for b in self.factors]

    def kinds(self) -> tuple:
        return tuple(sorted((b.kind, b.coords) for b in self.factors))


@dataclass(frozen=True)
class NotAdmissible:
    reason: str

    def __bool__(self):
        return False

    def to_json(self):
        return {"not_admissible": self.reason}


def _match_block(hset: frozenset, coords: tuple, n: int) -> Optional[Block]:
    m = len(coords)
    for mask in itertools.product((1, -1), repeat=m - 1):
        mask = (1,) + mask
        if type_hyperplanes("skewedA", coords, n, mask) == hset:
            return Block("skewedA", coords, mask)
    if type_hyperplanes("B", coords, n) == hset:
        return Block("B", coords)
    if m >= 2 and type_hyperplanes("D", coords, n) == hset:
        return Block("D", coords)
    return None


def classify_local(a: Arrangement):
    """Match a central arrangement against the admissible catalogue."""
    n = a.dim
    if not a.is_central():
        return NotAdmissible("arrangement is not central")
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    touched = set()
    for h in a.hyperplanes:
        supp = [i for i, c in enumerate(h.normal) if c]
        if len(supp) > 2:
            return NotAdmissible(f"hyperplane {h} involves more than two coordinates")
        touched.update(supp)
        if len(supp) == 2:
            parent[find(supp[0])] = find(supp[1])
    if len(touched) < n:
        missing = sorted(set(range(n)) - touched)
        return NotAdmissible(f"coordinates {[i + 1 for i in missing]} lie in no hyperplane")
    blocks: dict[int, list] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    factors = []
    for coords in sorted(blocks.values()):
        coords = tuple(coords)
        cs = set(coords)
        hset = frozenset(h for h in a.hyperplanes if any(h.normal[i] for i in cs))
        b = _match_block(hset, coords, n)
        if b is None:
            return NotAdmissible(f"block {[c + 1 for c in coords]} matches no catalogue type")
        factors.append(b)
    return AdmissibleType(tuple(factors))


# --------------------------------------------------------------------------
# vertices


def _in_window(p, window, strict=True) -> bool:
    if strict:
        return all(lo < x < hi for x, (lo, hi) in zip(p, window))
    return all(lo <= x <= hi for x, (lo, hi) in zip(p, window))


def arrangement_vertices(a: Arrangement, window=None, strict=True, chunk=200_000) -> list:
    """All 0-dimensional intersections of *a* inside *window* (default: region).

    Every n-subset of hyperplanes is solved exactly by integer determinants.
    """
    n = a.dim
    window = make_box(window) if window is not None else a.region
    m = len(a.hyperplanes)
    if m < n:
        return []
    A = np.array([h.normal for h in a.hyperplanes], dtype=np.int64)
    b = np.array([h.offset for h in a.hyperplanes], dtype=np.int64)
    seen = set()
    combos = itertools.combinations(range(m), n)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        block = block.reshape(-1, n)
        num, det = subset_solve(A, b, block)
        good = det != 0
        for row, d in zip(num[good].tolist(), det[good].tolist()):
            seen.add(tuple(Fraction(x, d) for x in row))
    return sorted(p for p in seen if _in_window(p, window, strict))


@dataclass
class VertexReport:
    vertex: tuple
    result: object

    @property
    def ok(self) -> bool:
        return isinstance(self.result, AdmissibleType)

    def to_json(self):
        return {
            "vertex": [str(x) for x in self.vertex],
            "factors": self.result.to_json(),
        }


@dataclass
class AdmissibilityReport:
    vertices: list

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.vertices)

    def failures(self) -> list:
        return [v for v in self.vertices if not v.ok]

    def to_json(self):
        return {
            "admissible": self.ok,
            "vertex_count": len(self.vertices),
            "vertices": [v.to_json() for v in self.vertices],
        }


def verify_admissible(a: Arrangement, window=None) -> AdmissibilityReport:
    """Classify the local arrangement at every vertex strictly inside *window*.

    The window defaults to the arrangement's region and must lie inside it,
    so every hyperplane through a window vertex is part of *a*.
    """
    if window is not None:
        window = make_box(window)
        if any(wl < rl or wh > rh for (wl, wh), (rl, rh) in zip(window, a.region)):
            raise ValueError("window must lie inside the arrangement region")
    reports = []
    for v in arrangement_vertices(a, window):
        reports.append(VertexReport(v, classify_local(local_arrangement(a, v))))
    return AdmissibilityReport(reports)


def parity_prediction(theta: Sequence, k: int) -> tuple:
    """Block structure at a vertex of the ``K`` family predicted by congruences.

    Integer coordinates split into skewed-A classes under
    ``i ~ j  iff  x_i - x_j in 2kZ or x_i + x_j in 2kZ+1``; non-integer
    coordinates (all in ``1/2 + kZ``) split into two D blocks by the parity
    of ``(x_i - 1/2)/k``.  Returns sorted ``(kind, coords)`` pairs.
    """
    theta = [Fraction(x) for x in theta]
    n = len(theta)
    ints = [i for i in range(n) if theta[i].denominator == 1]
    halves = [i for i in range(n) if theta[i].denominator != 1]
    blocks = []
    parent = {i: i for i in ints}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in itertools.combinations(ints, 2):
        if (theta[i] - theta[j]) % (2 * k) == 0 or (theta[i] + theta[j] - 1) % (2 * k) == 0:
            parent[find(i)] = find(j)
    classes: dict[int, list] = {}
    for i in ints:
        classes.setdefault(find(i), []).append(i)
    blocks += [("skewedA", tuple(c)) for c in classes.values()]
    groups: dict[int, list] = {}
    for i in halves:
        q = (theta[i] - Fraction(1, 2)) / k
        if q.denominator != 1:
            raise ValueError(f"coordinate {theta[i]} is not in 1/2 + kZ")
        groups.setdefault(int(q) % 2, []).append(i)
    blocks += [("D", tuple(g)) for g in groups.values()]
    return tuple(sorted(blocks))


def h_prediction(theta: Sequence) -> tuple:
    """Block structure at a vertex of the ``H`` family.

    Coordinates group by absolute value.  A group at an odd level carries its
    coordinate hyperplanes and one diagonal per pair (skewed A); the group at
    0 carries both diagonals and no coordinate hyperplane (D).
    """
    theta = [Fraction(x) for x in theta]
    groups: dict = {}
    for i, x in enumerate(theta):
        groups.setdefault(abs(x), []).append(i)
    blocks = []
    for level, coords in groups.items():
        if level == 0:
            if len(coords) < 2:
                raise ValueError("a lone zero coordinate is not pinned by any hyperplane")
            blocks.append(("D", tuple(coords)))
        elif level.denominator == 1 and level % 2 == 1:
            blocks.append(("skewedA", tuple(coords)))
        else:
            raise ValueError(f"coordinate level {level} is not odd")
    return tuple(sorted(blocks))
