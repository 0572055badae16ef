"""Finite posets: validation, bowtie and flag conditions, lattices, grading,
order complexes, products and exhaustive generation up to isomorphism.

A poset is stored as a list of elements plus a reflexive boolean matrix
``leq`` with ``leq[i, j]`` meaning ``elements[i] <= elements[j]``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .kernels import find_bowtie, find_flag_violation, order_violation


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    """Outcome of a property scan; truthy iff the property holds."""

    ok: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


_KIND = ("reflexivity", "antisymmetry", "transitivity")


class FinitePoset:
    def __init__(self, elements: Sequence, leq, validate: bool = True):
        self.elements = list(elements)
        self.leq = np.array(leq, dtype=bool)
        n = len(self.elements)
        if self.leq.shape != (n, n):
            raise PosetError("leq matrix shape does not match element count")
        if validate:
            kind, i, j, k = order_violation(self.leq)
            if kind >= 0:
                names = [self.elements[t] for t in (i, j, k)]
                raise PosetError(f"{_KIND[kind]} fails at {names}")
        self.index = {e: i for i, e in enumerate(self.elements)}

    # construction -----------------------------------------------------------------

    @classmethod
    def from_pairs(cls, elements, pairs: Iterable, close: bool = True) -> "FinitePoset":
        """From index pairs ``(i, j)`` meaning ``i <= j``; optionally close
        reflexively and transitively first."""
        n = len(elements)
        L = np.eye(n, dtype=bool)
        for i, j in pairs:
            if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))) or not (
                0 <= i < n and 0 <= j < n
            ):
                raise PosetError(f"pair {(i, j)} is not a pair of element indices")
            L[i, j] = True
        if close:
            L = transitive_closure(L)
        return cls(elements, L)

    @classmethod
    def from_function(cls, elements, leq_fn) -> "FinitePoset":
        els = list(elements)
        L = np.array([[leq_fn(a, b) for b in els] for a in els], dtype=bool)
        return cls(els, L)

    @classmethod
    def from_json(cls, doc) -> "FinitePoset":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls.from_pairs(doc["elements"], [tuple(p) for p in doc["leq"]])

    def to_json(self) -> dict:
        pairs = [[int(i), int(j)] for i, j in zip(*np.nonzero(self.leq)) if i != j]
        return {"elements": [_jsonable(e) for e in self.elements], "leq": pairs}

    # basic queries ----------------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def le(self, a, b) -> bool:
        return bool(self.leq[self.index[a], self.index[b]])

    def lt(self, a, b) -> bool:
        return a != b and self.le(a, b)

    @property
    def strict(self) -> np.ndarray:
        return self.leq & ~np.eye(len(self), dtype=bool)

    def covers(self) -> np.ndarray:
        """``cov[i, j]`` iff ``j`` covers ``i``."""
        S = self.strict.astype(np.int32)
        return self.strict & ((S @ S) == 0)

    def minimum(self) -> Optional[int]:
        rows = np.flatnonzero(self.leq.all(axis=1))
        return int(rows[0]) if rows.size else None

    def maximum(self) -> Optional[int]:
        cols = np.flatnonzero(self.leq.all(axis=0))
        return int(cols[0]) if cols.size else None

    def is_bounded(self) -> bool:
        return self.minimum() is not None and self.maximum() is not None

    def interval(self, a, b) -> list:
        i, j = self.index[a], self.index[b]
        return [self.elements[k] for k in np.flatnonzero(self.leq[i] & self.leq[:, j])]

    def subposet(self, keep) -> "FinitePoset":
        idx = [i for i, e in enumerate(self.elements) if keep(e)]
        return FinitePoset([self.elements[i] for i in idx], self.leq[np.ix_(idx, idx)], validate=False)

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.elements, self.leq.T, validate=False)

    def with_bottom(self, bottom="0") -> "FinitePoset":
        n = len(self)
        L = np.zeros((n + 1, n + 1), dtype=bool)
        L[0, :] = True
        L[1:, 1:] = self.leq
        return FinitePoset([bottom] + self.elements, L, validate=False)

    def with_top(self, top="1") -> "FinitePoset":
        return self.dual().with_bottom(top).dual()

    def chain_lengths(self) -> tuple:
        """Matrices of shortest and longest maximal-chain lengths between
        comparable pairs (``-1`` where incomparable)."""
        n = len(self)
        cov = self.covers()
        order = _linear_extension(self.leq)
        lo = np.full((n, n), -1, dtype=np.int64)
        hi = np.full((n, n), -1, dtype=np.int64)
        for a in range(n):
            lo[a, a] = hi[a, a] = 0
            for b in order:
                if b == a or not self.leq[a, b]:
                    continue
                preds = [p for p in np.flatnonzero(cov[:, b]) if self.leq[a, p]]
                lo[a, b] = 1 + min(lo[a, p] for p in preds)
                hi[a, b] = 1 + max(hi[a, p] for p in preds)
        return lo, hi

    def rank_function(self) -> Optional[dict]:
        """Rank from the minimum when the poset is graded and has one."""
        m = self.minimum()
        if m is None or not is_graded(self):
            return None
        _, hi = self.chain_lengths()
        return {e: int(hi[m, i]) for i, e in enumerate(self.elements)}

    def height(self) -> int:
        _, hi = self.chain_lengths()
        return int(hi.max())

    def join(self, a, b):
        return _extremal_bound(self.leq, self.index[a], self.index[b], self.elements)

    def meet(self, a, b):
        return _extremal_bound(self.leq.T, self.index[a], self.index[b], self.elements)


def _jsonable(e):
    if isinstance(e, (str, int, float, bool)) or e is None:
        return e
    if isinstance(e, tuple):
        return [_jsonable(x) for x in e]
    return str(e)


def _linear_extension(L) -> list:
    # sorting by number of elements below is a linear extension
    return list(np.argsort(L.sum(axis=0), kind="stable"))


def _extremal_bound(L, i, j, elements):
    ub = np.flatnonzero(L[i] & L[j])
    for u in ub:
        if L[u, ub].all():
            return elements[u]
    return None


def transitive_closure(L) -> np.ndarray:
    L = np.array(L, dtype=bool)
    n = L.shape[0]
    for k in range(n):
        L |= L[:, k:k + 1] & L[k:k + 1, :]
    return L


# ---------------------------------------------------------------------------------
# properties


def is_partial_order(L) -> Check:
    kind, i, j, k = order_violation(np.asarray(L, dtype=bool))
    return Check(kind < 0, None if kind < 0 else (_KIND[kind], i, j, k))


def is_bowtie_free(p: FinitePoset, mask=None) -> Check:
    w = find_bowtie(p.leq, mask)
    return Check(w is None, None if w is None else tuple(p.elements[i] for i in w))


def is_upward_flag(p: FinitePoset, mask=None) -> Check:
    w = find_flag_violation(p.leq, mask)
    return Check(w is None, None if w is None else tuple(p.elements[i] for i in w))


def is_downward_flag(p: FinitePoset, mask=None) -> Check:
    w = find_flag_violation(p.leq.T, mask)
    return Check(w is None, None if w is None else tuple(p.elements[i] for i in w))


def is_flag(p: FinitePoset) -> Check:
    up = is_upward_flag(p)
    return up if not up else is_downward_flag(p)


def is_graded(p: FinitePoset) -> bool:
    """Every interval has all maximal chains of one length."""
    lo, hi = p.chain_lengths()
    return bool((lo == hi).all())


def is_lattice(p: FinitePoset) -> bool:
    """All pairs have joins and meets.  Requires a bounded graded poset."""
    if not p.is_bounded():
        raise PosetError("is_lattice needs a bounded poset")
    if not is_graded(p):
        raise PosetError("is_lattice needs a graded poset")
    return _all_pairs_have_joins(p.leq) and _all_pairs_have_joins(p.leq.T)


def _all_pairs_have_joins(L) -> bool:
    n = L.shape[0]
    for i in range(n):
        U = L[i] & L  # rows j: common upper bounds of i and j
        # a least common upper bound u satisfies U[j] subset of up(u)
        for j in range(i + 1, n):
            ub = np.flatnonzero(U[j])
            if not L[np.ix_(ub, ub)].all(axis=1).any():
                return False
    return True


# ---------------------------------------------------------------------------------
# order complexes and flagness


def chains(p: FinitePoset, maximal_only: bool = False) -> list:
    """All nonempty chains, or only the maximal ones (index tuples, increasing)."""
    S = p.strict
    if maximal_only:
        cov = p.covers()
        out = []

        def climb(chain):
            ups = np.flatnonzero(cov[chain[-1]])
            if ups.size == 0:
                out.append(tuple(chain))
            for v in ups:
                climb(chain + [int(v)])

        for s in np.flatnonzero(~S.any(axis=0)):
            climb([int(s)])
        return out
    out = []

    def extend(chain):
        out.append(tuple(chain))
        for v in np.flatnonzero(S[chain[-1]]):
            extend(chain + [int(v)])

    for s in range(len(p)):
        extend([s])
    return out


def maximal_chains(p: FinitePoset) -> list:
    return chains(p, maximal_only=True)


def order_complex(p: FinitePoset) -> "SimplicialComplex":
    return SimplicialComplex.from_facets(maximal_chains(p))


@dataclass
class SimplicialComplex:
    facets: list
    vertices: list = field(default_factory=list)

    @classmethod
    def from_facets(cls, facets) -> "SimplicialComplex":
        fs = {frozenset(f) for f in facets}
        fs = [f for f in fs if not any(f < g for g in fs)]
        verts = sorted({v for f in fs for v in f})
        return cls(sorted(fs, key=lambda f: sorted(f)), verts)

    def contains(self, simplex) -> bool:
        s = frozenset(simplex)
        return any(s <= f for f in self.facets)

    def edges(self) -> set:
        out = set()
        for f in self.facets:
            for a, b in itertools.combinations(sorted(f), 2):
                out.add((a, b))
        return out

    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def f_vector(self) -> list:
        faces = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(sorted(f), k))
        out = [0] * (self.dimension() + 1)
        for s in faces:
            out[len(s) - 1] += 1
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))


def maximal_cliques(vertices, adjacent) -> list:
    """Bron-Kerbosch with pivoting; *adjacent* maps a vertex to its neighbour set."""
    out = []

    def bk(R, P, X):
        if not P and not X:
            out.append(frozenset(R))
            return
        pivot = max(P | X, key=lambda u: len(adjacent[u] & P))
        for v in list(P - adjacent[pivot]):
            bk(R | {v}, P & adjacent[v], X & adjacent[v])
            P = P - {v}
            X = X | {v}

    bk(set(), set(vertices), set())
    return out


def is_flag_complex(c: SimplicialComplex) -> Check:
    """Every clique of the 1-skeleton spans a simplex."""
    adj = {v: set() for v in c.vertices}
    for a, b in c.edges():
        adj[a].add(b)
        adj[b].add(a)
    for q in maximal_cliques(c.vertices, adj):
        if not c.contains(q):
            return Check(False, tuple(sorted(q)))
    return Check(True)


# ---------------------------------------------------------------------------------
# products


def product_poset(*posets: FinitePoset) -> FinitePoset:
    """Add a minimum to each factor, take the product order, drop the
    all-minimum element.  Elements are tuples with ``None`` for the added
    minimum."""
    factors = [[None] + list(p.elements) for p in posets]
    elems = [e for e in itertools.product(*factors) if any(x is not None for x in e)]

    def le1(p, a, b):
        return a is None or (b is not None and p.le(a, b))

    L = np.array(
        [[all(le1(p, x, y) for p, x, y in zip(posets, a, b)) for b in elems] for a in elems],
        dtype=bool,
    )
    return FinitePoset(elems, L, validate=False)


# ---------------------------------------------------------------------------------
# exhaustive generation


def _canonical_key(L: np.ndarray) -> bytes:
    n = L.shape[0]
    if n == 0:
        return b""
    S = L & ~np.eye(n, dtype=bool)
    colors = [0] * n
    for _ in range(n):
        sig = [
            (colors[i], tuple(sorted(colors[j] for j in np.flatnonzero(S[:, i]))),
             tuple(sorted(colors[j] for j in np.flatnonzero(S[i]))))
            for i in range(n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colors)) and new == colors:
            break
        colors = new
    classes = {}
    for i, c in enumerate(colors):
        classes.setdefault(c, []).append(i)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [i for g in perms for i in g]
        key = np.packbits(S[np.ix_(order, order)]).tobytes()
        if best is None or key < best:
            best = key
    return bytes([n]) + best


def _down_sets(L: np.ndarray):
    """All down-closed subsets (order ideals) as boolean masks."""
    n = L.shape[0]
    order = _linear_extension(L)
    out = []

    def rec(k, mask):
        if k == n:
            out.append(mask.copy())
            return
        v = order[k]
        rec(k + 1, mask)
        below = np.flatnonzero(L[:, v])
        if all(mask[u] for u in below if u != v):
            mask[v] = True
            rec(k + 1, mask)
            mask[v] = False

    rec(0, np.zeros(n, dtype=bool))
    return out


def all_posets(max_size: int) -> dict:
    """Unlabelled posets by size, ``{size: [leq matrices]}``.

    Posets of size ``n+1`` arise from posets of size ``n`` by adjoining a
    new maximal element above an order ideal.
    """
    layers = {0: [np.zeros((0, 0), dtype=bool)]}
    for n in range(max_size):
        seen = {}
        for L in layers[n]:
            for D in _down_sets(L):
                M = np.zeros((n + 1, n + 1), dtype=bool)
                M[:n, :n] = L
                M[:n, n] = D
                M[n, n] = True
                key = _canonical_key(M)
                if key not in seen:
                    seen[key] = M
        layers[n + 1] = list(seen.values())
    return layers


def iter_posets(max_size: int):
    for n, mats in all_posets(max_size).items():
        for L in mats:
            yield FinitePoset(list(range(n)), L, validate=False)
