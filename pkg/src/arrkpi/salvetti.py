"""Salvetti complex of a finite arrangement.

A cell is stored as its canonical representative ``(F, v)``: ``F`` is a
fan covector and ``v`` a chamber of the dual face ``F^0``.  Its dimension
is the codimension of the fan.  The boundary of ``(F, v)`` consists of the
cells ``(G, gate(v, G))`` for fans ``G`` covering ``F`` in closure order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .arrangement import DualComplex, compose, fan_leq


@dataclass(frozen=True, order=True)
class SalvettiCell:
    face: tuple
    base: tuple

    def __repr__(self):
        f = "".join("+-0"[{1: 0, -1: 1, 0: 2}[s]] for s in self.face)
        b = "".join("+-"[s < 0] for s in self.base)
        return f"[{f}|{b}]"


class SalvettiComplex:
    def __init__(self, dual: DualComplex, cells=None):
        self.dual = dual
        n = dual.arrangement.dim
        self._fan_dim = {f.covector: f.dim for f in dual.fans}
        if cells is None:
            cells = [SalvettiCell(f.covector, v) for f in dual.fans for v in sorted(dual.face_of[f.covector])]
        self.cells = sorted(cells, key=lambda c: (n - self._fan_dim[c.face], c))
        self._cellset = frozenset(self.cells)
        self.by_dim: dict[int, list] = {}
        for c in self.cells:
            self.by_dim.setdefault(self.cell_dim(c), []).append(c)
        # covering relation in the fan poset, restricted to what we hold
        faces = {c.face for c in self.cells}
        self._covers = {
            f: [g for g in faces if self._fan_dim[g] == self._fan_dim[f] + 1 and fan_leq(f, g)]
            for f in faces
        }

    def cell_dim(self, c: SalvettiCell) -> int:
        return self.dual.arrangement.dim - self._fan_dim[c.face]

    def __contains__(self, c):
        return c in self._cellset

    def __len__(self):
        return len(self.cells)

    def counts(self) -> list:
        top = max(self.by_dim) if self.by_dim else -1
        return [len(self.by_dim.get(k, [])) for k in range(top + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def boundary(self, c: SalvettiCell) -> list:
        return sorted(SalvettiCell(g, compose(g, c.base)) for g in self._covers[c.face])

    def orientation(self, edge: SalvettiCell) -> tuple:
        """``(tail, head)`` chambers of a 1-cell; the tail is its base."""
        if self.cell_dim(edge) != 1:
            raise ValueError("not an edge")
        (a, b) = sorted(self.dual.face_of[edge.face])
        return (a, b) if edge.base == a else (b, a)

    def edges(self) -> list:
        return list(self.by_dim.get(1, []))

    def boundary_word(self, cell: SalvettiCell) -> list:
        """Boundary of a 2-cell as a cyclic list of ``(edge, +1|-1)``.

        The word starts at the base chamber and runs around the dual polygon;
        the first half follows edge orientation, the second half opposes it.
        """
        if self.cell_dim(cell) != 2:
            raise ValueError("not a 2-cell")
        cyc = polygon_cycle(self.dual, cell.face)
        i = cyc.index(cell.base)
        cyc = cyc[i:] + cyc[:i]
        word = []
        m = len(cyc)
        for j in range(m):
            u, w = cyc[j], cyc[(j + 1) % m]
            e = _edge_between(self.dual, u, w)
            cell_e = SalvettiCell(e, compose(e, cell.base))
            tail, _ = self.orientation(cell_e)
            word.append((cell_e, 1 if tail == u else -1))
        return word


def _edge_between(dual: DualComplex, u, w) -> tuple:
    return tuple(a if a == b else 0 for a, b in zip(u, w))


def polygon_cycle(dual: DualComplex, face: tuple) -> list:
    """Chambers of a codimension-2 dual face in cyclic order.

    The cycle starts at the least chamber and heads to its lesser neighbour,
    a fixed convention relative to the hyperplane ordering.
    """
    verts = set(dual.face_of[face])
    adj = {v: sorted(w for w in dual.chamber_graph[v] if w in verts) for v in verts}
    start = min(verts)
    cyc = [start]
    prev, cur = start, adj[start][0]
    while cur != start:
        cyc.append(cur)
        nxt = [w for w in adj[cur] if w != prev]
        prev, cur = cur, nxt[0]
    return cyc


def build_salvetti(dual: DualComplex) -> SalvettiComplex:
    return SalvettiComplex(dual)


def standard_subcomplex(s: SalvettiComplex, f) -> SalvettiComplex:
    """Preimage of the dual face of *f* under the forgetful map."""
    fc = f.covector if hasattr(f, "covector") else tuple(f)
    return SalvettiComplex(s.dual, [c for c in s.cells if fan_leq(fc, c.face)])


def salvetti_retraction(s: SalvettiComplex, f, cell: SalvettiCell) -> SalvettiCell:
    fc = f.covector if hasattr(f, "covector") else tuple(f)
    face = compose(fc, cell.face)
    return SalvettiCell(face, compose(face, cell.base))


def check_retraction_property(s: SalvettiComplex) -> list:
    """Exhaustively compare the retraction image of each standard subcomplex
    with the standard subcomplex of the projected face.  Returns failures."""
    bad = []
    subs = {f.covector: frozenset(standard_subcomplex(s, f).cells) for f in s.dual.fans}
    for f in s.dual.fans:
        for e in s.dual.fans:
            image = frozenset(salvetti_retraction(s, f, c) for c in subs[e.covector])
            target = s.dual.project_face(e, f).covector
            if image != subs[target]:
                bad.append((e.covector, f.covector))
    return bad


def check_retraction_cellular(s: SalvettiComplex, f) -> bool:
    """The retraction maps closed cells into closed cells and commutes with
    the forgetful map to the dual complex."""
    fc = f.covector if hasattr(f, "covector") else tuple(f)
    for c in s.cells:
        r = salvetti_retraction(s, fc, c)
        if r.face != compose(fc, c.face) or r not in s:
            return False
        closure_r = _closure(s, r)
        for b in s.boundary(c):
            if salvetti_retraction(s, fc, b) not in closure_r:
                return False
    return True


def _closure(s: SalvettiComplex, c: SalvettiCell) -> set:
    out = {c}
    todo = [c]
    while todo:
        x = todo.pop()
        for b in s.boundary(x):
            if b not in out:
                out.add(b)
                todo.append(b)
    return out


# --------------------------------------------------------------------------
# Artin presentations


@dataclass(frozen=True)
class Relation:
    i: int
    j: int
    m: int

    def words(self) -> tuple:
        lhs = tuple(self.i if t % 2 == 0 else self.j for t in range(self.m))
        rhs = tuple(self.j if t % 2 == 0 else self.i for t in range(self.m))
        return lhs, rhs

    def __str__(self):
        lhs, rhs = self.words()
        return "".join(f"s{t}" for t in lhs) + "=" + "".join(f"s{t}" for t in rhs)


@dataclass(frozen=True)
class ArtinPresentation:
    generators: tuple
    relations: tuple = field(default=())

    def __str__(self):
        gens = ",".join(f"s{g}" for g in self.generators)
        return f"<{gens} | " + ", ".join(map(str, self.relations)) + ">"

    def complex_counts(self) -> tuple:
        """Cells of the presentation complex in dimensions 0, 1, 2."""
        return (1, len(self.generators), len(self.relations))


def artin_presentation(vertices, edges: dict) -> ArtinPresentation:
    """Presentation from a Coxeter diagram.

    *edges* maps vertex pairs to labels ``m >= 3`` (``math.inf`` for no
    relation); absent pairs commute.
    """
    vertices = tuple(vertices)
    labels = {}
    for (a, b), m in edges.items():
        if a not in vertices or b not in vertices or a == b:
            raise ValueError(f"bad diagram edge {(a, b)}")
        if m != math.inf and (int(m) != m or m < 3):
            raise ValueError(f"invalid label {m} on {(a, b)}")
        labels[frozenset((a, b))] = m
    rels = []
    for a, b in combinations(vertices, 2):
        m = labels.get(frozenset((a, b)), 2)
        if m != math.inf:
            rels.append(Relation(a, b, int(m)))
    return ArtinPresentation(vertices, tuple(rels))


# --------------------------------------------------------------------------
# export


def to_dot(s: SalvettiComplex) -> str:
    names = {c: f"v{i}" for i, c in enumerate(sorted(c.covector for c in s.dual.chambers))}
    lines = ["digraph salvetti {"]
    for c, name in names.items():
        lines.append(f'  {name} [label="{"".join("+-"[x < 0] for x in c)}"];')
    for e in s.edges():
        t, h = s.orientation(e)
        lines.append(f"  {names[t]} -> {names[h]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(s: SalvettiComplex) -> dict:
    index = {c: i for i, c in enumerate(s.cells)}
    return {
        "counts": s.counts(),
        "euler_characteristic": s.euler_characteristic(),
        "cells": [
            {
                "face": list(c.face),
                "base": list(c.base),
                "dim": s.cell_dim(c),
                "boundary": [index[b] for b in s.boundary(c)],
            }
            for c in s.cells
        ],
    }
