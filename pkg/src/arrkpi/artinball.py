"""Finite balls in Artin groups and in spherical Deligne complexes.

The Cayley ball of radius ``L`` is the set of elements whose left normal
form ``Delta^p a_1 ... a_r`` satisfies ``p >= -L`` and ``p + r <= L``, i.e.
the interval between ``Delta^-L`` and ``Delta^L``.  Multiplying by a
generator or its inverse moves ``p`` and ``p + r`` by at most one, so the
*margin* ``L - max(-p, p + r)`` of an element bounds from below its word
distance to the outside of the ball.

For the skewed ``A_n`` diagram the Deligne ball has one vertex per connected
component of ``gA_T`` inside the ball, ``T`` ranging over the maximal
standard parabolics ``S - {s_i}``.  The vertex of type ``i`` containing ``g``
projects to ``pi(g) . r_i`` in the cube model, where ``r_i`` has ``i``
leading ones.  All adjacency is witnessed by elements of the ball, so
non-existence claims are only trusted on vertices with enough margin.
"""
from __future__ import annotations

import itertools
import multiprocessing
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .coxmodel import CoxVertex, an_sphere
from .garside import (
    BraidElement,
    UnsupportedDiagram,
    coxeter_group,
    project,
    proper_simples,
    same_coset,
    successors,
    times_generator,
)

CAYLEY_DIAGRAMS = ("A1", "A2", "A3", "B2", "B3", "D3")


# --------------------------------------------------------------------------
# Cayley balls


@dataclass
class CayleyBall:
    diagram: str
    L: int
    elements: list
    index: dict
    edges: np.ndarray  # rows (tail, generator, head) with head = tail * s_generator

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x: BraidElement) -> bool:
        return x in self.index

    @cached_property
    def margin(self) -> np.ndarray:
        return np.array([self.L - max(-x.inf, x.sup) for x in self.elements], dtype=np.int64)

    @property
    def rank(self) -> int:
        return coxeter_group(self.diagram).rank

    def to_dot(self) -> str:
        lines = [f'digraph "cayley_{self.diagram}_{self.L}" {{']
        for i, x in enumerate(self.elements):
            lines.append(f'  e{i} [label="{x}"];')
        for t, g, h in self.edges.tolist():
            lines.append(f'  e{t} -> e{h} [label="s{g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _sequences(succ, simples, r):
    if r == 0:
        yield ()
        return
    stack = [(a,) for a in reversed(simples)]
    while stack:
        seq = stack.pop()
        if len(seq) == r:
            yield seq
            continue
        stack.extend(seq + (b,) for b in reversed(succ[seq[-1]]))


def cayley_ball(diagram: str, L: int) -> CayleyBall:
    W = coxeter_group(diagram)
    if W.name not in CAYLEY_DIAGRAMS:
        raise UnsupportedDiagram(f"Cayley balls support {', '.join(CAYLEY_DIAGRAMS)}, not {W.name}")
    if L < 0:
        raise ValueError("radius must be nonnegative")
    succ = successors(W)
    simples = proper_simples(W)
    elements = []
    for p in range(-L, L + 1):
        for r in range(0, L - p + 1):
            elements.extend(BraidElement(W.name, p, seq) for seq in _sequences(succ, simples, r))
    elements.sort(key=lambda x: (max(-x.inf, x.sup), x.inf, x.factors))
    index = {x: i for i, x in enumerate(elements)}
    edges = []
    for t, x in enumerate(elements):
        for g in range(1, W.rank + 1):
            h = index.get(times_generator(x, g))
            if h is not None:
                edges.append((t, g, h))
    return CayleyBall(W.name, L, elements, index, np.array(edges, dtype=np.int64).reshape(-1, 3))


# --------------------------------------------------------------------------
# Deligne balls


@dataclass
class DeligneVertex:
    face: CoxVertex
    members: frozenset  # element ids of the ball
    margin: int
    u_type: Optional[int] = None  # real vertices only
    ends: Optional[tuple] = None  # fake vertices: (non-negative end, non-positive end)

    @property
    def real(self) -> bool:
        return self.ends is None

    @property
    def s_type(self) -> int:
        return self.face.s_type


def _masks(v: CoxVertex) -> tuple:
    pos = sum(1 << i for i in v.pos)
    neg = sum(1 << i for i in v.neg)
    return pos, neg


def _contained(a: tuple, b: tuple) -> bool:
    return a[0] & ~b[0] == 0 and a[1] & ~b[1] == 0


def type_ray(n: int, i: int) -> CoxVertex:
    return CoxVertex((1,) * i + (0,) * (n - i))


def face_of(perm: tuple, n: int, i: int) -> CoxVertex:
    """``w . r_i`` for a permutation ``w`` of ``{0, ..., n}``.

    ``w`` permutes the homogeneous coordinates ``(y_0, ..., y_n)`` and the
    cube coordinates are ``x_k = y_k - y_0``.
    """
    y = [0] + [1] * i + [0] * (n - i)
    wy = [0] * (n + 1)
    for p in range(n + 1):
        wy[perm[p]] = y[p]
    return CoxVertex(tuple(wy[k] - wy[0] for k in range(1, n + 1)))


class DeligneBall:
    def __init__(self, ball: CayleyBall):
        W = coxeter_group(ball.diagram)
        if W.kind != "A" or W.rank > 3:
            raise UnsupportedDiagram("Deligne balls are built for skewed A_n with n <= 3")
        self.ball = ball
        self.n = n = W.rank
        N = len(ball)
        perms = [W.perms[project(x)] for x in ball.elements]
        margin = ball.margin.tolist()
        self.vertices: list = []
        self.chamber = np.empty((N, n), dtype=np.int64)
        for i in range(1, n + 1):
            parent = list(range(N))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for t, g, h in ball.edges.tolist():
                if g != i:
                    a, b = find(t), find(h)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
            comps = defaultdict(list)
            for x in range(N):
                comps[find(x)].append(x)
            for root in sorted(comps):
                members = comps[root]
                faces = {face_of(perms[x], n, i) for x in members}
                if len(faces) != 1:
                    raise RuntimeError(f"component of type {i} projects to {len(faces)} sphere vertices")
                vid = len(self.vertices)
                self.vertices.append(
                    DeligneVertex(faces.pop(), frozenset(members), max(margin[x] for x in members), u_type=i)
                )
                self.chamber[members, i - 1] = vid
        self.real_count = len(self.vertices)
        fake_members = defaultdict(set)
        for x in range(N):
            row = self.chamber[x].tolist()
            for a, b in itertools.permutations(row, 2):
                fa, fb = self.vertices[a].face, self.vertices[b].face
                if fa.nonnegative and fb.nonpositive:
                    fake_members[(a, b)].add(x)
        self.fake_of = {}
        for (a, b) in sorted(fake_members):
            mem = fake_members[(a, b)]
            fa, fb = self.vertices[a].face, self.vertices[b].face
            face = CoxVertex(tuple(p if p else q for p, q in zip(fa.coords, fb.coords)))
            self.fake_of[(a, b)] = len(self.vertices)
            self.vertices.append(DeligneVertex(face, frozenset(mem), max(margin[x] for x in mem), ends=(a, b)))
        masks = [_masks(v.face) for v in self.vertices]
        self.adj = [set() for _ in self.vertices]
        for x in range(N):
            cell = self.facet(x)
            for a, b in itertools.combinations(cell, 2):
                if _contained(masks[a], masks[b]) or _contained(masks[b], masks[a]):
                    self.adj[a].add(b)
                    self.adj[b].add(a)

    # structure ---------------------------------------------------------------------

    def facet(self, x: int) -> list:
        """Vertices of the subdivided real chamber of element ``x``."""
        row = self.chamber[x].tolist()
        cell = list(row)
        for a, b in itertools.permutations(row, 2):
            f = self.fake_of.get((a, b))
            if f is not None:
                cell.append(f)
        return cell

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def s_types(self) -> np.ndarray:
        return np.array([v.s_type for v in self.vertices], dtype=np.int64)

    @cached_property
    def margins(self) -> np.ndarray:
        return np.array([v.margin for v in self.vertices], dtype=np.int64)

    def up(self, v: int) -> set:
        s = self.s_types
        return {w for w in self.adj[v] if s[w] > s[v]}

    def down(self, v: int) -> set:
        s = self.s_types
        return {w for w in self.adj[v] if s[w] < s[v]}

    def le(self, v: int, w: int) -> bool:
        return v == w or (w in self.adj[v] and self.s_types[v] < self.s_types[w])

    def real_edges(self) -> set:
        out = set()
        for row in self.chamber.tolist():
            for a, b in itertools.combinations(sorted(row), 2):
                out.add((a, b))
        return out

    def u_neighbors(self, a: int) -> set:
        """Real vertices sharing a chamber with real vertex ``a``."""
        cache = self.__dict__.setdefault("_u_nb", {})
        if a not in cache:
            rows = self.chamber[sorted(self.vertices[a].members)]
            cache[a] = set(np.unique(rows).tolist()) - {a}
        return cache[a]

    def u_adjacent(self, a: int, b: int) -> bool:
        return a != b and bool(self.vertices[a].members & self.vertices[b].members)

    def u_le(self, a: int, b: int) -> bool:
        return a == b or (self.u_adjacent(a, b) and self.vertices[a].u_type < self.vertices[b].u_type)

    def guarded(self, margin: int) -> np.ndarray:
        return self.margins >= margin

    def margin_histogram(self) -> dict:
        return dict(sorted(Counter(self.margins.tolist()).items()))

    def identity_apartment(self) -> tuple:
        """Real vertices and chambers spanned by the lifts of the simple elements."""
        W = coxeter_group(self.ball.diagram)
        ids = []
        for a in range(W.order):
            x = BraidElement(W.name, 1, ()) if a == W.w0 else BraidElement(W.name, 0, (a,) if a else ())
            ids.append(self.ball.index[x])
        chambers = [frozenset(self.chamber[x].tolist()) for x in ids]
        verts = sorted(set().union(*chambers))
        return verts, chambers

    def to_json(self) -> dict:
        return {
            "diagram": self.ball.diagram,
            "L": self.ball.L,
            "element_count": len(self.ball),
            "real_vertex_count": self.real_count,
            "fake_vertex_count": len(self.vertices) - self.real_count,
            "margin_histogram": {str(k): v for k, v in self.margin_histogram().items()},
        }

    def to_dot(self) -> str:
        lines = [f'graph "deligne_{self.ball.diagram}_{self.ball.L}" {{']
        for i, v in enumerate(self.vertices):
            shape = "circle" if v.real else "box"
            lines.append(f'  v{i} [label="{v.face}", shape={shape}];')
        for a in range(len(self.vertices)):
            for b in sorted(self.adj[a]):
                if a < b:
                    lines.append(f"  v{a} -- v{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def deligne_ball(n: int, L: int) -> DeligneBall:
    """Deligne ball of the skewed ``A_n`` diagram, ``1 <= n <= 3``."""
    if not 1 <= n <= 3:
        raise UnsupportedDiagram("Deligne balls are built for skewed A_n with n <= 3")
    return DeligneBall(cayley_ball(f"A{n}", L))


# --------------------------------------------------------------------------
# reports


@dataclass
class BallReport:
    check: str
    checked: int = 0
    violations: list = field(default_factory=list)
    histogram: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, margin: int, violation=None):
        self.checked += 1
        self.histogram[int(margin)] += 1
        if violation is not None:
            self.violations.append(violation)

    def merge(self, other: "BallReport") -> "BallReport":
        self.checked += other.checked
        self.violations += other.violations
        self.histogram.update(other.histogram)
        return self

    def to_json(self, limit: int = 20) -> dict:
        return {
            "check": self.check,
            "checked_count": self.checked,
            "violation_count": len(self.violations),
            "margin_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "counterexamples": self.violations[:limit],
        }


_WORKER_BALL = None


def _init_worker(db):
    global _WORKER_BALL
    _WORKER_BALL = db


def _run_chunk(args):
    fn, starts, kw = args
    return fn(_WORKER_BALL, starts, **kw)


def _scan(fn, db: DeligneBall, starts: list, jobs: int, **kw) -> BallReport:
    if jobs <= 1 or len(starts) < 2:
        return fn(db, starts, **kw)
    chunks = [starts[k::jobs] for k in range(jobs)]
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(jobs, mp_context=ctx, initializer=_init_worker, initargs=(db,)) as ex:
        parts = list(ex.map(_run_chunk, [(fn, c, kw) for c in chunks]))
    out = parts[0]
    for p in parts[1:]:
        out.merge(p)
    out.violations.sort(key=repr)
    return out


def _describe(db: DeligneBall, v: int) -> dict:
    x = db.vertices[v]
    return {"id": v, "face": list(x.face.coords), "margin": x.margin, "real": x.real}


# partial order ---------------------------------------------------------------------


def _po_chunk(db: DeligneBall, starts, margin):
    rep = BallReport("partial_order")
    g = db.guarded(margin)
    s = db.s_types
    for w in starts:
        for v in sorted(db.adj[w]):
            if g[v] and s[v] == s[w] and v > w:
                rep.violations.append({"kind": "antisymmetry", "vertices": [_describe(db, w), _describe(db, v)]})
        lows = [v for v in sorted(db.down(w)) if g[v]]
        highs = [z for z in sorted(db.up(w)) if g[z]]
        for v in lows:
            for z in highs:
                bad = None
                if not db.le(v, z):
                    bad = {"kind": "transitivity", "vertices": [_describe(db, u) for u in (v, w, z)]}
                rep.record(min(db.margins[[v, w, z]]), bad)
        if not lows or not highs:
            rep.record(db.margins[w])
    return rep


def check_partial_order_ball(db: DeligneBall, margin: int = 2, jobs: int = 1) -> BallReport:
    """Antisymmetry and transitivity of the s-order among guarded vertices."""
    starts = np.flatnonzero(db.guarded(margin)).tolist()
    return _scan(_po_chunk, db, starts, jobs, margin=margin)


# 4-cycles --------------------------------------------------------------------------


def _closed(db, v):
    return db.adj[v] | {v}


def _c4_chunk(db: DeligneBall, starts, margin):
    rep = BallReport("4cycles")
    n = db.n
    g = db.guarded(margin)
    s = db.s_types
    for v1 in starts:
        up1 = {w for w in db.adj[v1] if s[w] == n and g[w]}
        partners = set()
        for w in up1:
            partners |= {v for v in db.adj[w] if s[v] == 1 and g[v] and v > v1}
        for v2 in sorted(partners):
            common = sorted(up1 & db.adj[v2])
            for w1, w2 in itertools.combinations(common, 2):
                if n == 1:
                    continue
                cyc = (v1, w1, v2, w2)
                centre = _closed(db, v1) & _closed(db, v2) & _closed(db, w1) & _closed(db, w2)
                bad = None
                if not centre:
                    bad = {"cycle": [_describe(db, u) for u in cyc]}
                rep.record(min(db.margins[list(cyc)]), bad)
    return rep


def check_4cycles(db: DeligneBall, margin: int = 2, jobs: int = 1) -> BallReport:
    """Every guarded 4-cycle of s-types ``1, n, 1, n`` has a central vertex.

    Two vertices of equal s-type are never adjacent, so any such closed walk
    on four distinct vertices is an embedded cycle.
    """
    s = db.s_types
    starts = [v for v in np.flatnonzero(db.guarded(margin)).tolist() if s[v] == 1]
    return _scan(_c4_chunk, db, starts, jobs, margin=margin)


# 6-cycles --------------------------------------------------------------------------


def _bounders(db, a, b, g):
    n = db.n
    return {w for w in db.adj[a] & db.adj[b] if db.s_types[w] == n and g[w]}


def _has_distinct_reps(sets) -> bool:
    for choice in itertools.product(*[sorted(x) for x in sets]):
        if len(set(choice)) == len(choice):
            return True
    return False


def _c6_chunk(db: DeligneBall, starts, margin):
    rep = BallReport("6cycles")
    g = db.guarded(margin)
    s = db.s_types
    n = db.n

    def partners(v):
        out = set()
        for w in db.adj[v]:
            if s[w] == n and g[w]:
                out |= {u for u in db.adj[w] if s[u] == 1 and g[u] and u != v}
        return out

    cache = {}

    def P(v):
        if v not in cache:
            cache[v] = partners(v)
        return cache[v]

    for v1 in starts:
        for v2 in sorted(u for u in P(v1) if u > v1):
            for v3 in sorted(u for u in P(v1) & P(v2) if u > v2):
                U = [_bounders(db, v1, v2, g), _bounders(db, v2, v3, g), _bounders(db, v3, v1, g)]
                if not _has_distinct_reps(U):
                    continue
                bad = None
                if not (db.adj[v1] & db.adj[v2] & db.adj[v3]):
                    bad = {"type1": [_describe(db, u) for u in (v1, v2, v3)]}
                rep.record(min(db.margins[[v1, v2, v3]]), bad)
    return rep


def check_6cycles(db: DeligneBall, margin: int = 3, jobs: int = 1) -> BallReport:
    """Every guarded 6-cycle of s-types ``1, n, 1, n, 1, n`` has a vertex
    adjacent to its three s-type-1 vertices.

    Whether a filler exists depends only on the three s-type-1 vertices, so
    each triple that closes up into an embedded cycle counts once.
    """
    s = db.s_types
    starts = [v for v in np.flatnonzero(db.guarded(margin)).tolist() if s[v] == 1]
    return _scan(_c6_chunk, db, starts, jobs, margin=margin)


# bowtie-free and upward flag ------------------------------------------------------


def _upset(db, v):
    return db.up(v) | {v}


def _downset(db, v):
    return db.down(v) | {v}


def _bowtie_chunk(db: DeligneBall, starts, margin):
    rep = BallReport("bowtie_free")
    g = db.guarded(margin)
    for x1 in starts:
        U1 = _upset(db, x1)
        partners = set()
        for y in U1:
            partners |= {x for x in _downset(db, y) if g[x] and x > x1}
        for x2 in sorted(partners):
            U = U1 & _upset(db, x2)
            ys = sorted(y for y in U - {x1, x2} if g[y])
            if len(ys) < 2:
                continue
            for y1, y2 in itertools.combinations(ys, 2):
                mid = U & _downset(db, y1) & _downset(db, y2)
                bad = None
                if not mid:
                    bad = {"bowtie": [_describe(db, u) for u in (x1, x2, y1, y2)]}
                rep.record(min(db.margins[[x1, x2, y1, y2]]), bad)
    return rep


def _flag_chunk(db: DeligneBall, starts, margin):
    rep = BallReport("upward_flag")
    g = db.guarded(margin)
    ups = {}

    def U(v):
        if v not in ups:
            ups[v] = _upset(db, v)
        return ups[v]

    def cobounded(v):
        out = set()
        for y in U(v):
            out |= {x for x in _downset(db, y) if g[x] and x != v}
        return out

    for a in starts:
        Ca = cobounded(a)
        for b in sorted(x for x in Ca if x > a):
            Cb = cobounded(b)
            for c in sorted(x for x in Ca & Cb if x > b):
                bad = None
                if not (U(a) & U(b) & U(c)):
                    bad = {"triple": [_describe(db, u) for u in (a, b, c)]}
                rep.record(min(db.margins[[a, b, c]]), bad)
    return rep


def check_bowtie_upflag_ball(db: DeligneBall, margin: int = 2, jobs: int = 1) -> tuple:
    """Bowtie and upward-flag scans over guarded tuples; middle elements and
    common bounds may be any vertex of the ball."""
    starts = np.flatnonzero(db.guarded(margin)).tolist()
    return (
        _scan(_bowtie_chunk, db, starts, jobs, margin=margin),
        _scan(_flag_chunk, db, starts, jobs, margin=margin),
    )


# consequences of the structure lemmas ---------------------------------------------


def check_real_edges(db: DeligneBall) -> BallReport:
    """A real edge from a non-negative to a non-positive vertex joins faces
    with disjoint supports, and its u-type increases."""
    rep = BallReport("mixed_real_edges")
    V = db.vertices
    for a, b in sorted(db.real_edges()):
        fa, fb = V[a].face, V[b].face
        if fb.nonnegative and fa.nonpositive:
            a, b, fa, fb = b, a, fb, fa
        if not (fa.nonnegative and fb.nonpositive):
            continue
        bad = None
        if fa.support & fb.support or not V[a].u_type < V[b].u_type:
            bad = {"edge": [_describe(db, a), _describe(db, b)]}
        rep.record(min(V[a].margin, V[b].margin), bad)
    return rep


def check_chain_of_fake(db: DeligneBall, margin: int = 2) -> BallReport:
    """For guarded fake ``v, w``: ``v <=_s w`` iff ``v+ <=_u w+ <=_u w- <=_u v-``.

    Candidates ``w`` are the fake neighbours of ``v`` together with every fake
    vertex whose ends are u-adjacent or equal to the matching ends of ``v``.
    """
    rep = BallReport("chain_of_fake")
    g = db.guarded(margin)
    V = db.vertices
    for v in range(db.real_count, len(V)):
        if not g[v]:
            continue
        vp, vm = V[v].ends
        cands = {u for u in db.adj[v] if not V[u].real}
        for wp in db.u_neighbors(vp) | {vp}:
            for wm in db.u_neighbors(vm) | {vm}:
                w = db.fake_of.get((wp, wm))
                if w is not None:
                    cands.add(w)
        for w in sorted(cands):
            if w == v or not g[w]:
                continue
            wp, wm = V[w].ends
            lhs = db.le(v, w)
            rhs = db.u_le(vp, wp) and db.u_le(wp, wm) and db.u_le(wm, vm)
            bad = None if lhs == rhs else {"pair": [_describe(db, v), _describe(db, w)], "s_le": lhs, "u_chain": rhs}
            rep.record(min(V[v].margin, V[w].margin), bad)
    return rep


def check_projection(db: DeligneBall) -> BallReport:
    """Chambers of the ball land on chambers of the Coxeter sphere with the
    type of every vertex preserved."""
    rep = BallReport("projection")
    sphere = an_sphere(db.n)
    facets = set(sphere.facets)
    V = db.vertices
    for x, row in enumerate(db.chamber.tolist()):
        faces = frozenset(V[a].face for a in row)
        bad = None
        if faces not in facets or any(V[a].face.u_type != V[a].u_type for a in row):
            bad = {"element": str(db.ball.elements[x]), "faces": sorted(list(f.coords) for f in faces)}
        rep.record(db.ball.margin[x], bad)
    for v in V[db.real_count:]:
        a, b = v.ends
        bad = None
        if not (V[a].face.nonnegative and V[b].face.nonpositive) or v.face.real:
            bad = {"fake": list(v.face.coords)}
        rep.record(v.margin, bad)
    return rep


def split_cosets(db: DeligneBall, types=None) -> list:
    """Pairs of distinct in-ball components that are the same coset.

    Components over one sphere vertex are compared exactly by testing
    ``x^-1 y`` for membership in the parabolic subgroup.
    """
    n = db.n
    out = []
    groups = defaultdict(list)
    for vid in range(db.real_count):
        v = db.vertices[vid]
        if types is None or v.u_type in types:
            groups[(v.u_type, v.face)].append(vid)
    for (i, _), vids in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].coords)):
        T = [j for j in range(1, n + 1) if j != i]
        reps = [db.ball.elements[min(db.vertices[v].members)] for v in vids]
        for a, b in itertools.combinations(range(len(vids)), 2):
            if same_coset(reps[a], reps[b], T):
                out.append((vids[a], vids[b]))
    return out


def run_all(db: DeligneBall, margin: int = 2, jobs: int = 1) -> dict:
    bow, flag = check_bowtie_upflag_ball(db, margin, jobs)
    reports = [
        check_partial_order_ball(db, margin, jobs),
        check_4cycles(db, margin, jobs),
        check_6cycles(db, margin + 1, jobs),
        bow,
        flag,
        check_real_edges(db),
        check_chain_of_fake(db, margin),
        check_projection(db),
    ]
    return {r.check: r for r in reports}
