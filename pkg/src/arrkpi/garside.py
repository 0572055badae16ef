"""Coxeter group tables and the left-greedy Garside normal form.

A finite Coxeter group is generated from an explicit permutation
representation; simple elements of the Artin monoid are identified with
group elements, and every computation in the Artin group reduces to table
lookups on them.

Generators are numbered ``1..n``.  Words use ``+i`` for ``s_i`` and ``-i``
for its inverse.

Conventions for the supported diagrams:

* ``A_n``: ``S_{n+1}`` acting on ``{0, ..., n}``; ``s_i`` swaps ``i`` and
  ``i+1`` for ``i < n`` and ``s_n`` swaps ``n`` and ``0``.
* ``B_n``: signed permutations; ``s_1`` negates the first coordinate and
  ``s_{i+1}`` swaps coordinates ``i`` and ``i+1``.
* ``D_n``: even signed permutations; ``s_1`` sends ``x_1, x_2`` to
  ``-x_2, -x_1`` and ``s_{i+1}`` swaps coordinates ``i`` and ``i+1``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np


class UnsupportedDiagram(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


MAX_ORDER = 192


def _perm_generators(kind: str, n: int) -> list:
    if kind == "A":
        pts = list(range(1, n + 1)) + [0]
        gens = []
        for i in range(n):
            p = list(range(n + 1))
            a, b = pts[i], pts[i + 1]
            p[a], p[b] = b, a
            gens.append(tuple(p))
        return gens
    # signed permutations of {+-1..+-n}; +k is point k-1, -k is point n+k-1
    def signed(f):
        p = [0] * (2 * n)
        for k in range(1, n + 1):
            img = f(k)
            p[k - 1] = img - 1 if img > 0 else n - img - 1
            p[n + k - 1] = n + img - 1 if img > 0 else -img - 1
        return tuple(p)

    def swap(i):
        return lambda k: i + 1 if k == i else i if k == i + 1 else k

    if kind == "B":
        first = signed(lambda k: -1 if k == 1 else k)
    elif kind == "D":
        first = signed(lambda k: -2 if k == 1 else -1 if k == 2 else k)
    else:
        raise UnsupportedDiagram(f"unknown Coxeter type {kind!r}")
    return [first] + [signed(swap(i)) for i in range(1, n)]


def _parse_diagram(diagram: str) -> tuple:
    m = re.fullmatch(r"\s*([ABD])_?(\d+)\s*", str(diagram))
    if not m:
        raise UnsupportedDiagram(f"cannot parse diagram {diagram!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1 or (kind == "B" and n < 2) or (kind == "D" and n < 3):
        raise UnsupportedDiagram(f"{kind}{n} is not a valid spherical diagram")
    return kind, n


class CoxeterGroup:
    """Element tables of a finite Coxeter group.

    Elements are indexed ``0..N-1`` in BFS order, index 0 being the identity.
    ``mul[a, b]`` is the product ``ab``; descent sets and supports are
    bitmasks over generators (bit ``i-1`` for ``s_i``).
    """

    def __init__(self, diagram: str):
        kind, n = _parse_diagram(diagram)
        self.kind, self.rank = kind, n
        self.name = f"{kind}{n}"
        gens = _perm_generators(kind, n)
        ident = tuple(range(len(gens[0])))
        index = {ident: 0}
        perms = [ident]
        length = [0]
        queue = deque([0])
        while queue:
            a = queue.popleft()
            pa = perms[a]
            for g in gens:
                q = tuple(pa[g[k]] for k in range(len(g)))
                if q not in index:
                    if len(perms) >= MAX_ORDER:
                        raise UnsupportedDiagram(f"{self.name} is larger than {MAX_ORDER} elements")
                    index[q] = len(perms)
                    perms.append(q)
                    length.append(length[a] + 1)
                    queue.append(index[q])
        N = len(perms)
        self.order = N
        self.perms = perms
        self.length = np.array(length, dtype=np.int64)
        mul = np.empty((N, N), dtype=np.int64)
        for a, pa in enumerate(perms):
            for b, pb in enumerate(perms):
                mul[a, b] = index[tuple(pa[pb[k]] for k in range(len(pb)))]
        self.mul = mul
        self.gen = [index[g] for g in gens]
        self.inv = np.array([int(np.flatnonzero(mul[a] == 0)[0]) for a in range(N)], dtype=np.int64)
        self.w0 = int(np.argmax(self.length))
        rdesc, ldesc = [], []
        for a in range(N):
            r = l = 0
            for i, s in enumerate(self.gen):
                if length[mul[a, s]] < length[a]:
                    r |= 1 << i
                if length[mul[s, a]] < length[a]:
                    l |= 1 << i
            rdesc.append(r)
            ldesc.append(l)
        self.rdesc, self.ldesc = rdesc, ldesc
        self.tau = [int(mul[mul[self.w0, a], self.w0]) for a in range(N)]
        self.support = self._supports()
        self.coxeter_matrix = self._coxeter_matrix()
        # plain lists for the hot loops
        self._mul = mul.tolist()
        self._len = self.length.tolist()

    def _supports(self) -> list:
        sup = [0] * self.order
        for a in np.argsort(self.length, kind="stable").tolist():
            for i, s in enumerate(self.gen):
                b = int(self.mul[a, s])
                if self.length[b] == self.length[a] + 1:
                    sup[b] = sup[a] | (1 << i)
        return sup

    def _coxeter_matrix(self) -> np.ndarray:
        n = self.rank
        M = np.ones((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if i != j:
                    st = int(self.mul[self.gen[i], self.gen[j]])
                    x, m = st, 1
                    while x != 0:
                        x = int(self.mul[x, st])
                        m += 1
                    M[i, j] = m
        return M

    def word(self, a: int) -> tuple:
        """A reduced word (1-based generators) for element ``a``."""
        out = []
        while a != 0:
            for i, s in enumerate(self.gen):
                if self.rdesc[a] >> i & 1:
                    out.append(i + 1)
                    a = int(self.mul[a, s])
                    break
        return tuple(reversed(out))

    def element(self, word: Iterable[int]) -> int:
        a = 0
        for i in word:
            a = self._mul[a][self.gen[abs(i) - 1]]
        return a


@lru_cache(maxsize=None)
def coxeter_group(diagram: str) -> CoxeterGroup:
    kind, n = _parse_diagram(diagram)
    return CoxeterGroup(f"{kind}{n}")


@dataclass(frozen=True)
class BraidElement:
    """``Delta^inf * factors[0] * ... * factors[-1]`` in left normal form.

    Factors are Coxeter group indices of simple elements, none trivial and
    none equal to Delta.
    """

    diagram: str
    inf: int
    factors: tuple

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    @property
    def sup(self) -> int:
        return self.inf + len(self.factors)

    def to_json(self) -> dict:
        W = coxeter_group(self.diagram)
        return {"inf": self.inf, "factors": [list(W.word(a)) for a in self.factors]}

    def __str__(self):
        W = coxeter_group(self.diagram)
        parts = []
        if self.inf:
            parts.append(f"D^{self.inf}")
        parts += ["[" + ".".join(map(str, W.word(a))) + "]" for a in self.factors]
        return " ".join(parts) or "1"


def _left_weight(W: CoxeterGroup, a: int, b: int) -> tuple:
    """Push letters of ``b`` into ``a`` until ``(a, b)`` is left-weighted."""
    mul, rdesc, ldesc, gen = W._mul, W.rdesc, W.ldesc, W.gen
    while True:
        extra = ldesc[b] & ~rdesc[a]
        if not extra:
            return a, b
        i = (extra & -extra).bit_length() - 1
        s = gen[i]
        a = mul[a][s]
        b = mul[s][b]


def _append(W: CoxeterGroup, inf: int, factors: list, x: int) -> tuple:
    """Right-multiply a left normal form by the simple element ``x``."""
    if x == 0:
        return inf, factors
    F = factors + [x]
    i = len(F) - 1
    while i > 0:
        a, b = _left_weight(W, F[i - 1], F[i])
        if a == F[i - 1]:
            break
        F[i - 1], F[i] = a, b
        i -= 1
    w0 = W.w0
    k = 0
    while k < len(F) and F[k] == w0:
        k += 1
    if k:
        inf += k
        F = F[k:]
    while F and F[-1] == 0:
        F.pop()
    return inf, F


def _twist(W: CoxeterGroup, factors, k: int) -> list:
    if k % 2 == 0:
        return list(factors)
    return [W.tau[a] for a in factors]


def _times_delta_power(W, inf, factors, k):
    # (Delta^p A) Delta^k = Delta^(p+k) tau^k(A)
    return inf + k, _twist(W, factors, k)


def _times_simple_inverse(W, inf, factors, a):
    # a^-1 = Delta^-1 * d(a) with d(a) = w0 a^-1
    inf, factors = _times_delta_power(W, inf, factors, -1)
    return _append(W, inf, factors, int(W.mul[W.w0, W.inv[a]]))


def parse_word(word: Union[str, Sequence[int]], rank: int) -> tuple:
    """Accepts ``[1, -2, 1]``, ``"1 -2 1"`` or ``"s1 s2^-1 s1"``."""
    if isinstance(word, str):
        out = []
        for tok in word.replace(",", " ").split():
            m = re.fullmatch(r"[sS]?(-?)(\d+)(\^-1)?", tok)
            if not m:
                raise UnknownGenerator(f"cannot parse token {tok!r}")
            v = int(m.group(2))
            sign = -1 if (m.group(1) == "-") != (m.group(3) is not None) else 1
            out.append(sign * v)
        word = out
    word = tuple(int(i) for i in word)
    for i in word:
        if i == 0 or abs(i) > rank:
            raise UnknownGenerator(f"generator {i} outside 1..{rank}")
    return word


def identity(diagram: str) -> BraidElement:
    return BraidElement(coxeter_group(diagram).name, 0, ())


def delta(diagram: str, power: int = 1) -> BraidElement:
    return BraidElement(coxeter_group(diagram).name, power, ())


def normal_form(diagram: str, word) -> BraidElement:
    W = coxeter_group(diagram)
    inf, F = 0, []
    for i in parse_word(word, W.rank):
        s = W.gen[abs(i) - 1]
        if i > 0:
            inf, F = _append(W, inf, F, s)
        else:
            inf, F = _times_simple_inverse(W, inf, F, s)
    return BraidElement(W.name, inf, tuple(F))


def multiply(x: BraidElement, y: BraidElement) -> BraidElement:
    if x.diagram != y.diagram:
        raise ValueError("elements of different Artin groups")
    W = coxeter_group(x.diagram)
    inf, F = _times_delta_power(W, x.inf, x.factors, y.inf)
    for a in y.factors:
        inf, F = _append(W, inf, F, a)
    return BraidElement(W.name, inf, tuple(F))


def times_generator(x: BraidElement, i: int) -> BraidElement:
    """``x * s_i`` (or ``x * s_|i|^-1`` for negative ``i``)."""
    W = coxeter_group(x.diagram)
    s = W.gen[abs(i) - 1]
    if i > 0:
        inf, F = _append(W, x.inf, list(x.factors), s)
    else:
        inf, F = _times_simple_inverse(W, x.inf, list(x.factors), s)
    return BraidElement(W.name, inf, tuple(F))


def inverse(x: BraidElement) -> BraidElement:
    W = coxeter_group(x.diagram)
    inf, F = 0, []
    for a in reversed(x.factors):
        inf, F = _times_simple_inverse(W, inf, F, a)
    inf, F = _times_delta_power(W, inf, F, -x.inf)
    return BraidElement(W.name, inf, tuple(F))


def is_left_normal(x: BraidElement) -> bool:
    W = coxeter_group(x.diagram)
    F = x.factors
    if any(a in (0, W.w0) for a in F):
        return False
    return all(W.ldesc[b] & ~W.rdesc[a] == 0 for a, b in zip(F, F[1:]))


def project(x: BraidElement) -> int:
    """Image in the Coxeter group."""
    W = coxeter_group(x.diagram)
    a = W.w0 if x.inf % 2 else 0
    for f in x.factors:
        a = W._mul[a][f]
    return a


def np_form(x: BraidElement) -> tuple:
    """``(N, P)``, positive elements with ``x = N^-1 P`` and ``N ^ P = 1``.

    For ``x = Delta^-q a_1...a_r`` the left gcd of ``Delta^q`` and
    ``a_1...a_r`` is ``a_1...a_min(q,r)``.
    """
    W = coxeter_group(x.diagram)
    if x.inf >= 0:
        return identity(W.name), x
    q = -x.inf
    m = min(q, len(x.factors))
    g = BraidElement(W.name, 0, x.factors[:m])
    N = multiply(inverse(g), delta(W.name, q))
    P = BraidElement(W.name, 0, x.factors[m:])
    return N, P


def positive_support(x: BraidElement) -> int:
    W = coxeter_group(x.diagram)
    if x.inf < 0:
        raise ValueError("element is not positive")
    sup = (1 << W.rank) - 1 if x.inf > 0 else 0
    for a in x.factors:
        sup |= W.support[a]
    return sup


def in_parabolic(x: BraidElement, generators: Iterable[int]) -> bool:
    """Membership in the standard parabolic subgroup on ``generators``.

    Positive relations preserve the set of letters and parabolic submonoids
    are closed under left gcds, so ``x`` lies in ``A_T`` exactly when both
    parts of its reduced fraction are positive words in ``T``.
    """
    mask = 0
    for i in generators:
        mask |= 1 << (i - 1)
    N, P = np_form(x)
    return positive_support(N) & ~mask == 0 and positive_support(P) & ~mask == 0


def same_coset(x: BraidElement, y: BraidElement, generators: Iterable[int]) -> bool:
    """``x A_T == y A_T``."""
    return in_parabolic(multiply(inverse(x), y), generators)


def proper_simples(W: CoxeterGroup) -> list:
    return [a for a in range(W.order) if a not in (0, W.w0)]


def successors(W: CoxeterGroup) -> list:
    """``succ[a]``: proper simples ``b`` such that ``(a, b)`` is left-weighted."""
    prop = proper_simples(W)
    return [[b for b in prop if W.ldesc[b] & ~W.rdesc[a] == 0] for a in range(W.order)]
