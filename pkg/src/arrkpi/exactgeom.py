"""Exact rational geometry for small hyperplane arrangements.

Everything here works over :class:`fractions.Fraction` (arbitrary precision);
no floating point is used.  Feasibility of sign conditions is decided by
Fourier-Motzkin elimination on integer-scaled constraints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence

Rational = Fraction
Point = tuple  # tuple[Fraction, ...]
Box = tuple  # tuple[tuple[Fraction, Fraction], ...]


class DimensionError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b) if a and b else max(a, b)


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The affine hyperplane ``{x : normal . x = offset}`` in canonical form.

    Use :meth:`make` to build one from arbitrary rational data; the
    constructor itself expects data that is already canonical.
    """

    normal: tuple
    offset: int

    def __post_init__(self):
        if not any(self.normal):
            raise ValueError("hyperplane normal must be nonzero")

    @classmethod
    def make(cls, normal: Iterable, offset=0) -> "Hyperplane":
        vals = [_as_fraction(v) for v in normal] + [_as_fraction(offset)]
        if not any(vals[:-1]):
            raise ValueError("hyperplane normal must be nonzero")
        den = reduce(_lcm, (v.denominator for v in vals), 1)
        ints = [int(v * den) for v in vals]
        g = reduce(math.gcd, (abs(v) for v in ints), 0)
        ints = [v // g for v in ints]
        lead = next(v for v in ints[:-1] if v)
        if lead < 0:
            ints = [-v for v in ints]
        return cls(tuple(ints[:-1]), ints[-1])

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, p: Sequence) -> Fraction:
        if len(p) != len(self.normal):
            raise DimensionError(f"point of dimension {len(p)} vs hyperplane in R^{len(self.normal)}")
        return sum((a * _as_fraction(x) for a, x in zip(self.normal, p)), Fraction(0)) - self.offset

    def translate(self, v: Sequence) -> "Hyperplane":
        """The hyperplane moved by ``-v`` (so a point ``v`` on it goes to the origin)."""
        shift = sum((a * _as_fraction(x) for a, x in zip(self.normal, v)), Fraction(0))
        return Hyperplane.make(self.normal, self.offset - shift)

    def __str__(self):
        terms = []
        for i, a in enumerate(self.normal):
            if a:
                coef = "" if abs(a) == 1 else str(abs(a))
                terms.append(("-" if a < 0 else "+") + coef + f"x{i + 1}")
        s = " ".join(terms).lstrip("+")
        return f"{s} = {self.offset}"


def eval_sign(h: Hyperplane, p: Sequence) -> int:
    """Sign (-1, 0 or 1) of ``normal . p - offset``."""
    if len(p) != len(h.normal):
        raise DimensionError(f"point of dimension {len(p)} vs hyperplane in R^{len(h.normal)}")
    # integer arithmetic over a common denominator
    q = [_as_fraction(x) for x in p]
    D = reduce(_lcm, (x.denominator for x in q), 1)
    v = sum(a * (x.numerator * (D // x.denominator)) for a, x in zip(h.normal, q)) - h.offset * D
    return (v > 0) - (v < 0)


def sign_vector(hs: Sequence[Hyperplane], p: Sequence) -> tuple:
    return tuple(eval_sign(h, p) for h in hs)


# --------------------------------------------------------------------------
# linear algebra over Q


def _rref(rows: list[list[Fraction]], ncols: int):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def _eq_key(eqs) -> tuple:
    return tuple((tuple(a), c) for a, c in eqs)


def _solve_affine(eqs, n: int):
    """Solve ``a . x = c`` for all ``(a, c)`` in *eqs*.

    Returns ``(x0, basis)`` with the solution set ``x0 + span(basis)``, or
    ``None`` when inconsistent.
    """
    return _solve_affine_key(_eq_key(eqs), n)


@lru_cache(maxsize=1 << 16)
def _solve_affine_key(eqs: tuple, n: int):
    rows = [[_as_fraction(v) for v in a] + [_as_fraction(c)] for a, c in eqs]
    pivots = _rref(rows, n) if rows else []
    rank = len(pivots)
    for row in rows[rank:]:
        if row[n] != 0:
            return None
    x0 = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x0[c] = rows[i][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(tuple(v))
    return tuple(x0), tuple(basis)


@dataclass(frozen=True)
class AffineFlat:
    basepoint: tuple
    directions: tuple
    dim: int

    def contains(self, p: Sequence) -> bool:
        diff = [_as_fraction(a) - b for a, b in zip(p, self.basepoint)]
        if not self.directions:
            return not any(diff)
        rows = [list(d) for d in self.directions] + [diff]
        return len(_rref([list(r) for r in rows], len(diff))) == self.dim


def flat_of(hs: Sequence[Hyperplane], n: Optional[int] = None) -> Optional[AffineFlat]:
    """Intersection of the hyperplanes *hs* (all of R^n when *hs* is empty)."""
    if n is None:
        if not hs:
            raise ValueError("ambient dimension needed for an empty family")
        n = hs[0].dim
    if any(h.dim != n for h in hs):
        raise DimensionError("hyperplanes live in different dimensions")
    sol = _solve_affine([(h.normal, h.offset) for h in hs], n)
    if sol is None:
        return None
    x0, basis = sol
    return AffineFlat(x0, tuple(basis), len(basis))


# --------------------------------------------------------------------------
# Fourier-Motzkin


def _int_row(coeffs, rhs):
    den = reduce(_lcm, (v.denominator for v in coeffs), rhs.denominator)
    return tuple(int(v * den) for v in coeffs), int(rhs * den)


def _normalize(coeffs: tuple, rhs: int):
    g = reduce(math.gcd, coeffs, 0)
    if g > 1:
        # floor is wrong for rationals; keep exact by scaling rhs as a fraction
        if rhs % g == 0:
            return tuple(c // g for c in coeffs), rhs // g, 1
        return tuple(c // g for c in coeffs), rhs, g
    return coeffs, rhs, 1


def _prune(cons):
    """Keep the tightest constraint per coefficient direction.

    ``cons`` items are ``(coeffs, num, den, strict, ancestors)`` meaning
    ``coeffs . x (<|<=) num/den``.
    """
    best = {}
    for c in cons:
        key = c[0]
        old = best.get(key)
        if old is None:
            best[key] = c
            continue
        # compare num/den
        lhs = c[1] * old[2]
        rhs = old[1] * c[2]
        if lhs < rhs or (lhs == rhs and c[3] and not old[3]):
            best[key] = c
    return list(best.values())


def _fm_solve(ineqs, d: int):
    """Find a rational point satisfying integer-coefficient inequalities.

    ``ineqs``: list of ``(coeffs, rhs, strict)`` with integer data meaning
    ``coeffs . t < rhs`` (strict) or ``<= rhs``.  Returns a tuple of
    Fractions or ``None``.
    """
    cons = []
    for k, (a, r, s) in enumerate(ineqs):
        a2, r2, den = _normalize(tuple(a), r)
        cons.append((a2, r2, den, s, 1 << k))
    stages = []
    for k in range(d - 1, -1, -1):
        cons = _prune(cons)
        stages.append(cons)
        pos, neg, rest = [], [], []
        for c in cons:
            ck = c[0][k]
            (pos if ck > 0 else neg if ck < 0 else rest).append(c)
        limit = (d - k) + 1  # Imbert: ancestors after (d-k) eliminations
        new = list(rest)
        for p in pos:
            ap = p[0][k]
            for q in neg:
                anc = p[4] | q[4]
                strict = p[3] or q[3]
                # the ancestor rule only shows a row is implied non-strictly
                if not strict and bin(anc).count("1") > limit:
                    continue
                aq = -q[0][k]
                coeffs = tuple(aq * x + ap * y for x, y in zip(p[0], q[0]))
                # aq*p + ap*q; rhs = aq*p.num/p.den + ap*q.num/q.den
                num = aq * p[1] * q[2] + ap * q[1] * p[2]
                den = p[2] * q[2]
                # divide both sides by the content g of the coefficients
                g = reduce(math.gcd, coeffs, 0)
                if g > 1:
                    coeffs = tuple(c // g for c in coeffs)
                    den *= g
                h = math.gcd(num, den)
                if h > 1:
                    num //= h
                    den //= h
                new.append((coeffs, num, den, strict, anc))
        cons = new
    for c in cons:
        # 0 (<|<=) num/den with den > 0
        if c[1] < 0 or (c[1] == 0 and c[3]):
            return None
    # back substitution: stages[-1] involves only t_0, stages[-2] t_0,t_1 ...
    t = [Fraction(0)] * d
    for k in range(d):
        stage = stages[d - 1 - k]
        lo = hi = None
        lo_s = hi_s = False
        for a, num, den, strict, _ in stage:
            ak = a[k]
            if ak == 0:
                continue
            rest = sum((a[j] * t[j] for j in range(k)), Fraction(0))
            bound = (Fraction(num, den) - rest) / ak
            if ak > 0:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
            else:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
        t[k] = _pick(lo, lo_s, hi, hi_s)
    return tuple(t)


def _pick(lo, lo_s, hi, hi_s) -> Fraction:
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        mid = (lo + hi) / 2
        # prefer an integer when one fits comfortably
        for cand in (Fraction(math.floor(mid)), Fraction(math.ceil(mid))):
            if (lo < cand or (lo == cand and not lo_s)) and (cand < hi or (cand == hi and not hi_s)):
                return cand
        return mid
    if lo is not None:
        return lo if not lo_s else Fraction(math.floor(lo) + 1)
    if hi is not None:
        return hi if not hi_s else Fraction(math.ceil(hi) - 1)
    return Fraction(0)


@lru_cache(maxsize=1 << 16)
def _affine_param(eqs: tuple, n: int):
    sol = _solve_affine_key(eqs, n)
    return None if sol is None else _integer_param(*sol)


def _integer_param(x0, basis):
    """Scale ``x0 + span(basis)`` to integer data: ``(den, X0, B)`` with
    ``x0 = X0/den`` and each basis vector an integer vector."""
    den = reduce(_lcm, (v.denominator for v in x0), 1)
    X0 = tuple(int(v * den) for v in x0)
    B = []
    for b in basis:
        d = reduce(_lcm, (v.denominator for v in b), 1)
        B.append(tuple(int(v * d) for v in b))
    return den, X0, B


def solve_system(eqs, ineqs, n: int) -> Optional[tuple]:
    """Exact feasibility for mixed equations and (strict) inequalities.

    ``eqs``: ``(coeffs, rhs)`` meaning ``coeffs . x = rhs``.
    ``ineqs``: ``(coeffs, rhs, strict)`` meaning ``coeffs . x < rhs`` or ``<=``.
    Returns a rational point or ``None``.
    """
    if eqs:
        param = _affine_param(_eq_key(eqs), n)
        if param is None:
            return None
        den, X0, B = param
    else:
        den, X0, B = 1, (0,) * n, None
    d = len(B) if B is not None else n
    reduced = []
    for a, c, strict in ineqs:
        if not all(type(v) is int for v in a) or type(c) is not int:
            fa = [_as_fraction(v) for v in a] + [_as_fraction(c)]
            m = reduce(_lcm, (v.denominator for v in fa), 1)
            a = [int(v * m) for v in fa[:-1]]
            c = int(fa[-1] * m)
        if B is None:
            coeffs = tuple(a)
            rhs = c
            if not any(coeffs):
                if rhs < 0 or (rhs == 0 and strict):
                    return None
                continue
            reduced.append((coeffs, rhs, strict))
            continue
        coeffs = tuple(sum(ai * bi for ai, bi in zip(a, b)) for b in B)
        # a.(X0/den + B t) (<|<=) c  <=>  den*(a.B) t (<|<=) c*den - a.X0
        rhs = c * den - sum(ai * xi for ai, xi in zip(a, X0))
        if not any(coeffs):
            if rhs < 0 or (rhs == 0 and strict):
                return None
            continue
        reduced.append((tuple(den * v for v in coeffs), rhs, strict))
    t = _fm_solve(reduced, d) if d else ()
    if t is None:
        return None
    if B is None:
        return tuple(t)
    L = reduce(_lcm, (tj.denominator for tj in t), 1)
    T = [tj.numerator * (L // tj.denominator) for tj in t]
    return tuple(
        Fraction(X0[i] * L + den * sum(Tj * b[i] for Tj, b in zip(T, B)), den * L) for i in range(n)
    )


def box_constraints(box: Sequence) -> list:
    n = len(box)
    out = []
    for i, (lo, hi) in enumerate(box):
        e = [0] * n
        e[i] = 1
        out.append((tuple(e), _as_fraction(hi), False))
        e = [0] * n
        e[i] = -1
        out.append((tuple(e), -_as_fraction(lo), False))
    return out


def sign_constraints(sv: Sequence[int], hs: Sequence[Hyperplane]):
    """Split a sign vector into equations and strict inequalities."""
    eqs, ineqs = [], []
    for s, h in zip(sv, hs):
        if s == 0:
            eqs.append((h.normal, h.offset))
        elif s > 0:
            ineqs.append((tuple(-a for a in h.normal), -h.offset, True))
        else:
            ineqs.append((h.normal, h.offset, True))
    return eqs, ineqs


def feasible(sv: Sequence[int], hs: Sequence[Hyperplane], box: Sequence) -> Optional[tuple]:
    """A rational witness in *box* realizing sign vector *sv*, or ``None``."""
    if len(sv) != len(hs):
        raise ValueError("sign vector and hyperplane list differ in length")
    n = len(box)
    if any(h.dim != n for h in hs):
        raise DimensionError("hyperplane dimension does not match the box")
    eqs, ineqs = sign_constraints(sv, hs)
    return solve_system(eqs, ineqs + box_constraints(box), n)


def make_box(bounds) -> tuple:
    box = tuple((_as_fraction(lo), _as_fraction(hi)) for lo, hi in bounds)
    return box


def box_is_empty(box) -> bool:
    return any(lo > hi for lo, hi in box)
