"""Hot loops, each with a numba version and a pure-numpy twin.

The public entry points dispatch on :data:`arrkpi._accel.USE_JIT`.  All
integer kernels are exact as long as the inputs are small (entries of a
few digits), which is the regime used throughout the package.
"""
from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

# --------------------------------------------------------------------------
# exact n x n solves for every n-subset of hyperplanes


@njit
def _bareiss_det(M):
    n = M.shape[0]
    A = M.copy()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k, k] == 0:
            piv = -1
            for i in range(k + 1, n):
                if A[i, k] != 0:
                    piv = i
                    break
            if piv < 0:
                return 0
            for j in range(n):
                t = A[k, j]
                A[k, j] = A[piv, j]
                A[piv, j] = t
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i, j] = (A[k, k] * A[i, j] - A[i, k] * A[k, j]) // prev
        prev = A[k, k]
    return sign * A[n - 1, n - 1]


@njit
def _subset_solve_jit(A, b, combos):
    K, n = combos.shape
    num = np.zeros((K, n), dtype=np.int64)
    det = np.zeros(K, dtype=np.int64)
    M = np.empty((n, n), dtype=np.int64)
    for t in range(K):
        for i in range(n):
            for j in range(n):
                M[i, j] = A[combos[t, i], j]
        d = _bareiss_det(M)
        det[t] = d
        if d == 0:
            continue
        for c in range(n):
            for i in range(n):
                for j in range(n):
                    M[i, j] = b[combos[t, i]] if j == c else A[combos[t, i], j]
            num[t, c] = _bareiss_det(M)
    return num, det


def _batch_det(M):
    """Laplace expansion along the first row, vectorized over the batch."""
    d = M.shape[-1]
    if d == 1:
        return M[:, 0, 0].copy()
    if d == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    out = np.zeros(M.shape[0], dtype=M.dtype)
    cols = np.arange(d)
    for j in range(d):
        minor = M[:, 1:, :][:, :, cols != j]
        term = M[:, 0, j] * _batch_det(minor)
        out = out - term if j % 2 else out + term
    return out


def _subset_solve_numpy(A, b, combos):
    M = A[combos]  # (K, n, n)
    det = _batch_det(M)
    n = A.shape[1]
    num = np.zeros((combos.shape[0], n), dtype=np.int64)
    rhs = b[combos]
    for c in range(n):
        Mc = M.copy()
        Mc[:, :, c] = rhs
        num[:, c] = _batch_det(Mc)
    num[det == 0] = 0
    return num, det


def subset_solve(A, b, combos, *, jit=None):
    """Cramer data for ``A[S] x = b[S]`` over each row subset ``S`` in *combos*.

    Returns ``(num, det)``: the solution is ``num / det`` where ``det != 0``.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    combos = np.ascontiguousarray(combos, dtype=np.int64)
    if combos.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    use = _accel.USE_JIT if jit is None else jit
    if use and _accel.HAVE_NUMBA:
        return _subset_solve_jit(A, b, combos)
    return _subset_solve_numpy(A, b, combos)


# --------------------------------------------------------------------------
# poset scans on a boolean ``leq`` matrix (``leq[i, j]`` means i <= j)


def pack_rows(M):
    """Boolean rows packed into uint64 words (little-endian bit order)."""
    M = np.asarray(M, dtype=bool)
    N = M.shape[1]
    W = max(1, (N + 63) // 64)
    padded = np.zeros((M.shape[0], W * 64), dtype=bool)
    padded[:, :N] = M
    bits = np.packbits(padded.reshape(M.shape[0], W, 64), axis=2, bitorder="little")
    return np.ascontiguousarray(bits.view(np.uint64).reshape(M.shape[0], W))


@njit
def _order_violation_jit(L):
    N = L.shape[0]
    for i in range(N):
        if not L[i, i]:
            return 0, i, i, i
    for i in range(N):
        for j in range(i + 1, N):
            if L[i, j] and L[j, i]:
                return 1, i, j, j
    for i in range(N):
        for j in range(N):
            if L[i, j]:
                for k in range(N):
                    if L[j, k] and not L[i, k]:
                        return 2, i, j, k
    return -1, -1, -1, -1


def _order_violation_numpy(L):
    N = L.shape[0]
    d = np.flatnonzero(~np.diag(L))
    if d.size:
        return 0, int(d[0]), int(d[0]), int(d[0])
    anti = np.argwhere(np.triu(L & L.T, 1))
    if anti.size:
        i, j = anti[0]
        return 1, int(i), int(j), int(j)
    comp = (L.astype(np.int32) @ L.astype(np.int32)) > 0
    bad = np.argwhere(comp & ~L)
    if bad.size:
        i, k = bad[0]
        j = int(np.flatnonzero(L[i] & L[:, k])[0])
        return 2, int(i), j, int(k)
    return -1, -1, -1, -1


def order_violation(L, *, jit=None):
    """First failure of reflexivity (0), antisymmetry (1) or transitivity (2).

    Returns ``(kind, i, j, k)`` with ``kind == -1`` for a partial order.
    """
    L = np.ascontiguousarray(L, dtype=np.bool_)
    if (_accel.USE_JIT if jit is None else jit) and _accel.HAVE_NUMBA:
        return tuple(int(v) for v in _order_violation_jit(L))
    return _order_violation_numpy(L)


@njit
def _any_and3(a, b, c):
    for w in range(a.shape[0]):
        if a[w] & b[w] & c[w]:
            return True
    return False


@njit
def _find_bowtie_jit(L, up, down, mask):
    N = L.shape[0]
    W = up.shape[1]
    Z = np.empty(W, dtype=np.uint64)
    U = np.empty(N, dtype=np.int64)
    for x1 in range(N):
        if not mask[x1]:
            continue
        for x2 in range(x1 + 1, N):
            if not mask[x2]:
                continue
            k = 0
            for y in range(N):
                if y != x1 and y != x2 and L[x1, y] and L[x2, y]:
                    U[k] = y
                    k += 1
            if k < 2:
                continue
            for w in range(W):
                Z[w] = up[x1, w] & up[x2, w]
            for a in range(k):
                for b in range(a + 1, k):
                    if not _any_and3(Z, down[U[a]], down[U[b]]):
                        return x1, x2, U[a], U[b]
    return -1, -1, -1, -1


def _find_bowtie_numpy(L, mask):
    N = L.shape[0]
    Lf = L.astype(np.float32)
    idx = np.flatnonzero(mask)
    for a, x1 in enumerate(idx):
        for x2 in idx[a + 1:]:
            U = L[x1] & L[x2]
            U[x1] = U[x2] = False
            ys = np.flatnonzero(U)
            if ys.size < 2:
                continue
            Z = (L[x1] & L[x2]).astype(np.float32)
            D = Lf[:, ys].T * Z  # rows: z in Z with z <= y
            G = D @ D.T
            np.fill_diagonal(G, 1)
            bad = np.argwhere(G == 0)
            if bad.size:
                i, j = bad[0]
                return int(x1), int(x2), int(ys[i]), int(ys[j])
    return -1, -1, -1, -1


def find_bowtie(L, mask=None, *, jit=None):
    """A bowtie ``(x1, x2, y1, y2)`` with no middle element, or ``None``.

    ``mask`` restricts the lower pair ``x1, x2``; the upper pair and the
    middle element range over everything.
    """
    L = np.ascontiguousarray(L, dtype=np.bool_)
    N = L.shape[0]
    mask = np.ones(N, dtype=np.bool_) if mask is None else np.ascontiguousarray(mask, dtype=np.bool_)
    if (_accel.USE_JIT if jit is None else jit) and _accel.HAVE_NUMBA:
        up = pack_rows(L)
        down = pack_rows(L.T)
        r = _find_bowtie_jit(L, up, down, mask)
    else:
        r = _find_bowtie_numpy(L, mask)
    return None if r[0] < 0 else tuple(int(v) for v in r)


@njit
def _find_flag_jit(up, mask):
    N, W = up.shape
    pair = np.zeros((N, N), dtype=np.bool_)
    for a in range(N):
        for b in range(a + 1, N):
            for w in range(W):
                if up[a, w] & up[b, w]:
                    pair[a, b] = True
                    pair[b, a] = True
                    break
    for a in range(N):
        if not mask[a]:
            continue
        for b in range(a + 1, N):
            if not (mask[b] and pair[a, b]):
                continue
            for c in range(b + 1, N):
                if mask[c] and pair[a, c] and pair[b, c]:
                    if not _any_and3(up[a], up[b], up[c]):
                        return a, b, c
    return -1, -1, -1


def _find_flag_numpy(L, mask):
    N = L.shape[0]
    Uf = L.astype(np.float32)
    pair = (Uf @ Uf.T) > 0
    idx = np.flatnonzero(mask)
    for a in idx:
        P = Uf * Uf[a]  # rows b: common upper bounds of a and b
        counts = P @ Uf.T  # [b, c]: common upper bounds of a, b, c
        ok = pair[a][:, None] & pair[a][None, :] & pair
        sel = np.zeros(N, dtype=bool)
        sel[idx[idx > a]] = True
        ok &= sel[:, None] & sel[None, :]
        ok = np.triu(ok, 1)
        bad = np.argwhere(ok & (counts == 0))
        if bad.size:
            b, c = bad[0]
            return int(a), int(b), int(c)
    return -1, -1, -1


def find_flag_violation(L, mask=None, *, jit=None):
    """Three pairwise upper-bounded elements with no common upper bound.

    Pass ``L.T`` for the downward version.  ``mask`` restricts the triple;
    bounds range over everything.
    """
    L = np.ascontiguousarray(L, dtype=np.bool_)
    N = L.shape[0]
    mask = np.ones(N, dtype=np.bool_) if mask is None else np.ascontiguousarray(mask, dtype=np.bool_)
    if (_accel.USE_JIT if jit is None else jit) and _accel.HAVE_NUMBA:
        r = _find_flag_jit(pack_rows(L), mask)
    else:
        r = _find_flag_numpy(L, mask)
    return None if r[0] < 0 else tuple(int(v) for v in r)


# --------------------------------------------------------------------------
# shortest paths in the orthoscheme sample graph
#
# Simplices are blocks of nodes; ``C[r]`` is the cumulative-mass vector of
# the node in block slot ``r`` (padded with zeros), so the in-simplex
# l-infinity distance of two slots is ``max |C[r] - C[s]|``.


@njit
def _relax_jit(d, pred, ptr, gidx, C):
    S = ptr.shape[0] - 1
    K = C.shape[1]
    sweeps = 0
    changed = True
    while changed:
        changed = False
        sweeps += 1
        for s in range(S):
            lo = ptr[s]
            hi = ptr[s + 1]
            for jj in range(lo, hi):
                j = gidx[jj]
                best = d[j]
                bp = -1
                for ii in range(lo, hi):
                    i = gidx[ii]
                    di = d[i]
                    if di >= best:
                        continue
                    w = 0.0
                    for k in range(K):
                        t = abs(C[ii, k] - C[jj, k])
                        if t > w:
                            w = t
                    if di + w < best:
                        best = di + w
                        bp = i
                if bp >= 0:
                    d[j] = best
                    pred[j] = bp
                    changed = True
    return sweeps


def _relax_numpy(d, pred, ptr, gidx, C):
    S = ptr.shape[0] - 1
    sweeps = 0
    changed = True
    while changed:
        changed = False
        sweeps += 1
        for s in range(S):
            lo, hi = ptr[s], ptr[s + 1]
            g = gidx[lo:hi]
            Cs = C[lo:hi]
            W = np.abs(Cs[:, None, :] - Cs[None, :, :]).max(axis=2)
            cand = d[g][:, None] + W  # [i, j]
            arg = cand.argmin(axis=0)
            val = cand[arg, np.arange(g.size)]
            upd = val < d[g]
            if upd.any():
                d[g[upd]] = val[upd]
                pred[g[upd]] = g[arg[upd]]
                changed = True
    return sweeps


def relax_blocks(d, pred, ptr, gidx, C, *, jit=None) -> int:
    """Block Bellman-Ford until stable; updates ``d`` and ``pred`` in place.

    Returns the number of sweeps.
    """
    if (_accel.USE_JIT if jit is None else jit) and _accel.HAVE_NUMBA:
        return int(_relax_jit(d, pred, ptr, gidx, C))
    return _relax_numpy(d, pred, ptr, gidx, C)
