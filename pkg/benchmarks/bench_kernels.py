"""numba vs numpy timings for the arrkpi kernels.

    python benchmarks/bench_kernels.py [--repeat N] [--only NAME ...]

Each kernel runs once per backend to warm up (numba compiles on first call),
then ``--repeat`` more times; the best time is reported.  Results of the two
backends are compared before timing.
"""
import argparse
import itertools
import time

import numpy as np

from arrkpi import _accel
from arrkpi.coxmodel import bn_complex
from arrkpi.families import family_H
from arrkpi.kernels import find_bowtie, find_flag_violation, order_violation, relax_blocks, subset_solve
from arrkpi.orthoscheme import cube_space


def _subset_case():
    a = family_H(3, 4)
    A = np.array([h.normal for h in a.hyperplanes], dtype=np.int64)
    b = np.array([h.offset for h in a.hyperplanes], dtype=np.int64)
    combos = np.array(list(itertools.combinations(range(len(A)), 4)), dtype=np.int64)
    return lambda jit: subset_solve(A, b, combos, jit=jit)


def _poset_case(fn, n):
    L = bn_complex(n).s_poset().leq
    return lambda jit: fn(L, jit=jit)


def _relax_case(n, level):
    sp = cube_space(n)
    grid = sp.grid(level)
    nodes = list(grid)
    ptr, gidx, C = sp._blocks(nodes, [grid[p] for p in nodes])

    def run(jit):
        d = np.full(len(nodes), np.inf)
        d[0] = 0.0
        pred = np.full(len(nodes), -1, dtype=np.int64)
        relax_blocks(d, pred, ptr, gidx, C, jit=jit)
        return d

    return run


CASES = {
    "subset_solve[H_3,4]": _subset_case,
    "order_violation[B5]": lambda: _poset_case(order_violation, 5),
    "find_bowtie[B4]": lambda: _poset_case(find_bowtie, 4),
    "find_flag_violation[B5]": lambda: _poset_case(find_flag_violation, 5),
    "relax_blocks[cube3,L3]": lambda: _relax_case(3, 3),
}


def _same(x, y) -> bool:
    if isinstance(x, tuple) and x and isinstance(x[0], np.ndarray):
        return all(np.array_equal(a, b) for a, b in zip(x, y))
    if isinstance(x, np.ndarray):
        return np.allclose(x, y)
    return x == y


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba not importable: only the numpy column is meaningful")
    print(f"{'kernel':<26}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
    for name, make in CASES.items():
        if args.only and not any(o in name for o in args.only):
            continue
        run = make()
        ref = run(False)
        fast = run(True)  # warm-up / compile
        if not _same(ref, fast):
            raise SystemExit(f"{name}: backends disagree")
        t_np = _best(lambda: run(False), args.repeat)
        t_jit = _best(lambda: run(True), args.repeat)
        print(f"{name:<26}{t_np * 1e3:>12.2f}{t_jit * 1e3:>12.2f}{t_np / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
