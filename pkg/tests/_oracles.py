"""Independent float-LP oracles used to cross-check the exact code paths."""
import itertools

import numpy as np
from scipy.optimize import linprog


def lp_feasible(signs, rows, box, eps=1e-9):
    """Does some point of the closed box realize ``signs`` on ``rows``?

    ``rows`` holds ``(normal, offset)`` pairs.  Maximizes the slack ``t`` of
    the strict inequalities; the cell is nonempty iff the optimum is positive.
    """
    n = len(box)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for s, (a, c) in zip(signs, rows):
        a = [float(x) for x in a]
        if s == 0:
            A_eq.append(a + [0.0])
            b_eq.append(float(c))
        else:
            # s (a.x - c) >= t  <=>  -s a.x + t <= -s c
            A_ub.append([-s * x for x in a] + [1.0])
            b_ub.append(-s * float(c))
    bounds = [(float(lo), float(hi)) for lo, hi in box] + [(None, 1.0)]
    res = linprog(
        c=[0.0] * n + [-1.0],
        A_ub=np.array(A_ub) if A_ub else None,
        b_ub=b_ub or None,
        A_eq=np.array(A_eq) if A_eq else None,
        b_eq=b_eq or None,
        bounds=bounds,
        method="highs",
    )
    if res.status != 0:
        return False
    return not A_ub or -res.fun > eps


def brute_force_covectors(rows, box):
    """All realizable sign vectors, by trying every one of the 3^m candidates."""
    out = []
    for sv in itertools.product((-1, 0, 1), repeat=len(rows)):
        if lp_feasible(sv, rows, box):
            out.append(sv)
    return out
