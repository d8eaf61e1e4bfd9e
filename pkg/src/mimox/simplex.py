"""Exact simplex solvers for small linear programs.

Both entry points maximize c.x over {A x <= b, x >= 0} with b >= 0, so
the slack basis is feasible from the start and no phase-one is needed.
Bland's rule keeps the walk finite on degenerate polytopes.

``simplex_maximize`` works in Fraction arithmetic and returns the exact
optimum with a maximizer.  ``integer_simplex_floor`` takes all-integer
data and returns only the floor of the optimum; it pivots fraction-free
(one shared denominator, Bareiss-style exact divisions), which keeps the
hot branch-and-bound path in plain integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .numerics import InvalidInputError, Rational

__all__ = ["UnboundedProblemError", "integer_simplex_floor", "simplex_maximize"]


class UnboundedProblemError(RuntimeError):
    """The feasible set allows the objective to grow without limit."""


def simplex_maximize(objective: Sequence[Rational],
                     lhs: Sequence[Sequence[Rational]],
                     rhs: Sequence[Rational],
                     ) -> Tuple[Rational, List[Rational]]:
    """Return (optimal value, an optimal point)."""
    c = [Fraction(v) for v in objective]
    a = [[Fraction(v) for v in row] for row in lhs]
    b = [Fraction(v) for v in rhs]
    n = len(c)
    m = len(a)
    if len(b) != m or any(len(row) != n for row in a):
        raise InvalidInputError("inconsistent LP dimensions")
    if any(v < 0 for v in b):
        raise InvalidInputError("rhs must be non-negative (origin feasible)")

    # tableau columns: n structural vars, m slacks, then the rhs
    tab = [row[:] + [Fraction(int(i == r)) for i in range(m)] + [b[r]]
           for r, row in enumerate(a)]
    cost = [-v for v in c] + [Fraction(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for r in range(m):
            if tab[r][enter] > 0:
                ratio = tab[r][-1] / tab[r][enter]
                if best is None or ratio < best or (
                        ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            raise UnboundedProblemError("objective is unbounded above")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for r in range(m):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [v - f * w for v, w in zip(tab[r], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [v - f * w for v, w in zip(cost, tab[leave])]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for r, var in enumerate(basis):
        if var < n:
            x[var] = tab[r][-1]
    return cost[-1], x


def integer_simplex_floor(objective: Sequence[int],
                          lhs: Sequence[Sequence[int]],
                          rhs: Sequence[int]) -> int:
    """Floor of max c.x over {A x <= b, x >= 0}, all data integer.

    The tableau is held as integers over one positive denominator; each
    pivot rescales by the pivot element and divides out the previous
    denominator, which is exact by the Bareiss identity.  Signs and ratio
    comparisons therefore never leave integer arithmetic.
    """
    n = len(objective)
    m = len(lhs)
    if len(rhs) != m or any(len(row) != n for row in lhs):
        raise InvalidInputError("inconsistent LP dimensions")
    if any(v < 0 for v in rhs):
        raise InvalidInputError("rhs must be non-negative (origin feasible)")
    if n == 0:
        return 0

    width = n + m + 1
    tab: List[List[int]] = [
        [int(v) for v in row] + [int(i == r) for i in range(m)] + [int(rhs[r])]
        for r, row in enumerate(lhs)]
    cost = [-int(v) for v in objective] + [0] * (m + 1)
    basis = [n + i for i in range(m)]
    den = 1

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for r in range(m):
            pe = tab[r][enter]
            if pe <= 0:
                continue
            if leave is None:
                leave = r
            else:
                lhs_cmp = tab[r][-1] * tab[leave][enter]
                rhs_cmp = tab[leave][-1] * pe
                if lhs_cmp < rhs_cmp or (lhs_cmp == rhs_cmp
                                         and basis[r] < basis[leave]):
                    leave = r
        if leave is None:
            raise UnboundedProblemError("objective is unbounded above")
        piv = tab[leave][enter]
        pivot_row = tab[leave]
        for r in range(m):
            if r == leave:
                continue
            row = tab[r]
            f = row[enter]
            if f:
                tab[r] = [(v * piv - f * w) // den
                          for v, w in zip(row, pivot_row)]
            elif piv != den:
                # untouched rows still rescale onto the new denominator
                tab[r] = [v * piv // den for v in row]
        f = cost[enter]
        if f:
            cost = [(v * piv - f * w) // den
                    for v, w in zip(cost, pivot_row)]
        elif piv != den:
            cost = [v * piv // den for v in cost]
        basis[leave] = enter
        den = piv

    return cost[-1] // den
