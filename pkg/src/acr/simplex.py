"""Phase-one simplex over the rationals.

Only feasibility is needed here: given ``A z = b`` with ``z >= 0`` find a
point or prove there is none.  Bland's rule keeps the method finite, and
exact :class:`~fractions.Fraction` pivots mean a ``None`` answer is a proof,
not a rounding accident.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def feasible_point(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Return ``z >= 0`` with ``A z = b`` or ``None`` when infeasible.

    Args:
        A: ``m x n`` coefficient rows (anything ``Fraction`` accepts).
        b: right-hand side of length ``m``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        r = [Fraction(v) for v in row]
        bi = Fraction(bi)
        if len(r) != n:
            raise ValueError("ragged constraint matrix")
        if bi < 0:
            r = [-v for v in r]
            bi = -bi
        rows.append(r)
        rhs.append(bi)

    # tableau columns: n structural, then m artificial
    width = n + m
    T = [rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced costs for minimizing the sum of artificials
    cost = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            cost[j] -= T[i][j]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = -1
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            # unbounded direction cannot occur in phase one (objective >= 0)
            break
        _pivot(T, rhs, cost, leave, enter)
        basis[leave] = enter

    if any(rhs[i] != 0 for i in range(m) if basis[i] >= n):
        return None
    z = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            z[bv] = rhs[i]
    return tuple(z)


def _pivot(T, rhs, cost, r, c) -> None:
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    rhs[r] = rhs[r] / piv
    for i in range(len(T)):
        if i != r:
            f = T[i][c]
            if f != 0:
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
                rhs[i] -= f * rhs[r]
    f = cost[c]
    if f != 0:
        for j in range(len(cost)):
            cost[j] -= f * T[r][j]
