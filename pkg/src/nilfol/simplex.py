"""Exact-rational Phase-I simplex with Bland's rule.

Only feasibility is needed downstream: find ``x >= 0`` with ``A x = b``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def find_feasible(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Return a basic feasible solution of ``A x = b, x >= 0`` or ``None``.

    One artificial variable per row; minimizes their sum. Bland's rule
    (lowest index enters, lowest basic index leaves on ties) guarantees
    termination on degenerate problems.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    rhs = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        # artificial columns n .. n+m-1
        row += [Fraction(int(k == i)) for k in range(m)]
        rows.append(row)
        rhs.append(bi)
    width = n + m
    basis = [n + i for i in range(m)]
    # reduced costs of the Phase-I objective sum(artificials)
    cost = [-sum(rows[i][j] for i in range(m)) if j < n else Fraction(0) for j in range(width)]
    value = -sum(rhs)

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # cannot happen: the Phase-I objective is bounded below by 0
            raise ArithmeticError("unbounded Phase-I problem")
        r = best[1]
        piv = rows[r][entering]
        prow = [v / piv for v in rows[r]]
        prhs = rhs[r] / piv
        rows[r], rhs[r] = prow, prhs
        for i in range(m):
            if i != r:
                f = rows[i][entering]
                if f:
                    rows[i] = [v - f * pv for v, pv in zip(rows[i], prow)]
                    rhs[i] -= f * prhs
        f = cost[entering]
        cost = [c - f * pv for c, pv in zip(cost, prow)]
        value -= f * prhs
        basis[r] = entering

    if value != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    return x
