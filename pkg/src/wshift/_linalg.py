"""Exact Gauss-Jordan helpers over Fractions."""

from __future__ import annotations

from fractions import Fraction


def solve_columns(cols: list[list], target: list):
    """Exact solution of ``sum c_j cols[j] = target`` or None (free vars set to 0)."""
    m = len(target)
    ncol = len(cols)
    aug = [[cols[j][i] for j in range(ncol)] + [target[i]] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    if any(aug[i][ncol] != 0 for i in range(r, m)):
        return None
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][ncol]
    return sol


def inverse(a: list[list]) -> list[list]:
    """Inverse of a square rational matrix; raises ZeroDivisionError if singular."""
    n = len(a)
    cols = [[a[i][j] for i in range(n)] for j in range(n)]
    inv_cols = []
    for e in range(n):
        unit = [Fraction(int(i == e)) for i in range(n)]
        sol = solve_columns(cols, unit)
        if sol is None:
            raise ZeroDivisionError("singular matrix")
        inv_cols.append(sol)
    # sol solves A x = e, so it is column e of the inverse
    return [[inv_cols[j][i] for j in range(n)] for i in range(n)]
