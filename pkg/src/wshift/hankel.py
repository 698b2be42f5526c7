"""Hankel matrices ``M_n(k)`` and the positivity properties built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._linalg import solve_columns
from .core import (
    InsufficientData,
    PreconditionError,
    RecursionSpec,
    ShiftError,
    arithmetic,
    is_zero,
    to_scalar,
)

PSD = "positive-semidefinite"
INDEFINITE = "indefinite"


@dataclass(frozen=True)
class HankelMatrix:
    """``entries[i][j] = gamma[offset + i + j]`` for ``0 <= i, j <= size - 1``."""

    offset: int
    size: int
    entries: tuple

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class PsdCertificate:
    verdict: str
    witness: tuple | None = None
    value: object = None
    pivots: tuple = ()
    exact: bool = True

    @property
    def is_psd(self) -> bool:
        return self.verdict == PSD

    def __bool__(self) -> bool:
        return self.is_psd


@dataclass
class Failure:
    property: str
    n: int
    k: int
    certificate: PsdCertificate


@dataclass
class ClassificationReport:
    horizon: int
    h_results: dict = field(default_factory=dict)
    h_tilde_results: dict = field(default_factory=dict)
    subnormal_truncated: bool = True
    first_failure: Failure | None = None
    exact: bool = True
    failures: dict = field(default_factory=dict)  # property -> first Failure

    @property
    def hamburger_truncated(self) -> bool:
        return all(self.h_results.values())


def hankel(g: Sequence, n: int, k: int) -> HankelMatrix:
    """The ``(n+1) x (n+1)`` Hankel block of ``g`` starting at index ``k``."""
    if n < 0 or k < 0:
        raise ShiftError("n and k must be nonnegative")
    if k + 2 * n >= len(g):
        raise InsufficientData(
            f"M_{n}({k}) needs gamma up to index {k + 2 * n}, have {len(g) - 1}"
        )
    rows = tuple(tuple(g[k + i + j] for j in range(n + 1)) for i in range(n + 1))
    return HankelMatrix(k, n + 1, rows)


def quadratic_form(M, x) -> object:
    rows = M.rows() if isinstance(M, HankelMatrix) else M
    size = len(rows)
    return sum(
        (x[i] * rows[i][j] * x[j] for i in range(size) for j in range(size)),
        start=Fraction(0) if not isinstance(x[0], float) else 0.0,
    )


def is_psd(M) -> PsdCertificate:
    """Decide positive semidefiniteness of a symmetric matrix.

    Exact mode runs symmetric pivoted elimination over the rationals: pivot on
    a positive diagonal entry; a negative diagonal entry, or a nonzero
    off-diagonal entry in an all-zero-diagonal block, yields an explicit
    witness ``x`` with ``x^T M x < 0``.  Approximate mode compares the least
    eigenvalue with ``-eps * max|M_ij|``.
    """
    rows = M.rows() if isinstance(M, HankelMatrix) else [list(r) for r in M]
    if not rows:
        return PsdCertificate(PSD)
    if arithmetic().exact:
        return _psd_exact([[to_scalar(v) for v in r] for r in rows])
    return _psd_approx(rows)


def _psd_approx(rows) -> PsdCertificate:
    a = np.array([[float(v) for v in r] for r in rows])
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    w, v = np.linalg.eigh(a)
    if w[0] >= -arithmetic().eps * max(scale, 1e-300):
        return PsdCertificate(PSD, pivots=tuple(float(t) for t in w), exact=False)
    x = tuple(float(t) for t in v[:, 0])
    return PsdCertificate(INDEFINITE, x, float(w[0]), exact=False)


def _simple_witness(a):
    n = len(a)
    for i in range(n):
        if a[i][i] < 0:
            x = [Fraction(0)] * n
            x[i] = Fraction(1)
            return x
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][i] + a[j][j] < 2 * abs(a[i][j]):
                x = [Fraction(0)] * n
                x[i] = Fraction(1)
                x[j] = Fraction(-1 if a[i][j] > 0 else 1)
                return x
    return None


def _psd_exact(a) -> PsdCertificate:
    n = len(a)
    x = _simple_witness(a)
    if x is not None:
        return PsdCertificate(INDEFINITE, tuple(x), quadratic_form(a, x))

    work = [row[:] for row in a]
    remaining = list(range(n))
    steps = []  # (pivot index, snapshot of the pivot row restricted to remaining)
    pivots = []
    while remaining:
        pos = [i for i in remaining if work[i][i] > 0]
        neg = [i for i in remaining if work[i][i] < 0]
        if neg:
            y = {neg[0]: Fraction(1)}
            return _lift_witness(a, steps, y)
        if not pos:
            for ii, i in enumerate(remaining):
                for j in remaining[ii + 1 :]:
                    if work[i][j] != 0:
                        y = {i: Fraction(1), j: Fraction(-1 if work[i][j] > 0 else 1)}
                        return _lift_witness(a, steps, y)
            break
        p = pos[0]
        piv = work[p][p]
        pivots.append(piv)
        remaining.remove(p)
        steps.append((p, {j: work[p][j] for j in remaining}, piv))
        for i in remaining:
            f = work[i][p] / piv
            if f == 0:
                continue
            for j in remaining:
                work[i][j] -= f * work[p][j]
    return PsdCertificate(PSD, pivots=tuple(pivots))


def _lift_witness(a, steps, y: dict) -> PsdCertificate:
    n = len(a)
    x = [Fraction(0)] * n
    for i, v in y.items():
        x[i] = v
    for p, row, piv in reversed(steps):
        x[p] = -sum((row[j] * x[j] for j in row), start=Fraction(0)) / piv
    value = quadratic_form(a, x)
    assert value < 0, "witness lifting lost negativity"
    return PsdCertificate(INDEFINITE, tuple(x), value)


def _offsets(n: int, horizon: int, parity: int) -> list[int]:
    return [k for k in range(parity, horizon - 2 * n + 1, 2)]


def _check_horizon(g: Sequence, n: int, horizon: int) -> None:
    if horizon < 2 * n:
        raise InsufficientData(f"horizon {horizon} < 2n = {2 * n}")
    if horizon >= len(g):
        raise InsufficientData(f"moments available to index {len(g) - 1}, horizon {horizon}")


def property_failure(g: Sequence, n: int, horizon: int, parity: int):
    """First ``(k, certificate)`` with ``M_n(k)`` not PSD, ``k`` of the given parity."""
    _check_horizon(g, n, horizon)
    for k in _offsets(n, horizon, parity):
        cert = is_psd(hankel(g, n, k))
        if not cert:
            return k, cert
    return None


def property_H(g: Sequence, n: int, horizon: int) -> bool:
    """``M_n(k) >= 0`` for every even ``k`` with ``k + 2n <= horizon``."""
    return property_failure(g, n, horizon, 0) is None


def property_H_tilde(g: Sequence, n: int, horizon: int) -> bool:
    """``M_n(k) >= 0`` for every odd ``k`` with ``k + 2n <= horizon``."""
    return property_failure(g, n, horizon, 1) is None


def classify(g: Sequence, max_n: int, horizon: int, psd=None) -> ClassificationReport:
    """Truncated H(n) / H~(n) verdicts for ``0 <= n <= max_n``.

    Verdicts are cumulative: a failure at order n is inherited by every larger
    order, matching the fact that the untruncated properties are nested.
    ``psd`` overrides the positivity test for a given ``(n, k)``; the Aluthge
    module uses it to classify sequences known only through their squares.
    """
    if psd is None:
        def psd(n, k):
            return is_psd(hankel(g, n, k))

        _check_horizon(g, max_n, horizon)
    elif horizon < 2 * max_n:
        raise InsufficientData(f"horizon {horizon} < 2n = {2 * max_n}")
    report = ClassificationReport(horizon=horizon)
    failed = {0: False, 1: False}
    for n in range(max_n + 1):
        for parity, name, results in ((0, "H", report.h_results), (1, "H~", report.h_tilde_results)):
            ok = not failed[parity]
            if ok:
                for k in _offsets(n, horizon, parity):
                    cert = psd(n, k)
                    if not cert.exact:
                        report.exact = False
                    if not cert:
                        ok = False
                        failed[parity] = True
                        report.failures[name] = Failure(name, n, k, cert)
                        if report.first_failure is None:
                            report.first_failure = report.failures[name]
                        break
            results[n] = ok
    report.subnormal_truncated = all(report.h_results.values()) and all(
        report.h_tilde_results.values()
    )
    return report


# --------------------------------------------------------------------------
# recursion extraction


def _solve_columns_approx(cols, target):
    a = np.array(cols, dtype=float).T
    b = np.array(target, dtype=float)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = np.max(np.abs(a @ sol - b)) if b.size else 0.0
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    if resid > arithmetic().eps * scale * 10:
        return None
    return [float(s) for s in sol]


def _combination(cols, target):
    if arithmetic().exact:
        return solve_columns(cols, target)
    return _solve_columns_approx(cols, target)


def _coeffs_from_columns(sol: list) -> tuple:
    # column relation  col_r = sum_j sol[j] col_j  is the recursion
    # gamma_{m+r} = sum_j sol[j] gamma_{m+j}; coeffs run newest-first.
    return tuple(reversed(sol))


def extract_recursion(g: Sequence, n: int, k: int) -> RecursionSpec | None:
    """Minimal column relation of ``M_n(k)`` as a recursion starting at ``gamma_k``.

    Returns the smallest ``r <= n`` for which column ``r`` is a combination of
    columns ``0..r-1``; None when the columns are independent.
    """
    M = hankel(g, n, k)
    cert = is_psd(M)
    if not cert:
        raise PreconditionError(f"M_{n}({k}) is not positive semidefinite")
    cols = [[M[i, j] for i in range(n + 1)] for j in range(n + 1)]
    if all(is_zero(v) for v in cols[0]):
        return None
    for r in range(1, n + 1):
        sol = _combination(cols[:r], cols[r])
        if sol is not None:
            return RecursionSpec(_coeffs_from_columns(sol), tuple(g[k : k + r]))
    return None


def smuljan_recursion(g: Sequence, n: int, k: int) -> RecursionSpec:
    """Order-``n`` recursion from the Smul'jan block decomposition of ``M_n(k)``.

    For ``M_n(k) >= 0`` the top part of the last column lies in the range of
    ``M_{n-1}(k)``, i.e. ``gamma_{k+n+i} = sum_j w_j gamma_{k+i+j}`` for
    ``i = 0..n-1``.  Singular blocks admit many ``w``; free variables are 0.
    """
    if n < 1:
        raise ShiftError("Smul'jan extraction needs n >= 1")
    M = hankel(g, n, k)
    cert = is_psd(M)
    if not cert:
        raise PreconditionError(f"M_{n}({k}) is not positive semidefinite")
    cols = [[M[i, j] for i in range(n)] for j in range(n)]
    target = [M[i, n] for i in range(n)]
    sol = _combination(cols, target)
    if sol is None:  # impossible for a PSD block; guards approximate mode
        raise PreconditionError(f"M_{n}({k}): last column outside the range")
    return RecursionSpec(_coeffs_from_columns(sol), tuple(g[k : k + n]))
