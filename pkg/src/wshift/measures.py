"""Multiplicative-convolution algebra of finitely atomic charges."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._linalg import inverse
from .core import (
    AtomicCharge,
    MomentSequence,
    SearchSpaceTooLarge,
    ShiftError,
    arithmetic,
    fraction_sqrt,
    is_zero,
    to_scalar,
)

MAX_SQRT_CANDIDATES = 8


@dataclass(frozen=True)
class SupportSet:
    locations: tuple

    def __post_init__(self):
        locs = sorted({to_scalar(x) for x in self.locations})
        object.__setattr__(self, "locations", tuple(locs))

    def __iter__(self):
        return iter(self.locations)

    def __len__(self) -> int:
        return len(self.locations)

    def __contains__(self, x) -> bool:
        return x in self.locations

    def issubset(self, other: "SupportSet | Iterable") -> bool:
        return set(self.locations) <= set(other)


def moments_of(m: AtomicCharge, n: int) -> MomentSequence:
    """Raw power moments ``sum density * location**k`` for ``k = 0..n``."""
    zero = Fraction(0) if arithmetic().exact else 0.0
    return MomentSequence(
        sum((d * x**k for x, d in m.atoms), start=zero) for k in range(n + 1)
    )


def mult_convolve(m1: AtomicCharge, m2: AtomicCharge) -> AtomicCharge:
    """Push-forward of ``m1 x m2`` under ``(x, y) -> x*y``."""
    return AtomicCharge(
        tuple((x * y, d * e) for x, d in m1.atoms for y, e in m2.atoms)
    )


def t_weight(m: AtomicCharge) -> AtomicCharge:
    """The charge ``t * m``: each atom ``(x, d)`` becomes ``(x, x*d)``."""
    return AtomicCharge(tuple((x, x * d) for x, d in m.atoms))


def abs_support(m: AtomicCharge) -> SupportSet:
    return SupportSet(tuple(abs(x) for x in m.locations))


def is_nonneg(m: AtomicCharge) -> bool:
    """All densities positive (a measure rather than a signed charge)."""
    return m.is_measure


def is_supported_nonneg(m: AtomicCharge) -> bool:
    """Every atom sits in ``[0, inf)``."""
    return all(x >= 0 for x in m.locations)


def charges_equal(a: AtomicCharge, b: AtomicCharge) -> bool:
    """Exact equality, robust to unsimplified algebraic densities."""
    if a.locations != b.locations:
        return False
    return all(is_zero(d - e) for d, e in zip(a.densities, b.densities))


# --------------------------------------------------------------------------
# convolution square roots


def _patterns(candidates: list, nonneg_only: bool):
    """Candidate atom sets for a square root, nonnegative supports first."""
    nonzero = [s for s in candidates if s != 0]
    states = ("+",) if nonneg_only else ("+", "-", "+-")
    out = []
    for zero in (True, False):
        for choice in itertools.product((None,) + states, repeat=len(nonzero)):
            locs = [Fraction(0)] if zero else []
            for s, st in zip(nonzero, choice):
                if st is None:
                    continue
                if "+" in st:
                    locs.append(s)
                if "-" in st:
                    locs.append(-s)
            if locs:
                out.append(tuple(sorted(locs)))
    out = sorted(set(out), key=lambda p: (any(x < 0 for x in p), len(p), p))
    return out


def _odd_sign_choices(locs, count: int):
    odd = [n for n in range(count) if n % 2 == 1]
    if all(x >= 0 for x in locs):
        yield {n: 1 for n in odd}
        return
    if all(x <= 0 for x in locs):
        yield {n: -1 for n in odd}
        return
    for signs in itertools.product((1, -1), repeat=len(odd)):
        yield dict(zip(odd, signs))


def _sym_sqrt(q: Fraction):
    import sympy

    root = fraction_sqrt(q)
    if root is not None:
        return sympy.Rational(root.numerator, root.denominator)
    return sympy.sqrt(sympy.Rational(q.numerator, q.denominator))


def _strictly_positive(x) -> bool:
    import sympy

    if isinstance(x, Fraction):
        return x > 0
    x = sympy.nsimplify(x) if not isinstance(x, sympy.Basic) else x
    if is_zero(x):
        return False
    return bool(sympy.N(x, 60) > 0)


def conv_square_root(
    rho: AtomicCharge, candidates: SupportSet | Iterable, *, nonneg_support: bool = False
) -> AtomicCharge | None:
    """A nonnegative charge ``nu`` with ``nu * nu = rho`` (multiplicative
    convolution), atoms restricted to ``{+-s : s in candidates} | {0}``.

    Enumerates atom-location patterns (nonnegative supports first, then by
    size), keeps those whose product set equals ``supp(rho)``, recovers the
    densities from ``m_n(nu) = +-sqrt(m_n(rho))`` through a Vandermonde solve
    and verifies ``nu * nu = rho`` exactly.  Densities may be quadratic surds
    and are returned as sympy numbers when irrational.
    """
    cands = sorted({abs(to_scalar(s)) for s in candidates})
    if not cands:
        raise ShiftError("candidate set must be nonempty")
    if len([s for s in cands if s != 0]) > MAX_SQRT_CANDIDATES:
        raise SearchSpaceTooLarge(
            f"search space too large: {len(cands)} candidate locations (limit {MAX_SQRT_CANDIDATES})"
        )
    if not rho.atoms or not rho.is_measure:
        return None
    target = set(rho.locations)
    for locs in _patterns(cands, nonneg_support):
        products = {x * y for x in locs for y in locs}
        if products != target:
            continue
        nu = _solve_pattern(rho, locs)
        if nu is not None:
            return nu
    return None


def _solve_pattern(rho: AtomicCharge, locs: tuple) -> AtomicCharge | None:
    import sympy

    N = len(locs)
    rho_m = moments_of(rho, N - 1)
    if any(m < 0 for m in rho_m):
        return None
    roots = [_sym_sqrt(m) for m in rho_m]
    vinv = inverse([[x**i for x in locs] for i in range(N)])
    for signs in _odd_sign_choices(locs, N):
        m = [roots[n] * signs.get(n, 1) for n in range(N)]
        dens = [
            sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * m[n] for n, c in enumerate(row)))
            for row in vinv
        ]
        if not all(_strictly_positive(d) for d in dens):
            continue
        nu = AtomicCharge(tuple(zip(locs, dens)))
        if len(nu) == N and charges_equal(mult_convolve(nu, nu), rho):
            return nu
    return None
