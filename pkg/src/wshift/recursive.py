"""Linear recursions of moment sequences and finitely atomic representing charges."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._linalg import solve_columns
from .core import (
    AtomicCharge,
    MomentSequence,
    PreconditionError,
    RecursionSpec,
    ShiftError,
    arithmetic,
    close,
    to_scalar,
)

ROOT_CLUSTER_TOL = 1e-9


class RepeatedRootError(ShiftError):
    pass


@dataclass(frozen=True)
class Polynomial:
    """Monic polynomial; ``coeffs`` run from the leading 1 down to the constant."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(to_scalar(c) for c in self.coeffs)
        if len(cs) < 2:
            raise ShiftError("a characteristic polynomial has degree >= 1")
        if not close(cs[0], 1):
            raise ShiftError("polynomial must be monic")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        acc = 0
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            p = d - i
            mono = "" if p == 0 else ("z" if p == 1 else f"z^{p}")
            terms.append(f"{c}{'*' + mono if mono else ''}" if c != 1 or not mono else mono)
        return " + ".join(terms)


@dataclass(frozen=True)
class RootSet:
    roots: tuple  # ((value, multiplicity), ...)

    @property
    def simple(self) -> bool:
        return all(m == 1 for _, m in self.roots)

    @property
    def values(self) -> tuple:
        return tuple(v for v, _ in self.roots)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)


# --------------------------------------------------------------------------
# recursion detection


def _berlekamp_massey(s: Sequence[Fraction]) -> tuple[int, list]:
    """Shortest LFSR over Q: returns (L, C) with C[0] = 1 and
    ``s[n] + sum_{i=1..L} C[i] s[n-i] = 0`` for all ``L <= n < len(s)``."""
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum((C[i] * s[n - i] for i in range(1, min(L, len(C) - 1) + 1)), Fraction(0))
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = C[:]
        need = len(B) + m
        if len(C) < need:
            C = C + [Fraction(0)] * (need - len(C))
        for i, bi in enumerate(B):
            C[i + m] -= coef * bi
        if 2 * L <= n:
            L = n + 1 - L
            B, b, m = T, d, 1
        else:
            m += 1
    C = C + [Fraction(0)] * (L + 1 - len(C))
    return L, C[: L + 1]


def _detect_approx(g: Sequence[float], max_order: int) -> RecursionSpec | None:
    eps = arithmetic().eps
    scale = max(1.0, max(abs(float(t)) for t in g))
    for r in range(1, max_order + 1):
        rows = [[float(g[n + r - 1 - j]) for j in range(r)] for n in range(len(g) - r)]
        rhs = [float(g[n + r]) for n in range(len(g) - r)]
        a, b = np.array(rows), np.array(rhs)
        sol, *_ = np.linalg.lstsq(a, b, rcond=None)
        if np.max(np.abs(a @ sol - b)) <= 10 * eps * scale:
            return RecursionSpec(tuple(float(c) for c in sol), tuple(g[:r]))
    return None


def detect_recursion(g: Sequence, max_order: int | None = None) -> RecursionSpec | None:
    """Minimal-order recursion valid on all the data, or None.

    Orders above ``max_order`` (default ``len(g) // 2``, the largest order the
    data still pins down uniquely) are rejected.
    """
    g = MomentSequence(g)
    if len(g) < 2:
        raise ShiftError("need at least two terms to detect a recursion")
    if max_order is None:
        max_order = len(g) // 2
    if not arithmetic().exact or any(isinstance(t, float) for t in g):
        return _detect_approx(g, max_order)
    L, C = _berlekamp_massey(list(g))
    if L == 0 or L > max_order:
        return None
    return RecursionSpec(tuple(-c for c in C[1:]), tuple(g[:L]))


def extend(spec: RecursionSpec, count: int) -> MomentSequence:
    """Initial segment followed by ``count`` forward terms."""
    return MomentSequence(spec.terms(spec.order + count))


def extend_backward(spec: RecursionSpec, steps: int) -> MomentSequence:
    """Prepend ``steps`` terms by running the recursion backwards."""
    if not spec.invertible:
        raise PreconditionError("last recursion coefficient is zero: cannot run backwards")
    a = spec.coeffs
    r = spec.order
    seq = list(spec.initial)
    for _ in range(steps):
        # seq[0..r-1] are gamma_{t+1..t+r}; solve gamma_{t+r} = sum a_j gamma_{t+r-1-j} for gamma_t
        head = seq[r - 1] - sum((a[j] * seq[r - 2 - j] for j in range(r - 1)), start=0 * a[0])
        seq.insert(0, head / a[r - 1])
    return MomentSequence(seq)


def characteristic_polynomial(spec: RecursionSpec) -> Polynomial:
    """``z^r - a_0 z^(r-1) - ... - a_(r-1)``."""
    one = Fraction(1) if arithmetic().exact else 1.0
    return Polynomial((one,) + tuple(-c for c in spec.coeffs))


# --------------------------------------------------------------------------
# roots


def _cluster(values: list, tol: float) -> list:
    out: list = []
    for v in values:
        for i, (w, m) in enumerate(out):
            if abs(v - w) <= tol * max(1.0, abs(w)):
                out[i] = ((w * m + v) / (m + 1), m + 1)
                break
        else:
            out.append((v, 1))
    return out


def _real_or_complex(z: complex, tol: float):
    return z.real if abs(z.imag) <= tol * max(1.0, abs(z)) else z


def roots(P: Polynomial, tol: float = ROOT_CLUSTER_TOL) -> RootSet:
    """Roots with multiplicities.

    Exact coefficients are factored over Q: linear factors give exact rational
    roots, higher-degree irreducible factors fall back to companion-matrix
    eigenvalues (clustered at relative tolerance ``tol``).
    """
    if all(isinstance(c, Fraction) for c in P.coeffs):
        import sympy

        z = sympy.Symbol("z")
        poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in P.coeffs], z)
        found: list = []
        for factor, mult in poly.factor_list()[1]:
            if factor.degree() == 1:
                c1, c0 = factor.all_coeffs()
                root = -sympy.Rational(c0) / sympy.Rational(c1)
                found.append((Fraction(int(root.p), int(root.q)), mult))
            else:
                cs = [float(c) for c in factor.all_coeffs()]
                for v, m in _cluster(list(np.roots(cs)), tol):
                    found.append((_real_or_complex(complex(v), tol), m * mult))
        return RootSet(tuple(sorted(found, key=_root_key)))
    cs = [float(c) for c in P.coeffs]
    clustered = _cluster(list(np.roots(cs)), tol)
    return RootSet(
        tuple(sorted(((_real_or_complex(complex(v), tol), m) for v, m in clustered), key=_root_key))
    )


def _root_key(item):
    v = item[0]
    if isinstance(v, complex):
        return (1, v.real, v.imag)
    return (0, float(v), 0.0)


# --------------------------------------------------------------------------
# measure recovery


def _verify_exact(charge: AtomicCharge, g: Sequence) -> bool:
    for k, t in enumerate(g):
        if sum((d * x**k for x, d in charge.atoms), start=Fraction(0)) != t:
            return False
    return True


def _verify_approx(charge: AtomicCharge, g: Sequence) -> bool:
    eps = arithmetic().eps
    for k, t in enumerate(g):
        val = sum(float(d) * float(x) ** k for x, d in charge.atoms)
        if abs(val - float(t)) > 1e3 * eps * max(1.0, abs(float(t))):
            return False
    return True


def recover_measure(g: Sequence) -> AtomicCharge | None:
    """Finitely atomic charge reproducing every available term of ``g``.

    Detects the minimal recursion, takes the (simple) roots of its
    characteristic polynomial as atom locations and solves the Vandermonde
    system on the first ``r`` moments.  Returns None when no recursion is
    found, a root is non-real, or the charge fails to reproduce the data.
    The result may be signed; check :attr:`AtomicCharge.is_measure`.
    """
    g = MomentSequence(g)
    spec = detect_recursion(g)
    if spec is None:
        return None
    rs = roots(characteristic_polynomial(spec))
    if not rs.simple:
        raise RepeatedRootError(
            "non-atomic representation (derivative terms) unsupported: repeated characteristic roots"
        )
    nodes = rs.values
    if any(isinstance(v, complex) for v in nodes):
        return None
    r = len(nodes)
    if rs.exact and arithmetic().exact:
        cols = [[x**i for i in range(r)] for x in nodes]
        dens = solve_columns(cols, list(g[:r]))
        if dens is None:
            return None
        charge = AtomicCharge(tuple(zip(nodes, dens)))
        if len(charge) != r or not _verify_exact(charge, g):
            return None
        return charge
    V = np.array([[float(x) ** i for x in nodes] for i in range(r)])
    dens = np.linalg.solve(V, np.array([float(t) for t in g[:r]]))
    charge = AtomicCharge(tuple((float(x), float(d)) for x, d in zip(nodes, dens)))
    if not _verify_approx(charge, g):
        return None
    return charge
