"""Scalars, arithmetic modes and the data types shared by every module.

Exact mode works over :class:`fractions.Fraction`; approximate mode over
floats with a global tolerance.  The squared weights ``alpha_n**2`` are the
canonical exact description of a weighted shift, so square roots only show
up when a caller explicitly asks for them.
"""

from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[Fraction, float]


class ShiftError(ValueError):
    """Base class for well-formed-input-but-invalid-data errors."""


class InsufficientData(ShiftError):
    pass


class NotMomentSequence(ShiftError):
    pass


class PreconditionError(ShiftError):
    pass


class SearchSpaceTooLarge(RuntimeError):
    """An explicit desk-scale bound was exceeded."""


# --------------------------------------------------------------------------
# arithmetic mode


@dataclass(frozen=True)
class Arithmetic:
    exact: bool = True
    eps: float = 1e-9


_ARITH: contextvars.ContextVar[Arithmetic] = contextvars.ContextVar(
    "wshift_arithmetic", default=Arithmetic()
)


def arithmetic() -> Arithmetic:
    return _ARITH.get()


@contextmanager
def arithmetic_mode(exact: bool = True, eps: float = 1e-9):
    """Temporarily switch between exact and approximate arithmetic."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    token = _ARITH.set(Arithmetic(exact=exact, eps=eps))
    try:
        yield _ARITH.get()
    finally:
        _ARITH.reset(token)


def _sympy_to_fraction(x):
    # sympy is an optional participant here: only conv_square_root produces
    # sympy numbers, and rational ones are folded back to Fraction.
    try:
        import sympy
    except ImportError:  # pragma: no cover
        return None
    if isinstance(x, sympy.Basic):
        if x.is_Rational:
            return Fraction(int(x.p), int(x.q))
        return x
    return None


def to_scalar(x) -> Scalar:
    """Coerce ``x`` into the active arithmetic's scalar type.

    Strings are read as ``"p/q"`` or decimal literals and are exact; floats
    always stay approximate.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    exact = arithmetic().exact
    if isinstance(x, Fraction):
        return x if exact else float(x)
    if isinstance(x, int):
        return Fraction(x) if exact else float(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator) if exact else float(x)
    if isinstance(x, float):
        # a float is an approximate value in either mode
        if not math.isfinite(x):
            raise ShiftError(f"non-finite scalar {x!r}")
        return x
    if isinstance(x, str):
        try:
            q = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ShiftError(f"cannot parse scalar {x!r}") from exc
        return q if exact else float(q)
    conv = _sympy_to_fraction(x)
    if conv is not None:
        if isinstance(conv, Fraction):
            return conv if exact else float(conv)
        return conv if exact else float(conv)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def is_zero(x) -> bool:
    if isinstance(x, float):
        return abs(x) <= arithmetic().eps
    if isinstance(x, (Fraction, int)):
        return x == 0
    import sympy

    return sympy.expand(x) == 0


def close(a, b) -> bool:
    """Equality under the active arithmetic (exact, or within eps)."""
    if isinstance(a, float) or isinstance(b, float):
        a, b = float(a), float(b)
        return abs(a - b) <= arithmetic().eps * max(1.0, abs(a), abs(b))
    return a == b


def sign(x) -> int:
    if is_zero(x):
        return 0
    return 1 if x > 0 else -1


def fraction_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Radical:
    """The nonnegative square root of a rational ``radicand``."""

    radicand: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radicand", Fraction(self.radicand))
        if self.radicand < 0:
            raise ValueError("negative radicand")

    @property
    def is_rational(self) -> bool:
        return fraction_sqrt(self.radicand) is not None

    @property
    def value(self) -> Fraction:
        root = fraction_sqrt(self.radicand)
        if root is None:
            raise ValueError(f"sqrt({self.radicand}) is irrational")
        return root

    def exact_or_self(self):
        root = fraction_sqrt(self.radicand)
        return self if root is None else root

    def __float__(self) -> float:
        return math.sqrt(self.radicand)

    def __str__(self) -> str:
        return f"sqrt({self.radicand})"


# --------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class RecursionSpec:
    """``gamma[n+r] = sum_j coeffs[j] * gamma[n+r-1-j]`` for all n >= 0.

    ``initial`` holds the first ``r`` terms.  The last coefficient may be zero
    (a root at the origin); :attr:`invertible` tells whether backward
    extension is possible.
    """

    coeffs: tuple
    initial: tuple

    def __post_init__(self):
        coeffs = tuple(to_scalar(c) for c in self.coeffs)
        initial = tuple(to_scalar(c) for c in self.initial)
        if not coeffs:
            raise ShiftError("a recursion needs order r >= 1")
        if len(initial) != len(coeffs):
            raise ShiftError(
                f"order {len(coeffs)} recursion needs {len(coeffs)} initial terms, got {len(initial)}"
            )
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "initial", initial)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def invertible(self) -> bool:
        return not is_zero(self.coeffs[-1])

    def next_term(self, window: Sequence[Scalar]) -> Scalar:
        """Term following ``window`` (the last ``r`` terms, oldest first)."""
        r = self.order
        return sum(
            (self.coeffs[j] * window[r - 1 - j] for j in range(r)),
            start=Fraction(0) if arithmetic().exact else 0.0,
        )

    def terms(self, count: int) -> list:
        """The first ``count`` terms of the generated sequence."""
        out = list(self.initial[:count])
        while len(out) < count:
            out.append(self.next_term(out[-self.order :]))
        return out


class MomentSequence(tuple):
    """A moment sequence ``gamma_0, gamma_1, ...`` (finite truncation).

    Shift moments have ``gamma_0 = 1``; raw charge moments need not, so the
    normalisation is reported by :attr:`is_normalized` rather than enforced.
    """

    def __new__(cls, terms: Iterable = ()):
        return super().__new__(cls, (to_scalar(t) for t in terms))

    @property
    def is_normalized(self) -> bool:
        return len(self) > 0 and close(self[0], 1)

    @property
    def horizon(self) -> int:
        """Largest available index."""
        return len(self) - 1

    def scaled(self, c) -> "MomentSequence":
        c = to_scalar(c)
        return MomentSequence(c * t for t in self)

    def __repr__(self) -> str:
        return f"MomentSequence({list(self)!r})"


@dataclass(frozen=True)
class WeightSequence:
    """Squared weights ``alpha_0**2, ..., alpha_m**2`` of a weighted shift.

    ``tail`` optionally continues the induced *moment* sequence recursively
    past the prefix, which makes the shift available to any horizon.  The
    tail's initial terms must agree with the prefix moments.
    """

    weights_sq: tuple
    tail: RecursionSpec | None = None

    def __post_init__(self):
        ws = tuple(to_scalar(w) for w in self.weights_sq)
        for i, w in enumerate(ws):
            if not w > 0:
                raise NotMomentSequence(f"weight alpha_{i}^2 = {w} is not positive")
        object.__setattr__(self, "weights_sq", ws)
        if self.tail is not None:
            r = self.tail.order
            if len(ws) + 1 < r:
                raise ShiftError(
                    f"tail of order {r} needs at least {r - 1} prefix weights"
                )
            prefix = _prefix_moments(ws)
            for i in range(r):
                if not close(prefix[i], self.tail.initial[i]):
                    raise ShiftError(
                        f"tail initial term {i} = {self.tail.initial[i]} disagrees "
                        f"with prefix moment {prefix[i]}"
                    )

    @classmethod
    def from_weights(cls, weights: Iterable) -> "WeightSequence":
        """Build from the (unsquared) weights."""
        return cls(tuple(to_scalar(w) ** 2 for w in weights))

    @classmethod
    def from_recursion(cls, spec: RecursionSpec) -> "WeightSequence":
        init = spec.initial
        if not close(init[0], 1):
            raise NotMomentSequence("gamma_0 must be 1 for a shift")
        for g in init:
            if not g > 0:
                raise NotMomentSequence(f"non-positive initial moment {g}")
        ws = tuple(init[i + 1] / init[i] for i in range(len(init) - 1))
        return cls(ws, tail=spec)

    @property
    def horizon(self) -> float | int:
        """Largest moment index available (``inf`` for a recursive tail)."""
        return math.inf if self.tail is not None else len(self.weights_sq)

    def moments(self, n: int) -> MomentSequence:
        return weights_to_moments(self, n)

    def weights_sq_upto(self, count: int) -> tuple:
        """The first ``count`` squared weights, generating from the tail."""
        if count <= len(self.weights_sq):
            return self.weights_sq[:count]
        g = weights_to_moments(self, count)
        return tuple(g[i + 1] / g[i] for i in range(count))

    def weights(self) -> list[float]:
        """Approximate unsquared weights of the stored prefix."""
        return [math.sqrt(w) for w in self.weights_sq]

    def is_bounded_upto(self, count: int | None = None) -> bool:
        """Sup of the available weights is finite (always true on a finite horizon)."""
        ws = self.weights_sq if count is None else self.weights_sq_upto(count)
        return all(math.isfinite(float(w)) for w in ws)


def _prefix_moments(ws: Sequence[Scalar]) -> list:
    one = Fraction(1) if arithmetic().exact else 1.0
    out = [one]
    for w in ws:
        out.append(out[-1] * w)
    return out


@dataclass(frozen=True)
class AtomicCharge:
    """A finitely atomic signed measure ``sum density * delta_location``.

    Atoms are canonicalised on construction: equal locations merge, zero
    densities drop out and locations are sorted ascending.
    """

    atoms: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for loc, den in self.atoms:
            loc = to_scalar(loc)
            den = to_scalar(den)
            key = _find_key(merged, loc)
            merged[key] = merged.get(key, 0) + den if key in merged else den
        canon = []
        for loc in sorted(merged):
            den = _tidy(merged[loc])
            if not is_zero(den):
                canon.append((loc, den))
        object.__setattr__(self, "atoms", tuple(canon))

    @classmethod
    def from_dict(cls, d: dict) -> "AtomicCharge":
        return cls(tuple(d.items()))

    @property
    def locations(self) -> tuple:
        return tuple(a[0] for a in self.atoms)

    @property
    def densities(self) -> tuple:
        return tuple(a[1] for a in self.atoms)

    @property
    def is_measure(self) -> bool:
        """All densities positive."""
        return all(_positive(d) for d in self.densities)

    @property
    def is_signed(self) -> bool:
        return not self.is_measure

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator:
        return iter(self.atoms)

    def __add__(self, other: "AtomicCharge") -> "AtomicCharge":
        return AtomicCharge(self.atoms + other.atoms)

    def scaled(self, c) -> "AtomicCharge":
        c = to_scalar(c)
        return AtomicCharge(tuple((x, c * d) for x, d in self.atoms))

    def density_at(self, loc):
        for x, d in self.atoms:
            if close(x, loc):
                return d
        return Fraction(0)

    def __str__(self) -> str:
        if not self.atoms:
            return "0"
        return " + ".join(f"{d}*delta({x})" for x, d in self.atoms)


def delta(location, density=1) -> AtomicCharge:
    return AtomicCharge(((location, density),))


def _find_key(merged: dict, loc):
    if isinstance(loc, float):
        for key in merged:
            if close(key, loc):
                return key
    return loc


def _tidy(d):
    conv = _sympy_to_fraction(d)
    if conv is None:
        return d
    if isinstance(conv, Fraction):
        return conv
    import sympy

    e = sympy.expand(conv)
    return Fraction(int(e.p), int(e.q)) if e.is_Rational else e


def _positive(d) -> bool:
    if isinstance(d, (Fraction, int)):
        return d > 0
    if isinstance(d, float):
        return d > arithmetic().eps
    import sympy

    pos = sympy.sympify(d).is_positive
    if pos is None:
        # sign of a nonzero algebraic number is settled numerically
        return bool(sympy.N(d, 50) > 0)
    return bool(pos)


# --------------------------------------------------------------------------
# operations


def weights_to_moments(w: WeightSequence, n: int) -> MomentSequence:
    """``gamma_0 = 1`` and ``gamma_k = alpha_0**2 ... alpha_{k-1}**2`` for k <= n."""
    if n < 0:
        raise ShiftError("n must be nonnegative")
    if n > w.horizon:
        raise InsufficientData(
            f"insufficient weights: gamma_{n} needs {n} weights, have {len(w.weights_sq)}"
        )
    prefix = _prefix_moments(w.weights_sq)
    if n < len(prefix):
        return MomentSequence(prefix[: n + 1])
    spec = w.tail
    out = prefix
    while len(out) <= n:
        out.append(spec.next_term(out[-spec.order :]))
    return MomentSequence(out)


def moments_to_weights(g: Sequence) -> WeightSequence:
    """Squared weights ``gamma_{n+1} / gamma_n``."""
    g = MomentSequence(g)
    for i, t in enumerate(g):
        if not t > 0:
            raise NotMomentSequence(
                f"not a weighted-shift moment sequence: gamma_{i} = {t} is not positive"
            )
    if not g.is_normalized:
        raise NotMomentSequence(f"not a weighted-shift moment sequence: gamma_0 = {g[0]}")
    return WeightSequence(tuple(g[i + 1] / g[i] for i in range(len(g) - 1)))


def moment_positivity_horizon(spec: RecursionSpec, n: int) -> bool:
    """True iff every generated ``gamma_0 ... gamma_n`` is strictly positive."""
    return all(t > 0 and not is_zero(t) for t in spec.terms(n + 1))
