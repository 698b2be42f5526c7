"""Aluthge transforms of weighted shifts and the obstructions to their
Hamburger-type positivity.

The transform has weights ``sqrt(alpha_n * alpha_{n+1})``, so its squared
weights and moments are in general irrational.  Their squares are rational:

    gamma~_n ** 2 = gamma_n * gamma_{n+1} / alpha_0 ** 2

and everything here is computed from those exact squares.  Hankel blocks of
``gamma~`` have entries ``sqrt(q)`` with ``q`` rational; an indefinite verdict
comes with a rational witness whose quadratic form is certified negative by
interval arithmetic, while positive verdicts are certified through the
convolution square root ``nu`` with ``nu * nu = mu * t mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (
    AtomicCharge,
    InsufficientData,
    MomentSequence,
    NotMomentSequence,
    PreconditionError,
    Radical,
    SearchSpaceTooLarge,
    ShiftError,
    WeightSequence,
    arithmetic,
    arithmetic_mode,
    fraction_sqrt,
    moments_to_weights,
    to_scalar,
)
from .hankel import INDEFINITE, PSD, ClassificationReport, PsdCertificate, classify, is_psd
from .measures import (
    abs_support,
    conv_square_root,
    is_supported_nonneg,
    moments_of,
    mult_convolve,
    t_weight,
)
from .recursive import RepeatedRootError, recover_measure

EIG_DPS = 60
NEG_THRESHOLD = Fraction(1, 10**40)
RATIONALIZE_BITS = 100


@dataclass
class AluthgeResult:
    weights_sq: list
    moments_sq: list
    classification: ClassificationReport
    measure: AtomicCharge | None = None
    product_measure: AtomicCharge | None = None
    hamburger_certified: bool = False
    subnormal_certified: bool = False


# --------------------------------------------------------------------------
# weights and moments


def aluthge_weights(w: WeightSequence, count: int | None = None) -> list:
    """Squared transform weights ``alpha_n * alpha_{n+1}``.

    Entries are Fractions when ``alpha_n**2 * alpha_{n+1}**2`` is a rational
    square and :class:`Radical` otherwise.
    """
    count = len(w.weights_sq) - 1 if count is None else count
    ws = w.weights_sq_upto(count + 1)
    if len(ws) < 2:
        raise InsufficientData("the Aluthge transform needs at least 2 weights")
    if not arithmetic().exact or any(isinstance(x, float) for x in ws):
        return [float(ws[i] * ws[i + 1]) ** 0.5 for i in range(len(ws) - 1)]
    return [Radical(ws[i] * ws[i + 1]).exact_or_self() for i in range(len(ws) - 1)]


def aluthge_moment_squares(w: WeightSequence, n: int) -> list:
    """``gamma~_k ** 2 = gamma_k gamma_{k+1} / alpha_0 ** 2`` for ``k = 0..n``."""
    g = w.moments(n + 1)
    a0 = g[1]
    return [g[k] * g[k + 1] / a0 for k in range(n + 1)]


def _as_weights(w) -> WeightSequence:
    if isinstance(w, WeightSequence):
        return w
    if isinstance(w, AtomicCharge):
        raise ShiftError("pass a WeightSequence; use shift_of_measure for a charge")
    return WeightSequence(tuple(w))


def shift_of_measure(mu: AtomicCharge, horizon: int) -> WeightSequence:
    """The shift whose moments are those of the probability measure ``mu``."""
    g = moments_of(mu, horizon)
    if g[0] != 1:
        raise NotMomentSequence(f"total mass {g[0]} is not 1")
    return moments_to_weights(g)


# --------------------------------------------------------------------------
# PSD tests for Hankel blocks with radical entries


def radical_psd(radicands) -> PsdCertificate:
    """PSD test for the symmetric matrix with entries ``sqrt(radicands[i][j])``.

    Rational blocks go through exact elimination.  Otherwise the least
    eigenvalue is computed at high precision; a clearly negative one yields a
    rational witness ``x`` whose form ``sum x_i x_j sqrt(q_ij)`` is certified
    negative with interval arithmetic.  A positive verdict on an irrational
    block is numerical (``exact=False``).
    """
    q = [[Fraction(v) for v in row] for row in radicands]
    roots = [[fraction_sqrt(v) for v in row] for row in q]
    if all(r is not None for row in roots for r in row):
        with arithmetic_mode(True, arithmetic().eps):
            return is_psd(roots)
    from mpmath import mp

    size = len(q)
    with mp.workdps(EIG_DPS):
        A = mp.matrix(size, size)
        for i in range(size):
            for j in range(size):
                A[i, j] = mp.sqrt(mp.mpf(q[i][j].numerator) / q[i][j].denominator)
        E, Q = mp.eigsy(A)
        idx = min(range(size), key=lambda t: E[t])
        lam = E[idx]
        norm = max(abs(A[i, j]) for i in range(size) for j in range(size))
        if lam < -mp.mpf(NEG_THRESHOLD.numerator) / NEG_THRESHOLD.denominator * norm:
            scale = 2**RATIONALIZE_BITS
            x = tuple(Fraction(int(mp.nint(Q[i, idx] * scale)), scale) for i in range(size))
            cert = _certify_negative(q, x)
            if cert is not None:
                return cert
        pivots = tuple(float(E[t]) for t in range(size))
    return PsdCertificate(PSD, pivots=tuple(sorted(pivots)), exact=False)


def _certify_negative(q, x) -> PsdCertificate | None:
    from mpmath import iv

    size = len(q)
    coeff: dict = {}
    for i in range(size):
        for j in range(size):
            coeff[q[i][j]] = coeff.get(q[i][j], Fraction(0)) + x[i] * x[j]
    saved = iv.dps
    try:
        for dps in (80, 120, 200):
            iv.dps = dps
            total = iv.mpf(0)
            for rad, c in coeff.items():
                if c == 0:
                    continue
                s = iv.sqrt(iv.mpf(rad.numerator) / rad.denominator)
                total += iv.mpf(c.numerator) / c.denominator * s
            if total.b < 0:
                return PsdCertificate(INDEFINITE, x, _surd_sum(coeff), exact=True)
            if total.a > 0:
                return None
    finally:
        iv.dps = saved
    return None


def _surd_sum(coeff: dict):
    import sympy

    return sympy.Add(
        *(
            sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(sympy.Rational(r.numerator, r.denominator))
            for r, c in coeff.items()
            if c != 0
        )
    )


def radical_hankel_psd(q, n: int, k: int) -> PsdCertificate:
    """PSD test of ``M_n(k)`` for the sequence ``sqrt(q_0), sqrt(q_1), ...``."""
    if k + 2 * n >= len(q):
        raise InsufficientData(f"M_{n}({k}) needs index {k + 2 * n}, have {len(q) - 1}")
    return radical_psd([[q[k + i + j] for j in range(n + 1)] for i in range(n + 1)])


def classify_sqrt_sequence(q, max_n: int, horizon: int, psd=None) -> ClassificationReport:
    """H(n) / H~(n) verdicts for the sequence ``sqrt(q_n)``, ``q`` rational."""
    q = [Fraction(to_scalar(v)) for v in q]
    if horizon >= len(q):
        raise InsufficientData(f"squares available to index {len(q) - 1}, horizon {horizon}")
    if any(v <= 0 for v in q[: horizon + 1]):
        raise NotMomentSequence("squared moments must be positive")
    if psd is None:
        def psd(n, k):
            return radical_hankel_psd(q, n, k)

    return classify(q, max_n, horizon, psd=psd)


# --------------------------------------------------------------------------
# certification through the convolution square root


def _orient(nu: AtomicCharge) -> AtomicCharge | None:
    """Orientation of ``nu`` (itself or reflected) with ``nu{s} >= nu{-s}`` for
    every ``s > 0``, so that all odd moments are nonnegative; None if neither."""
    from .core import _positive, is_zero

    def dominated(charge):
        for s in abs_support(charge):
            if s > 0:
                diff = charge.density_at(s) - charge.density_at(-s)
                if not (is_zero(diff) or _positive(diff)):
                    return False
        return True

    if dominated(nu):
        return nu
    flipped = AtomicCharge(tuple((-x, d) for x, d in nu.atoms))
    return flipped if dominated(flipped) else None


def square_root_measure(g: MomentSequence):
    """``(rho, nu)`` with ``rho`` representing ``gamma_n gamma_{n+1} / gamma_1`` and
    ``nu`` a nonnegative charge with ``nu * nu = rho`` and moments
    ``+sqrt(rho_n)``.  Either entry may be None."""
    try:
        mu = recover_measure(g)
    except RepeatedRootError:
        return None, None
    if mu is None or any(isinstance(x, float) for x in mu.locations):
        return None, None
    rho = mult_convolve(mu, t_weight(mu)).scaled(1 / g[1])
    if not rho.is_measure:
        return rho, None
    try:
        nu = conv_square_root(rho, abs_support(mu))
    except SearchSpaceTooLarge:
        return rho, None
    if nu is None:
        return rho, None
    return rho, _orient(nu)


def aluthge_classify(w, max_n: int, horizon: int) -> AluthgeResult:
    """Classify the Aluthge transform of ``w`` at the given truncation.

    Verdicts are those of the irrational sequence ``gamma~`` itself.  When the
    moments of ``w`` come from a finitely atomic measure and a square root
    ``nu`` exists, Hamburger type (and, with ``supp nu`` in ``[0, inf)``,
    subnormality) is certified exactly.
    """
    w = _as_weights(w)
    if horizon + 2 > w.horizon + 1:
        raise InsufficientData(
            f"insufficient weights: the transform up to gamma~_{horizon} needs {horizon + 2} weights"
        )
    numeric = set()
    with arithmetic_mode(True, arithmetic().eps):
        q = aluthge_moment_squares(w, horizon)

        def psd(n, k):
            cert = radical_hankel_psd(q, n, k)
            if not cert.exact:
                numeric.add(k % 2)
            return cert

        report = classify_sqrt_sequence(q, max_n, horizon, psd=psd)
        g = w.moments(horizon + 1)
        rho, nu = square_root_measure(g)
    result = AluthgeResult(
        weights_sq=aluthge_weights(w, horizon),
        moments_sq=q,
        classification=report,
        measure=nu,
        product_measure=rho,
    )
    if nu is not None:
        result.hamburger_certified = True
        result.subnormal_certified = is_supported_nonneg(nu)
        for name, failure in report.failures.items():
            if failure.certificate.exact and (name == "H" or result.subnormal_certified):
                raise AssertionError("certified witness contradicts the certified square root")
    report.exact = (0 not in numeric or result.hamburger_certified) and (
        1 not in numeric or result.subnormal_certified
    )
    return result


# --------------------------------------------------------------------------
# theorem predicates


def _three_atom_shape(mu: AtomicCharge):
    if len(mu) != 3:
        raise ShiftError(f"expected exactly 3 atoms, got {len(mu)}")
    (x0, a), (x1, b), (x2, c) = mu.atoms
    if not mu.is_measure:
        raise ShiftError("densities must be positive")
    if not x0 < 0:
        raise ShiftError("the smallest atom must sit at -p with p > 0")
    return a, b, c, -x0, x1, x2


def thm21_predicate(mu: AtomicCharge) -> bool:
    """For ``a d(-p) + b d(r) + c d(q)``: the transform is subnormal iff
    ``r = 0`` and ``p = q``."""
    a, b, c, p, r, q = _three_atom_shape(mu)
    return r == 0 and p == q


def _require_obstruction_input(mu: AtomicCharge):
    if not mu.atoms or not mu.is_measure:
        raise PreconditionError("mu must be a nonzero nonnegative measure")
    if not any(x < 0 for x in mu.locations):
        raise PreconditionError("mu has no negative atom: the shift is subnormal")


def fib_obstruction(mu: AtomicCharge) -> bool:
    """Literal hypothesis: for every atom ``l_i <= 0`` and all atoms ``l_j, l_k``
    other than ``l_i`` (``j = k`` allowed), ``l_i != l_j * l_k``."""
    _require_obstruction_input(mu)
    locs = mu.locations
    for i, li in enumerate(locs):
        if li > 0:
            continue
        others = [x for t, x in enumerate(locs) if t != i]
        if any(li == xj * xk for xj in others for xk in others):
            return False
    return True


def negative_square_atom_obstruction(mu: AtomicCharge) -> bool:
    """Some negative atom ``l_i`` has ``l_i**2 != l_j * l_k`` for every pair
    ``(j, k) != (i, i)``.

    Then ``mu * t mu`` keeps the atom ``l_i * rho_i**2`` at ``l_i**2`` with a
    negative density, so it is not a measure and the transform cannot be of
    Hamburger type.  This is the form of the negative-atom hypothesis that the
    obstruction actually needs; the literal one (:func:`fib_obstruction`)
    admits counterexamples such as ``d(-1)/4 + d(0)/4 + d(1)/2``.
    """
    _require_obstruction_input(mu)
    locs = mu.locations
    for i, li in enumerate(locs):
        if li >= 0:
            continue
        clash = any(
            locs[j] * locs[k] == li * li
            for j in range(len(locs))
            for k in range(len(locs))
            if (j, k) != (i, i)
        )
        if not clash:
            return True
    return False


def four_atom_obstruction(mu: AtomicCharge) -> bool:
    """Four atoms always obstruct Hamburger type for the transform."""
    if len(mu) != 4:
        raise ShiftError(f"expected exactly 4 atoms, got {len(mu)}")
    if not mu.is_measure:
        raise PreconditionError("mu must be a nonnegative measure")
    return True
