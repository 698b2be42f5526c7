"""k-jumping flatness: detection, jumping types, the classical flatness
criteria and a step-by-step verifier for the propagation argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    AtomicCharge,
    InsufficientData,
    MomentSequence,
    PreconditionError,
    RecursionSpec,
    ShiftError,
    WeightSequence,
    close,
    is_zero,
)
from .hankel import (
    classify,
    hankel,
    is_psd,
    property_failure,
    property_H,
    property_H_tilde,
    smuljan_recursion,
)
from .recursive import Polynomial, RepeatedRootError, extend, recover_measure

SUBNORMAL_FLAT = "subnormal-flat"
HAMBURGER_2_JUMPING = "hamburger-2-jumping"

TYPE_I = "type-I"
TYPE_II = "type-II"
NOT_JUMPING = "not-jumping"
OUTSIDE_DICHOTOMY = "outside-dichotomy"


class PropagationError(ShiftError):
    """A step of the propagation argument failed on concrete data."""

    def __init__(self, step: str, detail: str):
        super().__init__(f"{step}: {detail}")
        self.step = step
        self.detail = detail


def _weights(w) -> tuple:
    return w.weights_sq if isinstance(w, WeightSequence) else tuple(WeightSequence(tuple(w)).weights_sq)


# --------------------------------------------------------------------------
# detection and types


def detect_k_jumping(w, k: int, horizon: int | None = None) -> bool:
    """``alpha_n**2 == alpha_{n+k}**2`` for every ``n >= 1`` among the first
    ``horizon`` squared weights."""
    if k < 1:
        raise ShiftError("k must be >= 1")
    ws = _weights(w) if horizon is None or not isinstance(w, WeightSequence) else w.weights_sq_upto(horizon)
    horizon = len(ws) if horizon is None else horizon
    if horizon > len(ws):
        raise InsufficientData(f"insufficient weights: horizon {horizon}, have {len(ws)}")
    if horizon < k + 2:
        raise InsufficientData(f"k = {k} needs at least {k + 2} weights, horizon is {horizon}")
    return all(close(ws[n], ws[n + k]) for n in range(1, horizon - k))


def jumping_type(w) -> str:
    """Type I (``alpha_0 < alpha_2``) or type II (``alpha_0 = alpha_2``) of a
    2-jumping shift.  ``alpha_0 > alpha_2`` is reported as outside the
    dichotomy."""
    ws = _weights(w)
    if len(ws) < 4 or not detect_k_jumping(ws, 2):
        return NOT_JUMPING
    if close(ws[0], ws[2]):
        return TYPE_II
    return TYPE_I if ws[0] < ws[2] else OUTSIDE_DICHOTOMY


def jumping_charpoly(w) -> Polynomial:
    """Generating polynomial of a 2-jumping shift with ``p**2 = alpha_1**2 alpha_2**2``:
    ``X**2 - p**2`` when ``alpha_0 = alpha_2``, ``X**3 - p**2 X`` otherwise."""
    ws = _weights(w)
    kind = jumping_type(ws)
    if kind == NOT_JUMPING:
        raise PreconditionError("the shift is not 2-jumping on the available weights")
    p2 = ws[1] * ws[2]
    one, zero = (Fraction(1), Fraction(0)) if isinstance(p2, Fraction) else (1.0, 0.0)
    if kind == TYPE_II:
        return Polynomial((one, zero, -p2))
    return Polynomial((one, zero, -p2, zero))


def parity_classification(k: int) -> str:
    if k < 1:
        raise ShiftError("k must be >= 1")
    return SUBNORMAL_FLAT if k % 2 else HAMBURGER_2_JUMPING


# --------------------------------------------------------------------------
# classical flatness


@dataclass
class ClassicFlatnessResult:
    which: str
    pair_index: int
    hypothesis_met: bool
    conclusion_holds: bool

    @property
    def confirmed(self) -> bool:
        return not self.hypothesis_met or self.conclusion_holds

    @property
    def status(self) -> str:
        if not self.hypothesis_met:
            return "hypothesis-not-met"
        return "confirmed" if self.conclusion_holds else "counterexample-candidate"

    def __bool__(self) -> bool:
        return self.confirmed


def classic_flatness_check(w, which: str, horizon: int | None = None) -> ClassicFlatnessResult:
    """Instance check of a classical flatness criterion.

    ``which`` is ``"subnormal"``, ``"H2H2tilde"`` or ``"H3"``.  The (truncated)
    hypothesis is tested on the moments up to ``horizon`` and, when it holds,
    so is the conclusion ``alpha_1 = alpha_2 = ...``.
    """
    ws = _weights(w)
    horizon = len(ws) if horizon is None else horizon
    if horizon > len(ws):
        raise InsufficientData(f"insufficient weights: horizon {horizon}, have {len(ws)}")
    pair = next((n for n in range(1, horizon - 1) if close(ws[n], ws[n + 1])), None)
    if pair is None:
        raise PreconditionError("no two equal consecutive weights alpha_n = alpha_(n+1), n >= 1")
    g = WeightSequence(ws[:horizon]).moments(horizon)
    if which == "subnormal":
        met = classify(g, horizon // 2, horizon).subnormal_truncated
    elif which == "H2H2tilde":
        met = property_H(g, 2, horizon) and property_H_tilde(g, 2, horizon)
    elif which == "H3":
        met = property_H(g, 3, horizon)
    else:
        raise ShiftError(f"unknown criterion {which!r}")
    flat = all(close(ws[1], ws[n]) for n in range(1, horizon))
    return ClassicFlatnessResult(which, pair, met, flat)


# --------------------------------------------------------------------------
# lemma instance check


@dataclass
class LemmaCheck:
    premise: bool
    holds: bool
    checked: int
    witness: tuple | None = None  # (n, k, certificate)

    def __bool__(self) -> bool:
        return self.holds


def lemma_extension_check(spec: RecursionSpec, n0: int, horizon: int | None = None) -> LemmaCheck:
    """If ``M_{r-1}(2 n0) >= 0`` then every even-offset block ``M_n(2m)`` within
    the horizon is PSD.  Returns whether that implication's premise and all
    conclusions hold on the generated sequence."""
    r = spec.order
    horizon = max(4 * r + 2, 2 * n0 + 2 * r + 2) if horizon is None else horizon
    if horizon < 2 * n0 + 2 * (r - 1):
        raise InsufficientData(f"horizon {horizon} does not reach M_{r - 1}({2 * n0})")
    g = MomentSequence(spec.terms(horizon + 1))
    premise = is_psd(hankel(g, r - 1, 2 * n0))
    if not premise:
        return LemmaCheck(False, False, 1, (r - 1, 2 * n0, premise))
    checked = 1
    for n in range(horizon // 2 + 1):
        for m in range(0, horizon - 2 * n + 1, 2):
            cert = is_psd(hankel(g, n, m))
            checked += 1
            if not cert:
                return LemmaCheck(True, False, checked, (n, m, cert))
    return LemmaCheck(True, True, checked)


# --------------------------------------------------------------------------
# propagation


@dataclass
class PropagationStep:
    phase: str  # "outer" or "inner"
    offset: int
    recursion: RecursionSpec
    shifted_measure: AtomicCharge  # represents gamma_{offset + i}, i >= 0
    lam: object
    equalities_from: int  # alpha_n = alpha_{n+k} established for n >= this


@dataclass
class PropagationReport:
    k: int
    n0: int
    horizon: int
    property_order: int
    m0: int
    m0_inner: int
    m0_inner_raw: int
    recursion_at_m0: RecursionSpec
    recovered_measure: AtomicCharge
    outer_equalities_verified_to: int
    inner_equalities_verified_from: int
    parity_conclusion: str
    steps: list = field(default_factory=list)
    exact: bool = True


def _ratio(g, n):
    return g[n + 1] / g[n]


def _eval(charge: AtomicCharge, i: int):
    return sum((d * x**i for x, d in charge.atoms), start=0 * charge.densities[0])


def _step(g, N: int, m: int, k: int, horizon: int, phase: str) -> PropagationStep:
    try:
        spec = smuljan_recursion(g, N, m)
    except PreconditionError as exc:
        raise PropagationError(f"{phase} extraction at M_{N}({m})", str(exc)) from exc
    ext = extend(spec, N + 2)  # gamma_m ... gamma_{m + 2N + 1}
    for i in range(min(2 * N, horizon - m + 1)):
        if not close(ext[i], g[m + i]):
            raise PropagationError(
                f"{phase} extension at {m}", f"extended term {m + i} = {ext[i]} differs from data {g[m + i]}"
            )
    try:
        sigma = recover_measure(ext)
    except RepeatedRootError as exc:
        raise PropagationError(f"{phase} measure at {m}", str(exc)) from exc
    if sigma is None:
        raise PropagationError(f"{phase} measure at {m}", "extension has no real atomic representing charge")
    nonzero = [(x, d) for x, d in sigma.atoms if not is_zero(x)]
    locs = sorted({abs(x) for x, _ in nonzero})
    if len(locs) != 1 or not locs[0] > 0:
        raise PropagationError(
            f"{phase} measure shape at {m}", f"nonzero atoms {[x for x, _ in nonzero]} are not {{lambda, -lambda}}"
        )
    lam = locs[0]
    if not all(d > 0 for _, d in nonzero) or not any(close(x, lam) for x, _ in nonzero):
        raise PropagationError(f"{phase} measure shape at {m}", f"densities of {sigma} are not of the expected signs")
    if k % 2 and any(x < 0 for x, _ in nonzero):
        raise PropagationError(f"{phase} measure shape at {m}", f"odd k = {k} but {sigma} has an atom at -lambda")
    start = m + 1 if any(is_zero(x) for x in sigma.locations) else m
    # the measure predicts every ratio from `start` on; compare with the data
    for n in range(start, horizon):
        predicted = _eval(sigma, n - m + 1) / _eval(sigma, n - m)
        if not close(predicted, _ratio(g, n)):
            raise PropagationError(
                f"{phase} equality chain from {m}",
                f"alpha_{n}^2 = {_ratio(g, n)} but the recovered measure predicts {predicted}",
            )
    return PropagationStep(phase, m, spec, sigma, lam, max(start, 1))


def _normalised_measure(step: PropagationStep, g) -> AtomicCharge:
    m = step.offset
    atoms = [(x, d / x**m) for x, d in step.shifted_measure.atoms if not is_zero(x)]
    rho0 = g[0] - sum(d for _, d in atoms)
    return AtomicCharge(tuple(atoms) + ((0 * step.lam, rho0),))


def propagate(g: Sequence, k: int, n0: int, horizon: int, raw_inner: bool = False) -> PropagationReport:
    """Run the propagation argument on concrete moments and check every step.

    Outer pass: at each offset ``m = 2 floor(s/2)``, ``s = n0, n0 + k, ...``,
    the Smul'jan relation of ``M_N(m)`` (``N = floor(3k/2) + 1``) is extended,
    its representing charge must be ``rho_0 d0 + rho_1 d(l) + rho_2 d(-l)`` and
    the weights it predicts must match the data.  Inner pass: the same from
    ``m'_0 = 2 floor((k-1) n'_0 / 2)`` (``(k-1) n'_0`` with ``raw_inner``),
    ``n'_0 = ceil(n0 / k)``, descending one block of ``k`` at a time to 0.
    Any failure raises :class:`PropagationError` naming the step.
    """
    g = MomentSequence(g)
    if k < 1 or n0 < 0:
        raise ShiftError("need k >= 1 and n0 >= 0")
    if horizon >= len(g):
        raise InsufficientData(f"moments available to index {len(g) - 1}, horizon {horizon}")
    N = 3 * k // 2 + 1
    m0 = 2 * (n0 // 2)
    n0p = -(-n0 // k)
    m0p_raw = (k - 1) * n0p
    m0p = m0p_raw if raw_inner else 2 * (m0p_raw // 2)
    need = max(m0 + 2 * N, m0p + 2 * N, n0 + 2 * k + 1)
    if horizon < need:
        raise InsufficientData(f"horizon {horizon} < {need} required for k = {k}, n0 = {n0}")

    fail = property_failure(g, N, horizon, 0)
    if fail is not None:
        raise PreconditionError(f"property H({N}) fails: M_{N}({fail[0]}) is not positive semidefinite")
    for j in range(k):
        if not close(_ratio(g, n0 + j), _ratio(g, n0 + k + j)):
            raise PreconditionError(f"hypothesis fails: alpha_{n0 + j} != alpha_{n0 + k + j}")
    if not close(g[n0] * g[n0 + 2 * k], g[n0 + k] ** 2):
        raise PropagationError("consistency", f"gamma_{n0} gamma_{n0 + 2 * k} != gamma_{n0 + k}^2")

    steps: list[PropagationStep] = []
    s = n0
    while 2 * (s // 2) + 2 * N <= horizon:
        steps.append(_step(g, N, 2 * (s // 2), k, horizon, "outer"))
        s += k
    for n in range(n0, horizon - k):
        if not close(_ratio(g, n), _ratio(g, n + k)):
            raise PropagationError("outer equality chain", f"alpha_{n} != alpha_{n + k}")
    outer_to = horizon - 1

    m = m0p
    while True:
        steps.append(_step(g, N, m, k, horizon, "inner"))
        if m == 0:
            break
        m = max(0, 2 * ((m - k) // 2))
    inner_from = min(st.equalities_from for st in steps)
    for n in range(1, n0):
        if n + k < horizon and not close(_ratio(g, n), _ratio(g, n + k)):
            raise PropagationError("inner equality chain", f"alpha_{n} != alpha_{n + k}")

    ratios = [_ratio(g, n) for n in range(1, horizon)]
    conclusion = parity_classification(k)
    if k % 2:
        if not all(close(ratios[0], x) for x in ratios):
            raise PropagationError("parity", "odd k but the weights are not flat from index 1")
    elif not all(close(ratios[i], ratios[i + 2]) for i in range(len(ratios) - 2)):
        raise PropagationError("parity", "even k but the weights are not 2-jumping")

    first = steps[0]
    return PropagationReport(
        k=k,
        n0=n0,
        horizon=horizon,
        property_order=N,
        m0=m0,
        m0_inner=m0p,
        m0_inner_raw=m0p_raw,
        recursion_at_m0=first.recursion,
        recovered_measure=_normalised_measure(first, g),
        outer_equalities_verified_to=outer_to,
        inner_equalities_verified_from=inner_from,
        parity_conclusion=conclusion,
        steps=steps,
        exact=not any(isinstance(x, float) for st in steps for x in st.shifted_measure.locations),
    )
