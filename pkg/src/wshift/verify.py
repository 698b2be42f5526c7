"""Seeded instance generators and theorem sweeps.

Every sweep derives its randomness from one integer seed, so reruns are
bit-for-bit identical.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .aluthge import (
    aluthge_classify,
    fib_obstruction,
    negative_square_atom_obstruction,
    shift_of_measure,
    thm21_predicate,
)
from .core import AtomicCharge, arithmetic_mode
from .measures import moments_of

MOMENT_CHECK = 13


def _rat(rng: random.Random, lo: int, hi: int, den: int = 6) -> Fraction:
    """Random rational in ``[lo, hi]`` with denominator at most ``den``."""
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def _densities(rng: random.Random, count: int) -> list[Fraction]:
    raw = [rng.randint(1, 12) for _ in range(count)]
    total = sum(raw)
    return [Fraction(x, total) for x in raw]


def positive_moments(mu: AtomicCharge, upto: int = MOMENT_CHECK) -> bool:
    return all(m > 0 for m in moments_of(mu, upto))


def tuple_measure(t) -> AtomicCharge:
    a, b, c, p, r, q = (Fraction(x) for x in t)
    return AtomicCharge(((-p, a), (r, b), (q, c)))


def thm21_tuples(count: int, seed: int = 0, special: int | None = None) -> list[tuple]:
    """Valid ``(a, b, c, p, r, q)``: ``p > 0``, ``-p < r < q``, densities summing
    to 1 and ``gamma_1..gamma_13 > 0``.

    A quarter (or ``special``) satisfy ``r = 0, p = q``; the rest mix generic
    tuples with near misses (``r = 0, p != q`` and ``p = q, r != 0``).
    """
    rng = random.Random(seed)
    special = max(count // 4, 1) if special is None else special
    out: list[tuple] = []
    seen = set()
    while len(out) < count:
        kind = "special" if len(out) < special else rng.choice(("generic", "r0", "pq", "generic"))
        a, b, c = _densities(rng, 3)
        p = _rat(rng, 1, 3)
        if p <= 0:
            continue
        if kind == "special":
            r, q = Fraction(0), p
        elif kind == "r0":
            r, q = Fraction(0), _rat(rng, 1, 3)
            if q == p or q <= 0:
                continue
        elif kind == "pq":
            q = p
            r = _rat(rng, -3, 3)
            if r == 0 or not -p < r < q:
                continue
        else:
            r = _rat(rng, -3, 3)
            q = _rat(rng, -2, 4)
            if not (-p < r < q) or (r == 0 and p == q):
                continue
        t = (a, b, c, p, r, q)
        if t in seen or not positive_moments(tuple_measure(t)):
            continue
        seen.add(t)
        out.append(t)
    return out


def random_charge(rng: random.Random, atoms: int, lo: int = -2, hi: int = 3, den: int = 4) -> AtomicCharge:
    """Probability measure with ``atoms`` distinct rational locations."""
    locs: set = set()
    while len(locs) < atoms:
        locs.add(_rat(rng, lo, hi, den))
    return AtomicCharge(tuple(zip(sorted(locs), _densities(rng, atoms))))


def four_atom_charges(count: int, seed: int = 0) -> list[AtomicCharge]:
    """Four-atom probability measures with positive moments ``gamma_1..gamma_13``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        mu = random_charge(rng, 4)
        if positive_moments(mu):
            out.append(mu)
    return out


def fib_charges(count: int, seed: int = 0, hypothesis: bool = True) -> list[AtomicCharge]:
    """Charges with a negative atom and positive moments whose literal
    negative-atom hypothesis holds (``hypothesis=True``) or fails."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if hypothesis:
            mu = random_charge(rng, rng.randint(2, 4))
        else:
            # plant l_i = l_j * l_k with l_i < 0
            x = _rat(rng, 1, 3, 3)
            y = -_rat(rng, 1, 2, 3)
            if x == 1 or y == -1 or x * y == y:
                continue
            locs = {x * y, x, y}
            if len(locs) < 3:
                continue
            if rng.random() < 0.5:
                locs.add(_rat(rng, 0, 3, 3))
            mu = AtomicCharge(tuple(zip(sorted(locs), _densities(rng, len(locs)))))
        if not any(loc < 0 for loc in mu.locations) or not positive_moments(mu):
            continue
        if fib_obstruction(mu) == hypothesis:
            out.append(mu)
    return out


# --------------------------------------------------------------------------
# sweeps


def _failure_row(report, prop: str) -> dict:
    f = report.failures.get(prop)
    if f is None:
        return {"fails": False}
    return {"fails": True, "n": f.n, "k": f.k, "certified": f.certificate.exact}


def sweep_thm21(tuples, max_n: int = 4, horizon: int = 12) -> list[dict]:
    rows = []
    with arithmetic_mode(True):
        for t in tuples:
            mu = tuple_measure(t)
            res = aluthge_classify(shift_of_measure(mu, horizon + 2), max_n, horizon)
            pred = thm21_predicate(mu)
            sub = res.classification.subnormal_truncated
            rows.append(
                {
                    "tuple": t,
                    "predicate": pred,
                    "subnormal": sub,
                    "certified": res.subnormal_certified if sub else _any_certified(res.classification),
                    "agree": pred == sub,
                }
            )
    return rows


def _any_certified(report) -> bool:
    return any(f.certificate.exact for f in report.failures.values())


def sweep_hamburger_failure(charges, max_n: int = 4, horizon: int = 12) -> list[dict]:
    """For each charge, whether the transform fails H(n) for some ``n <= max_n``."""
    rows = []
    with arithmetic_mode(True):
        for mu in charges:
            res = aluthge_classify(shift_of_measure(mu, horizon + 2), max_n, horizon)
            row = {"charge": mu}
            row.update(_failure_row(res.classification, "H"))
            row["hamburger_certified"] = res.hamburger_certified
            rows.append(row)
    return rows


def sweep_fib(count: int, seed: int = 0, violating: int = 10, max_n: int = 4, horizon: int = 12) -> dict:
    held = sweep_hamburger_failure(fib_charges(count, seed, True), max_n, horizon)
    for row in held:
        row["corrected_hypothesis"] = negative_square_atom_obstruction(row["charge"])
    failed = sweep_hamburger_failure(fib_charges(violating, seed + 1, False), max_n, horizon)
    return {"hypothesis_holds": held, "hypothesis_fails": failed}


def planted_jumping_measure(rng: random.Random, k: int) -> AtomicCharge:
    """``rho_0 d0 + rho_1 d(l) + rho_2 d(-l)`` with ``rho_2 = 0`` for odd ``k``
    and ``rho_1 > rho_2`` so that every moment is positive."""
    lam = rng.choice([Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)])
    r0 = rng.randint(0, 6)
    r1 = rng.randint(2, 8)
    r2 = 0 if k % 2 else rng.randint(0, r1 - 1)
    total = r0 + r1 + r2
    return AtomicCharge(((0, Fraction(r0, total)), (lam, Fraction(r1, total)), (-lam, Fraction(r2, total))))


def sweep_parity(seed: int = 0, horizon: int = 20, ks=(1, 2, 3, 4), n0s=(1, 2, 3, 4)) -> list[dict]:
    from .flatness import PropagationError, parity_classification, propagate

    rng = random.Random(seed)
    rows = []
    with arithmetic_mode(True):
        for k in ks:
            for n0 in n0s:
                mu = planted_jumping_measure(rng, k)
                row = {"k": k, "n0": n0, "measure": mu, "expected": parity_classification(k)}
                try:
                    rep = propagate(moments_of(mu, horizon), k, n0, horizon)
                except PropagationError as exc:
                    row.update(ok=False, error=str(exc))
                else:
                    no_neg = all(x >= 0 for x in rep.recovered_measure.locations)
                    row.update(
                        ok=rep.parity_conclusion == row["expected"]
                        and rep.outer_equalities_verified_to == horizon - 1
                        and rep.inner_equalities_verified_from == 1
                        and (no_neg or k % 2 == 0),
                        report=rep,
                        parity_conclusion=rep.parity_conclusion,
                        recovered_measure=rep.recovered_measure,
                        no_negative_atom=no_neg,
                    )
                rows.append(row)
    return rows
