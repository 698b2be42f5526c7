"""Acceptance criteria, one test each, at their stated sizes and tolerances.

Each test records a ``PASS``/``FAIL`` line; the lines are printed directly and
collected in the terminal summary.
"""

import random
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from wshift import (
    AtomicCharge,
    MomentSequence,
    abs_support,
    arithmetic_mode,
    classify,
    conv_square_root,
    is_nonneg,
    is_psd,
    is_supported_nonneg,
    moments_of,
    mult_convolve,
    recover_measure,
    t_weight,
    thm21_predicate,
)
from wshift.hankel import PSD
from wshift.measures import charges_equal
from wshift.verify import (
    four_atom_charges,
    random_charge,
    sweep_fib,
    sweep_hamburger_failure,
    sweep_parity,
    sweep_thm21,
    thm21_tuples,
    tuple_measure,
)

SEED = 0


def verdict(number: int, name: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _signed_charge(rng: random.Random, atoms: int) -> AtomicCharge:
    locs: set = set()
    while len(locs) < atoms:
        locs.add(F(rng.randint(-12, 12), rng.randint(1, 4)))
    dens = []
    for _ in locs:
        d = F(rng.randint(-9, 9), rng.randint(1, 5))
        dens.append(d if d else F(1))
    return AtomicCharge(tuple(zip(sorted(locs), dens)))


def test_c1_three_atom_sweep():
    tuples = thm21_tuples(300, SEED)
    special = sum(1 for t in tuples if t[4] == 0 and t[3] == t[5])
    rows = sweep_thm21(tuples, max_n=4, horizon=12)
    bad = [r for r in rows if not r["agree"]]
    uncertified = sum(not r["certified"] for r in rows)
    ok = len(rows) >= 300 and special >= 30 and not bad
    verdict(1, "three-atom transform subnormal iff r = 0 and p = q", ok,
            f"{len(rows)} tuples ({special} special), {len(bad)} disagreements, {uncertified} uncertified")
    assert ok


def test_c2_four_atoms():
    rows = sweep_hamburger_failure(four_atom_charges(100, SEED), max_n=4, horizon=12)
    failing = sum(r["fails"] and r["n"] <= 4 for r in rows)
    ok = len(rows) >= 100 and failing == len(rows)
    verdict(2, "four-atom measures give a non-Hamburger transform", ok, f"{failing}/{len(rows)} fail H(n), n <= 4")
    assert ok


@pytest.fixture(scope="module")
def fib_sweep():
    return sweep_fib(100, SEED, violating=10, max_n=4, horizon=12)


@pytest.mark.xfail(strict=True, reason="the literal negative-atom hypothesis admits subnormal transforms; see README")
def test_c3_negative_atom_obstruction(fib_sweep):
    held = fib_sweep["hypothesis_holds"]
    violated = fib_sweep["hypothesis_fails"]
    failing = sum(r["fails"] and r["n"] <= 4 for r in held)
    escaped = [str(r["charge"]) for r in held if not r["fails"]]
    ok = len(held) >= 100 and failing == len(held)
    detail = (f"{failing}/{len(held)} fail H(n), n <= 4; not failing: {escaped}; "
              f"{len(violated)} hypothesis-violating charges reported, "
              f"{sum(r['fails'] for r in violated)} of them fail H")
    verdict(3, "negative-atom hypothesis forces non-Hamburger transform", ok, detail)
    assert ok


def test_c3_companion_corrected_hypothesis(fib_sweep):
    """Same sweep, restricted to charges meeting the corrected hypothesis."""
    held = [r for r in fib_sweep["hypothesis_holds"] if r["corrected_hypothesis"]]
    failing = sum(r["fails"] and r["n"] <= 4 and r["certified"] for r in held)
    ok = bool(held) and failing == len(held)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion 3 (corrected hypothesis): {failing}/{len(held)} fail H(n), certified")
    assert ok


def test_c4_convolution_multiplicativity():
    rng = random.Random(SEED)
    bad = 0
    for _ in range(200):
        mu = _signed_charge(rng, rng.randint(1, 5))
        nu = _signed_charge(rng, rng.randint(1, 5))
        a, b, c = moments_of(mu, 20), moments_of(nu, 20), moments_of(mult_convolve(mu, nu), 20)
        bad += any(c[k] != a[k] * b[k] for k in range(21))
    verdict(4, "moments of mu*nu are products of moments", bad == 0, f"200 pairs, k <= 20, {bad} mismatches")
    assert bad == 0


def test_c5_measure_round_trip():
    rng = random.Random(SEED + 5)
    bad = 0
    for _ in range(100):
        mu = _signed_charge(rng, rng.randint(1, 6))
        got = recover_measure(moments_of(mu, 2 * len(mu) + 2))
        bad += got is None or not charges_equal(got, mu)
    verdict(5, "recover_measure(moments_of(mu)) = mu", bad == 0, f"100 charges, <= 6 atoms, {bad} mismatches")
    assert bad == 0


def test_c6_propagation():
    rows = sweep_parity(SEED, horizon=20)
    bad = [(r["k"], r["n0"], r.get("error")) for r in rows if not r["ok"]]
    odd_neg = [(r["k"], r["n0"]) for r in rows if r["k"] % 2 and not r.get("no_negative_atom", False)]
    ok = len(rows) == 16 and not bad and not odd_neg
    verdict(6, "propagation through horizon 20 with parity conclusion", ok,
            f"{len(rows) - len(bad)}/{len(rows)} (k, n0) instances verified; failures {bad}")
    assert ok


def test_c7_square_root_oracle():
    special = [tuple_measure(t) for t in thm21_tuples(50, SEED + 7, special=50)]
    rng = random.Random(SEED + 7)
    generic = []
    for t in thm21_tuples(200, SEED + 8, special=0):
        if not thm21_predicate(tuple_measure(t)):
            generic.append(tuple_measure(t))
    rng.shuffle(generic)
    generic = generic[:50]
    good = 0
    for mu in special:
        rho = mult_convolve(mu, t_weight(mu))
        nu = conv_square_root(rho, abs_support(mu))
        good += (nu is not None and is_nonneg(nu) and is_supported_nonneg(nu)
                 and charges_equal(mult_convolve(nu, nu), rho))
    none = sum(
        conv_square_root(mult_convolve(mu, t_weight(mu)), abs_support(mu), nonneg_support=True) is None
        for mu in generic
    )
    ok = len(special) >= 50 and len(generic) >= 50 and good == len(special) and none == len(generic)
    verdict(7, "square-root oracle", ok,
            f"{good}/{len(special)} special with R+-supported root, {none}/{len(generic)} others without")
    assert ok


def test_c8_exact_approx_agreement():
    rng = np.random.default_rng(SEED + 8)
    done = agree = psd = 0
    while done < 200:
        n = int(rng.integers(2, 6))
        if rng.random() < 0.5:
            atoms = tuple((F(int(rng.integers(-12, 13)), 4), F(int(rng.integers(1, 6)), 6)) for _ in range(n + 2))
            g = moments_of(AtomicCharge(atoms), 2 * n)
        else:
            g = [F(int(rng.integers(-20, 21)), int(rng.integers(1, 7))) for _ in range(2 * n + 1)]
        m = [[g[i + j] for j in range(n + 1)] for i in range(n + 1)]
        lam = np.linalg.eigvalsh(np.array(m, dtype=float))[0]
        if abs(lam) <= 1e-6:
            continue
        done += 1
        exact = is_psd(m).verdict
        with arithmetic_mode(False, 1e-9):
            approx = is_psd([[float(x) for x in r] for r in m]).verdict
        agree += exact == approx
        psd += exact == PSD
    ok = agree == 200
    verdict(8, "exact and approximate PSD verdicts agree", ok, f"{agree}/200 agree ({psd} PSD)")
    assert ok


def test_c9_scaling_invariance():
    rng = random.Random(SEED + 9)
    mismatches = 0
    for _ in range(50):
        g = moments_of(_signed_charge(rng, rng.randint(1, 5)), 10)
        base = classify(g, 4, 10)
        for c in (F(2), F(1, 3), F(7)):
            rep = classify(MomentSequence(c * x for x in g), 4, 10)
            same = (
                rep.h_results == base.h_results
                and rep.h_tilde_results == base.h_tilde_results
                and rep.subnormal_truncated == base.subnormal_truncated
                and _where(rep.first_failure) == _where(base.first_failure)
            )
            mismatches += not same
    ok = mismatches == 0
    verdict(9, "H(n)/H~(n) verdicts invariant under scaling", ok, f"50 sequences x 3 factors, {mismatches} mismatches")
    assert ok


def _where(f):
    return None if f is None else (f.property, f.n, f.k)
