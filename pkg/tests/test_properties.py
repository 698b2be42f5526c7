"""Property tests over randomly drawn charges, sequences and matrices."""

from fractions import Fraction as F

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from wshift import (
    MomentSequence,
    RecursionSpec,
    WeightSequence,
    abs_support,
    aluthge_moment_squares,
    arithmetic_mode,
    characteristic_polynomial,
    classify,
    conv_square_root,
    detect_recursion,
    extend,
    extend_backward,
    extract_recursion,
    hankel,
    is_psd,
    moments_of,
    moments_to_weights,
    mult_convolve,
    property_H,
    property_H_tilde,
    recover_measure,
    t_weight,
    weights_to_moments,
)
from wshift.measures import charges_equal

from strategies import charges, positive, probability_measures, small


@given(charges(), charges())
def test_convolution_multiplies_moments(mu, nu):
    a, b, c = moments_of(mu, 20), moments_of(nu, 20), moments_of(mult_convolve(mu, nu), 20)
    assert all(c[k] == a[k] * b[k] for k in range(21))


@given(charges(max_atoms=3), charges(max_atoms=3), charges(max_atoms=3))
def test_convolution_commutative_associative(a, b, c):
    assert charges_equal(mult_convolve(a, b), mult_convolve(b, a))
    assert charges_equal(mult_convolve(mult_convolve(a, b), c), mult_convolve(a, mult_convolve(b, c)))


@given(charges())
def test_t_weight_shifts_moments(mu):
    assert list(moments_of(t_weight(mu), 10)) == list(moments_of(mu, 11)[1:])


@given(st.lists(positive, min_size=1, max_size=10))
def test_weights_moments_round_trip(ws):
    g = weights_to_moments(WeightSequence(tuple(ws)), len(ws))
    assert moments_to_weights(g).weights_sq == tuple(ws)
    for n in range(len(ws) + 1):
        assert list(weights_to_moments(moments_to_weights(g), n)) == list(g[: n + 1])


@given(charges(max_atoms=6, min_atoms=1))
def test_recover_measure_round_trip(mu):
    r = len(mu)
    assume(r > 0)
    got = recover_measure(moments_of(mu, 2 * r + 1))
    assert charges_equal(got, mu)


@given(charges(max_atoms=5))
def test_minimal_polynomial_degree_is_atom_count(mu):
    assume(len(mu) > 0)
    g = moments_of(mu, 2 * len(mu) + 3)
    spec = detect_recursion(g)
    assert spec.order == len(mu)
    P = characteristic_polynomial(spec).coeffs
    d = len(P) - 1
    for s in range(len(g) - d):
        assert sum(P[i] * g[s + d - i] for i in range(d + 1)) == 0


@given(st.lists(small.filter(lambda x: x != 0), min_size=1, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_extend_then_backward(coeffs, init):
    spec = RecursionSpec(tuple(coeffs), tuple(init[: len(coeffs)]))
    forward = extend(spec, 6)
    back_spec = RecursionSpec(spec.coeffs, tuple(forward[-spec.order :]))
    assert list(extend_backward(back_spec, 6)) == list(forward)


@given(probability_measures(max_atoms=5), st.integers(1, 4))
def test_nonneg_measure_is_hamburger(mu, n):
    g = moments_of(mu, 2 * n + 4)
    assert property_H(g, n, 2 * n + 4)


@given(probability_measures(max_atoms=5, nonneg_support=True), st.integers(1, 4))
def test_nonneg_support_is_subnormal(mu, n):
    g = moments_of(mu, 2 * n + 4)
    assert property_H(g, n, 2 * n + 4) and property_H_tilde(g, n, 2 * n + 4)


@given(charges(max_atoms=5), st.integers(1, 3), st.integers(0, 3))
def test_extract_recursion_regenerates(mu, n, k):
    g = moments_of(mu, k + 2 * n + 2)
    assume(is_psd(hankel(g, n, k)))
    spec = extract_recursion(g, n, k)
    if spec is not None:
        assert spec.terms(len(g) - k) == list(g[k:])


@given(probability_measures(max_atoms=4), st.sampled_from([F(2), F(1, 3), F(7)]))
def test_scaling_preserves_verdicts(mu, c):
    g = moments_of(mu, 10)
    a = classify(g, 4, 10)
    b = classify(MomentSequence(c * x for x in g), 4, 10)
    assert a.h_results == b.h_results and a.h_tilde_results == b.h_tilde_results


@given(st.integers(0, 10**6))
def test_exact_and_approx_psd_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    a = rng.integers(-6, 7, size=(n, n))
    m = [[F(int(a[i, j] + a[j, i]), 2) for j in range(n)] for i in range(n)]
    eig = np.linalg.eigvalsh(np.array(m, dtype=float))
    assume(np.min(np.abs(eig)) > 1e-6)
    exact = is_psd(m).verdict
    with arithmetic_mode(False, 1e-9):
        approx = is_psd([[float(x) for x in r] for r in m]).verdict
    assert exact == approx


@given(probability_measures(max_atoms=3))
def test_square_root_output_squares_back(mu):
    rho = mult_convolve(mu, t_weight(mu))
    assume(len(rho) > 0)
    nu = conv_square_root(rho, abs_support(mu))
    if nu is not None:
        assert charges_equal(mult_convolve(nu, nu), rho)
        assert set(abs(x) for x in nu.locations) <= set(abs_support(mu)) | {0}


@given(st.lists(positive, min_size=3, max_size=8))
def test_aluthge_identity(ws):
    w = WeightSequence(tuple(ws))
    g = w.moments(len(ws))
    for n, s in enumerate(aluthge_moment_squares(w, len(ws) - 1)):
        assert s * ws[0] == g[n] * g[n + 1]


@given(st.lists(positive, min_size=1, max_size=6))
def test_approx_moments_close_to_exact(ws):
    exact = weights_to_moments(WeightSequence(tuple(ws)), len(ws))
    with arithmetic_mode(False, 1e-9):
        approx = weights_to_moments(WeightSequence(tuple(float(x) for x in ws)), len(ws))
    assert all(abs(float(e) - a) <= 1e-9 * max(1.0, abs(float(e))) for e, a in zip(exact, approx))
