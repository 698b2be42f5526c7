from fractions import Fraction as F

import pytest
import sympy

from wshift import (
    AtomicCharge,
    SearchSpaceTooLarge,
    abs_support,
    conv_square_root,
    delta,
    is_nonneg,
    is_supported_nonneg,
    moments_of,
    mult_convolve,
    t_weight,
)
from wshift.measures import charges_equal


def test_moments_of_examples(mu3):
    assert list(moments_of(mu3, 4)) == [1, F(1, 4), F(3, 4), F(1, 4), F(3, 4)]
    assert list(moments_of(delta(1), 3)) == [1] * 4
    sym = AtomicCharge(((-2, F(1, 2)), (2, F(1, 2))))
    assert list(moments_of(sym, 3)) == [1, 0, 4, 0]


def test_mult_convolve_examples():
    assert charges_equal(mult_convolve(delta(2), delta(3)), delta(6))
    pm = AtomicCharge(((1, F(1, 2)), (-1, F(1, 2))))
    assert charges_equal(mult_convolve(pm, pm), pm)


def test_convolution_against_closed_form():
    a, b, c, p, r, q = F(1, 4), F(1, 4), F(1, 2), F(1), F(1, 2), F(2)
    mu = AtomicCharge(((-p, a), (r, b), (q, c)))
    expected = AtomicCharge(
        (
            (p * p, -p * a * a),
            (r * r, r * b * b),
            (q * q, q * c * c),
            (-p * r, a * b * (r - p)),
            (-p * q, a * c * (q - p)),
            (r * q, b * c * (q + r)),
        )
    )
    assert charges_equal(mult_convolve(mu, t_weight(mu)), expected)


def test_t_weight_examples(mu3):
    assert t_weight(delta(0)).atoms == ()
    assert charges_equal(t_weight(mu3), AtomicCharge(((-1, F(-1, 4)), (1, F(1, 2)))))
    assert charges_equal(t_weight(delta(3)), delta(3, 3))


def test_abs_support_examples(mu3):
    assert abs_support(mu3).locations == (0, 1)
    assert abs_support(AtomicCharge(((-2, 1), (3, 1)))).locations == (2, 3)
    assert abs_support(AtomicCharge(((-5, 1), (5, 1)))).locations == (5,)


def test_sign_predicates():
    assert is_nonneg(delta(1)) and is_supported_nonneg(delta(1))
    assert not is_nonneg(delta(1, -1)) and is_supported_nonneg(delta(1, -1))
    assert is_nonneg(delta(-1)) and not is_supported_nonneg(delta(-1))


def test_conv_square_root_planted():
    nu0 = AtomicCharge(((1, F(1, 2)), (2, F(1, 2))))
    nu = conv_square_root(mult_convolve(nu0, nu0), [1, 2])
    assert charges_equal(nu, nu0)


def test_conv_square_root_special_triple(mu3):
    rho = mult_convolve(mu3, t_weight(mu3))
    nu = conv_square_root(rho, abs_support(mu3))
    assert nu is not None and is_nonneg(nu) and is_supported_nonneg(nu)
    assert charges_equal(mult_convolve(nu, nu), rho)
    s3 = sympy.sqrt(3)
    assert sympy.simplify(nu.density_at(0) - (F(1, 2) - s3 / 4)) == 0
    assert sympy.simplify(nu.density_at(1) - s3 / 4) == 0


def test_conv_square_root_generic_has_no_solution(mu3_r):
    rho = mult_convolve(mu3_r, t_weight(mu3_r))
    assert conv_square_root(rho, abs_support(mu3_r), nonneg_support=True) is None


def test_conv_square_root_bound():
    rho = delta(1)
    with pytest.raises(SearchSpaceTooLarge):
        conv_square_root(rho, range(1, 10))
