from fractions import Fraction as F

import pytest

from wshift import (
    AtomicCharge,
    PreconditionError,
    ShiftError,
    WeightSequence,
    aluthge_classify,
    aluthge_moment_squares,
    aluthge_weights,
    delta,
    fib_obstruction,
    four_atom_obstruction,
    moments_of,
    mult_convolve,
    negative_square_atom_obstruction,
    radical_psd,
    shift_of_measure,
    t_weight,
    thm21_predicate,
)
from wshift.core import Radical
from wshift.hankel import INDEFINITE, PSD
from wshift.measures import charges_equal


def test_aluthge_weights_examples():
    w = WeightSequence((F(1, 4), 3, F(1, 3), 3, F(1, 3)))
    assert aluthge_weights(w) == [Radical(F(3, 4)), 1, 1, 1]
    assert aluthge_weights(WeightSequence((1,) * 5)) == [1] * 4
    assert aluthge_weights(WeightSequence((1, 4))) == [2]


def test_aluthge_moment_squares_examples(mu3):
    sq = aluthge_moment_squares(shift_of_measure(mu3, 12), 10)
    assert sq[0] == 1 and all(x == F(3, 4) for x in sq[1:])
    assert aluthge_moment_squares(WeightSequence((1,) * 8), 6) == [1] * 7
    assert aluthge_moment_squares(WeightSequence((1, 4)), 1)[1] == 4


def test_identity_with_alpha0(mu3_r):
    w = shift_of_measure(mu3_r, 12)
    g = w.moments(11)
    for n, s in enumerate(aluthge_moment_squares(w, 10)):
        assert s * w.weights_sq[0] == g[n] * g[n + 1]


def test_radical_psd_certifies_negative():
    # [[1, sqrt 2], [sqrt 2, 1]] has eigenvalue 1 - sqrt 2
    c = radical_psd([[1, 2], [2, 1]])
    assert c.verdict == INDEFINITE and c.exact
    assert radical_psd([[1, F(1, 4)], [F(1, 4), 1]]).verdict == PSD


def test_classify_special_triple(mu3):
    res = aluthge_classify(shift_of_measure(mu3, 14), 4, 12)
    assert res.classification.subnormal_truncated and res.subnormal_certified
    assert charges_equal(mult_convolve(res.measure, res.measure), res.product_measure)
    rho = mult_convolve(mu3, t_weight(mu3)).scaled(1 / moments_of(mu3, 1)[1])
    assert charges_equal(res.product_measure, rho)


def test_classify_generic_triple(mu3_r):
    res = aluthge_classify(shift_of_measure(mu3_r, 14), 4, 12)
    rep = res.classification
    assert not rep.subnormal_truncated
    f = rep.first_failure
    assert f.certificate.exact and f.n <= 2


def test_flat_fixed_point():
    res = aluthge_classify(WeightSequence((1,) * 16), 4, 12)
    assert res.weights_sq[:4] == [1, 1, 1, 1]
    assert res.classification.subnormal_truncated


def test_thm21_predicate_examples():
    assert thm21_predicate(AtomicCharge(((-1, F(1, 4)), (0, F(1, 4)), (1, F(1, 2)))))
    assert not thm21_predicate(AtomicCharge(((-1, F(1, 4)), (F(1, 2), F(1, 4)), (1, F(1, 2)))))
    assert not thm21_predicate(AtomicCharge(((-1, F(1, 4)), (0, F(1, 4)), (2, F(1, 2)))))


def test_fib_obstruction_examples():
    third = F(1, 3)
    assert fib_obstruction(AtomicCharge(((-3, third), (2, third), (5, third))))
    assert not fib_obstruction(AtomicCharge(((-2, F(1, 2)), (2, F(1, 4)), (-1, F(1, 4)))))
    with pytest.raises(PreconditionError):
        fib_obstruction(delta(1))


def test_literal_negative_atom_hypothesis_is_too_weak():
    """-1 is not a product of the other atoms, yet the transform is subnormal."""
    mu = AtomicCharge(((-1, F(1, 3)), (1, F(2, 3))))
    assert fib_obstruction(mu)
    assert not negative_square_atom_obstruction(mu)
    res = aluthge_classify(shift_of_measure(mu, 14), 4, 12)
    assert res.classification.subnormal_truncated and res.subnormal_certified


def test_negative_square_atom_obstruction_is_sound():
    mu = AtomicCharge(((-3, F(1, 3)), (2, F(1, 3)), (5, F(1, 3))))
    assert negative_square_atom_obstruction(mu)
    res = aluthge_classify(shift_of_measure(mu, 14), 4, 12)
    assert not res.classification.hamburger_truncated
    assert res.classification.failures["H"].certificate.exact


def test_four_atom_examples():
    pos = AtomicCharge(((F(1, 2), F(1, 4)), (1, F(1, 4)), (2, F(1, 4)), (3, F(1, 4))))
    assert four_atom_obstruction(pos)
    res = aluthge_classify(shift_of_measure(pos, 14), 4, 12)
    assert not res.classification.hamburger_truncated
    mixed = AtomicCharge(((-1, F(1, 8)), (F(1, 2), F(1, 4)), (1, F(1, 4)), (2, F(3, 8))))
    assert four_atom_obstruction(mixed)
    res = aluthge_classify(shift_of_measure(mixed, 14), 4, 12)
    assert res.classification.failures["H"].n <= 4
    with pytest.raises(ShiftError):
        four_atom_obstruction(AtomicCharge(((1, F(1, 3)), (2, F(1, 3)), (3, F(1, 3)))))
