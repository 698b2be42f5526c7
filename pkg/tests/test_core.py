from fractions import Fraction as F

import pytest

from wshift import (
    NotMomentSequence,
    RecursionSpec,
    WeightSequence,
    arithmetic_mode,
    moment_positivity_horizon,
    moments_to_weights,
    weights_to_moments,
)


def test_weights_to_moments_examples():
    assert list(weights_to_moments(WeightSequence.from_weights([1] * 4), 4)) == [1] * 5
    w = WeightSequence((F(1, 4), 3, F(1, 3), 3))
    assert list(weights_to_moments(w, 4)) == [1, F(1, 4), F(3, 4), F(1, 4), F(3, 4)]
    assert list(weights_to_moments(WeightSequence.from_weights([2]), 1)) == [1, 4]


def test_moments_to_weights_examples():
    assert moments_to_weights([1, 1, 1, 1]).weights_sq == (1, 1, 1)
    w = moments_to_weights([1, F(1, 4), F(3, 4), F(1, 4), F(3, 4)])
    assert w.weights_sq == (F(1, 4), 3, F(1, 3), 3)
    with pytest.raises(NotMomentSequence):
        moments_to_weights([1, 0, 1])


def test_moment_positivity_horizon_examples():
    assert moment_positivity_horizon(RecursionSpec((0, 1), (1, F(1, 4))), 10)
    assert not moment_positivity_horizon(RecursionSpec((-1,), (1,)), 2)
    assert moment_positivity_horizon(RecursionSpec((2,), (1,)), 5)


def test_recursive_tail_extends_weights():
    w = WeightSequence.from_recursion(RecursionSpec((0, 1, 0), (1, F(1, 4), F(3, 4))))
    assert w.weights_sq_upto(6) == (F(1, 4), 3, F(1, 3), 3, F(1, 3), 3)


def test_nonpositive_weight_rejected():
    with pytest.raises(NotMomentSequence):
        WeightSequence((1, 0))


def test_insufficient_weights():
    from wshift import InsufficientData

    with pytest.raises(InsufficientData):
        weights_to_moments(WeightSequence((1, 2)), 5)


def test_approx_mode_agrees():
    w = WeightSequence((F(1, 4), 3, F(1, 3), 3))
    exact = weights_to_moments(w, 4)
    with arithmetic_mode(False, 1e-12):
        approx = weights_to_moments(WeightSequence((0.25, 3.0, 1 / 3, 3.0)), 4)
    assert all(abs(float(a) - float(b)) < 1e-12 for a, b in zip(exact, approx))
