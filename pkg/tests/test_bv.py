"""
Some unit tests for the bounded variation toolkit.
"""
import numpy as np
import pytest

from eulercert import bv, grid
from eulercert.bv import BVStep, SampledC1
from eulercert.exception import BVError
from eulercert.space import NormedSpace


def indicator():
    """1 on [0.5, 1], 0 on [0, 0.5)"""
    return BVStep.from_values([0.0, 0.5, 1.0], [0.0, 1.0])


def thirds():
    return BVStep.from_values([0.0, 1.0 / 3, 2.0 / 3, 1.0], [0.0, 1.0, -1.0])


def constant(c, dimension=1):
    return BVStep(grid.StepFunction.constant(grid.uniform(1.0, 1), [c] * dimension))


def random_step(generator, dimension=1, T=1.0):
    pieces = int(generator.integers(1, 12))
    values = generator.uniform(-2.0, 2.0, (pieces, dimension))
    return BVStep(grid.StepFunction(grid.random_partition(T, pieces, generator), values),
                  end_value=generator.uniform(-2.0, 2.0, dimension))


@pytest.mark.parametrize("f, expected", [(indicator(), 1.0), (thirds(), 3.0), (constant(2.0), 0.0)])
def test_pointwise_var(f, expected):
    assert bv.pointwise_var(f) == pytest.approx(expected)
    assert bv.ess_var(f) == pytest.approx(expected)


def test_endpoint_value_counts_only_pointwise():
    f = BVStep.from_values([0.0, 0.5, 1.0], [0.0, 1.0], end_value=3.0)
    assert bv.pointwise_var(f) == pytest.approx(3.0)
    assert bv.ess_var(f) == pytest.approx(1.0)
    np.testing.assert_array_equal(f(1.0), [3.0])


def test_modified_point_keeps_ess_var():
    f = indicator().with_point(0.25, 5.0)
    np.testing.assert_array_equal(f(0.25), [5.0])
    assert bv.ess_var(f) == pytest.approx(1.0)
    assert bv.pointwise_var(f) == pytest.approx(11.0)
    with pytest.raises(BVError):
        indicator().with_point(1.5, 0.0)


def test_ess_var_below_pointwise_var(rng):
    for _ in range(50):
        f = random_step(rng, dimension=2)
        if rng.random() < 0.5:
            f = f.with_point(float(rng.uniform(f.a, f.b)), rng.uniform(-5.0, 5.0, 2))
        assert bv.ess_var(f) <= bv.pointwise_var(f) + 1e-12


@pytest.mark.parametrize("t, expected", [(0.5, 1.0), (0.0, 0.0), (0.75, 1.0), (0.2, 0.0)])
def test_right_limit(t, expected):
    assert bv.right_limit(indicator(), t)[0] == expected


def test_left_limit():
    assert bv.left_limit(indicator(), 0.5)[0] == 0.0
    assert bv.left_limit(indicator(), 1.0)[0] == 1.0


@pytest.mark.parametrize("t", [1.0, -0.1])
def test_right_limit_out_of_range(t):
    with pytest.raises(BVError):
        bv.right_limit(indicator(), t)


def test_left_limit_out_of_range():
    with pytest.raises(BVError):
        bv.left_limit(indicator(), 0.0)


def test_evaluation():
    f = indicator()
    assert f(0.0)[0] == 0.0
    assert f(0.5)[0] == 1.0
    assert f(1.0)[0] == 1.0
    with pytest.raises(BVError):
        f(1.01)
    shifted = BVStep.from_values([1.0, 1.5, 2.0], [0.0, 1.0])
    assert (shifted.a, shifted.b) == (1.0, 2.0)
    np.testing.assert_array_equal(shifted.breakpoints, [1.0, 1.5, 2.0])
    assert shifted(1.7)[0] == 1.0


def test_states():
    states = indicator().states()
    assert [state[0] for state in states] == [0.0, 0.5, 1.0]
    t, left, value, right = states[1]
    assert (left[0], value[0], right[0]) == (0.0, 1.0, 1.0)


def test_norms():
    assert bv.l1_norm(indicator()) == pytest.approx(0.5)
    assert bv.bv_norm(indicator()) == pytest.approx(1.5)
    assert bv.bv_norm(constant(-3.0)) == pytest.approx(3.0)


def test_shift_estimate_equality_case():
    lhs, rhs = bv.shift_estimate_check(indicator(), 0.25)
    assert lhs == pytest.approx(0.25)
    assert rhs == pytest.approx(0.25)


def test_shift_estimate_constant():
    assert bv.shift_estimate_check(constant(1.0), 0.5) == (0.0, 0.0)


@pytest.mark.parametrize("h", [0.0, 1.0, -0.5, 2.0])
def test_shift_estimate_range(h):
    with pytest.raises(BVError):
        bv.shift_estimate_check(indicator(), h)


def test_shift_estimate_random(rng):
    for _ in range(200):
        T = float(rng.uniform(0.5, 3.0))
        f = random_step(rng, dimension=int(rng.integers(1, 4)), T=T)
        lhs, rhs = bv.shift_estimate_check(f, float(rng.uniform(0.0, T)) or T / 2)
        assert lhs <= rhs + 1e-12


def test_norm_equivalence_examples():
    result = bv.norm_equivalence_check(indicator())
    assert result.lower == pytest.approx(0.75)
    assert result.middle == pytest.approx(1.0)
    assert result.upper == pytest.approx(3.0)
    result = bv.norm_equivalence_check(constant(2.0))
    assert tuple(result) == pytest.approx((1.0, 2.0, 4.0))
    assert tuple(bv.norm_equivalence_check(constant(0.0))) == (0.0, 0.0, 0.0)


def test_norm_equivalence_short_interval():
    f = BVStep.from_values([0.0, 0.1, 0.2], [1.0, -1.0])
    result = bv.norm_equivalence_check(f)
    assert result.upper == pytest.approx(5.0 * bv.bv_norm(f))


def test_norm_equivalence_random(rng):
    for _ in range(50):
        bv.norm_equivalence_check(random_step(rng, dimension=2, T=float(rng.uniform(0.1, 4.0))))


def test_triangle_property(rng):
    for _ in range(50):
        f = random_step(rng)
        g = BVStep(grid.StepFunction(grid.random_partition(1.0, 5, rng), rng.uniform(-1.0, 1.0, 5)))
        assert bv.pointwise_var(f + g) <= bv.pointwise_var(f) + bv.pointwise_var(g) + 1e-12


def test_add_on_different_intervals():
    with pytest.raises(BVError):
        indicator() + BVStep.from_values([0.0, 2.0], [1.0])


def test_jordan_absolute_value():
    f = SampledC1.from_function(lambda t: np.abs(t - 0.5), lambda t: np.sign(t - 0.5), 0.0, 1.0, 101)
    result = bv.jordan_decompose(f)
    np.testing.assert_allclose(result.minus, f.times, atol=1e-12)
    np.testing.assert_allclose(result.plus, np.abs(f.times - 0.5) + f.times, atol=1e-12)


def test_jordan_monotone_step():
    f = BVStep.from_values([0.0, 1.0 / 3, 2.0 / 3, 1.0], [0.0, 1.0, 3.0])
    result = bv.jordan_decompose(f)
    np.testing.assert_allclose(result.minus, result.values)
    np.testing.assert_allclose(result.plus, 2 * result.values)
    assert np.all(np.diff(result.times) >= 0)


def test_jordan_constant():
    result = bv.jordan_decompose(constant(2.0))
    assert not result.minus.any()
    np.testing.assert_array_equal(result.plus, result.values)


def test_jordan_random(rng):
    for _ in range(50):
        result = bv.jordan_decompose(random_step(rng))
        assert np.all(np.diff(result.minus) >= 0)
        assert np.max(np.abs(result.plus - result.minus - result.values)) <= 1e-12 * 4


def test_jordan_needs_real_function():
    with pytest.raises(BVError):
        bv.jordan_decompose(constant(1.0, dimension=2))


@pytest.mark.parametrize("func, derivative, expected", [
    (lambda t: t, np.ones_like, 1.0),
    (lambda t: np.sin(2 * np.pi * t), lambda t: 2 * np.pi * np.cos(2 * np.pi * t), 4.0),
    (lambda t: np.full_like(t, 3.0), np.zeros_like, 0.0),
])
def test_c1_var(func, derivative, expected):
    f = SampledC1.from_function(func, derivative, 0.0, 1.0, 10001)
    variation, integral = bv.c1_var_check(f)
    assert variation == pytest.approx(expected, abs=1e-4)
    assert integral == pytest.approx(expected, abs=1e-4)


def test_c1_var_without_function():
    times = np.linspace(0.0, 2.0, 5)
    variation, integral = bv.c1_var_check(SampledC1(times, -times, -np.ones(5)))
    assert variation == pytest.approx(2.0)
    assert integral == pytest.approx(2.0)


def test_sampled_c1_validation():
    with pytest.raises(BVError):
        SampledC1([0.0], [0.0], [0.0])
    with pytest.raises(BVError):
        SampledC1([0.0, 1.0], [0.0, 1.0], [1.0])


def test_space_of_variations():
    f = BVStep.from_values([0.0, 0.5, 1.0], [[0.0, 0.0], [1.0, 1.0]], space=NormedSpace(2, 'inf'))
    assert bv.ess_var(f) == 1.0
    g = BVStep.from_values([0.0, 0.5, 1.0], [[0.0, 0.0], [1.0, 1.0]], space=NormedSpace(2, 1))
    assert bv.ess_var(g) == 2.0
