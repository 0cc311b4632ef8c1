"""
Some unit tests for partitions and functions on them.
"""
from hypothesis import given, strategies as st
import numpy as np
import pytest

from eulercert import grid
from eulercert.exception import HorizonMismatchError, IndexRangeError, PartitionError
from eulercert.space import NormedSpace

from . import util as tests_util

HALVES = grid.Partition([0.0, 0.5, 1.0])


@pytest.mark.parametrize("s, expected", [(0.7, 0.5), (1.0, 1.0), (-0.3, -0.3), (0.0, 0.0), (0.5, 0.5)])
def test_floor_at(s, expected):
    assert grid.floor_at(HALVES, s) == expected


@pytest.mark.parametrize("s, expected", [(0.7, 1.0), (0.5, 1.0), (2.0, 2.0), (0.0, 0.5)])
def test_ceiling_at(s, expected):
    assert grid.ceiling_at(HALVES, s) == expected


def test_ceilings_vectorized():
    np.testing.assert_array_equal(HALVES.ceilings([0.0, 0.2, 0.5, 1.0, 1.5]), [0.5, 0.5, 1.0, 1.0, 1.5])


@given(st.floats(min_value=0.0, max_value=1.0, exclude_max=True))
def test_floor_ceiling_bracket_s(s):
    p = grid.Partition([0.0, 0.1, 0.35, 0.5, 0.9, 1.0])
    floor, ceiling = p.floor(s), p.ceiling(s)
    assert floor <= s < ceiling
    i = int(p.interval_indices(s))
    assert ceiling - floor == p.steps[i]


@pytest.mark.parametrize("p, q, expected", [
    ([0, 1], [0, 0.5, 1], [0, 0.5, 1]),
    ([0, 0.5, 1], [0, 0.5, 1], [0, 0.5, 1]),
    ([0, 1.0 / 3, 1], [0, 0.5, 1], [0, 1.0 / 3, 0.5, 1]),
])
def test_refine(p, q, expected):
    common = grid.refine(grid.Partition(p), grid.Partition(q))
    np.testing.assert_array_equal(common.times, expected)
    assert common.mesh <= min(grid.Partition(p).mesh, grid.Partition(q).mesh)


def test_refine_commutative_and_idempotent(rng):
    p = grid.random_partition(2.0, 7, rng)
    q = grid.random_partition(2.0, 5, rng)
    assert grid.refine(p, q) == grid.refine(q, p)
    assert grid.refine(p, p) is p
    r = grid.random_partition(2.0, 3, rng)
    assert grid.refine(grid.refine(p, q), r) == grid.refine(p, grid.refine(q, r))


def test_refine_horizon_mismatch():
    with pytest.raises(HorizonMismatchError):
        grid.refine(grid.uniform(1.0, 2), grid.uniform(2.0, 2))


@pytest.mark.parametrize("T, N, expected", [
    (1.0, 2, [0, 0.5, 1]),
    (2.0, 4, [0, 0.5, 1, 1.5, 2]),
    (1.0, 1, [0, 1]),
])
def test_uniform(T, N, expected):
    p = grid.uniform(T, N)
    np.testing.assert_array_equal(p.times, expected)
    assert p.size == N
    assert p.horizon == T


@pytest.mark.parametrize("times", [[0.0], [0.0, 0.5, 0.5, 1.0], [0.1, 1.0], [0.0, float('nan')], [[0.0, 1.0]]])
def test_invalid_partition(times):
    with pytest.raises(PartitionError):
        grid.Partition(times)


def test_uniform_invalid():
    with pytest.raises(PartitionError):
        grid.uniform(1.0, 0)
    with pytest.raises(PartitionError):
        grid.uniform(-1.0, 2)


def test_partition_immutable():
    with pytest.raises(ValueError):
        HALVES.times[1] = 0.2


def test_random_partition_steps(rng):
    p = grid.random_partition(3.0, 16, rng)
    assert p.size == 16
    assert p.horizon == 3.0
    assert p.steps.min() >= 3.0 / (4 * 16) - 1e-12
    assert abs(p.steps.sum() - 3.0) <= 1e-12 * 16


def test_check_index():
    assert HALVES.check_index(2) == 2
    with pytest.raises(IndexRangeError):
        HALVES.check_index(3)


def test_step_function_right_continuous():
    f = tests_util.step([0.0, 0.5, 1.0], [1.0, 2.0])
    assert f(0.0)[0] == 1.0
    assert f(0.4999)[0] == 1.0
    assert f(0.5)[0] == 2.0
    # evaluation at T returns the last value
    assert f(1.0)[0] == 2.0
    with pytest.raises(IndexRangeError):
        f(1.5)


def test_step_function_arithmetic():
    f = tests_util.step([0.0, 0.5, 1.0], [1.0, 2.0])
    g = tests_util.step([0.0, 0.25, 1.0], [3.0, 4.0])
    total = f + g
    np.testing.assert_array_equal(total.partition.times, [0.0, 0.25, 0.5, 1.0])
    np.testing.assert_array_equal(total.values.ravel(), [4.0, 5.0, 6.0])
    np.testing.assert_array_equal((f - g).values.ravel(), [-2.0, -3.0, -2.0])
    np.testing.assert_array_equal((2 * f).values.ravel(), [2.0, 4.0])


def test_step_function_ess_var():
    space = NormedSpace(1)
    f = tests_util.step([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, -1.0])
    assert f.ess_var(space) == 3.0
    assert f.first_value[0] == 0.0


def test_step_function_on_refinement():
    f = tests_util.step([0.0, 0.5, 1.0], [1.0, 2.0])
    refined = f.on(grid.uniform(1.0, 4))
    np.testing.assert_array_equal(refined.values.ravel(), [1.0, 1.0, 2.0, 2.0])
    with pytest.raises(PartitionError):
        f.on(grid.uniform(1.0, 3))


def test_extended_step():
    body = tests_util.step([0.0, 1.0], [2.0])
    extended = grid.ExtendedStep(5.0, body)
    assert extended(-0.5)[0] == 5.0
    assert extended(0.0)[0] == 2.0
    np.testing.assert_array_equal(extended(np.array([-1.0, 0.5])).ravel(), [5.0, 2.0])
    assert extended.ess_var(NormedSpace(1)) == 3.0


def test_piecewise_affine():
    u = grid.PiecewiseAffine(HALVES, [0.0, 1.0, 3.0])
    assert u(0.25)[0] == pytest.approx(0.5)
    assert u(0.75)[0] == pytest.approx(2.0)
    assert u(1.0)[0] == 3.0
    np.testing.assert_allclose(u.slopes(NormedSpace(1)), [2.0, 4.0])


def test_sup_distance_between_nodes():
    space = NormedSpace(1)
    u = grid.PiecewiseAffine(grid.uniform(1.0, 1), [0.0, 1.0])
    v = grid.PiecewiseAffine(HALVES, [0.0, 1.0, 1.0])
    assert u.sup_distance(v, space) == pytest.approx(0.5)
    assert u.sup_distance(u, space) == 0.0


def test_project_averages():
    f = tests_util.step([0.0, 1.0, 2.0], [1.0, 3.0])
    projected = grid.project(f, grid.uniform(2.0, 1))
    assert projected.values[0, 0] == pytest.approx(2.0)
    projected = grid.project(f, grid.Partition([0.0, 0.5, 2.0]))
    np.testing.assert_allclose(projected.values.ravel(), [1.0, (0.5 + 3.0) / 1.5])


def test_project_callable():
    f = grid.project_callable(lambda t: t ** 2, grid.uniform(1.0, 2))
    np.testing.assert_allclose(f.values.ravel(), [0.0, 0.25])


def test_l1_profile():
    space = NormedSpace(1)
    f = tests_util.step([0.0, 1.0, 2.0], [1.0, 3.0])
    zero = grid.StepFunction.constant(grid.uniform(2.0, 1), 0.0)
    np.testing.assert_allclose(grid.l1_profile(f, zero, space, [0.0, 0.5, 1.0, 2.0]), [0.0, 0.5, 1.0, 4.0])
    assert grid.l1_distance(f, zero, space) == pytest.approx(4.0)
    assert grid.l1_distance(f, f, space) == 0.0


def test_to_rows():
    assert HALVES.to_rows() == [(0, 0.0, 0.5), (1, 0.5, 0.5), (2, 1.0, '')]
    f = tests_util.step([0.0, 0.5, 1.0], [1.0, 2.0])
    assert f.to_rows() == [(0.0, 0.5, 1.0), (0.5, 1.0, 2.0)]
    u = grid.PiecewiseAffine(HALVES, [0.0, 1.0, 3.0])
    assert u.to_rows()[1] == (0.5, 1.0)
