"""
Some unit tests for accretive operators and their resolvents.
"""
import numpy as np
import pytest

from eulercert import operators
from eulercert.exception import (AccretivityError, ArgumentError, ConfigError, StepSizeError,
                                 UnsupportedOperatorError)
from eulercert.operators import ValueSet
from eulercert.space import NormedSpace


class ResolventOnly(operators.AccretiveOperator):
    """Identity resolvent without value sets"""
    kind = 'resolvent-only'

    def _resolve(self, lam, x):
        return x


def test_linear_resolvent():
    np.testing.assert_allclose(operators.make_linear(1.0).resolve(0.5, 1.0), [2.0 / 3])
    a = operators.make_linear([[2.0, 0.0], [0.0, 1.0]], NormedSpace(2, 'inf'))
    np.testing.assert_allclose(a.resolve(1.0, [3.0, 2.0]), [1.0, 1.0])
    np.testing.assert_allclose(operators.make_linear([1.0, 2.0]).resolve(0.5, [1.0, 1.0]), [2.0 / 3, 0.5])


@pytest.mark.parametrize("lam, x, expected", [
    (0.5, [2.0, -0.3, 0.5], [1.5, 0.0, 0.0]),
    (1.0, [-3.0, 1.0, 0.0], [-2.0, 0.0, 0.0]),
])
def test_sign_resolvent_soft_thresholding(lam, x, expected):
    sign = operators.make_sign_graph(NormedSpace(3, 1))
    np.testing.assert_allclose(sign.resolve(lam, x), expected)


def test_weighted_sign_resolvent():
    sign = operators.make_sign_graph(weight=2.0)
    np.testing.assert_allclose(sign.resolve(0.5, [1.5]), [0.5])


def test_step_size_condition():
    minus = operators.make_linear(-1.0, NormedSpace(1), omega=1.0)
    np.testing.assert_allclose(minus.resolve(0.5, [1.0]), [2.0])
    with pytest.raises(StepSizeError) as excinfo:
        minus.resolve(1.0, [1.0])
    assert excinfo.value.omega == 1.0
    with pytest.raises(StepSizeError):
        minus.resolve(0.0, [1.0])


def test_declared_omega_below_least_type():
    with pytest.raises(AccretivityError):
        operators.LinearOperator(-1.0, NormedSpace(1), omega=0.5)
    with pytest.raises(AccretivityError):
        operators.make_sign_graph(omega=-1.0)


@pytest.mark.parametrize("weight", [0.0, -1.0])
def test_sign_graph_weight(weight):
    with pytest.raises(ArgumentError) as excinfo:
        operators.make_sign_graph(weight=weight)
    assert isinstance(excinfo.value, ValueError)


def test_least_type_is_log_norm():
    a = operators.make_linear([[1.0, 2.0], [-3.0, 4.0]], NormedSpace(2, 'inf'))
    assert a.omega == pytest.approx(NormedSpace(2, 'inf').log_norm([[-1.0, -2.0], [3.0, -4.0]]))
    assert a.omega == pytest.approx(1.0)


def test_value_sets():
    assert ValueSet.box([1.0], [0.0]).is_empty
    assert ValueSet.box([1.0], [1.0]).kind == ValueSet.POINT
    box = ValueSet.box([-1.0, 1.0], [1.0, 1.0])
    assert box.contains([0.5, 1.0])
    assert not box.contains([0.5, 1.1])
    np.testing.assert_array_equal(box.nearest_to_zero(), [0.0, 1.0])
    np.testing.assert_array_equal(box.shifted([1.0, 1.0]).lower, [0.0, 2.0])


@pytest.mark.parametrize("value_set, space, expected", [
    (ValueSet.box([-1.0], [1.0]), NormedSpace(1), 0.0),
    (ValueSet.box([0.5, -3.0], [2.0, -1.0]), NormedSpace(2, 1), 1.5),
    (ValueSet.point([3.0, 4.0]), NormedSpace(2), 5.0),
    (ValueSet.empty(), NormedSpace(1), float("inf")),
])
def test_set_norm(value_set, space, expected):
    assert operators.set_norm(value_set, space) == expected


def test_graph_pairs():
    sign = operators.make_sign_graph()
    pair = sign.graph_pair([0.0])
    np.testing.assert_array_equal(pair.v, [0.0])
    pair = sign.graph_pair([0.0], rng=np.random.default_rng(3))
    assert -1.0 <= pair.v[0] <= 1.0
    np.testing.assert_array_equal(sign.graph_pair([-2.0]).v, [-1.0])
    assert sign.domain_contains([5.0])


def test_shifted_operator():
    a = operators.make_linear(1.0, NormedSpace(1))
    shifted = a.shifted([1.0])
    np.testing.assert_allclose(shifted.resolve(1.0, [3.0]), [1.0])
    np.testing.assert_array_equal(shifted.graph_pair([1.0]).v, [2.0])
    assert shifted.exact_generalized_norm([1.0]) == 2.0
    twice = shifted.shifted([1.0])
    np.testing.assert_array_equal(twice.shift, [2.0])
    assert twice.describe()['shift'] == [2.0]


@pytest.mark.parametrize("x, expected", [([0.5], 1.0), ([0.0], 0.0), ([-2.0], 1.0)])
def test_generalized_norm_sign(x, expected):
    estimate = operators.generalized_norm(operators.make_sign_graph(), x)
    assert estimate.value == expected
    assert estimate.exact == expected


def test_generalized_norm_sampled_linear():
    a = operators.make_linear(2.0, NormedSpace(1))
    estimate = operators.generalized_norm(a, [1.0], use_exact=False)
    assert estimate.exact is None
    assert estimate.value == pytest.approx(2.0, abs=1e-4)
    assert estimate.spread <= 1e-4
    assert np.all(np.diff(estimate.per_radius) >= 0)


def test_generalized_norm_sampled_sign_away_from_zero():
    estimate = operators.generalized_norm(operators.make_sign_graph(), [0.5], use_exact=False)
    assert estimate.sampled == 1.0
    assert estimate.spread == 0.0


def test_generalized_norm_unsupported():
    with pytest.raises(UnsupportedOperatorError):
        operators.generalized_norm(ResolventOnly(NormedSpace(1), 0.0), [1.0])
    with pytest.raises(UnsupportedOperatorError):
        ResolventOnly(NormedSpace(1), 0.0).graph_pair([1.0])


@pytest.mark.parametrize("kind", ['linear', 'sign'])
def test_resolvent_contraction(kind, rng):
    space = NormedSpace(3, 'inf')
    if kind == 'sign':
        operator = operators.make_sign_graph(space)
    else:
        operator = operators.make_linear([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.5, 0.0, -1.0]], space)
    assert operators.resolvent_contraction_defect(operator, rng, count=500) <= 1e-12


def test_resolvent_contraction_understated_type(rng):
    minus = operators.make_linear(-1.0, NormedSpace(1), omega=1.0)
    minus.omega = 0.5
    assert operators.resolvent_contraction_defect(minus, rng, count=200) > 0


@pytest.mark.parametrize("config, x, expected", [
    ({'kind': 'linear', 'scalar': 2.0}, [3.0], [1.0]),
    ({'kind': 'linear', 'diagonal': [2.0]}, [3.0], [1.0]),
    ({'kind': 'linear', 'matrix': [[2.0]], 'omega': 0.0}, [3.0], [1.0]),
    ({'kind': 'sign', 'weight': 2.0}, [3.0], [1.0]),
    ({'kind': 'sign', 'shift': [1.0]}, [3.0], [1.0]),
])
def test_from_config(config, x, expected):
    operator = operators.from_config(config, NormedSpace(1))
    np.testing.assert_allclose(operator.resolve(1.0, x), expected)


@pytest.mark.parametrize("config", [
    {'kind': 'cubic'},
    {'scalar': 1.0},
    {'kind': 'linear'},
    {'kind': 'sign', 'slope': 2.0},
])
def test_from_config_invalid(config):
    with pytest.raises(ConfigError):
        operators.from_config(config, NormedSpace(1))


def test_describe():
    description = operators.make_linear(2.0, NormedSpace(1, 'inf')).describe()
    assert description == {'kind': 'linear', 'omega': -2.0, 'dimension': 1, 'p': 'inf', 'matrix': [[2.0]]}
