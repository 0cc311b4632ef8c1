"""
Some unit tests for normed spaces and the bracket.
"""
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
import pytest

from eulercert import operators, space
from eulercert.exception import ArgumentError, DimensionError
from eulercert.space import NormedSpace

NORMS = [1, 2, 'inf']

coordinates = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False)
vectors = arrays(np.float64, 3, elements=coordinates)


@pytest.mark.parametrize("p, x, expected", [(2, [3, 4], 5.0), ('inf', [1, -2], 2.0), (1, [1, -2], 3.0)])
def test_norm(p, x, expected):
    assert space.norm(NormedSpace(2, p), x) == expected


def test_norm_dimension_mismatch():
    with pytest.raises(DimensionError):
        NormedSpace(2).norm([1, 2, 3])
    with pytest.raises(DimensionError):
        NormedSpace(0)


@pytest.mark.parametrize("p", [3, "euclid", 0.5])
def test_invalid_norm_selector(p):
    with pytest.raises(ArgumentError):
        NormedSpace(2, p=p)


def test_space_equality():
    assert NormedSpace(2, 'inf') == NormedSpace(2, float('inf'))
    assert NormedSpace(2, 1) != NormedSpace(2, 2)
    assert NormedSpace(3, 'inf').label == 'inf'


@pytest.mark.parametrize("p, u, v, expected", [
    ('inf', [1, 0.5], [2, -3], 2.0),
    (1, [1, -1, 0], [1, 2, -3], 2.0),
    (2, [3, 4], [1, 0], 0.6),
])
def test_bracket_closed_forms(p, u, v, expected):
    s = NormedSpace(len(u), p)
    assert space.bracket(s, u, v) == pytest.approx(expected)


@pytest.mark.parametrize("p", NORMS)
def test_bracket_at_zero_is_norm(p):
    s = NormedSpace(3, p)
    v = [1.0, -2.0, 0.5]
    assert s.bracket(s.zero(), v) == pytest.approx(s.norm(v))


def test_bracket_max_norm_ties():
    s = NormedSpace(2, 'inf')
    # both coordinates active, the largest one-sided derivative wins
    assert s.bracket([1.0, -1.0], [0.5, -2.0]) == pytest.approx(2.0)


def test_bracket_vectorized():
    s = NormedSpace(2, 2)
    values = s.bracket([[3.0, 4.0], [0.0, 0.0]], [[1.0, 0.0], [3.0, 4.0]])
    np.testing.assert_allclose(values, [0.6, 5.0])


@pytest.mark.parametrize("p", NORMS)
@given(u=vectors, v=vectors)
def test_bracket_bounded_by_norm(p, u, v):
    s = NormedSpace(3, p)
    assert abs(s.bracket(u, v)) <= s.norm(v) * (1 + 1e-12) + 1e-12


@pytest.mark.parametrize("p", NORMS)
@given(u=vectors, v=vectors, w=vectors, alpha=st.floats(min_value=0, max_value=10))
def test_bracket_sublinear(p, u, v, w, alpha):
    s = NormedSpace(3, p)
    scale = 1e-9 * (1 + s.norm(v) + s.norm(w))
    assert s.bracket(u, v + w) <= s.bracket(u, v) + s.bracket(u, w) + scale
    assert s.bracket(u, alpha * v) == pytest.approx(alpha * s.bracket(u, v), rel=1e-9, abs=1e-9 * (1 + alpha))


@pytest.mark.parametrize("p", NORMS)
def test_bracket_matches_quotient(p, rng):
    s = NormedSpace(4, p)
    for u, v in zip(s.random_vectors(rng, 200), s.random_vectors(rng, 200)):
        if s.norm(u) < 0.1:
            continue
        assert s.bracket_quotient(u, v) == pytest.approx(s.bracket(u, v), abs=1e-5)


@pytest.mark.parametrize("p, matrix, expected", [
    (1, [[1.0, 2.0], [-3.0, 4.0]], 6.0),
    ('inf', [[1.0, 2.0], [-3.0, 4.0]], 7.0),
    (2, [[1.0, 0.0], [0.0, -2.0]], 1.0),
])
def test_log_norm(p, matrix, expected):
    assert NormedSpace(2, p).log_norm(matrix) == pytest.approx(expected)


def test_check_accretive_sample_identity(rng):
    s = NormedSpace(2)
    identity = operators.make_linear(1.0, s)
    pairs = [identity.graph_pair(u) for u in s.random_vectors(rng, 10)]
    report = space.check_accretive_sample(s, identity, pairs)
    assert report.passed
    assert report.min_value >= -1e-12
    assert report.pairs_checked == 45


def test_check_accretive_sample_sign_graph():
    s = NormedSpace(1)
    sign = operators.make_sign_graph(s)
    pairs = [operators.GraphPair(np.array([1.0]), np.array([1.0])),
             operators.GraphPair(np.array([-1.0]), np.array([-1.0]))]
    report = space.check_accretive_sample(s, sign, pairs)
    assert report.min_value == pytest.approx(2.0)
    assert report.passed


def test_check_accretive_sample_minus_identity(rng, caplog):
    s = NormedSpace(1)
    minus = operators.make_linear(-1.0, s, omega=1.0)
    pairs = [minus.graph_pair(u) for u in s.random_vectors(rng, 6)]
    assert space.check_accretive_sample(s, minus, pairs).min_value >= -1e-12

    # the same graph with declared type 0 is not accretive
    minus.omega = 0.0
    report = space.check_accretive_sample(s, minus, pairs)
    assert not report.passed
    assert report.violations == 15
    assert 'contradict accretivity' in caplog.text


def test_random_unit_ball(rng):
    s = NormedSpace(3, 1)
    assert np.all(s.norm(s.random_unit_ball(rng, 100)) <= 1 + 1e-12)
