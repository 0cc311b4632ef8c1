"""
Quasi-accretive operators defined through their resolvent.

An operator A of type ω only needs ``J_λ = (I + λA)^{-1}`` for the Euler scheme;
value sets ``Ax`` are optional and only used for graph pairs and set norms.
"""
import collections
import logging

import numpy as np
import scipy.linalg

from . import util
from .exception import (AccretivityError, ArgumentError, ConfigError, ResolventError, StepSizeError,
                        UnsupportedOperatorError)
from .space import NormedSpace, check_accretive_sample

logger = logging.getLogger(__name__)

GraphPair = collections.namedtuple('GraphPair', 'u v')

GeneralizedNormEstimate = collections.namedtuple(
    'GeneralizedNormEstimate', 'value spread exact sampled radii per_radius')

# default radii 2^-k, k = 1..20
DEFAULT_RADII = tuple(2.0 ** -k for k in range(1, 21))
SAMPLES_PER_BALL = 64
# number of finest radii used to measure the spread of a sampled estimate
SPREAD_WINDOW = 5


class ValueSet(object):
    """Explicit description of a set Ax: a point, a coordinate box or the empty set"""
    POINT, BOX, EMPTY = 'point', 'box', 'empty'

    def __init__(self, kind, lower=None, upper=None):
        self.kind = kind
        self.lower = None if lower is None else np.atleast_1d(np.asarray(lower, dtype=float))
        self.upper = None if upper is None else np.atleast_1d(np.asarray(upper, dtype=float))

    @classmethod
    def point(cls, x):
        return cls(cls.POINT, x, x)

    @classmethod
    def box(cls, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if np.any(lower > upper):
            return cls.empty()
        if np.array_equal(lower, upper):
            return cls.point(lower)
        return cls(cls.BOX, lower, upper)

    @classmethod
    def empty(cls):
        return cls(cls.EMPTY)

    @property
    def is_empty(self):
        return self.kind == self.EMPTY

    def __repr__(self):
        if self.is_empty:
            return 'ValueSet(empty)'
        if self.kind == self.POINT:
            return 'ValueSet(point=%s)' % self.lower.tolist()
        return 'ValueSet(lower=%s, upper=%s)' % (self.lower.tolist(), self.upper.tolist())

    def contains(self, v, tolerance=0.0):
        if self.is_empty:
            return False
        v = np.asarray(v, dtype=float)
        return bool(np.all(v >= self.lower - tolerance) and np.all(v <= self.upper + tolerance))

    def shifted(self, x):
        if self.is_empty:
            return self
        x = np.asarray(x, dtype=float)
        return ValueSet(self.kind, self.lower + x, self.upper + x)

    def nearest_to_zero(self):
        """Element of minimal norm, the same for every p-norm since the set is a box"""
        if self.is_empty:
            return None
        return np.clip(0.0, self.lower, self.upper)

    def sample(self, rng):
        if self.is_empty:
            return None
        return self.lower + rng.random(self.lower.size) * (self.upper - self.lower)


def set_norm(value_set, space):
    """Set norm ⦀B⦀ = inf of ‖x‖ over x in B, +inf for the empty set"""
    if value_set is None or value_set.is_empty:
        return float('inf')
    return float(space.norm(value_set.nearest_to_zero()))


class AccretiveOperator(object):
    """Operator of accretivity type ω given by its resolvent

    Subclasses implement ``_resolve`` and optionally ``value_set`` and ``exact_generalized_norm``.

    :param space: :class:`eulercert.space.NormedSpace`
    :param omega: declared accretivity type
    """
    kind = None

    def __init__(self, space, omega):
        self.space = space
        self.omega = float(omega)

    def __repr__(self):
        return '%s(space=%r, omega=%r)' % (self.__class__.__name__, self.space, self.omega)

    def check_step(self, lam):
        """Validate a resolvent step, λ > 0 and λω < 1"""
        if not lam > 0:
            raise StepSizeError(lam, self.omega)
        if lam * self.omega >= 1:
            raise StepSizeError(lam, self.omega)

    def resolve(self, lam, x):
        """Resolvent J_λ x = (I + λA)^{-1} x

        :raise StepSizeError: if λω >= 1
        :raise ResolventError: if the resolvent cannot be evaluated
        """
        self.check_step(lam)
        x = self.space.vec(x)
        u = self._resolve(float(lam), x)
        if not np.all(np.isfinite(u)):
            raise ResolventError("Non finite resolvent of %r at λ=%r" % (self, lam))
        return u

    def _resolve(self, lam, x):
        raise NotImplementedError()

    def value_set(self, x):
        """Explicit description of Ax, None when unavailable"""
        return None

    def domain_contains(self, x):
        value_set = self._require_value_set(x)
        return not value_set.is_empty

    def graph_pair(self, u, rng=None):
        """Graph pair (u, v) with v in Au

        v is the minimal norm element of Au, or a random element of it when rng is given.
        """
        u = self.space.vec(u)
        value_set = self._require_value_set(u)
        if value_set.is_empty:
            raise UnsupportedOperatorError("%r is not in the domain of %r" % (u.tolist(), self))
        v = value_set.sample(rng) if rng is not None else value_set.nearest_to_zero()
        return GraphPair(u, v)

    def shifted(self, x):
        """The operator A + x"""
        return ShiftedOperator(self, x)

    def exact_generalized_norm(self, x, shift=None):
        """Closed form of |x|_{A + shift} when known, else None"""
        return None

    def describe(self):
        return {'kind': self.kind, 'omega': self.omega, 'dimension': self.space.dimension, 'p': self.space.label}

    def _require_value_set(self, x):
        value_set = self.value_set(x)
        if value_set is None:
            raise UnsupportedOperatorError("%r does not expose value sets" % self)
        return value_set


class LinearOperator(AccretiveOperator):
    """Linear operator u -> a u

    Without declared ω the least admissible type, the logarithmic norm of -a, is used.

    :param matrix: square matrix, or scalar meaning a multiple of the identity
    :param space: :class:`eulercert.space.NormedSpace`
    :param omega: declared accretivity type
    :raise AccretivityError: if omega is below the least admissible type
    """
    kind = 'linear'

    def __init__(self, matrix, space, omega=None):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim == 0:
            matrix = float(matrix) * np.eye(space.dimension)
        elif matrix.ndim == 1:
            matrix = np.diag(matrix)
        self.matrix = matrix
        self.minimal_omega = space.log_norm(-matrix)
        if omega is None:
            omega = self.minimal_omega
        if omega < self.minimal_omega - 1e-12:
            raise AccretivityError("Declared omega %r below the least type %r of %s"
                                   % (omega, self.minimal_omega, matrix.tolist()))
        super(LinearOperator, self).__init__(space, omega)

    def _resolve(self, lam, x):
        try:
            return scipy.linalg.solve(np.eye(self.space.dimension) + lam * self.matrix, x)
        except (scipy.linalg.LinAlgError, ValueError) as ex:
            raise ResolventError("Cannot solve (I + %r a) u = x" % lam, original_exception=ex)

    def value_set(self, x):
        return ValueSet.point(self.matrix.dot(self.space.vec(x)))

    def exact_generalized_norm(self, x, shift=None):
        # continuous and single valued
        value = self.matrix.dot(self.space.vec(x))
        if shift is not None:
            value = value + shift
        return float(self.space.norm(value))

    def describe(self):
        description = super(LinearOperator, self).describe()
        description['matrix'] = self.matrix.tolist()
        return description


class SignGraph(AccretiveOperator):
    """Componentwise subdifferential of w‖·‖₁, the multivalued sign graph

    Its resolvent is the soft thresholding ``sign(x) max(|x| - λw, 0)``.
    Componentwise nondecreasing graphs are accretive (ω = 0) for every p-norm.
    """
    kind = 'sign'

    def __init__(self, space, weight=1.0, omega=0.0):
        if omega < 0:
            raise AccretivityError("The sign graph is not accretive of negative type %r" % omega)
        if not weight > 0:
            raise ArgumentError("Sign graph weight must be positive, got %r" % weight)
        super(SignGraph, self).__init__(space, omega)
        self.weight = float(weight)

    def _resolve(self, lam, x):
        return np.sign(x) * np.maximum(np.abs(x) - lam * self.weight, 0.0)

    def value_set(self, x):
        x = self.space.vec(x)
        sign = np.sign(x) * self.weight
        lower = np.where(x == 0, -self.weight, sign)
        upper = np.where(x == 0, self.weight, sign)
        return ValueSet.box(lower, upper)

    def exact_generalized_norm(self, x, shift=None):
        x = self.space.vec(x)
        shift = np.zeros_like(x) if shift is None else np.asarray(shift, dtype=float)
        # at a zero coordinate the inf over nearby points picks the interval, elsewhere the sign is locally constant
        coordinates = np.where(x == 0,
                               np.maximum(np.abs(shift) - self.weight, 0.0),
                               np.abs(self.weight * np.sign(x) + shift))
        return float(self.space.norm(coordinates))

    def describe(self):
        description = super(SignGraph, self).describe()
        description['weight'] = self.weight
        return description


class ShiftedOperator(AccretiveOperator):
    """Operator A + x for a fixed vector x, same accretivity type as A"""
    kind = 'shifted'

    def __init__(self, base, shift):
        super(ShiftedOperator, self).__init__(base.space, base.omega)
        self.base = base
        self.shift = base.space.vec(shift)

    def _resolve(self, lam, x):
        return self.base.resolve(lam, x - lam * self.shift)

    def value_set(self, x):
        value_set = self.base.value_set(x)
        return None if value_set is None else value_set.shifted(self.shift)

    def shifted(self, x):
        return ShiftedOperator(self.base, self.shift + self.space.vec(x))

    def exact_generalized_norm(self, x, shift=None):
        total = self.shift if shift is None else self.shift + shift
        return self.base.exact_generalized_norm(x, shift=total)

    def describe(self):
        description = self.base.describe()
        description['shift'] = self.shift.tolist()
        return description


def make_linear(a, space=None, omega=None, seed=0, samples=16):
    """Linear operator u -> a u, checked on sampled graph pairs

    :param a: scalar, diagonal (1d) or square matrix
    :param space: defaults to the euclidean space of matching dimension

    Usage::

        >>> from eulercert.operators import make_linear
        >>> make_linear(1.0).resolve(0.5, 1.0)
        array([0.66666667])
    """
    if space is None:
        space = NormedSpace(max(1, np.atleast_1d(np.asarray(a)).shape[0]))
    operator = LinearOperator(a, space, omega=omega)
    rng = util.seeded_rng(seed)
    pairs = [operator.graph_pair(u) for u in space.random_vectors(rng, samples, scale=2.0)]
    report = check_accretive_sample(space, operator, pairs)
    if not report.passed:
        raise AccretivityError("Sampled accretivity check failed for %r (min %r)" % (operator, report.min_value))
    return operator


def make_sign_graph(space=None, weight=1.0, omega=0.0):
    """Sign graph, the subdifferential of w|·| applied componentwise"""
    return SignGraph(space or NormedSpace(1), weight=weight, omega=omega)


def from_config(config, space):
    """Build an operator from its declarative description

    :param config: dict with ``kind`` ('linear' or 'sign') and its parameters
        (``matrix``/``diagonal``/``scalar``, ``omega``, ``weight``, ``shift``)
    """
    config = dict(config)
    kind = config.pop('kind', None)
    shift = config.pop('shift', None)
    if kind == 'linear':
        matrix = config.pop('matrix', config.pop('diagonal', config.pop('scalar', None)))
        if matrix is None:
            raise ConfigError("Linear operator needs one of 'matrix', 'diagonal', 'scalar'")
        operator = make_linear(matrix, space, omega=config.pop('omega', None))
    elif kind == 'sign':
        operator = make_sign_graph(space, weight=config.pop('weight', 1.0), omega=config.pop('omega', 0.0))
    else:
        raise ConfigError("Unknown operator kind %r, expected 'linear' or 'sign'" % (kind,))
    if config:
        raise ConfigError("Unknown operator parameters: %s" % ', '.join(sorted(config)))
    if shift is not None:
        operator = operator.shifted(shift)
    return operator


def generalized_norm(operator, x, radii=DEFAULT_RADII, samples=SAMPLES_PER_BALL, seed=0, use_exact=True):
    """Estimate |x|_A = sup over r of inf over B(x, r) of ⦀Ax̂⦀

    The sampled estimate is made monotone over the decreasing radii; the spread is its variation
    over the finest radii. Exact values replace the estimate when the operator knows them.

    :return: :class:`GeneralizedNormEstimate`
    :raise UnsupportedOperatorError: if the operator exposes no value sets
    """
    space = operator.space
    x = space.vec(x)
    operator._require_value_set(x)
    rng = util.seeded_rng(seed)
    radii = tuple(sorted(radii, reverse=True))
    per_radius = []
    for radius in radii:
        candidates = np.vstack([x[None, :], x + radius * space.random_unit_ball(rng, samples)])
        per_radius.append(min(set_norm(operator.value_set(candidate), space) for candidate in candidates))
    per_radius = np.maximum.accumulate(np.array(per_radius))
    window = per_radius[-SPREAD_WINDOW:]
    sampled = float(per_radius[-1])
    spread = float(window[-1] - window[0]) if np.isfinite(window).all() else float('inf')
    exact = operator.exact_generalized_norm(x) if use_exact else None
    value = exact if exact is not None else sampled
    return GeneralizedNormEstimate(value, spread, exact, sampled, radii, per_radius)


def resolvent_contraction_defect(operator, rng, count=1000, scale=2.0):
    """Largest value of (1 - λω)‖J_λx - J_λy‖ - ‖x - y‖ over random (λ, x, y) with λω < 1"""
    space = operator.space
    limit = 1.0 / operator.omega if operator.omega > 0 else 2.0
    worst = -float('inf')
    for _ in range(int(count)):
        lam = rng.uniform(0.0, 0.99) * limit + 1e-6
        if lam * operator.omega >= 1:
            continue
        x, y = space.random_vectors(rng, 2, scale=scale)
        gap = (1.0 - lam * operator.omega) * space.norm(operator.resolve(lam, x) - operator.resolve(lam, y))
        worst = max(worst, float(gap - space.norm(x - y)))
    return worst
