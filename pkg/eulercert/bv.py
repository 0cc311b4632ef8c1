"""
Functions of bounded variation on an interval [a, b]: variations, one-sided limits, the shift estimate,
the norm equivalence and the Jordan decomposition.
"""
import collections
import logging

import numpy as np
import scipy.integrate

from . import grid
from .exception import BVError
from .space import NormedSpace

logger = logging.getLogger(__name__)

# successive variation estimates of a sampled C1 function closer than this stop the refinement
C1_REFINEMENT_TOLERANCE = 1e-6
C1_MAX_SAMPLES = 2 ** 22 + 1
RECONSTRUCTION_TOLERANCE = 1e-12

NormEquivalence = collections.namedtuple('NormEquivalence', 'lower middle upper')
JordanDecomposition = collections.namedtuple('JordanDecomposition', 'times values plus minus')


class BVStep(object):
    """Right continuous step function on [a, b] with an explicit value at b

    Isolated point values change the pointwise variation, never the essential one.

    :param step: :class:`eulercert.grid.StepFunction` on [0, b - a]
    :param end_value: f(b), the last interval value when None
    :param start: a
    :param point_values: dict mapping isolated times to values
    :param space: norm used for variations, euclidean by default
    """
    def __init__(self, step, end_value=None, start=0.0, point_values=None, space=None):
        self.step = step
        self.start = float(start)
        self.end_value = step.values[-1] if end_value is None else np.atleast_1d(np.asarray(end_value, dtype=float))
        self.point_values = {float(t): np.atleast_1d(np.asarray(value, dtype=float))
                             for t, value in (point_values or {}).items()}
        self.space = space or NormedSpace(step.dimension)

    @classmethod
    def from_values(cls, times, values, end_value=None, space=None):
        """Step function with values[k] on [times[k], times[k+1])"""
        times = np.asarray(times, dtype=float)
        return cls(grid.StepFunction(grid.Partition(times - times[0]), values), end_value=end_value,
                   start=times[0], space=space)

    def __repr__(self):
        return '%s([%r, %r], pieces=%s)' % (self.__class__.__name__, self.a, self.b, self.step.partition.size)

    @property
    def a(self):
        return self.start

    @property
    def b(self):
        return self.start + self.step.partition.horizon

    @property
    def breakpoints(self):
        """Nodes a = p_0 < ... < p_N = b of the step partition"""
        return self.start + self.step.partition.times

    @property
    def values(self):
        return self.step.values

    def __call__(self, t):
        t = float(t)
        if t < self.a or t > self.b:
            raise BVError("%r evaluated outside [%r, %r]" % (self, self.a, self.b))
        if t in self.point_values:
            return self.point_values[t]
        if t == self.b:
            return self.end_value
        return self.step(t - self.start)

    def __add__(self, other):
        if (self.a, self.b) != (other.a, other.b):
            raise BVError("Cannot add functions on [%r, %r] and [%r, %r]" % (self.a, self.b, other.a, other.b))
        total = self.step + other.step
        points = {t: self(t) + other(t) for t in set(self.point_values) | set(other.point_values)}
        return BVStep(total, end_value=self.end_value + other.end_value, start=self.start, point_values=points,
                      space=self.space)

    def with_point(self, t, value):
        """Same function with f(t) changed to value"""
        if t < self.a or t > self.b:
            raise BVError("Point %r outside [%r, %r]" % (t, self.a, self.b))
        points = dict(self.point_values)
        points[float(t)] = value
        end_value = np.atleast_1d(np.asarray(value, dtype=float)) if t == self.b else self.end_value
        return BVStep(self.step, end_value=end_value, start=self.start, point_values=points, space=self.space)

    def states(self):
        """Values (t, f(t-), f(t), f(t+)) at every special point, in increasing order

        Limits that do not exist at the end points repeat f(t).
        """
        special = sorted(set(self.breakpoints.tolist()) | set(self.point_values))
        states = []
        for t in special:
            value = self(t)
            left = left_limit(self, t) if t > self.a else value
            right = right_limit(self, t) if t < self.b else value
            states.append((t, left, value, right))
        return states

    def state_sequence(self):
        """Values visited by a partition realizing the pointwise variation"""
        sequence = []
        for t, left, value, right in self.states():
            if t > self.a:
                sequence.append(left)
            sequence.append(value)
            if t < self.b:
                sequence.append(right)
        return np.array(sequence)


def _partial_sums(f, sequence):
    return np.concatenate(([0.0], np.cumsum(f.space.norm(np.diff(sequence, axis=0)))))


def pointwise_var(f):
    """Var(f), supremum of the variation sums over all partitions of [a, b]"""
    return float(_partial_sums(f, f.state_sequence())[-1])


def ess_var(f):
    """essVar(f), the variation of the right continuous representative on (a, b)"""
    return f.step.ess_var(f.space)


def right_limit(f, t):
    """f(t+) for t in [a, b)"""
    if not f.a <= t < f.b:
        raise BVError("Right limit needs t in [%r, %r), got %r" % (f.a, f.b, t))
    index = int(f.step.partition.interval_indices(t - f.start))
    return f.values[index]


def left_limit(f, t):
    """f(t-) for t in (a, b]"""
    if not f.a < t <= f.b:
        raise BVError("Left limit needs t in (%r, %r], got %r" % (f.a, f.b, t))
    index = int(np.searchsorted(f.step.partition.times, t - f.start, side='left')) - 1
    return f.values[index]


def l1_norm(f):
    return float(np.dot(f.space.norm(f.values), f.step.partition.steps))


def bv_norm(f):
    """‖f‖_BV = ‖f‖_L¹ + essVar(f)"""
    return l1_norm(f) + ess_var(f)


def shift_estimate_check(f, h):
    """Exact ∫_a^{b-h} ‖f(τ + h) - f(τ)‖ dτ and its bound h essVar(f)

    :return: (lhs, rhs)
    :raise BVError: unless 0 < h < b - a
    """
    if not 0 < h < f.b - f.a:
        raise BVError("Shift %r outside (0, %r)" % (h, f.b - f.a))
    times = f.step.partition.times
    length = f.step.partition.horizon - h
    points = np.unique(np.clip(np.concatenate(([0.0, length], times, times - h)), 0.0, length))
    middles = 0.5 * (points[:-1] + points[1:])
    differences = f.space.norm(f.step(middles + h) - f.step(middles))
    lhs = float(np.dot(differences, np.diff(points)))
    return lhs, h * ess_var(f)


def norm_equivalence_check(f):
    """The sandwich ‖f‖_BV/(b - a + 1) <= ‖f(a+)‖ + essVar(f) <= (2 ∨ 1/(b - a)) ‖f‖_BV

    :return: :class:`NormEquivalence`
    :raise BVError: if an inequality fails
    """
    norm = bv_norm(f)
    length = f.b - f.a
    middle = float(f.space.norm(right_limit(f, f.a))) + ess_var(f)
    result = NormEquivalence(norm / (length + 1.0), middle, max(2.0, 1.0 / length) * norm)
    scale = 1e-12 * max(1.0, norm)
    if result.lower > result.middle + scale or result.middle > result.upper + scale:
        raise BVError("Norm equivalence violated: %r" % (result,))
    return result


class SampledC1(object):
    """Samples of a C¹ real function and of its derivative on a uniform grid of [a, b]

    :param times: uniform sample times, at least two
    :param values: f at times
    :param derivatives: f' at times
    :param func: f itself, allows refining the variation estimate
    """
    def __init__(self, times, values, derivatives, func=None):
        self.times = np.asarray(times, dtype=float)
        if self.times.size < 2:
            raise BVError("A sampled C1 function needs at least two samples")
        self.values = np.asarray(values, dtype=float)
        self.derivatives = np.asarray(derivatives, dtype=float)
        if self.values.shape != self.times.shape or self.derivatives.shape != self.times.shape:
            raise BVError("Samples, values and derivatives must have the same length")
        self.func = func

    @classmethod
    def from_function(cls, func, derivative, a, b, count):
        times = np.linspace(a, b, int(count))
        return cls(times, func(times), derivative(times), func=func)

    @property
    def a(self):
        return float(self.times[0])

    @property
    def b(self):
        return float(self.times[-1])

    def __repr__(self):
        return '%s([%r, %r], samples=%s)' % (self.__class__.__name__, self.a, self.b, self.times.size)


def _variation_sum(values):
    return float(np.sum(np.abs(np.diff(values))))


def c1_var_check(f):
    """Variation from grid variation sums and ∫|f'| by the trapezoid rule

    With the function at hand the grid is doubled until two successive variation sums differ by less
    than 1e-6.

    :return: (var_estimate, integral_estimate)
    """
    estimate = _variation_sum(f.values)
    if f.func is not None:
        count = f.times.size
        while 2 * count - 1 <= C1_MAX_SAMPLES:
            count = 2 * count - 1
            refined = _variation_sum(f.func(np.linspace(f.a, f.b, count)))
            converged = abs(refined - estimate) < C1_REFINEMENT_TOLERANCE
            estimate = refined
            if converged:
                break
        logger.debug("Variation of %r refined on %s samples", f, count)
    integral = float(scipy.integrate.trapezoid(np.abs(f.derivatives), f.times))
    return estimate, integral


def jordan_decompose(f):
    """Increasing functions f_+ = f + Var(f|[a, t]) and f_- = Var(f|[a, t]) with f = f_+ - f_-

    Evaluated at every state of a :class:`BVStep` or every sample of a :class:`SampledC1`.

    :return: :class:`JordanDecomposition`
    :raise BVError: if f is not real valued or the decomposition fails its checks
    """
    if isinstance(f, SampledC1):
        times, values = f.times, f.values
        minus = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(values)))))
    else:
        if f.step.dimension != 1:
            raise BVError("Jordan decomposition needs a real valued function")
        times, sequence = [], []
        for t, left, value, right in f.states():
            if t > f.a:
                times.append(t)
                sequence.append(left)
            times.append(t)
            sequence.append(value)
            if t < f.b:
                times.append(t)
                sequence.append(right)
        times = np.array(times)
        values = np.array(sequence).ravel()
        minus = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(values)))))
    plus = values + minus
    if np.any(np.diff(plus) < -RECONSTRUCTION_TOLERANCE * max(1.0, np.max(np.abs(plus))))\
            or np.any(np.diff(minus) < 0):
        raise BVError("Jordan components are not nondecreasing")
    if np.max(np.abs(plus - minus - values)) > RECONSTRUCTION_TOLERANCE * max(1.0, np.max(np.abs(values))):
        raise BVError("Jordan components do not reconstruct f")
    return JordanDecomposition(times, values, plus, minus)
