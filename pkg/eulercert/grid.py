"""
Time grids on [0, T] and the functions living on them.

A :class:`Partition` is an increasing sequence of nodes ``0 = t_0 < ... < t_N = T``.
Step functions are adapted to a partition (value ``v_i`` on ``[t_i, t_{i+1})``),
piecewise affine functions interpolate node values.
"""
import logging

import numpy as np

from .exception import HorizonMismatchError, IndexRangeError, PartitionError, DimensionError

logger = logging.getLogger(__name__)


class Partition(object):
    """Partition of a time interval [0, T]

    Nodes are stored as given and never recomputed by accumulation.

    :param times: strictly increasing nodes, first one 0, at least two of them

    Usage::

        >>> from eulercert.grid import Partition
        >>> p = Partition([0, 0.5, 1])
        >>> p.mesh
        0.5
    """
    def __init__(self, times):
        times = np.array(times, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise PartitionError("A partition needs at least two nodes, got %r" % (times.tolist(),))
        if not np.all(np.isfinite(times)):
            raise PartitionError("Partition nodes must be finite")
        if times[0] != 0.0:
            raise PartitionError("First node must be 0, got %r" % times[0])
        if not np.all(np.diff(times) > 0):
            raise PartitionError("Partition nodes must be strictly increasing")
        times.flags.writeable = False
        self._times = times
        self._steps = np.diff(times)
        self._steps.flags.writeable = False

    @property
    def times(self):
        """Nodes t_0 ... t_N"""
        return self._times

    @property
    def steps(self):
        """Step sizes h_i = t_{i+1} - t_i"""
        return self._steps

    @property
    def mesh(self):
        """Mesh size, largest step"""
        return float(self._steps.max())

    @property
    def horizon(self):
        """Final time T"""
        return float(self._times[-1])

    @property
    def size(self):
        """Number N of intervals"""
        return self._steps.size

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self._times, other._times)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._times.tobytes())

    def __repr__(self):
        return '%s(N=%s, T=%r, mesh=%r)' % (self.__class__.__name__, self.size, self.horizon, self.mesh)

    def check_index(self, i):
        if not 0 <= i <= self.size:
            raise IndexRangeError("Node index %s outside [0, %s]" % (i, self.size))
        return int(i)

    def interval_indices(self, s):
        """Index i of the interval [t_i, t_{i+1}) containing each s

        Points before 0 get -1, points at or after T get N.
        """
        return np.searchsorted(self._times, np.asarray(s, dtype=float), side='right') - 1

    def floor(self, s):
        """Floor ⌊s⌋: t_i for s in [t_i, t_{i+1}), s itself outside [0, T)"""
        i = int(self.interval_indices(s))
        if i < 0 or i >= self.size:
            return float(s)
        return float(self._times[i])

    def ceiling(self, s):
        """Ceiling ⌈s⌉: t_{i+1} for s in [t_i, t_{i+1}), s itself outside [0, T)"""
        i = int(self.interval_indices(s))
        if i < 0 or i >= self.size:
            return float(s)
        return float(self._times[i + 1])

    def ceilings(self, s):
        """Vectorized :meth:`ceiling`"""
        s = np.asarray(s, dtype=float)
        index = self.interval_indices(s)
        inside = (index >= 0) & (index < self.size)
        return np.where(inside, self._times[np.clip(index + 1, 0, self.size)], s)

    def is_refined_by(self, other):
        """True if every node of this partition is a node of other"""
        return self.horizon == other.horizon and bool(np.all(np.isin(self._times, other.times)))

    def to_rows(self):
        """Rows (index, t_i, h_i) for csv export, h is empty on the last node"""
        rows = []
        for i, t in enumerate(self._times):
            rows.append((i, float(t), float(self._steps[i]) if i < self.size else ''))
        return rows


def floor_at(p, s):
    """Floor map of partition p evaluated at s"""
    return p.floor(s)


def ceiling_at(p, s):
    """Ceiling map of partition p evaluated at s"""
    return p.ceiling(s)


def uniform(T, N):
    """Equidistant partition {0, T/N, ..., T}

    :param T: horizon, positive
    :param N: number of intervals, at least 1
    """
    if N < 1 or not T > 0:
        raise PartitionError("Uniform partition needs T > 0 and N >= 1, got T=%r, N=%r" % (T, N))
    return Partition(np.linspace(0.0, T, int(N) + 1))


def dyadic(T, level):
    """Uniform partition with 2**level intervals"""
    return uniform(T, 2 ** int(level))


def random_partition(T, N, rng):
    """Random partition with N intervals, every step at least T/(4N)

    :param rng: :class:`numpy.random.Generator`
    """
    weights = 1.0 + 3.0 * rng.random(int(N))
    steps = T * weights / weights.sum()
    times = np.concatenate(([0.0], np.cumsum(steps)))
    times[-1] = T
    return Partition(times)


def refine(p, q):
    """Common refinement of two partitions of the same horizon

    :raise HorizonMismatchError: if horizons differ
    """
    if p.horizon != q.horizon:
        raise HorizonMismatchError("Cannot refine partitions of horizons %r and %r" % (p.horizon, q.horizon))
    if p == q:
        return p
    return Partition(np.union1d(p.times, q.times))


def _as_values(values, size):
    values = np.array(values, dtype=float)
    if values.ndim == 1:
        values = values.reshape(-1, 1)
    if values.ndim != 2 or values.shape[0] != size:
        raise DimensionError("Expected %s values, got array of shape %s" % (size, values.shape))
    values.flags.writeable = False
    return values


class StepFunction(object):
    """Step function adapted to a partition

    The value on [t_i, t_{i+1}) is ``values[i]``, evaluation at T returns the last value.

    :param partition: :class:`Partition`
    :param values: N values, scalars or vectors of the state space
    """
    def __init__(self, partition, values):
        self.partition = partition
        self.values = _as_values(values, partition.size)

    @classmethod
    def constant(cls, partition, value):
        value = np.atleast_1d(np.asarray(value, dtype=float))
        return cls(partition, np.tile(value, (partition.size, 1)))

    @property
    def dimension(self):
        return self.values.shape[1]

    @property
    def first_value(self):
        """Right limit g(0+), the value on the first interval"""
        return self.values[0]

    def __repr__(self):
        return '%s(%r, dimension=%s)' % (self.__class__.__name__, self.partition, self.dimension)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0) or np.any(s > self.partition.horizon):
            raise IndexRangeError("Step function evaluated outside [0, %r]" % self.partition.horizon)
        index = np.minimum(self.partition.interval_indices(s), self.partition.size - 1)
        return self.values[index]

    def __add__(self, other):
        return _combine(self, other, np.add)

    def __sub__(self, other):
        return _combine(self, other, np.subtract)

    def __mul__(self, alpha):
        return StepFunction(self.partition, self.values * float(alpha))

    __rmul__ = __mul__

    def on(self, partition):
        """Same function expressed on a refinement of its partition"""
        if not self.partition.is_refined_by(partition):
            raise PartitionError("%r does not refine %r" % (partition, self.partition))
        return StepFunction(partition, self(partition.times[:-1]))

    def jump_norms(self, space):
        """Norms of the jumps between consecutive interval values"""
        return space.norm(np.diff(self.values, axis=0))

    def ess_var(self, space):
        """Essential variation on (0, T): sum of jump norms"""
        return float(np.sum(self.jump_norms(space)))

    def to_rows(self):
        """Rows (t_start, t_end, v_1, ..., v_n) for csv export"""
        times = self.partition.times
        return [(float(times[i]), float(times[i + 1])) + tuple(float(x) for x in self.values[i])
                for i in range(self.partition.size)]


def _combine(f, g, operation):
    common = refine(f.partition, g.partition)
    left = common.times[:-1]
    return StepFunction(common, operation(f(left), g(left)))


class ExtendedStep(object):
    """Step function on [0, T] extended by a constant value to negative times

    :param left_value: value for every s < 0
    :param body: :class:`StepFunction` on [0, T]
    """
    def __init__(self, left_value, body):
        self.left_value = np.atleast_1d(np.asarray(left_value, dtype=float))
        if self.left_value.shape != (body.dimension,):
            raise DimensionError("Left value of dimension %s for body of dimension %s"
                                 % (self.left_value.size, body.dimension))
        self.body = body

    @property
    def partition(self):
        return self.body.partition

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        negative = s < 0
        inside = self.body(np.where(negative, 0.0, s))
        if s.ndim == 0:
            return self.left_value if negative else inside
        return np.where(negative[:, None], self.left_value[None, :], inside)

    def ess_var(self, space):
        """Essential variation on (-1, T), the jump at 0 included"""
        return self.body.ess_var(space) + float(space.norm(self.body.first_value - self.left_value))


class PiecewiseAffine(object):
    """Continuous function, affine on every interval of its partition

    :param partition: :class:`Partition`
    :param node_values: N + 1 values u(t_0) ... u(t_N)
    """
    def __init__(self, partition, node_values):
        self.partition = partition
        self.node_values = _as_values(node_values, partition.size + 1)

    @property
    def dimension(self):
        return self.node_values.shape[1]

    def __repr__(self):
        return '%s(%r, dimension=%s)' % (self.__class__.__name__, self.partition, self.dimension)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        times = self.partition.times
        if np.any(t < 0) or np.any(t > self.partition.horizon):
            raise IndexRangeError("Piecewise affine function evaluated outside [0, %r]" % self.partition.horizon)
        index = np.clip(self.partition.interval_indices(t), 0, self.partition.size - 1)
        weight = (t - times[index]) / self.partition.steps[index]
        weight = weight[..., None]
        return (1.0 - weight) * self.node_values[index] + weight * self.node_values[index + 1]

    def sup_distance(self, other, space):
        """Exact sup over [0, T] of the distance to another piecewise affine function

        The difference is affine between nodes of the common refinement, so the sup is a max over those nodes.
        """
        nodes = refine(self.partition, other.partition).times
        return float(np.max(space.norm(self(nodes) - other(nodes))))

    def slopes(self, space):
        """Norm of the derivative on every interval"""
        return space.norm(np.diff(self.node_values, axis=0)) / self.partition.steps

    def to_rows(self):
        """Rows (t, u_1, ..., u_n) for csv export"""
        return [(float(t),) + tuple(float(x) for x in u) for t, u in zip(self.partition.times, self.node_values)]


def project(f, p):
    """Conditional expectation of a step function onto partition p

    Each value is the exact average of f over the corresponding interval of p.
    """
    common = refine(f.partition, p)
    pieces = f(common.times[:-1]) * common.steps[:, None]
    owner = p.interval_indices(common.times[:-1])
    sums = np.zeros((p.size, f.dimension))
    np.add.at(sums, owner, pieces)
    return StepFunction(p, sums / p.steps[:, None])


def project_callable(func, p):
    """Step function sampling func at the left node of every interval of p"""
    return StepFunction(p, np.array([np.atleast_1d(func(t)) for t in p.times[:-1]], dtype=float))


def l1_profile(f, g, space, times):
    """Exact ∫_0^t ‖f - g‖ for every t in times

    The cumulative integral is piecewise linear between nodes of the common refinement.
    """
    common = refine(f.partition, g.partition)
    left = common.times[:-1]
    increments = space.norm(f(left) - g(left)) * common.steps
    cumulative = np.concatenate(([0.0], np.cumsum(increments)))
    return np.interp(np.asarray(times, dtype=float), common.times, cumulative)


def l1_distance(f, g, space):
    """Exact ‖f - g‖ in L¹(0, T)"""
    return float(l1_profile(f, g, space, f.partition.horizon))
