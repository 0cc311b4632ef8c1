"""
Error bounds between two implicit Euler schemes, and the wellposedness estimates of Euler solutions.

Every evaluator compares the exact node distances ``a_{i,j} = ‖u_θ(t_i) - u_θ̂(t̂_j)‖`` with the right
hand side of its bound and returns a :class:`BoundReport`.
"""
import collections
import logging

import numpy as np

from . import density, grid, util
from .euler import difference_matrix
from .exception import (ArgumentError, BoundViolationError, BVError, IndexRangeError, PartitionError, StepSizeError,
                        UnsupportedOperatorError)
from .operators import generalized_norm, set_norm

logger = logging.getLogger(__name__)

# below this radius phi is evaluated from its series
PHI_SERIES_RADIUS = 1e-4
# the Kobayashi form needs mesh * omega <= 1/2
KOBAYASHI_LIMIT = 0.5
# relative tolerance of the measured Lipschitz slope
LIPSCHITZ_TOLERANCE = 1e-6
# points per axis of the continuous bound grid
CONTINUOUS_RESOLUTION = 50


def phi(x):
    """φ(x) = -log(1 - x)/x, continued by 1 at 0

    Vectorized. Near 0 the series 1 + x/2 + x²/3 + x³/4 + x⁴/5 is used.

    :raise StepSizeError: if x >= 1

    Usage::

        >>> from eulercert.bounds import phi
        >>> phi(0.5)
        1.3862943611198906
    """
    values = np.asarray(x, dtype=float)
    if np.any(values >= 1):
        raise StepSizeError(float(np.max(values)), 1.0)
    small = np.abs(values) <= PHI_SERIES_RADIUS
    safe = np.where(small, 0.5, values)
    series = 1.0 + values * (1.0 / 2 + values * (1.0 / 3 + values * (1.0 / 4 + values / 5)))
    result = np.where(small, series, -np.log1p(-safe) / safe)
    return float(result) if result.ndim == 0 else result


def growth(mesh, omega, duration, positive=True):
    """exp(φ(mesh ω) duration ω⁺), or with ω itself in the exponent when positive is False"""
    rate = max(omega, 0.0) if positive else omega
    return np.exp(phi(mesh * omega) * np.asarray(duration, dtype=float) * rate)


class BoundInputs(collections.namedtuple('BoundInputs', 'pair g')):
    """Graph pair (u, v) and comparison step function g on [0, T]

    The extension g̃ equals v on [-1, 0).
    """
    __slots__ = ()

    def __new__(cls, pair, g):
        if isinstance(g, grid.ExtendedStep):
            if not np.allclose(g.left_value, pair.v, rtol=0.0, atol=0.0):
                raise BVError("Extension value %s differs from v = %s" % (g.left_value.tolist(), list(pair.v)))
            g = g.body
        return super(BoundInputs, cls).__new__(cls, pair, g)

    @classmethod
    def zero(cls, pair, partition):
        """Inputs with g = 0 on partition"""
        return cls(pair, grid.StepFunction.constant(partition, np.zeros(np.size(pair.v))))

    @property
    def extended(self):
        return grid.ExtendedStep(self.pair.v, self.g)

    def variation(self, space):
        """essVar(g) + ‖g(0+) - v‖, the essential variation of g̃"""
        return self.extended.ess_var(space)


class SolutionPair(object):
    """Two Euler scheme solutions compared node by node

    :param first: :class:`eulercert.euler.EulerSolution` for θ
    :param second: :class:`eulercert.euler.EulerSolution` for θ̂
    :param omega: accretivity type of the operator
    :param space: defaults to the space of first
    """
    def __init__(self, first, second, omega, space=None):
        if first.partition.horizon != second.partition.horizon:
            raise PartitionError("Solutions on horizons %r and %r cannot be compared"
                                 % (first.partition.horizon, second.partition.horizon))
        self.first = first
        self.second = second
        self.omega = float(omega)
        self.space = space or first.space
        self._a = None

    def __repr__(self):
        return '%s(%r, %r, omega=%r)' % (self.__class__.__name__, self.first, self.second, self.omega)

    @property
    def a(self):
        """Difference matrix a_{i,j}"""
        if self._a is None:
            self._a = difference_matrix(self.first, self.second, self.space)
        return self._a

    @property
    def horizon(self):
        return self.first.partition.horizon

    @property
    def mesh(self):
        """|π_θ| ∨ |π_θ̂|"""
        return max(self.first.partition.mesh, self.second.partition.mesh)

    @property
    def shape(self):
        return self.a.shape

    def check_steps(self, limit=1.0, strict=True):
        """
        :raise StepSizeError: unless (|π_θ| ∨ |π_θ̂|) ω < limit (<= when not strict)
        """
        product = self.mesh * self.omega
        if product > limit or (strict and product == limit):
            raise StepSizeError(self.mesh, self.omega, limit=limit, strict=strict)

    def initial_distances(self, pair):
        """‖u_θ⁰ - u‖ + ‖u_θ̂⁰ - u‖"""
        return float(self.space.norm(self.first.initial - pair.u) + self.space.norm(self.second.initial - pair.u))

    def l1_terms(self, g):
        """Vectors ∫_0^{t_i} ‖f_θ - g‖ and ∫_0^{t̂_j} ‖f_θ̂ - g‖"""
        return (grid.l1_profile(self.first.forcing, g, self.space, self.first.partition.times),
                grid.l1_profile(self.second.forcing, g, self.space, self.second.partition.times))

    def sqrt_term(self):
        """Matrix √((t_i - t̂_j)² + |π_θ| t_i + |π_θ̂| t̂_j)"""
        t = self.first.partition.times[:, None]
        t_hat = self.second.partition.times[None, :]
        return np.sqrt((t - t_hat) ** 2 + self.first.partition.mesh * t + self.second.partition.mesh * t_hat)

    def growth_matrix(self):
        """Matrix exp(φ((|π_θ| ∨ |π_θ̂|) ω) (t_i + t̂_j) ω⁺)"""
        durations = self.first.partition.times[:, None] + self.second.partition.times[None, :]
        return growth(self.mesh, self.omega, durations)


class BoundReport(object):
    """Comparison of left and right hand sides of a bound

    slack = rhs + allowance - lhs, a bound passes when its smallest slack is at least -tolerance
    and every extra check holds.

    :ivar name: bound name
    :ivar lhs: array of left hand sides
    :ivar rhs: array of right hand sides
    :ivar locations: list of tuples locating each value
    :ivar labels: names of the location components
    :ivar allowance: array of discretization allowances added to rhs
    :ivar checks: dict of extra boolean checks
    :ivar details: dict of extra values reported in the summary
    """
    def __init__(self, name, lhs, rhs, locations, labels=('i', 'j'), allowance=None, checks=None, details=None,
                 tolerance=util.SLACK_TOLERANCE):
        self.name = name
        self.lhs = np.atleast_1d(np.asarray(lhs, dtype=float)).ravel()
        self.rhs = np.atleast_1d(np.asarray(rhs, dtype=float)).ravel()
        self.allowance = np.zeros_like(self.rhs) if allowance is None \
            else np.broadcast_to(np.asarray(allowance, dtype=float), self.rhs.shape).copy()
        self.locations = [tuple(location) for location in locations]
        if not (self.lhs.size == self.rhs.size == len(self.locations)):
            raise ArgumentError("Bound %s got %s lhs, %s rhs and %s locations"
                                % (name, self.lhs.size, self.rhs.size, len(self.locations)))
        self.labels = tuple(labels)
        self.checks = dict(checks or {})
        self.details = dict(details or {})
        self.tolerance = tolerance
        if not self.passed:
            logger.warning("Bound %s violated: min slack %r at %s, checks %s",
                           name, self.min_slack, self.argmin, self.checks)

    def __repr__(self):
        return '%s(%s, min_slack=%r, passed=%s)' % (self.__class__.__name__, self.name, self.min_slack, self.passed)

    @property
    def slack(self):
        return self.rhs + self.allowance - self.lhs

    @property
    def min_slack(self):
        return float(np.min(self.slack)) if self.slack.size else float('inf')

    @property
    def argmin(self):
        return self.locations[int(np.argmin(self.slack))] if self.slack.size else None

    @property
    def sup_lhs(self):
        return float(np.max(self.lhs)) if self.lhs.size else 0.0

    @property
    def sup_rhs(self):
        return float(np.max(self.rhs)) if self.rhs.size else 0.0

    @property
    def passed(self):
        return self.min_slack >= -self.tolerance and all(self.checks.values())

    def summary(self):
        summary = {'name': self.name, 'min_slack': self.min_slack, 'argmin': self.argmin,
                   'sup_lhs': self.sup_lhs, 'sup_rhs': self.sup_rhs, 'evaluations': len(self.locations),
                   'passed': self.passed}
        summary.update(self.checks)
        summary.update(self.details)
        return summary

    def rows(self):
        """Rows (location..., lhs, rhs, allowance, slack) for csv export"""
        slack = self.slack
        return [location + (self.lhs[k], self.rhs[k], self.allowance[k], slack[k])
                for k, location in enumerate(self.locations)]

    @property
    def header(self):
        return self.labels + ('lhs', 'rhs', 'allowance', 'slack')

    def require(self):
        """
        :raise BoundViolationError: if the bound did not pass
        """
        if not self.passed:
            raise BoundViolationError(self.name, self.min_slack, self.argmin)
        return self


def _matrix_report(name, lhs, rhs, i=None, j=None, **kwargs):
    """Report over all nodes, or the single node (i, j)"""
    if i is not None or j is not None:
        if i is None or j is None or not (0 <= i < lhs.shape[0] and 0 <= j < lhs.shape[1]):
            raise IndexRangeError("Node (%s, %s) outside a %sx%s grid" % (i, j, lhs.shape[0], lhs.shape[1]))
        return BoundReport(name, lhs[i, j], rhs[i, j], [(i, j)], **kwargs)
    locations = [(k, l) for k in range(lhs.shape[0]) for l in range(lhs.shape[1])]
    return BoundReport(name, lhs, rhs, locations, **kwargs)


def _step_terms(solutions):
    """Right hand side of the one-step inequality for every (i, j) below the last nodes, and min(h_i, ĥ_j)"""
    space = solutions.space
    h = solutions.first.partition.steps[:, None]
    h_hat = solutions.second.partition.steps[None, :]
    a = solutions.a
    short = np.minimum(h, h_hat)
    du = solutions.first.nodes[1:, None, :] - solutions.second.nodes[None, 1:, :]
    df = solutions.first.forcing.values[:, None, :] - solutions.second.forcing.values[None, :, :]
    rhs = (util.positive_part(1.0 - h_hat / h) * a[1:, :-1]
           + util.positive_part(1.0 - h / h_hat) * a[:-1, 1:]
           + short / np.maximum(h, h_hat) * a[:-1, :-1]
           + short * space.bracket(du, df))
    return rhs, short


def _check_step_index(solutions, i, j):
    n, m = solutions.first.partition.size, solutions.second.partition.size
    if not (0 <= i < n and 0 <= j < m):
        raise IndexRangeError("Step (%s, %s) outside [0, %s) x [0, %s)" % (i, j, n, m))


def iterative_step_check(solutions, i, j):
    """Slack of (1 - (h_i ∧ ĥ_j) ω) a_{i+1,j+1} <= (1 - ĥ_j/h_i)⁺ a_{i+1,j} + ... + (h_i ∧ ĥ_j) [·, ·]

    :param solutions: :class:`SolutionPair`
    :return: rhs - lhs
    """
    _check_step_index(solutions, i, j)
    rhs, short = _step_terms(solutions)
    return float(rhs[i, j] - (1.0 - short[i, j] * solutions.omega) * solutions.a[i + 1, j + 1])


def exponential_step_check(solutions, i, j):
    """Slack of the one-step inequality solved for a_{i+1,j+1} with the factor exp(φ(mω) m ω), m = h_i ∧ ĥ_j"""
    _check_step_index(solutions, i, j)
    rhs, short = _step_terms(solutions)
    m = short[i, j]
    return float(growth(m, solutions.omega, m, positive=False) * rhs[i, j] - solutions.a[i + 1, j + 1])


def step_report(solutions, exponential=False):
    """:class:`BoundReport` of the one-step inequality at every (i, j), i < N, j < N̂"""
    rhs, short = _step_terms(solutions)
    a = solutions.a[1:, 1:]
    if exponential:
        if np.any(short * solutions.omega >= 1):
            raise StepSizeError(float(short.max()), solutions.omega)
        return _matrix_report('exponential_step', a, growth(short, solutions.omega, short, positive=False) * rhs)
    return _matrix_report('iterative_step', (1.0 - short * solutions.omega) * a, rhs)


def _base_case_rhs(solution, pair, omega, space):
    partition = solution.partition
    times, steps = partition.times, partition.steps
    rate = phi(partition.mesh * omega) * omega
    brackets = steps * space.bracket(solution.nodes[1:] - pair.u, solution.forcing.values - pair.v)
    rhs = np.empty(partition.size + 1)
    distance = float(space.norm(solution.initial - pair.u))
    for i, t in enumerate(times):
        rhs[i] = np.exp(rate * t) * distance + np.dot(np.exp(rate * (t - times[:i])), brackets[:i])
    return rhs


def base_case_bound(solution, pair, omega, i=None, space=None):
    """‖u_θ(t_i) - u‖ against the comparison with the constant solution u

    :param solution: :class:`eulercert.euler.EulerSolution`
    :param pair: graph pair (u, v)
    :param omega: accretivity type
    :param i: single node, all nodes when None
    :raise StepSizeError: if |π_θ| ω >= 1
    """
    space = space or solution.space
    if solution.partition.mesh * omega >= 1:
        raise StepSizeError(solution.partition.mesh, omega)
    lhs = space.norm(solution.nodes - pair.u)
    rhs = _base_case_rhs(solution, pair, omega, space)
    if i is not None:
        solution.partition.check_index(i)
        return BoundReport('base_case', lhs[i], rhs[i], [(i,)], labels=('i',))
    return BoundReport('base_case', lhs, rhs, [(k,) for k in range(lhs.size)], labels=('i',))


def _is_uniform(partition):
    return np.allclose(partition.steps, partition.steps[0], rtol=1e-12, atol=0.0)


def equidistant_bound(solutions, pair, i=None, j=None):
    """a_{i,j} against the bound for two schemes on the same uniform partition

    The exponentials carry ω itself, not ω⁺.

    :raise PartitionError: if the partitions differ or are not uniform
    :raise StepSizeError: if |π| ω >= 1
    """
    partition = solutions.first.partition
    if partition != solutions.second.partition or not _is_uniform(partition):
        raise PartitionError("Equidistant bound needs one common uniform partition")
    solutions.check_steps()
    space = solutions.space
    times = partition.times
    h = partition.steps[0]
    rate = phi(h * solutions.omega) * solutions.omega
    first, second = solutions.first, solutions.second
    start = float(space.norm(first.initial - pair.u))
    start_hat = float(space.norm(second.initial - pair.u))
    own = h * space.bracket(first.nodes[1:] - pair.u, first.forcing.values - pair.v)
    own_hat = h * space.bracket(second.nodes[1:] - pair.u, second.forcing.values - pair.v)

    size = partition.size + 1
    rhs = np.empty((size, size))
    for row in range(size):
        for col in range(size):
            lead, lead_hat, common = max(row - col, 0), max(col - row, 0), min(row, col)
            value = np.exp(rate * times[row]) * start + np.exp(rate * times[col]) * start_hat
            value += np.dot(np.exp(rate * (times[row] - times[:lead])), own[:lead])
            value += np.dot(np.exp(rate * (times[col] - times[:lead_hat])), own_hat[:lead_hat])
            if common:
                cross = h * space.bracket(
                    first.nodes[lead + 1:lead + 1 + common] - second.nodes[lead_hat + 1:lead_hat + 1 + common],
                    first.forcing.values[lead:lead + common] - second.forcing.values[lead_hat:lead_hat + common])
                value += np.dot(np.exp(rate * (times[common] - times[:common])), cross)
            rhs[row, col] = value
    return _matrix_report('equidistant', solutions.a, rhs, i, j)


def _inputs(solutions, pair, g):
    if g is None:
        return BoundInputs.zero(pair, solutions.first.partition)
    return BoundInputs(pair, g)


def implicit_bound(solutions, pair, g, i=None, j=None):
    """a_{i,j} against the bound weighted by the density ρ^{i,j}

    :param g: :class:`eulercert.grid.ExtendedStep` equal to v on [-1, 0), or a step function on [0, T]
    :raise StepSizeError: if (|π_θ| ∨ |π_θ̂|) ω >= 1
    """
    solutions.check_steps()
    inputs = _inputs(solutions, pair, g)
    space = solutions.space
    rows, cols = solutions.first.partition, solutions.second.partition
    weights = density.cell_weights(rows, cols, inputs.extended, space)
    i_max = rows.size if i is None else i
    j_max = cols.size if j is None else j
    integrals = np.zeros((rows.size + 1, cols.size + 1))
    for node_i, node_j, cells in density.density_sweep(rows, cols, i_max, j_max):
        integrals[node_i, node_j] = np.sum(cells * weights)
    l1, l1_hat = solutions.l1_terms(inputs.g)
    rhs = solutions.growth_matrix() * (solutions.initial_distances(pair) + l1[:, None] + l1_hat[None, :] + integrals)
    return _matrix_report('implicit', solutions.a, rhs, i, j)


def main_rhs(solutions, inputs):
    """Matrix of right hand sides of the main bound"""
    l1, l1_hat = solutions.l1_terms(inputs.g)
    return solutions.growth_matrix() * (solutions.initial_distances(inputs.pair) + l1[:, None] + l1_hat[None, :]
                                        + solutions.sqrt_term() * inputs.variation(solutions.space))


def main_bound(solutions, pair, g=None, i=None, j=None):
    """a_{i,j} against exp(φ((|π_θ| ∨ |π_θ̂|) ω)(t_i + t̂_j) ω⁺)(... + √(...)(essVar(g) + ‖g(0+) - v‖))

    :param g: step function on [0, T], 0 when None
    :raise StepSizeError: if (|π_θ| ∨ |π_θ̂|) ω >= 1
    """
    solutions.check_steps()
    return _matrix_report('main', solutions.a, main_rhs(solutions, _inputs(solutions, pair, g)), i, j)


def kobayashi_bound(solutions, pair, i=None, j=None):
    """a_{i,j} against the bound with factor exp(2(t_i + t̂_j) ω⁺) and full horizon forcing integrals

    For ω >= 0 the report also checks that this bound dominates the main bound with g = 0.

    :raise StepSizeError: unless (|π_θ| ∨ |π_θ̂|) ω <= 1/2
    """
    solutions.check_steps(limit=KOBAYASHI_LIMIT, strict=False)
    space = solutions.space
    first, second = solutions.first, solutions.second
    durations = first.partition.times[:, None] + second.partition.times[None, :]
    forcing = float(np.dot(space.norm(first.forcing.values), first.partition.steps))
    forcing_hat = float(np.dot(space.norm(second.forcing.values), second.partition.steps))
    rhs = np.exp(2.0 * durations * max(solutions.omega, 0.0)) * (
        solutions.initial_distances(pair) + forcing + forcing_hat
        + solutions.sqrt_term() * float(space.norm(pair.v)))
    checks = {}
    if solutions.omega >= 0:
        reference = main_rhs(solutions, BoundInputs.zero(pair, first.partition))
        checks['dominates_main'] = bool(np.all(rhs >= reference * (1.0 - 1e-12) - util.SLACK_TOLERANCE))
    return _matrix_report('kobayashi', solutions.a, rhs, i, j, checks=checks)


def continuous_bound(solutions, pair, g=None, t=None, t_hat=None, resolution=CONTINUOUS_RESOLUTION):
    """‖u_θ(t) - u_θ̂(t̂)‖ against the bound with ⌈t⌉, ⌈t̂⌉ for all t, t̂ in [0, T]

    :param t: a single time, a grid of ``resolution`` points per axis when None
    :raise StepSizeError: if (|π_θ| ∨ |π_θ̂|) ω >= 1
    """
    solutions.check_steps()
    inputs = _inputs(solutions, pair, g)
    space = solutions.space
    first, second = solutions.first, solutions.second
    if t is None or t_hat is None:
        times = np.linspace(0.0, solutions.horizon, int(resolution))
        times_hat = times
    else:
        times, times_hat = np.atleast_1d(float(t)), np.atleast_1d(float(t_hat))
    lhs = space.norm(first(times)[:, None, :] - second(times_hat)[None, :, :])
    ceilings = first.partition.ceilings(times)
    ceilings_hat = second.partition.ceilings(times_hat)
    l1 = grid.l1_profile(first.forcing, inputs.g, space, ceilings)
    l1_hat = grid.l1_profile(second.forcing, inputs.g, space, ceilings_hat)
    mesh, mesh_hat = first.partition.mesh, second.partition.mesh
    root = np.sqrt((np.abs(times[:, None] - times_hat[None, :]) + mesh + mesh_hat) ** 2
                   + mesh * times[:, None] + mesh_hat * times_hat[None, :])
    rhs = growth(solutions.mesh, solutions.omega, ceilings[:, None] + ceilings_hat[None, :]) * (
        solutions.initial_distances(pair) + l1[:, None] + l1_hat[None, :] + root * inputs.variation(space))
    locations = [(float(s), float(s_hat)) for s in times for s_hat in times_hat]
    return BoundReport('continuous', lhs, rhs, locations, labels=('t', 't_hat'))


def distance_rhs(solutions, pair, g=None):
    """Right hand side of the bound on sup over [0, T] of ‖u_θ - u_θ̂‖

    :raise StepSizeError: if (|π_θ| ∨ |π_θ̂|) ω >= 1
    """
    solutions.check_steps()
    inputs = _inputs(solutions, pair, g)
    space = solutions.space
    horizon = solutions.horizon
    mesh, mesh_hat = solutions.first.partition.mesh, solutions.second.partition.mesh
    l1 = grid.l1_distance(solutions.first.forcing, inputs.g, space)
    l1_hat = grid.l1_distance(solutions.second.forcing, inputs.g, space)
    root = np.sqrt((mesh + mesh_hat) ** 2 + (mesh + mesh_hat) * horizon)
    return float(growth(solutions.mesh, solutions.omega, 2.0 * horizon) * (
        solutions.initial_distances(pair) + l1 + l1_hat + root * inputs.variation(space)))


def distance_bound(solutions, pair, g=None):
    """Sup distance of the two trajectories against :func:`distance_rhs`"""
    lhs = solutions.first.trajectory.sup_distance(solutions.second.trajectory, solutions.space)
    return BoundReport('distance', lhs, distance_rhs(solutions, pair, g), [('sup',)], labels=('norm',))


def _finest(limit):
    """Finest solution and Cauchy gap of an :class:`eulercert.euler.EulerLimit` or of a plain solution"""
    if hasattr(limit, 'report'):
        return limit.solution, limit.gap
    return limit, 0.0


def _node_index(partition, t):
    index = np.flatnonzero(np.isclose(partition.times, t, rtol=0.0, atol=1e-12))
    if not index.size:
        raise IndexRangeError("Time %r is not a node of %r" % (t, partition))
    return int(index[0])


def _weighted_integral(integrand, lower, upper, breakpoints, omega):
    """Exact ∫ e^{τω} integrand(τ) over [lower, upper] for integrands constant between breakpoints"""
    points = np.unique(np.clip(np.concatenate(([lower, upper], breakpoints)), lower, upper))
    if points.size < 2:
        return 0.0
    left, right = points[:-1], points[1:]
    values = integrand(0.5 * (left + right))
    if omega == 0:
        weights = right - left
    else:
        weights = np.exp(left * omega) * np.expm1((right - left) * omega) / omega
    return float(np.dot(weights, values))


def wellposedness_modulus(limit, pair, omega, t, t_hat, forcing=None):
    """‖u(t) - u(t̂)‖ against (e^{tω} + e^{t̂ω})‖u⁰ - û‖ + ∫_0^{t ∨ t̂} e^{τω} ‖f_v̂(t - τ) - f_v̂(t̂ - τ)‖ dτ

    t and t̂ are nodes of the finest uniform partition. The allowance is twice the last Cauchy gap; the
    discrete form of the estimate, which the scheme itself satisfies, is reported in ``details``.

    :param limit: :class:`eulercert.euler.EulerLimit` or solution
    :param pair: graph pair (û, v̂)
    :param t: time or sequence of times
    :param t_hat: time or sequence of times, zipped with t
    :param forcing: step forcing f on [0, T], the scheme forcing when None
    """
    solution, gap = _finest(limit)
    partition = solution.partition
    if not _is_uniform(partition):
        raise PartitionError("Modulus estimate needs a uniform partition")
    space = solution.space
    forcing = forcing or solution.forcing
    extended = grid.ExtendedStep(pair.v, forcing)
    h = partition.steps[0]
    rate = phi(h * omega) * omega
    times = partition.times
    distance = float(space.norm(solution.initial - pair.u))
    to_equilibrium = space.norm(solution.forcing.values - pair.v)

    lhs, rhs, discretes, locations = [], [], [], []
    for s, s_hat in zip(np.atleast_1d(t), np.atleast_1d(t_hat)):
        i, j = sorted((_node_index(partition, s), _node_index(partition, s_hat)), reverse=True)
        late, early = times[i], times[j]
        lead = i - j
        continuous = (np.exp(late * omega) + np.exp(early * omega)) * distance + _weighted_integral(
            lambda tau: space.norm(extended(late - tau) - extended(early - tau)), 0.0, late,
            np.concatenate((late - forcing.partition.times, early - forcing.partition.times)), omega)
        shift = space.norm(solution.forcing.values[lead:lead + j] - solution.forcing.values[:j])
        discrete = ((np.exp(rate * late) + np.exp(rate * early)) * distance
                    + h * np.dot(np.exp(rate * (late - times[:lead])), to_equilibrium[:lead])
                    + h * np.dot(np.exp(rate * (early - times[:j])), shift))
        lhs.append(space.norm(solution.nodes[i] - solution.nodes[j]))
        rhs.append(continuous)
        discretes.append(float(discrete))
        locations.append((float(s), float(s_hat)))
    return BoundReport('wellposedness_modulus', lhs, rhs, locations, labels=('t', 't_hat'), allowance=2.0 * gap,
                       details={'discrete_rhs': discretes, 'cauchy_gap': gap})


def wellposedness_stability(limit, limit_hat, omega):
    """‖u(t) - û(t)‖ against e^{tω}‖u⁰ - û⁰‖ + ∫_0^t e^{(t-s)ω}[u(s) - û(s), f(s) - f̂(s)] ds at every node

    The bracket integral is evaluated by the midpoint rule; its quadrature error is measured against the
    exact discrete form of the estimate and reported. The allowance adds both Cauchy gaps.
    """
    solution, gap = _finest(limit)
    solution_hat, gap_hat = _finest(limit_hat)
    partition = solution.partition
    if partition != solution_hat.partition:
        raise PartitionError("Stability estimate needs both solutions on the same partition")
    space = solution.space
    times, steps = partition.times, partition.steps
    if partition.mesh * omega >= 1:
        raise StepSizeError(partition.mesh, omega)

    middles = 0.5 * (times[:-1] + times[1:])
    df = solution.forcing.values - solution_hat.forcing.values
    midpoint_brackets = steps * space.bracket(solution(middles) - solution_hat(middles), df)
    node_brackets = steps * space.bracket(solution.nodes[1:] - solution_hat.nodes[1:], df)
    # exact products of (1 - h_l ω)^{-1}
    logs = np.concatenate(([0.0], np.cumsum(-np.log1p(-steps * omega))))
    start = float(space.norm(solution.initial - solution_hat.initial))

    lhs = space.norm(solution.nodes - solution_hat.nodes)
    rhs = np.empty(times.size)
    errors = np.empty(times.size)
    for i, t in enumerate(times):
        midpoint = np.exp(t * omega) * start + np.dot(np.exp((t - middles[:i]) * omega), midpoint_brackets[:i])
        discrete = np.exp(logs[i]) * start + np.dot(np.exp(logs[i] - logs[:i]), node_brackets[:i])
        rhs[i] = midpoint
        errors[i] = abs(midpoint - discrete)
    return BoundReport('wellposedness_stability', lhs, rhs, [(float(t),) for t in times], labels=('t',),
                       allowance=errors + gap + gap_hat, details={'max_quadrature_error': float(errors.max())})


def _lipschitz_allowance(certificate, mesh, omega, horizon):
    # the scheme slope bound carries exp(φ(|π| ω⁺) T ω⁺) instead of e^{T ω⁺}
    positive = max(omega, 0.0)
    return certificate * np.expm1((phi(mesh * positive) - 1.0) * horizon * positive)


def lipschitz_certificate(limit, operator, forcing=None, initial=None):
    """Largest slope of an approximate Euler solution against e^{Tω⁺}(|u⁰|_{A - f(0+)} + essVar(f))

    :param forcing: step forcing f, the scheme forcing when None
    :param initial: u⁰, the scheme initial value when None
    :raise UnsupportedOperatorError: if the operator exposes no value sets
    """
    solution, gap = _finest(limit)
    space = operator.space
    forcing = forcing or solution.forcing
    initial = solution.initial if initial is None else space.vec(initial)
    estimate = generalized_norm(operator.shifted(-forcing.first_value), initial)
    horizon = solution.partition.horizon
    positive = max(operator.omega, 0.0)
    certificate = np.exp(horizon * positive) * (estimate.value + forcing.ess_var(space))
    measured = float(np.max(solution.trajectory.slopes(space)))
    allowance = (LIPSCHITZ_TOLERANCE * certificate + np.exp(horizon * positive) * estimate.spread
                 + _lipschitz_allowance(certificate, solution.partition.mesh, operator.omega, horizon))
    return BoundReport('lipschitz', measured, certificate, [('slope',)], labels=('quantity',), allowance=allowance,
                       details={'generalized_norm': estimate.value, 'exact_norm': estimate.exact is not None,
                                'cauchy_gap': gap})


def crandall_liggett_check(limit, limit_hat, operator):
    """Homogeneous case f = 0: stability e^{ωt} at every node and the Lipschitz constant e^{Tω⁺}⦀Au⁰⦀

    The stability right hand side is the scheme factor exp(φ(|π| ω) ω t), which dominates e^{ωt}.
    """
    solution, gap = _finest(limit)
    solution_hat, gap_hat = _finest(limit_hat)
    partition = solution.partition
    if partition != solution_hat.partition:
        raise PartitionError("Stability estimate needs both solutions on the same partition")
    space = operator.space
    omega = operator.omega
    if partition.mesh * omega >= 1:
        raise StepSizeError(partition.mesh, omega)
    start = float(space.norm(solution.initial - solution_hat.initial))
    lhs = list(space.norm(solution.nodes - solution_hat.nodes))
    rhs = list(growth(partition.mesh, omega, partition.times, positive=False) * start)
    allowance = [gap + gap_hat] * len(lhs)
    locations = [('stability', float(t)) for t in partition.times]

    value_set = operator.value_set(solution.initial)
    if value_set is None:
        raise UnsupportedOperatorError("%r does not expose value sets" % operator)
    certificate = np.exp(partition.horizon * max(omega, 0.0)) * set_norm(value_set, space)
    lhs.append(float(np.max(solution.trajectory.slopes(space))))
    rhs.append(certificate)
    allowance.append(LIPSCHITZ_TOLERANCE * certificate
                     + _lipschitz_allowance(certificate, partition.mesh, omega, partition.horizon))
    locations.append(('lipschitz', partition.horizon))
    return BoundReport('crandall_liggett', lhs, rhs, locations, labels=('check', 't'), allowance=allowance)
