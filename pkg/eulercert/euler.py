"""
Implicit Euler schemes and their refinement limits.

One step of the scheme is one resolvent application,
``u_{i+1} = J_{h_i}(u_i + h_i f_θ(t_i))``.
"""
import collections
import logging

import numpy as np

from . import grid
from .exception import EulerCertError, PartitionError, ResolventError, StepSizeError, UnsupportedOperatorError

logger = logging.getLogger(__name__)

# tolerance of the scheme residual check
RESIDUAL_TOLERANCE = 1e-10
# level from which successive Cauchy gaps are expected to decrease
MONOTONE_FROM_LEVEL = 3

CauchyReport = collections.namedtuple('CauchyReport', 'levels meshes gaps bounds decreasing bounded')


class Discretization(collections.namedtuple('Discretization', 'partition forcing initial')):
    """Triple (partition, adapted step forcing, initial value) of an Euler scheme"""
    __slots__ = ()

    def __new__(cls, partition, forcing, initial):
        if forcing.partition != partition:
            raise PartitionError("Forcing is not adapted to %r" % (partition,))
        initial = np.atleast_1d(np.asarray(initial, dtype=float))
        return super(Discretization, cls).__new__(cls, partition, forcing, initial)


def discretize(partition, forcing, initial):
    """Discretization of a step forcing by its conditional expectation on partition"""
    if forcing.partition != partition:
        forcing = grid.project(forcing, partition)
    return Discretization(partition, forcing, initial)


class EulerSolution(object):
    """Solution of an implicit Euler scheme

    :ivar discretization: the :class:`Discretization` solved
    :ivar trajectory: :class:`eulercert.grid.PiecewiseAffine` through the nodes
    :ivar space: state space of the operator
    """
    def __init__(self, discretization, trajectory, space):
        self.discretization = discretization
        self.trajectory = trajectory
        self.space = space

    def __repr__(self):
        return '%s(%r)' % (self.__class__.__name__, self.partition)

    def __call__(self, t):
        return self.trajectory(t)

    @property
    def partition(self):
        return self.discretization.partition

    @property
    def forcing(self):
        return self.discretization.forcing

    @property
    def initial(self):
        return self.discretization.initial

    @property
    def nodes(self):
        return self.trajectory.node_values

    def to_rows(self):
        return self.trajectory.to_rows()


def solve_scheme(operator, discretization):
    """Solve the implicit Euler scheme of a discretization

    :param operator: :class:`eulercert.operators.AccretiveOperator`
    :param discretization: :class:`Discretization`
    :return: :class:`EulerSolution`
    :raise StepSizeError: if some step h_i has h_i ω >= 1
    :raise ResolventError: if a resolvent step fails

    Usage::

        >>> from eulercert import grid, euler, operators
        >>> p = grid.uniform(1.0, 2)
        >>> theta = euler.Discretization(p, grid.StepFunction.constant(p, 0.0), 1.0)
        >>> euler.solve_scheme(operators.make_linear(1.0), theta).nodes.ravel()
        array([1.        , 0.66666667, 0.44444444])
    """
    partition = discretization.partition
    if partition.mesh * operator.omega >= 1:
        raise StepSizeError(partition.mesh, operator.omega)
    space = operator.space
    steps = partition.steps
    forcing = discretization.forcing.values
    nodes = np.empty((partition.size + 1, space.dimension))
    nodes[0] = space.vec(discretization.initial)
    for i in range(partition.size):
        try:
            nodes[i + 1] = operator.resolve(steps[i], nodes[i] + steps[i] * forcing[i])
        except (ValueError, ArithmeticError) as ex:
            raise ResolventError("Euler step %s failed" % i, original_exception=ex)
    logger.debug("Solved Euler scheme on %r", partition)
    return EulerSolution(discretization, grid.PiecewiseAffine(partition, nodes), space)


def scheme_residual(operator, solution):
    """Largest ‖u_{i+1} - J_{h_i}(u_i + h_i f_i)‖ over the scheme steps"""
    steps = solution.partition.steps
    nodes = solution.nodes
    forcing = solution.forcing.values
    residuals = [operator.space.norm(nodes[i + 1] - operator.resolve(steps[i], nodes[i] + steps[i] * forcing[i]))
                 for i in range(steps.size)]
    return float(max(residuals))


def difference_matrix(solution, solution_hat, space=None):
    """Matrix a_{i,j} = ‖u_θ(t_i) - u_θ̂(t̂_j)‖ of node distances"""
    space = space or solution.space
    return space.norm(solution.nodes[:, None, :] - solution_hat.nodes[None, :, :])


class EulerLimit(object):
    """Finest level of a dyadic refinement study with its Cauchy report

    :ivar solution: :class:`EulerSolution` at the finest level
    :ivar report: :class:`CauchyReport`
    :ivar solutions: solutions of every level, coarsest first
    """
    def __init__(self, solutions, report):
        self.solutions = solutions
        self.solution = solutions[-1]
        self.report = report

    @property
    def trajectory(self):
        return self.solution.trajectory

    @property
    def gap(self):
        """Last measured Cauchy gap, an estimate of the distance to the Euler solution"""
        return float(self.report.gaps[-1]) if self.report.gaps else 0.0

    def __call__(self, t):
        return self.solution(t)

    def summary(self):
        return {'levels': list(self.report.levels), 'meshes': list(self.report.meshes),
                'gaps': list(self.report.gaps), 'bounds': list(self.report.bounds),
                'decreasing': self.report.decreasing, 'bounded': self.report.bounded}


def _forcing_family(forcing, horizon):
    if isinstance(forcing, grid.StepFunction):
        return forcing.partition.horizon, lambda partition: grid.project(forcing, partition)
    if horizon is None:
        raise EulerCertError("A horizon is needed when the forcing is a refinement family")
    return float(horizon), forcing


def euler_solution(operator, forcing, initial, k_max, k_min=0, horizon=None, pair=None, g=None):
    """Approximate the Euler solution on dyadic meshes 2**k_min ... 2**k_max

    For every couple of consecutive levels the sup distance of the trajectories is measured
    and compared with the distance bound between two Euler schemes.

    :param operator: :class:`eulercert.operators.AccretiveOperator`
    :param forcing: :class:`eulercert.grid.StepFunction` on [0, T], projected on every mesh,
        or a callable mapping a partition to an adapted step forcing
    :param initial: initial value u⁰
    :param k_max: finest level
    :param k_min: coarsest level
    :param horizon: T, only needed for a callable forcing
    :param pair: graph pair (u, v) of the distance bound, minimal section at u⁰ by default
    :param g: comparison step function of the distance bound, the forcing by default
    :return: :class:`EulerLimit`
    :raise StepSizeError: if ω T / 2**k_min >= 1
    """
    from .bounds import SolutionPair, distance_rhs

    horizon, family = _forcing_family(forcing, horizon)
    if operator.omega * horizon / 2 ** k_min >= 1:
        raise StepSizeError(horizon / 2 ** k_min, operator.omega)
    if pair is None:
        try:
            pair = operator.graph_pair(initial)
        except UnsupportedOperatorError:
            logger.debug("No graph pair available for %r, Cauchy bounds skipped", operator)
    if g is None:
        g = forcing if isinstance(forcing, grid.StepFunction) else None

    levels = list(range(int(k_min), int(k_max) + 1))
    solutions = []
    for level in levels:
        partition = grid.dyadic(horizon, level)
        solutions.append(solve_scheme(operator, Discretization(partition, family(partition), initial)))

    gaps, bounds = [], []
    for coarse, fine in zip(solutions, solutions[1:]):
        gaps.append(coarse.trajectory.sup_distance(fine.trajectory, operator.space))
        if pair is not None and g is not None:
            bounds.append(distance_rhs(SolutionPair(coarse, fine, operator.omega), pair, g))
        else:
            bounds.append(float('nan'))

    tail = [gap for level, gap in zip(levels, gaps) if level >= MONOTONE_FROM_LEVEL]
    decreasing = all(later <= earlier for earlier, later in zip(tail, tail[1:]))
    if not decreasing:
        logger.warning("Cauchy gaps do not decrease: %s", gaps)
    bounded = all(np.isnan(bound) or gap <= bound * (1 + 1e-9) + 1e-12 for gap, bound in zip(gaps, bounds))
    report = CauchyReport(levels, [s.partition.mesh for s in solutions], gaps, bounds, decreasing, bounded)
    return EulerLimit(solutions, report)
