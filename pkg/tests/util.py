import numpy as np

from eulercert import grid, operators
from eulercert.euler import Discretization, solve_scheme
from eulercert.space import NormedSpace

SEED = 1234


def rng(*keys):
    return np.random.default_rng([SEED] + list(keys))


def step(times, values):
    """Step function on the partition given by its nodes"""
    return grid.StepFunction(grid.Partition(times), values)


def sign_problem():
    """(operator, forcing, initial) of the nonsmooth reference problem on [0, 2]"""
    return operators.make_sign_graph(), step([0.0, 1.0, 2.0], [1.0, -1.0]), 0.3


def random_scheme(operator, partition, generator, scale=2.0):
    """Solution of a scheme with random step forcing and random initial value"""
    dimension = operator.space.dimension
    forcing = grid.StepFunction(partition, scale * (2.0 * generator.random((partition.size, dimension)) - 1.0))
    initial = operator.space.random_vectors(generator, 1)[0]
    return solve_scheme(operator, Discretization(partition, forcing, initial))


def random_operator(generator, dimension=2, p=2, kind='linear'):
    space = NormedSpace(dimension, p)
    if kind == 'sign':
        return operators.make_sign_graph(space, weight=float(generator.uniform(0.5, 2.0)))
    return operators.make_linear(generator.uniform(-0.5, 0.5, (dimension, dimension)) + np.eye(dimension), space)
