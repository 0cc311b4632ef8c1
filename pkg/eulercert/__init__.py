import sys

from eulercert.__version__ import __version__  # noqa: F401
from eulercert.exception import (EulerCertError, DimensionError, PartitionError, HorizonMismatchError,
                                 IndexRangeError, ResolventError, UnsupportedOperatorError, AccretivityError,
                                 BracketError, SizeCapError, BVError, ConfigError, ArgumentError, StepSizeError,
                                 BoundViolationError)
from eulercert.grid import Partition, StepFunction, ExtendedStep, PiecewiseAffine
from eulercert.space import NormedSpace
from eulercert.operators import GraphPair, make_linear, make_sign_graph
from eulercert.euler import Discretization, solve_scheme, euler_solution
from eulercert.bounds import SolutionPair, BoundReport

if sys.version_info < (3, 6):
    raise RuntimeError('You need Python 3.6+ for this module.')


__all__ = ['EulerCertError',
           'DimensionError',
           'PartitionError',
           'HorizonMismatchError',
           'IndexRangeError',
           'ResolventError',
           'UnsupportedOperatorError',
           'AccretivityError',
           'BracketError',
           'SizeCapError',
           'BVError',
           'ConfigError',
           'ArgumentError',
           'StepSizeError',
           'BoundViolationError',
           'Partition',
           'StepFunction',
           'ExtendedStep',
           'PiecewiseAffine',
           'NormedSpace',
           'GraphPair',
           'make_linear',
           'make_sign_graph',
           'Discretization',
           'solve_scheme',
           'euler_solution',
           'SolutionPair',
           'BoundReport']
