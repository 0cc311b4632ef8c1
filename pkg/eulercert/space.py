"""
Finite dimensional normed state spaces and the bracket [u, v].

The bracket is the one-sided directional derivative of the norm at u in direction v,
``[u, v] = inf_{λ>0} (‖u + λv‖ - ‖u‖) / λ``, evaluated in closed form for the p-norms.
"""
import collections
import logging

import numpy as np
import scipy.linalg

from .exception import ArgumentError, BracketError, DimensionError

logger = logging.getLogger(__name__)

# relative tolerance defining the active coordinates of a max norm
ARGMAX_TOLERANCE = 1e-12

# default step sizes of the difference quotient oracle, decreasing
QUOTIENT_LAMBDAS = (1e-5, 1e-6, 1e-7)

# sampled pairs below this value contradict the declared accretivity type
ACCRETIVITY_TOLERANCE = 1e-10

AccretivityReport = collections.namedtuple('AccretivityReport', 'min_value violations pairs_checked passed')


def parse_p(p):
    """Normalize a norm selector given as 1, 2, 'inf', float('inf')"""
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ('inf', 'infinity', 'max'):
            return np.inf
        try:
            p = float(p)
        except ValueError as ex:
            raise ArgumentError("Unsupported norm selector %r" % p, original_exception=ex)
    if p in (1, 2):
        return int(p)
    if p == np.inf:
        return np.inf
    raise ArgumentError("Unsupported norm selector %r, expected one of 1, 2, inf" % (p,))


class NormedSpace(object):
    """The space R^n with a p-norm, p in {1, 2, inf}

    :param dimension: n, at least 1
    :param p: norm selector

    Usage::

        >>> from eulercert.space import NormedSpace
        >>> NormedSpace(2, p=2).norm([3, 4])
        5.0
    """
    def __init__(self, dimension, p=2):
        if int(dimension) < 1:
            raise DimensionError("Space dimension must be at least 1, got %r" % (dimension,))
        self.dimension = int(dimension)
        self.p = parse_p(p)

    def __repr__(self):
        return '%s(dimension=%s, p=%s)' % (self.__class__.__name__, self.dimension, self.p)

    def __eq__(self, other):
        return isinstance(other, NormedSpace) and (self.dimension, self.p) == (other.dimension, other.p)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.dimension, self.p))

    @property
    def label(self):
        return 'inf' if self.p == np.inf else str(self.p)

    def vec(self, x):
        """Convert x into a vector of this space

        :raise DimensionError: if x has the wrong number of coordinates
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape[-1] != self.dimension:
            raise DimensionError("Expected vector(s) of dimension %s, got shape %s" % (self.dimension, x.shape))
        return x

    def zero(self):
        return np.zeros(self.dimension)

    def norm(self, x):
        """p-norm along the last axis"""
        x = self.vec(x)
        return np.linalg.norm(x, ord=self.p, axis=-1)

    def bracket(self, u, v):
        """Closed form bracket [u, v], vectorized along leading axes"""
        u = self.vec(u)
        v = self.vec(v)
        u, v = np.broadcast_arrays(u, v)
        norm_v = self.norm(v)
        if self.p == 1:
            return np.sum(np.sign(u) * v, axis=-1) + np.sum(np.where(u == 0, np.abs(v), 0.0), axis=-1)
        norm_u = self.norm(u)
        nonzero = norm_u > 0
        if self.p == 2:
            safe = np.where(nonzero, norm_u, 1.0)
            return np.where(nonzero, np.sum(u * v, axis=-1) / safe, norm_v)
        # max norm: largest one-sided derivative among the active coordinates
        active = np.abs(u) >= (norm_u * (1.0 - ARGMAX_TOLERANCE))[..., None]
        candidates = np.where(active, np.sign(u) * v, -np.inf)
        return np.where(nonzero, np.max(candidates, axis=-1), norm_v)

    def bracket_quotient(self, u, v, lambdas=QUOTIENT_LAMBDAS):
        """Difference quotient oracle of the bracket at the smallest λ

        :raise BracketError: if the quotient grows while λ decreases beyond rounding
        """
        u = self.vec(u)
        v = self.vec(v)
        lambdas = sorted(lambdas, reverse=True)
        norm_u = float(self.norm(u))
        quotients = [(float(self.norm(u + lam * v)) - norm_u) / lam for lam in lambdas]
        # cancellation in ‖u + λv‖ - ‖u‖ limits what can be asserted
        tolerance = max(1e-9, 4 * np.finfo(float).eps * max(norm_u, 1.0) / lambdas[-1])
        for previous, current in zip(quotients, quotients[1:]):
            if current > previous + tolerance:
                raise BracketError("Difference quotient not monotone in λ: %r" % (quotients,))
        return quotients[-1]

    def log_norm(self, matrix):
        """Logarithmic norm μ_p of a square matrix

        For a linear operator a, μ_p(-a) is the least ω making a accretive of type ω.
        """
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        if matrix.shape != (self.dimension, self.dimension):
            raise DimensionError("Expected a %sx%s matrix, got shape %s"
                                 % (self.dimension, self.dimension, matrix.shape))
        diagonal = np.diag(matrix)
        off_diagonal = np.abs(matrix - np.diag(diagonal))
        if self.p == 1:
            return float(np.max(diagonal + off_diagonal.sum(axis=0)))
        if self.p == np.inf:
            return float(np.max(diagonal + off_diagonal.sum(axis=1)))
        return float(scipy.linalg.eigvalsh(0.5 * (matrix + matrix.T))[-1])

    def random_vectors(self, rng, count, scale=1.0):
        """count vectors with coordinates uniform in [-scale, scale]"""
        return scale * (2.0 * rng.random((int(count), self.dimension)) - 1.0)

    def random_unit_ball(self, rng, count):
        """count vectors of norm at most 1"""
        cube = self.random_vectors(rng, count)
        return cube / np.maximum(1.0, self.norm(cube))[:, None]


def norm(s, x):
    """Norm of x in space s"""
    return s.norm(x)


def bracket(s, u, v):
    """Bracket [u, v] in space s"""
    return s.bracket(u, v)


def bracket_quotient(s, u, v, lambdas=QUOTIENT_LAMBDAS):
    """Difference quotient oracle of the bracket in space s"""
    return s.bracket_quotient(u, v, lambdas)


def check_accretive_sample(s, operator, pairs):
    """Check [u - û, v - v̂] + ω‖u - û‖ >= 0 on every couple of sampled graph pairs

    :param s: :class:`NormedSpace`
    :param operator: operator providing the declared type ``omega``
    :param pairs: list of graph pairs (u, v) with v in Au
    :return: :class:`AccretivityReport`
    """
    if len(pairs) < 2:
        return AccretivityReport(float('inf'), 0, 0, True)
    u = s.vec([pair.u for pair in pairs])
    v = s.vec([pair.v for pair in pairs])
    first, second = np.triu_indices(len(pairs), k=1)
    du = u[first] - u[second]
    dv = v[first] - v[second]
    values = s.bracket(du, dv) + operator.omega * s.norm(du)
    violations = int(np.count_nonzero(values < -ACCRETIVITY_TOLERANCE))
    if violations:
        logger.warning("%s sampled pairs contradict accretivity of type %r (min %r)",
                       violations, operator.omega, float(values.min()))
    return AccretivityReport(float(values.min()), violations, int(values.size), violations == 0)
