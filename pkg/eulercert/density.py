"""
The density ρ^{i,j} weighting the modulus of a comparison function in the implicit bound.

ρ^{i,j} is constant on the cells of the grid spanned by two partitions, extended by the strips
[-1, 0) on both axes. Cells are stored densely, index 0 standing for the strip, index k + 1
for the interval [t_k, t_{k+1}).
"""
import collections
import logging

import numpy as np

from . import grid
from .exception import ArgumentError, IndexRangeError, SizeCapError

logger = logging.getLogger(__name__)

# largest number of intervals per axis
MAX_CELLS = 128

Marginal = collections.namedtuple('Marginal', 'edges values')


def _edges(partition):
    return np.concatenate(([-1.0], partition.times))


def _widths(partition):
    return np.concatenate(([1.0], partition.steps))


class DensityGrid(object):
    """Cell densities of ρ^{i,j}

    :ivar rows: partition π_θ of the first time variable
    :ivar cols: partition π_θ̂ of the second time variable
    :ivar cells: (N + 1) x (N̂ + 1) array, row/column 0 being the [-1, 0) strips
    :ivar i: node index in rows
    :ivar j: node index in cols
    :ivar interior_only: True when the strips were not computed
    """
    def __init__(self, rows, cols, cells, i, j, interior_only=False):
        self.rows = rows
        self.cols = cols
        self.cells = cells
        self.i = i
        self.j = j
        self.interior_only = interior_only

    def __repr__(self):
        return '%s(i=%s, j=%s, shape=%s)' % (self.__class__.__name__, self.i, self.j, self.cells.shape)

    def density(self, k, l):
        """Density on cell (k, l), index -1 meaning the strip"""
        return float(self.cells[k + 1, l + 1])

    @property
    def t_i(self):
        return float(self.rows.times[self.i])

    @property
    def t_hat_j(self):
        return float(self.cols.times[self.j])

    @property
    def row_edges(self):
        return _edges(self.rows)

    @property
    def col_edges(self):
        return _edges(self.cols)

    @property
    def row_widths(self):
        return _widths(self.rows)

    @property
    def col_widths(self):
        return _widths(self.cols)

    @property
    def interior(self):
        return self.cells[1:, 1:]

    def total_mass(self):
        return float(self.row_widths.dot(self.cells).dot(self.col_widths))

    def to_rows(self):
        """Heatmap rows (tau_lo, tau_hi, tau_hat_lo, tau_hat_hi, density) of the nonzero cells"""
        row_edges, col_edges = self.row_edges, self.col_edges
        return [(float(row_edges[r]), float(row_edges[r + 1]), float(col_edges[c]), float(col_edges[c + 1]),
                 float(self.cells[r, c]))
                for r, c in zip(*np.nonzero(self.cells))]


def check_sizes(rows, cols, i, j):
    """Validate partition sizes and node indices of a density"""
    for partition in (rows, cols):
        if partition.size > MAX_CELLS:
            raise SizeCapError("Density grids support at most %s intervals per axis, got %s"
                               % (MAX_CELLS, partition.size))
    if not 0 <= i <= rows.size or not 0 <= j <= cols.size:
        raise IndexRangeError("Indices (%s, %s) outside [0, %s] x [0, %s]" % (i, j, rows.size, cols.size))


def density_sweep(rows, cols, i_max=None, j_max=None):
    """Iterate over (i, j, cells) of ρ^{i,j} for every 0 <= i <= i_max, 0 <= j <= j_max

    Grids come in recursion order, one row of grids being kept at a time.
    The yielded arrays are shared with the recursion and must not be modified.
    """
    i_max = rows.size if i_max is None else i_max
    j_max = cols.size if j_max is None else j_max
    check_sizes(rows, cols, i_max, j_max)
    shape = (rows.size + 1, cols.size + 1)

    previous = []
    for j in range(j_max + 1):
        base = np.zeros(shape)
        base[0, 1:j + 1] = 1.0
        previous.append(base)
        yield 0, j, base

    for i in range(i_max):
        h = rows.steps[i]
        base = np.zeros(shape)
        base[1:i + 2, 0] = 1.0
        current = [base]
        yield i + 1, 0, base
        for j in range(j_max):
            h_hat = cols.steps[j]
            cells = (max(1.0 - h_hat / h, 0.0) * current[j]
                     + max(1.0 - h / h_hat, 0.0) * previous[j + 1]
                     + (min(h, h_hat) / max(h, h_hat)) * previous[j])
            cells[i + 1, j + 1] += 1.0 / max(h, h_hat)
            current.append(cells)
            yield i + 1, j + 1, cells
        previous = current


def density_forward(rows, cols, i, j):
    """ρ^{i,j} from the recursive definition

    :param rows: partition π_θ
    :param cols: partition π_θ̂
    :return: :class:`DensityGrid`
    :raise IndexRangeError: if (i, j) is not a node pair
    """
    check_sizes(rows, cols, i, j)
    cells = None
    for node_i, node_j, cells in density_sweep(rows, cols, i, j):
        pass
    logger.debug("Forward density (%s, %s) on %sx%s cells", i, j, rows.size, cols.size)
    return DensityGrid(rows, cols, cells.copy(), i, j)


def density_direct(rows, cols, i, j, fill_strips=False):
    """Interior cells of ρ^{i,j} by a single backward sweep

    Step sizes and densities indexed past the end of a partition are 0. The strips are left at 0,
    or completed from the marginal identities when fill_strips is set.

    :return: :class:`DensityGrid`
    """
    check_sizes(rows, cols, i, j)
    n, m = rows.size, cols.size
    h = np.append(rows.steps, 0.0)
    h_hat = np.append(cols.steps, 0.0)
    interior = np.zeros((n + 1, m + 1))
    for k in range(n - 1, -1, -1):
        for l in range(m - 1, -1, -1):
            value = (max(h[k] - h_hat[l + 1], 0.0) * interior[k, l + 1]
                     + max(h_hat[l] - h[k + 1], 0.0) * interior[k + 1, l]
                     + min(h[k + 1], h_hat[l + 1]) * interior[k + 1, l + 1])
            if k + 1 == i and l + 1 == j:
                value += 1.0
            interior[k, l] = value / max(h[k], h_hat[l])
    cells = np.zeros((n + 1, m + 1))
    cells[1:, 1:] = interior[:n, :m]
    if fill_strips:
        cells[1:, 0] = (rows.times[:-1] < rows.times[i]) - cells[1:, 1:].dot(cols.steps)
        cells[0, 1:] = (cols.times[:-1] < cols.times[j]) - rows.steps.dot(cells[1:, 1:])
    return DensityGrid(rows, cols, cells, i, j, interior_only=not fill_strips)


def mass_profile(density, axis=0):
    """Marginal integral of ρ^{i,j} as a step function over cells

    axis 0 integrates over τ̂ and gives a function of τ, axis 1 the converse.

    :return: :class:`Marginal` with cell edges starting at -1
    """
    if axis == 0:
        return Marginal(density.row_edges, density.cells.dot(density.col_widths))
    return Marginal(density.col_edges, density.row_widths.dot(density.cells))


def marginal_error(density):
    """Largest deviation of both marginals from the indicators of [0, t_i) and [0, t̂_j)"""
    rows = mass_profile(density, 0).values[1:]
    cols = mass_profile(density, 1).values[1:]
    expected_rows = (density.rows.times[:-1] < density.t_i).astype(float)
    expected_cols = (density.cols.times[:-1] < density.t_hat_j).astype(float)
    return float(max(np.max(np.abs(rows - expected_rows)), np.max(np.abs(cols - expected_cols))))


def _split(edges, t):
    widths = np.diff(edges)
    below = np.clip(np.minimum(edges[1:], t) - edges[:-1], 0.0, widths)
    return below, widths - below


def concentration_profile(density, t):
    """Mass κ_{i,j}(t) of ρ^{i,j} on ([-1, t) x [t, T]) ∪ ([t, T] x [-1, t))"""
    rows_below, rows_above = _split(density.row_edges, t)
    cols_below, cols_above = _split(density.col_edges, t)
    return float(rows_below.dot(density.cells).dot(cols_above) + rows_above.dot(density.cells).dot(cols_below))


def concentration_bound(density, t):
    """Upper bound of κ_{i,j}(t) from the mass concentration estimate"""
    t_i, t_hat_j = density.t_i, density.t_hat_j
    return float(np.sqrt((t_i - t_hat_j) ** 2
                         + density.rows.mesh * min(t_i, max(t_i - t, 0.0))
                         + density.cols.mesh * min(t_hat_j, max(t_hat_j - t, 0.0))))


def abc_slack(a, b, c):
    """√((a - b)² + ac) - (a + b - 2ab/c), vectorized"""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    return np.sqrt((a - b) ** 2 + a * c) - (a + b - 2.0 * a * b / c)


def abc_inequality(a, b, c, tolerance=1e-12):
    """True iff a + b - 2ab/c <= √((a - b)² + ac) for positive a, b, c

    :raise ArgumentError: on non positive input
    """
    if not (np.all(np.asarray(a) > 0) and np.all(np.asarray(b) > 0) and np.all(np.asarray(c) > 0)):
        raise ArgumentError("abc inequality needs positive a, b, c, got %r, %r, %r" % (a, b, c))
    return bool(np.all(abc_slack(a, b, c) >= -tolerance))


def _pieces(partition, gfun):
    common = grid.refine(partition, gfun.partition)
    left = common.times[:-1]
    cells = np.concatenate(([0], partition.interval_indices(left) + 1))
    lengths = np.concatenate(([1.0], common.steps))
    values = np.vstack([gfun.left_value[None, :], gfun.body(left)])
    return cells, lengths, values


def cell_weights(rows, cols, gfun, space):
    """Matrix C with ∫∫ ρ ‖g̃(τ) - g̃(τ̂)‖ = Σ cells ⊙ C for every density on rows x cols

    :param gfun: :class:`eulercert.grid.ExtendedStep` of the same horizon
    """
    row_cells, row_lengths, row_values = _pieces(rows, gfun)
    col_cells, col_lengths, col_values = _pieces(cols, gfun)
    distances = space.norm(row_values[:, None, :] - col_values[None, :, :])
    weights = row_lengths[:, None] * col_lengths[None, :] * distances
    matrix = np.zeros((rows.size + 1, cols.size + 1))
    np.add.at(matrix, (row_cells[:, None], col_cells[None, :]), weights)
    return matrix


def weighted_double_integral(density, gfun, space):
    """Exact ∫∫ ρ^{i,j}(τ, τ̂) ‖g̃(τ) - g̃(τ̂)‖ for a step function g̃ on [-1, T]"""
    return float(np.sum(density.cells * cell_weights(density.rows, density.cols, gfun, space)))


def approximate_weighted_integral(density, func, left_value, space, resolution, variation=None):
    """Weighted double integral of a general function through a step sampling of it

    Sampling on a uniform partition with ``resolution`` intervals changes the integral by at most
    |π| Var(g̃) ((t_i ∨ 1) + (t̂_j ∨ 1)).

    :param func: callable on [0, T]
    :param variation: known variation of g̃ on [-1, T], estimated from the projection if None
    :return: (value, error bound)
    """
    partition = grid.uniform(density.rows.horizon, resolution)
    gfun = grid.ExtendedStep(left_value, grid.project_callable(func, partition))
    value = weighted_double_integral(density, gfun, space)
    if variation is None:
        variation = gfun.ess_var(space)
    error = partition.mesh * variation * (max(density.t_i, 1.0) + max(density.t_hat_j, 1.0))
    return value, float(error)


def total_mass(density):
    """∫∫ ρ^{i,j} over [-1, T]², between t_i ∨ t̂_j and t_i + t̂_j"""
    return density.total_mass()


def heatmap_rows(density):
    """Nonzero cells of a density as (tau_lo, tau_hi, tau_hat_lo, tau_hat_hi, density) rows"""
    return density.to_rows()
