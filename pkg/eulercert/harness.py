"""
Certification sweeps behind the command line: seeded instance generation, bound checks,
convergence studies, density exports and the bounded variation suite.

Every command returns a :class:`RunReport` that is written as ``report.json`` plus csv tables.
"""
import collections
import concurrent.futures
import copy
import logging
import os

import numpy as np
import yaml

from . import bounds, bv, density, grid, util
from .euler import Discretization, discretize, euler_solution, solve_scheme
from .exception import ConfigError, EulerCertError, StepSizeError
from .operators import GraphPair, from_config, make_linear, make_sign_graph
from .space import NormedSpace

logger = logging.getLogger(__name__)

COMMANDS = ('verify', 'convergence', 'density', 'bv')

DEFAULT_CONFIG = {
    'seed': 20240601,
    'jobs': 1,
    'verify': {
        'instances': 100,
        'max_intervals': 32,
        'horizon': [0.5, 2.0],
        'dimensions': [1, 2, 3],
        'norms': [1, 2, 'inf'],
        'operators': ['scalar', 'diagonal', 'sign'],
        # declared type of the operators, the sign graph keeps the non negative ones
        'omegas': [-1.0, 0.0, 1.0],
        'forcing_jumps': 8,
        'continuous_resolution': 50,
        'pairs': 3,
        'g_choices': 2,
        # partitions are drawn with mesh * omega at most this value
        'omega_cap': 0.9,
        'bounds': ['main', 'implicit', 'kobayashi', 'continuous', 'base_case', 'equidistant', 'step', 'distance'],
        'library': True,
        'library_level': 10,
        'modulus_points': 8,
    },
    'convergence': {
        'k_min': 4,
        'k_max': 10,
        'reference_offset': 2,
        'sqrt_slope': 0.5,
        'slope_tolerance': 0.02,
        'problems': [
            {'name': 'sign', 'operator': {'kind': 'sign'}, 'initial': 0.3, 'horizon': 2.0,
             'forcing': {'times': [0.0, 1.0, 2.0], 'values': [1.0, -1.0]}, 'g': 'forcing',
             'min_error_slope': 0.5},
            {'name': 'linear', 'operator': {'kind': 'linear', 'scalar': 1.0}, 'initial': 1.0, 'horizon': 1.0,
             'forcing': {'times': [0.0, 1.0], 'values': [0.0]}, 'g': 'forcing', 'min_error_slope': 0.9},
        ],
    },
    'density': {
        'pairs': 50,
        'max_intervals': 32,
        'nodes_per_pair': 3,
        'heatmap': [16, 24],
        'concentration_points': 50,
        'abc_samples': 100000,
        'abc_range': 10.0,
        'tolerance': 1e-10,
    },
    'bv': {
        'shift_cases': 1000,
        'jordan_cases': 200,
        'max_pieces': 12,
        'c1_samples': 10000,
        'c1_tolerance': 1e-4,
        'tolerance': 1e-12,
    },
}


def _merge(base, override, path=''):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(merged.get(key), dict):
            if not isinstance(value, dict):
                raise ConfigError("Section %s%s must be a mapping" % (path, key))
            merged[key] = _merge(merged[key], value, path='%s%s.' % (path, key))
        else:
            merged[key] = value
    return merged


def load_config(path=None, overrides=None):
    """Read a yaml configuration and complete it with :data:`DEFAULT_CONFIG`

    :param path: yaml file, defaults only when None
    :param overrides: dict applied last (command line flags)
    :return: dict
    :raise ConfigError: if the file cannot be read, is not a mapping or has unknown sections

    Usage::

        >>> from eulercert.harness import load_config
        >>> load_config(overrides={'seed': 7})['seed']
        7
    """
    content = {}
    if path is not None:
        try:
            with open(path) as config_file:
                content = yaml.safe_load(config_file) or {}
        except (IOError, OSError, yaml.YAMLError) as ex:
            raise ConfigError("Cannot read configuration %s" % path, original_exception=ex)
        if not isinstance(content, dict):
            raise ConfigError("Configuration %s must be a mapping, got %s" % (path, type(content).__name__))
    unknown = set(content) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError("Unknown configuration sections: %s" % ', '.join(sorted(unknown)))
    config = _merge(DEFAULT_CONFIG, content)
    for key, value in (overrides or {}).items():
        if value is not None:
            config[key] = value
    return config


class RunReport(object):
    """Outcome of one command

    :ivar command: command name
    :ivar seed: root seed of the run
    :ivar sections: list of summary dicts, each with a ``passed`` entry
    :ivar tables: dict mapping csv file names to (header, rows)
    :ivar failures: dict mapping instance ids to replay data
    :ivar checks: dict of run level boolean checks
    """
    def __init__(self, command, seed):
        self.command = command
        self.seed = seed
        self.sections = []
        self.tables = collections.OrderedDict()
        self.failures = collections.OrderedDict()
        self.checks = collections.OrderedDict()

    def __repr__(self):
        return '%s(%s, sections=%s, passed=%s)' % (self.__class__.__name__, self.command, len(self.sections),
                                                   self.passed)

    @property
    def passed(self):
        return all(section.get('passed', False) for section in self.sections) and all(self.checks.values())

    def add_section(self, section):
        self.sections.append(section)
        return section

    def add_table(self, name, header, rows):
        self.tables[name] = (tuple(header), list(rows))

    def add_failure(self, identifier, content):
        self.failures[str(identifier)] = content

    def summary(self):
        return {'command': self.command, 'seed': self.seed, 'passed': self.passed, 'checks': dict(self.checks),
                'sections': self.sections, 'failures': sorted(self.failures)}

    def write(self, out):
        """Write report.json, the csv tables and failures/<id>.json under out

        :return: list of paths written
        """
        paths = [util.write_json(os.path.join(out, 'report.json'), self.summary())]
        for name, (header, rows) in self.tables.items():
            paths.append(util.write_csv(os.path.join(out, name), header, rows))
        for identifier, content in self.failures.items():
            paths.append(util.write_json(os.path.join(out, 'failures', '%s.json' % identifier), content))
        logger.info("Wrote %s files for %s under %s", len(paths), self.command, out)
        return paths


OPERATOR_KINDS = ('scalar', 'diagonal', 'matrix', 'sign')

InstanceSpec = collections.namedtuple('InstanceSpec',
                                      'identifier seed operator dimension p horizon sizes omega omega_cap '
                                      'forcing_jumps resolution bounds pairs g_choices equilibrium')


def fewest_intervals(horizon, omega, omega_cap, max_intervals):
    """Smallest N for which the uniform partition of [0, horizon] keeps mesh * omega below omega_cap"""
    if omega <= 0:
        return 1
    return min(int(np.floor(horizon * omega / omega_cap)) + 1, int(max_intervals))


def generate_instances(config, seed):
    """Seeded instance descriptions of the verify suite

    Linear operators get a declared omega drawn from ``omegas``, the sign graph only its non negative
    entries. Partition sizes start at :func:`fewest_intervals`.

    :param config: the ``verify`` section
    :return: list of :class:`InstanceSpec`, ordered by identifier
    :raise ConfigError: on an unknown operator kind
    """
    unknown = set(config['operators']) - set(OPERATOR_KINDS)
    if unknown:
        raise ConfigError("Unknown operator kinds %s, expected some of %s"
                          % (', '.join(sorted(unknown)), ', '.join(OPERATOR_KINDS)))
    rng = util.seeded_rng(seed, 0)
    specs = []
    low, high = config['horizon']
    max_intervals = int(config['max_intervals'])
    omega_cap = float(config['omega_cap'])
    for identifier in range(int(config['instances'])):
        kind = config['operators'][identifier % len(config['operators'])]
        dimension = 1 if kind == 'scalar' and identifier % 2 == 0 else int(rng.choice(config['dimensions']))
        p = config['norms'][int(rng.integers(len(config['norms'])))]
        horizon = float(rng.uniform(low, high))
        omegas = [float(w) for w in config['omegas'] if kind != 'sign' or w >= 0] or [0.0]
        omega = omegas[int(rng.integers(len(omegas)))]
        fewest = fewest_intervals(horizon, omega, omega_cap, max_intervals)
        sizes = tuple(int(n) for n in rng.integers(fewest, max_intervals + 1, size=2))
        specs.append(InstanceSpec(identifier, int(rng.integers(2 ** 32)), kind, dimension, p, horizon, sizes, omega,
                                  omega_cap, int(config['forcing_jumps']), int(config['continuous_resolution']),
                                  tuple(config['bounds']), int(config['pairs']), int(config['g_choices']), False))
    return specs


def equilibrium_instance(identifier, seed, dimension=1, p=2, sizes=(8, 12), horizon=1.0, bounds_=None):
    """Instance whose schemes both stay at a graph point, so every left hand side is 0"""
    section = DEFAULT_CONFIG['verify']
    return InstanceSpec(identifier, seed, 'sign', dimension, p, horizon, tuple(sizes), 0.0, section['omega_cap'],
                        section['forcing_jumps'], section['continuous_resolution'],
                        tuple(bounds_ or section['bounds']), 1, 1, True)


def build_operator(spec, rng):
    """Operator of an instance, accretive of the declared type ``spec.omega``"""
    space = NormedSpace(spec.dimension, spec.p)
    if spec.operator == 'sign':
        return make_sign_graph(space, weight=float(rng.uniform(0.2, 2.0)), omega=spec.omega)
    size = spec.dimension
    if spec.operator == 'scalar':
        matrix = (float(rng.uniform(0.05, 2.0)) - spec.omega) * np.eye(size)
    elif spec.operator == 'diagonal':
        matrix = np.diag(rng.uniform(0.05, 3.0, size) - spec.omega)
    else:
        matrix = rng.uniform(-1.0, 1.0, (size, size))
        # μ(-(m + s I)) = μ(-m) - s
        matrix = matrix + (space.log_norm(-matrix) - spec.omega + float(rng.uniform(0.05, 1.0))) * np.eye(size)
    return make_linear(matrix, space, omega=spec.omega)


def random_forcing(horizon, dimension, rng, max_jumps=8, scale=2.0):
    """Step function on [0, horizon] with values in [-scale, scale] and at most max_jumps jumps"""
    partition = grid.random_partition(horizon, int(rng.integers(1, max_jumps + 2)), rng)
    return grid.StepFunction(partition, scale * (2.0 * rng.random((partition.size, dimension)) - 1.0))


def bounded_partition(horizon, size, limit, rng, attempts=20):
    """Random partition with mesh at most limit, the uniform one when no draw qualifies"""
    for _ in range(attempts):
        partition = grid.random_partition(horizon, size, rng)
        if partition.mesh <= limit:
            return partition
    logger.debug("No random partition of size %s below mesh %r, using the uniform one", size, limit)
    return grid.uniform(horizon, size)


def _instance_pairs(operator, spec, rng):
    space = operator.space
    pairs = [operator.graph_pair(space.zero())]
    while len(pairs) < max(spec.pairs, 1):
        pairs.append(operator.graph_pair(space.random_vectors(rng, 1)[0], rng=rng))
    return pairs


def _instance_gs(forcing, pair, spec, rng):
    candidates = [forcing, random_forcing(spec.horizon, pair.v.size, rng, spec.forcing_jumps, scale=1.0),
                  grid.StepFunction.constant(forcing.partition, pair.v)]
    return candidates[:max(spec.g_choices, 1)]


def _record(results, report, label):
    summary = report.summary()
    summary['label'] = label
    results.append(summary)


def run_instance(spec):
    """Run every selected bound on one instance

    Step size violations are reported in the result instead of raised.

    :param spec: :class:`InstanceSpec`
    :return: dict with ``identifier``, ``passed``, ``bounds`` and, on failure, ``error`` or ``replay``
    """
    rng = util.seeded_rng(spec.seed, spec.identifier)
    limit = spec.omega_cap / spec.omega if spec.omega > 0 else np.inf
    rows = bounded_partition(spec.horizon, spec.sizes[0], limit, rng)
    cols = bounded_partition(spec.horizon, spec.sizes[1], limit, rng)
    mesh = max(rows.mesh, cols.mesh)
    result = {'identifier': spec.identifier, 'operator': spec.operator, 'dimension': spec.dimension,
              'p': str(spec.p), 'horizon': spec.horizon, 'sizes': list(spec.sizes), 'bounds': []}
    try:
        operator = build_operator(spec, rng)
        result['omega'] = operator.omega
        space = operator.space
        if spec.equilibrium:
            pair = operator.graph_pair(space.random_vectors(rng, 1)[0])
            forcing = forcing_hat = grid.StepFunction.constant(grid.uniform(spec.horizon, 1), pair.v)
            first = solve_scheme(operator, discretize(rows, forcing, pair.u))
            second = solve_scheme(operator, discretize(cols, forcing_hat, pair.u))
            pairs, gs = [pair], [forcing]
        else:
            forcing = random_forcing(spec.horizon, spec.dimension, rng, spec.forcing_jumps)
            forcing_hat = random_forcing(spec.horizon, spec.dimension, rng, spec.forcing_jumps)
            first = solve_scheme(operator, discretize(rows, forcing, space.random_vectors(rng, 1)[0]))
            second = solve_scheme(operator, discretize(cols, forcing_hat, space.random_vectors(rng, 1)[0]))
            pairs = _instance_pairs(operator, spec, rng)
            gs = None
        solutions = bounds.SolutionPair(first, second, operator.omega)
        results = result['bounds']
        for p_index, pair in enumerate(pairs):
            g_choices = gs or _instance_gs(forcing, pair, spec, rng)
            for g_index, g in enumerate(g_choices):
                label = 'pair%s_g%s' % (p_index, g_index)
                if 'main' in spec.bounds:
                    _record(results, bounds.main_bound(solutions, pair, g), label)
                if 'implicit' in spec.bounds:
                    _record(results, bounds.implicit_bound(solutions, pair, g), label)
                if 'distance' in spec.bounds:
                    _record(results, bounds.distance_bound(solutions, pair, g), label)
                if 'continuous' in spec.bounds:
                    _record(results, bounds.continuous_bound(solutions, pair, g, resolution=spec.resolution), label)
            label = 'pair%s' % p_index
            if 'kobayashi' in spec.bounds and mesh * operator.omega <= bounds.KOBAYASHI_LIMIT:
                _record(results, bounds.kobayashi_bound(solutions, pair), label)
            if 'base_case' in spec.bounds:
                _record(results, bounds.base_case_bound(first, pair, operator.omega), label + '_first')
                _record(results, bounds.base_case_bound(second, pair, operator.omega), label + '_second')
            if 'equidistant' in spec.bounds:
                common = grid.uniform(spec.horizon, spec.sizes[0])
                twin = bounds.SolutionPair(solve_scheme(operator, discretize(common, forcing, first.initial)),
                                           solve_scheme(operator, discretize(common, forcing_hat, second.initial)),
                                           operator.omega)
                _record(results, bounds.equidistant_bound(twin, pair), label)
        if 'step' in spec.bounds:
            _record(results, bounds.step_report(solutions), 'steps')
            _record(results, bounds.step_report(solutions, exponential=True), 'steps')
    except StepSizeError as ex:
        logger.warning("Instance %s skipped, step-size condition: %s", spec.identifier, ex)
        result['error'] = 'step-size condition: %s' % ex
        result['passed'] = False
        return result
    except EulerCertError as ex:
        logger.warning("Instance %s failed: %s", spec.identifier, ex)
        result['error'] = str(ex)
        result['passed'] = False
        return result
    result['min_slack'] = min(entry['min_slack'] for entry in result['bounds']) if result['bounds'] else None
    result['passed'] = all(entry['passed'] for entry in result['bounds'])
    if not result['passed']:
        result['replay'] = {'spec': spec._asdict(), 'first': first.to_rows(), 'second': second.to_rows(),
                            'forcing': forcing.to_rows(), 'forcing_hat': forcing_hat.to_rows()}
    logger.debug("Instance %s finished, min slack %r", spec.identifier, result['min_slack'])
    return result


def run_instances(specs, jobs=1):
    """Run instances, in a process pool when jobs > 1, results ordered like specs"""
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(run_instance, specs))
    return [run_instance(spec) for spec in specs]


def _library_problems():
    """Operators, forcings and initial values with known value sets used by the wellposedness checks"""
    two = grid.Partition([0.0, 1.0, 2.0])
    one = grid.Partition([0.0, 1.0])
    return [
        ('sign', make_sign_graph(), grid.StepFunction(two, [1.0, -1.0]), 0.3,
         grid.StepFunction(two, [0.5, 0.0]), -0.2),
        ('linear', make_linear(1.0), grid.StepFunction(one, [0.0]), 1.0, grid.StepFunction(one, [0.5]), 0.4),
        ('linear_inf', make_linear([[2.0, -0.5], [0.3, 1.0]], NormedSpace(2, 'inf')),
         grid.StepFunction(two, [[1.0, 0.0], [0.0, -1.0]]), [0.5, -0.5],
         grid.StepFunction(two, [[0.0, 0.5], [0.5, 0.0]]), [0.2, 0.1]),
    ]


def run_library_checks(level, points, seed):
    """Wellposedness, Lipschitz and homogeneous stability checks at dyadic level ``level``

    Every Euler solution is refined from level ``level - 4`` so that its Cauchy gaps can be
    checked for decrease.

    :return: tuple (list of (name, :class:`eulercert.bounds.BoundReport`),
        list of (name, role, :class:`eulercert.euler.CauchyReport`))
    """
    rng = util.seeded_rng(seed, 1)
    k_min = max(int(level) - 4, 0)
    reports, cauchy = [], []
    for name, operator, forcing, initial, forcing_hat, initial_hat in _library_problems():
        horizon = forcing.partition.horizon
        zero = grid.StepFunction.constant(grid.Partition([0.0, horizon]), operator.space.zero())
        limits = {'forcing': euler_solution(operator, forcing, initial, level, k_min=k_min),
                  'forcing_hat': euler_solution(operator, forcing_hat, initial_hat, level, k_min=k_min),
                  'homogeneous': euler_solution(operator, zero, initial, level, k_min=k_min),
                  'homogeneous_hat': euler_solution(operator, zero, initial_hat, level, k_min=k_min)}
        limit = limits['forcing']
        times = limit.solution.partition.times
        picks = rng.integers(0, times.size, size=(2, int(points)))
        pair = operator.graph_pair(operator.space.vec(initial_hat))
        reports.append((name, bounds.wellposedness_modulus(limit, pair, operator.omega, times[picks[0]],
                                                           times[picks[1]])))
        reports.append((name, bounds.wellposedness_stability(limit, limits['forcing_hat'], operator.omega)))
        reports.append((name, bounds.lipschitz_certificate(limit, operator)))
        reports.append((name, bounds.crandall_liggett_check(limits['homogeneous'], limits['homogeneous_hat'],
                                                            operator)))
        cauchy.extend((name, role, limits[role].report) for role in sorted(limits))
    return reports, cauchy


def cmd_verify(config):
    """Certify every selected bound over the seeded instance suite

    :param config: full configuration, see :func:`load_config`
    :return: :class:`RunReport`
    """
    section = config['verify']
    seed = config['seed']
    report = RunReport('verify', seed)
    specs = generate_instances(section, seed)
    logger.info("Running %s instances with %s jobs", len(specs), config['jobs'])
    results = run_instances(specs, int(config['jobs']))
    rows = []
    for result in results:
        replay = result.pop('replay', None)
        if not result['passed']:
            report.add_failure(result['identifier'], dict(result, replay=replay))
        for entry in result['bounds']:
            rows.append((result['identifier'], entry['name'], entry['label'], entry['evaluations'],
                         entry['sup_lhs'], entry['sup_rhs'], entry['min_slack'], entry['passed']))
        report.add_section(dict(result, bounds=len(result['bounds'])))
    report.add_table('verify_bounds.csv', ('instance', 'bound', 'label', 'evaluations', 'sup_lhs', 'sup_rhs',
                                           'min_slack', 'passed'), rows)
    slacks = [result['min_slack'] for result in results if result.get('min_slack') is not None]
    report.checks['min_slack_ok'] = bool(slacks) and min(slacks) >= -util.SLACK_TOLERANCE

    if section['library']:
        library_rows, cauchy_rows, decreasing = [], [], []
        library, cauchy = run_library_checks(int(section['library_level']), section['modulus_points'], seed)
        for name, bound_report in library:
            summary = dict(bound_report.summary(), problem=name)
            report.add_section(summary)
            library_rows.append((name, bound_report.name, bound_report.sup_lhs, bound_report.sup_rhs,
                                 bound_report.min_slack, bound_report.passed))
        for name, role, cauchy_report in cauchy:
            if not cauchy_report.decreasing:
                logger.warning("Cauchy gaps of %s (%s) do not decrease", name, role)
            decreasing.append(cauchy_report.decreasing)
            for level, mesh, gap, bound in zip(cauchy_report.levels[1:], cauchy_report.meshes[1:],
                                               cauchy_report.gaps, cauchy_report.bounds):
                cauchy_rows.append((name, role, level, mesh, gap, bound))
        report.checks['cauchy_gaps_decrease'] = all(decreasing)
        report.add_table('verify_library.csv', ('problem', 'bound', 'sup_lhs', 'sup_rhs', 'min_slack', 'passed'),
                         library_rows)
        report.add_table('verify_cauchy.csv', ('problem', 'role', 'level', 'mesh', 'gap', 'bound'), cauchy_rows)
    logger.info("Verify finished, passed=%s", report.passed)
    return report


def _step_from_config(config):
    return grid.StepFunction(grid.Partition(config['times']), config['values'])


def convergence_study(problem, k_min, k_max, reference_offset=2):
    """Errors against a fine reference and distance bounds on dyadic levels k_min..k_max

    :param problem: dict with ``operator``, ``initial``, ``forcing`` (times, values), optional ``pair``
        (u, v) and ``g`` ('forcing' or 'zero')
    :return: dict of per level lists and fitted slopes
    """
    if not 0 <= k_min < k_max <= 12:
        raise ConfigError("Convergence levels need 0 <= k_min < k_max <= 12, got %s, %s" % (k_min, k_max))
    forcing = _step_from_config(problem['forcing'])
    horizon = forcing.partition.horizon
    initial = problem['initial']
    dimension = np.atleast_1d(np.asarray(initial, dtype=float)).size
    operator = from_config(problem['operator'], NormedSpace(dimension, problem.get('p', 2)))
    if 'pair' in problem:
        pair = GraphPair(operator.space.vec(problem['pair']['u']), operator.space.vec(problem['pair']['v']))
    else:
        pair = operator.graph_pair(initial)
    g = forcing if problem.get('g', 'forcing') == 'forcing' \
        else grid.StepFunction.constant(forcing.partition, operator.space.zero())
    variation = bounds.BoundInputs(pair, g).variation(operator.space)

    fine = grid.dyadic(horizon, k_max + reference_offset)
    reference = solve_scheme(operator, Discretization(fine, grid.project(forcing, fine), initial))
    levels = list(range(int(k_min), int(k_max) + 1))
    meshes, errors, bound_values, sqrt_terms = [], [], [], []
    for level in levels:
        partition = grid.dyadic(horizon, level)
        solution = solve_scheme(operator, Discretization(partition, grid.project(forcing, partition), initial))
        solutions = bounds.SolutionPair(solution, reference, operator.omega)
        # rate term of two schemes sharing this level's mesh
        mesh_sum = 2.0 * partition.mesh
        meshes.append(partition.mesh)
        errors.append(solution.trajectory.sup_distance(reference.trajectory, operator.space))
        bound_values.append(bounds.distance_rhs(solutions, pair, g))
        sqrt_terms.append(float(bounds.growth(solutions.mesh, operator.omega, 2.0 * horizon)
                                * np.sqrt(mesh_sum ** 2 + mesh_sum * horizon) * variation))
    return {'name': problem.get('name', 'problem'), 'levels': levels, 'meshes': meshes, 'errors': errors,
            'bounds': bound_values, 'sqrt_terms': sqrt_terms, 'variation': variation,
            'error_slope': util.log_log_slope(meshes, errors),
            'bound_slope': util.log_log_slope(meshes, bound_values),
            'sqrt_slope': util.log_log_slope(meshes, sqrt_terms),
            'bounded': all(error <= bound * (1 + 1e-9) + 1e-12 for error, bound in zip(errors, bound_values))}


def cmd_convergence(config):
    """Empirical convergence rates against the O(√|π|) distance bound

    :return: :class:`RunReport`
    """
    section = config['convergence']
    report = RunReport('convergence', config['seed'])
    rows = []
    for problem in section['problems']:
        study = convergence_study(problem, int(section['k_min']), int(section['k_max']),
                                  int(section['reference_offset']))
        checks = {'bounded': study['bounded']}
        if study['variation'] > 0:
            checks['sqrt_slope_ok'] = abs(study['sqrt_slope'] - section['sqrt_slope']) <= section['slope_tolerance']
        if 'min_error_slope' in problem:
            checks['error_slope_ok'] = study['error_slope'] >= problem['min_error_slope']
        for level, mesh, error, bound, sqrt_term in zip(study['levels'], study['meshes'], study['errors'],
                                                        study['bounds'], study['sqrt_terms']):
            rows.append((study['name'], level, mesh, error, bound, sqrt_term))
        logger.info("Problem %s: error slope %.3f, sqrt slope %.3f", study['name'], study['error_slope'],
                    study['sqrt_slope'])
        report.add_section(dict(study, checks=checks, passed=all(checks.values())))
    report.add_table('convergence.csv', ('problem', 'level', 'mesh', 'error', 'bound', 'sqrt_term'), rows)
    return report


def check_density(rows, cols, i, j, points=50, tolerance=1e-10):
    """Forward against direct densities, marginals, total mass and concentration at node (i, j)

    :return: dict of measured errors and checks
    """
    forward = density.density_forward(rows, cols, i, j)
    direct = density.density_direct(rows, cols, i, j)
    oracle_error = float(np.max(np.abs(forward.interior - direct.interior)))
    marginal = density.marginal_error(forward)
    mass = density.total_mass(forward)
    low, high = max(forward.t_i, forward.t_hat_j), forward.t_i + forward.t_hat_j
    times = np.linspace(0.0, rows.horizon, int(points))
    kappa_gap = max(density.concentration_profile(forward, t) - density.concentration_bound(forward, t)
                    for t in times)
    checks = {'oracle': oracle_error <= tolerance, 'marginals': marginal <= tolerance,
              'mass': low - tolerance <= mass <= high + tolerance, 'concentration': kappa_gap <= tolerance}
    return {'i': i, 'j': j, 'oracle_error': oracle_error, 'marginal_error': marginal, 'total_mass': mass,
            'kappa_gap': float(kappa_gap), 'checks': checks, 'passed': all(checks.values())}


def abc_sweep(rng, samples, upper=10.0):
    """Smallest slack of the abc inequality over random triples in (0, upper]³"""
    triples = upper * (1.0 - rng.random((3, int(samples))))
    return float(np.min(density.abc_slack(*triples)))


def cmd_density(config):
    """Density oracle, mass and concentration checks, heatmap export and abc sweep

    :return: :class:`RunReport`
    """
    section = config['density']
    seed = config['seed']
    report = RunReport('density', seed)
    rng = util.seeded_rng(seed, 2)
    tolerance = section['tolerance']
    for pair_index in range(int(section['pairs'])):
        horizon = float(rng.uniform(0.5, 3.0))
        n, m = (int(x) for x in rng.integers(1, int(section['max_intervals']) + 1, size=2))
        rows, cols = grid.random_partition(horizon, n, rng), grid.random_partition(horizon, m, rng)
        nodes = [(n, m)] + [(int(rng.integers(n + 1)), int(rng.integers(m + 1)))
                            for _ in range(int(section['nodes_per_pair']) - 1)]
        for i, j in nodes:
            result = check_density(rows, cols, i, j, section['concentration_points'], tolerance)
            result.update(pair=pair_index, sizes=[n, m], horizon=horizon)
            report.add_section(result)

    n, m = section['heatmap']
    rows, cols = grid.random_partition(1.0, int(n), rng), grid.random_partition(1.0, int(m), rng)
    heatmap = density.density_forward(rows, cols, rows.size, cols.size)
    report.add_table('density_heatmap.csv', ('tau_lo', 'tau_hi', 'tau_hat_lo', 'tau_hat_hi', 'density'),
                     density.heatmap_rows(heatmap))
    row_profile, col_profile = density.mass_profile(heatmap, 0), density.mass_profile(heatmap, 1)
    report.add_table('density_mass.csv', ('axis', 'lo', 'hi', 'mass'),
                     [('tau', row_profile.edges[k], row_profile.edges[k + 1], value)
                      for k, value in enumerate(row_profile.values)]
                     + [('tau_hat', col_profile.edges[k], col_profile.edges[k + 1], value)
                        for k, value in enumerate(col_profile.values)])
    times = np.linspace(0.0, 1.0, int(section['concentration_points']))
    report.add_table('density_kappa.csv', ('t', 'kappa', 'bound'),
                     [(t, density.concentration_profile(heatmap, t), density.concentration_bound(heatmap, t))
                      for t in times])

    abc = abc_sweep(rng, section['abc_samples'], section['abc_range'])
    report.add_section({'name': 'abc', 'samples': int(section['abc_samples']), 'min_slack': abc,
                        'passed': abc >= -1e-12})
    logger.info("Density finished, passed=%s", report.passed)
    return report


def random_bv_step(rng, max_pieces=12, dimension=1):
    """Random step function on a random interval [a, b]"""
    a = float(rng.uniform(-1.0, 1.0))
    length = float(rng.uniform(0.2, 3.0))
    partition = grid.random_partition(length, int(rng.integers(1, max_pieces + 1)), rng)
    values = rng.normal(size=(partition.size, dimension))
    return bv.BVStep(grid.StepFunction(partition, values), end_value=rng.normal(size=dimension), start=a)


def indicator(a, b, start, lower=0.0, upper=1.0):
    """1 on [start, b], 0 on [a, start) as a :class:`eulercert.bv.BVStep`"""
    return bv.BVStep.from_values([a, start, b], [lower, upper], end_value=upper)


def cmd_bv(config):
    """Shift estimate, norm equivalence, Jordan decomposition and C¹ variation suites

    :return: :class:`RunReport`
    """
    section = config['bv']
    seed = config['seed']
    tolerance = section['tolerance']
    report = RunReport('bv', seed)
    rng = util.seeded_rng(seed, 3)

    worst_shift, worst_order, worst_triangle, sandwich_ok = -float('inf'), -float('inf'), -float('inf'), True
    for _ in range(int(section['shift_cases'])):
        f = random_bv_step(rng, section['max_pieces'], dimension=int(rng.integers(1, 3)))
        h = float(rng.uniform(0.0, 1.0)) * (f.b - f.a)
        if h > 0:
            lhs, rhs = bv.shift_estimate_check(f, h)
            worst_shift = max(worst_shift, (lhs - rhs) / max(1.0, rhs))
        worst_order = max(worst_order, bv.ess_var(f) - bv.pointwise_var(f))
        other = grid.random_partition(f.step.partition.horizon, int(rng.integers(1, section['max_pieces'] + 1)), rng)
        g = bv.BVStep(grid.StepFunction(other, rng.normal(size=(other.size, f.step.dimension))),
                      end_value=rng.normal(size=f.step.dimension), start=f.a)
        worst_triangle = max(worst_triangle, bv.pointwise_var(f + g) - bv.pointwise_var(f) - bv.pointwise_var(g))
        try:
            bv.norm_equivalence_check(f)
        except bv.BVError as ex:
            logger.warning("Norm equivalence failed for %r: %s", f, ex)
            sandwich_ok = False
    report.add_section({'name': 'shift_estimate', 'cases': int(section['shift_cases']),
                        'max_excess': worst_shift, 'passed': worst_shift <= tolerance})
    report.add_section({'name': 'variation_order', 'max_excess': worst_order, 'passed': worst_order <= tolerance})
    report.add_section({'name': 'triangle', 'max_excess': worst_triangle, 'passed': worst_triangle <= 1e-9})
    report.add_section({'name': 'norm_equivalence', 'passed': sandwich_ok})

    lhs, rhs = bv.shift_estimate_check(indicator(0.0, 1.0, 0.5), 0.25)
    report.add_section({'name': 'shift_equality', 'lhs': lhs, 'rhs': rhs,
                        'passed': abs(lhs - 0.25) <= tolerance and abs(rhs - 0.25) <= tolerance})

    worst_jordan, jordan_ok = 0.0, True
    cases = [bv.SampledC1.from_function(lambda t: np.abs(t - 0.5), lambda t: np.sign(t - 0.5), 0.0, 1.0, 101)]
    for _ in range(int(section['jordan_cases'])):
        f = random_bv_step(rng, section['max_pieces'])
        cases.append(f.with_point(float(rng.uniform(f.a, f.b)), rng.normal()))
    for f in cases:
        try:
            jordan = bv.jordan_decompose(f)
        except bv.BVError as ex:
            logger.warning("Jordan decomposition failed for %r: %s", f, ex)
            jordan_ok = False
            continue
        worst_jordan = max(worst_jordan, float(np.max(np.abs(jordan.plus - jordan.minus - jordan.values))))
    report.add_section({'name': 'jordan', 'cases': len(cases), 'max_reconstruction_error': worst_jordan,
                        'passed': jordan_ok and worst_jordan <= tolerance})

    sine = bv.SampledC1.from_function(lambda t: np.sin(2 * np.pi * t), lambda t: 2 * np.pi * np.cos(2 * np.pi * t),
                                      0.0, 1.0, int(section['c1_samples']))
    var_estimate, integral = bv.c1_var_check(sine)
    report.add_section({'name': 'c1_variation', 'var_estimate': var_estimate, 'integral_estimate': integral,
                        'passed': abs(var_estimate - 4.0) <= section['c1_tolerance']
                        and abs(integral - 4.0) <= section['c1_tolerance']})
    logger.info("BV suite finished, passed=%s", report.passed)
    return report


COMMAND_FUNCTIONS = {'verify': cmd_verify, 'convergence': cmd_convergence, 'density': cmd_density, 'bv': cmd_bv}


def run_command(command, config, out=None):
    """Run a command and write its report when out is given

    :return: :class:`RunReport`
    :raise ConfigError: on an unknown command
    """
    if command not in COMMAND_FUNCTIONS:
        raise ConfigError("Unknown command %r, expected one of %s" % (command, ', '.join(COMMANDS)))
    report = COMMAND_FUNCTIONS[command](config)
    if out is not None:
        report.write(out)
    return report
