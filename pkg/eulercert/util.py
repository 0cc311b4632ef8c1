"""
Useful functions used by the rest of eulercert.
"""
import csv
import json
import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

# tolerance below which a bound slack is still considered satisfied
SLACK_TOLERANCE = 1e-9


def positive_part(x):
    """Return max(x, 0), elementwise for arrays"""
    return np.maximum(x, 0.0)


def seeded_rng(seed, *keys):
    """Build a reproducible random generator from a root seed and integer keys

    Two calls with the same seed and keys always produce the same stream,
    whatever the process or worker computing it.

    :param seed: root seed (unsigned 64 bit integer)
    :param keys: extra integers identifying the consumer (instance number, ...)
    :return: :class:`numpy.random.Generator`
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed)] + [int(key) for key in keys]))


def log_log_slope(x, y):
    """Least squares slope of log(y) against log(x)

    Pairs with non-positive entries are ignored; nan is returned when less than two pairs remain.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    mask = (x > 0) & (y > 0)
    if np.count_nonzero(mask) < 2:
        return float('nan')
    return float(np.polyfit(np.log(x[mask]), np.log(y[mask]), 1)[0])


def to_builtin(value):
    """Recursively convert numpy scalars and arrays into json serializable python objects"""
    if isinstance(value, dict):
        return {str(key): to_builtin(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # json has no representation for those
        if np.isnan(value) or np.isinf(value):
            return repr(value)
        return value
    return value


def write_json(path, content):
    """Write content as stable, sorted json

    :param path: destination file, parent directories are created if needed
    :param content: json serializable content (numpy values accepted)
    :return: the path written
    """
    _make_parent(path)
    with open(path, 'w') as json_file:
        json_file.write(json.dumps(to_builtin(content), sort_keys=True, indent=2))
        json_file.write('\n')
    logger.debug("Wrote %s", path)
    return path


def write_csv(path, header, rows):
    """Write one table in csv format

    :param path: destination file, parent directories are created if needed
    :param header: column names
    :param rows: iterable of sequences, same length as header
    :return: the path written
    """
    _make_parent(path)
    with open(path, 'w', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])
    logger.debug("Wrote %s", path)
    return path


def _format_cell(cell):
    if isinstance(cell, (float, np.floating)):
        return repr(float(cell))
    if isinstance(cell, np.integer):
        return int(cell)
    return cell


def _make_parent(path):
    parent = os.path.dirname(str(path))
    if parent and not os.path.isdir(parent):
        os.makedirs(parent)
