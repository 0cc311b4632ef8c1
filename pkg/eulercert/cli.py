"""
Command line entry point: ``eulercert {verify,convergence,density,bv}``.
"""
import argparse
import logging
import sys

from . import harness
from .__version__ import __version__
from .exception import EulerCertError

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def build_parser():
    parser = argparse.ArgumentParser(prog='eulercert',
                                     description="Certify error bounds of implicit Euler schemes")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('command', choices=harness.COMMANDS, help="suite to run")
    parser.add_argument('--config', help="yaml configuration file, built-in defaults otherwise")
    parser.add_argument('--seed', type=int, help="root seed, overrides the configuration")
    parser.add_argument('--out', default='eulercert-out', help="output directory for report.json and csv tables")
    parser.add_argument('--jobs', type=int, help="number of worker processes, overrides the configuration")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="more logs, repeat for debug")
    parser.add_argument('-q', '--quiet', action='store_true', help="only log errors")
    return parser


def _log_level(args):
    if args.quiet:
        return logging.ERROR
    if args.verbose >= 2:
        return logging.DEBUG
    if args.verbose == 1:
        return logging.INFO
    return logging.WARNING


def main(argv=None):
    """Run one command and return the process exit code, 0 iff the report passed"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=_log_level(args), format=LOG_FORMAT)
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        logger.error("Seed must be an unsigned 64 bit integer, got %s", args.seed)
        return 2
    try:
        config = harness.load_config(args.config, overrides={'seed': args.seed, 'jobs': args.jobs})
        report = harness.run_command(args.command, config, out=args.out)
    except EulerCertError as ex:
        logger.error("%s failed: %s", args.command, ex)
        return 2
    if not report.passed:
        logger.error("%s failed, see %s", args.command, args.out)
        return 1
    logger.info("%s passed", args.command)
    return 0


if __name__ == '__main__':
    sys.exit(main())
