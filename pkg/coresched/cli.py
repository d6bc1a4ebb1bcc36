"""Command line interface for simulating and verifying task bundles.

Exit codes: 0 for success or a learnable verdict, 1 for a verdict that is
not learnable, 2 for usage and configuration problems, 3 for invalid
scenarios.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import argparse
import csv
import dataclasses
import io
import json
import logging
import os
import sys

from .errors import BudgetViolation
from .errors import ConfigurationError
from .errors import OracleLimitError
from .errors import ScenarioError
from .errors import UsageError
from .errors import ValidationError
from .engine import SimParams
from .engine import run
from .learnability import VerifyParams
from .learnability import frontier
from .learnability import verify
from .learnability import verify_stochastic
from .metrics import average_error
from .metrics import data_throughput
from .metrics import thread_throughput
from .oracle import oracle_max_kappa
from .scenario import BUILTIN_SCENARIOS
from .scenario import CSV
from .scenario import FORMATS
from .scenario import builtin_scenario
from .scenario import parse_scenario
from .scenario import serialize_scenario
from .scenario import write_frontier
from .scenario import write_trace
from .scenario import write_verdict
from .scheduler import DEFAULT_ORACLE_QUANTUM
from .scheduler import KINDS


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_LEARNABLE = 1
EXIT_USAGE = 2
EXIT_SCENARIO = 3

SEED_VARIABLE = 'CORE_SCHED_SEED'
LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def load_scenario(reference):
    """Load a built-in scenario by name or a scenario file by path."""
    if reference in BUILTIN_SCENARIOS:

        return builtin_scenario(reference)

    if not os.path.isfile(reference):

        raise UsageError(
            '{0!r} is neither a built-in scenario ({1}) nor a file'.format(
                reference,
                ', '.join(sorted(BUILTIN_SCENARIOS)),
            ),
        )

    with open(reference, 'r', encoding='utf-8') as handle:

        return parse_scenario(handle.read())


def _seed(args, doc, environ):

    if args.seed is not None:

        return args.seed

    if environ.get(SEED_VARIABLE):

        try:

            return int(environ[SEED_VARIABLE])

        except ValueError:

            raise UsageError('{0} must be an integer'.format(SEED_VARIABLE))

    return doc.params.seed


def _pick(*values):

    for value in values:

        if value is not None:

            return value

    return None


def _strategy(args, doc):

    if getattr(args, 'strategy', None):

        return dataclasses.replace(doc.strategy, kind=args.strategy)

    return doc.strategy


def _emit(text, args, stdout):

    if getattr(args, 'out', None):

        with open(args.out, 'w', encoding='utf-8') as handle:

            handle.write(text)

        logger.info('wrote %s', args.out)
        return

    stdout.write(text)


def simulate_command(args, stdout, environ):
    """Run the scenario's strategy and write its trace."""
    doc = load_scenario(args.scenario)
    params = dataclasses.replace(
        doc.params,
        eta_cap=_pick(args.eta, doc.params.eta_cap),
        epsilon=_pick(args.epsilon, doc.params.epsilon),
        seed=_seed(args, doc, environ),
    )
    trace = run(doc.bundle, _strategy(args, doc), params)
    if logger.isEnabledFor(logging.INFO):

        for t in range(1, trace.horizon + 1):

            logger.info(
                'slot %d data throughput %.6g',
                t,
                data_throughput(trace, t),
            )

    logger.info(
        'kappa %.6f over %d threads in %.3f ms',
        thread_throughput(trace),
        len(trace.outcomes),
        trace.runtime_ms,
    )
    _emit(write_trace(trace, args.format), args, stdout)
    return EXIT_OK


def verify_command(args, stdout, environ):
    """Check the scenario against an (eta, kappa, epsilon, delta) question."""
    doc = load_scenario(args.scenario)
    block = doc.verify
    kappa = _pick(args.kappa, block and block.kappa)
    if kappa is None:

        raise UsageError('--kappa is required when the scenario has no '
                         'verify block')

    params = VerifyParams(
        eta=_pick(args.eta, block and block.eta, doc.params.eta_cap),
        kappa=kappa,
        epsilon=_pick(args.epsilon, block and block.epsilon,
                      doc.params.epsilon),
        delta=_pick(args.delta, block and block.delta, 0.05),
        replicates=_pick(args.replicates, block and block.replicates, 1),
    )
    seed = _seed(args, doc, environ)
    strategy = _strategy(args, doc)
    if params.replicates > 1:

        verdict = verify_stochastic(doc.bundle, strategy, params, seed)

    else:

        trace = run(
            doc.bundle,
            strategy,
            SimParams(eta_cap=params.eta, epsilon=params.epsilon, seed=seed),
        )
        verdict = verify(trace, params)

    _emit(write_verdict(verdict), args, stdout)
    return EXIT_OK if verdict.learnable else EXIT_NOT_LEARNABLE


def oracle_command(args, stdout, environ):
    """Compute the best achievable kappa on the quantized grid."""
    doc = load_scenario(args.scenario)
    eta = _pick(args.eta, doc.params.eta_cap)
    kappa_star, witness = oracle_max_kappa(
        doc.bundle,
        eta,
        _pick(args.epsilon, doc.params.epsilon),
        args.quantum,
    )
    payload = {
        'eta': eta,
        'quantum': args.quantum,
        'kappa_star': kappa_star,
        'witness': [
            {
                str(thread_id): value
                for thread_id, value in row.fractions.items()
            }
            for row in witness
        ],
    }
    _emit(json.dumps(payload, indent=2) + '\n', args, stdout)
    if args.kappa is not None and kappa_star < args.kappa:

        return EXIT_NOT_LEARNABLE

    return EXIT_OK


def _grid(text):

    try:

        return tuple(float(value) for value in text.split(','))

    except ValueError:

        raise argparse.ArgumentTypeError('expected comma separated numbers')


def frontier_command(args, stdout, environ):
    """Sweep eta and report the kappa reached at each value."""
    doc = load_scenario(args.scenario)
    points = frontier(
        doc.bundle,
        _strategy(args, doc),
        args.eta_grid,
        _pick(args.epsilon, doc.params.epsilon),
        quantum=args.quantum,
        seed=_seed(args, doc, environ),
    )
    _emit(write_frontier(points), args, stdout)
    return EXIT_OK


def compare_command(args, stdout, environ):
    """Run several strategies on one scenario and tabulate the results."""
    doc = load_scenario(args.scenario)
    params = dataclasses.replace(
        doc.params,
        eta_cap=_pick(args.eta, doc.params.eta_cap),
        epsilon=_pick(args.epsilon, doc.params.epsilon),
        seed=_seed(args, doc, environ),
        record_observed=False,
    )
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(('strategy', 'kappa', 'average_error'))
    for kind in args.strategies.split(','):

        if kind not in KINDS:

            raise UsageError('unknown strategy {0!r}'.format(kind))

        trace = run(
            doc.bundle,
            dataclasses.replace(doc.strategy, kind=kind),
            params,
        )
        error = average_error(trace) if trace.outcomes else ''
        writer.writerow((kind, thread_throughput(trace), error))

    _emit(buffer.getvalue(), args, stdout)
    return EXIT_OK


def scenario_command(args, stdout, environ):
    """List the built-in scenarios or print one as YAML."""
    if args.action == 'list':

        for name in sorted(BUILTIN_SCENARIOS):

            stdout.write(name + '\n')

        return EXIT_OK

    if args.name is None:

        raise UsageError('scenario show needs a name')

    stdout.write(serialize_scenario(load_scenario(args.name)))
    return EXIT_OK


def _scenario_argument(parser):

    parser.add_argument(
        '--scenario',
        required=True,
        help='built-in scenario name or path to a scenario file',
    )


def _common_arguments(parser, strategy=True):

    _scenario_argument(parser)
    parser.add_argument('--eta', type=float, help='data throughput cap')
    parser.add_argument('--epsilon', type=float, help='success error level')
    parser.add_argument(
        '--seed',
        type=int,
        help='master seed; overrides {0}'.format(SEED_VARIABLE),
    )
    parser.add_argument('--out', help='write the result to this file')
    if strategy:

        parser.add_argument(
            '--strategy',
            choices=KINDS,
            help="override the scenario's strategy kind",
        )


def build_parser():
    """Build the argument parser for every subcommand."""
    parser = argparse.ArgumentParser(
        prog='coresched',
        description='Simulate and verify learnability of task bundles.',
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='log progress to stderr',
    )
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    simulate = commands.add_parser('simulate', help='run and write a trace')
    _common_arguments(simulate)
    simulate.add_argument('--format', choices=FORMATS, default=CSV)
    simulate.set_defaults(handler=simulate_command)

    check = commands.add_parser('verify', help='check (eta, kappa)')
    _common_arguments(check)
    check.add_argument('--kappa', type=float, help='required thread share')
    check.add_argument('--delta', type=float, help='allowed failure rate')
    check.add_argument('--replicates', type=int, help='Monte-Carlo runs')
    check.set_defaults(handler=verify_command)

    search = commands.add_parser('oracle', help='exact best kappa')
    _common_arguments(search, strategy=False)
    search.add_argument(
        '--quantum',
        type=int,
        default=DEFAULT_ORACLE_QUANTUM,
        help='allocation grid steps per eta',
    )
    search.add_argument('--kappa', type=float, help='exit 1 below this')
    search.set_defaults(handler=oracle_command)

    sweep = commands.add_parser('frontier', help='kappa as eta varies')
    _common_arguments(sweep)
    sweep.add_argument(
        '--eta-grid',
        type=_grid,
        required=True,
        help='ascending comma separated caps, e.g. 0.25,0.5,1',
    )
    sweep.add_argument('--quantum', type=int, help='allocation grid steps')
    sweep.set_defaults(handler=frontier_command)

    compare = commands.add_parser('compare', help='tabulate strategies')
    _common_arguments(compare, strategy=False)
    compare.add_argument(
        '--strategies',
        default='uniform,edf-greedy,adaptive',
        help='comma separated strategy kinds',
    )
    compare.set_defaults(handler=compare_command)

    scenarios = commands.add_parser('scenario', help='built-in scenarios')
    scenarios.add_argument('action', choices=('list', 'show'))
    scenarios.add_argument('name', nargs='?')
    scenarios.set_defaults(handler=scenario_command)

    return parser


def cli_main(argv=None, stdout=None, stderr=None, environ=None):
    """Run the command line interface.

    Args:
        argv (list of str): Arguments without the program name.
        stdout: Stream for results.
        stderr: Stream for logs and diagnostics.
        environ (dict): Environment variables.

    Returns:
        int: The process exit code.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    environ = os.environ if environ is None else environ
    parser = build_parser()
    try:

        args = parser.parse_args(argv)

    except SystemExit as error:

        return error.code if isinstance(error.code, int) else EXIT_USAGE

    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    package_logger = logging.getLogger('coresched')
    package_logger.addHandler(handler)
    package_logger.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:

        return args.handler(args, stdout, environ)

    except (ScenarioError, ValidationError, BudgetViolation) as error:

        stderr.write('coresched: invalid scenario: {0}\n'.format(error))
        return EXIT_SCENARIO

    except (UsageError, ConfigurationError, OracleLimitError) as error:

        stderr.write('coresched: error: {0}\n'.format(error))
        return EXIT_USAGE

    except OSError as error:

        stderr.write('coresched: error: {0}\n'.format(error))
        return EXIT_USAGE

    finally:

        package_logger.removeHandler(handler)


def main():
    """Console script entry point."""
    sys.exit(cli_main(sys.argv[1:]))
