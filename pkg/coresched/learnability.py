"""Checking (eta, kappa)-learnability of traces, strategies and bundles.

A bundle is (eta, kappa)-learnable under a strategy when, with probability
at least 1 - delta, the strategy never hands out more than eta of a slot's
capacity (condition 1) and at least a kappa share of the threads reach the
success level epsilon (condition 2b) no later than their deadline
(condition 2a).
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import dataclasses
import functools
import logging
import math
from dataclasses import dataclass
from typing import Optional
from typing import Tuple

import numpy as np

from .bundle import BUDGET_TOLERANCE
from .engine import FAIL_DEADLINE
from .engine import FAIL_ERROR
from .engine import SUCCESS
from .engine import SimParams
from .engine import run
from .errors import UsageError
from .metrics import thread_throughput
from .oracle import oracle_max_kappa
from .scheduler import DEFAULT_ORACLE_QUANTUM
from .scheduler import ORACLE
from .scheduler import SCRIPTED
from .scheduler import StrategyConfig


logger = logging.getLogger(__name__)

KAPPA_TOLERANCE = 1e-12


@dataclass(frozen=True)
class VerifyParams(object):

    """The (eta, kappa, epsilon, delta) a verdict is asked about."""

    eta: float
    kappa: float
    epsilon: float
    delta: float = 0.05
    replicates: int = 1


def check_verify_params(params):
    """Raise UsageError when a verification parameter is out of range."""
    if not 0 <= params.eta <= 1:

        raise UsageError('eta must be in [0, 1]')

    if not 0 <= params.kappa <= 1:

        raise UsageError('kappa must be in [0, 1]')

    if not 0 < params.epsilon <= 1:

        raise UsageError('epsilon must be in (0, 1]')

    if not 0 < params.delta < 1:

        raise UsageError('delta must be in (0, 1)')

    if not isinstance(params.replicates, int) or params.replicates < 1:

        raise UsageError('replicates must be a positive integer')


@dataclass(frozen=True)
class ThreadVerdict(object):

    """Per-thread condition results.

    ``violated`` names the condition the thread is flagged on: '2a' when it
    ran out of time, '2b' when its error could not reach epsilon at all.
    """

    thread_id: int
    status: str
    condition_2a: bool
    condition_2b: bool
    violated: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict(object):

    """The answer to one learnability question."""

    learnable: bool
    achieved_kappa: float
    condition_1: bool
    params: VerifyParams
    threads: Tuple[ThreadVerdict, ...] = ()
    confidence_fraction: float = 1.0
    budget_violation_at: Optional[int] = None
    replicate_kappas: Tuple[float, ...] = ()
    witness: Optional[Tuple[dict, ...]] = None


def _thread_verdict(outcome, epsilon):

    if outcome.status == SUCCESS:

        return ThreadVerdict(
            thread_id=outcome.thread_id,
            status=outcome.status,
            condition_2a=outcome.switching_time <= outcome.deadline,
            condition_2b=outcome.final_error <= epsilon,
        )

    if outcome.status == FAIL_ERROR:

        return ThreadVerdict(
            thread_id=outcome.thread_id,
            status=outcome.status,
            condition_2a=True,
            condition_2b=False,
            violated=('2b',),
        )

    return ThreadVerdict(
        thread_id=outcome.thread_id,
        status=FAIL_DEADLINE,
        condition_2a=False,
        condition_2b=outcome.final_error <= epsilon,
        violated=('2a',),
    )


def verify(trace, params):
    """Check one trace against the learnability conditions.

    Condition 1 is audited over every thread's fraction, completed or not.

    Args:
        trace (Trace): A finished run.
        params (VerifyParams): The question; epsilon must be the one the
            trace was run at.

    Returns:
        Verdict: With confidence 1.0, since a trace is a single outcome.

    Raises:
        UsageError: The trace was run at a different epsilon.
    """
    check_verify_params(params)
    if not math.isclose(
            trace.params.epsilon,
            params.epsilon,
            rel_tol=0.0,
            abs_tol=KAPPA_TOLERANCE,
    ):

        raise UsageError(
            'trace was run at epsilon {0}, not {1}'.format(
                trace.params.epsilon,
                params.epsilon,
            ),
        )

    violation_at = None
    for record in trace.rows:

        if record.row.total > params.eta + BUDGET_TOLERANCE:

            violation_at = record.t
            break

    threads = tuple(
        _thread_verdict(outcome, params.epsilon)
        for outcome in trace.outcomes
    )
    achieved = thread_throughput(trace)
    condition_1 = violation_at is None
    return Verdict(
        learnable=condition_1 and (
            achieved + KAPPA_TOLERANCE >= params.kappa
        ),
        achieved_kappa=achieved,
        condition_1=condition_1,
        params=params,
        threads=threads,
        budget_violation_at=violation_at,
        replicate_kappas=(achieved,),
    )


def derive_seeds(seed, count):
    """Derive ``count`` independent replicate seeds from one seed."""
    states = np.random.SeedSequence(seed).generate_state(count)
    return tuple(int(state) for state in states)


def _replicate(bundle, strategy, params, seed):

    sim = SimParams(
        eta_cap=params.eta,
        epsilon=params.epsilon,
        seed=seed,
        record_observed=False,
    )
    return verify(run(bundle, strategy, sim), params)


def verify_stochastic(bundle, strategy, params, seed, mapper=map):
    """Check learnability with Monte-Carlo confidence.

    Runs ``params.replicates`` independent simulations with seeds derived
    from ``seed``. The bundle is learnable iff the share of replicates whose
    own verdict passes is at least 1 - delta; no confidence-interval
    correction is applied.

    Args:
        bundle (TaskBundle): The instance.
        strategy (StrategyConfig): The strategy under test.
        params (VerifyParams): The question, including the replicate count.
        seed (int): Master seed.
        mapper: A map-like callable used to evaluate replicates, such as an
            executor's ``map``. Results are merged in seed order.

    Returns:
        Verdict: ``confidence_fraction`` is the passing share.
            ``achieved_kappa`` is the largest kappa met by at least a
            1 - delta share of replicates; per-thread results are those of
            the first replicate.
    """
    check_verify_params(params)
    seeds = derive_seeds(seed, params.replicates)
    verdicts = list(mapper(
        functools.partial(_replicate, bundle, strategy, params),
        seeds,
    ))
    passing = sum(1 for verdict in verdicts if verdict.learnable)
    confidence = passing / len(verdicts)
    levels = sorted(
        (
            verdict.achieved_kappa if verdict.condition_1 else 0.0
            for verdict in verdicts
        ),
        reverse=True,
    )
    needed = max(1, int(math.ceil((1 - params.delta) * len(levels) - 1e-9)))
    learnable = confidence + KAPPA_TOLERANCE >= 1 - params.delta
    logger.info(
        '%d of %d replicates passed (confidence %.4f)',
        passing,
        len(verdicts),
        confidence,
    )
    first = verdicts[0]
    return Verdict(
        learnable=learnable,
        achieved_kappa=levels[needed - 1],
        condition_1=all(verdict.condition_1 for verdict in verdicts),
        params=params,
        threads=first.threads,
        confidence_fraction=confidence,
        budget_violation_at=first.budget_violation_at,
        replicate_kappas=tuple(verdict.achieved_kappa for verdict in verdicts),
    )


def certify(bundle, params, quantum=DEFAULT_ORACLE_QUANTUM, limits=None):
    """Decide learnability by exhaustive search and attach the witness.

    The witness schedule is replayed through the engine so the verdict
    carries the same per-thread results a real run of it would.
    """
    check_verify_params(params)
    kappa_star, witness = oracle_max_kappa(
        bundle,
        params.eta,
        params.epsilon,
        quantum,
        limits,
    )
    matrix = tuple(dict(row.fractions) for row in witness)
    trace = run(
        bundle,
        StrategyConfig(kind=SCRIPTED, matrix=matrix),
        SimParams(eta_cap=params.eta, epsilon=params.epsilon),
    )
    verdict = verify(trace, params)
    return dataclasses.replace(
        verdict,
        achieved_kappa=kappa_star,
        learnable=kappa_star + KAPPA_TOLERANCE >= params.kappa,
        witness=matrix,
    )


@dataclass(frozen=True)
class FrontierPoint(object):

    """The thread throughput reached at one data throughput cap."""

    eta: float
    kappa: float


def _frontier_point(bundle, strategy, epsilon, quantum, seed, eta):

    if strategy.kind == ORACLE:

        kappa, _ = oracle_max_kappa(bundle, eta, epsilon, quantum)
        return FrontierPoint(eta=eta, kappa=kappa)

    trace = run(
        bundle,
        strategy,
        SimParams(eta_cap=eta, epsilon=epsilon, seed=seed),
    )
    return FrontierPoint(eta=eta, kappa=thread_throughput(trace))


def frontier(bundle, strategy, eta_grid, epsilon, quantum=None, seed=0,
             mapper=map):
    """Trace the (eta, kappa) frontier of a strategy or of the oracle.

    Args:
        bundle (TaskBundle): The instance.
        strategy (StrategyConfig): A strategy, or kind 'oracle' for the
            exact optimum on the quantized grid.
        eta_grid (sequence of float): Ascending caps in [0, 1].
        epsilon (float): The success level.
        quantum (int): Grid for the oracle, and for the strategy when set.
        seed (int): Seed for every strategy run.
        mapper: A map-like callable used to evaluate grid points.

    Returns:
        tuple of FrontierPoint: One point per grid value, in grid order.
    """
    grid = tuple(float(eta) for eta in eta_grid)
    if any(not 0 <= eta <= 1 for eta in grid):

        raise UsageError('eta grid values must be in [0, 1]')

    if any(later < earlier for earlier, later in zip(grid, grid[1:])):

        raise UsageError('eta grid must be ascending')

    if strategy.kind == ORACLE:

        quantum = quantum or strategy.quantum or DEFAULT_ORACLE_QUANTUM

    elif quantum is not None:

        strategy = dataclasses.replace(strategy, quantum=quantum)

    return tuple(mapper(
        functools.partial(
            _frontier_point,
            bundle,
            strategy,
            epsilon,
            quantum,
            seed,
        ),
        grid,
    ))
