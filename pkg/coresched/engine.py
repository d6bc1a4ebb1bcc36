"""The slot-by-slot learning loop.

For every timeslot t = 1..T the engine builds the strategy's view, asks the
strategy for an allocation row, audits it, then lets every
effectively-alive thread process its grant, observe its error and either
complete, fail at its deadline or carry on. The within-slot order is fixed:
allocate, process, completion check, deadline check. A thread completing at
its deadline therefore succeeds.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import dataclasses
import logging
import math
import time
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Dict
from typing import Optional
from typing import Tuple

import numpy as np

from .bundle import BUDGET_TOLERANCE
from .bundle import bundle_digest
from .bundle import validate_bundle
from .curve import curve_floor
from .curve import observed_error
from .curve import true_error
from .errors import BudgetViolation
from .errors import ConfigurationError
from .errors import UsageError
from .errors import ValidationError
from .scheduler import SCRIPTED
from .scheduler import SchedulerView
from .scheduler import ThreadRecord
from .scheduler import allocate
from .scheduler import prepare


logger = logging.getLogger(__name__)

SUCCESS = 'success'
FAIL_DEADLINE = 'fail-deadline'
FAIL_ERROR = 'fail-error'
STATUSES = (SUCCESS, FAIL_DEADLINE, FAIL_ERROR)


@dataclass(frozen=True)
class SimParams(object):

    """Run-level parameters: the cap eta, the success level and the seed."""

    eta_cap: float
    epsilon: float
    seed: int = 0
    record_observed: bool = True


def check_params(params):
    """Raise UsageError when eta or epsilon is out of range."""
    if not 0 <= params.eta_cap <= 1:

        raise UsageError('eta_cap must be in [0, 1]')

    if not 0 < params.epsilon <= 1:

        raise UsageError('epsilon must be in (0, 1]')


@dataclass(frozen=True)
class ThreadSlot(object):

    """What happened to one thread during one timeslot."""

    thread_id: int
    fraction: float
    granted: float
    processed: float
    cumulative: float
    true_error: float
    observed_error: Optional[float] = None


@dataclass(frozen=True)
class SlotRecord(object):

    """One timeslot of a trace: capacity, data received and per-thread work.

    ``entries`` covers the threads that were effectively alive in the slot.
    """

    t: int
    capacity: float
    received: float
    row: Any
    entries: Tuple[ThreadSlot, ...] = ()

    @property
    def processed(self):
        """Get the data processed over all threads in this slot."""
        return math.fsum(entry.processed for entry in self.entries)


@dataclass(frozen=True)
class Outcome(object):

    """The final status of one thread.

    ``switching_time`` is set for successful threads only.
    """

    thread_id: int
    status: str
    final_error: float
    deadline: int
    weight: float = 1.0
    switching_time: Optional[int] = None


@dataclass(frozen=True)
class Trace(object):

    """The full record of one run.

    ``runtime_ms`` is informational: it never takes part in equality.
    """

    bundle_digest: str
    params: SimParams
    rows: Tuple[SlotRecord, ...]
    outcomes: Tuple[Outcome, ...]
    warnings: Tuple[str, ...] = ()
    runtime_ms: float = field(default=0.0, compare=False)

    @property
    def horizon(self):
        """Get the number of timeslots in the trace."""
        return len(self.rows)

    @property
    def succeeded(self):
        """Get the ids of the successful threads."""
        return tuple(
            outcome.thread_id for outcome in self.outcomes
            if outcome.status == SUCCESS
        )

    def row(self, t):
        """Get the record of timeslot t."""
        if not 1 <= t <= len(self.rows):

            raise UsageError(
                'timeslot {0} outside 1..{1}'.format(t, len(self.rows)),
            )

        return self.rows[t - 1]


def trace_matrix(trace):
    """Get a trace's allocation fractions as a scripted matrix."""
    return tuple(dict(record.row.fractions) for record in trace.rows)


@dataclass(frozen=True)
class SimState(object):

    """Everything the loop carries from one timeslot to the next.

    ``t`` is the next timeslot to process. ``rng`` is the run's generator;
    it is advanced in place by noisy observations.
    """

    bundle: Any
    params: SimParams
    rng: Any
    t: int = 1
    cumulative: Dict[int, float] = field(default_factory=dict)
    status: Dict[int, Optional[str]] = field(default_factory=dict)
    switching: Dict[int, int] = field(default_factory=dict)
    final_error: Dict[int, float] = field(default_factory=dict)
    history: Dict[int, Tuple[Tuple[int, float], ...]] = field(
        default_factory=dict,
    )
    last_fraction: Dict[int, float] = field(default_factory=dict)
    rows: Tuple[SlotRecord, ...] = ()
    warnings: Tuple[str, ...] = ()

    def effectively_alive(self, t):
        """Get the undecided threads whose lifespan contains t."""
        return tuple(
            thread for thread in self.bundle.threads
            if self.status[thread.id] is None and thread.alive_at(t)
        )


def initial_state(bundle, params, rng_provider=np.random.default_rng):
    """Build the state before timeslot 1."""
    ids = bundle.thread_ids
    return SimState(
        bundle=bundle,
        params=params,
        rng=rng_provider(params.seed),
        cumulative={thread.id: 0.0 for thread in bundle.threads},
        status={thread_id: None for thread_id in ids},
        final_error={
            thread.id: true_error(thread.curve, 0.0)
            for thread in bundle.threads
        },
        history={thread_id: () for thread_id in ids},
        last_fraction={thread_id: 0.0 for thread_id in ids},
    )


def build_view(state):
    """Get the strategy's view of the state's next timeslot."""
    t = state.t
    records = tuple(
        ThreadRecord(
            id=thread.id,
            begin=thread.begin,
            deadline=thread.deadline,
            weight=thread.weight,
            cumulative=state.cumulative[thread.id],
            history=state.history[thread.id],
            last_fraction=state.last_fraction[thread.id],
        )
        for thread in state.effectively_alive(t)
    )
    return SchedulerView(
        t=t,
        eta_cap=state.params.eta_cap,
        capacity=state.bundle.resource_profile.capacity(t),
        epsilon=state.params.epsilon,
        thread_count=len(state.bundle.threads),
        threads=records,
    )


def received_data(bundle, t):
    """Get the data received at t.

    When every thread alive at t has an arrival cap the slot is
    arrival-denominated and receives the sum of the caps; otherwise it
    receives its capacity.
    """
    alive = [thread for thread in bundle.threads if thread.alive_at(t)]
    if alive and all(thread.arrival_cap is not None for thread in alive):

        return math.fsum(thread.arrival_limit(t) for thread in alive)

    return bundle.resource_profile.capacity(t)


def _check_budget(row, eta):

    for thread_id, fraction in row.fractions.items():

        if not fraction >= 0:

            raise BudgetViolation(
                row.t,
                'negative fraction {0} for thread {1}'.format(
                    fraction,
                    thread_id,
                ),
            )

    if row.total > eta + BUDGET_TOLERANCE:

        raise BudgetViolation(
            row.t,
            'fractions sum to {0} above cap {1}'.format(row.total, eta),
        )


def audit_row(row, view):
    """Reject a strategy's row that breaks the budget invariants.

    Raises:
        BudgetViolation: The row sums above the cap, holds a negative
            fraction or feeds a thread that is not effectively alive.
    """
    _check_budget(row, view.eta_cap)
    alive = {record.id for record in view.threads}
    for thread_id, fraction in row.fractions.items():

        if fraction > 0 and thread_id not in alive:

            raise BudgetViolation(
                row.t,
                'thread {0} is not effectively alive'.format(thread_id),
            )


def _deadline_status(thread, epsilon):

    if curve_floor(thread.curve) > epsilon:

        return FAIL_ERROR

    return FAIL_DEADLINE


def step(state, row):
    """Process one timeslot.

    Args:
        state (SimState): The state before timeslot ``state.t``.
        row (AllocationRow): The slot's allocation.

    Returns:
        SimState: The state before the following timeslot, with the slot's
            record appended.

    Raises:
        UsageError: The row names a thread outside the bundle.
        BudgetViolation: The row is negative or sums above the cap.
    """
    bundle = state.bundle
    params = state.params
    t = state.t
    known = set(bundle.thread_ids)
    unknown = sorted(set(row.fractions) - known)
    if unknown:

        raise UsageError(
            'row for timeslot {0} references unknown threads {1}'.format(
                t,
                unknown,
            ),
        )

    _check_budget(row, params.eta_cap)
    capacity = bundle.resource_profile.capacity(t)
    cumulative = dict(state.cumulative)
    status = dict(state.status)
    switching = dict(state.switching)
    final_error = dict(state.final_error)
    history = dict(state.history)
    last_fraction = {thread_id: 0.0 for thread_id in known}
    warnings = list(state.warnings)
    alive = set(thread.id for thread in state.effectively_alive(t))
    entries = []
    for thread in bundle.threads:

        fraction = row.fraction(thread.id)
        if thread.id not in alive:

            if fraction > 0:

                message = (
                    'timeslot {0}: ignored fraction {1} for thread {2} '
                    'which is not effectively alive'
                ).format(t, fraction, thread.id)
                logger.warning(message)
                warnings.append(message)

            continue

        granted = fraction * capacity
        processed = min(granted, thread.arrival_limit(t))
        n = cumulative[thread.id] + processed
        cumulative[thread.id] = n
        last_fraction[thread.id] = fraction
        error = true_error(thread.curve, n)
        seen = observed_error(thread.curve, n, state.rng)
        history[thread.id] = history[thread.id] + ((t, seen),)
        final_error[thread.id] = error
        entries.append(ThreadSlot(
            thread_id=thread.id,
            fraction=fraction,
            granted=granted,
            processed=processed,
            cumulative=n,
            true_error=error,
            observed_error=seen if params.record_observed else None,
        ))
        if error <= params.epsilon:

            status[thread.id] = SUCCESS
            switching[thread.id] = t

        elif t == thread.deadline:

            status[thread.id] = _deadline_status(thread, params.epsilon)

    record = SlotRecord(
        t=t,
        capacity=capacity,
        received=received_data(bundle, t),
        row=row,
        entries=tuple(entries),
    )
    logger.debug(
        'timeslot %d: processed %s of capacity %s',
        t,
        record.processed,
        capacity,
    )
    return dataclasses.replace(
        state,
        t=t + 1,
        cumulative=cumulative,
        status=status,
        switching=switching,
        final_error=final_error,
        history=history,
        last_fraction=last_fraction,
        rows=state.rows + (record,),
        warnings=tuple(warnings),
    )


def outcomes(state):
    """Get the per-thread outcomes of a finished state."""
    result = []
    for thread in state.bundle.threads:

        status = state.status[thread.id]
        if status is None:

            raise UsageError(
                'thread {0} is still undecided'.format(thread.id),
            )

        result.append(Outcome(
            thread_id=thread.id,
            status=status,
            final_error=state.final_error[thread.id],
            deadline=thread.deadline,
            weight=thread.weight,
            switching_time=state.switching.get(thread.id),
        ))

    return tuple(result)


def run(bundle, strategy, params, clock=time.perf_counter,
        rng_provider=np.random.default_rng):
    """Run a strategy over a bundle.

    Args:
        bundle (TaskBundle): The instance to simulate.
        strategy (StrategyConfig): The scheduling strategy.
        params (SimParams): Cap, success level and seed.
        clock: A callable returning seconds; used for ``runtime_ms``.
        rng_provider: A callable turning a seed into a numpy Generator.

    Returns:
        Trace: The complete record of the run.

    Raises:
        ValidationError: The bundle is invalid.
        ConfigurationError: The strategy is invalid or a scripted matrix is
            shorter than the horizon.
        BudgetViolation: The strategy broke the budget audit.
    """
    started = clock()
    check_params(params)
    report = validate_bundle(bundle)
    if report:

        first = report.violations[0]
        raise ValidationError(first.field, first.message, report)

    strategy = prepare(strategy, bundle, params.eta_cap, params.epsilon)
    if strategy.kind == SCRIPTED and len(strategy.matrix) < bundle.horizon:

        raise ConfigurationError(
            'scripted matrix has {0} rows for horizon {1}'.format(
                len(strategy.matrix),
                bundle.horizon,
            ),
        )

    state = initial_state(bundle, params, rng_provider)
    for _ in range(bundle.horizon):

        view = build_view(state)
        row = allocate(strategy, view)
        audit_row(row, view)
        state = step(state, row)

    return Trace(
        bundle_digest=bundle_digest(bundle),
        params=params,
        rows=state.rows,
        outcomes=outcomes(state),
        warnings=state.warnings,
        runtime_ms=(clock() - started) * 1000.0,
    )
