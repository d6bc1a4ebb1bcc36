"""Scheduling strategies: turn the observable state of a slot into fractions.

Every strategy is a pure function of its StrategyConfig and the
SchedulerView of the current timeslot. Whatever a strategy needs to remember
between slots (previous fractions, observed error histories) is carried by
the view, so one configuration can drive any number of concurrent runs.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import dataclasses
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple

from . import oracle
from .bundle import AllocationRow
from .bundle import quantum_fraction
from .errors import ConfigurationError
from .errors import UsageError


UNIFORM = 'uniform'
EDF_GREEDY = 'edf-greedy'
ADAPTIVE = 'adaptive'
SCRIPTED = 'scripted'
EXCLUSIVE_STATIC = 'exclusive-static'
ORACLE = 'oracle'
KINDS = (UNIFORM, EDF_GREEDY, ADAPTIVE, SCRIPTED, EXCLUSIVE_STATIC, ORACLE)

DEFAULT_WINDOW = 5
DEFAULT_MIN_REL_DROP = 0.01
DEFAULT_STEP = 0.25
DEFAULT_LOOKBACK = 2
DEFAULT_HOPELESS_FACTOR = 2.0
DEFAULT_ORACLE_QUANTUM = 2


@dataclass(frozen=True)
class ThreadRecord(object):

    """What a strategy may know about one effectively-alive thread.

    ``history`` holds (timeslot, observed error) pairs in increasing
    timeslot order. ``last_fraction`` is the fraction the thread received in
    the previous timeslot.
    """

    id: int
    begin: int
    deadline: int
    weight: float
    cumulative: float
    history: Tuple[Tuple[int, float], ...] = ()
    last_fraction: float = 0.0


@dataclass(frozen=True)
class SchedulerView(object):

    """The observable state of the bundle at timeslot t.

    Contains no curve parameters: strategies see observed errors only.
    """

    t: int
    eta_cap: float
    capacity: float
    epsilon: float
    thread_count: int
    threads: Tuple[ThreadRecord, ...] = ()


@dataclass(frozen=True)
class StrategyConfig(object):

    """A scheduling strategy and its parameters.

    Attributes:
        kind (str): One of KINDS.
        quantum (int): When set, fractions are multiples of eta / quantum.
            The oracle uses it as its search grid.
        window (int): Plateau detection window, in observations.
        min_rel_drop (float): Relative error drop under which a window
            counts as a plateau.
        step (float): Share of the cap moved off a plateaued thread per slot.
        lookback (int): Observations used to estimate marginal gains.
        hopeless_factor (float): A fed thread that is not plateaued is
            abandoned, once it has ``window`` observations, when the slope
            it needs exceeds this multiple of the slope it could achieve.
        share (float): Default fixed fraction for exclusive-static; None
            means eta / K.
        fractions (dict): Per-thread fixed fractions for exclusive-static.
        matrix (tuple of dict): Scripted rows, matrix[t - 1] for slot t.
    """

    kind: str
    quantum: Optional[int] = None
    window: int = DEFAULT_WINDOW
    min_rel_drop: float = DEFAULT_MIN_REL_DROP
    step: float = DEFAULT_STEP
    lookback: int = DEFAULT_LOOKBACK
    hopeless_factor: float = DEFAULT_HOPELESS_FACTOR
    share: Optional[float] = None
    fractions: Dict[int, float] = field(default_factory=dict)
    matrix: Tuple[Dict[int, float], ...] = ()


def check_strategy(strategy):
    """Raise ConfigurationError when a strategy's parameters are invalid."""
    if strategy.kind not in KINDS:

        raise ConfigurationError(
            'unknown strategy {0!r}, expected one of {1}'.format(
                strategy.kind,
                ', '.join(KINDS),
            ),
        )

    if strategy.quantum is not None and (
            not isinstance(strategy.quantum, int) or strategy.quantum < 1
    ):

        raise ConfigurationError('quantum must be a positive integer')

    if strategy.window < 2 or strategy.lookback < 2:

        raise ConfigurationError('window and lookback must be >= 2')

    if not strategy.min_rel_drop >= 0:

        raise ConfigurationError('min_rel_drop must be >= 0')

    if not 0 < strategy.step <= 1:

        raise ConfigurationError('step must be in (0, 1]')

    if not strategy.hopeless_factor > 0:

        raise ConfigurationError('hopeless_factor must be > 0')

    if strategy.share is not None and not strategy.share >= 0:

        raise ConfigurationError('share must be >= 0')

    if any(not value >= 0 for value in strategy.fractions.values()):

        raise ConfigurationError('fixed fractions must be >= 0')

    if strategy.kind == SCRIPTED and not strategy.matrix:

        raise ConfigurationError('scripted strategy needs a matrix')


def detect_plateau(history, window=DEFAULT_WINDOW,
                   min_rel_drop=DEFAULT_MIN_REL_DROP):
    """Check whether the last ``window`` observations are flat.

    Args:
        history (sequence of (int, float)): (timeslot, error) observations.
        window (int): Number of trailing observations to inspect, >= 2.
        min_rel_drop (float): Relative drop below which the errors count as
            flat.

    Returns:
        bool: True iff there are at least ``window`` observations and the
            error fell by less than ``min_rel_drop`` of its value over them.
    """
    if window < 2:

        raise UsageError('plateau window must be >= 2')

    if len(history) < window:

        return False

    first = history[-window][1]
    last = history[-1][1]
    if first <= 0:

        return True

    return (first - last) / first < min_rel_drop


def estimate_marginal_gain(history, lookback=DEFAULT_LOOKBACK):
    """Estimate the per-slot error decrease from recent observations.

    Args:
        history (sequence of (int, float)): (timeslot, error) observations.
        lookback (int): Number of trailing observations to use, >= 2.

    Returns:
        float: Average error decrease per timeslot over the last
            ``lookback`` observations; 0.0 when there are too few of them or
            the error went up.
    """
    if lookback < 2:

        raise UsageError('lookback must be >= 2')

    if len(history) < lookback:

        return 0.0

    first_t, first_error = history[-lookback]
    last_t, last_error = history[-1]
    if last_t <= first_t:

        return 0.0

    return max(0.0, (first_error - last_error) / (last_t - first_t))


def _uniform(strategy, view):

    if not view.threads:

        return {}

    share = view.eta_cap / len(view.threads)
    return {record.id: share for record in view.threads}


def _exclusive_static(strategy, view):

    default = strategy.share
    if default is None:

        default = view.eta_cap / max(1, view.thread_count)

    remaining = view.eta_cap
    fractions = {}
    for record in sorted(view.threads, key=lambda record: record.id):

        grant = min(strategy.fractions.get(record.id, default), remaining)
        fractions[record.id] = grant
        remaining -= grant

    return fractions


def _slope_per_fraction(strategy, record):

    if len(record.history) < 2 or record.last_fraction <= 0:

        return None

    lookback = min(strategy.lookback, len(record.history))
    gain = estimate_marginal_gain(record.history, lookback)
    if gain <= 0:

        return None

    return gain / record.last_fraction


def _edf_greedy(strategy, view):

    remaining = view.eta_cap
    fractions = {}
    ordered = sorted(view.threads, key=lambda record: (
        record.deadline,
        record.id,
    ))
    for record in ordered:

        request = remaining
        slope = _slope_per_fraction(strategy, record)
        if slope is not None:

            error = record.history[-1][1]
            slots_left = record.deadline - view.t + 1
            needed = max(0.0, error - view.epsilon) / slots_left
            request = needed / slope

        grant = min(request, remaining)
        fractions[record.id] = grant
        remaining -= grant

    return fractions


def _plateaued(strategy, record):

    if record.cumulative <= 0:

        return False

    return detect_plateau(
        record.history,
        strategy.window,
        strategy.min_rel_drop,
    )


def _hopeless(strategy, view, record):

    # Unfed threads carry no slope information.
    if len(record.history) < strategy.window or record.last_fraction <= 0:

        return False

    error = record.history[-1][1]
    if error <= view.epsilon:

        return False

    slots_left = record.deadline - view.t + 1
    required = (error - view.epsilon) / slots_left
    gain = estimate_marginal_gain(record.history, strategy.lookback)
    achievable = gain * view.eta_cap / record.last_fraction
    return required > strategy.hopeless_factor * achievable


def _adaptive(strategy, view):

    eta = view.eta_cap
    fractions = {record.id: 0.0 for record in view.threads}
    flat = {
        record.id for record in view.threads
        if _plateaued(strategy, record)
    }
    candidates = [
        record for record in view.threads
        if record.id in flat or not _hopeless(strategy, view, record)
    ]
    if not candidates:

        return fractions

    base = eta / len(candidates)
    plateaued = [record for record in candidates if record.id in flat]
    improving = [record for record in candidates if record.id not in flat]
    for record in candidates:

        fractions[record.id] = base

    if not plateaued or not improving:

        return fractions

    freed = 0.0
    for record in plateaued:

        share = max(0.0, min(record.last_fraction, base) - strategy.step * eta)
        fractions[record.id] = share
        freed += base - share

    best = max(improving, key=lambda record: (
        estimate_marginal_gain(record.history, strategy.lookback),
        -record.id,
    ))
    fractions[best.id] = base + freed
    return fractions


def _scripted(strategy, view):

    if view.t > len(strategy.matrix):

        raise ConfigurationError(
            'scripted matrix has no row for timeslot {0}'.format(view.t),
        )

    row = strategy.matrix[view.t - 1]
    return {
        record.id: float(row.get(record.id, 0.0))
        for record in view.threads
    }


STRATEGIES = {
    UNIFORM: _uniform,
    EXCLUSIVE_STATIC: _exclusive_static,
    EDF_GREEDY: _edf_greedy,
    ADAPTIVE: _adaptive,
    SCRIPTED: _scripted,
}


def quantize(fractions, eta, quantum):
    """Round fractions down to multiples of eta / quantum.

    Quanta lost to rounding are handed back by largest remainder, lowest
    thread id first on ties, so the row never exceeds what it summed to.
    """
    if eta <= 0:

        return {thread_id: 0.0 for thread_id in fractions}

    scaled = {
        thread_id: value * quantum / eta
        for thread_id, value in fractions.items()
    }
    quanta = {
        thread_id: int(math.floor(value + 1e-9))
        for thread_id, value in scaled.items()
    }
    total = min(quantum, int(math.floor(sum(scaled.values()) + 1e-9)))
    spare = total - sum(quanta.values())
    by_remainder = sorted(
        scaled,
        key=lambda thread_id: (quanta[thread_id] - scaled[thread_id],
                               thread_id),
    )
    for thread_id in by_remainder[:max(0, spare)]:

        quanta[thread_id] += 1

    return {
        thread_id: quantum_fraction(count, eta, quantum)
        for thread_id, count in quanta.items()
    }


def allocate(strategy, view):
    """Produce the allocation row of one timeslot.

    Args:
        strategy (StrategyConfig): The strategy to apply. Oracle strategies
            must go through ``prepare`` first.
        view (SchedulerView): The observable state of the timeslot.

    Returns:
        AllocationRow: Fractions for the effectively-alive threads only,
            summing to at most the view's cap.

    Raises:
        ConfigurationError: A scripted matrix has no row for the timeslot or
            an oracle strategy was not prepared.
    """
    if strategy.kind == ORACLE:

        raise ConfigurationError('oracle strategies must be prepared first')

    fractions = STRATEGIES[strategy.kind](strategy, view)
    if strategy.quantum is not None and strategy.kind != SCRIPTED:

        fractions = quantize(fractions, view.eta_cap, strategy.quantum)

    return AllocationRow(t=view.t, fractions=fractions)


def prepare(strategy, bundle, eta, epsilon):
    """Resolve strategies that need the whole bundle before a run starts.

    The oracle strategy searches the quantized allocation space offline with
    the true curves and is replaced by a scripted replay of its witness.
    Every other strategy is returned unchanged.
    """
    check_strategy(strategy)
    if strategy.kind != ORACLE:

        return strategy

    quantum = strategy.quantum or DEFAULT_ORACLE_QUANTUM
    _, witness = oracle.oracle_max_kappa(bundle, eta, epsilon, quantum)
    return dataclasses.replace(
        strategy,
        kind=SCRIPTED,
        quantum=None,
        matrix=tuple(row.fractions for row in witness),
    )
