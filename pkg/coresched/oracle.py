"""Exhaustive search over quantized allocation matrices.

The search answers "is there a scheduling strategy achieving thread
throughput kappa" constructively: it finds the maximum number of threads any
schedule on the eta / quantum grid can complete, together with one schedule
achieving it. It sees the true curves, so it is an offline certificate and
not something a real scheduler could run.

Two facts keep the search small. Curves never increase, so a schedule that
leaves budget idle is never better than one that hands the rest to some
thread; only full-budget rows are explored. A thread that cannot reach
epsilon even with the whole remaining budget is never fed.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import logging

from .bundle import AllocationRow
from .bundle import quantum_fraction
from .bundle import validate_bundle
from .curve import true_error
from .errors import OracleLimitError
from .errors import UsageError
from .errors import ValidationError


logger = logging.getLogger(__name__)

ORACLE_LIMITS = {'threads': 4, 'horizon': 6, 'quantum': 4}


def compositions(total, parts):
    """Generate every way to split ``total`` quanta over ``parts`` threads.

    Splits giving more to earlier parts come first.
    """
    if parts == 1:

        yield (total,)
        return

    for first in range(total, -1, -1):

        for rest in compositions(total - first, parts - 1):

            yield (first,) + rest


class _Search(object):

    """Memoized depth-first search over slots."""

    def __init__(self, bundle, eta, epsilon, quantum):
        """Precompute per-slot grants for every thread and quanta count."""
        self._bundle = bundle
        self._threads = bundle.threads
        self._epsilon = epsilon
        self._quantum = quantum
        self._horizon = bundle.horizon
        self._grant = {}
        for thread in self._threads:

            for t in range(1, self._horizon + 1):

                capacity = bundle.resource_profile.capacity(t)
                limit = thread.arrival_limit(t)
                for quanta in range(quantum + 1):

                    fraction = quantum_fraction(quanta, eta, quantum)
                    self._grant[(thread.id, t, quanta)] = (
                        fraction,
                        min(fraction * capacity, limit),
                    )

        self._reach = {}
        for thread in self._threads:

            total = 0.0
            for t in range(self._horizon, 0, -1):

                if thread.begin <= t <= thread.deadline:

                    total += self._grant[(thread.id, t, quantum)][1]

                self._reach[(thread.id, t)] = total

        self._memo = {}

    def _done(self, thread, n):

        return true_error(thread.curve, n) <= self._epsilon

    def _viable(self, thread, n, t):

        return self._done(thread, n + self._reach[(thread.id, t)])

    def _bound(self, t, state):

        return sum(
            1 for index, thread in enumerate(self._threads)
            if state[index] is not None and thread.deadline >= t and
            self._viable(thread, state[index], max(t, thread.begin))
        )

    def _children(self, t, state):

        alive = []
        fed = []
        for index, thread in enumerate(self._threads):

            n = state[index]
            if n is None or not thread.begin <= t <= thread.deadline:

                continue

            alive.append(index)
            if not self._done(thread, n) and self._viable(thread, n, t):

                fed.append(index)

        fed.sort(key=lambda index: (
            self._threads[index].deadline,
            self._threads[index].id,
        ))
        if not fed:

            yield alive, {}
            return

        for split in compositions(self._quantum, len(fed)):

            yield alive, dict(zip(fed, split))

    def _advance(self, t, state, alive, quanta):

        state = list(state)
        completed = 0
        fractions = {}
        for index in alive:

            thread = self._threads[index]
            fraction, grant = self._grant[(thread.id, t, quanta.get(index, 0))]
            fractions[thread.id] = fraction
            n = state[index] + grant
            if self._done(thread, n):

                completed += 1
                state[index] = None

            elif t == thread.deadline:

                state[index] = None

            else:

                state[index] = n

        return completed, tuple(state), fractions

    def value(self, t, state):
        """Get the most threads completable from slot t on, and the row."""
        if t > self._horizon:

            return 0, None

        key = (t, state)
        if key in self._memo:

            return self._memo[key]

        bound = self._bound(t, state)
        best = (-1, None)
        for alive, quanta in self._children(t, state):

            completed, following, fractions = self._advance(
                t,
                state,
                alive,
                quanta,
            )
            total = completed + self.value(t + 1, following)[0]
            if total > best[0]:

                best = (total, (fractions, following))

            if best[0] >= bound:

                break

        self._memo[key] = best
        return best

    def solve(self):
        """Run the search and rebuild the witness schedule."""
        state = tuple(0.0 for _ in self._threads)
        successes = self.value(1, state)[0]
        rows = []
        for t in range(1, self._horizon + 1):

            _, step = self.value(t, state)
            fractions, state = step
            rows.append(AllocationRow(t=t, fractions=fractions))

        logger.debug('oracle explored %d states', len(self._memo))
        return successes, tuple(rows)


def check_limits(bundle, quantum, limits=None):
    """Refuse instances the exhaustive search is not meant to handle.

    Raises:
        OracleLimitError: With the measured size and the limits.
    """
    limits = limits or ORACLE_LIMITS
    size = {
        'threads': len(bundle.threads),
        'horizon': bundle.horizon,
        'quantum': quantum,
    }
    if any(size[key] > limits[key] for key in size):

        raise OracleLimitError(size, limits)


def oracle_max_kappa(bundle, eta, epsilon, quantum, limits=None):
    """Find the best thread throughput on the quantized allocation grid.

    Args:
        bundle (TaskBundle): The instance; noise is ignored, true errors
            decide completion.
        eta (float): The data throughput cap, in [0, 1].
        epsilon (float): The success error level.
        quantum (int): Fractions are multiples of eta / quantum.
        limits (dict): Maximum 'threads', 'horizon' and 'quantum'; defaults
            to ORACLE_LIMITS.

    Returns:
        (float, tuple of AllocationRow): The exact maximum thread throughput
            and one allocation matrix achieving it, one row per timeslot.

    Raises:
        OracleLimitError: The instance exceeds the limits.
        ValidationError: The bundle is invalid.
    """
    if not isinstance(quantum, int) or quantum < 1:

        raise UsageError('quantum must be a positive integer')

    if not 0 <= eta <= 1:

        raise UsageError('eta must be in [0, 1]')

    check_limits(bundle, quantum, limits)
    report = validate_bundle(bundle)
    if report:

        first = report.violations[0]
        raise ValidationError(first.field, first.message, report)

    if not bundle.threads:

        rows = tuple(
            AllocationRow(t=t) for t in range(1, bundle.horizon + 1)
        )
        return 1.0, rows

    successes, rows = _Search(bundle, eta, epsilon, quantum).solve()
    return successes / len(bundle.threads), rows
