"""Task bundles: threads, resource profiles and allocation rows."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass
from dataclasses import field
from typing import Dict
from typing import Optional
from typing import Tuple
from typing import Union

from .curve import LearningCurve
from .curve import curve_problems
from .errors import UsageError


BUDGET_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ThreadSpec(object):

    """One learning thread: a lifespan, a learning curve and a weight.

    ``arrival_cap`` bounds the data available to the thread per timeslot. It
    is either a single value for every slot or one value per slot; None
    means the thread's stream never runs dry.
    """

    id: int
    begin: int
    deadline: int
    curve: LearningCurve
    weight: float = 1.0
    arrival_cap: Union[None, float, Tuple[float, ...]] = None

    def arrival_limit(self, t):
        """Get the data available to this thread at timeslot t."""
        if self.arrival_cap is None:

            return math.inf

        if isinstance(self.arrival_cap, tuple):

            return self.arrival_cap[t - 1]

        return self.arrival_cap

    def alive_at(self, t):
        """Check whether timeslot t lies within the thread's lifespan."""
        return self.begin <= t <= self.deadline


@dataclass(frozen=True)
class ResourceProfile(object):

    """Per-timeslot capacity N_t, in data units; slot t is capacities[t-1]."""

    capacities: Tuple[float, ...]

    def capacity(self, t):
        """Get the capacity of timeslot t."""
        return self.capacities[t - 1]

    def __len__(self):
        """Get the number of timeslots covered by the profile."""
        return len(self.capacities)


@dataclass(frozen=True)
class TaskBundle(object):

    """The full problem instance: threads, capacities and horizon."""

    threads: Tuple[ThreadSpec, ...]
    resource_profile: ResourceProfile
    horizon: int

    @property
    def thread_ids(self):
        """Get the thread ids in bundle order."""
        return tuple(thread.id for thread in self.threads)

    def thread(self, thread_id):
        """Get a thread by id."""
        for thread in self.threads:

            if thread.id == thread_id:

                return thread

        raise UsageError('unknown thread id {0}'.format(thread_id))


def make_bundle(threads, capacities):
    """Build a bundle whose horizon is the length of its capacity list."""
    capacities = tuple(float(capacity) for capacity in capacities)
    return TaskBundle(
        threads=tuple(threads),
        resource_profile=ResourceProfile(capacities),
        horizon=len(capacities),
    )


@dataclass(frozen=True)
class AllocationRow(object):

    """Fractions of the slot's capacity granted to each thread.

    Threads missing from ``fractions`` receive nothing.
    """

    t: int
    fractions: Dict[int, float] = field(default_factory=dict)

    def fraction(self, thread_id):
        """Get the fraction granted to a thread, 0.0 when absent."""
        return self.fractions.get(thread_id, 0.0)

    @property
    def total(self):
        """Get the sum of all fractions in the row."""
        return math.fsum(self.fractions.values())


def quantum_fraction(quanta, eta, quantum):
    """Get the fraction worth ``quanta`` steps of eta / quantum.

    Quantized strategies and the exhaustive search both go through here so
    that they produce bit-identical fractions.
    """
    return quanta * eta / quantum


def alive_set(bundle, t):
    """Get the threads whose lifespan contains timeslot t.

    This is the formal alive set; it ignores completion and allocations.

    Args:
        bundle (TaskBundle): The bundle to inspect.
        t (int): A timeslot in 1..T.

    Returns:
        frozenset of int: Ids of the threads with begin <= t <= deadline.

    Raises:
        UsageError: t lies outside 1..T.
    """
    if not 1 <= t <= bundle.horizon:

        raise UsageError(
            'timeslot {0} outside 1..{1}'.format(t, bundle.horizon),
        )

    return frozenset(
        thread.id for thread in bundle.threads if thread.alive_at(t)
    )


@dataclass(frozen=True)
class Violation(object):

    """One broken bundle invariant."""

    field: str
    message: str
    thread_id: Optional[int] = None
    timeslot: Optional[int] = None

    def __str__(self):
        """Render the violation as a single diagnostic line."""
        return '{0}: {1}'.format(self.field, self.message)


@dataclass(frozen=True)
class ValidationReport(object):

    """The violations found in a bundle; empty means valid."""

    violations: Tuple[Violation, ...] = ()

    def __bool__(self):
        """Get whether the report holds any violation."""
        return bool(self.violations)

    def __len__(self):
        """Get the number of violations."""
        return len(self.violations)

    def __iter__(self):
        """Iterate over the violations."""
        return iter(self.violations)

    def __str__(self):
        """Render the report one violation per line."""
        return '\n'.join(str(violation) for violation in self.violations)


def _nonnegative(value):

    return isinstance(value, (int, float)) and math.isfinite(value) and (
        value >= 0
    )


def _bundle_violations(bundle):

    if not isinstance(bundle.horizon, int) or bundle.horizon < 1:

        yield Violation('horizon', 'must be a positive integer')

    capacities = bundle.resource_profile.capacities
    if len(capacities) != bundle.horizon:

        yield Violation(
            'resource_profile',
            'has {0} entries for horizon {1}'.format(
                len(capacities),
                bundle.horizon,
            ),
        )

    for t, capacity in enumerate(capacities, start=1):

        if not _nonnegative(capacity):

            yield Violation(
                'resource_profile[{0}]'.format(t),
                'capacity at timeslot {0} must be finite and >= 0'.format(t),
                timeslot=t,
            )

    for index, thread in enumerate(bundle.threads, start=1):

        for violation in _thread_violations(thread, index, bundle.horizon):

            yield violation


def _thread_violations(thread, expected_id, horizon):

    prefix = 'threads[{0}]'.format(thread.id)
    if thread.id != expected_id:

        yield Violation(
            prefix + '.id',
            'ids must run 1..K in order, expected {0}'.format(expected_id),
            thread_id=thread.id,
        )

    if thread.begin > thread.deadline:

        yield Violation(
            prefix + '.begin',
            'begin > deadline',
            thread_id=thread.id,
        )

    if thread.begin < 1:

        yield Violation(prefix + '.begin', 'must be >= 1', thread.id)

    if thread.deadline > horizon:

        yield Violation(
            prefix + '.deadline',
            'deadline beyond horizon {0}'.format(horizon),
            thread_id=thread.id,
        )

    if not _nonnegative(thread.weight):

        yield Violation(prefix + '.weight', 'must be >= 0', thread.id)

    cap = thread.arrival_cap
    if isinstance(cap, tuple):

        if len(cap) != horizon:

            yield Violation(
                prefix + '.arrival_cap',
                'needs one entry per timeslot',
                thread_id=thread.id,
            )

        if not all(_nonnegative(value) for value in cap):

            yield Violation(prefix + '.arrival_cap', 'must be >= 0', thread.id)

    elif cap is not None and not _nonnegative(cap):

        yield Violation(prefix + '.arrival_cap', 'must be >= 0', thread.id)

    for path, message in curve_problems(thread.curve, prefix + '.curve'):

        yield Violation(path, message, thread_id=thread.id)


def validate_bundle(bundle):
    """Check every bundle invariant.

    Args:
        bundle (TaskBundle): The bundle to check.

    Returns:
        ValidationReport: One entry per violation, naming the thread id or
            the timeslot involved. Empty when the bundle is valid.
    """
    return ValidationReport(tuple(_bundle_violations(bundle)))


def bundle_digest(bundle):
    """Get a content hash identifying a bundle.

    Traces refer to their bundle by this digest instead of embedding it.
    """
    canonical = json.dumps(
        dataclasses.asdict(bundle),
        sort_keys=True,
        separators=(',', ':'),
    )
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
