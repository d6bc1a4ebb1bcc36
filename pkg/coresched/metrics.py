"""Throughput metrics computed from traces."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import logging
import math

import numpy as np

from .engine import SUCCESS
from .errors import ConfigurationError
from .errors import UsageError


logger = logging.getLogger(__name__)


def data_throughput(trace, t):
    """Get the share of the data received at t that was processed.

    Args:
        trace (Trace): A run's trace.
        t (int): A timeslot within the trace.

    Returns:
        float: Processed over received data, in [0, 1]. A slot that
            received nothing counts as fully handled (1.0).
    """
    record = trace.row(t)
    if record.received <= 0:

        logger.warning('timeslot %d received no data; throughput is 1.0', t)
        return 1.0

    return min(1.0, max(0.0, record.processed / record.received))


def thread_throughput(trace):
    """Get the share of threads that succeeded; 1.0 for an empty bundle."""
    if not trace.outcomes:

        return 1.0

    return len(trace.succeeded) / len(trace.outcomes)


def weighted_thread_throughput(trace):
    """Get the weight share of the threads that succeeded.

    Raises:
        ConfigurationError: Every thread has weight 0.
    """
    if not trace.outcomes:

        return 1.0

    total = math.fsum(outcome.weight for outcome in trace.outcomes)
    if total <= 0:

        raise ConfigurationError('thread weights are all zero')

    succeeded = math.fsum(
        outcome.weight for outcome in trace.outcomes
        if outcome.status == SUCCESS
    )
    return succeeded / total


def average_error(trace):
    """Get the mean final true error over all threads.

    Raises:
        UsageError: The trace has no threads.
    """
    if not trace.outcomes:

        raise UsageError('average error is undefined without threads')

    return float(np.mean([outcome.final_error for outcome in trace.outcomes]))
