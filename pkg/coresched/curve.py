"""Learning curves: true error as a function of processed data.

A learning curve stands in for a thread's data distribution. The only thing
the learnability conditions ever ask of a thread's model is its error, so a
curve maps cumulative processed data units to the error a model trained on
that much data would have. These families are one instantiation of that
mapping, not a claim about how real learners behave.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import math
from dataclasses import dataclass
from typing import Optional
from typing import Tuple

import numpy as np

from .errors import ValidationError


EXPONENTIAL = 'exponential'
POWER = 'power'
LINEAR_NEED = 'linear-need'
PIECEWISE = 'piecewise'
FAMILIES = (EXPONENTIAL, POWER, LINEAR_NEED, PIECEWISE)

GAUSSIAN = 'gaussian'
NOISE_DISTRIBUTIONS = (GAUSSIAN,)


@dataclass(frozen=True)
class Segment(object):

    """A span of cumulative data over which learning runs at a scaled rate.

    A multiplier of 0 models a flat convergence area: the error does not move
    while the thread's cumulative data stays inside [start, end).
    """

    start: float
    end: float
    multiplier: float


@dataclass(frozen=True)
class Noise(object):

    """Observation noise, added to observed errors only."""

    sigma: float
    distribution: str = GAUSSIAN


@dataclass(frozen=True)
class LearningCurve(object):

    """A parametric, non-increasing true-error curve.

    Only the parameters used by ``family`` are meaningful: ``rate`` for
    exponential curves, ``exponent`` for power curves, ``need`` for
    linear-need curves and ``knots`` for piecewise curves. Piecewise curves
    take ``initial_error`` and ``floor`` from their first and last knot.
    """

    family: str
    initial_error: float = 1.0
    floor: float = 0.0
    rate: Optional[float] = None
    exponent: Optional[float] = None
    need: Optional[float] = None
    knots: Tuple[Tuple[float, float], ...] = ()
    segments: Tuple[Segment, ...] = ()
    noise: Optional[Noise] = None

    @property
    def sigma(self):
        """Get the observation noise level, 0.0 when noiseless."""
        if self.noise is None:

            return 0.0

        return self.noise.sigma


def exponential(initial_error, floor, rate, segments=(), noise=None):
    """Build an exponential curve e_inf + (e0 - e_inf) * exp(-rate * n)."""
    return LearningCurve(
        family=EXPONENTIAL,
        initial_error=initial_error,
        floor=floor,
        rate=rate,
        segments=tuple(segments),
        noise=noise,
    )


def power(initial_error, floor, exponent, segments=(), noise=None):
    """Build a power curve e_inf + (e0 - e_inf) * (1 + n) ** -exponent."""
    return LearningCurve(
        family=POWER,
        initial_error=initial_error,
        floor=floor,
        exponent=exponent,
        segments=tuple(segments),
        noise=noise,
    )


def linear_need(need, initial_error=1.0, floor=0.0, segments=(), noise=None):
    """Build a curve that falls linearly to its floor after ``need`` units."""
    return LearningCurve(
        family=LINEAR_NEED,
        initial_error=initial_error,
        floor=floor,
        need=need,
        segments=tuple(segments),
        noise=noise,
    )


def piecewise(knots, segments=(), noise=None):
    """Build a curve interpolating linearly between (n, error) knots."""
    knots = tuple((float(n), float(error)) for n, error in knots)
    return LearningCurve(
        family=PIECEWISE,
        initial_error=knots[0][1] if knots else 1.0,
        floor=knots[-1][1] if knots else 0.0,
        knots=knots,
        segments=tuple(segments),
        noise=noise,
    )


def _finite(value):

    return value is not None and math.isfinite(value)


def curve_problems(curve, prefix='curve'):
    """Generate every invariant violation of a curve.

    Args:
        curve (LearningCurve): The curve to inspect.
        prefix (str): Field path prepended to every reported field.

    Returns:
        iter of (str, str): Pairs of (field path, message). Empty when the
            curve is valid.
    """
    if curve.family not in FAMILIES:

        yield prefix + '.family', 'unknown family {0!r}'.format(curve.family)
        return

    if curve.family == PIECEWISE:

        for problem in _knot_problems(curve, prefix):

            yield problem

    else:

        if not _finite(curve.initial_error) or not (
                0 < curve.initial_error <= 1
        ):

            yield prefix + '.initial_error', 'must be in (0, 1]'

        if not _finite(curve.floor) or not (
                0 <= curve.floor < curve.initial_error
        ):

            yield prefix + '.floor', 'must be in [0, initial_error)'

    if curve.family == EXPONENTIAL and not (
            _finite(curve.rate) and curve.rate > 0
    ):

        yield prefix + '.rate', 'must be a positive real'

    if curve.family == POWER and not (
            _finite(curve.exponent) and curve.exponent > 0
    ):

        yield prefix + '.exponent', 'must be a positive real'

    if curve.family == LINEAR_NEED and not (
            _finite(curve.need) and curve.need > 0
    ):

        yield prefix + '.need', 'must be a positive real'

    previous_end = 0.0
    for index, segment in enumerate(curve.segments):

        path = '{0}.segments[{1}]'.format(prefix, index)
        if not _finite(segment.start) or segment.start < previous_end:

            yield path + '.start', 'segments must be ordered and disjoint'

        if segment.end is None or math.isnan(segment.end) or (
                segment.end <= segment.start
        ):

            yield path + '.end', 'must be greater than start'

        if not _finite(segment.multiplier) or segment.multiplier < 0:

            yield path + '.multiplier', 'must be a nonnegative real'

        if segment.end is not None and not math.isnan(segment.end):

            previous_end = max(previous_end, segment.end)

    if curve.noise is not None:

        if curve.noise.distribution not in NOISE_DISTRIBUTIONS:

            yield prefix + '.noise.distribution', 'only gaussian is supported'

        if not _finite(curve.noise.sigma) or curve.noise.sigma < 0:

            yield prefix + '.noise.sigma', 'must be a nonnegative real'


def _knot_problems(curve, prefix):

    path = prefix + '.knots'
    if not curve.knots:

        yield path, 'piecewise curves need at least one knot'
        return

    if curve.knots[0][0] != 0:

        yield path + '[0]', 'first knot must sit at n = 0'

    for index, (n, error) in enumerate(curve.knots):

        if not _finite(n) or not _finite(error) or not 0 <= error <= 1:

            yield '{0}[{1}]'.format(path, index), 'error must be in [0, 1]'

        if index == 0:

            continue

        previous_n, previous_error = curve.knots[index - 1]
        if n <= previous_n:

            yield '{0}[{1}]'.format(path, index), 'n must strictly increase'

        if error > previous_error:

            yield '{0}[{1}]'.format(path, index), 'error must not increase'

    if curve.knots[0][1] <= 0:

        yield prefix + '.initial_error', 'must be in (0, 1]'

    if curve.initial_error != curve.knots[0][1]:

        yield prefix + '.initial_error', 'must equal the first knot error'

    if curve.floor != curve.knots[-1][1]:

        yield prefix + '.floor', 'must equal the last knot error'


def check_curve(curve, prefix='curve'):
    """Raise ValidationError naming the first invalid field of a curve."""
    for path, message in curve_problems(curve, prefix):

        raise ValidationError(path, message)


def effective_data(segments, n):
    """Map cumulative data to the data the base family effectively saw.

    Inside a segment every unit of data counts as ``multiplier`` units, so a
    zero multiplier freezes the curve across the segment.
    """
    total = n
    for segment in segments:

        if n <= segment.start:

            break

        covered = min(n, segment.end) - segment.start
        total -= covered * (1.0 - segment.multiplier)

    return total


def _base_error(curve, x):

    if curve.family == LINEAR_NEED:

        remaining = max(0.0, 1.0 - x / curve.need)
        return curve.floor + (curve.initial_error - curve.floor) * remaining

    if curve.family == EXPONENTIAL:

        decay = math.exp(-curve.rate * x)
        return curve.floor + (curve.initial_error - curve.floor) * decay

    if curve.family == POWER:

        decay = (1.0 + x) ** -curve.exponent
        return curve.floor + (curve.initial_error - curve.floor) * decay

    knots = np.asarray(curve.knots, dtype=float)
    return float(np.interp(x, knots[:, 0], knots[:, 1]))


def true_error(curve, n):
    """Evaluate a curve that is already known to be valid."""
    if curve.segments:

        n = effective_data(curve.segments, n)

    return min(1.0, max(0.0, _base_error(curve, n)))


def curve_true_error(curve, n):
    """Get the noiseless error of a model trained on ``n`` data units.

    Args:
        curve (LearningCurve): The thread's learning curve.
        n (float): Cumulative processed data units, n >= 0.

    Returns:
        float: The true error in [0, 1]; non-increasing in n.

    Raises:
        ValidationError: The curve is invalid or n is negative.
    """
    check_curve(curve)
    if not n >= 0:

        raise ValidationError('n', 'cumulative data must be nonnegative')

    return true_error(curve, n)


def observed_error(curve, n, rng):
    """Evaluate a valid curve through its observation channel."""
    error = true_error(curve, n)
    if curve.sigma == 0:

        return error

    draw = rng.normal(0.0, curve.sigma)
    return float(np.clip(error + draw, 0.0, 1.0))


def curve_observed_error(curve, n, rng):
    """Get the error a strategy would observe after ``n`` data units.

    Args:
        curve (LearningCurve): The thread's learning curve.
        n (float): Cumulative processed data units, n >= 0.
        rng (numpy.random.Generator): Seeded generator; one normal draw is
            consumed per call when the curve is noisy.

    Returns:
        float: True error plus one noise draw, clamped to [0, 1]. Equal to
            the true error when the curve has no noise.
    """
    check_curve(curve)
    if not n >= 0:

        raise ValidationError('n', 'cumulative data must be nonnegative')

    return observed_error(curve, n, rng)


def curve_floor(curve):
    """Get the error the curve approaches as data grows without bound.

    An unbounded zero-rate segment freezes the curve at its start, which
    makes the error at that point the floor.
    """
    for segment in curve.segments:

        if math.isinf(segment.end) and segment.multiplier == 0:

            return true_error(curve, segment.start)

    if curve.family == PIECEWISE:

        return curve.knots[-1][1]

    return curve.floor
