"""Test suites for learning curves."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from coresched import curve
from coresched.errors import ValidationError


CURVES = (
    curve.exponential(0.9, 0.05, 0.01),
    curve.power(1.0, 0.1, 0.5),
    curve.linear_need(80.0),
    curve.linear_need(50.0, floor=0.3),
    curve.piecewise([(0, 1.0), (10, 0.5), (20, 0.1)]),
    curve.linear_need(
        1000.0,
        segments=[curve.Segment(50.0, math.inf, 0.0)],
    ),
)


@pytest.mark.parametrize('n,expected', (
    (0.0, 1.0),
    (50.0, 0.375),
    (80.0, 0.0),
    (500.0, 0.0),
))
def test_linear_need_falls_to_floor_at_need(n, expected):
    """Ensure linear-need curves reach their floor after ``need`` units.

    Example: need 80, n 50
    Result: 0.375
    """
    assert curve.curve_true_error(curve.linear_need(80.0), n) == expected


def test_linear_need_respects_floor():
    """Ensure a floored curve never drops below its floor."""
    floored = curve.linear_need(50.0, floor=0.3)
    assert curve.curve_true_error(floored, 1000.0) == pytest.approx(0.3)
    assert curve.curve_floor(floored) == 0.3


def test_exponential_and_power_start_at_initial_error():
    """Ensure parametric families start at their initial error."""
    assert curve.curve_true_error(curve.exponential(0.9, 0.1, 0.5), 0) == 0.9
    assert curve.curve_true_error(curve.power(0.8, 0.1, 0.5), 0) == 0.8


def test_exponential_decays_towards_floor():
    """Ensure e_inf + (e0 - e_inf) * exp(-rate * n) is what is evaluated."""
    value = curve.curve_true_error(curve.exponential(0.9, 0.1, 0.5), 2.0)
    assert value == pytest.approx(0.1 + 0.8 * math.exp(-1.0))


def test_piecewise_interpolates_between_knots():
    """Ensure piecewise curves interpolate linearly.

    Example: knots (0, 1), (10, 0.5), (20, 0.1) at n = 15
    Result: 0.3
    """
    knotted = curve.piecewise([(0, 1.0), (10, 0.5), (20, 0.1)])
    assert curve.curve_true_error(knotted, 15.0) == pytest.approx(0.3)
    assert curve.curve_true_error(knotted, 99.0) == pytest.approx(0.1)
    assert knotted.initial_error == 1.0
    assert knotted.floor == 0.1


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(CURVES),
    st.floats(min_value=0, max_value=1e6),
    st.floats(min_value=0, max_value=1e6),
)
def test_true_error_never_increases(learning_curve, first, second):
    """Ensure every family is non-increasing in processed data."""
    low, high = sorted((first, second))
    assert (
        curve.curve_true_error(learning_curve, high) <=
        curve.curve_true_error(learning_curve, low) + 1e-12
    )
    assert 0 <= curve.curve_true_error(learning_curve, high) <= 1


def test_flat_segment_freezes_the_curve():
    """Ensure a zero multiplier stops learning inside the segment.

    Example: need 1000, flat from 50 onwards, n = 50 and n = 500
    Result: 0.95 both times
    """
    stuck = CURVES[-1]
    assert curve.curve_true_error(stuck, 50.0) == pytest.approx(0.95)
    assert curve.curve_true_error(stuck, 500.0) == pytest.approx(0.95)
    assert curve.curve_floor(stuck) == pytest.approx(0.95)


def test_segment_multiplier_scales_learning_rate():
    """Ensure data inside a half-rate segment counts half.

    Example: need 100, half rate between 10 and 30, n = 30
    Result: effective data 20, error 0.8
    """
    slowed = curve.linear_need(100.0, segments=[curve.Segment(10, 30, 0.5)])
    assert curve.effective_data(slowed.segments, 30.0) == 20.0
    assert curve.curve_true_error(slowed, 30.0) == pytest.approx(0.8)


def test_negative_data_is_rejected():
    """Ensure evaluating at n < 0 raises."""
    with pytest.raises(ValidationError):

        curve.curve_true_error(curve.linear_need(10.0), -1.0)


@pytest.mark.parametrize('learning_curve,field', (
    (curve.exponential(0.5, 0.6, 0.1), 'curve.floor'),
    (curve.exponential(0.5, 0.1, 0.0), 'curve.rate'),
    (curve.power(1.5, 0.1, 1.0), 'curve.initial_error'),
    (curve.linear_need(-3.0), 'curve.need'),
    (curve.piecewise([(0, 0.5), (10, 0.7)]), 'curve.knots[1]'),
    (curve.LearningCurve(family='sigmoid'), 'curve.family'),
    (
        curve.linear_need(10.0, noise=curve.Noise(-0.1)),
        'curve.noise.sigma',
    ),
))
def test_invalid_curves_name_the_field(learning_curve, field):
    """Ensure invalid parameters are reported with their field path."""
    with pytest.raises(ValidationError) as error:

        curve.check_curve(learning_curve)

    assert error.value.field == field


def test_noiseless_observation_does_not_draw():
    """Ensure a noiseless curve leaves the generator untouched."""
    rng = np.random.default_rng(7)
    observed = curve.curve_observed_error(curve.linear_need(80.0), 50.0, rng)
    assert observed == 0.375
    assert rng.random() == np.random.default_rng(7).random()


def test_noisy_observation_is_seeded_and_clamped():
    """Ensure noisy observations repeat under a seed and stay in [0, 1]."""
    noisy = curve.linear_need(80.0, noise=curve.Noise(sigma=0.5))
    first = [
        curve.curve_observed_error(noisy, 40.0, np.random.default_rng(3))
        for _ in range(3)
    ]
    assert first[0] == first[1] == first[2]
    rng = np.random.default_rng(11)
    draws = [curve.curve_observed_error(noisy, 79.0, rng) for _ in range(500)]
    assert min(draws) >= 0.0
    assert max(draws) <= 1.0


def test_observation_noise_is_centred_on_true_error():
    """Ensure the sample mean of many draws tracks the true error.

    Example: sigma 0.1, 10^4 draws at n = 40 of a need-80 curve
    Result: mean within 3 * sigma / 100 of 0.5
    """
    noisy = curve.linear_need(80.0, noise=curve.Noise(sigma=0.1))
    rng = np.random.default_rng(2024)
    draws = [curve.observed_error(noisy, 40.0, rng) for _ in range(10000)]
    assert abs(np.mean(draws) - 0.5) <= 3 * 0.1 / 100
