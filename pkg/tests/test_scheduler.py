"""Test suites for scheduling strategies."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import pytest

from coresched import scheduler
from coresched.errors import ConfigurationError
from coresched.errors import UsageError


def _view(records, t=1, eta_cap=1.0, capacity=100.0, epsilon=0.01):

    return scheduler.SchedulerView(
        t=t,
        eta_cap=eta_cap,
        capacity=capacity,
        epsilon=epsilon,
        thread_count=len(records),
        threads=tuple(records),
    )


def _record(thread_id, deadline=10, errors=(), last_fraction=0.0, begin=1,
            cumulative=0.0):

    return scheduler.ThreadRecord(
        id=thread_id,
        begin=begin,
        deadline=deadline,
        weight=1.0,
        cumulative=cumulative,
        history=tuple(enumerate(errors, start=1)),
        last_fraction=last_fraction,
    )


def test_uniform_splits_the_cap_evenly():
    """Ensure uniform gives eta / |alive| to every alive thread.

    Example: eta 1.0, threads 1, 2, 4
    Result: 1/3 each
    """
    row = scheduler.allocate(
        scheduler.StrategyConfig(kind=scheduler.UNIFORM),
        _view([_record(1), _record(2), _record(4)]),
    )
    assert row.fractions == {1: 1 / 3, 2: 1 / 3, 4: 1 / 3}


def test_uniform_with_nobody_alive_is_empty():
    """Ensure an empty alive set gets an empty row."""
    row = scheduler.allocate(
        scheduler.StrategyConfig(kind=scheduler.UNIFORM),
        _view([]),
    )
    assert row.fractions == {}
    assert row.total == 0.0


@pytest.mark.parametrize('errors,expected', (
    ((0.5, 0.4999, 0.4998, 0.4997, 0.4996), True),
    ((0.9, 0.8, 0.7, 0.6, 0.5), False),
    ((0.5, 0.5, 0.5), False),
    ((0.0, 0.0, 0.0, 0.0, 0.0), True),
))
def test_detect_plateau(errors, expected):
    """Ensure plateaus need a full window with a small relative drop."""
    history = tuple(enumerate(errors, start=1))
    assert scheduler.detect_plateau(history, window=5) is expected


def test_detect_plateau_rejects_short_windows():
    """Ensure a window below 2 is refused."""
    with pytest.raises(UsageError):

        scheduler.detect_plateau(((1, 0.5),), window=1)


@pytest.mark.parametrize('errors,lookback,expected', (
    ((0.9, 0.8, 0.6), 2, 0.2),
    ((0.9, 0.8, 0.6), 3, 0.15),
    ((0.5, 0.6), 2, 0.0),
    ((0.5,), 2, 0.0),
))
def test_estimate_marginal_gain(errors, lookback, expected):
    """Ensure the gain is the per-slot error decrease over the lookback."""
    history = tuple(enumerate(errors, start=1))
    gain = scheduler.estimate_marginal_gain(history, lookback)
    assert gain == pytest.approx(expected)


def test_exclusive_static_grants_fixed_fractions_in_id_order():
    """Ensure fixed fractions are capped by what the earlier ids left."""
    strategy = scheduler.StrategyConfig(
        kind=scheduler.EXCLUSIVE_STATIC,
        fractions={1: 0.6, 2: 0.6},
    )
    row = scheduler.allocate(strategy, _view([_record(2), _record(1)]))
    assert row.fractions[1] == 0.6
    assert row.fractions[2] == pytest.approx(0.4)


def test_exclusive_static_default_share_is_eta_over_k():
    """Ensure threads without a fixed fraction get eta / K."""
    strategy = scheduler.StrategyConfig(kind=scheduler.EXCLUSIVE_STATIC)
    view = scheduler.SchedulerView(
        t=1,
        eta_cap=1.0,
        capacity=10.0,
        epsilon=0.01,
        thread_count=4,
        threads=(_record(1), _record(3)),
    )
    assert scheduler.allocate(strategy, view).fractions == {1: 0.25, 3: 0.25}


def test_edf_greedy_feeds_earliest_deadline_first():
    """Ensure threads without estimates are fed everything, earliest first."""
    strategy = scheduler.StrategyConfig(kind=scheduler.EDF_GREEDY)
    row = scheduler.allocate(
        strategy,
        _view([_record(1, deadline=8), _record(2, deadline=3)]),
    )
    assert row.fractions == {2: 1.0, 1: 0.0}


def test_edf_greedy_requests_only_what_the_deadline_needs():
    """Ensure a thread with a slope estimate asks for its needed share.

    Example: error 0.5 -> 0.4 on fraction 0.5, epsilon 0.1, 3 slots left
    Result: needs 0.1 per slot at 0.2 per unit fraction, requests 0.5
    """
    strategy = scheduler.StrategyConfig(kind=scheduler.EDF_GREEDY)
    early = _record(1, deadline=5, errors=(0.5, 0.4), last_fraction=0.5)
    late = _record(2, deadline=9)
    row = scheduler.allocate(
        strategy,
        _view([late, early], t=3, epsilon=0.1),
    )
    assert row.fractions[1] == pytest.approx(0.5)
    assert row.fractions[2] == pytest.approx(0.5)


def test_adaptive_starves_hopeless_threads():
    """Ensure a thread too slow to meet its deadline gets nothing.

    Example: error falls 0.01 per slot on half the cap, 0.81 to go in 3 slots
    Result: {1: 0.0, 2: 1.0}
    """
    strategy = scheduler.StrategyConfig(kind=scheduler.ADAPTIVE)
    slow = _record(
        1,
        deadline=8,
        errors=(0.95, 0.94, 0.93, 0.92, 0.91),
        last_fraction=0.5,
        cumulative=250.0,
    )
    moving = _record(
        2,
        deadline=12,
        errors=(0.9, 0.8, 0.7, 0.6, 0.5),
        last_fraction=0.5,
        cumulative=250.0,
    )
    view = _view([slow, moving], t=6, epsilon=0.1)
    row = scheduler.allocate(strategy, view)
    assert row.fractions == {1: 0.0, 2: 1.0}


def test_adaptive_waits_a_window_before_giving_up():
    """Ensure two flat observations are not enough to starve a thread."""
    strategy = scheduler.StrategyConfig(kind=scheduler.ADAPTIVE)
    stuck = _record(
        1,
        deadline=12,
        errors=(0.95, 0.95),
        last_fraction=0.5,
        cumulative=100.0,
    )
    moving = _record(
        2,
        deadline=12,
        errors=(0.93, 0.86),
        last_fraction=0.5,
        cumulative=100.0,
    )
    row = scheduler.allocate(strategy, _view([stuck, moving], t=3))
    assert row.fractions == {1: 0.5, 2: 0.5}


def test_adaptive_does_not_judge_unfed_threads():
    """Ensure a thread that received nothing is neither hopeless nor flat.

    Example: five unchanged observations, no data so far
    Result: the thread shares the cap evenly
    """
    strategy = scheduler.StrategyConfig(kind=scheduler.ADAPTIVE)
    unfed = _record(1, errors=(1.0,) * 5)
    row = scheduler.allocate(strategy, _view([unfed, _record(2)], t=6))
    assert row.fractions == {1: 0.5, 2: 0.5}


def test_adaptive_moves_budget_from_plateaued_threads():
    """Ensure plateaued threads give step * eta to the best improver.

    Example: eta 1, step 0.25, thread 1 plateaued, thread 2 improving
    Result: {1: 0.25, 2: 0.75}
    """
    strategy = scheduler.StrategyConfig(
        kind=scheduler.ADAPTIVE,
        hopeless_factor=1000.0,
    )
    flat = _record(
        1,
        deadline=50,
        errors=(0.5, 0.4999, 0.4998, 0.4997, 0.4996),
        last_fraction=0.5,
        cumulative=250.0,
    )
    improving = _record(
        2,
        deadline=50,
        errors=(0.9, 0.8, 0.7, 0.6, 0.5),
        last_fraction=0.5,
        cumulative=250.0,
    )
    row = scheduler.allocate(strategy, _view([flat, improving], t=6))
    assert row.fractions == {1: 0.25, 2: 0.75}
    assert row.total == 1.0


def test_adaptive_is_uniform_without_history():
    """Ensure adaptive starts from an even split."""
    strategy = scheduler.StrategyConfig(kind=scheduler.ADAPTIVE)
    row = scheduler.allocate(strategy, _view([_record(1), _record(2)]))
    assert row.fractions == {1: 0.5, 2: 0.5}


def test_scripted_replays_matrix_rows():
    """Ensure scripted rows are read per slot and limited to alive threads."""
    strategy = scheduler.StrategyConfig(
        kind=scheduler.SCRIPTED,
        matrix=({1: 0.25, 3: 0.25}, {2: 0.5}),
    )
    row = scheduler.allocate(strategy, _view([_record(1), _record(2)]))
    assert row.fractions == {1: 0.25, 2: 0.0}
    row = scheduler.allocate(strategy, _view([_record(2)], t=2))
    assert row.fractions == {2: 0.5}


def test_scripted_missing_row_raises():
    """Ensure a slot beyond the matrix is a configuration error."""
    strategy = scheduler.StrategyConfig(
        kind=scheduler.SCRIPTED,
        matrix=({1: 0.25},),
    )
    with pytest.raises(ConfigurationError):

        scheduler.allocate(strategy, _view([_record(1)], t=2))


def test_quantize_hands_back_remainders_to_lowest_ids():
    """Ensure rounding keeps the grid and breaks ties by lowest id.

    Example: {1: 0.5, 2: 0.5} on a grid of eta / 3
    Result: {1: 2/3, 2: 1/3}
    """
    fractions = scheduler.quantize({1: 0.5, 2: 0.5}, 1.0, 3)
    assert fractions == {1: 2 / 3, 2: 1 / 3}


def test_quantized_uniform_never_exceeds_cap():
    """Ensure quantized rows stay on the grid and under the cap."""
    strategy = scheduler.StrategyConfig(kind=scheduler.UNIFORM, quantum=2)
    row = scheduler.allocate(
        strategy,
        _view([_record(1), _record(2), _record(3)], eta_cap=0.5),
    )
    assert row.fractions == {1: 0.25, 2: 0.25, 3: 0.0}


def test_unprepared_oracle_is_refused():
    """Ensure oracle strategies must be resolved before allocating."""
    with pytest.raises(ConfigurationError):

        scheduler.allocate(
            scheduler.StrategyConfig(kind=scheduler.ORACLE),
            _view([_record(1)]),
        )


@pytest.mark.parametrize('strategy', (
    scheduler.StrategyConfig(kind='round-robin'),
    scheduler.StrategyConfig(kind=scheduler.UNIFORM, quantum=0),
    scheduler.StrategyConfig(kind=scheduler.ADAPTIVE, window=1),
    scheduler.StrategyConfig(kind=scheduler.ADAPTIVE, step=0.0),
    scheduler.StrategyConfig(kind=scheduler.SCRIPTED),
))
def test_check_strategy_rejects_bad_parameters(strategy):
    """Ensure invalid strategy parameters raise ConfigurationError."""
    with pytest.raises(ConfigurationError):

        scheduler.check_strategy(strategy)
