"""Test suites for task bundles and their validation."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import dataclasses
import math

import pytest

from coresched import bundle
from coresched import curve
from coresched.errors import UsageError


def _thread(thread_id, begin, deadline, **kwargs):

    return bundle.ThreadSpec(
        thread_id,
        begin,
        deadline,
        curve.linear_need(10.0),
        **kwargs
    )


@pytest.mark.parametrize('t,expected', (
    (1, {1, 3}),
    (5, {2, 3, 4}),
    (7, {2, 3, 4, 5}),
    (9, {2, 4}),
))
def test_alive_set_follows_lifespans(fig3, t, expected):
    """Ensure the formal alive set is every thread whose lifespan holds t.

    Example: timeslot 5 of the five-thread scripted scenario
    Result: {2, 3, 4}
    """
    assert bundle.alive_set(fig3.bundle, t) == frozenset(expected)


@pytest.mark.parametrize('t', (0, 10))
def test_alive_set_rejects_slots_outside_horizon(fig3, t):
    """Ensure asking about a slot outside 1..T raises."""
    with pytest.raises(UsageError):

        bundle.alive_set(fig3.bundle, t)


def test_builtin_bundles_are_valid(fig1, fig2, fig3, fig4):
    """Ensure every built-in bundle passes validation."""
    for doc in (fig1, fig2, fig3, fig4):

        assert not bundle.validate_bundle(doc.bundle)


def test_validation_reports_begin_after_deadline():
    """Ensure an inverted lifespan is reported with its thread id."""
    broken = bundle.make_bundle([_thread(1, 3, 2)], [10, 10, 10])
    report = bundle.validate_bundle(broken)
    assert len(report) == 1
    violation = next(iter(report))
    assert violation.thread_id == 1
    assert 'begin > deadline' in violation.message


def test_validation_reports_negative_capacity_slot():
    """Ensure a negative capacity is reported with its timeslot."""
    broken = bundle.make_bundle([_thread(1, 1, 2)], [10, -1])
    report = bundle.validate_bundle(broken)
    assert [violation.timeslot for violation in report] == [2]
    assert 'timeslot 2' in str(report)


def test_validation_collects_every_violation():
    """Ensure validation keeps going after the first problem."""
    threads = [
        _thread(1, 1, 5),
        _thread(3, 1, 1, weight=-1.0),
        bundle.ThreadSpec(3, 1, 1, curve.linear_need(0.0)),
    ]
    report = bundle.validate_bundle(bundle.make_bundle(threads, [1, 1]))
    fields = [violation.field for violation in report]
    assert 'threads[1].deadline' in fields
    assert 'threads[3].id' in fields
    assert 'threads[3].weight' in fields
    assert 'threads[3].curve.need' in fields


def test_validation_checks_arrival_caps():
    """Ensure per-slot arrival caps cover the horizon."""
    broken = bundle.make_bundle(
        [_thread(1, 1, 2, arrival_cap=(5.0,))],
        [10, 10],
    )
    fields = [violation.field for violation in bundle.validate_bundle(broken)]
    assert fields == ['threads[1].arrival_cap']


def test_arrival_limit_forms():
    """Ensure arrival caps may be absent, scalar or per slot."""
    assert _thread(1, 1, 2).arrival_limit(1) == math.inf
    assert _thread(1, 1, 2, arrival_cap=4.0).arrival_limit(2) == 4.0
    per_slot = _thread(1, 1, 2, arrival_cap=(4.0, 6.0))
    assert per_slot.arrival_limit(2) == 6.0


def test_allocation_row_defaults_to_zero():
    """Ensure threads absent from a row receive nothing."""
    row = bundle.AllocationRow(t=1, fractions={1: 0.25, 3: 0.125})
    assert row.fraction(2) == 0.0
    assert row.total == 0.375


def test_quantum_fraction_matches_grid():
    """Ensure quanta map onto multiples of eta / quantum."""
    assert bundle.quantum_fraction(3, 0.5, 4) == 0.375
    assert bundle.quantum_fraction(0, 1.0, 4) == 0.0


def test_bundle_digest_tracks_content(fig2):
    """Ensure equal bundles share a digest and changed ones do not."""
    same = bundle.make_bundle(
        fig2.bundle.threads,
        fig2.bundle.resource_profile.capacities,
    )
    assert bundle.bundle_digest(same) == bundle.bundle_digest(fig2.bundle)
    changed = dataclasses.replace(
        fig2.bundle,
        threads=fig2.bundle.threads[:-1],
    )
    assert bundle.bundle_digest(changed) != bundle.bundle_digest(fig2.bundle)


def test_thread_lookup_by_id(fig2):
    """Ensure threads are found by id and unknown ids raise."""
    assert fig2.bundle.thread(4).deadline == 4
    assert fig2.bundle.thread_ids == (1, 2, 3, 4, 5)
    with pytest.raises(UsageError):

        fig2.bundle.thread(6)
