"""Shared fixtures for the coresched test suites."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import hypothesis
import pytest

from coresched import scenario


hypothesis.settings.register_profile('fast', max_examples=5, deadline=None)
hypothesis.settings.register_profile('debugger', report_multiple_bugs=False)


@pytest.fixture
def fig1():
    """Single thread limited by capacity against a larger arrival stream."""
    return scenario.builtin_scenario('fig1')


@pytest.fixture
def fig2():
    """Five threads under an even split; three succeed."""
    return scenario.builtin_scenario('fig2')


@pytest.fixture
def fig3():
    """Five threads under a scripted schedule at eta 0.5."""
    return scenario.builtin_scenario('fig3')


@pytest.fixture
def fig4():
    """One thread stuck on a flat area competing with a descending one."""
    return scenario.builtin_scenario('fig4')
