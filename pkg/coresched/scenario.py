"""Scenario documents, built-in scenarios and result serialization.

Scenarios are YAML documents following the ``core-scenario/1`` schema.
Parsing is strict: unknown fields are rejected with the path of the field.
Traces and verdicts serialize to JSON ("structured") and traces also to CSV
with a frozen column order.
"""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import yaml

from . import curve as curves
from .bundle import AllocationRow
from .bundle import ThreadSpec
from .bundle import make_bundle
from .bundle import validate_bundle
from .curve import Noise
from .curve import Segment
from .engine import Outcome
from .engine import SimParams
from .engine import SlotRecord
from .engine import ThreadSlot
from .engine import Trace
from .engine import check_params
from .errors import ConfigurationError
from .errors import ScenarioSyntaxError
from .errors import SchemaError
from .errors import SemanticError
from .errors import UsageError
from .learnability import FrontierPoint
from .learnability import ThreadVerdict
from .learnability import Verdict
from .learnability import VerifyParams
from .learnability import check_verify_params
from .scheduler import ADAPTIVE
from .scheduler import SCRIPTED
from .scheduler import UNIFORM
from .scheduler import StrategyConfig
from .scheduler import check_strategy


SCHEMA_VERSION = 'core-scenario/1'
TRACE_SCHEMA_VERSION = 'core-trace/1'
VERDICT_SCHEMA_VERSION = 'core-verdict/1'

TRACE_COLUMNS = (
    't',
    'thread_id',
    'fraction',
    'granted_units',
    'processed_units',
    'cumulative_units',
    'true_error',
    'observed_error',
)
OUTCOME_MARKER = 'outcome'

CSV = 'csv'
STRUCTURED = 'structured'
FORMATS = (CSV, STRUCTURED)

JSON_PROVIDER = json.dumps
YAML_LOADER = yaml.safe_load
YAML_DUMPER = yaml.safe_dump

FAMILY_PARAMS = {
    curves.EXPONENTIAL: ('initial_error', 'floor', 'rate'),
    curves.POWER: ('initial_error', 'floor', 'exponent'),
    curves.LINEAR_NEED: ('initial_error', 'floor', 'need'),
    curves.PIECEWISE: ('knots',),
}
FAMILY_REQUIRED = {
    curves.EXPONENTIAL: 'rate',
    curves.POWER: 'exponent',
    curves.LINEAR_NEED: 'need',
    curves.PIECEWISE: 'knots',
}
STRATEGY_DEFAULTS = StrategyConfig(kind=UNIFORM)
STRATEGY_FIELDS = (
    'quantum',
    'window',
    'min_rel_drop',
    'step',
    'lookback',
    'hopeless_factor',
    'share',
    'fractions',
    'matrix',
)


@dataclass(frozen=True)
class ScenarioDoc(object):

    """A complete, validated scenario."""

    bundle: object
    strategy: StrategyConfig
    params: SimParams
    verify: Optional[VerifyParams] = None
    schema_version: str = SCHEMA_VERSION


def _join(path, key):

    if isinstance(key, int) and not isinstance(key, bool):

        return '{0}[{1}]'.format(path, key)

    return '{0}.{1}'.format(path, key) if path else str(key)


def _fields(value, path, required=(), optional=()):

    if not isinstance(value, dict):

        raise SchemaError(path or '<document>', 'expected a mapping')

    allowed = set(required) | set(optional)
    for key in value:

        if key not in allowed:

            raise SchemaError(_join(path, str(key)), 'unknown field')

    for key in required:

        if key not in value:

            raise SchemaError(_join(path, key), 'missing required field')

    return value


def _number(value, path):

    if isinstance(value, bool) or not isinstance(value, (int, float)):

        raise SchemaError(path, 'expected a number')

    return float(value)


def _integer(value, path):

    if isinstance(value, bool) or not isinstance(value, int):

        raise SchemaError(path, 'expected an integer')

    return value


def _string(value, path):

    if not isinstance(value, str):

        raise SchemaError(path, 'expected a string')

    return value


def _sequence(value, path):

    if not isinstance(value, list):

        raise SchemaError(path, 'expected a list')

    return value


def _fraction_map(value, path):

    if not isinstance(value, dict):

        raise SchemaError(path, 'expected a map of thread id to fraction')

    return {
        _integer(key, _join(path, str(key))): _number(
            fraction,
            _join(path, str(key)),
        )
        for key, fraction in value.items()
    }


def _parse_curve(value, path):

    family = _fields(value, path, required=('family',), optional=(
        'initial_error', 'floor', 'rate', 'exponent', 'need', 'knots',
        'segments', 'noise',
    ))['family']
    family = _string(family, _join(path, 'family'))
    if family not in FAMILY_PARAMS:

        raise SchemaError(_join(path, 'family'), 'unknown family')

    _fields(
        value,
        path,
        required=('family', FAMILY_REQUIRED[family]),
        optional=FAMILY_PARAMS[family] + ('segments', 'noise'),
    )
    segments = tuple(
        _parse_segment(segment, _join(_join(path, 'segments'), index))
        for index, segment in enumerate(
            _sequence(value.get('segments', []), _join(path, 'segments')),
        )
    )
    noise = None
    if value.get('noise') is not None:

        noise_path = _join(path, 'noise')
        entry = _fields(
            value['noise'],
            noise_path,
            required=('sigma',),
            optional=('distribution',),
        )
        noise = Noise(
            sigma=_number(entry['sigma'], _join(noise_path, 'sigma')),
            distribution=_string(
                entry.get('distribution', curves.GAUSSIAN),
                _join(noise_path, 'distribution'),
            ),
        )

    if family == curves.PIECEWISE:

        knots_path = _join(path, 'knots')
        knots = []
        for index, knot in enumerate(_sequence(value['knots'], knots_path)):

            knot_path = _join(knots_path, index)
            pair = _sequence(knot, knot_path)
            if len(pair) != 2:

                raise SchemaError(knot_path, 'expected [n, error]')

            knots.append((
                _number(pair[0], knot_path),
                _number(pair[1], knot_path),
            ))

        return curves.piecewise(knots, segments, noise)

    params = {
        key: _number(value[key], _join(path, key))
        for key in FAMILY_PARAMS[family] if key in value
    }
    return curves.LearningCurve(
        family=family,
        segments=segments,
        noise=noise,
        **params
    )


def _parse_segment(value, path):

    entry = _fields(value, path, required=('start', 'end', 'multiplier'))
    return Segment(
        start=_number(entry['start'], _join(path, 'start')),
        end=_number(entry['end'], _join(path, 'end')),
        multiplier=_number(entry['multiplier'], _join(path, 'multiplier')),
    )


def _parse_thread(value, path):

    entry = _fields(
        value,
        path,
        required=('id', 'begin', 'deadline', 'curve'),
        optional=('weight', 'arrival_cap'),
    )
    cap = entry.get('arrival_cap')
    cap_path = _join(path, 'arrival_cap')
    if isinstance(cap, list):

        cap = tuple(
            _number(item, _join(cap_path, index))
            for index, item in enumerate(cap, start=1)
        )

    elif cap is not None:

        cap = _number(cap, cap_path)

    return ThreadSpec(
        id=_integer(entry['id'], _join(path, 'id')),
        begin=_integer(entry['begin'], _join(path, 'begin')),
        deadline=_integer(entry['deadline'], _join(path, 'deadline')),
        curve=_parse_curve(entry['curve'], _join(path, 'curve')),
        weight=_number(entry.get('weight', 1.0), _join(path, 'weight')),
        arrival_cap=cap,
    )


def _parse_bundle(value, path):

    entry = _fields(
        value,
        path,
        required=('horizon', 'resource_profile'),
        optional=('threads',),
    )
    horizon = _integer(entry['horizon'], _join(path, 'horizon'))
    profile_path = _join(path, 'resource_profile')
    capacities = [
        _number(item, _join(profile_path, index))
        for index, item in enumerate(
            _sequence(entry['resource_profile'], profile_path), start=1,
        )
    ]
    threads_path = _join(path, 'threads')
    threads = [
        _parse_thread(thread, _join(threads_path, index))
        for index, thread in enumerate(
            _sequence(entry.get('threads', []), threads_path), start=1,
        )
    ]
    bundle = make_bundle(threads, capacities)
    if bundle.horizon != horizon:

        raise SchemaError(
            profile_path,
            'has {0} entries for horizon {1}'.format(len(capacities), horizon),
        )

    return bundle


def _parse_strategy(value, path):

    entry = _fields(value, path, required=('kind',), optional=STRATEGY_FIELDS)
    options = {}
    for key in ('window', 'lookback'):

        if key in entry:

            options[key] = _integer(entry[key], _join(path, key))

    if entry.get('quantum') is not None:

        options['quantum'] = _integer(entry['quantum'], _join(path, 'quantum'))

    for key in ('min_rel_drop', 'step', 'hopeless_factor'):

        if key in entry:

            options[key] = _number(entry[key], _join(path, key))

    if entry.get('share') is not None:

        options['share'] = _number(entry['share'], _join(path, 'share'))

    if 'fractions' in entry:

        options['fractions'] = _fraction_map(
            entry['fractions'],
            _join(path, 'fractions'),
        )

    if 'matrix' in entry:

        matrix_path = _join(path, 'matrix')
        options['matrix'] = tuple(
            _fraction_map(row, _join(matrix_path, index))
            for index, row in enumerate(
                _sequence(entry['matrix'], matrix_path), start=1,
            )
        )

    strategy = StrategyConfig(
        kind=_string(entry['kind'], _join(path, 'kind')),
        **options
    )
    try:

        check_strategy(strategy)

    except ConfigurationError as error:

        raise SchemaError(path, str(error))

    return strategy


def _parse_params(value, path):

    entry = _fields(
        value,
        path,
        required=('eta_cap', 'epsilon'),
        optional=('seed', 'record_observed'),
    )
    record = entry.get('record_observed', True)
    if not isinstance(record, bool):

        raise SchemaError(_join(path, 'record_observed'), 'expected a bool')

    params = SimParams(
        eta_cap=_number(entry['eta_cap'], _join(path, 'eta_cap')),
        epsilon=_number(entry['epsilon'], _join(path, 'epsilon')),
        seed=_integer(entry.get('seed', 0), _join(path, 'seed')),
        record_observed=record,
    )
    try:

        check_params(params)

    except UsageError as error:

        raise SchemaError(path, str(error))

    return params


def _parse_verify(value, path):

    entry = _fields(
        value,
        path,
        required=('eta', 'kappa', 'epsilon'),
        optional=('delta', 'replicates'),
    )
    params = VerifyParams(
        eta=_number(entry['eta'], _join(path, 'eta')),
        kappa=_number(entry['kappa'], _join(path, 'kappa')),
        epsilon=_number(entry['epsilon'], _join(path, 'epsilon')),
        delta=_number(entry.get('delta', 0.05), _join(path, 'delta')),
        replicates=_integer(
            entry.get('replicates', 1),
            _join(path, 'replicates'),
        ),
    )
    try:

        check_verify_params(params)

    except UsageError as error:

        raise SchemaError(path, str(error))

    return params


def parse_scenario(text, yaml_loader=YAML_LOADER):
    """Parse and validate a scenario document.

    Args:
        text (str): The YAML document.
        yaml_loader: A callable turning YAML text into Python values.

    Returns:
        ScenarioDoc: The validated scenario.

    Raises:
        ScenarioSyntaxError: The text is not valid YAML.
        SchemaError: A field is missing, unknown or of the wrong type.
        SemanticError: The bundle breaks an invariant.
    """
    try:

        document = yaml_loader(text)

    except yaml.YAMLError as error:

        mark = getattr(error, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else 0
        column = mark.column + 1 if mark is not None else 0
        problem = getattr(error, 'problem', None) or str(error)
        raise ScenarioSyntaxError(line, column, problem)

    entry = _fields(
        document,
        '',
        required=('schema_version', 'bundle', 'strategy', 'params'),
        optional=('verify',),
    )
    if entry['schema_version'] != SCHEMA_VERSION:

        raise SchemaError(
            'schema_version',
            'expected {0!r}'.format(SCHEMA_VERSION),
        )

    bundle = _parse_bundle(entry['bundle'], 'bundle')
    report = validate_bundle(bundle)
    if report:

        raise SemanticError(report)

    verify = None
    if entry.get('verify') is not None:

        verify = _parse_verify(entry['verify'], 'verify')

    return ScenarioDoc(
        bundle=bundle,
        strategy=_parse_strategy(entry['strategy'], 'strategy'),
        params=_parse_params(entry['params'], 'params'),
        verify=verify,
    )


def curve_to_dict(curve):
    """Get the schema form of a learning curve."""
    payload = {'family': curve.family}
    if curve.family == curves.PIECEWISE:

        payload['knots'] = [list(knot) for knot in curve.knots]

    else:

        for key in FAMILY_PARAMS[curve.family]:

            payload[key] = getattr(curve, key)

    if curve.segments:

        payload['segments'] = [
            {
                'start': segment.start,
                'end': segment.end,
                'multiplier': segment.multiplier,
            }
            for segment in curve.segments
        ]

    if curve.noise is not None:

        payload['noise'] = {
            'distribution': curve.noise.distribution,
            'sigma': curve.noise.sigma,
        }

    return payload


def bundle_to_dict(bundle):
    """Get the schema form of a bundle."""
    threads = []
    for thread in bundle.threads:

        payload = {
            'id': thread.id,
            'begin': thread.begin,
            'deadline': thread.deadline,
            'weight': thread.weight,
            'curve': curve_to_dict(thread.curve),
        }
        if isinstance(thread.arrival_cap, tuple):

            payload['arrival_cap'] = list(thread.arrival_cap)

        elif thread.arrival_cap is not None:

            payload['arrival_cap'] = thread.arrival_cap

        threads.append(payload)

    return {
        'horizon': bundle.horizon,
        'resource_profile': list(bundle.resource_profile.capacities),
        'threads': threads,
    }


def strategy_to_dict(strategy):
    """Get the schema form of a strategy, omitting default parameters."""
    payload = {'kind': strategy.kind}
    for key in STRATEGY_FIELDS:

        value = getattr(strategy, key)
        if value == getattr(STRATEGY_DEFAULTS, key):

            continue

        if key == 'fractions':

            value = dict(value)

        elif key == 'matrix':

            value = [dict(row) for row in value]

        payload[key] = value

    return payload


def scenario_to_dict(doc):
    """Get the schema form of a scenario."""
    payload = {
        'schema_version': doc.schema_version,
        'bundle': bundle_to_dict(doc.bundle),
        'strategy': strategy_to_dict(doc.strategy),
        'params': {
            'eta_cap': doc.params.eta_cap,
            'epsilon': doc.params.epsilon,
            'seed': doc.params.seed,
            'record_observed': doc.params.record_observed,
        },
    }
    if doc.verify is not None:

        payload['verify'] = {
            'eta': doc.verify.eta,
            'kappa': doc.verify.kappa,
            'epsilon': doc.verify.epsilon,
            'delta': doc.verify.delta,
            'replicates': doc.verify.replicates,
        }

    return payload


def serialize_scenario(doc, yaml_dumper=YAML_DUMPER):
    """Render a scenario as a YAML document."""
    return yaml_dumper(
        scenario_to_dict(doc),
        default_flow_style=None,
        sort_keys=False,
    )


def _fig1():

    # Capacity 32, 32, 64 against arrivals of 64, 128, 128 units.
    thread = ThreadSpec(
        id=1,
        begin=1,
        deadline=3,
        curve=curves.linear_need(10000.0),
        arrival_cap=(64.0, 128.0, 128.0),
    )
    return ScenarioDoc(
        bundle=make_bundle([thread], [32, 32, 64]),
        strategy=StrategyConfig(kind=UNIFORM),
        params=SimParams(eta_cap=1.0, epsilon=0.01),
    )


def _fig2():

    # Illustrative: three easy threads succeed, thread 4 cannot get below
    # 0.3 and thread 5 needs far more data than its lifespan allows.
    threads = [
        ThreadSpec(1, 1, 2, curves.linear_need(40.0)),
        ThreadSpec(2, 1, 4, curves.linear_need(80.0)),
        ThreadSpec(3, 2, 3, curves.linear_need(30.0)),
        ThreadSpec(4, 2, 4, curves.linear_need(50.0, floor=0.3)),
        ThreadSpec(5, 3, 4, curves.linear_need(500.0)),
    ]
    return ScenarioDoc(
        bundle=make_bundle(threads, [100] * 4),
        strategy=StrategyConfig(kind=UNIFORM),
        params=SimParams(eta_cap=1.0, epsilon=0.01),
        verify=VerifyParams(eta=1.0, kappa=0.6, epsilon=0.01),
    )


# Slot t spans the interval t_{t-1} ~ t_t of the narrated schedule; with
# N = 64 a fraction of 0.25 is 16 units and 0.125 is 8 units.
FIG3_MATRIX = (
    {1: 0.25, 3: 0.25},               # threads 1 and 3 split eta * N = 32
    {1: 0.25, 2: 0.125, 3: 0.125},    # thread 1 keeps 16, 2 and 3 share 16
    {1: 0.25, 2: 0.125, 3: 0.125},    # thread 1 completes here (48 units)
    {2: 0.25, 3: 0.25},               # 2 and 3 each get 8 more
    {3: 0.25, 4: 0.25},               # thread 4 arrives, thread 2 starved
    {3: 0.125, 4: 0.125, 5: 0.25},    # thread 5 arrives, gets half
    {3: 0.25, 5: 0.25},               # thread 3 completes, 4 starved
    {2: 0.25, 4: 0.25},               # only threads 2 and 4 remain
    {2: 0.25, 4: 0.25},               # thread 4 completes, 2 fails (2b)
)


def _fig3():

    threads = [
        ThreadSpec(1, 1, 4, curves.linear_need(48.0)),
        ThreadSpec(2, 2, 9, curves.linear_need(64.0, floor=0.2)),
        ThreadSpec(3, 1, 8, curves.linear_need(88.0)),
        ThreadSpec(4, 5, 9, curves.linear_need(56.0)),
        ThreadSpec(5, 6, 7, curves.linear_need(64.0)),
    ]
    return ScenarioDoc(
        bundle=make_bundle(threads, [64] * 9),
        strategy=StrategyConfig(kind=SCRIPTED, matrix=FIG3_MATRIX),
        params=SimParams(eta_cap=0.5, epsilon=0.01),
        verify=VerifyParams(eta=0.5, kappa=0.6, epsilon=0.01),
    )


def _fig4():

    # Thread 1 hits a flat area after 50 units; thread 2 keeps descending
    # but needs 630 units to reach 0.1, more than an even split gives it.
    flat = Segment(start=50.0, end=math.inf, multiplier=0.0)
    threads = [
        ThreadSpec(1, 1, 12, curves.linear_need(1000.0, segments=[flat])),
        ThreadSpec(2, 1, 12, curves.linear_need(700.0)),
    ]
    return ScenarioDoc(
        bundle=make_bundle(threads, [100] * 12),
        strategy=StrategyConfig(kind=ADAPTIVE),
        params=SimParams(eta_cap=1.0, epsilon=0.1),
        verify=VerifyParams(eta=1.0, kappa=0.5, epsilon=0.1),
    )


BUILTIN_SCENARIOS = {
    'fig1': _fig1,
    'fig2': _fig2,
    'fig3': _fig3,
    'fig4': _fig4,
}


def builtin_scenario(name):
    """Get one of the built-in scenarios by name.

    Raises:
        UsageError: The name is unknown; the message lists valid names.
    """
    try:

        factory = BUILTIN_SCENARIOS[name]

    except KeyError:

        raise UsageError(
            'unknown scenario {0!r}; valid names: {1}'.format(
                name,
                ', '.join(sorted(BUILTIN_SCENARIOS)),
            ),
        )

    return factory()


def trace_to_dict(trace, include_runtime=False):
    """Get the structured form of a trace.

    ``runtime_ms`` is left out unless asked for so that identical runs
    serialize to identical bytes.
    """
    payload = {
        'schema_version': TRACE_SCHEMA_VERSION,
        'bundle_digest': trace.bundle_digest,
        'params': {
            'eta_cap': trace.params.eta_cap,
            'epsilon': trace.params.epsilon,
            'seed': trace.params.seed,
            'record_observed': trace.params.record_observed,
        },
        'rows': [
            {
                't': record.t,
                'capacity': record.capacity,
                'received': record.received,
                'fractions': {
                    str(thread_id): fraction
                    for thread_id, fraction in record.row.fractions.items()
                },
                'entries': [
                    {
                        'thread_id': entry.thread_id,
                        'fraction': entry.fraction,
                        'granted': entry.granted,
                        'processed': entry.processed,
                        'cumulative': entry.cumulative,
                        'true_error': entry.true_error,
                        'observed_error': entry.observed_error,
                    }
                    for entry in record.entries
                ],
            }
            for record in trace.rows
        ],
        'outcomes': [
            {
                'thread_id': outcome.thread_id,
                'status': outcome.status,
                'final_error': outcome.final_error,
                'deadline': outcome.deadline,
                'weight': outcome.weight,
                'switching_time': outcome.switching_time,
            }
            for outcome in trace.outcomes
        ],
        'warnings': list(trace.warnings),
    }
    if include_runtime:

        payload['runtime_ms'] = trace.runtime_ms

    return payload


def trace_from_dict(payload):
    """Rebuild a trace from its structured form."""
    if payload.get('schema_version') != TRACE_SCHEMA_VERSION:

        raise SchemaError('schema_version', 'not a structured trace')

    rows = tuple(
        SlotRecord(
            t=record['t'],
            capacity=record['capacity'],
            received=record['received'],
            row=AllocationRow(
                t=record['t'],
                fractions={
                    int(thread_id): fraction
                    for thread_id, fraction in record['fractions'].items()
                },
            ),
            entries=tuple(ThreadSlot(**entry) for entry in record['entries']),
        )
        for record in payload['rows']
    )
    return Trace(
        bundle_digest=payload['bundle_digest'],
        params=SimParams(**payload['params']),
        rows=rows,
        outcomes=tuple(Outcome(**outcome) for outcome in payload['outcomes']),
        warnings=tuple(payload['warnings']),
        runtime_ms=payload.get('runtime_ms', 0.0),
    )


def parse_trace(text):
    """Parse a structured trace document."""
    return trace_from_dict(json.loads(text))


def _csv_value(value):

    return '' if value is None else value


def write_trace(trace, fmt=CSV, include_runtime=False,
                json_provider=JSON_PROVIDER):
    """Serialize a trace.

    The CSV form has one row per (timeslot, effectively-alive thread) in
    TRACE_COLUMNS order, followed by one ``outcome`` row per thread:
    ``outcome, thread_id, status, switching_time, final_error``.

    Args:
        trace (Trace): The trace to write.
        fmt (str): 'csv' or 'structured'.
        include_runtime (bool): Keep the wall-clock runtime in structured
            output.
        json_provider: A callable converting a dictionary to JSON text.

    Returns:
        str: The document.
    """
    if fmt == STRUCTURED:

        return json_provider(
            trace_to_dict(trace, include_runtime),
            indent=2,
        ) + '\n'

    if fmt != CSV:

        raise UsageError('unknown trace format {0!r}'.format(fmt))

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(TRACE_COLUMNS)
    for record in trace.rows:

        for entry in record.entries:

            writer.writerow((
                record.t,
                entry.thread_id,
                entry.fraction,
                entry.granted,
                entry.processed,
                entry.cumulative,
                entry.true_error,
                _csv_value(entry.observed_error),
            ))

    for outcome in trace.outcomes:

        writer.writerow((
            OUTCOME_MARKER,
            outcome.thread_id,
            outcome.status,
            _csv_value(outcome.switching_time),
            outcome.final_error,
        ))

    return buffer.getvalue()


def verdict_to_dict(verdict):
    """Get the structured form of a verdict."""
    return {
        'schema_version': VERDICT_SCHEMA_VERSION,
        'learnable': verdict.learnable,
        'achieved_kappa': verdict.achieved_kappa,
        'condition_1': verdict.condition_1,
        'confidence_fraction': verdict.confidence_fraction,
        'budget_violation_at': verdict.budget_violation_at,
        'params': {
            'eta': verdict.params.eta,
            'kappa': verdict.params.kappa,
            'epsilon': verdict.params.epsilon,
            'delta': verdict.params.delta,
            'replicates': verdict.params.replicates,
        },
        'threads': [
            {
                'thread_id': thread.thread_id,
                'status': thread.status,
                'condition_2a': thread.condition_2a,
                'condition_2b': thread.condition_2b,
                'violated': list(thread.violated),
            }
            for thread in verdict.threads
        ],
        'replicate_kappas': list(verdict.replicate_kappas),
        'witness': None if verdict.witness is None else [
            {str(thread_id): value for thread_id, value in row.items()}
            for row in verdict.witness
        ],
    }


def verdict_from_dict(payload):
    """Rebuild a verdict from its structured form."""
    if payload.get('schema_version') != VERDICT_SCHEMA_VERSION:

        raise SchemaError('schema_version', 'not a structured verdict')

    witness = payload['witness']
    if witness is not None:

        witness = tuple(
            {int(thread_id): value for thread_id, value in row.items()}
            for row in witness
        )

    return Verdict(
        learnable=payload['learnable'],
        achieved_kappa=payload['achieved_kappa'],
        condition_1=payload['condition_1'],
        params=VerifyParams(**payload['params']),
        threads=tuple(
            ThreadVerdict(
                thread_id=thread['thread_id'],
                status=thread['status'],
                condition_2a=thread['condition_2a'],
                condition_2b=thread['condition_2b'],
                violated=tuple(thread['violated']),
            )
            for thread in payload['threads']
        ),
        confidence_fraction=payload['confidence_fraction'],
        budget_violation_at=payload['budget_violation_at'],
        replicate_kappas=tuple(payload['replicate_kappas']),
        witness=witness,
    )


def write_verdict(verdict, json_provider=JSON_PROVIDER):
    """Render a verdict as JSON text."""
    return json_provider(verdict_to_dict(verdict), indent=2) + '\n'


def parse_verdict(text):
    """Parse a JSON verdict document."""
    return verdict_from_dict(json.loads(text))


def write_frontier(points):
    """Render frontier points as an ``eta,kappa`` CSV document."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(('eta', 'kappa'))
    for point in points:

        writer.writerow((point.eta, point.kappa))

    return buffer.getvalue()


def parse_frontier(text):
    """Parse an ``eta,kappa`` CSV document back into frontier points."""
    reader = csv.DictReader(io.StringIO(text))
    return tuple(
        FrontierPoint(eta=float(row['eta']), kappa=float(row['kappa']))
        for row in reader
    )
