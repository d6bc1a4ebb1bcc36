"""Exception types raised by coresched."""

from __future__ import division
from __future__ import absolute_import
from __future__ import print_function
from __future__ import unicode_literals


class CoreError(Exception):

    """Base class for every error raised by this package."""


class ValidationError(CoreError, ValueError):

    """A value violates a documented invariant.

    Attributes:
        field (str): Dotted path of the offending field.
    """

    def __init__(self, field, message, report=None):
        """Initialize with the offending field and a description.

        Args:
            field (str): Dotted path of the offending field.
            message (str): Human readable description of the violation.
            report (ValidationReport): Optional full report when the error
                summarizes a bundle validation.
        """
        super(ValidationError, self).__init__(
            '{0}: {1}'.format(field, message),
        )
        self.field = field
        self.message = message
        self.report = report


class UsageError(CoreError, ValueError):

    """An operation was called outside of its preconditions."""


class ConfigurationError(CoreError, ValueError):

    """A strategy or run configuration cannot be honoured."""


class BudgetViolation(CoreError):

    """A strategy emitted an allocation row that breaks the budget audit."""

    def __init__(self, timeslot, message):
        """Initialize with the slot that failed the audit."""
        super(BudgetViolation, self).__init__(
            'timeslot {0}: {1}'.format(timeslot, message),
        )
        self.timeslot = timeslot


class OracleLimitError(CoreError):

    """An instance is too large for the exhaustive search."""

    def __init__(self, size, limits):
        """Initialize with the measured size and the configured limits.

        Args:
            size (dict): Measured threads, horizon and quantum.
            limits (dict): Maximum allowed value for each key of size.
        """
        report = ', '.join(
            '{0}={1} (limit {2})'.format(key, size[key], limits[key])
            for key in sorted(size)
        )
        super(OracleLimitError, self).__init__(
            'instance beyond exhaustive search limits: ' + report,
        )
        self.size = size
        self.limits = limits


class ScenarioError(CoreError):

    """A scenario document cannot be turned into a ScenarioDoc."""


class ScenarioSyntaxError(ScenarioError):

    """The document is not well-formed YAML."""

    def __init__(self, line, column, problem):
        """Initialize with a 1-based position."""
        super(ScenarioSyntaxError, self).__init__(
            'line {0}, column {1}: {2}'.format(line, column, problem),
        )
        self.line = line
        self.column = column


class SchemaError(ScenarioError):

    """The document does not follow the scenario schema."""

    def __init__(self, path, message):
        """Initialize with the path of the offending field."""
        super(SchemaError, self).__init__('{0}: {1}'.format(path, message))
        self.path = path


class SemanticError(ScenarioError):

    """The document parses but the bundle it describes is invalid."""

    def __init__(self, report):
        """Initialize with the ValidationReport describing the bundle."""
        super(SemanticError, self).__init__(str(report))
        self.report = report
