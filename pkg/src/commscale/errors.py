"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "DomainError",
    "UnsupportedConfigError",
    "UnboundedPeakError",
    "QueueInstabilityError",
    "UnknownAgentError",
    "GraphFormatError",
    "CsvFormatError",
]


class DomainError(ValueError):
    """A mathematically invalid input or configuration."""


class UnsupportedConfigError(DomainError):
    """The requested quantity is not defined in this parameter regime."""


class UnboundedPeakError(DomainError):
    """The speedup curve increases without bound; there is no peak."""


class QueueInstabilityError(DomainError):
    """Arrival rate at or above service rate; the queue has no steady state."""


class UnknownAgentError(DomainError):
    """An agent id that is not present in the graph."""


class GraphFormatError(DomainError):
    """Malformed promise-graph text."""


class CsvFormatError(DomainError):
    """Malformed CSV input."""
