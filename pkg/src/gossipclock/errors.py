"""Exception hierarchy shared by all gossipclock modules."""

from __future__ import annotations

__all__ = [
    "GossipError",
    "InvalidParameterError",
    "UnsupportedDescriptorError",
    "InvalidAssignmentError",
    "SolverFailureError",
    "UnsupportedAnalyticError",
    "SizeGuardError",
]


class GossipError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(GossipError, ValueError):
    """A size or numeric parameter is outside its admissible range."""


class UnsupportedDescriptorError(GossipError, ValueError):
    """A generator descriptor names an unknown topology family."""


class InvalidAssignmentError(GossipError, ValueError):
    """A probability assignment violates stochasticity or sparsity rules."""


class SolverFailureError(GossipError, RuntimeError):
    """A numeric routine failed to produce an answer (e.g. no root bracketed)."""


class UnsupportedAnalyticError(GossipError, ValueError):
    """No closed form exists for the requested instance; use the numeric oracle."""


class SizeGuardError(GossipError, ValueError):
    """The requested construction would exceed the configured size limit."""
