# apps/core/exceptions.py
# --------------------------------
# Error hierarchy shared by every TrapLab app.
# Management commands catch TrapLabError and turn it into CommandError.

from __future__ import annotations

from typing import Optional, Tuple


class TrapLabError(Exception):
    """Base class for all TrapLab failures."""


class SizeError(TrapLabError):
    """Requested object is outside the supported size range."""


class SamplingError(TrapLabError):
    """A rejection sampler ran out of attempts."""


class DegenerateSampleError(SamplingError):
    """A random object came out too small to be useful; resampling is advised."""


class InputError(TrapLabError, ValueError):
    """Invalid caller-supplied values."""


class GraphValidationError(InputError):
    """Adjacency data that does not describe a simple connected graph."""


class DomainError(TrapLabError):
    """The quantity is undefined for these arguments (e.g. a ball covering the graph)."""


class PreconditionError(TrapLabError):
    """A structural precondition does not hold.

    `pair` names the offending vertices when the failure is a separation check.
    """

    def __init__(self, message: str, pair: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class BudgetError(TrapLabError):
    """A simulation exceeded its step budget."""


class EmptyTraceError(TrapLabError):
    """A trajectory never visited the trace set."""


class ConfigError(TrapLabError):
    """Experiment configuration cannot be run as given."""
