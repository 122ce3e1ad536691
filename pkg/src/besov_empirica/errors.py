"""Exception types shared across the package."""


class BesovEmpiricaError(Exception):
    """Base class for all package errors."""


class ParameterError(BesovEmpiricaError, ValueError):
    """A parameter violates its documented domain.

    Carries the offending parameter name so command-line handling can
    point at the exact key in its diagnostic.
    """

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message


class TiesError(BesovEmpiricaError):
    """Tied observations in a sample that should be almost surely tie-free.

    Ties have probability zero under the sampling model, so hitting one
    signals generator misuse.  Callers must abort, never perturb.
    """


class AggregationError(BesovEmpiricaError):
    """Replicate partials do not cover the replicate range exactly once."""
