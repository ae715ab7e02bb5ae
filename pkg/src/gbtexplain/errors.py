"""Exception types shared across the engine."""


class ModelFormatError(ValueError):
    """The model file or feature-map file violates the on-disk format."""


class InstanceFormatError(ValueError):
    """An instance file row cannot be turned into a total cube."""


class PartialCubeError(ValueError):
    """A total assignment was required but some feature is unassigned."""


class NotEntailingError(ValueError):
    """refine() received a candidate that does not entail the prediction.

    The caller should run repair() instead.
    """


class IndeterminateError(RuntimeError):
    """A query exceeded its node or wall-clock budget.

    This is never a verdict: the engine refuses to guess when it cannot
    finish the search exactly.
    """

    def __init__(self, message: str, phase: str | None = None):
        super().__init__(message)
        self.phase = phase


class BruteForceCapError(RuntimeError):
    """The exhaustive reference oracle was asked to enumerate too many cells."""


class InternalCheckError(AssertionError):
    """An internal soundness re-check failed; indicates a bug, not bad input."""
