"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(ValueError):
    """A structural parameter (degree, block size, cutoff, ...) is unusable."""


class AccuracyError(ArithmeticError):
    """A construction could not meet its accuracy contract.

    Carries the accuracy actually achieved in ``achieved``.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved


class CutoffError(RuntimeError):
    """A tracked-prime cutoff proved too small for the requested range.

    ``required`` suggests a cutoff that would have been large enough.
    """

    def __init__(self, message: str, required: int):
        super().__init__(f"{message} (use cutoff >= {required})")
        self.required = required


class CapacityError(RuntimeError):
    """A hard memory cap (memo entries, buffers) was exceeded."""


class CheckpointError(RuntimeError):
    """A checkpoint file is malformed, corrupt, or from a mismatched run."""
