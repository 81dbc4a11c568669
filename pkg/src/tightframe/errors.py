class TightFrameError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(TightFrameError, ValueError):
    """Input does not satisfy an operation's requirements."""


class VerificationError(TightFrameError):
    """A computed identity failed to hold within tolerance."""

    def __init__(self, message: str, stage: str | None = None, residual: float | None = None):
        super().__init__(f"[{stage}] {message}" if stage else message)
        self.stage = stage
        self.residual = residual


class InternalConsistencyError(TightFrameError, RuntimeError):
    """Two routes that must agree did not."""
