"""Exception types shared across the package."""


class EngineError(Exception):
    """Base class for numerical / physics errors raised by the simulator."""


class InvalidState(EngineError):
    """A two-photon input state contains terms the circuit cannot route."""


class NormalizationFailure(EngineError):
    """The plateau normalizer of a coincidence probability vanished."""


class ProtocolViolation(EngineError):
    """The factorized fringe law was evaluated outside its validity domain."""


class QuadratureNotConverged(EngineError):
    """Grid doubling did not stabilize a numerical integral."""


class FitError(EngineError):
    """Base class for estimator failures."""


class FitDiverged(FitError):
    """A nonlinear least-squares fit failed to converge."""


class InsufficientData(FitError):
    """Too few records to run an estimator."""


class NoBeatDetected(FitError):
    """No statistically significant beat oscillation in the data."""


class FeatureOutOfWindow(FitError):
    """The fitted envelope feature lies outside the scanned window."""


class SchemaError(Exception):
    """A configuration document or CSV file violates its schema."""


class GridTooCoarse(UserWarning):
    """A scan grid undersamples the shortest oscillation in the signal."""
