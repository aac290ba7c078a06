"""Exception hierarchy shared across the package."""


class ContrastsumError(Exception):
    """Base class for all package errors."""


class InvalidInputError(ContrastsumError, ValueError):
    """Malformed caller-supplied values (NaN entries, length mismatches, ...)."""


class InvalidStateError(ContrastsumError, RuntimeError):
    """Operation invoked on an object in a state that forbids it."""


class InvalidTokenError(ContrastsumError, ValueError):
    """Snapshot token that does not belong to the simulator it was handed to."""


class ConfigurationError(ContrastsumError, ValueError):
    """Bad run configuration (unresolvable names, out-of-range parameters)."""


class VerificationError(ContrastsumError, RuntimeError):
    """Replay or integrity check failed."""
