"""Exception types shared across the package."""


class EksrError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(EksrError):
    """Raised when an instance file or verifier spec is malformed."""


class CapExceededError(EksrError):
    """Raised when an operation would exceed its configured size cap."""
