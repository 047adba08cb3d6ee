"""Exception types shared across the package."""


class StegoError(Exception):
    """Base class for every error this package raises on purpose."""


class DomainError(StegoError):
    """A parameter lies outside the contract of the operation."""


class CapacityError(StegoError):
    """An exact enumeration would exceed the configured cap."""


class KeyUnderflowError(StegoError):
    """The key stream cannot supply the requested number of bits."""


class AtypicalStringError(StegoError):
    """The received string falls outside the compiled typical window."""


class NotACodewordError(StegoError):
    """The received string is typical but not in the keyed codeword subset."""


class IntegrityError(StegoError):
    """An internal consistency check failed; indicates a bug, not bad input."""
