"""Exception hierarchy for the comanet package."""


class ComanetError(Exception):
    """Base class for all comanet errors."""


class ConfigError(ComanetError):
    """Invalid configuration parameter (bad level index, alpha out of range,
    non-positive device count or space dimensions)."""


class OutOfBoundsError(ComanetError):
    """A point lies outside the space it is being located in."""


class FormatError(ComanetError):
    """A document could not be parsed.  ``field`` names the offending field."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class NetworkValidationError(ComanetError):
    """A structurally well-formed document violates a network invariant,
    or an operation received data inconsistent with its network."""


class NoFeasiblePathError(ComanetError):
    """The destination is not reachable from the source (no feasible path)."""


class NetworkTooLargeError(ComanetError):
    """The network exceeds the device limit of an exhaustive operation."""
