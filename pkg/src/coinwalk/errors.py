"""Exception types shared across the package."""


class CoinwalkError(Exception):
    """Base class for all library errors."""


class DegenerateCoinError(CoinwalkError):
    """Coin parameter on the unit circle: the lattice disconnects."""


class AssumptionError(CoinwalkError):
    """Spectral operation on a sequence whose imaginary part varies by site."""


class WrongClassError(CoinwalkError):
    """Operation requires a different recurrence class."""


class ZeroStateError(CoinwalkError):
    """Rayleigh quotient of the zero state is undefined."""


class CertificationError(CoinwalkError):
    """A numerically certified eigenpair failed a consistency check."""


class ResourceLimitError(CoinwalkError):
    """Evolution or truncation window exceeded the configured cap."""


class InputFormatError(CoinwalkError):
    """Malformed file or parameter input."""
