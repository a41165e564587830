"""Exception hierarchy shared by the library and the CLI."""


class HeegaardError(Exception):
    """Base class for every error raised by the package."""


class InputParseError(HeegaardError, ValueError):
    """An input file or value could not be parsed."""


class DimensionError(HeegaardError, ValueError):
    """A matrix has the wrong shape for the requested operation."""


class NotSymplecticError(HeegaardError, ValueError):
    """A matrix violates one of the symplectic block identities."""

    def __init__(self, identity: str, message: str | None = None):
        self.identity = identity
        super().__init__(message or f"matrix is not symplectic: {identity} fails")


class SizeLimitError(HeegaardError):
    """An enumeration would exceed the configured bound."""

    def __init__(self, size: int, limit: int, what: str = "enumeration"):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} over {size} elements exceeds the limit {limit}")


class NotLiftableError(HeegaardError, ArithmeticError):
    """Hensel lifting is impossible because the derivative vanishes mod p."""


class NonCoprimeModuliError(HeegaardError, ValueError):
    """Chinese remaindering was asked to combine non-coprime moduli."""


class NotPrimeError(HeegaardError, ValueError):
    """A modulus required to be an odd prime is not one."""


class LevelError(HeegaardError, ValueError):
    """A cyclotomic element was embedded into a smaller ring."""


class NotGeneratingError(HeegaardError, ValueError):
    """Generator images do not generate the torsion group."""


class ConsistencyError(HeegaardError, AssertionError):
    """An internal re-verification failed; the inputs reached an impossible state."""


class InvalidLinkingError(HeegaardError, ValueError):
    """Torsion coefficients or a linking matrix violate the linked-group invariants."""
