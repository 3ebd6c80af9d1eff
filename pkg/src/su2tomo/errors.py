"""Exception hierarchy shared by all su2tomo modules."""

from __future__ import annotations


class SU2TomoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SU2TomoError, ValueError):
    """Invalid quantum numbers, shapes, or arguments outside their domain."""


class ProtocolError(SU2TomoError, ValueError):
    """A physical configuration that cannot realise the reconstruction protocol."""


class UnsupportedConfigurationError(ProtocolError):
    pass


class NumericalError(SU2TomoError, ArithmeticError):
    """Base for failures of a numerical procedure on otherwise valid input."""


def _half(twice: int) -> str:
    return str(twice // 2) if twice % 2 == 0 else f"{twice}/2"


class VanishingDenominatorError(NumericalError):
    """Readout Clebsch-Gordan denominators vanish for some multipole orders.

    The offending orders are available as ``ls``.
    """

    def __init__(self, two_j, two_mu, ls):
        self.two_j = two_j
        self.two_mu = two_mu
        self.ls = tuple(ls)
        super().__init__(
            f"readout mu={_half(two_mu)} for j={_half(two_j)} has vanishing "
            f"<j,mu;l,0|j,mu> for l in {list(self.ls)}; use mu=+j or mu=-j"
        )


class GridTooCoarseError(NumericalError):
    def __init__(self, degree, required):
        self.degree = degree
        self.required = required
        super().__init__(
            f"quadrature grid is exact only through degree {degree}, "
            f"but degree {required} is required"
        )


class InconsistentCoefficientsError(NumericalError):
    pass


class StationaryPointError(NumericalError):
    pass


class JCInversionError(NumericalError):
    pass


class ConfigError(SU2TomoError, ValueError):
    """Invalid configuration document; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class FormatError(SU2TomoError, ValueError):
    """Malformed input file; ``line`` is the 1-based line number when known."""

    def __init__(self, source: str, line: int | None, message: str):
        self.source = source
        self.line = line
        where = f"{source}, line {line}" if line is not None else source
        super().__init__(f"{where}: {message}")
