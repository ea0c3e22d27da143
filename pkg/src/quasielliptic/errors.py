"""Exception hierarchy shared by all modules."""


class QEError(Exception):
    """Base class; the CLI maps subclasses of DomainError to exit code 3."""


class DomainError(QEError):
    pass


class PromotionUndefined(DomainError):
    pass


class DivisionByZero(DomainError):
    pass


class PrecisionUnreachable(DomainError):
    pass


class DegenerateLattice(DomainError):
    pass


class DependentPeriods(DomainError):
    pass


class CertificationFailed(DomainError):
    pass


class AmbiguousReduction(DomainError):
    pass


class PoleAtLatticePoint(DomainError):
    pass


class NotALatticeRelation(DomainError):
    pass


class NotDistinct(DomainError):
    pass


class ZeroInput(DomainError):
    pass


class InvalidMultiplier(DomainError):
    pass


class DepthUnrepresentable(DomainError):
    pass


class DepthExceeded(DomainError):
    pass


class InvalidShape(DomainError):
    pass


class InvalidInput(DomainError):
    pass


class ZeroDenominator(DomainError):
    pass


class TieUnresolved(DomainError):
    pass


class ParseError(QEError):
    """Malformed user input (CLI exit code 2)."""
