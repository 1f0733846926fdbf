"""Exception types raised across the package."""


class ListRecError(Exception):
    """Base class for all package errors."""


class NotPrime(ListRecError, ValueError):
    pass


class FieldTooLarge(ListRecError, ValueError):
    pass


class NoIrreducibleFound(ListRecError, RuntimeError):
    pass


class DivisionByZero(ListRecError, ZeroDivisionError):
    pass


class LengthMismatch(ListRecError, ValueError):
    pass


class FieldMismatch(ListRecError, ValueError):
    pass


class OutOfDomain(ListRecError, ValueError):
    pass


class OutOfRange(ListRecError, ValueError):
    pass


class SizeMismatch(ListRecError, ValueError):
    pass


class OmegaOutOfRange(ListRecError, ValueError):
    pass


class EtaInfeasible(ListRecError, ValueError):
    pass


class TooLarge(ListRecError, RuntimeError):
    """An exact enumeration would exceed the configured cap."""


class NotExtensionField(ListRecError, ValueError):
    pass


class BadDegree(ListRecError, ValueError):
    pass


class BudgetExceeded(ListRecError, RuntimeError):
    pass


class ConfigInfeasible(ListRecError, ValueError):
    pass
