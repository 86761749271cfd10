"""Exception and warning types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class IdemError(Exception):
    """Base class for all package errors."""


class OrderMismatchError(IdemError, ValueError):
    pass


class NotUnitaryError(IdemError, ValueError):
    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(IdemError, RuntimeError):
    pass


class ConditionNotSatisfiedError(IdemError, ValueError):
    """A block-determinant commutation premise failed."""


class NotIdempotentError(IdemError, ValueError):
    pass


class NonUnitVectorError(IdemError, ValueError):
    pass


class ZeroCoefficientError(IdemError, ZeroDivisionError):
    """Raised when inverting an element with a zero coefficient (a zero divisor)."""


class CollisionError(IdemError, ValueError):
    """Two members coincide (duplicate, antipodal or orbit collision)."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class ReferenceDeviation:
    """A published value that disagrees with what is computed here."""

    code: str
    message: str
    claimed: float | str | None = None
    computed: float | str | None = None

    def as_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "claimed": self.claimed,
            "computed": self.computed,
        }


class ReferenceDeviationWarning(UserWarning):
    def __init__(self, deviation: ReferenceDeviation):
        super().__init__(f"[{deviation.code}] {deviation.message}")
        self.deviation = deviation


def warn_deviation(deviation: ReferenceDeviation, stacklevel: int = 3) -> None:
    import warnings

    warnings.warn(ReferenceDeviationWarning(deviation), stacklevel=stacklevel)
