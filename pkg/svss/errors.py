"""Exception hierarchy shared by every svss module."""

from __future__ import annotations

from collections.abc import Mapping
from typing import Any


class SvssError(Exception):
    """Base error; ``exit_code`` is what the CLI returns when it surfaces."""

    exit_code: int = 2

    def __init__(self, message: str, *, context: Mapping[str, Any] | None = None) -> None:
        super().__init__(message)
        self.context = dict(context or {})


class ConfigError(SvssError, ValueError):
    """Raised when an environment setting cannot be honoured."""


# field_core


class MixedFieldsError(SvssError, ValueError):
    """Raised when operands live in different fields."""


class NotInFieldError(SvssError, ValueError):
    """Raised when an integer is not a canonical element of the field, or the field is invalid."""


class FieldDivisionError(SvssError, ZeroDivisionError):
    """Raised on inversion of, or division by, the zero element."""


class ZeroElementError(SvssError, ValueError):
    """Raised when the multiplicative order of zero is requested."""


class BadFactorizationError(SvssError, ValueError):
    """Raised when a supplied factorization does not multiply back to the group order."""


class FactorizationError(SvssError, ValueError):
    """Raised when trial division cannot finish factoring a group order."""


# encoding


class EmptySetError(SvssError, ValueError):
    """Raised when the bitsize of an empty set is requested."""


class EmptyStringError(SvssError, ValueError):
    """Raised when a split would produce an empty half."""


class TargetTooSmallError(SvssError, ValueError):
    """Raised when zero padding would have to drop bits."""


# numtheory


class CountExceedsAvailableError(SvssError, ValueError):
    """Raised when more distinct primitive elements are requested than exist."""


class NotMersenneExponentError(SvssError, ValueError):
    """Raised when 2^e - 1 is not prime."""


class SearchBudgetExhaustedError(SvssError, RuntimeError):
    """Raised when a prime search examines its whole candidate budget."""

    exit_code = 3


# polynomials


class DuplicateAbscissaError(SvssError, ValueError):
    """Raised when interpolation points repeat an abscissa."""


class BothZeroError(SvssError, ValueError):
    """Raised when the gcd of two zero polynomials is requested."""


class FieldTooLargeError(SvssError, ValueError):
    """Raised when an exhaustive scan would exceed the configured limit."""


class DegreeTooLargeError(SvssError, ValueError):
    """Raised when a polynomial degree cannot fit the field."""


# shamir


class BadThresholdError(SvssError, ValueError):
    """Raised when 0 < t <= n does not hold."""


class FieldTooSmallError(SvssError, ValueError):
    """Raised when the field cannot hold n distinct nonzero abscissas."""


class NotEnoughSharesError(SvssError, ValueError):
    """Raised when fewer than t shares are supplied."""


class DuplicateIndexError(SvssError, ValueError):
    """Raised when two shares claim the same index."""


# schemes


class IndexOutOfRangeError(SvssError, IndexError):
    """Raised when a shareholder index has no commitment."""


class BadParamsError(SvssError, ValueError):
    """Raised when public parameters are inconsistent."""


class DuplicateShareValueError(SvssError, ValueError):
    """Raised when two shares carry the same value; the dealer must regenerate."""


class ShareOutOfFieldError(SvssError, ValueError):
    """Raised when a share does not fit the verification domain."""


class MidHalfCollisionError(SvssError, ValueError):
    """Raised when two shares have the same most significant half."""


class RetryBudgetExhaustedError(SvssError, RuntimeError):
    """Raised when the dealer regenerated shares too many times."""

    exit_code = 4


class NotPrimitiveError(SvssError, ValueError):
    """Raised when a verification base does not generate the multiplicative group."""


class SelfVerificationError(SvssError, ValueError):
    """Raised when a private bundle is asked about its own holder's share."""


class BundleTooLargeError(SvssError, ValueError):
    """Raised when a bundle outgrows its information-rate total."""


# coherence


class CoalitionTooSmallError(SvssError, ValueError):
    """Raised when the coalition does not exceed the threshold."""


class NoMajorityError(SvssError, RuntimeError):
    """Raised when no unique most frequent secret exists."""

    exit_code = 5


class SubsetLimitExceededError(SvssError, ValueError):
    """Raised when C(m, t) exceeds the configured subset limit."""


# analysis


class TrivialGcdError(SvssError, RuntimeError):
    """Raised when the collusion gcd carries no root information."""


# documents


class DocumentError(SvssError, ValueError):
    """Raised when a document cannot be parsed or does not match its use."""


__all__ = [name for name in dir() if name.endswith("Error")]
