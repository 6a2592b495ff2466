"""Shamir (t, n) threshold sharing: the substrate every verification scheme wraps."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from random import Random

from .errors import (
    BadThresholdError,
    DuplicateIndexError,
    FieldTooSmallError,
    MixedFieldsError,
    NotEnoughSharesError,
)
from .fields import FieldElement, FieldSpec
from .polynomials import PointSet, Polynomial, lagrange_interpolate, random_polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Share:
    index: int
    value: FieldElement

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"Share index must be >= 1, got {self.index}")

    @property
    def field(self) -> FieldSpec:
        return self.value.field

    def abscissa(self) -> FieldElement:
        """The field element standing for the index; binary fields read it as a bit pattern."""

        return self.field.element(self.index)


@dataclass(frozen=True, slots=True)
class ShareSet:
    shares: tuple[Share, ...]
    threshold: int
    total: int
    field: FieldSpec

    def __post_init__(self) -> None:
        _check_threshold(self.threshold, self.total, self.field)
        _check_indices(self.shares)

    def values(self) -> list[int]:
        return [share.value.value for share in self.shares]

    def __iter__(self):
        return iter(self.shares)

    def __len__(self) -> int:
        return len(self.shares)

    def by_index(self, index: int) -> Share:
        for share in self.shares:
            if share.index == index:
                return share
        raise KeyError(index)


def _check_threshold(t: int, n: int, field: FieldSpec) -> None:
    if not 0 < t <= n:
        raise BadThresholdError(f"Need 0 < t <= n, got t={t}, n={n}", context={"t": t, "n": n})
    if n >= field.size:
        raise FieldTooSmallError(
            f"{field} cannot hold {n} distinct nonzero abscissas",
            context={"n": n, "size": field.size},
        )


def _check_indices(shares: Iterable[Share]) -> None:
    seen: set[int] = set()
    for share in shares:
        if share.index in seen:
            raise DuplicateIndexError(
                f"Share index {share.index} appears twice", context={"index": share.index}
            )
        seen.add(share.index)


def deal_polynomial(polynomial: Polynomial, n: int, t: int) -> ShareSet:
    """Shares s_i = P(i) for i = 1..n."""

    field = polynomial.field
    _check_threshold(t, n, field)
    shares = tuple(Share(i, polynomial.evaluate(field.element(i))) for i in range(1, n + 1))
    return ShareSet(shares, t, n, field)


def deal(secret: FieldElement, t: int, n: int, rng: Random) -> ShareSet:
    _check_threshold(t, n, secret.field)
    polynomial = random_polynomial(t - 1, secret, rng)
    logger.debug("Dealt (%d, %d) shares over %s", t, n, secret.field)
    return deal_polynomial(polynomial, n, t)


def interpolate_shares(shares: Sequence[Share]) -> Polynomial:
    return lagrange_interpolate(PointSet(tuple((s.abscissa(), s.value) for s in shares)))


def reconstruct(shares: Sequence[Share], t: int) -> FieldElement:
    """P(0) from the first t shares."""

    if len(shares) < t or t < 1:
        raise NotEnoughSharesError(
            f"Need {t} shares, got {len(shares)}", context={"t": t, "given": len(shares)}
        )
    _check_indices(shares)
    chosen = list(shares[:t])
    field = chosen[0].field
    if any(share.field != field for share in chosen):
        raise MixedFieldsError("Shares come from different fields")
    return interpolate_shares(chosen).evaluate(field.zero)


def shares_from_values(values: Iterable[int], field: FieldSpec) -> list[Share]:
    """Wrap raw share values from any scheme, numbering them 1..n."""

    return [Share(i, field.element(value)) for i, value in enumerate(values, start=1)]
