"""Exact arithmetic in prime fields GF(p) and binary fields GF(2^k).

Elements of GF(2^k) are stored as the integer whose bits are the polynomial's
coefficients (bit i is the coefficient of x^i). That same integer is the natural
number used whenever an element appears as an exponent.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from random import Random

import gmpy2

from .errors import (
    BadFactorizationError,
    FieldDivisionError,
    MixedFieldsError,
    NotInFieldError,
    ZeroElementError,
)

logger = logging.getLogger(__name__)


class FieldKind(StrEnum):
    PRIME = "prime"
    BINARY = "binary"


# GF(2)[x] helpers; polynomials are ints with bit i = coefficient of x^i.


def xmul(a: int, b: int) -> int:
    """Carry-less multiplication."""

    result = 0
    while a:
        if a & 1:
            result ^= b
        a >>= 1
        b <<= 1
    return result


def xmod(a: int, b: int) -> int:
    """Carry-less remainder of a by b (b != 0)."""

    width = b.bit_length()
    while a.bit_length() >= width:
        a ^= b << (a.bit_length() - width)
    return a


def xgcd_gf2(a: int, b: int) -> int:
    while b:
        a, b = b, xmod(a, b)
    return a


def _prime_divisors(n: int) -> list[int]:
    divisors = []
    candidate = 2
    while candidate * candidate <= n:
        if n % candidate == 0:
            divisors.append(candidate)
            while n % candidate == 0:
                n //= candidate
        candidate += 1
    if n > 1:
        divisors.append(n)
    return divisors


def _frobenius(poly: int, rounds: int) -> int:
    """x^(2^rounds) mod poly."""

    h = xmod(0b10, poly)
    for _ in range(rounds):
        h = xmod(xmul(h, h), poly)
    return h


def is_irreducible_gf2(poly: int) -> bool:
    """Rabin's irreducibility test over GF(2)."""

    k = poly.bit_length() - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = 0b10
    if _frobenius(poly, k) != x:
        return False
    for d in _prime_divisors(k):
        h = _frobenius(poly, k // d)
        if xgcd_gf2(poly, h ^ x) != 1:
            return False
    return True


@lru_cache(maxsize=256)
def reduction_polynomial(k: int) -> int:
    """Lowest-weight irreducible polynomial of degree k: a trinomial, else a pentanomial.

    Entries are searched on first use and cached, which stands in for a fixed
    table covering k <= 64 and the Mersenne exponents. ``binary_field`` takes an
    explicit polynomial when a caller wants a different one.
    """

    if k < 1:
        raise NotInFieldError(f"Binary field degree must be positive, got {k}")
    if k == 1:
        return 0b11
    top = (1 << k) | 1
    for a in range(1, k):
        candidate = top | (1 << a)
        if is_irreducible_gf2(candidate):
            return candidate
    for c in range(3, k):
        for b in range(2, c):
            for a in range(1, b):
                candidate = top | (1 << c) | (1 << b) | (1 << a)
                if is_irreducible_gf2(candidate):
                    return candidate
    raise NotInFieldError(f"No low-weight irreducible polynomial of degree {k}")


@lru_cache(maxsize=512)
def _validate_field(
    kind: FieldKind, modulus: int | None, degree: int | None, poly: int | None
) -> None:
    if kind is FieldKind.PRIME:
        from .numtheory import is_prime

        if modulus is None or degree is not None or poly is not None:
            raise NotInFieldError("A prime field carries a modulus only")
        if not is_prime(modulus):
            raise NotInFieldError(
                f"Field modulus {modulus:#x} is not prime", context={"modulus": modulus}
            )
        return
    if degree is None or poly is None or modulus is not None:
        raise NotInFieldError("A binary field carries a degree and a reduction polynomial")
    if poly.bit_length() - 1 != degree or not poly & 1:
        raise NotInFieldError(
            f"Reduction polynomial {poly:#x} does not have degree {degree} with constant term",
            context={"degree": degree, "polynomial": poly},
        )
    if not is_irreducible_gf2(poly):
        raise NotInFieldError(
            f"Reduction polynomial {poly:#x} is reducible", context={"polynomial": poly}
        )


@dataclass(frozen=True, slots=True)
class FieldSpec:
    kind: FieldKind
    modulus: int | None = None
    degree: int | None = None
    reduction_polynomial: int | None = None

    def __post_init__(self) -> None:
        _validate_field(self.kind, self.modulus, self.degree, self.reduction_polynomial)

    @property
    def is_prime(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def size(self) -> int:
        if self.kind is FieldKind.PRIME:
            return self.modulus  # type: ignore[return-value]
        return 1 << self.degree  # type: ignore[operator]

    @property
    def group_order(self) -> int:
        return self.size - 1

    @property
    def element_bits(self) -> int:
        """Bits needed to write any element, bs(size - 1)."""

        return max(1, (self.size - 1).bit_length())

    def contains(self, value: int) -> bool:
        return 0 <= value < self.size

    def element(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def elements(self) -> Iterable[FieldElement]:
        for value in range(self.size):
            yield FieldElement(value, self)

    def random_element(self, rng: Random, *, nonzero: bool = False) -> FieldElement:
        return FieldElement(rng.randrange(1 if nonzero else 0, self.size), self)

    def descriptor(self) -> str:
        if self.kind is FieldKind.PRIME:
            return f"prime {self.modulus:x}"
        return f"binary {self.degree} {self.reduction_polynomial:x}"

    def __str__(self) -> str:
        if self.kind is FieldKind.PRIME:
            return f"GF({self.modulus})"
        return f"GF(2^{self.degree})"

    # raw integer arithmetic; inputs are assumed canonical

    def add(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            total = a + b
            return total - self.modulus if total >= self.modulus else total
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            return (a - b) % self.modulus
        return a ^ b

    def neg(self, a: int) -> int:
        if self.kind is FieldKind.PRIME:
            return (-a) % self.modulus
        return a

    def mul(self, a: int, b: int) -> int:
        if self.kind is FieldKind.PRIME:
            return a * b % self.modulus
        return xmod(xmul(a, b), self.reduction_polynomial)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("Exponents are natural numbers")
        if self.kind is FieldKind.PRIME:
            return int(gmpy2.powmod(a, e, self.modulus))
        if e == 0:
            return 1
        if a == 0:
            return 0
        e %= self.group_order
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionError(f"Zero has no inverse in {self}")
        if self.kind is FieldKind.PRIME:
            return int(gmpy2.invert(a, self.modulus))
        # a^(2^k - 2) = a^-1 in GF(2^k)*
        return self.pow(a, self.group_order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(FieldKind.PRIME, modulus=p)


def binary_field(k: int, polynomial: int | None = None) -> FieldSpec:
    poly = reduction_polynomial(k) if polynomial is None else polynomial
    return FieldSpec(FieldKind.BINARY, degree=k, reduction_polynomial=poly)


@dataclass(frozen=True, slots=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self) -> None:
        if not self.field.contains(self.value):
            raise NotInFieldError(
                f"{self.value} is not an element of {self.field}",
                context={"value": self.value},
            )

    def _other(self, other: FieldElement) -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"Expected a FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise MixedFieldsError(f"Cannot combine elements of {self.field} and {other.field}")
        return other.value

    def __add__(self, other: FieldElement) -> FieldElement:
        return FieldElement(self.field.add(self.value, self._other(other)), self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        return FieldElement(self.field.sub(self.value, self._other(other)), self.field)

    def __mul__(self, other: FieldElement) -> FieldElement:
        return FieldElement(self.field.mul(self.value, self._other(other)), self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return FieldElement(self.field.div(self.value, self._other(other)), self.field)

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field.neg(self.value), self.field)

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(self.field.pow(self.value, exponent), self.field)

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.value}, {self.field})"


def power(a: FieldElement, e: int, *, field: FieldSpec | None = None) -> FieldElement:
    """a^e for a natural e; 0^0 is 1."""

    if field is not None and a.field != field:
        raise MixedFieldsError(f"Base lives in {a.field}, expected {field}")
    return a**e


def multiplicative_order(a: FieldElement, factorization: Iterable[tuple[int, int]]) -> int:
    """Least d >= 1 with a^d = 1, found by dividing prime factors out of the group order."""

    if a.value == 0:
        raise ZeroElementError("Zero has no multiplicative order")
    factors = list(factorization)
    product = 1
    for prime, exponent in factors:
        product *= prime**exponent
    field = a.field
    if product != field.group_order:
        raise BadFactorizationError(
            f"Factorization multiplies to {product}, group order is {field.group_order}",
            context={"factors": factors},
        )
    order = field.group_order
    for prime, exponent in factors:
        order //= prime**exponent
        value = field.pow(a.value, order)
        while value != 1:
            value = field.pow(value, prime)
            order *= prime
    return order
