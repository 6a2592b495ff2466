"""Polynomials over GF(p) and GF(2^k).

Coefficients are held as canonical integers, index i being the coefficient of
x^i. The zero polynomial is stored as ``(0,)`` and reports degree -1, which
stands in for minus infinity.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from random import Random

from .errors import (
    BothZeroError,
    DegreeTooLargeError,
    DuplicateAbscissaError,
    FieldDivisionError,
    FieldTooLargeError,
    MixedFieldsError,
)
from .fields import FieldElement, FieldSpec

logger = logging.getLogger(__name__)

ZERO_DEGREE = -1
DEFAULT_SCAN_LIMIT = 2**24


def _strip(values: Sequence[int]) -> tuple[int, ...]:
    end = len(values)
    while end > 1 and values[end - 1] == 0:
        end -= 1
    return tuple(values[:end]) if end else (0,)


@dataclass(frozen=True, slots=True)
class Polynomial:
    field: FieldSpec
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = _strip(tuple(self.values))
        for value in values:
            if not self.field.contains(value):
                raise ValueError(f"Coefficient {value} is not in {self.field}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_elements(cls, coefficients: Sequence[FieldElement]) -> Polynomial:
        if not coefficients:
            raise ValueError("A polynomial needs at least one coefficient")
        field = coefficients[0].field
        for coefficient in coefficients:
            if coefficient.field != field:
                raise MixedFieldsError("Coefficients come from different fields")
        return cls(field, tuple(c.value for c in coefficients))

    @property
    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(value, self.field) for value in self.values)

    @property
    def is_zero(self) -> bool:
        return self.values == (0,)

    @property
    def degree(self) -> int:
        return ZERO_DEGREE if self.is_zero else len(self.values) - 1

    @property
    def leading(self) -> int:
        return self.values[-1]

    def padded(self, length: int) -> tuple[int, ...]:
        """Coefficients zero-extended to ``length`` entries (never truncated)."""

        return self.values + (0,) * max(0, length - len(self.values))

    def evaluate_raw(self, x: int) -> int:
        field = self.field
        result = 0
        for coefficient in reversed(self.values):
            result = field.add(field.mul(result, x), coefficient)
        return result

    def evaluate(self, x: FieldElement | int) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self.field:
                raise MixedFieldsError(f"Cannot evaluate a {self.field} polynomial at {x}")
            x = x.value
        return FieldElement(self.evaluate_raw(x), self.field)

    __call__ = evaluate

    def _check(self, other: Polynomial) -> None:
        if other.field != self.field:
            raise MixedFieldsError(f"Cannot combine polynomials over {self.field} and {other.field}")

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        width = max(len(self.values), len(other.values))
        a, b = self.padded(width), other.padded(width)
        return Polynomial(self.field, tuple(self.field.add(x, y) for x, y in zip(a, b, strict=True)))

    def __neg__(self) -> Polynomial:
        return Polynomial(self.field, tuple(self.field.neg(v) for v in self.values))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        field = self.field
        if self.is_zero or other.is_zero:
            return Polynomial(field, (0,))
        product = [0] * (len(self.values) + len(other.values) - 1)
        for i, a in enumerate(self.values):
            if a == 0:
                continue
            for j, b in enumerate(other.values):
                product[i + j] = field.add(product[i + j], field.mul(a, b))
        return Polynomial(field, tuple(product))

    def scale(self, factor: int) -> Polynomial:
        return Polynomial(self.field, tuple(self.field.mul(v, factor) for v in self.values))

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return self.scale(self.field.inv(self.leading))

    def __divmod__(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        self._check(divisor)
        if divisor.is_zero:
            raise FieldDivisionError("Polynomial division by zero")
        field = self.field
        remainder = list(self.values)
        shift = len(remainder) - len(divisor.values)
        if self.is_zero or shift < 0:
            return Polynomial(field, (0,)), self
        quotient = [0] * (shift + 1)
        inverse_lead = field.inv(divisor.leading)
        for offset in range(shift, -1, -1):
            top = remainder[offset + len(divisor.values) - 1]
            if top == 0:
                continue
            factor = field.mul(top, inverse_lead)
            quotient[offset] = factor
            for i, d in enumerate(divisor.values):
                remainder[offset + i] = field.sub(remainder[offset + i], field.mul(factor, d))
        return Polynomial(field, tuple(quotient)), Polynomial(field, tuple(remainder))

    def __mod__(self, divisor: Polynomial) -> Polynomial:
        return divmod(self, divisor)[1]

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for power, value in enumerate(self.values):
            if value == 0:
                continue
            if power == 0:
                terms.append(f"{value}")
            elif power == 1:
                terms.append("x" if value == 1 else f"{value}x")
            else:
                terms.append(f"x^{power}" if value == 1 else f"{value}x^{power}")
        return " + ".join(reversed(terms))


def constant(field: FieldSpec, value: int) -> Polynomial:
    return Polynomial(field, (value,))


def monomial(field: FieldSpec, degree: int, coefficient: int = 1) -> Polynomial:
    return Polynomial(field, (0,) * degree + (coefficient,))


@dataclass(frozen=True, slots=True)
class PointSet:
    points: tuple[tuple[FieldElement, FieldElement], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("A point set needs at least one point")
        field = self.points[0][0].field
        seen: set[int] = set()
        for x, y in self.points:
            if x.field != field or y.field != field:
                raise MixedFieldsError("Points come from different fields")
            if x.value in seen:
                raise DuplicateAbscissaError(
                    f"Abscissa {x.value} appears twice", context={"abscissa": x.value}
                )
            seen.add(x.value)

    @classmethod
    def of(cls, field: FieldSpec, pairs: Iterable[tuple[int, int]]) -> PointSet:
        return cls(tuple((field.element(x), field.element(y)) for x, y in pairs))

    @property
    def field(self) -> FieldSpec:
        return self.points[0][0].field

    def __len__(self) -> int:
        return len(self.points)


def lagrange_interpolate(points: PointSet) -> Polynomial:
    """Unique polynomial of degree < len(points) through every point."""

    field = points.field
    xs = [x.value for x, _ in points.points]
    ys = [y.value for _, y in points.points]
    # master = prod (x - x_i), highest coefficient last
    master = [1]
    for xi in xs:
        shifted = [0, *master]
        for i, coefficient in enumerate(master):
            shifted[i] = field.sub(shifted[i], field.mul(xi, coefficient))
        master = shifted
    result = [0] * len(xs)
    for i, xi in enumerate(xs):
        if ys[i] == 0:
            continue
        # basis numerator = master / (x - x_i) by synthetic division
        basis = [0] * len(xs)
        carry = 0
        for k in range(len(master) - 1, 0, -1):
            carry = field.add(master[k], field.mul(carry, xi))
            basis[k - 1] = carry
        denominator = 1
        for j, xj in enumerate(xs):
            if j != i:
                denominator = field.mul(denominator, field.sub(xi, xj))
        weight = field.div(ys[i], denominator)
        for k, value in enumerate(basis):
            result[k] = field.add(result[k], field.mul(weight, value))
    return Polynomial(field, tuple(result))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by Euclid's algorithm."""

    if a.field != b.field:
        raise MixedFieldsError(f"Cannot take the gcd of {a.field} and {b.field} polynomials")
    if a.is_zero and b.is_zero:
        raise BothZeroError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def roots_bruteforce(
    p: Polynomial, *, limit: int = DEFAULT_SCAN_LIMIT, max_workers: int = 1
) -> set[FieldElement]:
    """Every x in the field with p(x) = 0, by exhaustive evaluation."""

    field = p.field
    if field.size > limit:
        raise FieldTooLargeError(
            f"Refusing to scan {field} with {field.size} elements (limit {limit})",
            context={"size": field.size, "limit": limit},
        )
    if p.is_zero:
        return set(field.elements())

    def scan(bounds: tuple[int, int]) -> list[int]:
        start, stop = bounds
        return [x for x in range(start, stop) if p.evaluate_raw(x) == 0]

    chunk = max(1, -(-field.size // max(1, max_workers)))
    ranges = [(start, min(start + chunk, field.size)) for start in range(0, field.size, chunk)]
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            found = [x for part in pool.map(scan, ranges) for x in part]
    else:
        found = [x for part in map(scan, ranges) for x in part]
    return {FieldElement(x, field) for x in found}


def random_polynomial(degree: int, constant_term: FieldElement, rng: Random) -> Polynomial:
    """a_0 fixed, middle coefficients uniform, leading coefficient uniform nonzero."""

    field = constant_term.field
    if degree < 0:
        raise ValueError("Degree must be natural")
    if degree >= field.size:
        raise DegreeTooLargeError(
            f"Degree {degree} does not fit {field}", context={"degree": degree, "size": field.size}
        )
    if degree == 0:
        return constant(field, constant_term.value)
    middle = [rng.randrange(field.size) for _ in range(degree - 1)]
    leading = rng.randrange(1, field.size)
    return Polynomial(field, (constant_term.value, *middle, leading))


def poly_pow(base: Polynomial, exponent: int) -> Polynomial:
    """Dense base^exponent."""

    if exponent < 0:
        raise ValueError("Exponents are natural numbers")
    result = constant(base.field, 1)
    square = base
    while exponent:
        if exponent & 1:
            result = result * square
        exponent >>= 1
        if exponent:
            square = square * square
    return result


def poly_powmod(base: Polynomial, exponent: int, modulus: Polynomial) -> Polynomial:
    """base^exponent mod modulus by square-and-multiply."""

    if exponent < 0:
        raise ValueError("Exponents are natural numbers")
    result = constant(base.field, 1) % modulus
    square = base % modulus
    while exponent:
        if exponent & 1:
            result = (result * square) % modulus
        square = (square * square) % modulus
        exponent >>= 1
    return result
