from __future__ import annotations

import itertools
import random

import pytest

from svss.errors import (
    BothZeroError,
    DegreeTooLargeError,
    DuplicateAbscissaError,
    FieldDivisionError,
    FieldTooLargeError,
    MixedFieldsError,
)
from svss.fields import binary_field, prime_field
from svss.polynomials import (
    PointSet,
    Polynomial,
    constant,
    lagrange_interpolate,
    monomial,
    poly_gcd,
    poly_pow,
    poly_powmod,
    random_polynomial,
    roots_bruteforce,
)

GF7 = prime_field(7)
GF11 = prime_field(11)


def poly(field, *values):
    return Polynomial(field, values)


class TestCanonicalForm:
    def test_trailing_zeros_stripped(self):
        p = poly(GF7, 3, 2, 0, 0)
        assert p.values == (3, 2)
        assert p.degree == 1

    def test_zero_polynomial(self):
        zero = poly(GF7, 0, 0)
        assert zero.is_zero
        assert zero.degree == -1
        assert zero.padded(3) == (0, 0, 0)

    def test_out_of_field_coefficient(self):
        with pytest.raises(ValueError):
            poly(GF7, 7)

    def test_str(self):
        assert str(poly(GF7, 6, 6)) == "6x + 6"
        assert str(poly(GF7, 0, 0, 1)) == "x^2"


class TestEvaluate:
    def test_worked_example(self):
        assert poly(GF7, 3, 2).evaluate(GF7.element(2)) == GF7.zero

    def test_zero_and_constant(self):
        for x in GF7.elements():
            assert poly(GF7, 0)(x) == GF7.zero
            assert constant(GF7, 5)(x) == GF7.element(5)

    def test_field_mismatch(self):
        with pytest.raises(MixedFieldsError):
            poly(GF7, 1, 1).evaluate(GF11.element(1))


class TestInterpolation:
    @pytest.mark.parametrize(
        ("field", "pairs", "expected"),
        [
            (GF7, [(1, 2), (2, 4)], (0, 2)),
            (GF11, [(3, 8), (5, 10)], (5, 1)),
            (GF7, [(1, 5), (3, 2)], (6, 6)),
        ],
    )
    def test_worked_examples(self, field, pairs, expected):
        assert lagrange_interpolate(PointSet.of(field, pairs)).values == expected

    def test_duplicate_abscissa(self):
        with pytest.raises(DuplicateAbscissaError):
            PointSet.of(GF7, [(1, 2), (1, 3)])

    def test_single_point_is_constant(self):
        assert lagrange_interpolate(PointSet.of(GF7, [(4, 6)])).values == (6,)

    @pytest.mark.parametrize("field", [prime_field(65521), binary_field(16), binary_field(5), prime_field(13)])
    def test_passes_through_every_point(self, field):
        rng = random.Random(field.size)
        for _ in range(30):
            t = rng.randint(1, min(8, field.size))
            xs = rng.sample(range(field.size), t)
            pairs = [(x, rng.randrange(field.size)) for x in xs]
            interpolant = lagrange_interpolate(PointSet.of(field, pairs))
            assert interpolant.degree < t
            for x, y in pairs:
                assert interpolant.evaluate_raw(x) == y

    def test_recovers_random_polynomial(self, rng):
        field = prime_field(10007)
        for degree in range(6):
            original = random_polynomial(degree, field.element(rng.randrange(field.size)), rng)
            pairs = [(x, original.evaluate_raw(x)) for x in range(1, degree + 2)]
            assert lagrange_interpolate(PointSet.of(field, pairs)) == original


class TestArithmetic:
    def test_divmod_reconstructs_dividend(self, rng):
        field = prime_field(97)
        for _ in range(50):
            a = Polynomial(field, tuple(rng.randrange(97) for _ in range(rng.randint(1, 8))))
            b = Polynomial(field, tuple(rng.randrange(97) for _ in range(rng.randint(1, 5))))
            if b.is_zero:
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.degree < b.degree

    def test_division_by_zero(self):
        with pytest.raises(FieldDivisionError):
            divmod(poly(GF7, 1, 1), poly(GF7, 0))

    def test_binary_subtraction_is_addition(self):
        field = binary_field(4)
        a, b = poly(field, 3, 9, 1), poly(field, 7, 2)
        assert a - b == a + b

    def test_monomial_and_pow(self):
        x = monomial(GF7, 1)
        assert poly_pow(x + constant(GF7, 1), 2) == poly(GF7, 1, 2, 1)
        assert monomial(GF7, 3, 5).values == (0, 0, 0, 5)

    def test_powmod_agrees_with_dense_power(self):
        field = prime_field(13)
        base = poly(field, 2, 1)
        modulus = poly(field, 1, 0, 3, 1)
        for e in range(20):
            assert poly_powmod(base, e, modulus) == poly_pow(base, e) % modulus

    def test_fermat_for_polynomials(self):
        field_poly = monomial(GF7, 7) - monomial(GF7, 1)
        assert poly_powmod(monomial(GF7, 1), 7, field_poly) == monomial(GF7, 1)
        assert roots_bruteforce(field_poly) == set(GF7.elements())


class TestGcd:
    def test_worked_example(self):
        a = poly(GF7, 2, 0, 6)  # 2 - x^2
        b = poly(GF7, 1, 0, 0, 6)  # 1 - x^3
        assert poly_gcd(a, b) == poly(GF7, 3, 1)  # x - 4

    def test_idempotent_and_zero(self):
        p = poly(GF7, 4, 2, 3)
        assert poly_gcd(p, p) == p.monic()
        assert poly_gcd(p, poly(GF7, 0)) == p.monic()
        assert poly_gcd(poly(GF7, 0), p) == p.monic()

    def test_both_zero(self):
        with pytest.raises(BothZeroError):
            poly_gcd(poly(GF7, 0), poly(GF7, 0))

    def test_mixed_fields(self):
        with pytest.raises(MixedFieldsError):
            poly_gcd(poly(GF7, 1, 1), poly(GF11, 1, 1))

    def test_divides_both_and_keeps_common_roots(self, rng):
        field = prime_field(31)
        for _ in range(40):
            a = random_polynomial(rng.randint(1, 6), field.element(rng.randrange(31)), rng)
            b = random_polynomial(rng.randint(1, 6), field.element(rng.randrange(31)), rng)
            g = poly_gcd(a, b)
            assert (a % g).is_zero and (b % g).is_zero
            for root in roots_bruteforce(a) & roots_bruteforce(b):
                assert g(root) == field.zero


class TestRoots:
    def test_worked_example(self):
        assert {r.value for r in roots_bruteforce(poly(GF7, 2, 0, 6))} == {3, 4}

    def test_linear(self):
        field = prime_field(101)
        for c in range(0, 101, 10):
            assert {r.value for r in roots_bruteforce(poly(field, field.neg(c), 1))} == {c}

    def test_nonzero_constant(self):
        assert roots_bruteforce(constant(GF7, 3)) == set()

    def test_parallel_scan_agrees(self):
        field = prime_field(10007)
        p = poly(field, 1, 0, 0, 0, 1)
        assert roots_bruteforce(p, max_workers=4) == roots_bruteforce(p)

    def test_field_too_large(self):
        with pytest.raises(FieldTooLargeError):
            roots_bruteforce(poly(prime_field(2**31 - 1), 1, 1))

    def test_custom_limit(self):
        with pytest.raises(FieldTooLargeError):
            roots_bruteforce(poly(GF11, 1, 1), limit=10)


class TestRandomPolynomial:
    def test_degree_zero(self, rng):
        assert random_polynomial(0, GF7.element(4), rng) == constant(GF7, 4)

    def test_leading_coefficient_never_zero(self, rng):
        for _ in range(10_000):
            p = random_polynomial(2, GF7.element(rng.randrange(7)), rng)
            assert p.degree == 2

    def test_constant_term_kept(self, rng):
        for value in range(7):
            assert random_polynomial(3, GF7.element(value), rng).values[0] == value

    def test_degree_too_large(self, rng):
        with pytest.raises(DegreeTooLargeError):
            random_polynomial(7, GF7.element(1), rng)

    def test_binary_field(self, rng):
        field = binary_field(8)
        p = random_polynomial(4, field.element(0x53), rng)
        assert p.degree == 4
        assert all(field.contains(v) for v in p.values)


def test_all_coefficient_tuples_interpolate_back():
    """Exhaustive over GF(5) quadratics: the map from coefficients to three evaluations is a bijection."""

    field = prime_field(5)
    for coefficients in itertools.product(range(5), repeat=3):
        original = Polynomial(field, coefficients)
        pairs = [(x, original.evaluate_raw(x)) for x in (1, 2, 3)]
        assert lagrange_interpolate(PointSet.of(field, pairs)) == original
