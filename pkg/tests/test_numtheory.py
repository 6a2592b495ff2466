from __future__ import annotations

import math
import random
import statistics

import pytest
import sympy

from svss.errors import (
    BadParamsError,
    CountExceedsAvailableError,
    FactorizationError,
    NotMersenneExponentError,
    NotPrimitiveError,
    SearchBudgetExhaustedError,
)
from svss.fields import binary_field, multiplicative_order, prime_field
from svss.numtheory import (
    MERSENNE_EXPONENTS,
    SafePrime,
    derive_primitive_roots,
    factorize_group_order,
    find_primitive_root,
    group_factorization,
    hamming_weight,
    is_prime,
    is_primitive,
    mersenne_field,
    next_prime,
    next_safe_prime,
    primitive_root_with_attempts,
    random_primitive_element,
    smallest_mersenne_exponent,
    sophie_germain_count,
    sophie_germain_estimate,
)


class TestIsPrime:
    @pytest.mark.parametrize(("n", "expected"), [(23, True), (22, False), (2**61 - 1, True), (1, False), (0, False)])
    def test_examples(self, n, expected):
        assert is_prime(n) is expected

    def test_matches_sympy_below_20000(self):
        assert [n for n in range(20000) if is_prime(n)] == list(sympy.primerange(0, 20000))

    @pytest.mark.parametrize("exponent", MERSENNE_EXPONENTS)
    def test_mersenne_primes(self, exponent):
        assert is_prime(2**exponent - 1)

    @pytest.mark.parametrize("exponent", [11, 23, 29, 67])
    def test_composite_mersenne_numbers(self, exponent):
        assert not is_prime(2**exponent - 1)

    def test_strong_pseudoprimes_rejected(self):
        # strong pseudoprimes to several small bases
        for n in (3215031751, 2152302898747, 3474749660383, 341550071728321):
            assert not is_prime(n)

    def test_large_random_agrees_with_sympy(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.getrandbits(200) | 1
            assert is_prime(n) == sympy.isprime(n)


class TestNextPrime:
    @pytest.mark.parametrize(
        ("x", "strict", "expected"), [(22, True, 23), (22, False, 23), (11, True, 13), (11, False, 11)]
    )
    def test_examples(self, x, strict, expected):
        assert next_prime(x, strict) == expected

    def test_matches_sympy(self):
        for x in range(1, 3000):
            assert next_prime(x) == sympy.nextprime(x)


class TestSafePrimes:
    @pytest.mark.parametrize(("x", "p"), [(10, 11), (11, 23), (4, 5), (12, 23), (1000, 1019)])
    def test_next_safe_prime(self, x, p):
        safe = next_safe_prime(x)
        assert (safe.p, safe.q) == (p, (p - 1) // 2)

    def test_below_four_rejected(self):
        with pytest.raises(BadParamsError):
            next_safe_prime(3)

    def test_matches_scan_oracle(self):
        for x in range(4, 600, 7):
            p = x + 1
            while not (sympy.isprime(p) and sympy.isprime((p - 1) // 2)):
                p += 1
            assert next_safe_prime(x).p == p

    def test_parallel_search_agrees(self):
        assert next_safe_prime(2**40, max_workers=4) == next_safe_prime(2**40)

    def test_bit_size_of_256_bit_search(self):
        assert next_safe_prime(2**256).p.bit_length() == 257

    def test_budget_exhausted(self):
        with pytest.raises(SearchBudgetExhaustedError) as info:
            next_safe_prime(2**64, min_hamming_weight=66, budget=50)
        assert info.value.exit_code == 3

    def test_hamming_floor(self):
        safe = next_safe_prime(2**20, min_hamming_weight=12)
        assert hamming_weight(safe.p) >= 12
        assert sympy.isprime(safe.p) and sympy.isprime(safe.q)

    def test_invalid_pair(self):
        with pytest.raises(BadParamsError):
            SafePrime(13, 6)

    def test_factorization(self):
        assert SafePrime.of(23).factorization == ((2, 1), (11, 1))
        assert SafePrime.of(5).factorization == ((2, 2),)


class TestPrimitiveRoots:
    @pytest.mark.parametrize(
        ("p", "roots"),
        [
            (23, {5, 7, 10, 11, 14, 15, 17, 19, 20, 21}),
            (11, {2, 6, 7, 8}),
            (5, {2, 3}),
        ],
    )
    def test_find_primitive_root(self, p, roots):
        rng = random.Random(p)
        for _ in range(50):
            assert find_primitive_root(SafePrime.of(p), rng).value in roots

    def test_primitive_root_count_for_safe_primes_below_1000(self):
        for p in range(7, 1000):
            if not (sympy.isprime(p) and sympy.isprime((p - 1) // 2)):
                continue
            count = sum(1 for a in range(1, p) if sympy.n_order(a, p) == p - 1)
            assert count == (p - 1) // 2 - 1

    def test_mean_attempts_close_to_two(self):
        """Half the candidates are primitive, so about two draws are needed."""

        rng = random.Random(99)
        safe = next_safe_prime(2**32)
        attempts = [primitive_root_with_attempts(safe, rng)[1] for _ in range(1000)]
        assert statistics.mean(attempts) <= 3

    def test_derive_worked_value(self):
        field = prime_field(23)
        assert field.element(5) ** 3 == field.element(10)
        assert is_primitive(field.element(10))

    def test_derive_all_available(self, rng):
        safe = SafePrime.of(23)
        roots = derive_primitive_roots(prime_field(23).element(5), safe, 10, rng)
        assert {r.value for r in roots} == {5, 7, 10, 11, 14, 15, 17, 19, 20, 21}

    def test_derive_too_many(self, rng):
        with pytest.raises(CountExceedsAvailableError):
            derive_primitive_roots(prime_field(23).element(5), SafePrime.of(23), 11, rng)

    def test_derive_requires_primitive_generator(self, rng):
        with pytest.raises(NotPrimitiveError):
            derive_primitive_roots(prime_field(23).element(2), SafePrime.of(23), 3, rng)

    def test_derive_large_field(self, rng):
        safe = next_safe_prime(2**64)
        g = find_primitive_root(safe, rng)
        roots = derive_primitive_roots(g, safe, 20, rng)
        assert len({r.value for r in roots}) == 20
        assert all(is_primitive(r) for r in roots)

    def test_exponentiation_is_a_permutation(self):
        for p in sympy.primerange(3, 130):
            field = prime_field(p)
            for r in range(2, p):
                if sympy.n_order(r, p) != p - 1:
                    continue
                image = {field.pow(r, x) for x in range(1, p)}
                assert image == set(range(1, p))


class TestMersenne:
    @pytest.mark.parametrize("exponent", [5, 7])
    def test_every_element_but_one_is_primitive(self, exponent):
        handle = mersenne_field(exponent)
        order = 2**exponent - 1
        for a in range(2, handle.spec.size):
            assert multiplicative_order(handle.spec.element(a), handle.factorization) == order

    def test_not_a_mersenne_exponent(self):
        with pytest.raises(NotMersenneExponentError, match="not a Mersenne exponent"):
            mersenne_field(4)

    def test_valid_exponent_13(self):
        assert mersenne_field(13).spec == binary_field(13)

    def test_random_primitive_skips_zero_and_one(self, rng):
        handle = mersenne_field(5)
        for _ in range(200):
            assert handle.random_primitive(rng).value >= 2

    @pytest.mark.parametrize(("bits", "exponent"), [(1, 2), (4, 5), (13, 13), (14, 17), (100, 107)])
    def test_smallest_exponent(self, bits, exponent):
        assert smallest_mersenne_exponent(bits) == exponent


class TestSophieGermain:
    def test_estimate_at_e_squared(self):
        assert sophie_germain_estimate(math.e**2) == pytest.approx(1.32032 * math.e**2 / 4)

    def test_estimate_million(self):
        assert sophie_germain_estimate(10**6) == pytest.approx(6917, abs=1)

    def test_count_below_100(self):
        assert sophie_germain_count(100) == 10

    def test_count_below_thousand(self):
        assert sophie_germain_count(1000) == 37

    def test_estimate_domain(self):
        with pytest.raises(ValueError):
            sophie_germain_estimate(2)


class TestGroupFactorization:
    @pytest.mark.parametrize("n", [2, 12, 255, 65535, 2**32 - 1, 1000003 * 999983])
    def test_matches_sympy(self, n):
        assert factorize_group_order(n) == sorted(sympy.factorint(n).items())

    def test_gives_up_beyond_trial_bound(self):
        with pytest.raises(FactorizationError):
            factorize_group_order(1000003 * 999983, trial_bound=1000)

    def test_fields(self):
        assert group_factorization(prime_field(23)) == ((2, 1), (11, 1))
        assert group_factorization(binary_field(5)) == ((31, 1),)
        assert group_factorization(binary_field(4)) == ((3, 1), (5, 1))

    @pytest.mark.parametrize("field", [prime_field(23), prime_field(31), binary_field(4), binary_field(7)])
    def test_random_primitive_element(self, field, rng):
        factors = group_factorization(field)
        for _ in range(20):
            element, attempts = random_primitive_element(field, rng)
            assert attempts >= 1
            assert multiplicative_order(element, factors) == field.group_order
