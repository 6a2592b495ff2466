"""Primality, safe primes, primitive roots and Mersenne binary fields."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from random import Random, SystemRandom

import gmpy2

from .errors import (
    BadParamsError,
    CountExceedsAvailableError,
    FactorizationError,
    NotMersenneExponentError,
    NotPrimitiveError,
    SearchBudgetExhaustedError,
)
from .fields import FieldElement, FieldKind, FieldSpec, binary_field, prime_field

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BUDGET = 10**6
SOPHIE_GERMAIN_CONSTANT = 1.32032
MERSENNE_EXPONENTS = (2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127)

# Miller-Rabin with the first 13 prime bases is exact below this bound.
DETERMINISTIC_BOUND = 3317044064679887385961981
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_RANDOM_ROUNDS = 64
_SIEVE_LIMIT = 1 << 16
_BATCH = 64


def _primes_below(limit: int) -> list[int]:
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for n in range(2, math.isqrt(limit - 1) + 1):
        if sieve[n]:
            sieve[n * n :: n] = bytearray(len(range(n * n, limit, n)))
    return [n for n in range(limit) if sieve[n]]


SMALL_PRIMES = tuple(_primes_below(_SIEVE_LIMIT))
_SMALL_PRIME_SET = frozenset(SMALL_PRIMES)
_PRIMORIAL = gmpy2.mpz(1)
for _prime in SMALL_PRIMES:
    _PRIMORIAL *= _prime
del _prime


def _strong_probable_prime(n: int, d: int, r: int, base: int) -> bool:
    x = gmpy2.powmod(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = gmpy2.powmod(x, 2, n)
        if x == n - 1:
            return True
    return False


def is_prime(n: int, *, rng: Random | None = None) -> bool:
    """Exact below DETERMINISTIC_BOUND; above it 64 random Miller-Rabin rounds."""

    if n < 2:
        return False
    if n < _SIEVE_LIMIT:
        return n in _SMALL_PRIME_SET
    for prime in SMALL_PRIMES[:64]:
        if n % prime == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < DETERMINISTIC_BOUND:
        return all(_strong_probable_prime(n, d, r, base) for base in _DETERMINISTIC_BASES)
    source = rng or SystemRandom()
    return all(
        _strong_probable_prime(n, d, r, source.randrange(2, n - 1)) for _ in range(_RANDOM_ROUNDS)
    )


def next_prime(x: int, strict: bool = True) -> int:
    """NP(x) when strict, else np(x)."""

    candidate = x + 1 if strict else x
    if candidate <= 2:
        return 2
    if candidate % 2 == 0:
        candidate += 1
    while not is_prime(candidate):
        candidate += 2
    return candidate


def hamming_weight(n: int) -> int:
    return n.bit_count()


@dataclass(frozen=True, slots=True)
class SafePrime:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p != 2 * self.q + 1 or not (is_prime(self.q) and is_prime(self.p)):
            raise BadParamsError(
                f"{self.p} is not a safe prime with q = {self.q}",
                context={"p": self.p, "q": self.q},
            )

    @classmethod
    def of(cls, p: int) -> SafePrime:
        return cls(p, (p - 1) // 2)

    @property
    def factorization(self) -> tuple[tuple[int, int], ...]:
        if self.q == 2:
            return ((2, 2),)
        return ((2, 1), (self.q, 1))

    @property
    def field(self) -> FieldSpec:
        return prime_field(self.p)


def _is_safe_candidate(p: int) -> bool:
    q = (p - 1) // 2
    if p > 2 * _SIEVE_LIMIT and (gmpy2.gcd(p, _PRIMORIAL) != 1 or gmpy2.gcd(q, _PRIMORIAL) != 1):
        return False
    return is_prime(q) and is_prime(p)


def _candidates(x: int) -> Iterator[int]:
    for small in (5, 7, 11):
        if small > x:
            yield small
    # p = 2q + 1 with q > 3 prime forces p = 11 (mod 12)
    start = max(x + 1, 12)
    start += (11 - start) % 12
    while True:
        yield start
        start += 12


@lru_cache(maxsize=128)
def _search_safe_prime(x: int, floor: int | None, budget: int, workers: int) -> int:
    candidates = _candidates(x)
    examined = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while examined < budget:
            batch = []
            while len(batch) < _BATCH and examined < budget:
                candidate = next(candidates)
                examined += 1
                if floor is None or hamming_weight(candidate) >= floor:
                    batch.append(candidate)
            if not batch:
                continue
            if workers > 1:
                verdicts = list(pool.map(_is_safe_candidate, batch))
            else:
                verdicts = [_is_safe_candidate(candidate) for candidate in batch]
            for candidate, verdict in zip(batch, verdicts, strict=True):
                if verdict:
                    logger.debug("Safe prime above %#x found after %d candidates", x, examined)
                    return candidate
    raise SearchBudgetExhaustedError(
        f"No safe prime above {x:#x} within {budget} candidates",
        context={"x": x, "budget": budget, "hamming_floor": floor},
    )


def next_safe_prime(
    x: int,
    *,
    min_hamming_weight: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
    max_workers: int = 1,
) -> SafePrime:
    """NSP(x): the smallest safe prime strictly greater than x."""

    if x < 4:
        raise BadParamsError(f"Safe-prime search needs x >= 4, got {x}")
    p = _search_safe_prime(x, min_hamming_weight, budget, max(1, max_workers))
    return SafePrime.of(p)


def primitive_root_with_attempts(safe: SafePrime, rng: Random) -> tuple[FieldElement, int]:
    """Sample g from {2, ..., p-2} until g^2 != 1 and g^q != 1."""

    field = safe.field
    attempts = 0
    while True:
        attempts += 1
        g = rng.randrange(2, safe.p - 1)
        if field.pow(g, 2) != 1 and field.pow(g, safe.q) != 1:
            return field.element(g), attempts


def find_primitive_root(safe: SafePrime, rng: Random) -> FieldElement:
    return primitive_root_with_attempts(safe, rng)[0]


def _is_safe_primitive(g: FieldElement, safe: SafePrime) -> bool:
    field = g.field
    return g.value != 0 and field.pow(g.value, 2) != 1 and field.pow(g.value, safe.q) != 1


def derive_primitive_roots(
    g: FieldElement, safe: SafePrime, count: int, rng: Random
) -> list[FieldElement]:
    """count distinct roots g^a, a odd in [1, p-2] and a != q."""

    if g.field != safe.field or not _is_safe_primitive(g, safe):
        raise NotPrimitiveError(f"{g.value} is not a primitive root modulo {safe.p}")
    available = safe.q - 1
    if count > available:
        raise CountExceedsAvailableError(
            f"Requested {count} primitive roots, only {available} exist modulo {safe.p}",
            context={"count": count, "available": available},
        )
    if count <= 0:
        return []
    if available <= max(4 * count, 1 << 16):
        exponents = [a for a in range(1, safe.p - 1, 2) if a != safe.q]
        chosen = rng.sample(exponents, count)
    else:
        seen: set[int] = set()
        chosen = []
        while len(chosen) < count:
            a = 2 * rng.randrange(safe.q) + 1
            if a == safe.q or a in seen:
                continue
            seen.add(a)
            chosen.append(a)
    return [g**a for a in chosen]


@dataclass(frozen=True, slots=True)
class MersenneFieldHandle:
    exponent: int
    spec: FieldSpec

    @property
    def factorization(self) -> tuple[tuple[int, int], ...]:
        return ((self.spec.group_order, 1),)

    def random_primitive(self, rng: Random) -> FieldElement:
        """Every element outside {0, 1} generates GF(2^e)* when 2^e - 1 is prime."""

        return self.spec.element(rng.randrange(2, self.spec.size))


def mersenne_field(exponent: int) -> MersenneFieldHandle:
    if exponent < 2 or not is_prime((1 << exponent) - 1):
        raise NotMersenneExponentError(
            f"{exponent} is not a Mersenne exponent: 2^{exponent} - 1 is not prime",
            context={"exponent": exponent},
        )
    return MersenneFieldHandle(exponent, binary_field(exponent))


def smallest_mersenne_exponent(bits: int) -> int:
    for exponent in MERSENNE_EXPONENTS:
        if exponent >= bits:
            return exponent
    raise BadParamsError(f"No tabulated Mersenne exponent covers {bits} bits")


def sophie_germain_estimate(x: int) -> float:
    if x < 3:
        raise ValueError("The density estimate needs x >= 3")
    return SOPHIE_GERMAIN_CONSTANT * x / math.log(x) ** 2


def sophie_germain_count(x: int) -> int:
    """Number of primes q < x with 2q + 1 prime."""

    if x <= 2:
        return 0
    limit = 2 * x
    sieve = bytearray([1]) * limit
    sieve[0:2] = b"\x00\x00"
    for n in range(2, math.isqrt(limit - 1) + 1):
        if sieve[n]:
            sieve[n * n :: n] = bytearray(len(range(n * n, limit, n)))
    return sum(1 for q in range(2, x) if sieve[q] and sieve[2 * q + 1])


def factorize_group_order(n: int, *, trial_bound: int = 2**24) -> list[tuple[int, int]]:
    """Trial division, stopping as soon as the cofactor is prime."""

    if n < 1:
        raise FactorizationError(f"Cannot factor {n}")
    factors: list[tuple[int, int]] = []
    cofactor = n

    def divide_out(d: int) -> None:
        nonlocal cofactor
        exponent = 0
        while cofactor % d == 0:
            cofactor //= d
            exponent += 1
        if exponent:
            factors.append((d, exponent))

    if cofactor > 1 and is_prime(cofactor):
        return [(cofactor, 1)]
    divisor = 2
    while cofactor > 1:
        if divisor * divisor > cofactor:
            factors.append((cofactor, 1))
            break
        if divisor > trial_bound:
            raise FactorizationError(
                f"Trial division up to {trial_bound} leaves composite cofactor {cofactor}",
                context={"n": n, "cofactor": cofactor},
            )
        if cofactor % divisor == 0:
            divide_out(divisor)
            if cofactor > 1 and is_prime(cofactor):
                factors.append((cofactor, 1))
                break
        divisor = 3 if divisor == 2 else divisor + 2
    return sorted(factors)


@lru_cache(maxsize=128)
def group_factorization(field: FieldSpec) -> tuple[tuple[int, int], ...]:
    order = field.group_order
    if order == 1:
        return ()
    if field.kind is FieldKind.PRIME and order > 2 and is_prime(order // 2):
        return SafePrime.of(field.size).factorization
    if is_prime(order):
        return ((order, 1),)
    return tuple(factorize_group_order(order))


def is_primitive(
    element: FieldElement, factorization: tuple[tuple[int, int], ...] | None = None
) -> bool:
    if element.value == 0:
        return False
    field = element.field
    factors = group_factorization(field) if factorization is None else factorization
    order = field.group_order
    return all(field.pow(element.value, order // prime) != 1 for prime, _ in factors)


def random_primitive_element(field: FieldSpec, rng: Random) -> tuple[FieldElement, int]:
    """A uniformly sampled primitive element and the number of candidates drawn."""

    order = field.group_order
    if field.kind is FieldKind.BINARY and order > 2 and is_prime(order):
        # Mersenne field: every element outside {0, 1} is primitive
        return field.element(rng.randrange(2, field.size)), 1
    if field.kind is FieldKind.PRIME and order > 4 and is_prime(order // 2):
        return primitive_root_with_attempts(SafePrime.of(field.size), rng)
    factors = group_factorization(field)
    attempts = 0
    while True:
        attempts += 1
        candidate = field.random_element(rng, nonzero=True)
        if is_primitive(candidate, factors):
            return candidate, attempts
