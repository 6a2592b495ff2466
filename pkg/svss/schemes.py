"""Verification extensions layered on top of secret sharing.

Baselines: per-share hash digests and Feldman commitments. Space-efficient
schemes: every bundle carries a polynomial V over a verification field such
that honest shares satisfy

    POW       V(s) = s^r                  (public r)
    SSP       V(M(s)) = L(s)              (split share, public)
    POW_PRIV  V_j(s) = s^u_j              (private u_j, points i != j)
    SSP_PRIV  V_j(M(s)) = L(s)^u_j
    EXP       V_j(s) = r_j^s              (private primitive r_j)
    EXP_SSP   V_j(M(s)) = r_j^L(s)
"""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from random import Random
from typing import TypeVar

import gmpy2

from .config import FieldChoice
from .encoding import Bitstring, bitsize, split_halves
from .errors import (
    BadParamsError,
    CountExceedsAvailableError,
    DuplicateShareValueError,
    IndexOutOfRangeError,
    MidHalfCollisionError,
    NotPrimitiveError,
    RetryBudgetExhaustedError,
    SearchBudgetExhaustedError,
    SelfVerificationError,
    ShareOutOfFieldError,
)
from .fields import FieldElement, FieldSpec, binary_field, prime_field
from .numtheory import (
    DEFAULT_SEARCH_BUDGET,
    is_prime,
    is_primitive,
    next_prime,
    next_safe_prime,
    random_primitive_element,
    smallest_mersenne_exponent,
)
from .polynomials import PointSet, Polynomial, lagrange_interpolate, random_polynomial
from .shamir import ShareSet, deal_polynomial

logger = logging.getLogger(__name__)

DEFAULT_RETRIES = 64
T = TypeVar("T")
R = TypeVar("R")


class SchemeKind(StrEnum):
    POW = "pow"
    SSP = "ssp"
    POW_PRIV = "pow-priv"
    SSP_PRIV = "ssp-priv"
    EXP = "exp"
    EXP_SSP = "exp-ssp"

    @property
    def is_private(self) -> bool:
        return self not in (SchemeKind.POW, SchemeKind.SSP)

    @property
    def splits_shares(self) -> bool:
        return self in (SchemeKind.SSP, SchemeKind.SSP_PRIV, SchemeKind.EXP_SSP)


def select_verification_field(
    max_value: int,
    choice: FieldChoice,
    *,
    budget: int = DEFAULT_SEARCH_BUDGET,
    max_workers: int = 1,
    min_hamming_weight: int | None = None,
) -> FieldSpec:
    """A field whose elements cover every value in [0, max_value]."""

    bits = bitsize(max_value)
    match choice:
        case FieldChoice.NEXT_PRIME:
            return prime_field(next_prime(max(max_value, 1)))
        case FieldChoice.SAFE_PRIME_OF_VALUE:
            safe = next_safe_prime(
                max(max_value, 4),
                min_hamming_weight=min_hamming_weight,
                budget=budget,
                max_workers=max_workers,
            )
            return safe.field
        case FieldChoice.SAFE_PRIME_OF_BITSIZE:
            safe = next_safe_prime(
                max(1 << bits, 4),
                min_hamming_weight=min_hamming_weight,
                budget=budget,
                max_workers=max_workers,
            )
            return safe.field
        case FieldChoice.BINARY_OF_BITSIZE:
            return binary_field(bits)
        case FieldChoice.MERSENNE:
            return binary_field(smallest_mersenne_exponent(bits))
    raise BadParamsError(f"Unknown field choice {choice!r}")


FieldLike = FieldSpec | FieldChoice


def _resolve(field: FieldLike, max_value: int) -> FieldSpec:
    if isinstance(field, FieldSpec):
        if field.size <= max_value:
            raise ShareOutOfFieldError(
                f"Values up to {max_value} do not fit {field}",
                context={"max_value": max_value, "size": field.size},
            )
        return field
    return select_verification_field(max_value, field)


@dataclass(frozen=True, slots=True)
class VerificationBundle:
    scheme: SchemeKind
    verifier_index: int
    field: FieldSpec
    base: FieldElement | None
    coefficients: tuple[int, ...]
    domain_bits: int
    domain_bound: int

    def __post_init__(self) -> None:
        if self.base is not None and self.base.field != self.field:
            raise BadParamsError("Bundle base lives outside the verification field")
        if any(not self.field.contains(c) for c in self.coefficients):
            raise BadParamsError("Bundle coefficient outside the verification field")
        if self.scheme.is_private and self.verifier_index < 1:
            raise BadParamsError("Private bundles name their verifier (index >= 1)")
        if not self.scheme.is_private and self.verifier_index != 0:
            raise BadParamsError("Public bundles carry verifier index 0")
        if self.scheme is not SchemeKind.SSP and self.base is None:
            raise BadParamsError(f"{self.scheme} bundles need a base")

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial(self.field, self.coefficients)

    def payload_bits(self) -> int:
        """Domain parameter, base and coefficients, each element at fixed width."""

        elements = len(self.coefficients) + (0 if self.base is None else 1)
        return bitsize(self.domain_bits) + elements * self.field.element_bits


def _bundle(
    scheme: SchemeKind,
    verifier: int,
    field: FieldSpec,
    base: FieldElement | None,
    pairs: list[tuple[int, int]],
    domain_bits: int,
    domain_bound: int,
) -> VerificationBundle:
    polynomial = lagrange_interpolate(PointSet.of(field, pairs))
    return VerificationBundle(
        scheme=scheme,
        verifier_index=verifier,
        field=field,
        base=base,
        coefficients=polynomial.padded(len(pairs)),
        domain_bits=domain_bits,
        domain_bound=domain_bound,
    )


def _check_distinct(shares: Sequence[int]) -> None:
    seen: set[int] = set()
    for value in shares:
        if value in seen:
            raise DuplicateShareValueError(
                f"Share value {value:#x} occurs twice; regenerate the shares",
                context={"value": value},
            )
        seen.add(value)


def _check_domain(shares: Sequence[int], bound: int) -> None:
    for value in shares:
        if not 0 <= value < bound:
            raise ShareOutOfFieldError(
                f"Share {value:#x} is outside [0, {bound:#x})",
                context={"value": value, "bound": bound},
            )


def _domain_bound(shares: Sequence[int], bound: int | None, field: FieldLike) -> int:
    if not shares:
        raise BadParamsError("No shares to commit to")
    if bound is not None:
        return bound
    if isinstance(field, FieldSpec):
        return field.size
    return 1 << bitsize(max(shares))


def _check_candidate(candidate: int, bundle: VerificationBundle) -> None:
    if not 0 <= candidate < bundle.domain_bound:
        raise ShareOutOfFieldError(
            f"Candidate {candidate:#x} is outside the share domain",
            context={"candidate": candidate, "bound": bundle.domain_bound},
        )


def _halves(value: int, bits: int) -> tuple[int, int]:
    high, low = split_halves(Bitstring(value, bits))
    return high.value, low.value


def _split_all(shares: Sequence[int], bits: int) -> list[tuple[int, int]]:
    halves = [_halves(value, bits) for value in shares]
    seen: set[int] = set()
    for high, _ in halves:
        if high in seen:
            raise MidHalfCollisionError(
                f"Two shares share the top half {high:#x}; regenerate the shares",
                context={"half": high},
            )
        seen.add(high)
    return halves


# VSS-POW


def vss_pow_deal(
    shares: Sequence[int],
    field: FieldLike,
    rng: Random,
    *,
    domain_bound: int | None = None,
    exponent: int | None = None,
) -> VerificationBundle:
    bound = _domain_bound(shares, domain_bound, field)
    _check_domain(shares, bound)
    _check_distinct(shares)
    spec = _resolve(field, bound - 1)
    r = exponent if exponent is not None else rng.randrange(1, spec.group_order + 1)
    if not 1 <= r <= spec.group_order:
        raise BadParamsError(f"Exponent {r} outside [1, {spec.group_order}]")
    pairs = [(s, spec.pow(s, r)) for s in shares]
    return _bundle(SchemeKind.POW, 0, spec, spec.element(r), pairs, bitsize(bound - 1), bound)


def vss_pow_verify(candidate: int, bundle: VerificationBundle) -> bool:
    _check_candidate(candidate, bundle)
    field = bundle.field
    return bundle.polynomial.evaluate_raw(candidate) == field.pow(candidate, bundle.base.value)


# VSS-SSP


def _ssp_field(domain_bits: int, field: FieldLike) -> FieldSpec:
    half_bits = domain_bits - domain_bits // 2
    return _resolve(field, (1 << half_bits) - 1)


def vss_ssp_deal(
    shares: Sequence[int],
    domain_bits: int,
    field: FieldLike,
    rng: Random | None = None,
) -> VerificationBundle:
    """Pad every share to ``domain_bits``, interpolate M(s) -> L(s)."""

    if domain_bits < 2:
        raise BadParamsError("Split schemes need at least two share bits")
    bound = 1 << domain_bits
    _check_domain(shares, bound)
    spec = _ssp_field(domain_bits, field)
    halves = _split_all(shares, domain_bits)
    return _bundle(SchemeKind.SSP, 0, spec, None, halves, domain_bits, bound)


def vss_ssp_verify(candidate: int, bundle: VerificationBundle) -> bool:
    _check_candidate(candidate, bundle)
    high, low = _halves(candidate, bundle.domain_bits)
    return bundle.polynomial.evaluate_raw(high) == low


# private-parameter variants


def vss_private_deal(
    shares: Sequence[int],
    exponents: Sequence[int],
    variant: SchemeKind,
    field: FieldLike,
    *,
    domain_bits: int | None = None,
    domain_bound: int | None = None,
) -> list[VerificationBundle]:
    """Bundle j interpolates only the other shareholders' shares."""

    if variant not in (SchemeKind.POW_PRIV, SchemeKind.SSP_PRIV):
        raise BadParamsError(f"{variant} is not a private-parameter variant")
    n = len(shares)
    if n < 2:
        raise BadParamsError("Private verification needs at least two shareholders")
    if len(exponents) != n or len(set(exponents)) != n or min(exponents) < 1:
        raise BadParamsError("Need one distinct exponent u_j >= 1 per shareholder")

    if variant is SchemeKind.POW_PRIV:
        bound = _domain_bound(shares, domain_bound, field)
        _check_domain(shares, bound)
        _check_distinct(shares)
        spec = _resolve(field, bound - 1)
        bits = bitsize(bound - 1)
        points = [(s, s) for s in shares]
    else:
        bits = domain_bits if domain_bits is not None else bitsize(max(shares))
        bits += bits % 2
        if bits < 2:
            bits = 2
        bound = 1 << bits
        _check_domain(shares, bound)
        spec = _ssp_field(bits, field)
        points = _split_all(shares, bits)

    bundles = []
    for j, u in enumerate(exponents, start=1):
        if u > spec.group_order:
            raise BadParamsError(f"Exponent {u} exceeds the group order of {spec}")
        pairs = [(x, spec.pow(y, u)) for i, (x, y) in enumerate(points, start=1) if i != j]
        bundles.append(_bundle(variant, j, spec, spec.element(u), pairs, bits, bound))
    return bundles


def vss_pow_priv_verify(candidate: int, bundle: VerificationBundle) -> bool:
    _check_candidate(candidate, bundle)
    field = bundle.field
    return bundle.polynomial.evaluate_raw(candidate) == field.pow(candidate, bundle.base.value)


def vss_ssp_priv_verify(candidate: int, bundle: VerificationBundle) -> bool:
    _check_candidate(candidate, bundle)
    high, low = _halves(candidate, bundle.domain_bits)
    field = bundle.field
    return bundle.polynomial.evaluate_raw(high) == field.pow(low, bundle.base.value)


# VSS-EXP


def _primitive_bases(
    field: FieldSpec, n: int, rng: Random, provided: Sequence[int] | None
) -> list[FieldElement]:
    if provided is not None:
        if len(provided) != n or len(set(provided)) != n:
            raise BadParamsError("Need one distinct base per shareholder")
        bases = [field.element(value) for value in provided]
        for base in bases:
            if not is_primitive(base):
                raise NotPrimitiveError(
                    f"{base.value:#x} is not primitive in {field}", context={"base": base.value}
                )
        return bases
    bases: list[FieldElement] = []
    seen: set[int] = set()
    draws = 0
    while len(bases) < n:
        draws += 1
        if draws > 64 * n:
            raise CountExceedsAvailableError(
                f"Could not find {n} distinct primitive elements in {field}",
                context={"n": n},
            )
        candidate, _ = random_primitive_element(field, rng)
        if candidate.value in seen:
            continue
        seen.add(candidate.value)
        bases.append(candidate)
    return bases


def vss_exp_deal(
    shares: Sequence[int],
    field: FieldSpec,
    rng: Random,
    *,
    bases: Sequence[int] | None = None,
    domain_bound: int | None = None,
) -> list[VerificationBundle]:
    """Bundle j: V_j through (s_i, r_j^s_i) for i != j, r_j primitive and private."""

    bound = _domain_bound(shares, domain_bound, field)
    _check_domain(shares, bound)
    _check_distinct(shares)
    spec = _resolve(field, bound - 1)
    n = len(shares)
    if n < 2:
        raise BadParamsError("VSS-EXP needs at least two shareholders")
    chosen = _primitive_bases(spec, n, rng, bases)
    bits = bitsize(bound - 1)
    bundles = []
    for j, base in enumerate(chosen, start=1):
        pairs = [(s, spec.pow(base.value, s)) for i, s in enumerate(shares, start=1) if i != j]
        bundles.append(_bundle(SchemeKind.EXP, j, spec, base, pairs, bits, bound))
    return bundles


def vss_exp_verify(
    candidate: int, bundle: VerificationBundle, *, candidate_index: int | None = None
) -> bool:
    _check_self(bundle, candidate_index)
    _check_candidate(candidate, bundle)
    field = bundle.field
    return bundle.polynomial.evaluate_raw(candidate) == field.pow(bundle.base.value, candidate)


# VSS-EXP-SSP


def vss_exp_ssp_deal(
    shares: Sequence[int],
    w: int,
    field: FieldSpec,
    rng: Random,
    *,
    bases: Sequence[int] | None = None,
) -> list[VerificationBundle]:
    """Pad to 2w bits; bundle j interpolates M(s_i) -> r_j^L(s_i) for i != j."""

    if w < 1:
        raise BadParamsError("Half size w must be positive")
    bound = 1 << (2 * w)
    _check_domain(shares, bound)
    spec = _resolve(field, (1 << w) - 1)
    n = len(shares)
    if n < 2:
        raise BadParamsError("VSS-EXP-SSP needs at least two shareholders")
    halves = _split_all(shares, 2 * w)
    chosen = _primitive_bases(spec, n, rng, bases)
    bundles = []
    for j, base in enumerate(chosen, start=1):
        pairs = [
            (high, spec.pow(base.value, low))
            for i, (high, low) in enumerate(halves, start=1)
            if i != j
        ]
        bundles.append(_bundle(SchemeKind.EXP_SSP, j, spec, base, pairs, w, bound))
    return bundles


def vss_exp_ssp_verify(
    candidate: int, bundle: VerificationBundle, *, candidate_index: int | None = None
) -> bool:
    _check_self(bundle, candidate_index)
    _check_candidate(candidate, bundle)
    high, low = _halves(candidate, 2 * bundle.domain_bits)
    field = bundle.field
    return bundle.polynomial.evaluate_raw(high) == field.pow(bundle.base.value, low)


def _check_self(bundle: VerificationBundle, candidate_index: int | None) -> None:
    if candidate_index is not None and candidate_index == bundle.verifier_index:
        raise SelfVerificationError(
            f"Shareholder {candidate_index} cannot verify its own share with its bundle",
            context={"index": candidate_index},
        )


def verify_share(
    candidate: int, bundle: VerificationBundle, *, candidate_index: int | None = None
) -> bool:
    if bundle.scheme.is_private:
        _check_self(bundle, candidate_index)
    match bundle.scheme:
        case SchemeKind.POW:
            return vss_pow_verify(candidate, bundle)
        case SchemeKind.SSP:
            return vss_ssp_verify(candidate, bundle)
        case SchemeKind.POW_PRIV:
            return vss_pow_priv_verify(candidate, bundle)
        case SchemeKind.SSP_PRIV:
            return vss_ssp_priv_verify(candidate, bundle)
        case SchemeKind.EXP:
            return vss_exp_verify(candidate, bundle)
        case SchemeKind.EXP_SSP:
            return vss_exp_ssp_verify(candidate, bundle)
    raise BadParamsError(f"Unknown scheme {bundle.scheme!r}")


def deal_with_regeneration(
    regenerate: Callable[[], T],
    deal: Callable[[T], R],
    *,
    attempts: int = DEFAULT_RETRIES,
) -> tuple[T, R]:
    """Regenerate shares until ``deal`` accepts them, at most ``attempts`` times."""

    last: Exception | None = None
    for attempt in range(1, attempts + 1):
        shares = regenerate()
        try:
            return shares, deal(shares)
        except (MidHalfCollisionError, DuplicateShareValueError) as err:
            last = err
            logger.debug("Regenerating shares (attempt %d/%d): %s", attempt, attempts, err)
    raise RetryBudgetExhaustedError(
        f"Shares still collide after {attempts} regenerations",
        context={"attempts": attempts, "last": str(last)},
    )


# hashing baseline


@dataclass(frozen=True, slots=True)
class HashCommitments:
    algorithm: str
    value_bytes: int
    secret_digest: bytes
    share_digests: tuple[bytes, ...] = ()


def _digest(algorithm: str, value: int, width: int) -> bytes | None:
    if value < 0 or value.bit_length() > 8 * width:
        return None
    return hashlib.new(algorithm, value.to_bytes(width, "big")).digest()


def hash_commit(
    secret: int,
    shares: Sequence[int] | None = None,
    *,
    algorithm: str = "sha256",
    value_bytes: int | None = None,
) -> HashCommitments:
    values = [secret, *(shares or ())]
    width = value_bytes or max(1, (max(values).bit_length() + 7) // 8)
    digests = tuple(_digest(algorithm, value, width) for value in shares or ())
    return HashCommitments(
        algorithm=algorithm,
        value_bytes=width,
        secret_digest=_digest(algorithm, secret, width),  # type: ignore[arg-type]
        share_digests=digests,  # type: ignore[arg-type]
    )


def hash_verify_secret(candidate: int, commitments: HashCommitments) -> bool:
    return _digest(commitments.algorithm, candidate, commitments.value_bytes) == (
        commitments.secret_digest
    )


def hash_verify_share(index: int, candidate: int, commitments: HashCommitments) -> bool:
    if not 1 <= index <= len(commitments.share_digests):
        raise IndexOutOfRangeError(
            f"No digest for shareholder {index}", context={"index": index}
        )
    expected = commitments.share_digests[index - 1]
    return _digest(commitments.algorithm, candidate, commitments.value_bytes) == expected


def hash_identify(
    shares: Iterable[tuple[int, int]], commitments: HashCommitments
) -> list[int]:
    """Indices whose share does not match its published digest."""

    return sorted(
        index for index, value in shares if not hash_verify_share(index, value, commitments)
    )


# Feldman baseline


@lru_cache(maxsize=64)
def _check_group(p: int, q: int, alpha: int) -> None:
    if not (is_prime(q) and is_prime(p)) or (p - 1) % q:
        raise BadParamsError("Feldman needs primes p, q with q | p - 1", context={"p": p, "q": q})
    if alpha in (0, 1) or not 0 < alpha < p or gmpy2.powmod(alpha, q, p) != 1:
        raise BadParamsError(
            f"alpha = {alpha:#x} does not have order q", context={"alpha": alpha}
        )


@dataclass(frozen=True, slots=True)
class FeldmanGroup:
    p: int
    q: int
    alpha: int

    def __post_init__(self) -> None:
        _check_group(self.p, self.q, self.alpha)


@dataclass(frozen=True, slots=True)
class FeldmanParams:
    p: int
    q: int
    alpha: int
    commitments: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_group(self.p, self.q, self.alpha)
        if not self.commitments or any(not 0 < c < self.p for c in self.commitments):
            raise BadParamsError("Feldman commitments must be nonzero residues mod p")

    @property
    def group(self) -> FeldmanGroup:
        return FeldmanGroup(self.p, self.q, self.alpha)


def feldman_group(
    q: int, *, p_bits: int, rng: Random, budget: int = DEFAULT_SEARCH_BUDGET
) -> FeldmanGroup:
    """p = kq + 1 prime with ``p_bits`` bits and alpha = h^((p-1)/q) != 1."""

    if not is_prime(q):
        raise BadParamsError(f"q = {q} is not prime")
    if p_bits <= q.bit_length():
        raise BadParamsError(f"p needs more than {q.bit_length()} bits, got {p_bits}")
    low = ((1 << (p_bits - 1)) - 1) // q + 1
    high = ((1 << p_bits) - 2) // q
    if low > high:
        raise BadParamsError(f"No multiple of q fits {p_bits} bits")
    for _ in range(budget):
        k = rng.randrange(low, high + 1)
        k += k % 2
        p = k * q + 1
        if p.bit_length() != p_bits or not is_prime(p):
            continue
        while True:
            h = rng.randrange(2, p - 1)
            alpha = int(gmpy2.powmod(h, (p - 1) // q, p))
            if alpha != 1:
                return FeldmanGroup(p, q, alpha)
    raise SearchBudgetExhaustedError(
        f"No prime p = kq + 1 of {p_bits} bits within {budget} draws",
        context={"q": q, "p_bits": p_bits},
    )


def feldman_commit(coefficients: Sequence[int], group: FeldmanGroup) -> FeldmanParams:
    commitments = tuple(int(gmpy2.powmod(group.alpha, a, group.p)) for a in coefficients)
    return FeldmanParams(group.p, group.q, group.alpha, commitments)


def feldman_verify(index: int, share: int, params: FeldmanParams) -> bool:
    """alpha^s_i == prod alpha_j^(i^j mod q) (mod p)."""

    if index < 1:
        raise IndexOutOfRangeError(f"Shareholder index {index} < 1", context={"index": index})
    p, q = params.p, params.q
    lhs = gmpy2.powmod(params.alpha, share, p)
    rhs = gmpy2.mpz(1)
    for j, commitment in enumerate(params.commitments):
        rhs = rhs * gmpy2.powmod(commitment, pow(index, j, q), p) % p
    return lhs == rhs


def feldman_deal(
    secret: int, t: int, n: int, group: FeldmanGroup, rng: Random
) -> tuple[ShareSet, FeldmanParams]:
    field = prime_field(group.q)
    polynomial = random_polynomial(t - 1, field.element(secret % group.q), rng)
    shares = deal_polynomial(polynomial, n, t)
    return shares, feldman_commit(polynomial.padded(t), group)
