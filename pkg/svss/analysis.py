"""Executable cryptanalysis and the information-rate calculator.

The attacks and exhaustive scans here are desk-scale oracles: they refuse
fields beyond the configured scan limit.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from random import Random
from typing import Any

from scipy.stats import chi2_contingency

from .encoding import Bitstring, bitsize, concat
from .errors import (
    BadParamsError,
    BundleTooLargeError,
    FieldTooLargeError,
    MixedFieldsError,
    NotPrimitiveError,
    TrivialGcdError,
)
from .fields import FieldElement, FieldSpec
from .numtheory import DEFAULT_SEARCH_BUDGET, is_primitive, next_safe_prime, random_primitive_element
from .polynomials import (
    DEFAULT_SCAN_LIMIT,
    PointSet,
    Polynomial,
    lagrange_interpolate,
    monomial,
    poly_gcd,
    poly_pow,
    poly_powmod,
    roots_bruteforce,
)
from .schemes import SchemeKind, VerificationBundle, verify_share

logger = logging.getLogger(__name__)

DEFAULT_POWER_LIMIT = 2**20
DEFAULT_FELDMAN_P_BITS = 2048


# information rates


class RateScheme(StrEnum):
    FELDMAN = "feldman"
    VSS_EXP = "vss-exp"
    VSS_EXP_SSP = "vss-exp-ssp"


@dataclass(slots=True)
class RateReport:
    scheme: RateScheme
    total_bits: int
    verification_bits: int
    committed_bits: int
    rate: Fraction
    params: dict[str, Any] = field(default_factory=dict)


@lru_cache(maxsize=64)
def safe_prime_bits(bits: int, budget: int = DEFAULT_SEARCH_BUDGET, max_workers: int = 1) -> int:
    """bs(NSP(2^bits))."""

    return bitsize(next_safe_prime(max(1 << bits, 4), budget=budget, max_workers=max_workers).p)


def rate_report(
    scheme: RateScheme,
    bs_q: int,
    t: int,
    n: int,
    *,
    p_bits: int = DEFAULT_FELDMAN_P_BITS,
    field_bits: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
    max_workers: int = 1,
) -> RateReport:
    """Verification bits over committed bits; domain parameter bits count toward the total only."""

    if bs_q < 1 or t < 1 or n < 1 or t > n:
        raise BadParamsError(
            "Rates need bs(q) >= 1 and 0 < t <= n", context={"bs_q": bs_q, "t": t, "n": n}
        )
    match scheme:
        case RateScheme.FELDMAN:
            if p_bits <= bs_q:
                raise BadParamsError(f"bs(p) = {p_bits} must exceed bs(q) = {bs_q}")
            k = Fraction(p_bits, bs_q)
            verification = (t + 1) * p_bits
            committed = t * bs_q
            return RateReport(
                scheme,
                total_bits=verification,
                verification_bits=verification,
                committed_bits=committed,
                rate=Fraction(verification, committed),
                params={"bs_q": bs_q, "bs_p": p_bits, "t": t, "n": n, "K": k},
            )
        case RateScheme.VSS_EXP:
            bits = field_bits or safe_prime_bits(bs_q, budget, max_workers)
            verification = n * bits
            committed = n * bs_q
            return RateReport(
                scheme,
                total_bits=bitsize(bs_q) + verification,
                verification_bits=verification,
                committed_bits=committed,
                rate=Fraction(verification, committed),
                params={"bs_q": bs_q, "bs_p1": bits, "t": t, "n": n},
            )
        case RateScheme.VSS_EXP_SSP:
            w = bs_q - bs_q // 2
            bits = field_bits or safe_prime_bits(w, budget, max_workers)
            verification = n * bits
            committed = n * bs_q
            return RateReport(
                scheme,
                total_bits=bitsize(w) + verification,
                verification_bits=verification,
                committed_bits=committed,
                rate=Fraction(verification, committed),
                params={"bs_q": bs_q, "w": w, "bs_p2": bits, "t": t, "n": n},
            )
    raise BadParamsError(f"Unknown rate scheme {scheme!r}")


def rate_table(bs_q: int, t: int, n: int, **options: Any) -> list[RateReport]:
    return [rate_report(scheme, bs_q, t, n, **options) for scheme in RateScheme]


def bundle_bit_bound(bundle: VerificationBundle, n: int) -> int:
    """Rate-formula total for one EXP or EXP-SSP bundle dealt to n holders."""

    field_bits = bitsize(bundle.field.size)
    match bundle.scheme:
        case SchemeKind.EXP:
            report = rate_report(RateScheme.VSS_EXP, bundle.domain_bits, 1, n, field_bits=field_bits)
        case SchemeKind.EXP_SSP:
            report = rate_report(
                RateScheme.VSS_EXP_SSP, 2 * bundle.domain_bits, 1, n, field_bits=field_bits
            )
        case _:
            raise BadParamsError(f"No rate total for {bundle.scheme} bundles")
    return report.total_bits


def check_bundle_size(bundle: VerificationBundle, n: int) -> int:
    bound = bundle_bit_bound(bundle, n)
    size = bundle.payload_bits()
    if size > bound:
        raise BundleTooLargeError(
            f"Bundle {bundle.verifier_index} needs {size} bits, over the total of {bound}",
            context={"scheme": str(bundle.scheme), "bits": size, "bound": bound},
        )
    return size


# exponentiating polynomial roots


@dataclass(frozen=True, slots=True)
class EprpInstance:
    polynomial: Polynomial
    base: FieldElement

    def __post_init__(self) -> None:
        if self.polynomial.field != self.base.field:
            raise MixedFieldsError("Polynomial and base live in different fields")
        if not is_primitive(self.base):
            raise NotPrimitiveError(f"{self.base.value} is not primitive in {self.base.field}")

    @property
    def field(self) -> FieldSpec:
        return self.base.field


def _guard(field: FieldSpec, limit: int) -> None:
    if field.size > limit:
        raise FieldTooLargeError(
            f"Refusing an exhaustive scan of {field} (limit {limit})",
            context={"size": field.size, "limit": limit},
        )


def _power_table(base: FieldElement, count: int) -> list[int]:
    field = base.field
    table = []
    current = 1
    for _ in range(count):
        table.append(current)
        current = field.mul(current, base.value)
    return table


def eprp_roots_bruteforce(
    instance: EprpInstance, *, limit: int = DEFAULT_SCAN_LIMIT
) -> set[FieldElement]:
    """Every x with p(x) = r^x, x read both as field element and as natural exponent."""

    field = instance.field
    _guard(field, limit)
    powers = _power_table(instance.base, field.size)
    polynomial = instance.polynomial
    return {
        field.element(x) for x in range(field.size) if polynomial.evaluate_raw(x) == powers[x]
    }


def discrete_log_scan(base: FieldElement, target: FieldElement) -> set[int]:
    """Exponents x in [0, group order] with base^x = target."""

    if base.field != target.field:
        raise MixedFieldsError("Base and target live in different fields")
    field = base.field
    found = set()
    for x in range(field.group_order + 1):
        if field.pow(base.value, x) == target.value:
            found.add(x)
    return found


def nth_roots_bruteforce(
    value: int, u: int, field: FieldSpec, *, limit: int = DEFAULT_SCAN_LIMIT
) -> set[int]:
    _guard(field, limit)
    return {x for x in range(field.size) if field.pow(x, u) == value}


# collusion attack on private-parameter bundles


@dataclass(slots=True)
class CollusionResult:
    variant: SchemeKind
    colluders: list[int]
    gcd: Polynomial
    candidates: list[int]
    recovered: list[int]


def _field_polynomial(field: FieldSpec) -> Polynomial:
    """x^|F| - x: every field element is a root."""

    return monomial(field, field.size) - monomial(field, 1)


def _x(field: FieldSpec) -> Polynomial:
    return monomial(field, 1)


def _pivot_modulus(
    field: FieldSpec, degree: int, build: Callable[[], Polynomial]
) -> Polynomial:
    """The densest constraint worth materializing, else x^|F| - x."""

    if degree < field.size:
        pivot = build()
        if not pivot.is_zero:
            return pivot
    return _field_polynomial(field)


def gcd_collusion_attack(
    bundles: Sequence[VerificationBundle],
    *,
    exclude: Iterable[int] = (),
    power_limit: int = DEFAULT_POWER_LIMIT,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> CollusionResult:
    """Pool private bundles and read the missing share off the gcd of their constraints.

    The constraint with the smallest exponent is materialized densely and the
    others are reduced modulo the running gcd. ``exclude`` holds the colluders'
    own shares.
    """

    if not bundles:
        raise BadParamsError("The attack needs at least one bundle")
    variant = bundles[0].scheme
    spec = bundles[0].field
    if variant not in (SchemeKind.POW_PRIV, SchemeKind.SSP_PRIV):
        raise BadParamsError(f"No collusion attack on {variant} bundles")
    if any(b.scheme is not variant or b.field != spec for b in bundles):
        raise BadParamsError("Bundles mix schemes or fields")
    _guard(spec, scan_limit)
    for bundle in bundles:
        if bundle.base.value > power_limit:
            raise FieldTooLargeError(
                f"Exponent u = {bundle.base.value} exceeds the power limit {power_limit}",
                context={"u": bundle.base.value, "limit": power_limit},
            )

    colluders = sorted(b.verifier_index for b in bundles)
    x = _x(spec)
    if variant is SchemeKind.POW_PRIV:
        pivot = min(bundles, key=lambda b: b.base.value)
        g = _pivot_modulus(
            spec,
            max(pivot.base.value, pivot.polynomial.degree),
            lambda: pivot.polynomial - monomial(spec, pivot.base.value),
        )
        for bundle in bundles:
            reduced = bundle.polynomial % g - poly_powmod(x, bundle.base.value, g)
            g = poly_gcd(g, reduced)
    else:
        if len(bundles) < 2:
            raise TrivialGcdError(
                "One split-share bundle cannot eliminate the hidden low half",
                context={"colluders": colluders},
            )
        pairs = list(combinations(bundles, 2))

        def pair_degree(pair: tuple[VerificationBundle, VerificationBundle]) -> int:
            a, b = pair
            return max(
                a.polynomial.degree * b.base.value, b.polynomial.degree * a.base.value, 0
            )

        first = min(pairs, key=pair_degree)
        g = _pivot_modulus(
            spec,
            pair_degree(first),
            lambda: poly_pow(first[0].polynomial, first[1].base.value)
            - poly_pow(first[1].polynomial, first[0].base.value),
        )
        for a, b in pairs:
            left = poly_powmod(a.polynomial, b.base.value, g)
            right = poly_powmod(b.polynomial, a.base.value, g)
            g = poly_gcd(g, left - right)
    # keep only roots lying in the field
    if g.degree >= 1:
        g = poly_gcd(g, poly_powmod(x, spec.size, g) - x)
    if g.degree < 1:
        logger.warning("Collusion of %s is inconclusive: constant gcd", colluders)
        raise TrivialGcdError(
            "The constraint polynomials share no root", context={"colluders": colluders}
        )

    roots = sorted(x.value for x in roots_bruteforce(g, limit=scan_limit))
    if variant is SchemeKind.POW_PRIV:
        candidates = [x for x in roots if x < bundles[0].domain_bound]
    else:
        candidates = _ssp_candidates(roots, bundles, scan_limit)
    skip = set(exclude)
    recovered = [value for value in candidates if value not in skip]
    logger.debug("Collusion of %s: gcd degree %d, recovered %s", colluders, g.degree, recovered)
    return CollusionResult(variant, colluders, g, candidates, recovered)


def _ssp_candidates(
    roots: Sequence[int], bundles: Sequence[VerificationBundle], scan_limit: int
) -> list[int]:
    bits = bundles[0].domain_bits
    high_bits = bits - bits // 2
    low_bits = bits // 2
    spec = bundles[0].field
    candidates = []
    for high in roots:
        if high >= 1 << high_bits:
            continue
        lows: set[int] | None = None
        for bundle in bundles:
            target = bundle.polynomial.evaluate_raw(high)
            found = nth_roots_bruteforce(target, bundle.base.value, spec, limit=scan_limit)
            lows = found if lows is None else lows & found
        for low in sorted(lows or ()):
            if low < 1 << low_bits:
                value = concat(Bitstring(high, high_bits), Bitstring(low, low_bits)).value
                candidates.append(value)
    return candidates


# soundness experiments


def accepting_set(bundle: VerificationBundle, *, limit: int = DEFAULT_SCAN_LIMIT) -> set[int]:
    """Every value of the share domain the bundle accepts."""

    if bundle.domain_bound > limit:
        raise FieldTooLargeError(
            f"Share domain of {bundle.domain_bound} values exceeds the scan limit {limit}",
            context={"bound": bundle.domain_bound, "limit": limit},
        )
    return {x for x in range(bundle.domain_bound) if verify_share(x, bundle)}


@dataclass(slots=True)
class ForgeryReport:
    trials: int
    accepted: int
    rate: float
    accepted_values: set[int]


def forgery_trial(
    bundle: VerificationBundle,
    forgeries: int,
    rng: Random,
    *,
    exclude: Iterable[int] = (),
) -> ForgeryReport:
    """Submit uniformly random values (never the genuine shares) and count acceptances."""

    skip = set(exclude)
    accepted_values: set[int] = set()
    accepted = 0
    for _ in range(forgeries):
        value = rng.randrange(bundle.domain_bound)
        while value in skip:
            value = rng.randrange(bundle.domain_bound)
        if verify_share(value, bundle):
            accepted += 1
            accepted_values.add(value)
    return ForgeryReport(forgeries, accepted, accepted / forgeries if forgeries else 0.0, accepted_values)


def _spurious_roots_exp(field: FieldSpec, bits: int, n: int, rng: Random) -> int:
    domain = 1 << bits
    shares = rng.sample(range(domain), n - 1)
    base, _ = random_primitive_element(field, rng)
    powers = _power_table(base, domain)
    polynomial = lagrange_interpolate(PointSet.of(field, [(s, powers[s]) for s in shares]))
    hits = sum(1 for x in range(domain) if polynomial.evaluate_raw(x) == powers[x])
    return hits - (n - 1)


def _spurious_roots_exp_ssp(field: FieldSpec, bits: int, n: int, rng: Random) -> int:
    domain = 1 << bits
    highs = rng.sample(range(domain), n - 1)
    lows = rng.sample(range(domain), n - 1)
    # sigma: a uniform permutation of the half domain with sigma(M_i) = L_i
    sigma = dict(zip(highs, lows, strict=True))
    free_inputs = [x for x in range(domain) if x not in sigma]
    free_outputs = [y for y in range(domain) if y not in set(lows)]
    rng.shuffle(free_outputs)
    sigma.update(zip(free_inputs, free_outputs, strict=True))
    base, _ = random_primitive_element(field, rng)
    powers = _power_table(base, domain)
    polynomial = lagrange_interpolate(
        PointSet.of(field, [(h, powers[sigma[h]]) for h in highs])
    )
    hits = sum(1 for x in range(domain) if polynomial.evaluate_raw(x) == powers[sigma[x]])
    return hits - (n - 1)


def root_count_distribution(
    kind: SchemeKind, bits: int, n: int, trials: int, rng: Random
) -> Counter[int]:
    """Histogram of spurious solutions per random instance, over GF(NSP(2^bits))."""

    if n < 2:
        raise BadParamsError("Instances need at least two shareholders")
    spec = next_safe_prime(max(1 << bits, 4)).field
    if kind is SchemeKind.EXP:
        sample = _spurious_roots_exp
    elif kind is SchemeKind.EXP_SSP:
        sample = _spurious_roots_exp_ssp
    else:
        raise BadParamsError(f"No root-count experiment for {kind}")
    return Counter(sample(spec, bits, n, rng) for _ in range(trials))


@dataclass(slots=True)
class EquivalenceReport:
    statistic: float
    p_value: float
    equivalent: bool
    exp_histogram: Counter[int]
    exp_ssp_histogram: Counter[int]
    bins: list[str]


def _merged_table(first: Counter[int], second: Counter[int]) -> tuple[list[list[int]], list[str]]:
    keys = sorted(set(first) | set(second))
    rows: list[list[int]] = [[], []]
    labels: list[str] = []
    pending = [0, 0]
    start: int | None = None
    for key in keys:
        if start is None:
            start = key
        pending[0] += first.get(key, 0)
        pending[1] += second.get(key, 0)
        if min(pending) >= 5:
            rows[0].append(pending[0])
            rows[1].append(pending[1])
            labels.append(str(key) if start == key else f"{start}-{key}")
            pending = [0, 0]
            start = None
    if start is not None:
        if rows[0]:
            rows[0][-1] += pending[0]
            rows[1][-1] += pending[1]
            labels[-1] = f"{labels[-1].split('-')[0]}+"
        else:
            rows[0].append(pending[0])
            rows[1].append(pending[1])
            labels.append(f"{start}+")
    return rows, labels


def stochastic_equivalence(
    bits: int, n: int, trials: int, rng: Random, *, alpha: float = 0.01
) -> EquivalenceReport:
    """Chi-square homogeneity test between EXP and EXP-SSP spurious-root histograms."""

    exp_hist = root_count_distribution(SchemeKind.EXP, bits, n, trials, rng)
    ssp_hist = root_count_distribution(SchemeKind.EXP_SSP, bits, n, trials, rng)
    table, labels = _merged_table(exp_hist, ssp_hist)
    if len(table[0]) < 2:
        statistic, p_value = 0.0, 1.0
    else:
        result = chi2_contingency(table)
        statistic, p_value = float(result[0]), float(result[1])
    return EquivalenceReport(
        statistic=statistic,
        p_value=p_value,
        equivalent=p_value >= alpha,
        exp_histogram=exp_hist,
        exp_ssp_histogram=ssp_hist,
        bins=labels,
    )


def interpolant_degree_deficiency(field: FieldSpec, t: int, trials: int, rng: Random) -> float:
    """Frequency of deg < t - 1 for interpolants of t random points."""

    if t < 1 or t > field.size:
        raise BadParamsError(f"Need 1 <= t <= |F|, got t = {t}")
    deficient = 0
    for _ in range(trials):
        xs = rng.sample(range(field.size), t)
        pairs = [(x, rng.randrange(field.size)) for x in xs]
        if lagrange_interpolate(PointSet.of(field, pairs)).degree < t - 1:
            deficient += 1
    return deficient / trials
