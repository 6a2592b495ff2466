"""Set-coherence cheater detection and identification.

Detection reconstructs the secret from every t-subset of an m-coalition and
keeps a histogram; one distinct secret means nobody cheated. Identification
takes a subset rebuilding the majority secret and swaps each outsider in for
its lowest index: outsiders that break the reconstruction are cheaters.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from random import Random

from .errors import CoalitionTooSmallError, NoMajorityError, SubsetLimitExceededError
from .fields import FieldElement, FieldSpec
from .polynomials import Polynomial, random_polynomial
from .shamir import Share, deal_polynomial, reconstruct

logger = logging.getLogger(__name__)

DEFAULT_MAX_SUBSETS = 10**6

Reconstructor = Callable[[Sequence[Share], int], FieldElement]
Subset = tuple[int, ...]


@dataclass(slots=True)
class HistogramEntry:
    secret: FieldElement
    count: int = 0
    witnesses: list[Subset] = field(default_factory=list)


@dataclass(slots=True)
class ReconstructionHistogram:
    entries: dict[int, HistogramEntry] = field(default_factory=dict)

    def record(self, secret: FieldElement, subset: Subset) -> None:
        entry = self.entries.setdefault(secret.value, HistogramEntry(secret))
        entry.count += 1
        entry.witnesses.append(subset)

    def ordered(self) -> list[HistogramEntry]:
        return [self.entries[key] for key in sorted(self.entries)]

    def counts(self) -> dict[int, int]:
        return {key: self.entries[key].count for key in sorted(self.entries)}

    @property
    def total(self) -> int:
        return sum(entry.count for entry in self.entries.values())

    def majority(self) -> HistogramEntry | None:
        """The unique most frequent secret, or None on a tie."""

        if not self.entries:
            return None
        best = max(entry.count for entry in self.entries.values())
        leaders = [entry for entry in self.entries.values() if entry.count == best]
        return leaders[0] if len(leaders) == 1 else None


@dataclass(frozen=True, slots=True)
class BoundsCheck:
    m: int
    t: int
    c: int
    organized: bool
    detection_ok: bool
    identification_ok: bool


def check_bounds(m: int, t: int, c: int, organized: bool) -> BoundsCheck:
    if organized:
        detection = m - c > t
        identification = m - c >= c + t
    else:
        detection = m > t
        identification = m - c > t
    return BoundsCheck(m, t, c, organized, detection, identification)


@dataclass(slots=True)
class CheaterReport:
    consistent: bool
    majority_secret: FieldElement | None
    cheaters: list[int]
    histogram: ReconstructionHistogram
    bounds: BoundsCheck
    m: int
    t: int


def _default_reconstructor(shares: Sequence[Share], t: int) -> FieldElement:
    return reconstruct(shares, t)


def detect(
    shares: Sequence[Share],
    t: int,
    reconstructor: Reconstructor | None = None,
    *,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    max_workers: int = 1,
) -> CheaterReport:
    m = len(shares)
    if m <= t:
        raise CoalitionTooSmallError(
            f"Detection needs more than t = {t} shares, got {m}", context={"m": m, "t": t}
        )
    subsets_total = math.comb(m, t)
    if subsets_total > max_subsets:
        raise SubsetLimitExceededError(
            f"C({m}, {t}) = {subsets_total} subsets exceeds the limit of {max_subsets}",
            context={"m": m, "t": t, "limit": max_subsets},
        )
    rebuild = reconstructor or _default_reconstructor
    ordered = sorted(shares, key=lambda share: share.index)
    subsets = list(combinations(ordered, t))

    def run(subset: tuple[Share, ...]) -> FieldElement:
        return rebuild(subset, t)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            secrets = list(pool.map(run, subsets))
    else:
        secrets = [run(subset) for subset in subsets]

    histogram = ReconstructionHistogram()
    for subset, secret in zip(subsets, secrets, strict=True):
        histogram.record(secret, tuple(share.index for share in subset))
    consistent = len(histogram.entries) == 1
    leader = histogram.majority()
    logger.debug("Detection over %d subsets: %d distinct secrets", subsets_total, len(histogram.entries))
    return CheaterReport(
        consistent=consistent,
        majority_secret=leader.secret if leader else None,
        cheaters=[],
        histogram=histogram,
        bounds=check_bounds(m, t, 0, False),
        m=m,
        t=t,
    )


def identify(
    report: CheaterReport,
    shares: Sequence[Share],
    t: int,
    reconstructor: Reconstructor | None = None,
) -> CheaterReport:
    if report.consistent:
        return report
    leader = report.histogram.majority()
    if leader is None:
        raise NoMajorityError(
            "No unique majority secret; the honest-majority assumption does not hold",
            context={"histogram": report.histogram.counts()},
        )
    rebuild = reconstructor or _default_reconstructor
    by_index = {share.index: share for share in shares}
    witness = leader.witnesses[0]
    pivot = min(witness)
    kept = [by_index[index] for index in witness if index != pivot]
    cheaters = []
    for index in sorted(by_index):
        if index in witness:
            continue
        candidate = [by_index[index], *kept]
        if rebuild(candidate, t) != leader.secret:
            cheaters.append(index)
    logger.debug("Identification flagged %s", cheaters)
    return replace(
        report,
        majority_secret=leader.secret,
        cheaters=cheaters,
        bounds=check_bounds(report.m, t, len(cheaters), report.bounds.organized),
    )


@dataclass(slots=True)
class ScenarioOutcome:
    bounds: BoundsCheck
    secret: FieldElement
    cheaters: list[int]
    report: CheaterReport
    detection_correct: bool
    identified: list[int] | None
    identification_correct: bool | None
    no_majority: bool


def _independent_fakes(
    honest: dict[int, int], cheaters: Sequence[int], field: FieldSpec, rng: Random
) -> dict[int, int]:
    fakes = {}
    for index in cheaters:
        value = honest[index]
        while value == honest[index]:
            value = rng.randrange(field.size)
        fakes[index] = value
    return fakes


def _organized_fakes(
    polynomial: Polynomial, cheaters: Sequence[int], t: int, rng: Random
) -> dict[int, int]:
    field = polynomial.field
    secret = polynomial.values[0]
    while True:
        fake_secret = field.random_element(rng)
        if fake_secret.value == secret:
            continue
        fake = random_polynomial(t - 1, fake_secret, rng)
        values = {i: fake.evaluate_raw(i) for i in cheaters}
        if all(values[i] != polynomial.evaluate_raw(i) for i in cheaters):
            return values


def simulate_scenario(
    field: FieldSpec,
    m: int,
    t: int,
    c: int,
    organized: bool,
    rng: Random,
    *,
    reconstructor: Reconstructor | None = None,
    max_workers: int = 1,
) -> ScenarioOutcome:
    """Deal to m holders, let c of them cheat, and grade detection and identification."""

    secret = field.random_element(rng)
    polynomial = random_polynomial(t - 1, secret, rng)
    dealt = deal_polynomial(polynomial, m, t)
    honest = {share.index: share.value.value for share in dealt}
    cheaters = sorted(rng.sample(range(1, m + 1), c))
    if organized:
        fakes = _organized_fakes(polynomial, cheaters, t, rng)
    else:
        fakes = _independent_fakes(honest, cheaters, field, rng)
    submitted = [
        Share(index, field.element(fakes.get(index, value))) for index, value in honest.items()
    ]
    bounds = check_bounds(m, t, c, organized)
    report = detect(submitted, t, reconstructor, max_workers=max_workers)
    detection_correct = report.consistent == (c == 0)
    identified = None
    identification_correct = None
    no_majority = False
    if not report.consistent:
        try:
            report = identify(report, submitted, t, reconstructor)
        except NoMajorityError:
            no_majority = True
        else:
            identified = report.cheaters
            identification_correct = identified == cheaters
    return ScenarioOutcome(
        bounds=bounds,
        secret=secret,
        cheaters=cheaters,
        report=report,
        detection_correct=detection_correct,
        identified=identified,
        identification_correct=identification_correct,
        no_majority=no_majority,
    )
