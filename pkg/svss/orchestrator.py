"""Command handlers behind the svss CLI."""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .analysis import (
    CollusionResult,
    RateReport,
    check_bundle_size,
    gcd_collusion_attack,
    rate_table,
)
from .coherence import CheaterReport, detect, identify
from .config import FieldChoice, Settings, ensure_out_dir
from .documents import (
    BundleDocument,
    Document,
    FeldmanDocument,
    HashDocument,
    ParamsDocument,
    ShareDocument,
    read_document,
    render_documents,
    write_document,
)
from .encoding import bitsize
from .errors import BadParamsError, DocumentError, NoMajorityError, TrivialGcdError
from .fields import FieldSpec, prime_field
from .numtheory import mersenne_field, next_prime, next_safe_prime
from .schemes import (
    SchemeKind,
    VerificationBundle,
    deal_with_regeneration,
    feldman_deal,
    feldman_group,
    feldman_verify,
    hash_commit,
    hash_verify_share,
    select_verification_field,
    verify_share,
    vss_exp_deal,
    vss_exp_ssp_deal,
    vss_pow_deal,
    vss_private_deal,
    vss_ssp_deal,
)
from .shamir import Share, ShareSet, deal

logger = logging.getLogger(__name__)

DEAL_SCHEMES = (*(kind.value for kind in SchemeKind), "feldman", "hash")
ATTACK_KINDS = ("gcd", "ssp-forgery")
_FORGERY_ATTEMPTS = 100


@dataclass(slots=True)
class ParamsResult:
    """Outcome of gen-params."""

    document: ParamsDocument
    path: Path | None


@dataclass(slots=True)
class DealResult:
    """Files written for one dealing."""

    scheme: str
    field: FieldSpec
    threshold: int
    total: int
    verification_field: FieldSpec | None
    share_paths: list[Path]
    bundle_paths: list[Path]
    combined_path: Path | None
    regenerations: int
    payload_bits: list[int] = field(default_factory=list)


@dataclass(slots=True)
class VerifyResult:
    scheme: str
    verdicts: list[tuple[int, bool]]

    @property
    def accepted(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    @property
    def rejected(self) -> list[int]:
        return [index for index, ok in self.verdicts if not ok]


@dataclass(slots=True)
class CoherenceResult:
    command: str
    field: FieldSpec
    report: CheaterReport


@dataclass(slots=True)
class RatesResult:
    bs_q: int
    t: int
    n: int
    reports: list[RateReport]


@dataclass(slots=True)
class AttackResult:
    """An executed attack; ``success`` is False when it proved inconclusive."""

    kind: str
    success: bool
    field: FieldSpec
    detail: dict[str, Any]
    collusion: CollusionResult | None = None


def _sized(bundles: list[VerificationBundle]) -> list[VerificationBundle]:
    for bundle in bundles:
        bits = check_bundle_size(bundle, len(bundles))
        logger.debug("Bundle %d carries %d bits", bundle.verifier_index, bits)
    return bundles


class Orchestrator:
    """Run svss commands against the library and the filesystem."""

    def __init__(self, settings: Settings) -> None:
        self.settings = settings

    def _rng(self, seed: int | None) -> random.Random:
        return random.SystemRandom() if seed is None else random.Random(seed)

    def _verification_field(self, max_value: int, choice: FieldChoice | None = None) -> FieldSpec:
        return select_verification_field(
            max_value,
            choice or self.settings.field_choice,
            budget=self.settings.search_budget,
            max_workers=self.settings.max_workers,
            min_hamming_weight=self.settings.hamming_floor,
        )

    # gen-params

    def handle_gen_params(
        self,
        *,
        bits: int | None = None,
        safe_prime_above: int | None = None,
        mersenne: int | None = None,
        out_dir: Path | None = None,
    ) -> ParamsResult:
        given = [value is not None for value in (bits, safe_prime_above, mersenne)]
        if sum(given) != 1:
            raise BadParamsError("Give exactly one of --bits, --safe-prime-above, --mersenne")
        if mersenne is not None:
            handle = mersenne_field(mersenne)
            document = ParamsDocument(handle.spec, "mersenne", mersenne)
        else:
            if bits is not None:
                if bits < 3:
                    raise BadParamsError(f"--bits must be at least 3, got {bits}")
                floor = 1 << (bits - 1)
            else:
                floor = safe_prime_above
            safe = next_safe_prime(
                floor,
                min_hamming_weight=self.settings.hamming_floor,
                budget=self.settings.search_budget,
                max_workers=self.settings.max_workers,
            )
            document = ParamsDocument(safe.field, "safe-prime", safe.q)
        path = None
        if out_dir is not None:
            path = write_document(ensure_out_dir(out_dir) / "params.txt", document)
        logger.debug("Generated %s (%s)", document.field, document.origin)
        return ParamsResult(document, path)

    # deal

    def _secret_field(
        self, secret: int, n: int, prime: int | None, params_path: Path | None
    ) -> FieldSpec:
        if prime is not None and params_path is not None:
            raise BadParamsError("Give at most one of --prime and --params")
        if params_path is not None:
            document = read_document(params_path)
            if not isinstance(document, ParamsDocument):
                raise DocumentError(f"{params_path} is not a params document")
            return document.field
        if prime is not None:
            return prime_field(prime)
        return prime_field(next_prime(max(secret, n)))

    def handle_deal(
        self,
        *,
        secret: int,
        t: int,
        n: int,
        scheme: str,
        out_dir: Path,
        seed: int | None = None,
        prime: int | None = None,
        params_path: Path | None = None,
        insecure_combined: bool = False,
    ) -> DealResult:
        if scheme not in DEAL_SCHEMES:
            raise BadParamsError(f"Unknown scheme {scheme!r}; expected one of {DEAL_SCHEMES}")
        rng = self._rng(seed)
        field_spec = self._secret_field(secret, n, prime, params_path)
        if not field_spec.is_prime:
            raise BadParamsError(f"Secrets are shared over a prime field, not {field_spec}")
        if not field_spec.contains(secret):
            raise BadParamsError(f"Secret {secret:#x} does not fit {field_spec}")
        out = ensure_out_dir(out_dir)

        public: Document | None = None
        bundles: list[VerificationBundle] = []
        verification_field: FieldSpec | None = None
        attempts = 0

        def regenerate() -> ShareSet:
            nonlocal attempts
            attempts += 1
            return deal(field_spec.element(secret), t, n, rng)

        if scheme == "feldman":
            group = feldman_group(
                field_spec.modulus,
                p_bits=self.settings.feldman_p_bits,
                rng=rng,
                budget=self.settings.search_budget,
            )
            share_set, params = feldman_deal(secret, t, n, group, rng)
            public = FeldmanDocument(params)
        elif scheme == "hash":
            share_set = regenerate()
            commitments = hash_commit(
                secret, share_set.values(), algorithm=self.settings.hash_algorithm
            )
            public = HashDocument(commitments)
        else:
            kind = SchemeKind(scheme)
            verification_field = self._scheme_field(kind, field_spec)
            share_set, dealt = deal_with_regeneration(
                regenerate,
                lambda shares: self._deal_bundles(kind, shares, field_spec, verification_field, rng),
                attempts=self.settings.midhalf_retries,
            )
            if isinstance(dealt, VerificationBundle):
                public = BundleDocument(dealt)
            else:
                bundles = dealt

        share_documents = [
            ShareDocument(field_spec, t, n, (share,)) for share in share_set.shares
        ]
        share_paths = [
            write_document(out / f"share_{doc.shares[0].index}.txt", doc) for doc in share_documents
        ]
        bundle_documents: list[Document]
        if public is not None:
            bundle_documents = [public]
            bundle_paths = [write_document(out / "bundle_0.txt", public)]
        else:
            bundle_documents = [BundleDocument(bundle) for bundle in bundles]
            bundle_paths = [
                write_document(out / f"bundle_{doc.bundle.verifier_index}.txt", doc)
                for doc in bundle_documents
            ]
        combined_path = None
        if insecure_combined:
            combined = ShareDocument(field_spec, t, n, tuple(share_set.shares))
            combined_path = out / "combined.txt"
            combined_path.write_text(
                render_documents([combined, *bundle_documents]), encoding="utf-8"
            )
            logger.warning("Wrote every share and bundle to %s", combined_path)

        payload_bits = [
            doc.bundle.payload_bits() for doc in bundle_documents if isinstance(doc, BundleDocument)
        ]
        return DealResult(
            scheme=scheme,
            field=field_spec,
            threshold=t,
            total=n,
            verification_field=verification_field,
            share_paths=share_paths,
            bundle_paths=bundle_paths,
            combined_path=combined_path,
            regenerations=max(0, attempts - 1),
            payload_bits=payload_bits,
        )

    def _scheme_field(self, kind: SchemeKind, secret_field: FieldSpec) -> FieldSpec:
        bits = bitsize(secret_field.size - 1)
        match kind:
            case SchemeKind.POW | SchemeKind.POW_PRIV | SchemeKind.EXP:
                return self._verification_field(secret_field.size - 1)
            case SchemeKind.SSP:
                return self._verification_field((1 << (bits - bits // 2)) - 1)
            case SchemeKind.SSP_PRIV:
                padded = max(2, bits + bits % 2)
                return self._verification_field((1 << (padded // 2)) - 1)
            case SchemeKind.EXP_SSP:
                return self._verification_field((1 << (bits - bits // 2)) - 1)
        raise BadParamsError(f"Unknown scheme {kind!r}")

    def _deal_bundles(
        self,
        kind: SchemeKind,
        share_set: ShareSet,
        secret_field: FieldSpec,
        spec: FieldSpec,
        rng: random.Random,
    ) -> VerificationBundle | list[VerificationBundle]:
        values = share_set.values()
        bound = secret_field.size
        bits = bitsize(bound - 1)
        match kind:
            case SchemeKind.POW:
                return vss_pow_deal(values, spec, rng, domain_bound=bound)
            case SchemeKind.SSP:
                return vss_ssp_deal(values, max(2, bits), spec, rng)
            case SchemeKind.POW_PRIV:
                exponents = rng.sample(range(1, spec.group_order + 1), len(values))
                return vss_private_deal(values, exponents, kind, spec, domain_bound=bound)
            case SchemeKind.SSP_PRIV:
                exponents = rng.sample(range(1, spec.group_order + 1), len(values))
                return vss_private_deal(values, exponents, kind, spec, domain_bits=bits)
            case SchemeKind.EXP:
                return _sized(vss_exp_deal(values, spec, rng, domain_bound=bound))
            case SchemeKind.EXP_SSP:
                return _sized(vss_exp_ssp_deal(values, bits - bits // 2, spec, rng))
        raise BadParamsError(f"Unknown scheme {kind!r}")

    # verify

    def handle_verify(self, *, bundle_path: Path, share_path: Path) -> VerifyResult:
        share_doc = read_document(share_path)
        if not isinstance(share_doc, ShareDocument):
            raise DocumentError(f"{share_path} is not a share document")
        public = read_document(bundle_path)
        shares = share_doc.shares
        match public:
            case BundleDocument(bundle=bundle):
                verdicts = [
                    (s.index, verify_share(s.value.value, bundle, candidate_index=s.index))
                    for s in shares
                ]
                scheme = bundle.scheme.value
            case FeldmanDocument(params=params):
                if share_doc.field != prime_field(params.q):
                    raise DocumentError("Share field does not match the Feldman group order q")
                verdicts = [(s.index, feldman_verify(s.index, s.value.value, params)) for s in shares]
                scheme = "feldman"
            case HashDocument(commitments=commitments):
                verdicts = [
                    (s.index, hash_verify_share(s.index, s.value.value, commitments)) for s in shares
                ]
                scheme = "hash"
            case _:
                raise DocumentError(f"{bundle_path} holds no verification data")
        logger.debug("Verified %d share(s) under %s", len(verdicts), scheme)
        return VerifyResult(scheme, verdicts)

    # detect / identify

    def _load_shares(self, paths: Sequence[Path]) -> tuple[FieldSpec, int, list[Share]]:
        if not paths:
            raise BadParamsError("No share files given")
        field_spec: FieldSpec | None = None
        threshold = 0
        shares: dict[int, Share] = {}
        for path in paths:
            document = read_document(path)
            if not isinstance(document, ShareDocument):
                raise DocumentError(f"{path} is not a share document")
            if field_spec is not None and document.field != field_spec:
                raise DocumentError(f"{path} uses {document.field}, expected {field_spec}")
            field_spec = document.field
            threshold = document.threshold
            for share in document.shares:
                if share.index in shares:
                    raise DocumentError(f"Share index {share.index} given twice")
                shares[share.index] = share
        return field_spec, threshold, [shares[i] for i in sorted(shares)]

    def handle_detect(self, *, share_paths: Sequence[Path], t: int | None = None) -> CoherenceResult:
        field_spec, threshold, shares = self._load_shares(share_paths)
        report = detect(
            shares,
            t or threshold,
            max_subsets=self.settings.max_subsets,
            max_workers=self.settings.max_workers,
        )
        if not report.consistent and report.histogram.majority() is None:
            raise NoMajorityError(
                "Cheating detected but no secret holds a unique majority",
                context={"histogram": report.histogram.counts()},
            )
        return CoherenceResult("detect", field_spec, report)

    def handle_identify(
        self, *, share_paths: Sequence[Path], t: int | None = None
    ) -> CoherenceResult:
        field_spec, threshold, shares = self._load_shares(share_paths)
        t = t or threshold
        report = detect(
            shares,
            t,
            max_subsets=self.settings.max_subsets,
            max_workers=self.settings.max_workers,
        )
        return CoherenceResult("identify", field_spec, identify(report, shares, t))

    # rates

    def handle_rates(
        self, *, bs_q: int, t: int, n: int, p_bits: int | None = None
    ) -> RatesResult:
        reports = rate_table(
            bs_q,
            t,
            n,
            p_bits=p_bits or self.settings.feldman_p_bits,
            budget=self.settings.search_budget,
            max_workers=self.settings.max_workers,
        )
        return RatesResult(bs_q, t, n, reports)

    # attack-demo

    def handle_attack_demo(
        self, *, kind: str, bits: int = 10, n: int = 5, t: int = 3, seed: int | None = None
    ) -> AttackResult:
        if kind not in ATTACK_KINDS:
            raise BadParamsError(f"Unknown attack {kind!r}; expected one of {ATTACK_KINDS}")
        if bits < 3:
            raise BadParamsError(f"--bits must be at least 3, got {bits}")
        rng = self._rng(seed)
        secret_field = prime_field(next_prime(1 << (bits - 1)))
        if kind == "gcd":
            return self._gcd_demo(secret_field, n, t, rng)
        return self._ssp_forgery_demo(secret_field, n, t, rng)

    def _gcd_demo(
        self, secret_field: FieldSpec, n: int, t: int, rng: random.Random
    ) -> AttackResult:
        spec = self._verification_field(secret_field.size - 1)
        exponents_top = min(spec.group_order, self.settings.power_limit)
        if exponents_top < n:
            raise BadParamsError(f"{spec} cannot hold {n} distinct exponents under the power limit")
        secret = secret_field.random_element(rng)
        share_set, bundles = deal_with_regeneration(
            lambda: deal(secret, t, n, rng),
            lambda shares: vss_private_deal(
                shares.values(),
                rng.sample(range(1, exponents_top + 1), n),
                SchemeKind.POW_PRIV,
                spec,
                domain_bound=secret_field.size,
            ),
            attempts=self.settings.midhalf_retries,
        )
        target = rng.randrange(1, n + 1)
        colluding = [bundle for bundle in bundles if bundle.verifier_index != target]
        own = [share.value.value for share in share_set.shares if share.index != target]
        expected = share_set.by_index(target).value.value
        detail: dict[str, Any] = {"target": target, "expected": expected}
        try:
            result = gcd_collusion_attack(
                colluding,
                exclude=own,
                power_limit=self.settings.power_limit,
                scan_limit=self.settings.scan_limit,
            )
        except TrivialGcdError:
            return AttackResult("gcd", False, spec, detail)
        detail["recovered"] = result.recovered
        return AttackResult("gcd", result.recovered == [expected], spec, detail, result)

    def _ssp_forgery_demo(
        self, secret_field: FieldSpec, n: int, t: int, rng: random.Random
    ) -> AttackResult:
        bits = max(2, bitsize(secret_field.size - 1))
        spec = self._scheme_field(SchemeKind.SSP, secret_field)
        _, bundle = deal_with_regeneration(
            lambda: deal(secret_field.random_element(rng), t, n, rng),
            lambda shares: vss_ssp_deal(shares.values(), bits, spec, rng),
            attempts=self.settings.midhalf_retries,
        )
        high_bits, low_bits = bits - bits // 2, bits // 2
        for attempt in range(1, _FORGERY_ATTEMPTS + 1):
            high = rng.randrange(1 << high_bits)
            low = bundle.polynomial.evaluate_raw(high)
            if low >= 1 << low_bits:
                continue
            forged = (high << low_bits) | low
            accepted = verify_share(forged, bundle)
            detail = {"forged": forged, "high": high, "low": low, "attempts": attempt}
            return AttackResult("ssp-forgery", accepted, spec, detail)
        return AttackResult("ssp-forgery", False, spec, {"attempts": _FORGERY_ATTEMPTS})
