from __future__ import annotations

import pytest

from svss.analysis import bundle_bit_bound, check_bundle_size
from svss.config import FieldChoice, Settings
from svss.documents import (
    BundleDocument,
    FeldmanDocument,
    HashDocument,
    ParamsDocument,
    ShareDocument,
    parse_documents,
    read_document,
    write_document,
)
from svss.errors import (
    BadParamsError,
    BundleTooLargeError,
    DocumentError,
    NoMajorityError,
    SvssError,
)
from svss.fields import binary_field, prime_field
from svss.orchestrator import DEAL_SCHEMES, Orchestrator
from svss.shamir import Share

GF101 = prime_field(101)
PRIVATE_SCHEMES = ("pow-priv", "ssp-priv", "exp", "exp-ssp")


@pytest.fixture()
def orchestrator() -> Orchestrator:
    return Orchestrator(Settings(feldman_p_bits=32))


def _deal(orchestrator, workdir, scheme, **kwargs):
    options = {"secret": 42, "t": 2, "n": 4, "prime": 101, "seed": 3}
    options.update(kwargs)
    return orchestrator.handle_deal(scheme=scheme, out_dir=workdir, **options)


def _tamper(path):
    document = read_document(path)
    share = document.shares[0]
    bumped = Share(share.index, share.value + document.field.one)
    write_document(path, ShareDocument(document.field, document.threshold, document.total, (bumped,)))


class TestGenParams:
    def test_safe_prime_above(self, orchestrator):
        result = orchestrator.handle_gen_params(safe_prime_above=11)
        assert result.document.field == prime_field(23)
        assert result.document.field.descriptor() == "prime 17"
        assert (result.document.origin, result.document.origin_value) == ("safe-prime", 11)
        assert result.path is None

    def test_bits(self, orchestrator):
        result = orchestrator.handle_gen_params(bits=10)
        assert result.document.field == prime_field(563)
        assert result.document.origin_value == 281

    def test_mersenne_writes_params_file(self, orchestrator, workdir):
        result = orchestrator.handle_gen_params(mersenne=5, out_dir=workdir)
        assert result.path == workdir / "params.txt"
        assert read_document(result.path) == ParamsDocument(binary_field(5), "mersenne", 5)

    @pytest.mark.parametrize(
        "options", [{}, {"bits": 8, "mersenne": 5}, {"bits": 2}], ids=["none", "two", "too-small"]
    )
    def test_bad_options(self, orchestrator, options):
        with pytest.raises(BadParamsError):
            orchestrator.handle_gen_params(**options)


class TestDeal:
    @pytest.mark.parametrize("scheme", DEAL_SCHEMES)
    def test_every_scheme_verifies(self, orchestrator, workdir, scheme):
        result = _deal(orchestrator, workdir, scheme)
        assert [path.name for path in result.share_paths] == [f"share_{i}.txt" for i in range(1, 5)]
        if scheme in PRIVATE_SCHEMES:
            assert [path.name for path in result.bundle_paths] == [
                f"bundle_{i}.txt" for i in range(1, 5)
            ]
            bundle = workdir / "bundle_2.txt"
        else:
            assert [path.name for path in result.bundle_paths] == ["bundle_0.txt"]
            bundle = workdir / "bundle_0.txt"
        for share in (1, 3, 4):
            verdict = orchestrator.handle_verify(
                bundle_path=bundle, share_path=workdir / f"share_{share}.txt"
            )
            assert verdict.accepted, (scheme, share)

    def test_secret_field_defaults_to_next_prime(self, orchestrator, workdir):
        result = orchestrator.handle_deal(
            secret=20, t=2, n=3, scheme="hash", out_dir=workdir, seed=1
        )
        assert result.field == prime_field(23)

    def test_params_file_supplies_the_field(self, orchestrator, workdir):
        params = orchestrator.handle_gen_params(safe_prime_above=11, out_dir=workdir).path
        result = orchestrator.handle_deal(
            secret=5, t=2, n=3, scheme="pow", out_dir=workdir, seed=2, params_path=params
        )
        assert result.field == prime_field(23)
        assert result.verification_field == prime_field(47)
        assert isinstance(read_document(result.bundle_paths[0]), BundleDocument)

    def test_seeded_deal_is_reproducible(self, orchestrator, tmp_path):
        first = _deal(orchestrator, tmp_path / "a", "exp")
        second = _deal(orchestrator, tmp_path / "b", "exp")
        for left, right in zip(first.share_paths, second.share_paths, strict=True):
            assert left.read_text() == right.read_text()

    def test_payload_bits_reported_for_bundles(self, orchestrator, workdir):
        result = _deal(orchestrator, workdir, "exp")
        assert len(result.payload_bits) == 4
        assert result.verification_field == prime_field(167)

    @pytest.mark.parametrize("scheme", ["exp", "exp-ssp"])
    def test_bundles_checked_against_rate_total(self, orchestrator, workdir, mocker, scheme):
        check = mocker.patch("svss.orchestrator.check_bundle_size", wraps=check_bundle_size)
        result = _deal(orchestrator, workdir, scheme)
        assert check.call_count >= 4
        for path, bits in zip(result.bundle_paths, result.payload_bits, strict=True):
            bundle = read_document(path).bundle
            assert bits == bundle.payload_bits()
            assert bits <= bundle_bit_bound(bundle, 4)

    def test_oversized_bundle_stops_the_deal(self, orchestrator, workdir, mocker):
        mocker.patch("svss.analysis.bundle_bit_bound", return_value=1)
        with pytest.raises(BundleTooLargeError):
            _deal(orchestrator, workdir, "exp")
        assert not any(workdir.iterdir())

    def test_feldman_public_document(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "feldman")
        document = read_document(workdir / "bundle_0.txt")
        assert isinstance(document, FeldmanDocument)
        assert document.params.q == 101
        assert document.params.p.bit_length() == 32

    def test_combined_file(self, orchestrator, workdir):
        result = _deal(orchestrator, workdir, "pow-priv", insecure_combined=True)
        documents = parse_documents(result.combined_path.read_text())
        assert len(documents[0].shares) == 4
        assert len(documents) == 5

    def test_no_combined_file_by_default(self, orchestrator, workdir):
        result = _deal(orchestrator, workdir, "hash")
        assert result.combined_path is None
        assert not (workdir / "combined.txt").exists()

    @pytest.mark.parametrize(
        ("scheme", "options"),
        [("lagrange", {}), ("hash", {"prime": 100}), ("hash", {"secret": 500})],
        ids=["unknown-scheme", "composite", "secret-too-large"],
    )
    def test_rejected(self, orchestrator, workdir, scheme, options):
        with pytest.raises(SvssError) as info:
            _deal(orchestrator, workdir, scheme, **options)
        assert info.value.exit_code == 2

    def test_prime_and_params_are_exclusive(self, orchestrator, workdir):
        params = orchestrator.handle_gen_params(safe_prime_above=11, out_dir=workdir).path
        with pytest.raises(BadParamsError, match="at most one"):
            _deal(orchestrator, workdir, "hash", params_path=params)

    def test_binary_params_cannot_hold_secrets(self, orchestrator, workdir):
        params = orchestrator.handle_gen_params(mersenne=5, out_dir=workdir).path
        with pytest.raises(BadParamsError, match="prime field"):
            orchestrator.handle_deal(
                secret=3, t=2, n=3, scheme="hash", out_dir=workdir, params_path=params
            )


class TestVerify:
    @pytest.mark.parametrize("scheme", ["hash", "feldman"])
    def test_tampered_share_rejected(self, orchestrator, workdir, scheme):
        _deal(orchestrator, workdir, scheme)
        _tamper(workdir / "share_3.txt")
        result = orchestrator.handle_verify(
            bundle_path=workdir / "bundle_0.txt", share_path=workdir / "share_3.txt"
        )
        assert not result.accepted
        assert result.rejected == [3]
        assert result.scheme == scheme

    def test_bundle_path_must_hold_verification_data(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        with pytest.raises(DocumentError):
            orchestrator.handle_verify(
                bundle_path=workdir / "share_1.txt", share_path=workdir / "share_2.txt"
            )

    def test_share_path_must_hold_a_share(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        with pytest.raises(DocumentError, match="not a share document"):
            orchestrator.handle_verify(
                bundle_path=workdir / "bundle_0.txt", share_path=workdir / "bundle_0.txt"
            )

    def test_hash_commitment_uses_configured_algorithm(self, workdir):
        orchestrator = Orchestrator(Settings(hash_algorithm="sha512"))
        _deal(orchestrator, workdir, "hash")
        document = read_document(workdir / "bundle_0.txt")
        assert isinstance(document, HashDocument)
        assert document.commitments.algorithm == "sha512"


class TestCoherence:
    def _paths(self, workdir):
        return [workdir / f"share_{i}.txt" for i in range(1, 5)]

    def test_detect_honest_shares(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        result = orchestrator.handle_detect(share_paths=self._paths(workdir))
        assert result.command == "detect"
        assert result.field == GF101
        assert result.report.consistent
        assert result.report.majority_secret == GF101.element(42)

    def test_identify_tampered_holder(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        _tamper(workdir / "share_3.txt")
        result = orchestrator.handle_identify(share_paths=self._paths(workdir))
        assert not result.report.consistent
        assert result.report.cheaters == [3]
        assert result.report.majority_secret == GF101.element(42)

    def test_identify_tie(self, orchestrator, workdir):
        field = prime_field(7)
        paths = []
        for index, value in [(1, 5), (2, 1), (3, 2)]:
            document = ShareDocument(field, 2, 3, (Share(index, field.element(value)),))
            paths.append(write_document(workdir / f"share_{index}.txt", document))
        with pytest.raises(NoMajorityError):
            orchestrator.handle_identify(share_paths=paths)

    def test_detect_tie(self, orchestrator, workdir):
        field = prime_field(7)
        paths = []
        for index, value in [(1, 5), (2, 1), (3, 2)]:
            document = ShareDocument(field, 2, 3, (Share(index, field.element(value)),))
            paths.append(write_document(workdir / f"share_{index}.txt", document))
        with pytest.raises(NoMajorityError) as info:
            orchestrator.handle_detect(share_paths=paths)
        assert info.value.exit_code == 5
        assert info.value.context["histogram"] == {2: 1, 3: 1, 6: 1}

    def test_detect_tampered_holder_keeps_majority(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        _tamper(workdir / "share_3.txt")
        result = orchestrator.handle_detect(share_paths=self._paths(workdir))
        assert not result.report.consistent
        assert result.report.majority_secret == GF101.element(42)

    def test_repeated_share_file(self, orchestrator, workdir):
        _deal(orchestrator, workdir, "hash")
        with pytest.raises(DocumentError, match="given twice"):
            orchestrator.handle_detect(share_paths=[workdir / "share_1.txt"] * 3)

    def test_no_share_files(self, orchestrator):
        with pytest.raises(BadParamsError):
            orchestrator.handle_detect(share_paths=[])


def test_rates(orchestrator):
    result = orchestrator.handle_rates(bs_q=16, t=2, n=4, p_bits=64)
    assert len(result.reports) == 3
    assert result.reports[1].verification_bits == 4 * 17


class TestAttackDemo:
    def test_gcd_attack_finds_the_target_share(self, orchestrator):
        result = orchestrator.handle_attack_demo(kind="gcd", bits=8, n=4, t=2, seed=11)
        assert result.kind == "gcd"
        assert result.field == prime_field(263)
        assert 1 <= result.detail["target"] <= 4
        assert result.collusion is not None
        assert result.detail["expected"] in result.collusion.candidates

    def test_gcd_attack_success_rate(self, orchestrator):
        results = [orchestrator.handle_attack_demo(kind="gcd", seed=seed) for seed in range(100)]
        assert sum(result.success for result in results) >= 99
        for result in results:
            if result.success:
                assert result.detail["recovered"] == [result.detail["expected"]]

    def test_ssp_forgery_is_accepted(self, orchestrator):
        result = orchestrator.handle_attack_demo(kind="ssp-forgery", bits=10, seed=5)
        assert result.success
        detail = result.detail
        assert detail["forged"] == (detail["high"] << 5) | detail["low"]

    @pytest.mark.parametrize("options", [{"kind": "rainbow"}, {"kind": "gcd", "bits": 2}])
    def test_bad_options(self, orchestrator, options):
        with pytest.raises(BadParamsError):
            orchestrator.handle_attack_demo(**options)


def test_field_choice_setting_changes_verification_field(workdir):
    orchestrator = Orchestrator(Settings(field_choice=FieldChoice.NEXT_PRIME))
    result = _deal(orchestrator, workdir, "pow")
    assert result.verification_field == GF101
