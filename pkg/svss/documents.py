"""Line-based ``key: value`` documents exchanged between dealer and shareholders.

Every document opens with ``svss-document: <kind>`` and ``format-version: 1``.
Naturals are lowercase big-endian hex; counts and indices are decimal.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from .encoding import format_hex, parse_hex
from .errors import DocumentError, SvssError
from .fields import FieldKind, FieldSpec, binary_field, prime_field
from .numtheory import is_primitive
from .schemes import (
    FeldmanParams,
    HashCommitments,
    SchemeKind,
    VerificationBundle,
)
from .shamir import Share

FORMAT_VERSION = 1
HEADER = "svss-document"


def field_descriptor(field: FieldSpec) -> str:
    return field.descriptor()


def parse_field_descriptor(text: str) -> FieldSpec:
    parts = text.split()
    try:
        if len(parts) == 2 and parts[0] == FieldKind.PRIME.value:
            return prime_field(parse_hex(parts[1]))
        if len(parts) == 3 and parts[0] == FieldKind.BINARY.value:
            return binary_field(int(parts[1]), parse_hex(parts[2]))
    except (SvssError, ValueError) as err:
        raise DocumentError(f"Invalid field descriptor {text!r}: {err}") from err
    raise DocumentError(f"Invalid field descriptor {text!r}")


@dataclass(frozen=True, slots=True)
class ShareDocument:
    field: FieldSpec
    threshold: int
    total: int
    shares: tuple[Share, ...]
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True, slots=True)
class BundleDocument:
    bundle: VerificationBundle
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True, slots=True)
class FeldmanDocument:
    params: FeldmanParams
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True, slots=True)
class HashDocument:
    commitments: HashCommitments
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True, slots=True)
class ParamsDocument:
    field: FieldSpec
    origin: str
    origin_value: int | None = None
    format_version: int = FORMAT_VERSION


Document = ShareDocument | BundleDocument | FeldmanDocument | HashDocument | ParamsDocument

_KINDS: dict[type, str] = {
    ShareDocument: "share",
    BundleDocument: "bundle",
    FeldmanDocument: "feldman",
    HashDocument: "hash",
    ParamsDocument: "params",
}


def _lines(kind: str, version: int, body: list[tuple[str, str]]) -> str:
    rows = [(HEADER, kind), ("format-version", str(version)), *body]
    return "".join(f"{key}: {value}\n" for key, value in rows)


def render_document(document: Document) -> str:
    kind = _KINDS[type(document)]
    body: list[tuple[str, str]] = []
    match document:
        case ShareDocument(field=field, threshold=t, total=n, shares=shares):
            body += [("field", field_descriptor(field)), ("threshold", str(t)), ("total", str(n))]
            body += [("share", f"{s.index} {format_hex(s.value.value)}") for s in shares]
        case BundleDocument(bundle=bundle):
            body += [
                ("scheme", bundle.scheme.value),
                ("verifier-index", str(bundle.verifier_index)),
                ("field", field_descriptor(bundle.field)),
                ("domain-bits", str(bundle.domain_bits)),
                ("domain-bound", format_hex(bundle.domain_bound)),
            ]
            if bundle.base is not None:
                body.append(("base", format_hex(bundle.base.value)))
            body += [("coefficient", format_hex(c)) for c in bundle.coefficients]
        case FeldmanDocument(params=params):
            body += [
                ("p", format_hex(params.p)),
                ("q", format_hex(params.q)),
                ("alpha", format_hex(params.alpha)),
            ]
            body += [("commitment", format_hex(c)) for c in params.commitments]
        case HashDocument(commitments=commitments):
            body += [
                ("algorithm", commitments.algorithm),
                ("value-bytes", str(commitments.value_bytes)),
                ("secret-digest", commitments.secret_digest.hex()),
            ]
            body += [
                ("share-digest", f"{i} {digest.hex()}")
                for i, digest in enumerate(commitments.share_digests, start=1)
            ]
        case ParamsDocument(field=field, origin=origin, origin_value=value):
            body += [("field", field_descriptor(field)), ("origin", origin)]
            if value is not None:
                body.append(("origin-value", format_hex(value)))
    return _lines(kind, document.format_version, body)


class _Fields:
    """Parsed ``key: value`` pairs with single/repeated access."""

    def __init__(self, pairs: list[tuple[str, str]], allowed: set[str]) -> None:
        self._values: dict[str, list[str]] = defaultdict(list)
        for key, value in pairs:
            if key not in allowed:
                raise DocumentError(f"Unexpected key {key!r}")
            self._values[key].append(value)

    def one(self, key: str) -> str:
        values = self._values.get(key, [])
        if len(values) != 1:
            raise DocumentError(f"Expected exactly one {key!r} line, found {len(values)}")
        return values[0]

    def maybe(self, key: str) -> str | None:
        values = self._values.get(key, [])
        if len(values) > 1:
            raise DocumentError(f"Key {key!r} repeated")
        return values[0] if values else None

    def many(self, key: str) -> list[str]:
        return list(self._values.get(key, []))

    def integer(self, key: str) -> int:
        text = self.one(key)
        try:
            return int(text)
        except ValueError as err:
            raise DocumentError(f"{key} is not a decimal natural: {text!r}") from err


def _split(text: str) -> list[tuple[str, str]]:
    pairs = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise DocumentError(f"Line {number} is not 'key: value': {raw!r}")
        pairs.append((key.strip(), value.strip()))
    return pairs


def _indexed(text: str) -> tuple[int, str]:
    parts = text.split()
    if len(parts) != 2:
        raise DocumentError(f"Expected '<index> <hex>', got {text!r}")
    try:
        return int(parts[0]), parts[1]
    except ValueError as err:
        raise DocumentError(f"Bad index in {text!r}") from err


def parse_document(text: str) -> Document:
    pairs = _split(text)
    if len(pairs) < 2 or pairs[0][0] != HEADER or pairs[1][0] != "format-version":
        raise DocumentError("Missing svss-document header")
    kind = pairs[0][1]
    if pairs[1][1] != str(FORMAT_VERSION):
        raise DocumentError(f"Unsupported format version {pairs[1][1]!r}")
    body = pairs[2:]
    try:
        match kind:
            case "share":
                return _parse_share(_Fields(body, {"field", "threshold", "total", "share"}))
            case "bundle":
                allowed = {
                    "scheme",
                    "verifier-index",
                    "field",
                    "domain-bits",
                    "domain-bound",
                    "base",
                    "coefficient",
                }
                return _parse_bundle(_Fields(body, allowed))
            case "feldman":
                return _parse_feldman(_Fields(body, {"p", "q", "alpha", "commitment"}))
            case "hash":
                allowed = {"algorithm", "value-bytes", "secret-digest", "share-digest"}
                return _parse_hash(_Fields(body, allowed))
            case "params":
                return _parse_params(_Fields(body, {"field", "origin", "origin-value"}))
    except DocumentError:
        raise
    except SvssError as err:
        if err.exit_code != 2:
            raise
        raise DocumentError(f"Invalid {kind} document: {err}") from err
    raise DocumentError(f"Unknown document kind {kind!r}")


def _parse_share(fields: _Fields) -> ShareDocument:
    field = parse_field_descriptor(fields.one("field"))
    shares = []
    seen: set[int] = set()
    for line in fields.many("share"):
        index, value = _indexed(line)
        if index in seen:
            raise DocumentError(f"Share index {index} repeated")
        seen.add(index)
        shares.append(Share(index, field.element(parse_hex(value))))
    if not shares:
        raise DocumentError("Share document holds no share")
    return ShareDocument(field, fields.integer("threshold"), fields.integer("total"), tuple(shares))


def _parse_bundle(fields: _Fields) -> BundleDocument:
    try:
        scheme = SchemeKind(fields.one("scheme"))
    except ValueError as err:
        raise DocumentError(f"Unknown scheme {fields.one('scheme')!r}") from err
    field = parse_field_descriptor(fields.one("field"))
    base_text = fields.maybe("base")
    base = field.element(parse_hex(base_text)) if base_text is not None else None
    if scheme in (SchemeKind.EXP, SchemeKind.EXP_SSP) and base is not None and not is_primitive(base):
        raise DocumentError(f"Bundle base {base.value:#x} is not primitive in {field}")
    bundle = VerificationBundle(
        scheme=scheme,
        verifier_index=fields.integer("verifier-index"),
        field=field,
        base=base,
        coefficients=tuple(parse_hex(c) for c in fields.many("coefficient")),
        domain_bits=fields.integer("domain-bits"),
        domain_bound=parse_hex(fields.one("domain-bound")),
    )
    return BundleDocument(bundle)


def _parse_feldman(fields: _Fields) -> FeldmanDocument:
    params = FeldmanParams(
        p=parse_hex(fields.one("p")),
        q=parse_hex(fields.one("q")),
        alpha=parse_hex(fields.one("alpha")),
        commitments=tuple(parse_hex(c) for c in fields.many("commitment")),
    )
    return FeldmanDocument(params)


def _parse_hash(fields: _Fields) -> HashDocument:
    digests: dict[int, bytes] = {}
    for line in fields.many("share-digest"):
        index, value = _indexed(line)
        digests[index] = _bytes(value)
    if sorted(digests) != list(range(1, len(digests) + 1)):
        raise DocumentError("Share digests must be numbered 1..n")
    commitments = HashCommitments(
        algorithm=fields.one("algorithm"),
        value_bytes=fields.integer("value-bytes"),
        secret_digest=_bytes(fields.one("secret-digest")),
        share_digests=tuple(digests[i] for i in sorted(digests)),
    )
    return HashDocument(commitments)


def _bytes(text: str) -> bytes:
    try:
        return bytes.fromhex(text)
    except ValueError as err:
        raise DocumentError(f"Not a hex digest: {text!r}") from err


def _parse_params(fields: _Fields) -> ParamsDocument:
    value = fields.maybe("origin-value")
    return ParamsDocument(
        field=parse_field_descriptor(fields.one("field")),
        origin=fields.one("origin"),
        origin_value=parse_hex(value) if value is not None else None,
    )


def write_document(path: Path, document: Document) -> Path:
    path.write_text(render_document(document), encoding="utf-8")
    return path


def read_document(path: Path) -> Document:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise DocumentError(f"Cannot read {path}: {err}") from err
    return parse_document(text)


SEPARATOR = "---"


def render_documents(documents: Sequence[Document]) -> str:
    return f"{SEPARATOR}\n".join(render_document(document) for document in documents)


def parse_documents(text: str) -> list[Document]:
    chunks: list[list[str]] = [[]]
    for line in text.splitlines():
        if line.strip() == SEPARATOR:
            chunks.append([])
        else:
            chunks[-1].append(line)
    return [parse_document("\n".join(chunk)) for chunk in chunks if any(s.strip() for s in chunk)]
