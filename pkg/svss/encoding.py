"""Bitstring operators and the hex text encoding of big naturals."""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass

from .errors import DocumentError, EmptySetError, EmptyStringError, TargetTooSmallError

_HEX = re.compile(r"[0-9a-fA-F]+")


def bitsize(x: int | Iterable[int]) -> int:
    """bs(x) = 1 + floor(log2 x), with bs(0) = 1; for a set, bs of its largest member."""

    if isinstance(x, int):
        if x < 0:
            raise ValueError("bitsize is defined on naturals only")
        return max(1, x.bit_length())
    values = list(x)
    if not values:
        raise EmptySetError("bitsize of an empty set")
    return bitsize(max(values))


@dataclass(frozen=True, slots=True)
class Bitstring:
    """Bits most-significant first; leading zeros count toward ``length``."""

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0 or self.value < 0 or self.value.bit_length() > self.length:
            raise ValueError(f"{self.value} does not fit in {self.length} bits")

    @classmethod
    def of(cls, value: int, length: int | None = None) -> Bitstring:
        return cls(value, bitsize(value) if length is None else length)

    @classmethod
    def parse(cls, bits: str) -> Bitstring:
        cleaned = bits.strip().removesuffix("₂")
        if cleaned and set(cleaned) - {"0", "1"}:
            raise ValueError(f"Not a bitstring: {bits!r}")
        return cls(int(cleaned, 2) if cleaned else 0, len(cleaned))

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __len__(self) -> int:
        return self.length


def split_halves(s: Bitstring) -> tuple[Bitstring, Bitstring]:
    """(M(s), L(s)): the top ceil(n/2) bits and the bottom floor(n/2) bits."""

    if s.length < 2:
        raise EmptyStringError(
            f"Cannot split a bitstring of length {s.length}; pad it first",
            context={"length": s.length},
        )
    low = s.length // 2
    high = s.length - low
    return Bitstring(s.value >> low, high), Bitstring(s.value & ((1 << low) - 1), low)


def concat(high: Bitstring, low: Bitstring) -> Bitstring:
    return Bitstring((high.value << low.length) | low.value, high.length + low.length)


def zero_pad(s: Bitstring, target_len: int) -> Bitstring:
    if target_len < s.length:
        raise TargetTooSmallError(
            f"Cannot pad {s.length} bits down to {target_len}",
            context={"length": s.length, "target": target_len},
        )
    return Bitstring(s.value, target_len)


def format_hex(value: int, width: int | None = None) -> str:
    """Lowercase big-endian hex without prefix; ``width`` fixes the digit count."""

    if value < 0:
        raise ValueError("Only naturals are hex encoded")
    text = format(value, "x")
    if width is not None:
        text = text.rjust(width, "0")
    return text


def hex_width(bits: int) -> int:
    return max(1, (bits + 3) // 4)


def parse_hex(text: str) -> int:
    cleaned = text.strip()
    if not _HEX.fullmatch(cleaned):
        raise DocumentError(f"Not a hex natural: {text!r}")
    return int(cleaned, 16)
