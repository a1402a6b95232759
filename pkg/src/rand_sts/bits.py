"""Immutable bit sequences, file ingestion and elementary transforms."""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from .errors import DomainError, LengthError, ParseError

__all__ = ["BitSequence", "from_ascii", "from_bytes", "to_signed", "prefix"]

MAX_BITS = 2**31

_WHITESPACE = b" \t\r\n\f\v"


class BitSequence:
    """An immutable, ordered sequence of bits.

    Bits are held one per byte in a read-only ``uint8`` array: every test
    kernel is a vectorized numpy pass, so unpacked storage is what they want.
    ``to_bytes`` gives the packed MSB-first form.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[Iterable[int], np.ndarray, "BitSequence"]):
        if isinstance(bits, BitSequence):
            self._bits = bits._bits
            return
        if isinstance(bits, str):
            raise TypeError("use from_ascii() for text input")
        arr = np.asarray(bits if isinstance(bits, np.ndarray) else list(bits))
        if arr.ndim != 1:
            raise DomainError("bit sequence must be one-dimensional")
        if arr.size == 0:
            raise DomainError("bit sequence must hold at least one bit")
        if arr.size > MAX_BITS:
            raise LengthError(f"{arr.size} bits exceeds the {MAX_BITS}-bit limit")
        if np.any((arr != 0) & (arr != 1)):
            raise DomainError("bits must be 0 or 1")
        out = arr.astype(np.uint8, copy=True)
        out.flags.writeable = False
        self._bits = out

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BitSequence":
        # trusted fast path: arr already validated 0/1 uint8
        obj = cls.__new__(cls)
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        obj._bits = arr
        return obj

    @property
    def bits(self) -> np.ndarray:
        """Read-only ``uint8`` view of the bits."""
        return self._bits

    @property
    def n(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return int(self._bits.size)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BitSequence._wrap(self._bits[i])
        return int(self._bits[i])

    def __iter__(self):
        return iter(self._bits.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __repr__(self) -> str:
        head = "".join(map(str, self._bits[:32].tolist()))
        tail = "..." if self.n > 32 else ""
        return f"BitSequence(n={self.n}, bits={head}{tail})"

    def __str__(self) -> str:
        return "".join("01"[b] for b in self._bits.tolist())

    def ones(self) -> int:
        return int(np.count_nonzero(self._bits))

    def complement(self) -> "BitSequence":
        return BitSequence._wrap(1 - self._bits)

    def reversed(self) -> "BitSequence":
        return BitSequence._wrap(self._bits[::-1].copy())

    def to_bytes(self) -> bytes:
        """Pack MSB-first; the final byte is padded with zero bits."""
        return np.packbits(self._bits).tobytes()


def from_ascii(text: str) -> BitSequence:
    """Parse '0'/'1' characters, skipping whitespace."""
    if not text.isascii():
        pos = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError(f"unexpected character {text[pos]!r}", pos)
    raw = np.frombuffer(text.encode("ascii"), dtype=np.uint8)
    digit = (raw == ord("0")) | (raw == ord("1"))
    blank = np.isin(raw, np.frombuffer(_WHITESPACE, dtype=np.uint8))
    bad = np.flatnonzero(~(digit | blank))
    if bad.size:
        pos = int(bad[0])
        raise ParseError(f"unexpected character {text[pos]!r}", pos)
    if not digit.any():
        raise DomainError("no bits in input")
    return BitSequence._wrap(raw[digit] - ord("0"))


def from_bytes(data: bytes, n: int | None = None) -> BitSequence:
    """Unpack ``data`` MSB-first and keep the first ``n`` bits (all by default)."""
    available = 8 * len(data)
    if n is None:
        n = available
    if n > available:
        raise LengthError(f"asked for {n} bits but only {available} available")
    if n < 1:
        raise DomainError("bit count must be >= 1")
    arr = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))[:n]
    return BitSequence._wrap(arr)


def to_signed(seq: BitSequence) -> np.ndarray:
    """Map bits to the +/-1 walk steps 2*b - 1 (int8, read-only)."""
    out = seq.bits.astype(np.int8) * 2 - 1
    out.flags.writeable = False
    return out


def prefix(seq: BitSequence, k: int) -> BitSequence:
    if k > seq.n:
        raise LengthError(f"prefix of {k} bits requested from a {seq.n}-bit sequence")
    if k < 1:
        raise DomainError("prefix length must be >= 1")
    if k == seq.n:
        return seq
    return BitSequence._wrap(seq.bits[:k])
