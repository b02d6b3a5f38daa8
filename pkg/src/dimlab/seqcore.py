"""Bit sequences, prefix oracles, the triangular block layout, and .seq files.

Positions are 0-based (S[0] is the leftmost bit); blocks are 1-indexed and
block i has length exactly i, so block i spans positions
[i*(i-1)/2, i*(i+1)/2). The .seq container is `CDS1` magic, an unsigned
64-bit little-endian bit count, then ceil(length/8) payload bytes with bit
order little-endian within each byte (bit 0 of byte 0 is S[0]) and the
final partial byte zero-padded in its high bits.
"""

from __future__ import annotations

import math
import struct
from typing import Callable, Iterable, Iterator

from dimlab.errors import FormatError, HorizonError

SEQ_MAGIC = b"CDS1"


class BitSequence:
    """Immutable sequence of bits, stored one bit per byte for fast slicing."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] = ()):
        if isinstance(bits, BitSequence):
            self._bits = bits._bits
        elif isinstance(bits, bytes):
            if any(b > 1 for b in bits):
                raise ValueError("bits must be 0 or 1")
            self._bits = bits
        else:
            data = bytes(bits)
            if any(b > 1 for b in data):
                raise ValueError("bits must be 0 or 1")
            self._bits = data

    @classmethod
    def from_string(cls, s: str) -> "BitSequence":
        """Parse a string of '0'/'1' characters."""
        return cls(bytes(1 if ch == "1" else 0 for ch in s if ch in "01"))

    def __len__(self) -> int:
        return len(self._bits)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSequence(self._bits[idx])
        return self._bits[idx]

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __eq__(self, other) -> bool:
        if isinstance(other, BitSequence):
            return self._bits == other._bits
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._bits)

    def __add__(self, other: "BitSequence") -> "BitSequence":
        return BitSequence(self._bits + BitSequence(other)._bits)

    def __repr__(self) -> str:
        head = self.to_string() if len(self) <= 32 else self.to_string()[:32] + "..."
        return f"BitSequence({len(self)} bits: {head})"

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def tolist(self) -> list[int]:
        return list(self._bits)

    def raw(self) -> bytes:
        """The underlying one-bit-per-byte buffer (values 0/1)."""
        return self._bits


class PrefixOracle:
    """Read-only access to the bits of a conceptual infinite sequence.

    `provider` must be a pure function of position. The horizon is the
    number of readable positions; reads at or beyond it raise HorizonError
    rather than fabricating bits. horizon=None means unbounded.
    """

    def __init__(self, provider: Callable[[int], int], horizon: int | None):
        self._provider = provider
        self.horizon = horizon

    @classmethod
    def from_sequence(cls, seq: BitSequence) -> "PrefixOracle":
        buf = seq.raw()
        return cls(lambda i: buf[i], len(buf))

    @classmethod
    def constant(cls, bit: int, horizon: int | None = None) -> "PrefixOracle":
        return cls(lambda i: bit, horizon)

    def read(self, position: int) -> int:
        if position < 0:
            raise ValueError(f"negative position {position}")
        if self.horizon is not None and position >= self.horizon:
            raise HorizonError(
                f"read at position {position} beyond horizon {self.horizon}")
        return self._provider(position)

    def prefix(self, n: int) -> BitSequence:
        """The first n bits as a materialized sequence."""
        if self.horizon is not None and n > self.horizon:
            raise HorizonError(f"prefix of {n} bits beyond horizon {self.horizon}")
        return BitSequence(bytes(self._provider(i) & 1 for i in range(n)))


def triangle(k: int) -> int:
    """k-th triangular number: total length of blocks 1..k."""
    return k * (k + 1) // 2


def block_bounds(i: int) -> tuple[int, int]:
    """Half-open position range [start, end) of block i >= 1; end-start == i."""
    if i < 1:
        raise ValueError("blocks are 1-indexed")
    return triangle(i - 1), triangle(i)


def block_containing(m: int) -> tuple[int, int]:
    """For a prefix length m, the last complete block and the current one.

    Returns (k_m, i): k_m is the largest k with triangle(k) <= m, i.e. the
    number of whole blocks inside a length-m prefix, and i = k_m + 1 is the
    block holding position m (triangle(k_m) <= m < triangle(k_m + 1)).
    """
    if m < 0:
        raise ValueError("prefix length must be >= 0")
    k = (math.isqrt(8 * m + 1) - 1) // 2
    while triangle(k + 1) <= m:
        k += 1
    while triangle(k) > m:
        k -= 1
    return k, k + 1


def pack(seq: BitSequence) -> bytes:
    """Serialize to the .seq container format."""
    bits = seq.raw()
    n = len(bits)
    payload = bytearray((n + 7) // 8)
    for pos, b in enumerate(bits):
        if b:
            payload[pos >> 3] |= 1 << (pos & 7)
    return SEQ_MAGIC + struct.pack("<Q", n) + bytes(payload)


def unpack(data: bytes) -> BitSequence:
    """Parse a .seq container; rejects bad magic, truncation, overlong claims."""
    if len(data) < 12:
        raise FormatError("seq file too short for header")
    if data[:4] != SEQ_MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}, want {SEQ_MAGIC!r}")
    (n,) = struct.unpack("<Q", data[4:12])
    need = (n + 7) // 8
    payload = data[12:]
    if len(payload) < need:
        raise FormatError(
            f"declared {n} bits need {need} payload bytes, have {len(payload)}")
    if len(payload) > need:
        raise FormatError(f"{len(payload) - need} trailing bytes after payload")
    out = bytearray(n)
    for pos in range(n):
        out[pos] = (payload[pos >> 3] >> (pos & 7)) & 1
    return BitSequence(bytes(out))


def write_seq(path, seq: BitSequence) -> None:
    from dimlab.report import atomic_write_bytes

    atomic_write_bytes(path, pack(seq))


def read_seq(path) -> BitSequence:
    with open(path, "rb") as fh:
        return unpack(fh.read())
