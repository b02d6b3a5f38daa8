"""Bit-level readers, writers, and self-delimiting integer codes.

Bits are plain ints in {0, 1}. Streams are lists of such ints; the packed
on-disk representation lives in seqcore. Two integer codes are used
throughout:

* Elias gamma for unbounded positive integers: floor(log2 x) zeros, then
  the binary digits of x MSB-first; length 2*floor(log2 x) + 1.
* Minimal binary (phased-in) for a value v in [0, d) with d known to both
  sides: the first 2^ceil(log2 d) - d values get ceil(log2 d) - 1 bits,
  the rest get ceil(log2 d) bits.
"""

from __future__ import annotations

from dimlab.errors import FormatError


def gamma_len(x: int) -> int:
    """Bit length of the Elias gamma code of x >= 1."""
    if x < 1:
        raise ValueError(f"gamma code needs x >= 1, got {x}")
    return 2 * (x.bit_length() - 1) + 1


def minimal_binary_len(v: int, d: int) -> int:
    """Bit length of the minimal binary code of v in [0, d)."""
    if not 0 <= v < d:
        raise ValueError(f"value {v} outside [0, {d})")
    if d == 1:
        return 0
    k = (d - 1).bit_length()
    u = (1 << k) - d
    return k - 1 if v < u else k


class BitWriter:
    """Accumulates bits; exposes the stream as a list of 0/1 ints."""

    def __init__(self):
        self.bits: list[int] = []

    def __len__(self) -> int:
        return len(self.bits)

    def write_bit(self, b: int) -> None:
        self.bits.append(b & 1)

    def write_bits(self, bits) -> None:
        self.bits.extend(b & 1 for b in bits)

    def write_uint(self, v: int, width: int) -> None:
        for i in range(width - 1, -1, -1):
            self.bits.append((v >> i) & 1)

    def write_gamma(self, x: int) -> None:
        if x < 1:
            raise ValueError(f"gamma code needs x >= 1, got {x}")
        n = x.bit_length() - 1
        self.bits.extend([0] * n)
        self.write_uint(x, n + 1)

    def write_minimal_binary(self, v: int, d: int) -> None:
        if not 0 <= v < d:
            raise ValueError(f"value {v} outside [0, {d})")
        if d == 1:
            return
        k = (d - 1).bit_length()
        u = (1 << k) - d
        if v < u:
            self.write_uint(v, k - 1)
        else:
            self.write_uint(v + u, k)

    def getvalue(self) -> list[int]:
        return self.bits


class BitReader:
    """Sequential reader over an indexable bit source.

    `pos` is the number of bits consumed so far, which doubles as exact
    usage accounting for decoders built on top of it. Reading past the end
    raises FormatError.
    """

    def __init__(self, bits, start: int = 0, limit: int | None = None):
        self.bits = bits
        self.pos = start
        self.limit = len(bits) if limit is None else limit

    def remaining(self) -> int:
        return self.limit - self.pos

    def read_bit(self) -> int:
        if self.pos >= self.limit:
            raise FormatError("bit stream exhausted")
        b = self.bits[self.pos]
        self.pos += 1
        return b

    def read_bits(self, n: int) -> list[int]:
        if self.pos + n > self.limit:
            raise FormatError("bit stream exhausted")
        out = list(self.bits[self.pos:self.pos + n])
        self.pos += n
        return out

    def read_uint(self, width: int) -> int:
        v = 0
        for _ in range(width):
            v = (v << 1) | self.read_bit()
        return v

    def read_gamma(self) -> int:
        n = 0
        while self.read_bit() == 0:
            n += 1
            if n > 64:
                raise FormatError("gamma code runaway")
        x = 1
        for _ in range(n):
            x = (x << 1) | self.read_bit()
        return x

    def read_minimal_binary(self, d: int) -> int:
        if d == 1:
            return 0
        k = (d - 1).bit_length()
        u = (1 << k) - d
        v = self.read_uint(k - 1)
        if v >= u:
            v = ((v << 1) | self.read_bit()) - u
        return v
