"""Integer binary arithmetic coder (32-bit range, 16-bit probabilities).

Probabilities are supplied per bit as P(bit=1), already scaled to
[1, 2^16 - 1]; encoder and decoder must derive them from identical model
state. Decoding reads at most len(stream) bits and zero-pads its internal
register beyond the end, so a stream plus its exact bit length is
sufficient to decode when the caller knows how many symbols to pull.
"""

from __future__ import annotations

PRECISION = 32
_TOP = 1 << PRECISION
_HALF = _TOP >> 1
_QUARTER = _TOP >> 2
_MASK = _TOP - 1

PROB_BITS = 16
PROB_ONE = 1 << PROB_BITS


def scale_probability(p1: float) -> int:
    """Clamp a float P(bit=1) into the coder's integer probability range."""
    v = int(p1 * PROB_ONE)
    if v < 1:
        return 1
    if v > PROB_ONE - 1:
        return PROB_ONE - 1
    return v


class ArithmeticEncoder:
    def __init__(self):
        self.low = 0
        self.high = _MASK
        self.pending = 0
        self.bits: list[int] = []

    def _emit(self, b: int) -> None:
        self.bits.append(b)
        if self.pending:
            self.bits.extend([1 - b] * self.pending)
            self.pending = 0

    def encode(self, bit: int, p1: int) -> None:
        span = self.high - self.low + 1
        split = self.low + ((span * (PROB_ONE - p1)) >> PROB_BITS) - 1
        if bit:
            self.low = split + 1
        else:
            self.high = split
        low, high = self.low, self.high
        while True:
            if high < _HALF:
                self._emit(0)
            elif low >= _HALF:
                self._emit(1)
                low -= _HALF
                high -= _HALF
            elif low >= _QUARTER and high < 3 * _QUARTER:
                self.pending += 1
                low -= _QUARTER
                high -= _QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
        self.low, self.high = low, high

    def finish(self) -> list[int]:
        """Terminate the stream; costs one or two bits plus pending carries."""
        self.pending += 1
        self._emit(0 if self.low < _QUARTER else 1)
        return self.bits


class ArithmeticDecoder:
    def __init__(self, reader):
        """reader: BitReader-like (read_bit/remaining); end is padded with 0s."""
        self._reader = reader
        self.low = 0
        self.high = _MASK
        self.value = 0
        for _ in range(PRECISION):
            self.value = (self.value << 1) | self._next()

    def _next(self) -> int:
        if self._reader.remaining() > 0:
            return self._reader.read_bit()
        return 0

    def decode(self, p1: int) -> int:
        span = self.high - self.low + 1
        split = self.low + ((span * (PROB_ONE - p1)) >> PROB_BITS) - 1
        bit = 1 if self.value > split else 0
        if bit:
            self.low = split + 1
        else:
            self.high = split
        low, high, value = self.low, self.high, self.value
        while True:
            if high < _HALF:
                pass
            elif low >= _HALF:
                low -= _HALF
                high -= _HALF
                value -= _HALF
            elif low >= _QUARTER and high < 3 * _QUARTER:
                low -= _QUARTER
                high -= _QUARTER
                value -= _QUARTER
            else:
                break
            low <<= 1
            high = (high << 1) | 1
            value = (value << 1) | self._next()
        self.low, self.high, self.value = low, high, value
        return bit
