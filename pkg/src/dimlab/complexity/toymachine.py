"""A small universal-style machine with four opcodes and exact enumeration.

A program is a self-delimiting bit string decoded against a known target
output length n and an optional conditioning string x:

    00  LITERAL   payload of n raw bits
    01  RUNLENGTH first bit value, then Elias-gamma run lengths that must
                  tile n exactly, alternating values
    10  COPY      gamma(offset+1); output = x[offset : offset+n]
    11  REPEAT    gamma(p), then p raw pattern bits, repeated cyclically

Decoding consumes a determined number of bits; a program is valid only if
it is consumed exactly, which makes the valid-program set for a fixed
(n, x) prefix-free by construction.

Every valid program's operands are forced by the string it outputs (the
run sequence of w is unique, a repeat pattern must be w's own prefix, a
copy must match inside x), so the minimum over all programs is computable
by scanning those forced candidates; `enumerate_valid_programs` provides
the brute-force oracle used to cross-check that claim in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from dimlab.bitio import BitReader, BitWriter, gamma_len
from dimlab.errors import FormatError

OP_LITERAL = 0
OP_RUNLENGTH = 1
OP_COPY = 2
OP_REPEAT = 3

OP_NAMES = {OP_LITERAL: "literal", OP_RUNLENGTH: "run-length",
            OP_COPY: "conditional-copy", OP_REPEAT: "repeat"}

EXACT_C_LIT = 2  # literal-mode header overhead: the opcode bits


@dataclass(frozen=True)
class ToyProgram:
    opcode: int
    bits: tuple  # full encoded program, opcode included

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def name(self) -> str:
        return OP_NAMES[self.opcode]


def decode_program(bits, n: int, x=()) -> list[int]:
    """Run a program; returns the n output bits.

    Raises FormatError on any invalid encoding, including trailing bits.
    """
    r = BitReader(bits)
    out = _decode_from(r, n, x)
    if r.pos != len(bits):
        raise FormatError("trailing bits after program")
    return out


def _decode_from(r: BitReader, n: int, x) -> list[int]:
    opcode = r.read_uint(2)
    if opcode == OP_LITERAL:
        return r.read_bits(n)
    if opcode == OP_RUNLENGTH:
        if n == 0:
            raise FormatError("run-length program cannot output nothing")
        val = r.read_bit()
        out: list[int] = []
        while len(out) < n:
            run = r.read_gamma()
            if len(out) + run > n:
                raise FormatError("run overshoots target length")
            out.extend([val] * run)
            val = 1 - val
        return out
    if opcode == OP_COPY:
        offset = r.read_gamma() - 1
        if offset + n > len(x):
            raise FormatError("copy outside conditioning string")
        return [x[offset + i] for i in range(n)]
    # OP_REPEAT
    p = r.read_gamma()
    if p > n or n == 0:
        raise FormatError("repeat period exceeds target length")
    pattern = r.read_bits(p)
    return [pattern[i % p] for i in range(n)]


def _encode_literal(w) -> ToyProgram:
    out = BitWriter()
    out.write_uint(OP_LITERAL, 2)
    out.write_bits(w)
    return ToyProgram(OP_LITERAL, tuple(out.getvalue()))


def runs_of(w) -> list[int]:
    runs = []
    last = None
    for b in w:
        if b == last:
            runs[-1] += 1
        else:
            runs.append(1)
            last = b
    return runs


def _encode_runlength(w) -> ToyProgram:
    out = BitWriter()
    out.write_uint(OP_RUNLENGTH, 2)
    out.write_bit(w[0])
    for run in runs_of(w):
        out.write_gamma(run)
    return ToyProgram(OP_RUNLENGTH, tuple(out.getvalue()))


def _encode_copy(offset: int) -> ToyProgram:
    out = BitWriter()
    out.write_uint(OP_COPY, 2)
    out.write_gamma(offset + 1)
    return ToyProgram(OP_COPY, tuple(out.getvalue()))


def _encode_repeat(w, p: int) -> ToyProgram:
    out = BitWriter()
    out.write_uint(OP_REPEAT, 2)
    out.write_gamma(p)
    out.write_bits(w[:p])
    return ToyProgram(OP_REPEAT, tuple(out.getvalue()))


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a bounded search: best program found, if any, and whether
    the scan ran to completion (confirmed) or hit its probe budget."""

    program: ToyProgram | None
    confirmed: bool
    probes: int


def shortest_program(w, x=(), budget: int | None = None,
                     cap: int | None = None) -> SearchOutcome:
    """Minimum-length program for w given x; scans the forced candidates.

    budget counts operand probes (copy offsets and repeat periods); when it
    runs out the best program found so far is returned unconfirmed. cap
    prunes candidates longer than cap bits (the minimum below cap is still
    exact; programs above it are not searched).
    """
    w = list(w)
    n = len(w)
    best = _encode_literal(w)
    if n > 0:
        rle = _encode_runlength(w)
        if len(rle) < len(best):
            best = rle
    probes = 0
    confirmed = True

    def bound() -> int:
        return len(best) if cap is None else min(len(best), cap + 1)

    # copy: gamma(offset+1) is non-decreasing in offset, so the first match
    # inside x is the shortest copy program
    if n > 0 and len(x) >= n:
        wb = bytes(w)
        xb = bytes(x)
        offset = xb.find(wb)
        if offset >= 0:
            probes += offset + 1
            if 2 + gamma_len(offset + 1) < bound():
                best = _encode_copy(offset)
        else:
            probes += len(x) - n + 1
        if budget is not None and probes > budget:
            confirmed = False
    # repeat: cost 2 + gamma(p) + p is increasing in p, first valid p wins
    if confirmed:
        for p in range(1, n + 1):
            probes += 1
            if budget is not None and probes > budget:
                confirmed = False
                break
            if 2 + gamma_len(p) + p >= bound():
                break
            if all(w[i] == w[i % p] for i in range(p, n)):
                best = _encode_repeat(w, p)
                break
    return SearchOutcome(best, confirmed, probes)


def exact_complexity(w, x=(), budget: int | None = None,
                     cap: int | None = None) -> SearchOutcome:
    """Exact (or budget-truncated upper bound) program complexity of w.

    cap bounds the enumeration length for non-literal programs; the
    literal program stands as the fallback either way.
    """
    return shortest_program(w, x, budget, cap=cap)


def find_short_program(w, max_len: int, budget: int | None = None,
                       x=()) -> SearchOutcome:
    """A valid program of length <= max_len producing w, if one exists.

    program=None with confirmed=True means the candidate scan ruled every
    program of length <= max_len out; confirmed=False means the probe
    budget ran out first.
    """
    out = shortest_program(w, x, budget, cap=max_len)
    if out.program is not None and len(out.program) <= max_len:
        return out
    return SearchOutcome(None, out.confirmed, out.probes)


def enumerate_valid_programs(max_len: int, n: int, x=()):
    """Brute-force: every bit string of length <= max_len that decodes to
    some n-bit output with nothing left over. Test oracle; exponential."""
    for length in range(1, max_len + 1):
        for v in range(1 << length):
            bits = [(v >> (length - 1 - i)) & 1 for i in range(length)]
            try:
                out = decode_program(bits, n, x)
            except FormatError:
                continue
            yield tuple(bits), tuple(out)
