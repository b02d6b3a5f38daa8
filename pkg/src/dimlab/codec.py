"""Block codec with stage-wise decoding and exact query-usage accounting.

The source sequence is split into blocks, block i having length i. Each
block becomes one self-delimiting record:

    gamma(payload_len + 1) | mode bit | payload

Mode 0 (literal): the payload is the block verbatim. Mode 1 (conditional):
the payload is the complexity proxy's conditional description of the block
given everything decoded so far. Records are decodable in sequence, each
stage using only its own record plus the already-decoded prefix; the
dictionary and mixture-model coder states are a deterministic function of
that prefix (they advance over every block, whatever mode encoded it, with
a flush at each block boundary).

The decoder reads its input strictly left to right through a counting
reader, so the trace's usage at any output length is the exact number of
input bits consumed, and usage at a block boundary equals the total length
of the records read so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from dimlab.bitio import BitReader, BitWriter, gamma_len
from dimlab.complexity import ComplexityOracle
from dimlab.complexity.dictionary import DictionaryCoder, DictionaryDecoder
from dimlab.complexity.mixture import MixtureModel
from dimlab.complexity.oracle import (
    MODE_FILL,
    MODE_LITERAL,
    MODE_RUNLENGTH,
    _decode_runlength_body,
    _runlength_body,
    model_decode,
    model_encode,
)
from dimlab.dimension import RatioProfile, ProfileSample, default_tail_start
from dimlab.errors import DomainError, FormatError
from dimlab.seqcore import BitSequence, PrefixOracle, block_containing, triangle

RECORD_MODE_LITERAL = 0
RECORD_MODE_CONDITIONAL = 1

C_HDR = 2  # record overhead beyond the gamma length field: mode bit + slack


@dataclass(frozen=True)
class CodeRecord:
    """One encoded block: self-delimiting, length recoverable from itself."""

    mode: int  # RECORD_MODE_*
    payload: tuple

    def __len__(self) -> int:
        return gamma_len(len(self.payload) + 1) + 1 + len(self.payload)

    def bits(self) -> list[int]:
        out = BitWriter()
        out.write_gamma(len(self.payload) + 1)
        out.write_bit(self.mode)
        out.write_bits(self.payload)
        return out.getvalue()


class EncoderState:
    """Streaming coder states shared by encoder and decoder.

    After processing block i the dictionary equals a flush-parse of
    blocks 1..i and the model has been updated on every bit of them, no
    matter which record modes were chosen.
    """

    def __init__(self):
        self.dict_coder = DictionaryCoder()
        self.dict_decoder = DictionaryDecoder(self.dict_coder)
        self.model = MixtureModel()

    def advance_dict(self, block_bits) -> None:
        self.dict_coder.feed(block_bits, None)
        self.dict_coder.flush(None)

    def advance_model(self, block_bits) -> None:
        for b in block_bits:
            self.model.update(b)


def _conditional_payload(block_bits, state: EncoderState) -> tuple[list[int], str]:
    """Conditional description of a block against the streaming states.

    Stream layout is the proxy's conditional format restricted to the modes
    a record can use: flag bit 0 plus a plain 3-bit-mode body (literal,
    fill, or run-length; fresh-state dictionary/model bodies never beat the
    primed ones here), or flag 1 plus a 1-bit inner mode (0 dictionary,
    1 model) whose state is the streaming one. Chooses the shortest;
    advances both streaming states over the block.
    """
    n = len(block_bits)
    candidates: list[tuple[int, list[int], str]] = []
    # plain bodies under flag 0
    plain = [(n, MODE_LITERAL, list(block_bits))]
    if n > 0 and all(b == block_bits[0] for b in block_bits):
        plain.append((1, MODE_FILL, [block_bits[0]]))
    rle = _runlength_body(block_bits)
    if rle is not None:
        plain.append((len(rle), MODE_RUNLENGTH, rle))
    for blen, mode, body in plain:
        out = BitWriter()
        out.write_bit(0)
        out.write_uint(mode, 3)
        out.write_bits(body)
        candidates.append((len(out), out.getvalue(), f"plain-{mode}"))
    # primed dictionary under flag 1 (this advances the dictionary)
    dout = BitWriter()
    emitted = state.dict_coder.feed(block_bits, dout)
    emitted += state.dict_coder.flush(dout)
    dstream = [1, 0] + dout.getvalue()
    candidates.append((len(dstream), dstream, "dict"))
    # primed model under flag 1 (this advances the model)
    mstream = model_encode(block_bits, state.model)
    mbits = [1, 1] + mstream
    candidates.append((len(mbits), mbits, "model"))
    best = min(candidates, key=lambda t: t[0])
    return best[1], best[2]


def encode_block(block_bits, state: EncoderState,
                 oracle: ComplexityOracle | None = None) -> CodeRecord:
    """Encode one block against the streaming context states.

    Advances the states over the block as a side effect. The record mode is
    chosen to minimize record length, literal winning ties. The oracle
    argument selects nothing yet (the proxy family is fixed); exact-mode
    oracles are not usable as codec payload coders.
    """
    if oracle is not None and oracle.kind != "proxy":
        raise DomainError("codec payloads require the proxy oracle")
    block_bits = list(block_bits)
    cond_payload, _ = _conditional_payload(block_bits, state)
    literal = CodeRecord(RECORD_MODE_LITERAL, tuple(block_bits))
    conditional = CodeRecord(RECORD_MODE_CONDITIONAL, tuple(cond_payload))
    return literal if len(literal) <= len(conditional) else conditional


def decode_block_payload(mode: int, payload_reader: BitReader, n: int,
                         state: EncoderState) -> list[int]:
    """Decode one record's payload to its n-bit block, advancing states.

    Used by the streaming decoder; also callable standalone with a state
    rebuilt from an externally supplied context (locality contract).
    """
    if mode == RECORD_MODE_LITERAL:
        block = payload_reader.read_bits(n)
        state.advance_dict(block)
        state.advance_model(block)
        return block
    flag = payload_reader.read_bit()
    if flag == 0:
        inner = payload_reader.read_uint(3)
        if inner == MODE_LITERAL:
            block = payload_reader.read_bits(n)
        elif inner == MODE_FILL:
            block = [payload_reader.read_bit()] * n
        elif inner == MODE_RUNLENGTH:
            block = _decode_runlength_body(payload_reader, n)
        else:
            raise FormatError(f"conditional payload with plain mode {inner}")
        state.advance_dict(block)
        state.advance_model(block)
        return block
    inner = payload_reader.read_bit()
    if inner == 0:
        block = state.dict_decoder.decode_exact(payload_reader, n)
        state.advance_model(block)
        return block
    block = model_decode(payload_reader, n, state.model)
    state.advance_dict(block)
    return block


def state_from_context(context_bits) -> EncoderState:
    """Rebuild the streaming states from a decoded prefix of block-aligned
    length (the deterministic function of context the decode contract names)."""
    k, _ = block_containing(len(context_bits))
    if triangle(k) != len(context_bits):
        raise DomainError(
            f"context length {len(context_bits)} is not a block boundary")
    state = EncoderState()
    for i in range(1, k + 1):
        lo, hi = triangle(i - 1), triangle(i)
        block = list(context_bits[lo:hi])
        state.advance_dict(block)
        state.advance_model(block)
    return state


def encode_prefix(seq: PrefixOracle, n: int,
                  oracle: ComplexityOracle | None = None) -> tuple[BitSequence, list[CodeRecord]]:
    """Encode whole blocks covering at least n source bits.

    When the covering block would poke past the oracle's horizon, encoding
    stops at the last whole block inside it instead. Returns the
    concatenated record stream and the records themselves.
    """
    k, i = block_containing(n)
    blocks = k if triangle(k) >= n else i
    if seq.horizon is not None and triangle(blocks) > seq.horizon:
        blocks = block_containing(seq.horizon)[0]
        if blocks < 1:
            raise DomainError("oracle horizon too small for a single block")
    prefix = seq.prefix(triangle(blocks)).tolist()
    state = EncoderState()
    records = []
    out: list[int] = []
    for b in range(1, blocks + 1):
        lo, hi = triangle(b - 1), triangle(b)
        rec = encode_block(prefix[lo:hi], state, oracle)
        records.append(rec)
        out.extend(rec.bits())
    return BitSequence(out), records


@dataclass
class DecodeTrace:
    """Exact usage accounting for one decode run.

    usage[m] (1-based output position m, index m in the list with a leading
    0) is the rightmost input bit index consumed plus one while producing
    the first m output bits; at block boundary k it equals the summed
    length of records 1..k. per_block holds each record's bit length.
    """

    usage: list[int]
    per_block: list[int]

    def usage_at(self, m: int) -> int:
        return self.usage[m]

    def boundary_usage(self, k: int) -> int:
        return sum(self.per_block[:k])

    def ratio_profile(self, tail_start: int | None = None,
                      points=None) -> RatioProfile:
        """usage/n sampled at block boundaries (or given points)."""
        n = len(self.usage) - 1
        if points is None:
            points = []
            k = 1
            while triangle(k) <= n:
                points.append(triangle(k))
                k += 1
        samples = [ProfileSample(p, Fraction(self.usage[p], p))
                   for p in sorted(set(points)) if 1 <= p <= n]
        ts = default_tail_start(n) if tail_start is None else tail_start
        ts = min(ts, samples[-1].n)
        return RatioProfile(samples, ts, metadata={"reducers": ["codec-decode"]})


def decode(encoded: PrefixOracle, n: int) -> tuple[BitSequence, DecodeTrace]:
    """Stage-wise decode of the first n source bits with exact usage.

    Reads the record stream strictly left to right; block i+1 is recovered
    from record i+1 plus the already-decoded prefix only.
    """
    _, last_block = block_containing(n - 1) if n > 0 else (0, 0)
    blocks = last_block if n > 0 else 0
    reader = _OracleBitReader(encoded)
    state = EncoderState()
    out: list[int] = []
    usage = [0]
    per_block: list[int] = []
    for i in range(1, blocks + 1):
        record_start = reader.pos
        try:
            plen = reader.read_gamma() - 1
            mode = reader.read_bit()
            payload_start = reader.pos
            payload_end = payload_start + plen
            payload_reader = _ClampedReader(reader, payload_end)
            block = decode_block_payload(mode, payload_reader, i, state)
            if payload_reader.pos > payload_end:
                raise FormatError("payload overrun")
            reader.pos = payload_end
            reader.touch(payload_end)
        except FormatError as e:
            raise FormatError(f"record {i}: {e}") from e
        per_block.append(reader.pos - record_start)
        # all of this record is consumed by the time its block is out
        for _ in block:
            usage.append(reader.pos)
        out.extend(block)
    return BitSequence(out[:n]), DecodeTrace(usage[:n + 1], per_block)


class _OracleBitReader:
    """BitReader over a PrefixOracle, counting the rightmost position read."""

    def __init__(self, oracle: PrefixOracle):
        self.oracle = oracle
        self.pos = 0
        self.limit = oracle.horizon if oracle.horizon is not None else float("inf")

    def remaining(self):
        return self.limit - self.pos

    def touch(self, pos: int) -> None:
        """Mark bits up to pos as consumed (skipping unread payload tail)."""
        if pos > self.limit:
            raise FormatError("record extends past the oracle horizon")

    def read_bit(self) -> int:
        if self.pos >= self.limit:
            raise FormatError("record stream exhausted")
        b = self.oracle.read(self.pos)
        self.pos += 1
        return b

    def read_bits(self, n: int) -> list[int]:
        return [self.read_bit() for _ in range(n)]

    def read_uint(self, width: int) -> int:
        v = 0
        for _ in range(width):
            v = (v << 1) | self.read_bit()
        return v

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
            if zeros > 64:
                raise FormatError("gamma code runaway")
        x = 1
        for _ in range(zeros):
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


class _ClampedReader:
    """Bounds payload reads to the record's declared extent."""

    def __init__(self, base, limit: int):
        self.base = base
        self.limit = limit

    @property
    def pos(self):
        return self.base.pos

    def remaining(self):
        return self.limit - self.base.pos

    def read_bit(self) -> int:
        if self.base.pos >= self.limit:
            raise FormatError("payload exhausted")
        return self.base.read_bit()

    def read_bits(self, n: int) -> list[int]:
        return [self.read_bit() for _ in range(n)]

    def read_uint(self, width: int) -> int:
        v = 0
        for _ in range(width):
            v = (v << 1) | self.read_bit()
        return v

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
            if zeros > 64:
                raise FormatError("gamma code runaway")
        x = 1
        for _ in range(zeros):
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


def compression_trace(seq: PrefixOracle, n: int,
                      oracle: ComplexityOracle | None = None,
                      tail_start: int | None = None) -> RatioProfile:
    """Encode through the block covering n (clamped to the horizon),
    decode, and profile usage over output length at block boundaries."""
    encoded, records = encode_prefix(seq, n, oracle)
    horizon = triangle(len(records))
    decoded, trace = decode(PrefixOracle.from_sequence(encoded), horizon)
    if decoded != seq.prefix(horizon):
        raise DomainError("round-trip mismatch in compression trace")
    return trace.ratio_profile(tail_start)
