"""Complexity oracle facade and the proxy's multi-mode description streams.

A plain proxy description of w is a 3-bit mode header plus a body:

    000 LITERAL  w verbatim
    001 FILL     one bit, w must be constant (decoded length comes from
                 the caller, as everywhere in this format)
    010 RUNLENGTH first bit value then gamma run lengths tiling |w|
    011 DICT     dictionary-compressor stream, fresh dictionary
    100 MODEL    arithmetic-coded stream under a fresh mixture model

A conditional description of w given x prepends one flag bit: 0 means a
plain description follows (context ignored), 1 means a 1-bit inner mode
(0 DICT, 1 MODEL) whose coder state was primed by feeding x first. The
take-the-min rule is structural: the emitted stream is the shortest valid
encoding, so cond_complexity(w, x) <= complexity(w) + 1 always, and
complexity(w) <= |w| + 3.

Decoding any of these streams requires the target length |w| (and x for
conditional streams); inside the codec both are always known.
"""

from __future__ import annotations

from dataclasses import dataclass

from dimlab.bitio import BitReader, BitWriter
from dimlab.complexity.arith import (
    ArithmeticDecoder,
    ArithmeticEncoder,
    scale_probability,
)
from dimlab.complexity.dictionary import (
    DictionaryCoder,
    DictionaryDecoder,
    dictionary_cost,
)
from dimlab.complexity.mixture import MixtureModel
from dimlab.complexity.toymachine import (
    EXACT_C_LIT,
    SearchOutcome,
    exact_complexity,
    find_short_program as _toy_find_short_program,
)
from dimlab.errors import FormatError

PROXY_C_LIT = 3  # proxy literal-mode header overhead (mode bits)

MODE_LITERAL = 0
MODE_FILL = 1
MODE_RUNLENGTH = 2
MODE_DICT = 3
MODE_MODEL = 4

MODE_NAMES = {MODE_LITERAL: "literal", MODE_FILL: "fill",
              MODE_RUNLENGTH: "run-length", MODE_DICT: "dictionary",
              MODE_MODEL: "model"}


def model_encode(bits, model: MixtureModel) -> list[int]:
    """Arithmetic-code bits under the model, updating it in place."""
    enc = ArithmeticEncoder()
    for b in bits:
        p1 = scale_probability(model.predict())
        enc.encode(b, p1)
        model.update(b)
    return enc.finish()


def model_decode(reader, n: int, model: MixtureModel) -> list[int]:
    """Decode n bits, updating the model in place (mirror of model_encode)."""
    dec = ArithmeticDecoder(reader)
    out = []
    for _ in range(n):
        p1 = scale_probability(model.predict())
        b = dec.decode(p1)
        model.update(b)
        out.append(b)
    return out


def model_cost(bits, primer=None) -> int:
    model = MixtureModel()
    if primer is not None:
        for b in primer:
            model.update(b)
    return len(model_encode(bits, model))


def _runlength_body(w) -> list[int] | None:
    if len(w) == 0:
        return None
    out = BitWriter()
    out.write_bit(w[0])
    run = 1
    for i in range(1, len(w)):
        if w[i] == w[i - 1]:
            run += 1
        else:
            out.write_gamma(run)
            run = 1
    out.write_gamma(run)
    return out.getvalue()


def _decode_runlength_body(reader, n: int) -> list[int]:
    val = reader.read_bit()
    out: list[int] = []
    while len(out) < n:
        run = reader.read_gamma()
        if len(out) + run > n:
            raise FormatError("run overshoots target length")
        out.extend([val] * run)
        val = 1 - val
    return out


def describe(w) -> list[int]:
    """Shortest plain proxy description stream of w (3-bit header + body)."""
    w = list(w)
    candidates: list[tuple[int, int, list[int]]] = [(len(w), MODE_LITERAL, w)]
    if len(w) > 0 and all(b == w[0] for b in w):
        candidates.append((1, MODE_FILL, [w[0]]))
    rle = _runlength_body(w)
    if rle is not None:
        candidates.append((len(rle), MODE_RUNLENGTH, rle))
    if len(w) > 0:
        dcoder = DictionaryCoder()
        dout = BitWriter()
        dcoder.feed(w, dout)
        dcoder.flush(dout)
        candidates.append((len(dout), MODE_DICT, dout.getvalue()))
        mstream = model_encode(w, MixtureModel())
        candidates.append((len(mstream), MODE_MODEL, mstream))
    _, mode, body = min(candidates, key=lambda t: (t[0], t[1]))
    out = BitWriter()
    out.write_uint(mode, 3)
    out.write_bits(body)
    return out.getvalue()


def decode_stream(reader, n: int) -> list[int]:
    """Decode a plain proxy description of known output length n."""
    mode = reader.read_uint(3)
    if mode == MODE_LITERAL:
        return reader.read_bits(n)
    if mode == MODE_FILL:
        return [reader.read_bit()] * n
    if mode == MODE_RUNLENGTH:
        return _decode_runlength_body(reader, n)
    if mode == MODE_DICT:
        return DictionaryDecoder().decode_exact(reader, n)
    if mode == MODE_MODEL:
        return model_decode(reader, n, MixtureModel())
    raise FormatError(f"unknown proxy mode {mode}")


def cond_describe(w, x) -> list[int]:
    """Shortest conditional proxy description of w given x."""
    w = list(w)
    x = list(x)
    plain = describe(w)
    best_len = 1 + len(plain)
    best = [0] + plain
    if len(w) > 0 and len(x) > 0:
        dlen = dictionary_cost(w, primer=x)
        if 2 + dlen < best_len:
            dcoder = DictionaryCoder()
            dcoder.feed(x, None)
            dcoder.flush(None)
            dout = BitWriter()
            dcoder.feed(w, dout)
            dcoder.flush(dout)
            best_len = 2 + dlen
            best = [1, 0] + dout.getvalue()
        model = MixtureModel()
        for b in x:
            model.update(b)
        mstream = model_encode(w, model)
        if 2 + len(mstream) < best_len:
            best_len = 2 + len(mstream)
            best = [1, 1] + mstream
    return best


def cond_decode_stream(reader, n: int, x) -> list[int]:
    """Decode a conditional proxy description of known output length n."""
    flag = reader.read_bit()
    if flag == 0:
        return decode_stream(reader, n)
    inner = reader.read_bit()
    if inner == 0:
        coder = DictionaryCoder()
        coder.feed(x, None)
        coder.flush(None)
        return DictionaryDecoder(coder).decode_exact(reader, n)
    model = MixtureModel()
    for b in x:
        model.update(b)
    return model_decode(reader, n, model)


@dataclass(frozen=True)
class ComplexityResult:
    bits: int
    confirmed: bool
    detail: str


class ComplexityOracle:
    """Uniform interface over the exact machine and the compressor proxy.

    kind: "exact" or "proxy". Exact mode takes budget (operand probes) and
    max_program_len caps; proxy mode ignores them (single deterministic
    pass). Estimates are non-negative integers of bits; identical inputs
    always produce identical estimates.
    """

    def __init__(self, kind: str = "proxy", budget: int | None = None,
                 max_program_len: int | None = None):
        if kind not in ("exact", "proxy"):
            raise ValueError(f"unknown oracle kind {kind!r}")
        self.kind = kind
        self.budget = budget
        self.max_program_len = max_program_len

    def __repr__(self) -> str:
        return f"ComplexityOracle(kind={self.kind!r})"

    def complexity_info(self, w) -> ComplexityResult:
        if self.kind == "exact":
            out = exact_complexity(list(w), budget=self.budget,
                                   cap=self.max_program_len)
            return ComplexityResult(len(out.program), out.confirmed,
                                    out.program.name)
        stream = describe(w)
        return ComplexityResult(len(stream), True,
                                MODE_NAMES[_peek_mode(stream)])

    def complexity(self, w) -> int:
        return self.complexity_info(w).bits

    def cond_complexity_info(self, w, x) -> ComplexityResult:
        if self.kind == "exact":
            out = exact_complexity(list(w), list(x), budget=self.budget,
                                   cap=self.max_program_len)
            return ComplexityResult(len(out.program), out.confirmed,
                                    out.program.name)
        stream = cond_describe(w, x)
        return ComplexityResult(len(stream), True, "conditional")

    def cond_complexity(self, w, x) -> int:
        return self.cond_complexity_info(w, x).bits

    def find_short_program(self, w, max_len: int,
                           budget: int | None = None) -> SearchOutcome:
        """Exact-machine program search (both kinds delegate to the machine)."""
        return _toy_find_short_program(list(w), max_len,
                                       budget if budget is not None else self.budget)

    @property
    def c_lit(self) -> int:
        return EXACT_C_LIT if self.kind == "exact" else PROXY_C_LIT


def _peek_mode(stream) -> int:
    return BitReader(stream).read_uint(3)
