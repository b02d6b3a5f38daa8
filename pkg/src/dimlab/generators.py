"""Deterministic test-sequence constructions with prescribed dimension targets.

The pseudorandom source is xorshift64* (state update x ^= x>>12,
x ^= x<<25, x ^= x>>27; output the top 32 bits of state * 0x2545F4914F6CDD1D,
MSB first), seeded through one splitmix64 step so that seed 0 is usable.
Dilution embeds source bits at exact rational density alpha into a zero
background: position k carries the next source bit iff
floor((k+1)*alpha) > floor(k*alpha). Oscillation alternates two dilution
rates over macro-blocks of geometrically growing length, starting with the
high rate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from dimlab.errors import UsageError
from dimlab.seqcore import BitSequence

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """Documented 64-bit PRNG; emits the top 32 bits of each output word."""

    def __init__(self, seed: int):
        state = _splitmix64(seed & _MASK64)
        self.state = state if state != 0 else 0x9E3779B97F4A7C15

    def next_word(self) -> int:
        s = self.state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK64
        s ^= s >> 27
        self.state = s
        return ((s * 0x2545F4914F6CDD1D) & _MASK64) >> 32

    def bits(self, n: int) -> list[int]:
        out: list[int] = []
        while len(out) < n:
            w = self.next_word()
            take = min(32, n - len(out))
            out.extend((w >> (31 - i)) & 1 for i in range(take))
        return out


@dataclass(frozen=True)
class GeneratorSpec:
    """Serializable recipe; identical specs generate identical sequences."""

    kind: str  # zeros | prng | dilute | oscillate
    n: int
    alpha: Fraction | None = None
    beta: Fraction | None = None
    seed: int = 0
    schedule: int = 4  # oscillation macro-block growth factor

    def __post_init__(self):
        if self.kind not in ("zeros", "prng", "dilute", "oscillate"):
            raise UsageError(f"unknown generator kind {self.kind!r}")
        if self.n < 0:
            raise UsageError("n must be >= 0")
        if self.kind in ("dilute", "oscillate"):
            if self.alpha is None or not 0 < self.alpha <= 1:
                raise UsageError("alpha must satisfy 0 < alpha <= 1")
        if self.kind == "oscillate":
            if self.beta is None or not self.alpha <= self.beta <= 1:
                raise UsageError("beta must satisfy alpha <= beta <= 1")
            if self.schedule < 2:
                raise UsageError("oscillation growth factor must be >= 2")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "seed": self.seed}
        if self.alpha is not None:
            d["alpha"] = str(self.alpha)
        if self.beta is not None:
            d["beta"] = str(self.beta)
        if self.kind == "oscillate":
            d["schedule"] = self.schedule
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(
            kind=d["kind"],
            n=int(d["n"]),
            alpha=Fraction(d["alpha"]) if "alpha" in d else None,
            beta=Fraction(d["beta"]) if "beta" in d else None,
            seed=int(d.get("seed", 0)),
            schedule=int(d.get("schedule", 4)),
        )


def zeros(n: int) -> BitSequence:
    return BitSequence(bytes(n))


def prng(seed: int, n: int) -> BitSequence:
    return BitSequence(bytes(Xorshift64Star(seed).bits(n)))


def _dilute_bits(source_bits, alpha: Fraction, n: int) -> list[int]:
    num, den = alpha.numerator, alpha.denominator
    out = []
    si = 0
    for k in range(n):
        if ((k + 1) * num) // den > (k * num) // den:
            out.append(source_bits[si])
            si += 1
        else:
            out.append(0)
    return out


def dilute(source, alpha: Fraction, n: int) -> BitSequence:
    """Embed source bits at density alpha; non-source positions emit 0.

    A length-m prefix contains exactly floor(m*alpha) source bits.
    """
    alpha = Fraction(alpha)
    if not 0 < alpha <= 1:
        raise UsageError("alpha must satisfy 0 < alpha <= 1")
    src = _materialize_source(source, n)
    return BitSequence(bytes(_dilute_bits(src, alpha, n)))


def oscillation_boundaries(n: int, growth: int = 4) -> list[tuple[int, str]]:
    """(end position, phase) of each macro-block cut at horizon n.

    Macro-block j >= 1 has length growth**j; odd blocks run the high rate.
    """
    out = []
    pos = 0
    j = 1
    while pos < n:
        pos = min(pos + growth ** j, n)
        out.append((pos, "high" if j % 2 == 1 else "low"))
        j += 1
    return out


def oscillate(source, alpha: Fraction, beta: Fraction, n: int,
              growth: int = 4) -> BitSequence:
    """Alternate dilution rates beta (first) and alpha over macro-blocks.

    The floor rule runs over the global position with the rate of the
    current macro-block, so oscillate(a, a, n) == dilute(a, n) exactly, and
    any horizon inside the first macro-block sees pure dilute(beta).
    """
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    if not 0 < alpha <= 1:
        raise UsageError("alpha must satisfy 0 < alpha <= 1")
    if not alpha <= beta <= 1:
        raise UsageError("beta must satisfy alpha <= beta <= 1")
    src = _materialize_source(source, n)
    out: list[int] = []
    si = 0
    j = 1
    while len(out) < n:
        blen = min(growth ** j, n - len(out))
        rate = beta if j % 2 == 1 else alpha
        num, den = rate.numerator, rate.denominator
        k0 = len(out)
        for k in range(k0, k0 + blen):
            if ((k + 1) * num) // den > (k * num) // den:
                out.append(src[si])
                si += 1
            else:
                out.append(0)
        j += 1
    return BitSequence(bytes(out))


def _materialize_source(source, n: int) -> list[int]:
    """Accept a PrefixOracle, BitSequence, or iterable as the bit source."""
    if hasattr(source, "prefix"):
        return source.prefix(n).tolist()
    return list(source)[:n]


def generate(spec: GeneratorSpec) -> BitSequence:
    """Materialize a spec. Source bits for dilute/oscillate come from prng."""
    if spec.kind == "zeros":
        return zeros(spec.n)
    if spec.kind == "prng":
        return prng(spec.seed, spec.n)
    src = Xorshift64Star(spec.seed).bits(spec.n)
    if spec.kind == "dilute":
        return BitSequence(bytes(_dilute_bits(src, spec.alpha, spec.n)))
    return oscillate(src, spec.alpha, spec.beta, spec.n, spec.schedule)
