"""Oracle-machine simulation with query accounting and combinators.

A machine is a generator function: machine(n) yields effects and is driven
by the runner. Effects:

    Query(pos)   -> the generator receives the oracle bit at pos
    Emit(bit)    -> contributes the next output bit
    Tick()       -> one unit of internal work (budget accounting only)

The runner counts every yield as a step, answers queries from a
PrefixOracle, and builds a ReductionTrace: usage(m) is the rightmost
queried position plus one among queries made before the m-th output bit
was emitted, and per_bit_queries(m) counts the queries between emits m-1
and m. Machines must be deterministic given the oracle answers; everything
observable is in the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from dimlab.complexity.toymachine import find_short_program
from dimlab.dimension import ProfileSample, RatioProfile, default_tail_start
from dimlab.errors import DomainError, HorizonError
from dimlab.seqcore import BitSequence, PrefixOracle


@dataclass(frozen=True)
class Query:
    pos: int


@dataclass(frozen=True)
class Emit:
    bit: int


@dataclass(frozen=True)
class Tick:
    pass


@dataclass(frozen=True)
class OracleMachine:
    """A named step-function machine with a declared reduction class.

    program(n) returns a generator of effects that emits exactly n bits
    (or runs forever, which the step budget converts into a reported
    divergence). declared_class is one of "T", ("wtt", q), ("bT", c), "tt"
    and is never trusted: verify_class checks traces empirically.
    """

    name: str
    program: Callable[[int], Iterator]
    declared_class: object = "T"


@dataclass
class ReductionTrace:
    """usage[m] and per_bit_queries[m] for m = 1..len(output); halted tells
    whether the run produced all requested bits within its budgets."""

    usage: list[int] = field(default_factory=lambda: [0])
    per_bit_queries: list[int] = field(default_factory=lambda: [0])
    halted: bool = True
    failure: str = ""

    def ratio_profile(self, points=None,
                      tail_start: int | None = None) -> RatioProfile:
        n = len(self.usage) - 1
        if n < 1:
            raise DomainError("trace too short for a ratio profile")
        if points is None:
            points = range(1, n + 1)
        samples = [ProfileSample(p, Fraction(self.usage[p], p))
                   for p in sorted(set(points)) if 1 <= p <= n]
        ts = default_tail_start(n) if tail_start is None else tail_start
        ts = min(ts, samples[-1].n)
        return RatioProfile(samples, ts, metadata={"reducers": ["trace"]})


@dataclass
class RunResult:
    output: BitSequence
    trace: ReductionTrace
    steps: int


def run(machine: OracleMachine, oracle: PrefixOracle, n: int,
        step_budget: int | None = None) -> RunResult:
    """Drive machine(n) against the oracle.

    Budget exhaustion models divergence: the result carries the partial
    output with trace.halted False rather than raising.
    """
    gen = machine.program(n)
    usage = [0]
    per_bit = [0]
    out: list[int] = []
    rightmost = 0
    queries_since_emit = 0
    steps = 0
    halted = True
    failure = ""
    send_value = None
    try:
        while len(out) < n:
            if step_budget is not None and steps >= step_budget:
                halted = False
                failure = f"step budget {step_budget} exhausted"
                break
            try:
                effect = gen.send(send_value)
            except StopIteration:
                halted = False
                failure = "machine halted before emitting all bits"
                break
            steps += 1
            send_value = None
            if isinstance(effect, Query):
                bit = oracle.read(effect.pos)
                rightmost = max(rightmost, effect.pos + 1)
                queries_since_emit += 1
                send_value = bit
            elif isinstance(effect, Emit):
                out.append(effect.bit & 1)
                usage.append(rightmost)
                per_bit.append(queries_since_emit)
                queries_since_emit = 0
            elif isinstance(effect, Tick):
                pass
            else:
                raise DomainError(f"unknown machine effect {effect!r}")
    except HorizonError as e:
        halted = False
        failure = f"oracle horizon exceeded: {e}"
    except DomainError as e:
        halted = False
        failure = str(e)
    gen.close()
    trace = ReductionTrace(usage, per_bit, halted, failure)
    return RunResult(BitSequence(out), trace, steps)


# ---------------------------------------------------------------------------
# Built-in machines


def identity_machine() -> OracleMachine:
    def program(n: int):
        for i in range(n):
            bit = yield Query(i)
            yield Emit(bit)
    return OracleMachine("identity", program, ("wtt", lambda n: n))


def position_map_machine(stride: int = 2) -> OracleMachine:
    """Reads oracle position stride*i for output bit i (one query per bit)."""
    def program(n: int):
        for i in range(n):
            bit = yield Query(stride * i)
            yield Emit(bit)
    return OracleMachine(f"stride{stride}", program, ("bT", 1))


def codec_decode_machine() -> OracleMachine:
    """Stage-wise codec decoder as an oracle machine.

    Queries the encoded oracle strictly left to right. Because a block's
    whole record is read before its bits are emitted, the runner's trace
    agrees with the codec's own DecodeTrace accounting exactly.
    """
    return OracleMachine("codec-decode", _codec_program, ("wtt", codec_usage_bound))


def codec_usage_bound(n: int) -> int:
    """Declared computable usage bound for the codec decoder."""
    import math
    if n == 0:
        return 0
    return n + math.ceil(4 * math.sqrt(n) * math.log2(n + 2))


def _codec_program(n: int):
    """Generator implementing codec decode through oracle queries."""
    from dimlab.codec import EncoderState, decode_block_payload
    from dimlab.seqcore import block_containing
    from dimlab.bitio import BitReader
    from dimlab.errors import FormatError

    if n == 0:
        return
    _, last = block_containing(n - 1)
    state = EncoderState()
    pos = 0
    emitted = 0
    for i in range(1, last + 1):
        # read the gamma length field bit by bit
        zeros = 0
        while True:
            b = yield Query(pos)
            pos += 1
            if b == 1:
                break
            zeros += 1
            if zeros > 64:
                raise FormatError("gamma code runaway")
        x = 1
        for _ in range(zeros):
            b = yield Query(pos)
            pos += 1
            x = (x << 1) | b
        plen = x - 1
        mode = yield Query(pos)
        pos += 1
        payload = []
        for _ in range(plen):
            b = yield Query(pos)
            pos += 1
            payload.append(b)
        block = decode_block_payload(mode, BitReader(payload), i, state)
        for b in block:
            if emitted < n:
                yield Emit(b)
                emitted += 1
        if emitted >= n:
            return


# ---------------------------------------------------------------------------
# Composition


_LAZY_TARGET = 1 << 62  # inner machines are driven lazily, never to this end


def compose(m1: OracleMachine, m2: OracleMachine) -> OracleMachine:
    """Machine computing m2 over the output of m1.

    m2's query at position p is answered by driving one lazily-run m1
    instance until it has emitted p+1 output bits, its own queries passing
    through to the real oracle. The composite usage law

        usage(n) = usage_m1(usage'_m2(n))

    then holds exactly, where usage'_m2 counts the m1-output positions m2
    reads, because the rightmost real-oracle query is whatever m1 needed
    for its first usage'_m2(n) output bits. Attribution on failure names
    the layer that died.
    """
    def program(n: int):
        inner_gen = m1.program(_LAZY_TARGET)
        inner_out: list[int] = []

        def drive_until(count: int):
            # generator: forwards m1's queries, collects emits
            send = None
            while len(inner_out) < count:
                try:
                    eff = inner_gen.send(send)
                except StopIteration:
                    raise DomainError(
                        f"inner machine {m1.name} halted at "
                        f"{len(inner_out)} bits, needed {count}")
                send = None
                if isinstance(eff, Emit):
                    inner_out.append(eff.bit & 1)
                elif isinstance(eff, (Query, Tick)):
                    send = yield eff
                    if isinstance(eff, Tick):
                        send = None
                else:
                    raise DomainError(f"unknown effect {eff!r} from {m1.name}")

        gen2 = m2.program(n)
        send2 = None
        while True:
            try:
                eff = gen2.send(send2)
            except StopIteration:
                return
            send2 = None
            if isinstance(eff, (Emit, Tick)):
                yield eff
            elif isinstance(eff, Query):
                p = eff.pos
                if p >= len(inner_out):
                    yield from drive_until(p + 1)
                send2 = inner_out[p]
            else:
                raise DomainError(f"unknown effect {eff!r} from {m2.name}")

    return OracleMachine(f"{m2.name}.{m1.name}", program, "T")


# ---------------------------------------------------------------------------
# Guard combinator


@dataclass
class GuardLogEntry:
    """What happened while computing one guarded output bit."""

    n: int
    winner: str  # "search" or "simulation" or "exhausted"
    m_reached: int  # largest prefix length whose program search completed
    found_m: int | None = None
    found_len: int | None = None


def guard(machine: OracleMachine, alpha_prime: Fraction,
          max_len_cap: int | None = None,
          schedule: tuple[int, int] = (1, 1),
          search_horizon: int | None = None,
          log: list | None = None) -> OracleMachine:
    """Interleave machine simulation with a short-program search.

    For output bit n, the combinator races the simulation of the wrapped
    machine's (n+1)-th emitted bit against a search that, for successive
    prefix lengths m > n, looks for a program of at most alpha_prime * m
    bits reproducing the oracle prefix S[0..m-1]. If a search hit comes
    first the guarded bit is 0; if the simulation finishes first the
    guarded bit is the simulated one. The interleaving runs `schedule` =
    (simulation steps, search steps) per round. Searched program lengths
    are additionally capped at max_len_cap; the search stops growing m at
    search_horizon (or the oracle's horizon), after which the simulation
    side runs alone. Appends one GuardLogEntry per output bit to `log`.
    """
    alpha_prime = Fraction(alpha_prime)
    if not 0 < alpha_prime < 1:
        raise DomainError("alpha_prime must be in (0, 1)")

    def program(n_total: int):
        sim = machine.program(n_total)
        sim_done = False
        sim_buffer: list[int] = []
        send = None
        pending_effect = None
        prefix: list[int] = []  # oracle bits read by the search side

        for n in range(n_total):
            m = n + 1
            searched_to = n
            found = None
            while True:
                # simulation side
                for _ in range(schedule[0]):
                    if sim_done or len(sim_buffer) > n:
                        break
                    try:
                        eff = sim.send(send)
                    except StopIteration:
                        sim_done = True
                        break
                    send = None
                    if isinstance(eff, Emit):
                        sim_buffer.append(eff.bit & 1)
                    elif isinstance(eff, Query):
                        send = yield eff
                    elif isinstance(eff, Tick):
                        yield Tick()
                if len(sim_buffer) > n and found is None:
                    if log is not None:
                        log.append(GuardLogEntry(n, "simulation", searched_to))
                    yield Emit(sim_buffer[n])
                    break
                # search side: one prefix length per round
                horizon = search_horizon
                if horizon is None:
                    horizon = 1 << 62
                exhausted_m = m > horizon
                if not exhausted_m:
                    while len(prefix) < m:
                        b = yield Query(len(prefix))
                        prefix.append(b)
                    max_len = int(alpha_prime * m)
                    if max_len_cap is not None:
                        max_len = min(max_len, max_len_cap)
                    out = find_short_program(prefix[:m], max_len)
                    yield Tick()
                    searched_to = m
                    if out.program is not None:
                        found = (m, len(out.program))
                    m += 1
                if found is not None:
                    if log is not None:
                        log.append(GuardLogEntry(n, "search", searched_to,
                                                 found[0], found[1]))
                    yield Emit(0)
                    break
                if exhausted_m and (sim_done or len(sim_buffer) <= n):
                    # neither side can make progress: explicit non-total report
                    if log is not None:
                        log.append(GuardLogEntry(n, "exhausted", searched_to))
                    raise DomainError(
                        f"guarded machine non-total at bit {n}: simulation "
                        f"{'halted' if sim_done else 'stalled'} and search "
                        f"exhausted m <= {horizon}")

    name = f"guard({machine.name},a'={alpha_prime})"
    return OracleMachine(name, program, "tt")


# ---------------------------------------------------------------------------
# Class verification


@dataclass(frozen=True)
class ClassViolation:
    n: int
    observed: int
    allowed: int


@dataclass
class ClassReport:
    declared: str
    passed: bool
    violations: list[ClassViolation]
    checked_to: int

    def first_violation(self) -> ClassViolation | None:
        return self.violations[0] if self.violations else None


def verify_class(trace: ReductionTrace, declared) -> ClassReport:
    """Empirically check a declared reduction class against a trace.

    declared is ("wtt", q) with q a callable usage bound, ("bT", c) with a
    constant per-bit query count, "tt" or "T" (nothing checkable at finite
    scale beyond halting, which the trace already records).
    """
    n = len(trace.usage) - 1
    violations: list[ClassViolation] = []
    if isinstance(declared, tuple) and declared[0] == "wtt":
        q = declared[1]
        for m in range(1, n + 1):
            allowed = q(m)
            if trace.usage[m] > allowed:
                violations.append(ClassViolation(m, trace.usage[m], allowed))
        label = "wtt"
    elif isinstance(declared, tuple) and declared[0] == "bT":
        c = declared[1]
        for m in range(1, n + 1):
            if trace.per_bit_queries[m] > c:
                violations.append(ClassViolation(m, trace.per_bit_queries[m], c))
        label = f"bT({declared[1]})"
    elif declared in ("tt", "T"):
        label = str(declared)
        if not trace.halted:
            violations.append(ClassViolation(n, 0, 0))
    else:
        raise DomainError(f"unknown declared class {declared!r}")
    return ClassReport(label, not violations, violations, n)


# ---------------------------------------------------------------------------
# Registry


def builtin_machines() -> dict[str, OracleMachine]:
    """Machines selectable by name from the CLI and configs."""
    return {
        "identity": identity_machine(),
        "stride2": position_map_machine(2),
        "codec-decode": codec_decode_machine(),
    }
