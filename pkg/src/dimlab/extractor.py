"""Extension search: re-encode a sequence prefix-stably under usage budgets.

The procedure emits an encoded sequence record by record. At each stage it
holds a verified encoded prefix and searches for an extension (one or more
whole records) such that the grown prefix still

    (a) decodes back to the source prefix it covers,
    (b) has usage at its landing boundary N at most d*N,
    (c) keeps usage(m) <= D*m for every m from n0 through N.

Budget rates d and D come from the codec's measured usage-ratio profile on
the source; delta = epsilon/4 fixes their slack exactly as the profile's
tail statistics allow. The structured candidate order is: all record-mode
assignments for extensions of up to `variation_blocks` blocks plus the
canonical (minimum-length) encoding for every depth up to `lookahead`,
sorted by total bit length; an optional exhaustive mode enumerates raw bit
strings length-lexicographically up to `exhaustive_cap` bits for toy-scale
cross-checks. Emitted bits are never revised.
"""

from __future__ import annotations

import copy
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from dimlab.bitio import BitReader
from dimlab.codec import (
    CodeRecord,
    EncoderState,
    RECORD_MODE_CONDITIONAL,
    RECORD_MODE_LITERAL,
    _conditional_payload,
    decode,
    decode_block_payload,
    compression_trace,
)
from dimlab.dimension import (
    dim_hat_H,
    dim_hat_P,
    geometric_grid,
    profile,
    ratio_hats,
)
from dimlab.complexity import ComplexityOracle
from dimlab.errors import DomainError, FormatError, SearchExhausted
from dimlab.seqcore import BitSequence, PrefixOracle, block_containing, triangle

PACKING_FLOOR = Fraction(1, 20)  # measured dim_hat_P must exceed this


@dataclass
class ExtractorParams:
    """Search parameters; see extract() for the derivation recipe."""

    epsilon: Fraction
    delta: Fraction
    d: Fraction
    D: Fraction
    n0: int
    search_budget: int = 100000
    lookahead: int = 8
    variation_blocks: int = 3
    exhaustive_cap: int | None = None

    def __post_init__(self):
        self.epsilon = Fraction(self.epsilon)
        self.delta = Fraction(self.delta)
        self.d = Fraction(self.d)
        self.D = Fraction(self.D)
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        if not 0 < self.delta <= self.epsilon / 4:
            raise DomainError("delta must be in (0, epsilon/4]")
        if self.n0 < 1:
            raise DomainError("n0 must be >= 1")

    def to_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "delta": str(self.delta),
            "d": str(self.d),
            "D": str(self.D),
            "n0": self.n0,
            "search_budget": self.search_budget,
            "lookahead": self.lookahead,
            "variation_blocks": self.variation_blocks,
            "exhaustive_cap": self.exhaustive_cap,
        }


@dataclass(frozen=True)
class ConditionResult:
    ok: bool
    failed: str | None = None  # "a" | "b" | "c"
    position: int | None = None
    landing: int = 0  # largest boundary covered (source bits)
    usage_at_landing: int = 0

    @classmethod
    def fail(cls, which: str, position: int, landing: int = 0,
             usage: int = 0) -> "ConditionResult":
        return cls(False, which, position, landing, usage)


@dataclass
class StageRecord:
    stage: int
    blocks_before: int
    blocks_after: int
    landing: int
    extension_bits: int
    usage_after: int
    candidates_tried: int
    prefix_sha256: str
    checks: dict


@dataclass
class ExtractorState:
    """Grow-only search state; emitted bits are never revised."""

    emitted: list[int] = field(default_factory=list)
    blocks_done: int = 0
    decoded_prefix: list[int] = field(default_factory=list)
    condition_log: list[StageRecord] = field(default_factory=list)
    coder_state: EncoderState = field(default_factory=EncoderState)

    @property
    def covered(self) -> int:
        return triangle(self.blocks_done)

    def prefix_hash(self) -> str:
        return hashlib.sha256(bytes(self.emitted)).hexdigest()


def check_conditions(candidate, S: PrefixOracle,
                     params: ExtractorParams) -> ConditionResult:
    """Full-prefix verification of conditions (a), (b), (c).

    The candidate must parse as a whole number of records; parse failures
    count against condition (a). N is the largest boundary the records
    cover; (b) is checked at N, (c) at every m in [n0, N].
    """
    bits = list(candidate)
    try:
        records = _parse_records(bits)
    except FormatError:
        return ConditionResult.fail("a", 0)
    n_landing = triangle(len(records))
    try:
        decoded, trace = decode(PrefixOracle.from_sequence(BitSequence(bits)),
                                n_landing)
    except (FormatError, DomainError):
        return ConditionResult.fail("a", 0, n_landing)
    try:
        source = S.prefix(n_landing).tolist()
    except DomainError as e:
        raise DomainError(f"source horizon too small for landing {n_landing}: {e}")
    got = decoded.tolist()
    for m in range(n_landing):
        if got[m] != source[m]:
            return ConditionResult.fail("a", m, n_landing)
    usage_n = trace.usage_at(n_landing)
    if usage_n > params.d * n_landing:
        return ConditionResult.fail("b", n_landing, n_landing, usage_n)
    for m in range(params.n0, n_landing + 1):
        if trace.usage_at(m) > params.D * m:
            return ConditionResult.fail("c", m, n_landing, usage_n)
    return ConditionResult(True, landing=n_landing, usage_at_landing=usage_n)


def _parse_records(bits) -> list[tuple[int, int, int]]:
    """Split a bit list into (start, payload_start, end) record extents."""
    reader = BitReader(bits)
    out = []
    while reader.pos < len(bits):
        start = reader.pos
        plen = reader.read_gamma() - 1
        reader.read_bit()  # mode
        payload_start = reader.pos
        if payload_start + plen > len(bits):
            raise FormatError("record extends past candidate end")
        reader.pos = payload_start + plen
        out.append((start, payload_start, reader.pos))
    if not out:
        raise FormatError("empty candidate")
    return out


@dataclass(frozen=True)
class Extension:
    bits: tuple
    blocks: int
    landing: int
    candidates_tried: int
    checks: dict


def _canonical_record(block, work: EncoderState) -> CodeRecord:
    """Canonical (minimum-length, literal on ties) record; advances `work`."""
    cond_payload, _ = _conditional_payload(block, work)
    literal = CodeRecord(RECORD_MODE_LITERAL, tuple(block))
    conditional = CodeRecord(RECORD_MODE_CONDITIONAL, tuple(cond_payload))
    return literal if len(literal) <= len(conditional) else conditional


def _usage_ok_over_extension(state: ExtractorState, rec_lens: list[int],
                             params: ExtractorParams,
                             landing_only_at_end: bool = True) -> tuple[bool, str, int]:
    """Check (c) over the extension's span and (b) at its final landing.

    Usage accounting matches DecodeTrace: all of record i is consumed at
    the first output position of block i.
    """
    usage = len(state.emitted)
    base_blocks = state.blocks_done
    for idx, rlen in enumerate(rec_lens):
        i = base_blocks + idx + 1
        usage += rlen
        # positions inside block i run from triangle(i-1)+1 to triangle(i)
        m_first = max(triangle(i - 1) + 1, params.n0)
        if m_first <= triangle(i) and usage > params.D * m_first:
            return False, "c", m_first
    landing = triangle(base_blocks + len(rec_lens))
    if landing >= params.n0 and usage > params.D * landing:
        return False, "c", landing
    if usage > params.d * landing:
        return False, "b", landing
    return True, "", landing


def next_extension(state: ExtractorState, S: PrefixOracle,
                   params: ExtractorParams,
                   mode: str = "structured") -> Extension:
    """Find the next extension passing the conditions; deterministic order.

    structured: canonical multi-block encodings (depth 1..lookahead) plus
    all record-mode assignments for depths up to variation_blocks, tried in
    increasing total bit length. exhaustive: all bit strings up to
    exhaustive_cap bits, length-lexicographic. Raises SearchExhausted when
    nothing passes within search_budget candidates.
    """
    if mode == "structured":
        return _structured_search(state, S, params)
    if mode == "exhaustive":
        return _exhaustive_search(state, S, params)
    raise DomainError(f"unknown search mode {mode!r}")


def _structured_search(state: ExtractorState, S: PrefixOracle,
                       params: ExtractorParams) -> Extension:
    """Try structured candidates in increasing total bit length, lazily.

    The canonical prefix of depth j+1 is strictly longer than that of
    depth j, so canonical candidates can be generated on demand and merged
    length-first with the (eagerly built, small) mode-variation pool.
    """
    max_depth = params.lookahead
    horizon = S.horizon
    if horizon is not None:
        max_depth = min(max_depth,
                        block_containing(horizon)[0] - state.blocks_done)
    if max_depth < 1:
        raise SearchExhausted(
            "no room to extend: source horizon reached",
            hint="raise the source horizon or lower target_n")
    base = state.blocks_done
    src = S.prefix(triangle(base + max_depth)).tolist()

    def block_of(i: int) -> list[int]:
        return src[triangle(i - 1):triangle(i)]

    work = copy.deepcopy(state.coder_state)
    canonical: list[CodeRecord] = []

    def canonical_to(depth: int) -> None:
        while len(canonical) < depth:
            canonical.append(_canonical_record(block_of(base + len(canonical) + 1),
                                               work))

    # variation pool: every non-canonical record-mode assignment for short
    # extensions; payload bits per block do not depend on the assignment
    var_depth = min(params.variation_blocks, max_depth)
    canonical_to(var_depth)
    variations: list[tuple[int, tuple, list[list[int]]]] = []
    for depth in range(1, var_depth + 1):
        both = []
        for j in range(1, depth + 1):
            block = block_of(base + j)
            cond = (canonical[j - 1] if canonical[j - 1].mode == RECORD_MODE_CONDITIONAL
                    else None)
            if cond is None:
                wstate = copy.deepcopy(state.coder_state)
                for prior in range(1, j):
                    wstate.advance_dict(block_of(base + prior))
                    wstate.advance_model(block_of(base + prior))
                payload, _ = _conditional_payload(block, wstate)
                cond = CodeRecord(RECORD_MODE_CONDITIONAL, tuple(payload))
            both.append({RECORD_MODE_LITERAL: CodeRecord(RECORD_MODE_LITERAL,
                                                          tuple(block)),
                         RECORD_MODE_CONDITIONAL: cond})
        for assignment in product((RECORD_MODE_LITERAL, RECORD_MODE_CONDITIONAL),
                                  repeat=depth):
            if all(m == canonical[j].mode for j, m in enumerate(assignment)):
                continue  # identical to a canonical candidate
            recs = [both[j][m] for j, m in enumerate(assignment)]
            total = sum(len(r) for r in recs)
            variations.append((total, (1,) + assignment,
                               [r.bits() for r in recs]))
    variations.sort(key=lambda t: (t[0], t[1]))

    tried = 0
    vi = 0
    depth = 0

    def try_candidate(rec_bits: list[list[int]], key: tuple) -> Extension | None:
        ok, _, _ = _usage_ok_over_extension(
            state, [len(rb) for rb in rec_bits], params)
        if not ok:
            return None
        ext = [b for rb in rec_bits for b in rb]
        landing = triangle(state.blocks_done + len(rec_bits))
        if not _extension_decodes(state, ext, S, landing):
            return None
        return Extension(tuple(ext), len(rec_bits), landing, tried,
                         {"a": True, "b": True, "c": True,
                          "order_key": list(key)})

    while tried < params.search_budget:
        if depth < max_depth:
            canonical_to(depth + 1)
            next_len = sum(len(r) for r in canonical[:depth + 1])
        else:
            next_len = None
        take_variation = (
            vi < len(variations)
            and (next_len is None or variations[vi][0] < next_len))
        if take_variation:
            total, key, rec_bits = variations[vi]
            vi += 1
            tried += 1
            found = try_candidate(rec_bits, key)
            if found:
                return found
        elif next_len is not None:
            depth += 1
            tried += 1
            found = try_candidate([r.bits() for r in canonical[:depth]],
                                  (0, depth))
            if found:
                return found
        else:
            break
    raise SearchExhausted(
        f"no extension of <= {max_depth} blocks satisfies conditions (b)/(c) "
        f"budgets (d={params.d}, D={params.D}) after {tried} candidates",
        hint=f"increase d by delta/2 (to {params.d + params.delta / 2}) "
             f"or raise the lookahead")


def _extension_decodes(state: ExtractorState, ext_bits, S: PrefixOracle,
                       landing: int) -> bool:
    """Condition (a) for an extension: decodes to the true next blocks."""
    wstate = copy.deepcopy(state.coder_state)
    ext_list = list(ext_bits)
    reader = BitReader(ext_list)
    i = state.blocks_done
    out: list[int] = []
    try:
        while reader.pos < len(ext_list):
            i += 1
            plen = reader.read_gamma() - 1
            mode = reader.read_bit()
            payload_start = reader.pos
            if payload_start + plen > len(ext_list):
                return False
            sub = BitReader(ext_list, start=payload_start,
                            limit=payload_start + plen)
            block = decode_block_payload(mode, sub, i, wstate)
            reader.pos = payload_start + plen
            out.extend(block)
    except (FormatError, DomainError):
        return False
    if triangle(i) != landing:
        return False
    lo = triangle(state.blocks_done)
    truth = S.prefix(landing).tolist()[lo:landing]
    return out == truth


def _exhaustive_search(state: ExtractorState, S: PrefixOracle,
                       params: ExtractorParams) -> Extension:
    cap = params.exhaustive_cap
    if cap is None:
        raise DomainError("exhaustive search needs exhaustive_cap")
    tried = 0
    for length in range(1, cap + 1):
        for v in range(1 << length):
            tried += 1
            if tried > params.search_budget:
                raise SearchExhausted(
                    f"search budget {params.search_budget} exhausted at "
                    f"candidate length {length}",
                    hint="raise search_budget or exhaustive_cap")
            bits = [(v >> (length - 1 - i)) & 1 for i in range(length)]
            ext = _try_exhaustive_candidate(state, bits, S, params)
            if ext is not None:
                return Extension(tuple(bits), ext[0], ext[1], tried, ext[2])
    raise SearchExhausted(
        f"no candidate of <= {cap} bits satisfies conditions (a)/(b)/(c)",
        hint=f"increase d by delta/2 (to {params.d + params.delta / 2})")


def _try_exhaustive_candidate(state: ExtractorState, bits, S: PrefixOracle,
                              params: ExtractorParams):
    # must parse as a whole number of records that decode to the truth
    try:
        extents = _parse_records(list(bits))
    except FormatError:
        return None
    blocks = len(extents)
    landing = triangle(state.blocks_done + blocks)
    if S.horizon is not None and landing > S.horizon:
        return None
    if not _extension_decodes(state, bits, S, landing):
        return None
    rec_lens = [end - start for start, _, end in extents]
    ok, which, pos = _usage_ok_over_extension(state, rec_lens, params)
    if not ok:
        return None
    return blocks, landing, {"a": True, "b": True, "c": True}


def apply_extension(state: ExtractorState, ext: Extension,
                    S: PrefixOracle) -> None:
    """Commit an accepted extension: append bits, advance states, log."""
    lo = state.covered
    state.emitted.extend(ext.bits)
    blocks_before = state.blocks_done
    new_blocks = ext.blocks
    prefix = S.prefix(ext.landing).tolist()
    for j in range(1, new_blocks + 1):
        i = blocks_before + j
        block = prefix[triangle(i - 1):triangle(i)]
        state.coder_state.advance_dict(block)
        state.coder_state.advance_model(block)
        state.decoded_prefix.extend(block)
    state.blocks_done += new_blocks
    state.condition_log.append(StageRecord(
        stage=len(state.condition_log) + 1,
        blocks_before=blocks_before,
        blocks_after=state.blocks_done,
        landing=ext.landing,
        extension_bits=len(ext.bits),
        usage_after=len(state.emitted),
        candidates_tried=ext.candidates_tried,
        prefix_sha256=state.prefix_hash(),
        checks=ext.checks,
    ))


@dataclass
class ExtractReport:
    params: ExtractorParams
    source_ratio_low: Fraction
    source_ratio_high: Fraction
    source_dim_H: Fraction
    source_dim_P: Fraction
    result_dim_H: Fraction
    result_dim_P: Fraction
    target_dim_H: Fraction
    target_dim_P: Fraction
    stages: list[StageRecord]
    post_hoc: ConditionResult
    emitted_bits: int
    covered_source_bits: int

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "source": {
                "ratio_low_hat": str(self.source_ratio_low),
                "ratio_high_hat": str(self.source_ratio_high),
                "dim_hat_H": str(self.source_dim_H),
                "dim_hat_P": str(self.source_dim_P),
            },
            "result": {
                "dim_hat_H": str(self.result_dim_H),
                "dim_hat_P": str(self.result_dim_P),
                "emitted_bits": self.emitted_bits,
                "covered_source_bits": self.covered_source_bits,
            },
            "targets": {
                "dim_hat_H": str(self.target_dim_H),
                "dim_hat_P": str(self.target_dim_P),
            },
            "post_hoc": {
                "ok": self.post_hoc.ok,
                "failed": self.post_hoc.failed,
                "position": self.post_hoc.position,
            },
            "stages": [
                {
                    "stage": s.stage,
                    "blocks_before": s.blocks_before,
                    "blocks_after": s.blocks_after,
                    "landing": s.landing,
                    "extension_bits": s.extension_bits,
                    "usage_after": s.usage_after,
                    "candidates_tried": s.candidates_tried,
                    "prefix_sha256": s.prefix_sha256,
                    "checks": s.checks,
                }
                for s in self.stages
            ],
        }


def derive_params(S: PrefixOracle, epsilon: Fraction, target_n: int,
                  search_budget: int = 100000, lookahead: int = 8,
                  variation_blocks: int = 3,
                  n0: int | None = None) -> tuple[ExtractorParams, Fraction, Fraction]:
    """Measure the codec's usage-ratio profile and fix the budgets.

    delta = epsilon/4, d sits halfway into (ratio_low, ratio_low + delta),
    D sits at ratio_high + 3.5*delta, inside (ratio_high + 3*delta,
    ratio_high + 4*delta). n0 defaults to the ratio profile's tail start.
    """
    epsilon = Fraction(epsilon)
    trace_profile = compression_trace(S, target_n)
    if n0 is not None:
        trace_profile.tail_start = max(n0, trace_profile.samples[0].n)
    rlow, rhigh = ratio_hats(trace_profile)
    delta = epsilon / 4
    params = ExtractorParams(
        epsilon=epsilon,
        delta=delta,
        d=rlow + delta / 2,
        D=rhigh + Fraction(7, 2) * delta,
        n0=trace_profile.tail_start,
        search_budget=search_budget,
        lookahead=lookahead,
        variation_blocks=variation_blocks,
    )
    return params, rlow, rhigh


def extract(S: PrefixOracle, epsilon: Fraction, target_n: int,
            oracle: ComplexityOracle | None = None,
            params: ExtractorParams | None = None,
            profile_points=None) -> tuple[BitSequence, ExtractReport]:
    """Run the full pipeline: derive budgets, search stage by stage until
    the emitted encoding covers target_n source bits, re-verify, profile.

    Precondition: the measured dim_hat_P of the source must clear
    PACKING_FLOOR (the positive-packing-dimension hypothesis at our scale).
    """
    oracle = oracle or ComplexityOracle("proxy")
    epsilon = Fraction(epsilon)
    pts = profile_points
    if pts is None:
        pts = geometric_grid(target_n)
    sprofile = profile(S, pts, oracle)
    s_dim_h = dim_hat_H(sprofile)
    s_dim_p = dim_hat_P(sprofile)
    if s_dim_p <= PACKING_FLOOR:
        raise DomainError(
            f"precondition failed: dim_hat_P(S) = {s_dim_p} is not above "
            f"{PACKING_FLOOR} (positive packing dimension hypothesis)")
    if params is None:
        params, rlow, rhigh = derive_params(S, epsilon, target_n)
    else:
        trace_profile = compression_trace(S, target_n)
        if params.n0 > trace_profile.samples[0].n:
            trace_profile.tail_start = params.n0
        rlow, rhigh = ratio_hats(trace_profile)
    state = ExtractorState()
    while state.covered < target_n:
        ext = next_extension(state, S, params)
        apply_extension(state, ext, S)
    post = check_conditions(state.emitted, S, params)
    r_prime = BitSequence(state.emitted)
    r_oracle = PrefixOracle.from_sequence(r_prime)
    r_pts = geometric_grid(len(r_prime))
    rprofile = profile(r_oracle, r_pts, oracle)
    report = ExtractReport(
        params=params,
        source_ratio_low=rlow,
        source_ratio_high=rhigh,
        source_dim_H=s_dim_h,
        source_dim_P=s_dim_p,
        result_dim_H=dim_hat_H(rprofile),
        result_dim_P=dim_hat_P(rprofile),
        target_dim_H=s_dim_h / s_dim_p - epsilon,
        target_dim_P=1 - epsilon,
        stages=state.condition_log,
        post_hoc=post,
        emitted_bits=len(r_prime),
        covered_source_bits=state.covered,
    )
    return r_prime, report
