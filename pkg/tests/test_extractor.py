from fractions import Fraction

import pytest

from dimlab.codec import encode_prefix
from dimlab.errors import DomainError, SearchExhausted
from dimlab.extractor import (
    ExtractorParams,
    ExtractorState,
    apply_extension,
    check_conditions,
    derive_params,
    extract,
    next_extension,
)
from dimlab.generators import Xorshift64Star, dilute, prng, zeros
from dimlab.seqcore import PrefixOracle, triangle


def toy_params(**kw):
    base = dict(epsilon=Fraction(2), delta=Fraction(1, 2), d=Fraction(4),
                D=Fraction(8), n0=1, lookahead=3, variation_blocks=3,
                exhaustive_cap=18, search_budget=10**6)
    base.update(kw)
    return ExtractorParams(**base)


def run_structured(S, params, target):
    st = ExtractorState()
    while st.covered < target:
        ext = next_extension(st, S, params)
        apply_extension(st, ext, S)
    return st


def test_params_validation():
    with pytest.raises(DomainError):
        ExtractorParams(epsilon=Fraction(1), delta=Fraction(1, 2),
                        d=Fraction(1), D=Fraction(1), n0=1)
    with pytest.raises(DomainError):
        ExtractorParams(epsilon=Fraction(-1), delta=Fraction(1, 8),
                        d=Fraction(1), D=Fraction(1), n0=1)


def test_check_conditions_genuine_codec_output_zeros():
    # measured budgets for this repo's record format: usage for a zeros
    # sequence is ~10 bits per block, far under d*n at n0-scale boundaries
    n = 8192
    S = PrefixOracle.from_sequence(zeros(16384))
    encoded, records = encode_prefix(S, n)
    params = ExtractorParams(epsilon=Fraction(2), delta=Fraction(1, 2),
                             d=Fraction(1, 5), D=Fraction(1, 2), n0=8192)
    res = check_conditions(encoded.tolist(), S, params)
    assert res.ok, (res.failed, res.position)


def test_check_conditions_flipped_payload_bit_fails_a():
    n = triangle(12)
    S = PrefixOracle.from_sequence(prng(5, n))
    encoded, records = encode_prefix(S, n)
    bits = encoded.tolist()
    # flip a payload bit inside the third record
    offset = len(records[0]) + len(records[1])
    hdr = len(records[2]) - len(records[2].payload)
    bits[offset + hdr + 1] ^= 1
    params = toy_params(d=Fraction(10), D=Fraction(20))
    res = check_conditions(bits, S, params)
    assert not res.ok
    assert res.failed == "a"


def test_check_conditions_literal_encoding_fails_b():
    # an all-literal encoding of prng has usage ~ n, over d = 1/2
    n = triangle(12)
    S = PrefixOracle.from_sequence(prng(5, n))
    from dimlab.codec import CodeRecord, RECORD_MODE_LITERAL
    bits = []
    src = S.prefix(n).tolist()
    for i in range(1, 13):
        block = src[triangle(i - 1):triangle(i)]
        bits.extend(CodeRecord(RECORD_MODE_LITERAL, tuple(block)).bits())
    params = ExtractorParams(epsilon=Fraction(2), delta=Fraction(1, 2),
                             d=Fraction(1, 2), D=Fraction(100), n0=n)
    res = check_conditions(bits, S, params)
    assert not res.ok
    assert res.failed == "b"


def test_check_conditions_parse_failure_is_a():
    S = PrefixOracle.from_sequence(prng(5, 100))
    params = toy_params()
    res = check_conditions([0, 0, 0, 0], S, params)
    assert not res.ok and res.failed == "a"


def test_structured_matches_exhaustive_on_toys():
    # on 3-block toy instances the structured search accepts iff the
    # exhaustive search finds an acceptable candidate
    cases = [
        (prng(5, triangle(3)), toy_params()),
        (zeros(triangle(3)), toy_params()),
        (prng(8, triangle(3)), toy_params(d=Fraction(5), D=Fraction(10))),
        # infeasible budget: both must exhaust
        (prng(5, triangle(3)), toy_params(d=Fraction(1, 100))),
        (zeros(triangle(3)), toy_params(d=Fraction(1, 100), D=Fraction(1, 50))),
    ]
    for seq, params in cases:
        S = PrefixOracle.from_sequence(seq)
        outcomes = {}
        for mode in ("structured", "exhaustive"):
            try:
                ext = next_extension(ExtractorState(), S, params, mode=mode)
                outcomes[mode] = ext
            except SearchExhausted:
                outcomes[mode] = None
        assert (outcomes["structured"] is None) == (outcomes["exhaustive"] is None)
        if outcomes["structured"] is not None:
            # the structured pick is itself inside the exhaustive cap or
            # longer; when within the cap both candidates pass the checks
            st = ExtractorState()
            chosen = outcomes["structured"]
            full = list(chosen.bits)
            res = check_conditions(full, S, params)
            assert res.ok


def test_prefix_stability_and_condition_log():
    S = PrefixOracle.from_sequence(prng(5, triangle(6)))
    params = toy_params(d=Fraction(5), D=Fraction(10), lookahead=2)
    st = ExtractorState()
    snapshots = []
    while st.covered < triangle(6):
        ext = next_extension(st, S, params)
        before = list(st.emitted)
        apply_extension(st, ext, S)
        assert st.emitted[:len(before)] == before  # never revised
        snapshots.append((len(st.emitted), st.prefix_hash()))
    assert [s.stage for s in st.condition_log] == list(range(1, len(snapshots) + 1))
    for (nbits, digest), rec in zip(snapshots, st.condition_log):
        assert rec.usage_after == nbits
        assert rec.prefix_sha256 == digest
    # decoded prefix tracks the truth
    assert st.decoded_prefix == S.prefix(st.covered).tolist()


def test_exhaustion_carries_hint():
    S = PrefixOracle.from_sequence(prng(5, triangle(3)))
    params = toy_params(d=Fraction(1, 100))
    with pytest.raises(SearchExhausted) as ei:
        next_extension(ExtractorState(), S, params)
    assert "increase d" in ei.value.hint


def test_extract_precondition_zeros():
    S = PrefixOracle.from_sequence(zeros(30000))
    with pytest.raises(DomainError) as ei:
        extract(S, Fraction(1, 5), 10000)
    assert "precondition" in str(ei.value)


def test_extract_small_regular_run():
    n = 20000
    src = Xorshift64Star(7).bits(n)
    S = PrefixOracle.from_sequence(dilute(src, Fraction(1, 2), n))
    params, rlow, rhigh = derive_params(S, Fraction(1, 5), 12000, lookahead=256)
    r_prime, report = extract(S, Fraction(1, 5), 12000, params=params)
    assert report.covered_source_bits >= 12000
    assert report.post_hoc.ok
    assert report.emitted_bits == len(r_prime)
    # improvement direction
    assert report.result_dim_H >= report.source_dim_H
    assert report.result_dim_P >= report.source_dim_P - Fraction(1, 20)
    # budgets honored at every accepted boundary, by the post-hoc pass and
    # again via the logged landings
    for rec in report.stages:
        assert rec.landing <= report.covered_source_bits
        assert rec.usage_after <= params.d * rec.landing


def test_report_target_arithmetic():
    # targets follow the measured-profile arithmetic: H-target is
    # dim_hat_H(S)/dim_hat_P(S) - epsilon, P-target is 1 - epsilon; a
    # regular source (equal estimates) therefore targets 1 - epsilon
    n = 20000
    src = Xorshift64Star(7).bits(n)
    S = PrefixOracle.from_sequence(dilute(src, Fraction(1, 2), n))
    params, _, _ = derive_params(S, Fraction(1, 5), 10000, lookahead=256)
    _, report = extract(S, Fraction(1, 5), 10000, params=params)
    assert report.target_dim_H == (report.source_dim_H / report.source_dim_P
                                   - Fraction(1, 5))
    assert report.target_dim_P == 1 - Fraction(1, 5)
    if report.source_dim_H == report.source_dim_P:
        assert report.target_dim_H == 1 - Fraction(1, 5)
