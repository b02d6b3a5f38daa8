from fractions import Fraction

import pytest

from dimlab.codec import encode_prefix, decode
from dimlab.errors import DomainError
from dimlab.generators import prng
from dimlab.reductions import (
    Emit,
    OracleMachine,
    Query,
    Tick,
    builtin_machines,
    codec_decode_machine,
    codec_usage_bound,
    compose,
    guard,
    identity_machine,
    position_map_machine,
    run,
    verify_class,
)
from dimlab.seqcore import BitSequence, PrefixOracle, triangle


def test_identity_trace():
    R = prng(11, 500)
    res = run(identity_machine(), PrefixOracle.from_sequence(R), 200)
    assert res.output == R[:200]
    assert res.trace.halted
    for m in range(1, 201):
        assert res.trace.usage[m] == m
        assert res.trace.per_bit_queries[m] == 1


def test_stride_machine_trace():
    R = prng(11, 500)
    res = run(position_map_machine(2), PrefixOracle.from_sequence(R), 100)
    for m in range(1, 101):
        assert res.trace.usage[m] == 2 * (m - 1) + 1
        assert res.trace.per_bit_queries[m] == 1


def test_step_budget_models_divergence():
    def program(n):
        while True:
            yield Tick()
    machine = OracleMachine("spin", program)
    res = run(machine, PrefixOracle.constant(0, 10), 1, step_budget=50)
    assert not res.trace.halted
    assert "budget" in res.trace.failure


def test_horizon_failure_reported():
    res = run(identity_machine(), PrefixOracle.constant(0, 5), 10)
    assert not res.trace.halted
    assert "horizon" in res.trace.failure


def test_codec_machine_matches_decode_trace():
    n = triangle(50)
    seq = prng(7, n)
    encoded, _ = encode_prefix(PrefixOracle.from_sequence(seq), n)
    _, dtrace = decode(PrefixOracle.from_sequence(encoded), n)
    res = run(codec_decode_machine(), PrefixOracle.from_sequence(encoded), n)
    assert res.output == seq
    assert res.trace.usage == dtrace.usage


def test_compose_identity_identity():
    R = prng(3, 300)
    comp = compose(identity_machine(), identity_machine())
    res = run(comp, PrefixOracle.from_sequence(R), 120)
    assert res.output == R[:120]
    for m in range(1, 121):
        assert res.trace.usage[m] == m


def test_compose_law_exact():
    R = prng(5, 4000)
    oracle = PrefixOracle.from_sequence(R)
    m1, m2 = identity_machine(), position_map_machine(2)
    comp = compose(m1, m2)
    res = run(comp, oracle, 500)
    res_m2 = run(m2, oracle, 500)
    res_m1 = run(m1, oracle, 1200)
    for n in range(1, 501):
        assert res.trace.usage[n] == res_m1.trace.usage[res_m2.trace.usage[n]]


def test_compose_single_position_reader():
    # a machine reading only position 0 of its oracle
    def program(n):
        b = yield Query(0)
        for _ in range(n):
            yield Emit(b)
    m2 = OracleMachine("head", program)
    comp = compose(position_map_machine(3), m2)
    R = prng(9, 100)
    res = run(comp, PrefixOracle.from_sequence(R), 20)
    res_m1 = run(position_map_machine(3), PrefixOracle.from_sequence(R), 1)
    assert res.trace.usage[20] == res_m1.trace.usage[1]


def test_compose_attributes_inner_failure():
    def program(n):
        yield Emit(0)
        return
    m1 = OracleMachine("one-bit", program)
    comp = compose(m1, position_map_machine(1))
    res = run(comp, PrefixOracle.constant(0, 100), 5)
    assert not res.trace.halted
    assert "one-bit" in res.trace.failure


def test_guard_compressible_outputs_zero_after_hit():
    oracle = PrefixOracle.constant(1, 4000)
    log = []
    g = guard(identity_machine(), Fraction(1, 2), log=log)
    res = run(g, oracle, 40)
    assert res.trace.halted
    winners = [e.winner for e in log]
    first = winners.index("search")
    # once the search starts winning it keeps winning on an all-ones source
    assert all(w == "search" for w in winners[first:])
    assert all(res.output[i] == 0 for i in range(first, 40))
    # the found program fits the declared budget
    for e in log:
        if e.winner == "search":
            assert e.found_len <= e.found_m * Fraction(1, 2)


def test_guard_incompressible_finite_variation():
    R = prng(3, 3000)
    oracle = PrefixOracle.from_sequence(R)
    log = []
    g = guard(identity_machine(), Fraction(1, 2), max_len_cap=12, log=log)
    res = run(g, oracle, 80)
    plain = run(identity_machine(), oracle, 80)
    assert all(e.winner == "simulation" for e in log)
    assert res.output == plain.output


def test_guard_diverging_machine_on_compressible():
    def program(n):
        while True:
            yield Tick()
    spinner = OracleMachine("spin", program)
    g = guard(spinner, Fraction(1, 2))
    res = run(g, PrefixOracle.constant(0, 4000), 10)
    assert res.trace.halted
    assert res.output == BitSequence([0] * 10)


def test_guard_rejects_bad_alpha():
    with pytest.raises(DomainError):
        guard(identity_machine(), Fraction(2))


def test_verify_class_examples():
    R = prng(2, 600)
    oracle = PrefixOracle.from_sequence(R)
    res = run(identity_machine(), oracle, 300)
    assert verify_class(res.trace, ("wtt", lambda n: n)).passed
    assert verify_class(res.trace, ("bT", 1)).passed

    res2 = run(position_map_machine(2), oracle, 200)
    assert verify_class(res2.trace, ("bT", 2)).passed

    n = triangle(40)
    seq = prng(7, n)
    encoded, _ = encode_prefix(PrefixOracle.from_sequence(seq), n)
    res3 = run(codec_decode_machine(), PrefixOracle.from_sequence(encoded), n)
    assert verify_class(res3.trace, ("wtt", codec_usage_bound)).passed
    rep = verify_class(res3.trace, ("bT", 16))
    assert not rep.passed
    assert rep.first_violation().n > 0


def test_verify_class_monotone_in_horizon():
    # extending the horizon never turns a recorded violation into a pass
    n = triangle(40)
    seq = prng(7, n)
    encoded, _ = encode_prefix(PrefixOracle.from_sequence(seq), n)
    oracle = PrefixOracle.from_sequence(encoded)
    short = run(codec_decode_machine(), oracle, triangle(25))
    longer = run(codec_decode_machine(), oracle, n)
    rep_short = verify_class(short.trace, ("bT", 16))
    rep_long = verify_class(longer.trace, ("bT", 16))
    if not rep_short.passed:
        assert not rep_long.passed
        assert rep_long.first_violation().n == rep_short.first_violation().n


def test_simulation_determinism():
    R = prng(17, 1000)
    oracle = PrefixOracle.from_sequence(R)
    a = run(codec_decode_machine(), PrefixOracle.from_sequence(
        encode_prefix(PrefixOracle.from_sequence(R), 500)[0]), 300)
    b = run(codec_decode_machine(), PrefixOracle.from_sequence(
        encode_prefix(PrefixOracle.from_sequence(R), 500)[0]), 300)
    assert a.output == b.output
    assert a.trace.usage == b.trace.usage
    assert a.steps == b.steps


def test_registry():
    reg = builtin_machines()
    assert {"identity", "stride2", "codec-decode"} <= set(reg)
