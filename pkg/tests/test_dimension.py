from fractions import Fraction

import pytest

from dimlab.complexity import ComplexityOracle
from dimlab.dimension import (
    DimensionProfile,
    ProfileSample,
    RatioProfile,
    default_tail_start,
    dim_hat_H,
    dim_hat_P,
    geometric_grid,
    profile,
    profile_rows,
    ratio_hats,
    render_decimal,
)
from dimlab.errors import DomainError
from dimlab.generators import prng, zeros
from dimlab.seqcore import PrefixOracle


def make_profile(values, tail_start=1):
    samples = [ProfileSample(n, Fraction(v)) for n, v in values]
    return DimensionProfile(samples, tail_start)


def test_constant_profile():
    p = make_profile([(10, Fraction(37, 100)), (20, Fraction(37, 100))])
    assert dim_hat_H(p) == dim_hat_P(p) == Fraction(37, 100)


def test_tail_min_max():
    p = make_profile([(10, Fraction(3, 10)), (20, Fraction(6, 10)),
                      (30, Fraction(4, 10))])
    assert dim_hat_H(p) == Fraction(3, 10)
    assert dim_hat_P(p) == Fraction(6, 10)


def test_single_point_definition():
    # precomputed C = n/2 gives a sample of exactly one half
    oracle = ComplexityOracle("proxy")
    n = 100

    class Half:
        kind = "proxy"

        def complexity(self, w):
            return len(w) // 2

    p = profile(PrefixOracle.from_sequence(prng(1, n)), [n], Half())
    assert p.samples[0].value == Fraction(1, 2)


def test_ordering_invariant():
    oracle = ComplexityOracle("proxy")
    for seq in (zeros(2000), prng(3, 2000)):
        p = profile(PrefixOracle.from_sequence(seq), geometric_grid(2000), oracle)
        assert dim_hat_H(p) <= dim_hat_P(p)
        for s in p.samples:
            assert s.value <= 1 + Fraction(oracle.c_lit, s.n)
            assert s.value >= 0


def test_tail_monotonicity():
    oracle = ComplexityOracle("proxy")
    p = profile(PrefixOracle.from_sequence(prng(5, 4000)),
                geometric_grid(4000), oracle)
    starts = [s.n for s in p.samples]
    prev_h, prev_p = dim_hat_H(p, starts[0]), dim_hat_P(p, starts[0])
    for t in starts[1:]:
        h, pk = dim_hat_H(p, t), dim_hat_P(p, t)
        assert h >= prev_h
        assert pk <= prev_p
        prev_h, prev_p = h, pk


def test_empty_tail_raises():
    p = make_profile([(10, Fraction(1, 2))])
    with pytest.raises(DomainError):
        dim_hat_H(p, tail_start=11)


def test_ratio_hats_identity_trace():
    samples = [ProfileSample(n, Fraction(n, n)) for n in range(1, 30)]
    t = RatioProfile(samples, 1)
    assert ratio_hats(t) == (1, 1)


def test_ratio_hats_half_usage():
    samples = [ProfileSample(n, Fraction((n + 1) // 2, n)) for n in range(1, 60)]
    t = RatioProfile(samples, 8)
    lo, hi = ratio_hats(t)
    assert abs(lo - Fraction(1, 2)) <= Fraction(1, 8)
    assert abs(hi - Fraction(1, 2)) <= Fraction(1, 8)


def test_flip_head_changes_little_exact():
    # finite-variation robustness at toy scale under the exact oracle
    oracle = ComplexityOracle("exact")
    slack = 8
    for base in (zeros(64).tolist(), prng(2, 64).tolist()):
        c0 = {n: oracle.complexity(base[:n]) for n in (16, 32, 64)}
        for k in (1, 2, 4, 8):
            flipped = [1 - b for b in base[:k]] + base[k:]
            for n in (16, 32, 64):
                delta = abs(oracle.complexity(flipped[:n]) - c0[n])
                bound = k + 2 * max(k.bit_length(), 1) + slack
                assert delta <= bound, (k, n, delta, bound)


def test_default_tail_start():
    assert default_tail_start(100000) == 317
    assert default_tail_start(1000) == 256
    assert default_tail_start(65536) == 256


def test_geometric_grid():
    g = geometric_grid(1000, start=64, ratio=1.3)
    assert g[0] == 64 and g[-1] == 1000
    assert g == sorted(set(g))
    g2 = geometric_grid(1000, include=(500,))
    assert 500 in g2


def test_render_decimal():
    assert render_decimal(Fraction(1, 2)) == "0.500000"
    assert render_decimal(Fraction(1, 3)) == "0.333333"
    assert render_decimal(Fraction(2, 3)) == "0.666667"
    assert render_decimal(Fraction(0)) == "0.000000"
    assert render_decimal(Fraction(7, 4), places=2) == "1.75"
    assert render_decimal(Fraction(-1, 3)) == "-0.333333"
    assert render_decimal(Fraction(-1, 2), places=1) == "-0.5"


def test_profile_rows_exact_fractions():
    p = make_profile([(64, Fraction(32, 64))])
    rows = profile_rows(p)
    assert rows == [{"n": 64, "c": 32, "ratio": "0.500000",
                     "ratio_num": 1, "ratio_den": 2}]


def test_profile_requires_points_within_horizon():
    oracle = ComplexityOracle("proxy")
    with pytest.raises(DomainError):
        profile(PrefixOracle.from_sequence(zeros(10)), [20], oracle)


def test_zeros_profile_powers_of_two():
    # all samples tiny on the all-zeros oracle over n = 2^10 .. 2^17
    oracle = ComplexityOracle("proxy")
    points = [1 << k for k in range(10, 18)]
    p = profile(PrefixOracle.constant(0, points[-1]), points, oracle)
    assert all(s.value <= Fraction(1, 20) for s in p.samples)


def test_prng_profile_powers_of_two():
    oracle = ComplexityOracle("proxy")
    points = [1 << k for k in range(10, 18)]
    p = profile(PrefixOracle.from_sequence(prng(7, points[-1])), points, oracle)
    assert all(s.value >= Fraction(9, 10) for s in p.samples)
