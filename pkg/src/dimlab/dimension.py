"""Finite-prefix dimension and compression-ratio estimators.

A DimensionProfile samples C(S[0..n-1])/n at chosen prefix lengths; a
RatioProfile does the same for query usage over output length. Tail
statistics stand in for the limiting quantities: dim_hat_H is the tail
minimum of the sampled quotient, dim_hat_P the tail maximum, and both are
exact rationals. The default sample grid is geometric, n = ceil(n0 * r^j)
with r = 1.3, and the default tail begins at max(256, ceil(sqrt(N))) for
horizon N, which discards the constant-dominated head.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from dimlab.complexity import ComplexityOracle
from dimlab.errors import DomainError
from dimlab.seqcore import PrefixOracle

DEFAULT_GRID_START = 64
DEFAULT_GRID_RATIO = 1.3


def default_tail_start(horizon: int) -> int:
    return max(256, math.isqrt(max(horizon - 1, 0)) + 1)


def geometric_grid(horizon: int, start: int = DEFAULT_GRID_START,
                   ratio: float = DEFAULT_GRID_RATIO,
                   include: tuple[int, ...] = ()) -> list[int]:
    """Sorted unique sample points start..horizon, geometric with `ratio`,
    always containing the horizon, plus any extra `include` points."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    pts = set(p for p in include if 1 <= p <= horizon)
    x = float(start)
    while x < horizon:
        pts.add(math.ceil(x))
        x *= ratio
    pts.add(horizon)
    return sorted(pts)


@dataclass(frozen=True)
class ProfileSample:
    n: int
    value: Fraction  # C/n for dimension profiles, usage/n for ratio profiles

    @property
    def numerator_bits(self) -> int:
        """The raw numerator (complexity or usage) before dividing by n."""
        return self.value.numerator * self.n // self.value.denominator


class _ProfileBase:
    """Common container: samples sorted by n, strictly increasing."""

    def __init__(self, samples, tail_start: int):
        samples = sorted(samples, key=lambda s: s.n)
        for a, b in zip(samples, samples[1:]):
            if a.n >= b.n:
                raise ValueError("sample points must be strictly increasing")
        if samples and tail_start > samples[-1].n:
            raise ValueError("tail_start beyond the largest sample")
        self.samples: list[ProfileSample] = samples
        # tail_start never sits below the smallest sample
        self.tail_start = max(tail_start, samples[0].n) if samples else tail_start

    def tail(self, tail_start: int | None = None) -> list[ProfileSample]:
        t = self.tail_start if tail_start is None else tail_start
        return [s for s in self.samples if s.n >= t]

    @property
    def horizon(self) -> int:
        return self.samples[-1].n if self.samples else 0


class DimensionProfile(_ProfileBase):
    """Sampled C(S[0..n-1])/n with a tail marker for liminf/limsup stand-ins."""


class RatioProfile(_ProfileBase):
    """Sampled usage(n)/n for a reduction trace, same tail conventions.

    metadata records what the samples were measured over (reducer family),
    since finite-scale minima cannot range over all machines.
    """

    def __init__(self, samples, tail_start: int, metadata: dict | None = None):
        super().__init__(samples, tail_start)
        self.metadata = dict(metadata or {})


def profile(seq_oracle: PrefixOracle, sample_points, oracle: ComplexityOracle,
            tail_start: int | None = None) -> DimensionProfile:
    """Measure C(prefix)/n at each sample point. Deterministic.

    Each point is measured independently (complexity of the materialized
    prefix), so the samples are exactly the estimator's values, not
    stream-snapshot approximations.
    """
    points = sorted(set(sample_points))
    if not points:
        raise DomainError("no sample points")
    if seq_oracle.horizon is not None and points[-1] > seq_oracle.horizon:
        raise DomainError(
            f"sample point {points[-1]} beyond horizon {seq_oracle.horizon}")
    prefix = seq_oracle.prefix(points[-1]).tolist()
    samples = []
    for n in points:
        c = oracle.complexity(prefix[:n])
        samples.append(ProfileSample(n, Fraction(c, n)))
    ts = default_tail_start(points[-1]) if tail_start is None else tail_start
    ts = min(ts, points[-1])
    return DimensionProfile(samples, ts)


def dim_hat_H(p: DimensionProfile, tail_start: int | None = None) -> Fraction:
    """Tail minimum of the sampled quotient (liminf stand-in)."""
    tail = p.tail(tail_start)
    if not tail:
        raise DomainError("empty tail: no samples at or past tail_start")
    return min(s.value for s in tail)


def dim_hat_P(p: DimensionProfile, tail_start: int | None = None) -> Fraction:
    """Tail maximum of the sampled quotient (limsup stand-in)."""
    tail = p.tail(tail_start)
    if not tail:
        raise DomainError("empty tail: no samples at or past tail_start")
    return max(s.value for s in tail)


def ratio_hats(t: RatioProfile,
               tail_start: int | None = None) -> tuple[Fraction, Fraction]:
    """(tail min, tail max) of usage/n: best- and worst-case ratio estimates."""
    tail = t.tail(tail_start)
    if not tail:
        raise DomainError("empty tail: no samples at or past tail_start")
    values = [s.value for s in tail]
    return min(values), max(values)


def render_decimal(x: Fraction, places: int = 6) -> str:
    """Exact decimal rendering of a rational, half away from zero."""
    scale = 10 ** places
    sign = "-" if x < 0 else ""
    num = abs(x.numerator)
    q = (num * scale * 2 + x.denominator) // (2 * x.denominator)
    return f"{sign}{q // scale}.{q % scale:0{places}d}"


def profile_rows(p: _ProfileBase) -> list[dict]:
    """CSV rows: n, c (raw bits), ratio (6-place decimal), exact fraction."""
    rows = []
    for s in p.samples:
        rows.append({
            "n": s.n,
            "c": s.numerator_bits,
            "ratio": render_decimal(s.value),
            "ratio_num": s.value.numerator,
            "ratio_den": s.value.denominator,
        })
    return rows
