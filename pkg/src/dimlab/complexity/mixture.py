"""Adaptive bit-prediction model: a mixture of gated and Markov KT estimators.

Components:

* for each period q in PERIODS, a position-gated estimator holding one
  Krichevsky-Trofimov counter pair per residue class of the global bit
  position, which locks onto sources whose statistics depend on position
  modulo q (dilution patterns);
* for each order k in ORDERS, a context estimator keyed on the previous k
  bits.

Counter pairs are halved once their total reaches 2*COUNT_CAP so the model
re-adapts after regime switches. Mixing is Bayesian: per-component weights
are multiplied by the component's predicted probability of the observed
bit and renormalized. The mixture probability drives the arithmetic coder
in oracle.py; everything here is plain float arithmetic, deterministic for
a fixed input.
"""

from __future__ import annotations

PERIODS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 15, 16)
ORDERS = (1, 2, 3)
COUNT_CAP = 64.0
_HIST_MASK = (1 << max(ORDERS)) - 1


class MixtureModel:
    """Sequential predictor over bits; update() must see every bit coded."""

    __slots__ = ("gated", "markov", "weights", "pos", "hist")

    def __init__(self):
        self.gated = [[0.5] * (2 * q) for q in PERIODS]  # [c0,c1] pairs, flat
        self.markov = [dict() for _ in ORDERS]
        n = len(PERIODS) + len(ORDERS)
        self.weights = [1.0 / n] * n
        self.pos = 0
        self.hist = 0

    def predict(self) -> float:
        """Mixture probability that the next bit is 1."""
        w = self.weights
        p1 = 0.0
        i = 0
        for qi, q in enumerate(PERIODS):
            c = self.gated[qi]
            ph = 2 * (self.pos % q)
            c0 = c[ph]
            c1 = c[ph + 1]
            p1 += w[i] * (c1 / (c0 + c1))
            i += 1
        for ki, k in enumerate(ORDERS):
            ctx = self.hist & ((1 << k) - 1)
            c = self.markov[ki].get(ctx)
            p1 += w[i] * (0.5 if c is None else c[1] / (c[0] + c[1]))
            i += 1
        return p1

    def update(self, bit: int) -> None:
        w = self.weights
        total = 0.0
        i = 0
        for qi, q in enumerate(PERIODS):
            c = self.gated[qi]
            ph = 2 * (self.pos % q)
            c0 = c[ph]
            c1 = c[ph + 1]
            p = c1 / (c0 + c1)
            w[i] *= p if bit else 1.0 - p
            total += w[i]
            c[ph + bit] += 1.0
            if c0 + c1 + 1.0 > 2.0 * COUNT_CAP:
                c[ph] *= 0.5
                c[ph + 1] *= 0.5
            i += 1
        for ki, k in enumerate(ORDERS):
            ctx = self.hist & ((1 << k) - 1)
            d = self.markov[ki]
            c = d.get(ctx)
            if c is None:
                c = [0.5, 0.5]
                d[ctx] = c
            p = c[1] / (c[0] + c[1])
            w[i] *= p if bit else 1.0 - p
            total += w[i]
            c[bit] += 1.0
            if c[0] + c[1] > 2.0 * COUNT_CAP:
                c[0] *= 0.5
                c[1] *= 0.5
            i += 1
        inv = 1.0 / total
        for j in range(len(w)):
            w[j] *= inv
        self.pos += 1
        self.hist = ((self.hist << 1) | bit) & _HIST_MASK
