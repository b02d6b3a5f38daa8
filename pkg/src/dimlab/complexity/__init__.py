"""Pluggable complexity estimators.

Two oracle kinds share one interface: an exact enumerator over a small
self-delimiting program machine (`exact`), and a multi-mode compressor
(`proxy`) whose strongest mode is an adaptive mixture coder. Both are
deterministic and return integer bit counts.
"""

from dimlab.complexity.oracle import (
    ComplexityOracle,
    ComplexityResult,
    cond_decode_stream,
    cond_describe,
    describe,
    decode_stream,
    EXACT_C_LIT,
    PROXY_C_LIT,
)
from dimlab.complexity.toymachine import (
    ToyProgram,
    decode_program,
    enumerate_valid_programs,
    exact_complexity,
    find_short_program,
    SearchOutcome,
)

__all__ = [
    "ComplexityOracle",
    "ComplexityResult",
    "ToyProgram",
    "decode_program",
    "enumerate_valid_programs",
    "exact_complexity",
    "find_short_program",
    "SearchOutcome",
    "describe",
    "decode_stream",
    "cond_describe",
    "cond_decode_stream",
    "EXACT_C_LIT",
    "PROXY_C_LIT",
]
