"""dimlab: a desk-scale laboratory for compression-based dimension estimation.

Bit sequences with a triangular block layout, pluggable complexity
estimators (an exact toy machine and a multi-mode compressor proxy),
finite-prefix dimension and compression-ratio profiles, a self-delimiting
block codec with exact query-usage accounting, an oracle-machine harness
with composition and guarding combinators, and an extension-search
procedure that re-encodes a sequence under usage budgets.
"""

__version__ = "0.1.0"

from dimlab.errors import (
    DimlabError,
    DomainError,
    FormatError,
    HorizonError,
    SearchExhausted,
    UsageError,
)

__all__ = [
    "__version__",
    "DimlabError",
    "DomainError",
    "FormatError",
    "HorizonError",
    "SearchExhausted",
    "UsageError",
]
