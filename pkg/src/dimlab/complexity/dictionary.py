"""Incremental binary dictionary compressor (LZ78/LZW family).

The dictionary is a trie seeded with the two single-bit phrases. Parsing
is greedy-longest-match; at a mismatch the matched phrase's code is
emitted with a minimal binary code over the current dictionary size and
the extended phrase is added. flush() emits any partial phrase without
adding an entry, so a stream can be cut at an arbitrary position (block
boundary) while both sides keep identical dictionaries.

The decoder mirrors the dictionary evolution from the emitted codes alone,
resolving the one-step lag where a code can reference the entry whose last
bit is the phrase being decoded (the classic just-added-entry case). The
caller tells the decoder how many output bits to produce; a phrase that
would overshoot that target is a format error.
"""

from __future__ import annotations

from dimlab.bitio import BitWriter, minimal_binary_len
from dimlab.errors import FormatError


class DictionaryCoder:
    """Shared encoder state: trie + current match, evolved by feed/flush."""

    __slots__ = ("children", "parent", "cur")

    def __init__(self):
        self.children: list[dict[int, int]] = [{}, {}]
        self.parent: list[tuple[int | None, int]] = [(None, 0), (None, 1)]
        self.cur = -1  # trie node of the phrase in progress, -1 none

    @property
    def size(self) -> int:
        return len(self.parent)

    def _add(self, prefix: int, bit: int) -> None:
        self.children[prefix][bit] = len(self.parent)
        self.children.append({})
        self.parent.append((prefix, bit))

    def feed(self, bits, out: BitWriter | None) -> int:
        """Parse bits; emit codes into out (None = count only). Returns bits emitted."""
        emitted = 0
        cur = self.cur
        children = self.children
        for b in bits:
            if cur < 0:
                cur = b
                continue
            nxt = children[cur].get(b)
            if nxt is not None:
                cur = nxt
            else:
                emitted += minimal_binary_len(cur, self.size)
                if out is not None:
                    out.write_minimal_binary(cur, self.size)
                self._add(cur, b)
                cur = b
        self.cur = cur
        return emitted

    def flush(self, out: BitWriter | None) -> int:
        """Emit the pending partial phrase, if any, without adding an entry."""
        emitted = 0
        if self.cur >= 0:
            emitted += minimal_binary_len(self.cur, self.size)
            if out is not None:
                out.write_minimal_binary(self.cur, self.size)
            self.cur = -1
        return emitted

    def phrase(self, code: int) -> list[int]:
        acc = []
        parent = self.parent
        c: int | None = code
        while c is not None:
            p, b = parent[c]
            acc.append(b)
            c = p
        acc.reverse()
        return acc


class DictionaryDecoder:
    """Mirrors a DictionaryCoder from emitted codes.

    `pending` is the code of the previous phrase when its dictionary
    extension has not been materialized yet; the encoder has already added
    it, so the code space seen by the decoder is size + 1 while pending.
    """

    __slots__ = ("coder", "pending")

    def __init__(self, coder: DictionaryCoder | None = None):
        self.coder = coder if coder is not None else DictionaryCoder()
        self.pending: int | None = None

    def decode_exact(self, reader, target_len: int) -> list[int]:
        """Decode exactly target_len bits, then apply the block-end flush."""
        coder = self.coder
        out: list[int] = []
        while len(out) < target_len:
            space = coder.size + (1 if self.pending is not None else 0)
            code = reader.read_minimal_binary(space)
            if self.pending is not None:
                if code == coder.size:
                    prev = coder.phrase(self.pending)
                    coder._add(self.pending, prev[0])
                    entry = prev + [prev[0]]
                else:
                    entry = coder.phrase(code)
                    coder._add(self.pending, entry[0])
            else:
                if code >= coder.size:
                    raise FormatError(f"dictionary code {code} out of range")
                entry = coder.phrase(code)
            out.extend(entry)
            self.pending = code
        if len(out) != target_len:
            raise FormatError("dictionary phrase overshoots the target length")
        # the encoder flushed here: partial-phrase state clears, no entry added
        self.pending = None
        coder.cur = -1
        return out


def dictionary_cost(bits, primer=None) -> int:
    """Emitted bit count for coding `bits` as one flushed stretch.

    primer, if given, is parsed first (with a flush) and emits nothing
    toward the returned count.
    """
    coder = DictionaryCoder()
    if primer is not None:
        coder.feed(primer, None)
        coder.flush(None)
    n = coder.feed(bits, None)
    return n + coder.flush(None)
