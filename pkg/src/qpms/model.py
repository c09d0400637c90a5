"""Domain types for alphabets, sequences and problem instances.

Symbol codes are small integers assigned in alphabetical symbol order, so
lexicographic order on code tuples equals lexicographic order on the
rendered strings. All types are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadParams, MalformedFasta, UnknownSymbol


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of symbols with positional integer codes.

    The code of a symbol is its index in ``symbols``; decoding is the
    inverse lookup. Input is case-insensitive (upper-cased on encode).
    """

    symbols: str

    def __post_init__(self):
        if len(self.symbols) < 2:
            raise BadParams("alphabet needs at least 2 symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise BadParams("alphabet symbols must be unique")

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def bits_per_symbol(self) -> int:
        return max(1, (self.size - 1).bit_length())

    @cached_property
    def _code_of(self) -> dict[str, int]:
        return {ch: i for i, ch in enumerate(self.symbols)}

    def code(self, char: str) -> int:
        """Code of a single symbol, or raise UnknownSymbol."""
        try:
            return self._code_of[char.upper()]
        except KeyError:
            raise UnknownSymbol(0, char) from None

    def decode(self, codes) -> str:
        """Render a code sequence back to text."""
        return "".join(self.symbols[c] for c in codes)


DNA = Alphabet("ACGT")
PROTEIN = Alphabet("ACDEFGHIKLMNPQRSTVWY")
BINARY = Alphabet("01")


@dataclass(frozen=True)
class Sequence:
    """An integer-encoded input string."""

    codes: tuple[int, ...]
    id: str | None = None

    def __len__(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class Lmer:
    """A fixed-length candidate or window string, as a code tuple."""

    codes: tuple[int, ...]

    @classmethod
    def from_text(cls, text: str, alphabet: Alphabet = DNA) -> "Lmer":
        return cls(tuple(alphabet.code(ch) for ch in text))

    def to_text(self, alphabet: Alphabet = DNA) -> str:
        return alphabet.decode(self.codes)

    def __len__(self) -> int:
        return len(self.codes)


def encode_sequence(text: str, alphabet: Alphabet = DNA, id: str | None = None) -> Sequence:
    """Encode a text string into a Sequence.

    Case-insensitive; rejects empty input and any character outside the
    alphabet (including ambiguity codes such as 'N' for DNA).
    """
    if len(text) == 0:
        raise BadParams("sequence must have length >= 1")
    codes = []
    lookup = alphabet._code_of
    for pos, ch in enumerate(text):
        code = lookup.get(ch.upper())
        if code is None:
            raise UnknownSymbol(pos, ch, context=id or "sequence")
        codes.append(code)
    return Sequence(tuple(codes), id=id)


def parse_fasta(data: bytes | str, alphabet: Alphabet = DNA) -> list[Sequence]:
    """Parse FASTA text into a list of Sequences.

    Records start with a '>' header line; sequence lines until the next
    header are concatenated. The record id is the header text after '>'.
    Blank lines are ignored. Raises MalformedFasta when the first
    non-blank line is not a header, and UnknownSymbol / BadParams for
    invalid record bodies.
    """
    if isinstance(data, bytes):
        text = data.decode("ascii")
    else:
        text = data
    sequences: list[Sequence] = []
    header: str | None = None
    chunks: list[str] = []

    def flush():
        if header is not None:
            sequences.append(encode_sequence("".join(chunks), alphabet, id=header))

    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            flush()
            header = line[1:].strip()
            chunks = []
        else:
            if header is None:
                raise MalformedFasta("first non-blank line is not a '>' header")
            chunks.append(line)
    flush()
    return sequences


@dataclass(frozen=True)
class Instance:
    """A quorum planted motif search problem: (sequences, l, d, q).

    Invariants: n >= 2 equal-length sequences, 1 <= l <= m, 0 <= d <= l,
    1 <= q <= n. Build through validate_instance.
    """

    sequences: tuple[Sequence, ...]
    l: int
    d: int
    q: int
    alphabet: Alphabet = DNA

    @property
    def n(self) -> int:
        return len(self.sequences)

    @property
    def m(self) -> int:
        return len(self.sequences[0])

    @property
    def num_windows(self) -> int:
        return self.m - self.l + 1

    @cached_property
    def matrix(self) -> np.ndarray:
        """Read-only (n, m) uint8 code matrix."""
        mat = np.array([s.codes for s in self.sequences], dtype=np.uint8)
        mat.flags.writeable = False
        return mat

    def window(self, i: int, start: int) -> Lmer:
        """The l-length window of sequence i starting at 0-based start."""
        return Lmer(self.sequences[i].codes[start:start + self.l])


def validate_instance(seqs, l: int, d: int, q: int, alphabet: Alphabet = DNA) -> Instance:
    """Check all Instance invariants and build the Instance.

    Raises BadParams naming the violated constraint.
    """
    seqs = tuple(seqs)
    n = len(seqs)
    if n < 2:
        raise BadParams(f"need at least 2 sequences, got {n}")
    m = len(seqs[0])
    for s in seqs:
        if len(s) != m:
            raise BadParams(f"sequences must have equal length ({len(s)} != {m})")
    if m < 1:
        raise BadParams("sequences must have length >= 1")
    if not 1 <= l <= m:
        raise BadParams(f"need 1 <= l <= m, got l={l}, m={m}")
    if not 0 <= d <= l:
        raise BadParams(f"need 0 <= d <= l, got d={d}, l={l}")
    if not 1 <= q <= n:
        raise BadParams(f"need 1 <= q <= n, got q={q}, n={n}")
    size = alphabet.size
    for s in seqs:
        for c in s.codes:
            if not 0 <= c < size:
                raise BadParams(f"sequence code {c} outside alphabet of size {size}")
    return Instance(seqs, l, d, q, alphabet)


@dataclass(frozen=True)
class MotifSet:
    """Deduplicated (l,d,q)-motifs with per-motif support, in canonical order.

    Canonical order is lexicographic on code tuples, which matches
    lexicographic order of the rendered strings.
    """

    entries: tuple[tuple[Lmer, int], ...]
    l: int
    d: int
    q: int
    alphabet: Alphabet = field(default=DNA, compare=False)

    @classmethod
    def from_candidates(cls, candidates, inst: Instance) -> "MotifSet":
        """Build from an iterable of (code-tuple, support) pairs."""
        best: dict[tuple[int, ...], int] = {}
        for codes, support in candidates:
            codes = tuple(codes)
            best[codes] = support
        entries = tuple(
            (Lmer(codes), best[codes]) for codes in sorted(best)
        )
        return cls(entries, inst.l, inst.d, inst.q, inst.alphabet)

    def __len__(self) -> int:
        return len(self.entries)

    def motifs(self) -> list[Lmer]:
        return [m for m, _ in self.entries]

    def __contains__(self, item) -> bool:
        if isinstance(item, Lmer):
            key = item.codes
        elif isinstance(item, str):
            key = Lmer.from_text(item, self.alphabet).codes
        else:
            key = tuple(item)
        return any(m.codes == key for m, _ in self.entries)

    def to_text(self) -> str:
        """One 'MOTIF<TAB>support' line per motif, sorted, trailing newline."""
        return "".join(
            f"{m.to_text(self.alphabet)}\t{support}\n" for m, support in self.entries
        )
