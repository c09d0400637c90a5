"""Bit-plane compressed l-mers and the Hamming-distance engine.

An l-mer over an alphabet of size sigma is packed into bits_per_symbol
planes; plane b holds bit b of every symbol code, 32 positions per
unsigned 32-bit word (position j lands in bit j % 32 of word j // 32).
The distance between two packed l-mers is the popcount of the OR across
planes of the per-plane XOR: any differing code bit marks its position.

The word width is fixed at 32 bits regardless of host word size, so the
packed layout is identical everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .model import Instance, Lmer, Sequence

WORD_BITS = 32
_WORD_MASK = 0xFFFFFFFF

_HAS_NATIVE_POPCOUNT = hasattr(int, "bit_count")

# 8-bit popcount table for the portable fallback paths
_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def popcount_word(word: int) -> int:
    """Set-bit count of one 32-bit word via the platform facility."""
    return word.bit_count()


def popcount_word_portable(word: int) -> int:
    """Portable set-bit count; must agree with popcount_word."""
    total = 0
    while word:
        total += int(_POPCOUNT8[word & 0xFF])
        word >>= 8
    return total


def _codes_of(x) -> tuple[int, ...]:
    if isinstance(x, Lmer):
        return x.codes
    if isinstance(x, Sequence):
        return x.codes
    return tuple(x)


@dataclass(frozen=True)
class CompressedLmer:
    """Bit-plane packed l-mer: planes[b][w] is word w of code-bit b."""

    planes: tuple[tuple[int, ...], ...]
    l: int

    @property
    def bits_per_symbol(self) -> int:
        return len(self.planes)

    @property
    def words_per_plane(self) -> int:
        return len(self.planes[0])


def compress_lmer(x, sigma: int = 4) -> CompressedLmer:
    """Pack an l-mer into ceil(log2 sigma) planes of 32-bit words."""
    codes = _codes_of(x)
    l = len(codes)
    bits = max(1, (sigma - 1).bit_length())
    nwords = max(1, -(-l // WORD_BITS))
    planes = []
    for b in range(bits):
        words = [0] * nwords
        for j, c in enumerate(codes):
            if (c >> b) & 1:
                words[j // WORD_BITS] |= 1 << (j % WORD_BITS)
        planes.append(tuple(words))
    return CompressedLmer(tuple(planes), l)


def decompress_lmer(c: CompressedLmer) -> Lmer:
    """Recover the original code tuple from its planes."""
    codes = [0] * c.l
    for b, words in enumerate(c.planes):
        for j in range(c.l):
            if (words[j // WORD_BITS] >> (j % WORD_BITS)) & 1:
                codes[j] |= 1 << b
    return Lmer(tuple(codes))


def hamming_naive(a, b) -> int:
    """Positionwise mismatch count between two equal-length strings."""
    ca = _codes_of(a)
    cb = _codes_of(b)
    if len(ca) != len(cb):
        raise LengthMismatch(f"lengths differ: {len(ca)} != {len(cb)}")
    return sum(1 for x, y in zip(ca, cb) if x != y)


def hamming_compressed(a: CompressedLmer, b: CompressedLmer) -> int:
    """Distance via XOR per plane, OR across planes, popcount of the mask."""
    if a.l != b.l or a.bits_per_symbol != b.bits_per_symbol:
        raise LengthMismatch("compressed l-mers have different shape")
    total = 0
    for w in range(a.words_per_plane):
        mask = 0
        for pa, pb in zip(a.planes, b.planes):
            mask |= pa[w] ^ pb[w]
        total += popcount_word(mask & _WORD_MASK)
    return total


def hamming_to_sequence(x, s) -> int:
    """Minimum distance from x to any l-length window of s."""
    cx = _codes_of(x)
    cs = _codes_of(s)
    l = len(cx)
    if l > len(cs):
        raise LengthMismatch(f"l-mer longer than sequence: {l} > {len(cs)}")
    xa = np.frombuffer(bytes(cx), dtype=np.uint8)
    sa = np.frombuffer(bytes(cs), dtype=np.uint8)
    windows = np.lib.stride_tricks.sliding_window_view(sa, l)
    return int((windows != xa).sum(axis=1).min())


def incremental_update(dists, p: int, old: int, new: int, s) -> np.ndarray:
    """Adjust per-window distances after one candidate position changes.

    dists[r] must hold the distance from the candidate to window r of s
    before position p changed from symbol `old` to symbol `new`. Windows
    whose aligned symbol equals `old` gain a mismatch; windows aligned
    with `new` lose one; the rest are unchanged.
    """
    cs = _codes_of(s)
    dists = np.asarray(dists, dtype=np.int64)
    if new == old:
        return dists.copy()
    nwin = dists.shape[0]
    aligned = np.frombuffer(bytes(cs), dtype=np.uint8)[p:p + nwin]
    return dists + (aligned == old) - (aligned == new)


class PairDistanceTable:
    """Per sequence pair, the boolean table of window distances <= 2d.

    Tables are materialized lazily per (i, j) pair and then shared
    read-only; flag(i, p, j, r) answers whether windows p of sequence i
    and r of sequence j are within 2d of each other.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self.threshold = 2 * inst.d
        self._pairs: dict[tuple[int, int], np.ndarray] = {}

    def pair(self, i: int, j: int) -> np.ndarray:
        """Boolean (W, W) matrix for the (i, j) sequence pair."""
        key = (i, j)
        cached = self._pairs.get(key)
        if cached is not None:
            return cached
        rev = self._pairs.get((j, i))
        if rev is not None:
            table = rev.T
        else:
            l = self.inst.l
            wi = np.lib.stride_tricks.sliding_window_view(self.inst.matrix[i], l)
            wj = np.lib.stride_tricks.sliding_window_view(self.inst.matrix[j], l)
            dists = (wi[:, None, :] != wj[None, :, :]).sum(axis=2)
            table = dists <= self.threshold
        table.flags.writeable = False
        self._pairs[key] = table
        return table

    def flag(self, i: int, p: int, j: int, r: int) -> bool:
        return bool(self.pair(i, j)[p, r])


def precompute_pair_distances(inst: Instance) -> PairDistanceTable:
    """Pairwise window-distance <= 2d flags, built lazily per pair."""
    return PairDistanceTable(inst)


# ---------------------------------------------------------------------------
# Vectorized packing used by the solver engine. These produce the same
# plane layout as compress_lmer, fused into one words axis per l-mer so a
# whole row of windows can be XOR/OR/popcounted in a few array operations.
# ---------------------------------------------------------------------------

def plane_shape(l: int, sigma: int) -> tuple[int, int]:
    """(bits_per_symbol, words_per_plane) of the packed layout."""
    bits = max(1, (sigma - 1).bit_length())
    return bits, max(1, -(-l // WORD_BITS))


def pack_codes(codes: np.ndarray, sigma: int) -> np.ndarray:
    """Pack code rows (..., l) into fused plane words (..., bits * words)."""
    codes = np.asarray(codes, dtype=np.uint8)
    l = codes.shape[-1]
    bits, nwords = plane_shape(l, sigma)
    lead = codes.shape[:-1]
    out = np.zeros(lead + (bits, nwords), dtype=np.uint32)
    word_idx = np.arange(l) // WORD_BITS
    bit_val = (np.uint32(1) << (np.arange(l) % WORD_BITS).astype(np.uint32))
    for b in range(bits):
        plane_bits = ((codes >> b) & 1).astype(np.uint32) * bit_val
        for w in range(nwords):
            cols = word_idx == w
            out[..., b, w] = np.bitwise_or.reduce(plane_bits[..., cols], axis=-1)
    return out.reshape(lead + (bits * nwords,))


def packed_distances(packed_rows: np.ndarray, packed_x: np.ndarray,
                     bits: int, nwords: int) -> np.ndarray:
    """Distances from packed l-mer x to every packed row, as int16."""
    x = packed_rows ^ packed_x
    if nwords == 1:
        if bits == 2:
            mask = x[..., 0] | x[..., 1]
        else:
            mask = np.bitwise_or.reduce(x, axis=-1)
        return np.bitwise_count(mask).astype(np.int16)
    if bits > 1:
        x = np.bitwise_or.reduce(x.reshape(x.shape[:-1] + (bits, nwords)), axis=-2)
    return np.bitwise_count(x).sum(axis=-1, dtype=np.int16)
