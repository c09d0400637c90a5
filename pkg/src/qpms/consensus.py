"""Alignment matrix, profile matrix, consensus string and score.

This grounds the classical start-position formulation of motif finding:
pick one window per sequence, tally symbol counts per column, and score
the choice by the sum of column maxima. Start positions are 1-based on
this module's surface, matching the usual presentation and the CLI;
everything internal is 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, BadStart, BudgetExceeded
from .model import Alphabet, DNA, Lmer, Sequence


@dataclass(frozen=True)
class StartVector:
    """One 1-based window start per sequence."""

    starts: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.starts)


@dataclass(frozen=True)
class ProfileMatrix:
    """Symbol occurrence counts per column: shape (sigma, l).

    Every column sums to the number of aligned rows.
    """

    counts: tuple[tuple[int, ...], ...]

    @property
    def sigma(self) -> int:
        return len(self.counts)

    @property
    def l(self) -> int:
        return len(self.counts[0])

    @property
    def rows(self) -> int:
        """Number of aligned rows (any column's sum)."""
        return sum(row[0] for row in self.counts)

    def as_array(self) -> np.ndarray:
        return np.array(self.counts, dtype=np.int64)


def _as_start_tuple(starts) -> tuple[int, ...]:
    if isinstance(starts, StartVector):
        return starts.starts
    return tuple(int(s) for s in starts)


def alignment_matrix(seqs: list[Sequence], starts, l: int) -> np.ndarray:
    """Stack the windows chosen by the start vector into a (t, l) matrix."""
    starts = _as_start_tuple(starts)
    if len(starts) != len(seqs):
        raise BadParams(f"{len(starts)} starts for {len(seqs)} sequences")
    out = np.empty((len(seqs), l), dtype=np.uint8)
    for i, (seq, s) in enumerate(zip(seqs, starts)):
        if not 1 <= s <= len(seq) - l + 1:
            raise BadStart(
                f"start {s} out of range 1..{len(seq) - l + 1} for sequence {i}"
            )
        out[i] = seq.codes[s - 1:s - 1 + l]
    return out


def profile_matrix(alignment: np.ndarray, sigma: int = 4) -> ProfileMatrix:
    """Count symbol occurrences per alignment column."""
    alignment = np.asarray(alignment)
    t, l = alignment.shape
    counts = np.zeros((sigma, l), dtype=np.int64)
    for j in range(l):
        counts[:, j] = np.bincount(alignment[:, j], minlength=sigma)
    return ProfileMatrix(tuple(tuple(int(c) for c in row) for row in counts))


def consensus_string(profile: ProfileMatrix) -> Lmer:
    """Most frequent symbol per column; ties go to the lowest code."""
    return Lmer(tuple(int(c) for c in profile.as_array().argmax(axis=0)))


def consensus_score(profile: ProfileMatrix) -> int:
    """Sum over columns of the column maximum."""
    return int(profile.as_array().max(axis=0).sum())


def best_starts(seqs: list[Sequence], l: int, budget: int = 1_000_000,
                alphabet: Alphabet = DNA) -> tuple[StartVector, int]:
    """Exhaustive search for start positions maximizing the score.

    Iterates every start vector in lexicographic order and keeps the
    first maximizer, so ties resolve to the lexicographically smallest
    vector. Raises BudgetExceeded when (m - l + 1)^t is over budget.
    """
    t = len(seqs)
    if t == 0:
        raise BadParams("need at least one sequence")
    m = min(len(s) for s in seqs)
    if l > m:
        raise BadParams(f"l={l} longer than shortest sequence ({m})")
    width = m - l + 1
    combos = width ** t
    if combos > budget:
        raise BudgetExceeded(combos, budget, "start-vector search")
    sigma = alphabet.size
    windows = np.stack([
        np.lib.stride_tricks.sliding_window_view(
            np.array(s.codes, dtype=np.uint8)[:m], l)
        for s in seqs
    ])
    scratch = np.zeros((sigma, l), dtype=np.int64)
    col = np.arange(l)
    row_sel = np.arange(t)
    best_choice = None
    best = -1
    for choice in itertools.product(range(width), repeat=t):
        scratch[:] = 0
        rows = windows[row_sel, np.fromiter(choice, dtype=np.int64, count=t)]
        np.add.at(scratch, (rows, col), 1)
        score = int(scratch.max(axis=0).sum())
        if score > best:
            best = score
            best_choice = choice
    starts = StartVector(tuple(c + 1 for c in best_choice))
    return starts, best
