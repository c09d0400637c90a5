"""The exact motif solvers.

Five interchangeable search strategies produce identical motif sets:

* oracle: check every l-mer over the alphabet against the definition
  (bounded by an enumeration budget; the ground truth for tests).
* prune: depth-first candidate trees rooted at the windows of the first
  n-q+1 strings, with incremental per-window distances and a
  quorum-reachability subtree prune.
* qpms7: pair traversal; candidates come from a root window and are
  additionally pruned against a reference window drawn from a second
  string, using the three-ball feasibility test.
* traver: pair traversal plus suppression of redundant string
  combinations, dynamic reference-string selection (farthest first) and
  differing-positions-first traversal order.
* sigma: the traver search with all candidate/window distances computed
  on bit-plane compressed l-mers.

Every candidate that passes a traversal's quorum bookkeeping is
confirmed against the full instance before emission, so emitted sets are
sound by construction; completeness is guarded by the oracle-equivalence
test suite.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from . import scheduler
from ._engine import (
    ALGORITHMS,
    SolveResult,
    SolverOptions,
    SolveStats,
    get_data,
)
from .bitpack import hamming_naive
from .errors import BadParams
from .model import Instance, Lmer, MotifSet

__all__ = [
    "ALGORITHMS",
    "SolverOptions",
    "SolveResult",
    "SolveStats",
    "WindowSet",
    "filter_windows",
    "run_solver",
    "solve_oracle",
    "solve_qpms7",
    "solve_qpmsprune",
    "solve_sigma",
    "solve_subset_then_verify",
    "solve_traver",
    "verify_motif",
]


def verify_motif(inst: Instance, cand) -> tuple[bool, int]:
    """Support count of a candidate and whether it meets the quorum."""
    codes = cand.codes if isinstance(cand, Lmer) else tuple(cand)
    if len(codes) != inst.l:
        raise BadParams(f"candidate length {len(codes)} != l={inst.l}")
    support = get_data(inst).support_of(np.array(codes, dtype=np.uint8))
    return support >= inst.q, support


def run_solver(inst: Instance, opts: SolverOptions | None = None, *,
               chunk: int = scheduler.DEFAULT_CHUNK) -> SolveResult:
    """Solve with the algorithm named in the options; returns stats too."""
    if opts is None:
        opts = SolverOptions()
    return scheduler.schedule(inst, opts, chunk=chunk)


def _solve_as(inst: Instance, opts: SolverOptions | None, algorithm: str) -> MotifSet:
    opts = replace(opts, algorithm=algorithm) if opts else SolverOptions(algorithm=algorithm)
    return run_solver(inst, opts).motifs


def solve_oracle(inst: Instance, opts: SolverOptions | None = None) -> MotifSet:
    """Pattern-driven enumeration of all sigma^l candidates."""
    return _solve_as(inst, opts, "oracle")


def solve_qpmsprune(inst: Instance, opts: SolverOptions | None = None) -> MotifSet:
    """Single-root tree search with the quorum-reachability prune."""
    return _solve_as(inst, opts, "prune")


def solve_qpms7(inst: Instance, opts: SolverOptions | None = None) -> MotifSet:
    """Pair-guided tree search over ordered string pairs."""
    return _solve_as(inst, opts, "qpms7")


def solve_traver(inst: Instance, opts: SolverOptions | None = None) -> MotifSet:
    """Pair search with combination elimination and reordering heuristics."""
    return _solve_as(inst, opts, "traver")


def solve_sigma(inst: Instance, opts: SolverOptions | None = None) -> MotifSet:
    """The traver search on bit-plane compressed l-mers."""
    return _solve_as(inst, opts, "sigma")


def default_subset_size(inst: Instance) -> int:
    """Smallest subset keeping the residual quorum >= 2, but at least 5
    strings when available (a stricter sub-quorum prunes far better)."""
    return min(inst.n, max(inst.n - inst.q + 2, 5))


def solve_subset_then_verify(inst: Instance, k: int | None = None,
                             opts: SolverOptions | None = None) -> MotifSet:
    """Find motifs over the first k strings, then test against all n.

    The subset instance gets quorum max(q - (n - k), 1): at most n - k
    of a motif's supporting strings can lie outside the subset, so every
    motif of the full instance is a motif of the subset instance and
    survives the final verification. That argument needs
    q - (n - k) >= 1; a smaller k leaves motifs supported only outside
    the subset unfindable, so it is rejected.
    """
    if k is None:
        k = default_subset_size(inst)
    if not 2 <= k <= inst.n:
        raise BadParams(f"need 2 <= k <= n, got k={k}, n={inst.n}")
    if k < inst.n - inst.q + 1:
        raise BadParams(
            f"need k >= n - q + 1 = {inst.n - inst.q + 1} for an exact result, "
            f"got k={k}"
        )
    if k == inst.n:
        return run_solver(inst, opts).motifs
    sub_q = max(inst.q - (inst.n - k), 1)
    sub = Instance(inst.sequences[:k], inst.l, inst.d, sub_q, inst.alphabet)
    sub_opts = opts if opts is not None else SolverOptions()
    candidates = run_solver(sub, sub_opts).motifs.motifs()
    if not candidates:
        return MotifSet.from_candidates([], inst)
    mat = np.array([c.codes for c in candidates], dtype=np.uint8)
    supports = get_data(inst).support_many(mat)
    pairs = [
        (cand.codes, int(s)) for cand, s in zip(candidates, supports) if s >= inst.q
    ]
    return MotifSet.from_candidates(pairs, inst)


class WindowSet:
    """Per-sequence rows of surviving window indices in one stack buffer.

    All rows live in a single flat buffer; filtering compacts each
    surviving subset over the prefix of its own span and re-sorts the
    row order by size, so repeated filtering keeps survivors contiguous.
    Filtering is destructive to the parent view, matching the
    stack-of-subsets discipline the solvers use internally. Windows past
    the end of a sequence do not exist in any row: an out-of-range
    comparison can never match (the infinite-distance sentinel).
    """

    def __init__(self, buffer: np.ndarray, spans: tuple[tuple[int, int, int], ...]):
        self._buffer = buffer
        self._spans = spans

    @classmethod
    def initial(cls, inst: Instance) -> "WindowSet":
        """All window indices of every sequence, rows in sequence order."""
        W = inst.num_windows
        buffer = np.tile(np.arange(W, dtype=np.int32), inst.n)
        spans = tuple((i, i * W, W) for i in range(inst.n))
        return cls(buffer, spans)

    def row(self, seq: int) -> np.ndarray:
        for owner, off, count in self._spans:
            if owner == seq:
                return self._buffer[off:off + count]
        raise KeyError(seq)

    def rows(self) -> dict[int, np.ndarray]:
        return {owner: self._buffer[off:off + count]
                for owner, off, count in self._spans}

    def row_order(self) -> tuple[int, ...]:
        return tuple(owner for owner, _, _ in self._spans)

    def total(self) -> int:
        return sum(count for _, _, count in self._spans)


def filter_windows(ws: WindowSet, inst: Instance, candidate, radius: int) -> WindowSet:
    """Keep only windows within `radius` of the candidate.

    Survivors of each row are written over that row's prefix in the
    shared buffer; the returned WindowSet lists rows by ascending size
    (ties by sequence index). A negative radius empties every row.
    """
    codes = candidate.codes if isinstance(candidate, Lmer) else tuple(candidate)
    if len(codes) != inst.l:
        raise BadParams(f"candidate length {len(codes)} != l={inst.l}")
    cand = np.array(codes, dtype=np.uint8)
    swv = np.lib.stride_tricks.sliding_window_view(inst.matrix, inst.l, axis=1)
    buffer = ws._buffer
    new_spans = []
    for owner, off, count in ws._spans:
        if radius < 0 or count == 0:
            new_spans.append((owner, off, 0))
            continue
        row = buffer[off:off + count]
        dists = (swv[owner, row] != cand).sum(axis=1)
        kept = row[dists <= radius]
        buffer[off:off + kept.size] = kept
        new_spans.append((owner, off, int(kept.size)))
    new_spans.sort(key=lambda span: (span[2], span[0]))
    return WindowSet(buffer, tuple(new_spans))
