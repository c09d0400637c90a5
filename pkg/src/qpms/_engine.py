"""Internal search engine shared by all exact solvers.

Each solver walks duplicate-free candidate trees rooted at input windows
and keeps, per input string, the row of windows that can still host a
motif below the current node. Rows carry the current candidate-to-window
distance and shrink monotonically down a branch (a window whose distance
exceeds 2d - level can never come back within d). The pair-based solvers
additionally track distance and equality-class counts against a
reference window and skip children whose remaining-radius ball cannot
meet both the root ball and the reference ball.

Work is split into units of consecutive root-window indices so that a
scheduler can run units in any order on any number of workers and merge
the per-unit motif dictionaries into one canonical result.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from .bitpack import pack_codes, packed_distances, plane_shape
from .errors import BadParams, BudgetExceeded
from .model import Instance, MotifSet
from .neighborhood import PositionPermutation

TREE_ALGORITHMS = ("prune", "qpms7", "traver", "sigma")
ALGORITHMS = ("oracle",) + TREE_ALGORITHMS

_EMPTY_I8 = np.empty(0, dtype=np.int16)
_EMPTY_I64 = np.empty(0, dtype=np.int64)


@dataclass
class SolverOptions:
    """Knobs shared by every solver; treat instances as immutable.

    `use_compressed` selects the bit-plane distance backend (None means
    "whatever the algorithm default is"; the sigma algorithm always uses
    it). `quorum_prune` disables the quorum-reachability subtree prune
    when False; this changes traversal statistics, never results.
    """

    algorithm: str = "sigma"
    string_reordering: bool = True
    position_reordering: bool = True
    use_compressed: bool | None = None
    threads: int = 1
    quorum_prune: bool = True
    oracle_budget: int = 4 ** 8

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise BadParams(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "sigma":
            self.use_compressed = True
        if self.threads < 1:
            raise BadParams("threads must be >= 1")

    @property
    def compressed(self) -> bool:
        if self.use_compressed is None:
            return False
        return bool(self.use_compressed)


@dataclass
class SolveStats:
    """Traversal counters; visited counts nodes whose row state was built."""

    visited: int = 0
    trees: int = 0
    units: int = 0
    verified: int = 0
    wall_time: float = 0.0

    def merge(self, other: "SolveStats") -> None:
        self.visited += other.visited
        self.trees += other.trees
        self.units += other.units
        self.verified += other.verified


@dataclass
class SolveResult:
    motifs: MotifSet
    stats: SolveStats = field(default_factory=SolveStats)


class InstanceData:
    """Precomputed arrays for one instance, shared read-only."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.n = inst.n
        self.m = inst.m
        self.l = inst.l
        self.d = inst.d
        self.q = inst.q
        self.sigma = inst.alphabet.size
        self.W = inst.num_windows
        mat = inst.matrix
        self.flat = mat.reshape(-1)
        self.win_off = (
            np.arange(self.n, dtype=np.int64)[:, None] * self.m
            + np.arange(self.W, dtype=np.int64)[None, :]
        ).reshape(-1)
        self.win_own = np.repeat(np.arange(self.n, dtype=np.int16), self.W)
        swv = np.lib.stride_tricks.sliding_window_view(mat, self.l, axis=1)
        self.windows2d = np.ascontiguousarray(swv.reshape(self.n * self.W, self.l))
        self.bits, self.nwords = plane_shape(self.l, self.sigma)
        self.win_planes = pack_codes(self.windows2d, self.sigma)
        self._tables: OrderedDict[int, np.ndarray] = OrderedDict()
        self._table_cap = 2048

    def window_codes(self, widx: int) -> np.ndarray:
        return self.windows2d[widx]

    def dist_table(self, widx: int) -> np.ndarray:
        """Distances from window widx's l-mer to every window, cached."""
        table = self._tables.get(widx)
        if table is None:
            table = packed_distances(
                self.win_planes, self.win_planes[widx], self.bits, self.nwords
            )
            self._tables[widx] = table
            if len(self._tables) > self._table_cap:
                self._tables.popitem(last=False)
        else:
            self._tables.move_to_end(widx)
        return table

    def support_of(self, cand: np.ndarray) -> int:
        """Number of strings within distance d of the candidate."""
        packed = pack_codes(cand, self.sigma)
        dists = packed_distances(self.win_planes, packed, self.bits, self.nwords)
        mins = dists.reshape(self.n, self.W).min(axis=1)
        return int((mins <= self.d).sum())

    def support_many(self, cands: np.ndarray, chunk: int = 512) -> np.ndarray:
        """Support counts for a (C, l) candidate matrix."""
        out = np.empty(cands.shape[0], dtype=np.int64)
        for lo in range(0, cands.shape[0], chunk):
            block = pack_codes(cands[lo:lo + chunk], self.sigma)
            dists = packed_distances(
                self.win_planes[None, :, :], block[:, None, :], self.bits, self.nwords
            )
            mins = dists.reshape(block.shape[0], self.n, self.W).min(axis=2)
            out[lo:lo + chunk] = (mins <= self.d).sum(axis=1)
        return out


# Keyed by content so worker processes reuse warm tables across units
# even though every pickled task carries a fresh Instance object.
_data_cache: "OrderedDict[tuple, InstanceData]" = OrderedDict()
_DATA_CACHE_CAP = 4


def get_data(inst: Instance) -> InstanceData:
    key = (inst.l, inst.d, inst.q, inst.alphabet.symbols, inst.matrix.tobytes())
    data = _data_cache.get(key)
    if data is None:
        data = InstanceData(inst)
        _data_cache[key] = data
        if len(_data_cache) > _DATA_CACHE_CAP:
            _data_cache.popitem(last=False)
    else:
        _data_cache.move_to_end(key)
    return data


class _SearchContext:
    """State for one tree search: rows machinery plus emission sink."""

    __slots__ = (
        "data", "stats", "checked", "n", "l", "d", "q", "sigma", "need",
        "quorum_prune", "compressed", "root", "ref", "order",
        "root_planes",
    )

    def __init__(self, data: InstanceData, stats: SolveStats, checked: dict,
                 quorum_prune: bool, compressed: bool):
        self.data = data
        self.stats = stats
        self.checked = checked
        self.n = data.n
        self.l = data.l
        self.d = data.d
        self.q = data.q
        self.sigma = data.sigma
        self.quorum_prune = quorum_prune
        self.compressed = compressed
        self.root = None
        self.ref = None
        self.order = None
        self.root_planes = None

    def emit(self, cand: np.ndarray) -> None:
        key = cand.tobytes()
        if key in self.checked:
            return
        self.stats.verified += 1
        self.checked[key] = self.data.support_of(cand)


def _search(ctx: _SearchContext, ref_arr, own, dist, h, last_slot,
            dr, mixed, cand, planes) -> None:
    """Recursive node visit: stats, emission, then feasible children."""
    ctx.stats.visited += 1
    d = ctx.d
    need = ctx.need
    n = ctx.n
    if own.size:
        q2 = int(np.count_nonzero(np.bincount(own, minlength=n)))
    else:
        q2 = 0
    if q2 >= need and (ctx.ref is None or dr <= d):
        if own.size:
            close = dist <= d
            if close.any():
                qp = int(np.count_nonzero(np.bincount(own[close], minlength=n)))
            else:
                qp = 0
        else:
            qp = 0
        if qp >= need:
            ctx.emit(cand)
    if h == d:
        return
    if ctx.quorum_prune and q2 < need:
        return
    data = ctx.data
    root = ctx.root
    ref = ctx.ref
    order = ctx.order
    sigma = ctx.sigma
    child_thresh = 2 * d - (h + 1)
    feas_budget = 3 * d - (h + 1)
    compressed = ctx.compressed
    if compressed and own.size:
        node_planes = data.win_planes[ref_arr]
    else:
        node_planes = None
    start = 0 if last_slot is None else last_slot + 1
    for slot in range(start, ctx.l):
        p = order[slot]
        alpha = root[p]
        rp = ref[p] if ref is not None else -1
        if not compressed and own.size:
            chars = data.flat[ref_arr + p]
            inc = (chars == alpha).astype(np.int16)
        for beta in range(sigma):
            if beta == alpha:
                continue
            if ref is not None:
                ndr = dr + (1 if rp == alpha else 0) - (1 if rp == beta else 0)
                nmixed = mixed + (1 if rp == alpha else 0)
                if ndr > child_thresh or nmixed > feas_budget:
                    continue
            else:
                ndr = 0
                nmixed = 0
            if compressed:
                nplanes = planes.copy()
                flip = alpha ^ beta
                word = p // 32
                bit = np.uint32(1 << (p % 32))
                for b in range(data.bits):
                    if (flip >> b) & 1:
                        nplanes[b * data.nwords + word] ^= bit
                if own.size:
                    nd = packed_distances(node_planes, nplanes, data.bits, data.nwords)
                    keep = nd <= child_thresh
                else:
                    nd = dist
                    keep = None
            else:
                nplanes = None
                if own.size:
                    nd = dist + inc
                    nd = nd - (chars == beta)
                    keep = nd <= child_thresh
                else:
                    nd = dist
                    keep = None
            if keep is None or keep.all():
                cref, cown, cdist = ref_arr, own, nd
            else:
                cref = ref_arr[keep]
                cown = own[keep]
                cdist = nd[keep]
            cand[p] = beta
            _search(ctx, cref, cown, cdist, h + 1, slot, ndr, nmixed, cand, nplanes)
            cand[p] = alpha
    return


def _root_rows(ctx: _SearchContext, sel: np.ndarray, droot: np.ndarray):
    idx = np.nonzero(sel)[0]
    own = ctx.data.win_own[idx]
    dist = droot[idx].astype(np.int16, copy=True)
    if ctx.compressed:
        return idx, own, dist
    return ctx.data.win_off[idx], own, dist


def _run_prune_unit(data: InstanceData, opts: SolverOptions, w_lo: int, w_hi: int,
                    stats: SolveStats, checked: dict) -> None:
    n, q, d, W = data.n, data.q, data.d, data.W
    ctx = _SearchContext(data, stats, checked, opts.quorum_prune, opts.compressed)
    ctx.need = max(q - 1, 0)
    ctx.order = list(range(data.l))
    two_d = 2 * d
    for i1 in range(n - q + 1):
        own_ok = data.win_own != i1
        for w in range(w_lo, w_hi):
            widx = i1 * W + w
            droot = data.dist_table(widx)
            sel = own_ok & (droot <= two_d)
            ctx.root = data.window_codes(widx)
            ctx.ref = None
            cand = ctx.root.astype(np.uint8, copy=True)
            planes = pack_codes(cand, data.sigma) if ctx.compressed else None
            ref_arr, own, dist = _root_rows(ctx, sel, droot)
            stats.trees += 1
            _search(ctx, ref_arr, own, dist, 0, None, 0, 0, cand, planes)


def _second_string_plan(data: InstanceData, opts: SolverOptions, algo: str,
                        i1: int, droot: np.ndarray):
    """Yield (second string, quorum-check strings) pairs for one root."""
    n, q = data.n, data.q
    if algo == "qpms7":
        # Pairs (i1, i2) with i1 < i2: a motif's two lowest-index
        # supporting strings form such a pair, so one orientation per
        # pair is enough for completeness.
        for i2 in range(i1 + 1, n - q + 2):
            tail = [h for h in range(n) if h != i1 and h != i2]
            yield i2, tail
        return
    remaining = list(range(i1 + 1, n))
    if opts.string_reordering and remaining:
        mins = droot.reshape(n, data.W).min(axis=1)
        remaining.sort(key=lambda j: (-int(mins[j]), j))
    limit = n - i1 - q + 1
    for k in range(min(limit, len(remaining))):
        yield remaining[k], remaining[k + 1:]


def _run_pair_unit(data: InstanceData, opts: SolverOptions, algo: str,
                   w_lo: int, w_hi: int, stats: SolveStats, checked: dict) -> None:
    n, q, d, W, l = data.n, data.q, data.d, data.W, data.l
    ctx = _SearchContext(data, stats, checked, opts.quorum_prune, opts.compressed)
    ctx.need = max(q - 2, 0)
    two_d = 2 * d
    natural = list(range(l))
    first_bound = n - q + 1
    reorder_positions = opts.position_reordering and algo != "qpms7"
    for i1 in range(first_bound):
        for w in range(w_lo, w_hi):
            widx = i1 * W + w
            droot = data.dist_table(widx)
            droot_ok = droot <= two_d
            x0 = data.window_codes(widx)
            for i2, tail in _second_string_plan(data, opts, algo, i1, droot):
                tail_mask = np.zeros(n, dtype=bool)
                tail_mask[tail] = True
                own_ok = tail_mask[data.win_own]
                base_sel = droot_ok & own_ok
                refs = np.nonzero(droot_ok[i2 * W:(i2 + 1) * W])[0]
                for r in refs:
                    ridx = i2 * W + int(r)
                    dref = data.dist_table(ridx)
                    rcodes = data.window_codes(ridx)
                    sel = base_sel & (dref <= two_d)
                    ctx.root = x0
                    ctx.ref = rcodes
                    if reorder_positions:
                        ctx.order = PositionPermutation.differing_first(
                            tuple(x0), tuple(rcodes)
                        ).perm
                    else:
                        ctx.order = natural
                    cand = x0.astype(np.uint8, copy=True)
                    planes = pack_codes(cand, data.sigma) if ctx.compressed else None
                    ref_arr, own, dist = _root_rows(ctx, sel, droot)
                    dr0 = int(droot[ridx])
                    stats.trees += 1
                    _search(ctx, ref_arr, own, dist, 0, None, dr0, dr0, cand, planes)


def effective_tree_algorithm(inst: Instance, opts: SolverOptions) -> str:
    """Pair solvers need q >= 2; below that they run the single-root search."""
    algo = opts.algorithm
    if algo in ("qpms7", "traver", "sigma") and inst.q < 2:
        return "prune"
    return algo


def run_unit(inst: Instance, opts: SolverOptions, w_lo: int, w_hi: int):
    """Solve the root windows [w_lo, w_hi) and return (motifs, stats)."""
    data = get_data(inst)
    stats = SolveStats(units=1)
    checked: dict[bytes, int] = {}
    algo = effective_tree_algorithm(inst, opts)
    if algo == "prune":
        _run_prune_unit(data, opts, w_lo, w_hi, stats, checked)
    else:
        _run_pair_unit(data, opts, algo, w_lo, w_hi, stats, checked)
    motifs = {key: s for key, s in checked.items() if s >= inst.q}
    return motifs, stats


def solve_oracle_impl(inst: Instance, opts: SolverOptions) -> SolveResult:
    """Check every l-mer over the alphabet against the definition."""
    data = get_data(inst)
    sigma, l, q = data.sigma, data.l, data.q
    total = sigma ** l
    if total > opts.oracle_budget:
        raise BudgetExceeded(total, opts.oracle_budget, "pattern enumeration")
    idx = np.arange(total, dtype=np.int64)
    cands = np.empty((total, l), dtype=np.uint8)
    for j in range(l):
        cands[:, j] = (idx // (sigma ** (l - 1 - j))) % sigma
    supports = data.support_many(cands)
    hits = np.nonzero(supports >= q)[0]
    pairs = [
        (tuple(int(c) for c in cands[i]), int(supports[i])) for i in hits
    ]
    stats = SolveStats(visited=total, units=1, verified=total)
    return SolveResult(MotifSet.from_candidates(pairs, inst), stats)


def motifs_from_raw(raw: dict, inst: Instance) -> MotifSet:
    pairs = [
        (tuple(int(c) for c in np.frombuffer(key, dtype=np.uint8)), support)
        for key, support in raw.items()
    ]
    return MotifSet.from_candidates(pairs, inst)
