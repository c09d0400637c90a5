"""Deterministic parallel scheduling of solver work units.

A solve is decomposed along the root-window axis: the searches rooted at
window index w form one subproblem, and consecutive indices are grouped
into chunks (chunk=1 keeps one unit per window). Units go to a worker
pool as independent tasks; each returns a partial motif dictionary and
its counters. The merge is a set union followed by the canonical sort,
so the result is identical for any worker count and any completion
order. Workers are separate processes, which is what makes the thread
count effective for this CPU-bound search under CPython.
"""

from __future__ import annotations

import atexit
import multiprocessing as mp
import time

from . import _engine
from ._engine import SolveResult, SolveStats, SolverOptions
from .errors import BadParams
from .model import Instance

DEFAULT_CHUNK = 8

_pools: dict[int, mp.pool.Pool] = {}


def _shutdown_pools():
    for pool in _pools.values():
        pool.terminate()
    _pools.clear()


atexit.register(_shutdown_pools)


def _get_pool(workers: int) -> mp.pool.Pool:
    pool = _pools.get(workers)
    if pool is None:
        methods = mp.get_all_start_methods()
        ctx = mp.get_context("fork" if "fork" in methods else "spawn")
        pool = ctx.Pool(processes=workers)
        _pools[workers] = pool
    return pool


def make_units(num_windows: int, chunk: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    """Split the root-window range into [lo, hi) chunks."""
    if chunk < 1:
        raise BadParams("chunk must be >= 1")
    return [
        (lo, min(lo + chunk, num_windows)) for lo in range(0, num_windows, chunk)
    ]


def schedule(inst: Instance, opts: SolverOptions, *,
             chunk: int = DEFAULT_CHUNK) -> SolveResult:
    """Run a solver over work units and merge into one canonical result."""
    start = time.perf_counter()
    if opts.algorithm == "oracle":
        result = _engine.solve_oracle_impl(inst, opts)
        result.stats.wall_time = time.perf_counter() - start
        return result
    units = make_units(inst.num_windows, chunk)
    stats = SolveStats()
    raw: dict[bytes, int] = {}
    if opts.threads == 1 or len(units) == 1:
        for lo, hi in units:
            part, part_stats = _engine.run_unit(inst, opts, lo, hi)
            raw.update(part)
            stats.merge(part_stats)
    else:
        pool = _get_pool(opts.threads)
        payloads = [(inst, opts, lo, hi) for lo, hi in units]
        for part, part_stats in pool.starmap(_engine.run_unit, payloads):
            raw.update(part)
            stats.merge(part_stats)
    stats.units = len(units)
    stats.wall_time = time.perf_counter() - start
    return SolveResult(_engine.motifs_from_raw(raw, inst), stats)
