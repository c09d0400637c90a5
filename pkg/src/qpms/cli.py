"""Command-line interface: solve, generate, bench and score.

Exit codes: 0 success, 2 invalid parameters or malformed input,
3 enumeration budget exceeded. Motif listings go to stdout as
'MOTIF<TAB>support' lines in lexicographic order; --json switches to a
versioned report document. Benchmark cells run in child processes so a
timeout can stop a search cleanly.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import sys
import time

from . import __version__
from ._engine import SolverOptions, TREE_ALGORITHMS
from .consensus import (
    StartVector,
    alignment_matrix,
    best_starts,
    consensus_score,
    consensus_string,
    profile_matrix,
)
from .datagen import generate_fm, parse_ground_truth, write_fasta, write_ground_truth
from .errors import (
    BadParams,
    BudgetExceeded,
    LengthMismatch,
    MalformedFasta,
    QpmsError,
    UnknownSymbol,
)
from .model import DNA, PROTEIN, parse_fasta, validate_instance
from .scheduler import DEFAULT_CHUNK
from .solvers import run_solver

REPORT_SCHEMA = 1
MOTIF_LIST_LIMIT = 1000
CHALLENGING = ((13, 4), (15, 5), (17, 6), (19, 7), (21, 8), (23, 9))

_INPUT_ERRORS = (BadParams, UnknownSymbol, MalformedFasta, LengthMismatch)

_ALPHABETS = {"dna": DNA, "protein": PROTEIN}


def _alphabet(name: str):
    return _ALPHABETS[name]


def _load_instance(args):
    with open(args.fasta, "rb") as fh:
        seqs = parse_fasta(fh.read(), _alphabet(args.alphabet))
    return validate_instance(seqs, args.l, args.d, args.q, _alphabet(args.alphabet))


def _solver_options(args) -> SolverOptions:
    return SolverOptions(
        algorithm=args.algo,
        string_reordering=not args.no_string_reorder,
        position_reordering=not args.no_pos_reorder,
        threads=args.threads,
    )


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    opts = _solver_options(args)
    result = run_solver(inst, opts, chunk=args.chunk)
    motifs = result.motifs
    report = {
        "schema": REPORT_SCHEMA,
        "command": "solve",
        "params": {
            "n": inst.n, "m": inst.m, "l": inst.l, "d": inst.d, "q": inst.q,
            "alphabet": args.alphabet,
        },
        "algorithm": args.algo,
        "threads": args.threads,
        "wall_time_s": round(result.stats.wall_time, 6),
        "visited_nodes": result.stats.visited,
        "motif_count": len(motifs),
    }
    if len(motifs) <= MOTIF_LIST_LIMIT:
        report["motifs"] = [
            {"motif": m.to_text(inst.alphabet), "support": support}
            for m, support in motifs.entries
        ]
        report["motifs_elided"] = False
    else:
        report["motifs_elided"] = True
    if args.truth:
        with open(args.truth, "rb") as fh:
            truth = parse_ground_truth(fh.read())
        report["recovered"] = truth.motif in motifs
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        sys.stdout.write(motifs.to_text())
    return 0


def cmd_generate(args) -> int:
    planted = generate_fm(
        args.n, args.m, args.l, args.d, args.q,
        alphabet=_alphabet(args.alphabet), seed=args.seed,
        random_plant_selection=args.random_plants,
    )
    fasta_path = args.out + ".fasta"
    truth_path = args.out + ".truth"
    with open(fasta_path, "wb") as fh:
        fh.write(write_fasta(planted.instance.sequences, planted.instance.alphabet))
    with open(truth_path, "wb") as fh:
        fh.write(write_ground_truth(planted))
    print(f"wrote {fasta_path} and {truth_path}", file=sys.stderr)
    return 0


def _bench_cell(conn, n, m, l, d, q, seed, algo, threads) -> None:
    planted = generate_fm(n, m, l, d, q, seed=seed)
    opts = SolverOptions(algorithm=algo, threads=threads)
    started = time.perf_counter()
    result = run_solver(planted.instance, opts)
    conn.send({
        "wall_time_s": round(time.perf_counter() - started, 3),
        "visited_nodes": result.stats.visited,
        "motif_count": len(result.motifs),
        "recovered": planted.motif.codes in [m.codes for m in result.motifs.motifs()],
    })
    conn.close()


def cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for algo in algos:
        if algo not in TREE_ALGORITHMS:
            raise BadParams(f"bench supports {TREE_ALGORITHMS}, got {algo!r}")
    seeds = [int(s) for s in args.seeds.split(",")]
    ctx = mp.get_context("fork" if "fork" in mp.get_all_start_methods() else "spawn")
    rows = []
    for l, d in CHALLENGING:
        for algo in algos:
            for seed in seeds:
                row = {
                    "schema": REPORT_SCHEMA, "suite": args.suite,
                    "n": args.n, "m": args.m, "l": l, "d": d, "q": args.q,
                    "algo": algo, "seed": seed, "threads": args.threads,
                }
                parent, child = ctx.Pipe(duplex=False)
                proc = ctx.Process(
                    target=_bench_cell,
                    args=(child, args.n, args.m, l, d, args.q, seed, algo,
                          args.threads),
                )
                proc.start()
                child.close()
                proc.join(args.timeout)
                if proc.is_alive():
                    proc.terminate()
                    proc.join()
                    row["status"] = "TIMEOUT"
                    row["wall_time_s"] = args.timeout
                else:
                    row.update(parent.recv())
                    row["status"] = "ok"
                parent.close()
                rows.append(row)
    if args.json:
        for row in rows:
            print(json.dumps(row))
    else:
        _print_bench_table(rows)
    return 0


def _print_bench_table(rows) -> None:
    headers = ["l", "d", "algo", "seed", "status", "time_s", "nodes",
               "motifs", "recovered"]
    table = [headers]
    for row in rows:
        table.append([
            str(row["l"]), str(row["d"]), row["algo"], str(row["seed"]),
            row["status"], str(row.get("wall_time_s", "")),
            str(row.get("visited_nodes", "")), str(row.get("motif_count", "")),
            str(row.get("recovered", "")),
        ])
    widths = [max(len(line[i]) for line in table) for i in range(len(headers))]
    for line in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())


def cmd_score(args) -> int:
    alphabet = _alphabet(args.alphabet)
    with open(args.fasta, "rb") as fh:
        seqs = parse_fasta(fh.read(), alphabet)
    if not seqs:
        raise BadParams("no sequences in FASTA input")
    if args.starts:
        starts = StartVector(tuple(int(s) for s in args.starts.split(",")))
        score_starts = starts
    else:
        score_starts, _ = best_starts(seqs, args.l, budget=args.budget,
                                      alphabet=alphabet)
    align = alignment_matrix(seqs, score_starts, args.l)
    profile = profile_matrix(align, alphabet.size)
    consensus = consensus_string(profile)
    print("starts: " + ",".join(str(s) for s in score_starts.starts))
    print("alignment:")
    for i, row in enumerate(align):
        print(f"  {seqs[i].id or f'seq{i}'}\t{alphabet.decode(row)}")
    print("profile:")
    for code, counts in enumerate(profile.counts):
        print(f"  {alphabet.symbols[code]}\t" + " ".join(str(c) for c in counts))
    print(f"consensus: {consensus.to_text(alphabet)}")
    print(f"score: {consensus_score(profile)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpms",
        description="Exact quorum planted motif search toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="find all (l,d,q)-motifs of a FASTA file")
    solve.add_argument("--fasta", required=True)
    solve.add_argument("--l", type=int, required=True)
    solve.add_argument("--d", type=int, required=True)
    solve.add_argument("--q", type=int, required=True)
    solve.add_argument("--algo", default="sigma",
                       choices=["oracle", "prune", "qpms7", "traver", "sigma"])
    solve.add_argument("--threads", type=int, default=1)
    solve.add_argument("--chunk", type=int, default=DEFAULT_CHUNK,
                       help="root windows per work unit (1 = one unit per window)")
    solve.add_argument("--no-string-reorder", action="store_true")
    solve.add_argument("--no-pos-reorder", action="store_true")
    solve.add_argument("--truth", help="ground-truth sidecar to check recovery")
    solve.add_argument("--json", action="store_true")
    solve.add_argument("--alphabet", default="dna", choices=sorted(_ALPHABETS))
    solve.set_defaults(func=cmd_solve)

    gen = sub.add_parser("generate", help="generate a planted instance")
    gen.add_argument("--n", type=int, default=20)
    gen.add_argument("--m", type=int, default=600)
    gen.add_argument("--l", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--q", type=int, default=20)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, metavar="PREFIX")
    gen.add_argument("--alphabet", default="dna", choices=sorted(_ALPHABETS))
    gen.add_argument("--random-plants", action="store_true",
                     help="choose planted sequences randomly instead of the first q")
    gen.set_defaults(func=cmd_generate)

    bench = sub.add_parser("bench", help="run the challenging-instance suite")
    bench.add_argument("--suite", default="challenging", choices=["challenging"])
    bench.add_argument("--q", type=int, default=20, choices=[10, 20])
    bench.add_argument("--algos", default="sigma",
                       help="comma-separated algorithm list")
    bench.add_argument("--timeout", type=float, default=None,
                       help="seconds per cell before recording TIMEOUT")
    bench.add_argument("--seeds", default="1", help="comma-separated seed list")
    bench.add_argument("--n", type=int, default=20)
    bench.add_argument("--m", type=int, default=600)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--json", action="store_true",
                       help="emit one JSON row per cell instead of a table")
    bench.set_defaults(func=cmd_bench)

    score = sub.add_parser("score", help="consensus scoring of start positions")
    score.add_argument("--fasta", required=True)
    score.add_argument("--l", type=int, required=True)
    score.add_argument("--starts", help="comma-separated 1-based start positions")
    score.add_argument("--budget", type=int, default=1_000_000)
    score.add_argument("--alphabet", default="dna", choices=sorted(_ALPHABETS))
    score.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QpmsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
