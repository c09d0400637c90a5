"""Exact solvers for the quorum planted motif search problem.

Given n equal-length strings and parameters (l, d, q), find every
l-length string whose Hamming distance to at least q of the inputs is at
most d. The package provides interchangeable exact solvers, bit-plane
compressed distance kernels, planted-instance generation, consensus
scoring and a benchmark CLI.
"""

__version__ = "0.1.0"

from .errors import (
    BadParams,
    BadStart,
    BudgetExceeded,
    LengthMismatch,
    MalformedFasta,
    QpmsError,
    UnknownSymbol,
)
from .model import (
    BINARY,
    DNA,
    PROTEIN,
    Alphabet,
    Instance,
    Lmer,
    MotifSet,
    Sequence,
    encode_sequence,
    parse_fasta,
    validate_instance,
)
from .solvers import (
    ALGORITHMS,
    SolveResult,
    SolverOptions,
    SolveStats,
    run_solver,
    solve_oracle,
    solve_qpms7,
    solve_qpmsprune,
    solve_sigma,
    solve_subset_then_verify,
    solve_traver,
    verify_motif,
)

__all__ = [
    "ALGORITHMS",
    "Alphabet",
    "BadParams",
    "BadStart",
    "BINARY",
    "BudgetExceeded",
    "DNA",
    "Instance",
    "LengthMismatch",
    "Lmer",
    "MalformedFasta",
    "MotifSet",
    "PROTEIN",
    "QpmsError",
    "Sequence",
    "SolveResult",
    "SolverOptions",
    "SolveStats",
    "UnknownSymbol",
    "encode_sequence",
    "parse_fasta",
    "run_solver",
    "solve_oracle",
    "solve_qpms7",
    "solve_qpmsprune",
    "solve_sigma",
    "solve_subset_then_verify",
    "solve_traver",
    "validate_instance",
    "verify_motif",
]
