"""Synthetic planted-instance generation with recorded ground truth.

Instances follow the fixed-mutation model: i.i.d. uniform background
sequences, one motif drawn uniformly, and for each chosen sequence one
occurrence with exactly d positions mutated to different symbols,
planted at a uniform start. Generation is driven by a seeded PCG64
generator with a fixed call order, so a seed fully determines the FASTA
bytes and the ground-truth sidecar.

Sidecar format (1-based positions on this text surface):

    #motif <string> l=<l> d=<d> q=<q>
    seq=<i> pos=<p> inst=<string>
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParams
from .model import Alphabet, DNA, Instance, Lmer, Sequence, validate_instance

FASTA_WIDTH = 70


@dataclass(frozen=True)
class PlantedOccurrence:
    """One plant: 0-based sequence index and start, and the mutated l-mer."""

    seq_index: int
    start: int
    lmer: Lmer


@dataclass(frozen=True)
class PlantedInstance:
    instance: Instance
    motif: Lmer
    occurrences: tuple[PlantedOccurrence, ...]


def generate_fm(n: int, m: int, l: int, d: int, q: int,
                alphabet: Alphabet = DNA, seed: int = 0,
                random_plant_selection: bool = False) -> PlantedInstance:
    """Generate a planted instance; every plant is at distance exactly d.

    The q planted sequences are the first q unless
    random_plant_selection is set, in which case they are drawn without
    replacement (and planted in ascending index order either way).
    """
    if not (n >= 2 and 1 <= l <= m and 0 <= d <= l and 1 <= q <= n):
        raise BadParams(
            f"invalid FM parameters n={n}, m={m}, l={l}, d={d}, q={q}"
        )
    sigma = alphabet.size
    rng = np.random.default_rng(seed)
    background = rng.integers(0, sigma, size=(n, m), dtype=np.uint8)
    motif = rng.integers(0, sigma, size=l, dtype=np.uint8)
    if random_plant_selection:
        chosen = np.sort(rng.choice(n, size=q, replace=False))
    else:
        chosen = np.arange(q)
    occurrences = []
    for i in chosen:
        start = int(rng.integers(0, m - l + 1))
        mutated = motif.copy()
        if d > 0:
            positions = np.sort(rng.choice(l, size=d, replace=False))
            for p in positions:
                shift = int(rng.integers(1, sigma))
                mutated[p] = (int(mutated[p]) + shift) % sigma
        background[i, start:start + l] = mutated
        occurrences.append(
            PlantedOccurrence(int(i), start, Lmer(tuple(int(c) for c in mutated)))
        )
    seqs = [
        Sequence(tuple(int(c) for c in background[i]), id=f"seq{i}")
        for i in range(n)
    ]
    instance = validate_instance(seqs, l, d, q, alphabet)
    return PlantedInstance(instance, Lmer(tuple(int(c) for c in motif)),
                           tuple(occurrences))


def write_fasta(seqs, alphabet: Alphabet = DNA) -> bytes:
    """Render sequences as FASTA with 70-column line wrapping."""
    chunks = []
    for i, seq in enumerate(seqs):
        header = seq.id if seq.id is not None else f"seq{i}"
        chunks.append(f">{header}\n")
        text = alphabet.decode(seq.codes)
        for off in range(0, len(text), FASTA_WIDTH):
            chunks.append(text[off:off + FASTA_WIDTH] + "\n")
    return "".join(chunks).encode("ascii")


def write_ground_truth(planted: PlantedInstance) -> bytes:
    """Machine-parseable sidecar: the motif line, then one line per plant."""
    inst = planted.instance
    alphabet = inst.alphabet
    lines = [
        f"#motif {planted.motif.to_text(alphabet)} l={inst.l} d={inst.d} q={inst.q}"
    ]
    for occ in planted.occurrences:
        lines.append(
            f"seq={occ.seq_index + 1} pos={occ.start + 1} "
            f"inst={occ.lmer.to_text(alphabet)}"
        )
    return ("\n".join(lines) + "\n").encode("ascii")


@dataclass(frozen=True)
class GroundTruth:
    """Parsed sidecar: motif text plus (seq_index, start, lmer_text) plants,
    0-based again."""

    motif: str
    l: int
    d: int
    q: int
    plants: tuple[tuple[int, int, str], ...]


def parse_ground_truth(data: bytes | str) -> GroundTruth:
    text = data.decode("ascii") if isinstance(data, bytes) else data
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#motif "):
        raise BadParams("ground truth must start with a '#motif' line")
    head = lines[0].split()
    motif = head[1]
    fields = dict(part.split("=", 1) for part in head[2:])
    plants = []
    for line in lines[1:]:
        entries = dict(part.split("=", 1) for part in line.split())
        plants.append(
            (int(entries["seq"]) - 1, int(entries["pos"]) - 1, entries["inst"])
        )
    return GroundTruth(motif, int(fields["l"]), int(fields["d"]),
                       int(fields["q"]), tuple(plants))
