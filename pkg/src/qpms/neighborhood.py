"""Hamming-ball machinery: sizes, enumeration, duplicate-free tree
traversal, position equality classes and the three-ball feasibility test.

The traversal tree rooted at x has the members of the radius-d ball as
nodes, each exactly once: a node at level h differs from x in exactly h
positions, and children modify one position strictly greater than the
last changed one (positions ascending, replacement symbols in code
order). Traversal is depth-first under a visitor that may descend into,
prune, or abort at every node.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import comb

from .errors import BadParams, LengthMismatch
from .model import Lmer


class Action(enum.Enum):
    DESCEND = "descend"
    PRUNE = "prune"
    ABORT = "abort"


@dataclass(frozen=True)
class NeighborhoodNode:
    """One traversal node: candidate, its level, and the last changed slot.

    `last_changed` is the index into the traversal position order (None
    at the root); children only modify later slots.
    """

    candidate: Lmer
    level: int
    last_changed: int | None


def ball_size(l: int, d: int, sigma: int) -> int:
    """Number of l-length strings within distance d of a fixed string.

    Counts sum(i=0..d) C(l,i) * (sigma-1)^i with exact integer
    arithmetic, so there is no overflow for any practical input.
    """
    if not 0 <= d <= l:
        raise BadParams(f"need 0 <= d <= l, got d={d}, l={l}")
    if sigma < 2:
        raise BadParams(f"need sigma >= 2, got {sigma}")
    return sum(comb(l, i) * (sigma - 1) ** i for i in range(d + 1))


def ball_enumerate(x, radius: int, sigma: int) -> set[Lmer]:
    """All l-mers within `radius` of x, enumerated directly.

    Independent of traverse_tree: picks every subset of up to `radius`
    positions and every assignment of replacement symbols.
    """
    codes = x.codes if isinstance(x, Lmer) else tuple(x)
    l = len(codes)
    if not 0 <= radius <= l:
        raise BadParams(f"need 0 <= radius <= l, got {radius}")
    out = {Lmer(codes)}
    for k in range(1, radius + 1):
        for positions in itertools.combinations(range(l), k):
            alternatives = [
                [c for c in range(sigma) if c != codes[p]] for p in positions
            ]
            for replacement in itertools.product(*alternatives):
                mutated = list(codes)
                for p, c in zip(positions, replacement):
                    mutated[p] = c
                out.add(Lmer(tuple(mutated)))
    return out


def traverse_tree(x, d: int, sigma: int, visit, *,
                  position_order=None, on_leave=None) -> None:
    """Depth-first traversal of the radius-d ball around x.

    `visit(node)` is called once per ball member (the root first) and
    returns an Action: DESCEND (or None) explores the children, PRUNE
    skips the subtree, ABORT stops the whole traversal. `on_leave(node)`,
    when given, runs after a descended node's subtree completes, so
    visitors can keep a stack in step with the walk.

    `position_order` permutes the order in which positions become
    eligible for modification; it changes the tree shape but not the set
    of visited candidates.
    """
    codes = list(x.codes if isinstance(x, Lmer) else x)
    l = len(codes)
    if position_order is None:
        order = range(l)
    else:
        order = list(position_order)
        if sorted(order) != list(range(l)):
            raise BadParams("position_order must be a permutation of range(l)")
    order = list(order)

    def walk(node: NeighborhoodNode) -> bool:
        action = visit(node)
        if action is Action.ABORT:
            return False
        if action is Action.PRUNE or node.level == d:
            return True
        first_slot = 0 if node.last_changed is None else node.last_changed + 1
        for slot in range(first_slot, l):
            p = order[slot]
            original = codes[p]
            for symbol in range(sigma):
                if symbol == original:
                    continue
                codes[p] = symbol
                child = NeighborhoodNode(Lmer(tuple(codes)), node.level + 1, slot)
                alive = walk(child)
                if on_leave is not None:
                    on_leave(child)
                if not alive:
                    codes[p] = original
                    return False
            codes[p] = original
        return True

    walk(NeighborhoodNode(Lmer(tuple(codes)), 0, None))


@dataclass(frozen=True)
class PositionClasses:
    """Partition of positions of a string triple (a, b, c) by equality.

    all_equal: a=b=c; ab_equal: a=b!=c; ac_equal: a=c!=b;
    bc_equal: b=c!=a; none_equal: pairwise distinct. The five tuples
    partition range(l).
    """

    all_equal: tuple[int, ...]
    ab_equal: tuple[int, ...]
    ac_equal: tuple[int, ...]
    bc_equal: tuple[int, ...]
    none_equal: tuple[int, ...]

    @property
    def mixed_count(self) -> int:
        """Number of positions where the three symbols are not all equal."""
        return (len(self.ab_equal) + len(self.ac_equal)
                + len(self.bc_equal) + len(self.none_equal))


def position_classes(a, b, c) -> PositionClasses:
    """Classify each position of the triple by its equality pattern."""
    ca = a.codes if isinstance(a, Lmer) else tuple(a)
    cb = b.codes if isinstance(b, Lmer) else tuple(b)
    cc = c.codes if isinstance(c, Lmer) else tuple(c)
    if not len(ca) == len(cb) == len(cc):
        raise LengthMismatch("triple must have equal lengths")
    groups: dict[str, list[int]] = {
        "all": [], "ab": [], "ac": [], "bc": [], "none": [],
    }
    for j, (x, y, z) in enumerate(zip(ca, cb, cc)):
        if x == y == z:
            groups["all"].append(j)
        elif x == y:
            groups["ab"].append(j)
        elif x == z:
            groups["ac"].append(j)
        elif y == z:
            groups["bc"].append(j)
        else:
            groups["none"].append(j)
    return PositionClasses(
        tuple(groups["all"]), tuple(groups["ab"]), tuple(groups["ac"]),
        tuple(groups["bc"]), tuple(groups["none"]),
    )


def balls_intersect(a, d_a: int, b, d_b: int, c, d_c: int) -> bool:
    """Whether the three Hamming balls B(a,d_a), B(b,d_b), B(c,d_c) meet.

    Exact characterization: all radii nonnegative, each pair of radii
    covers the pairwise distance, and the radius total covers every
    position where the three strings are not all equal, where a position
    with three pairwise-distinct symbols costs two units (any string
    mismatches at least two of the centers there). The cheap pairwise
    conditions are checked before the position-class count.
    """
    ca = a.codes if isinstance(a, Lmer) else tuple(a)
    cb = b.codes if isinstance(b, Lmer) else tuple(b)
    cc = c.codes if isinstance(c, Lmer) else tuple(c)
    if not len(ca) == len(cb) == len(cc):
        raise LengthMismatch("triple must have equal lengths")
    if d_a < 0 or d_b < 0 or d_c < 0:
        return False
    d_ab = sum(1 for x, y in zip(ca, cb) if x != y)
    if d_a + d_b < d_ab:
        return False
    d_bc = sum(1 for x, y in zip(cb, cc) if x != y)
    if d_b + d_c < d_bc:
        return False
    d_ca = sum(1 for x, y in zip(cc, ca) if x != y)
    if d_c + d_a < d_ca:
        return False
    cost = 0
    for x, y, z in zip(ca, cb, cc):
        if x == y == z:
            continue
        cost += 1 if (x == y or y == z or z == x) else 2
    return d_a + d_b + d_c >= cost


@dataclass(frozen=True)
class PositionPermutation:
    """A bijection on positions, stored as the image tuple perm[j]."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise BadParams("perm must be a permutation of range(l)")

    def __len__(self) -> int:
        return len(self.perm)

    def inverse(self) -> "PositionPermutation":
        inv = [0] * len(self.perm)
        for j, p in enumerate(self.perm):
            inv[p] = j
        return PositionPermutation(tuple(inv))

    @classmethod
    def differing_first(cls, a, b) -> "PositionPermutation":
        """Positions where a and b differ first, then the equal ones,
        each group in ascending position order."""
        ca = a.codes if isinstance(a, Lmer) else tuple(a)
        cb = b.codes if isinstance(b, Lmer) else tuple(b)
        if len(ca) != len(cb):
            raise LengthMismatch("pair must have equal lengths")
        diff = [j for j in range(len(ca)) if ca[j] != cb[j]]
        same = [j for j in range(len(ca)) if ca[j] == cb[j]]
        return cls(tuple(diff + same))


def select_positions(x, positions) -> Lmer:
    """The subsequence of x read at the given positions, in that order."""
    codes = x.codes if isinstance(x, Lmer) else tuple(x)
    try:
        return Lmer(tuple(codes[p] for p in positions))
    except IndexError:
        raise BadParams("position out of range") from None


def reorder_positions(x, perm: PositionPermutation) -> Lmer:
    """Rewrite x so that output position j holds x[perm[j]]."""
    codes = x.codes if isinstance(x, Lmer) else tuple(x)
    if len(perm) != len(codes):
        raise LengthMismatch("permutation length must equal l-mer length")
    return Lmer(tuple(codes[p] for p in perm.perm))


def inverse_reorder(y, perm: PositionPermutation) -> Lmer:
    """Undo reorder_positions: recover x from y = reorder_positions(x, perm)."""
    codes = y.codes if isinstance(y, Lmer) else tuple(y)
    if len(perm) != len(codes):
        raise LengthMismatch("permutation length must equal l-mer length")
    out = [0] * len(codes)
    for j, p in enumerate(perm.perm):
        out[p] = codes[j]
    return Lmer(tuple(out))
