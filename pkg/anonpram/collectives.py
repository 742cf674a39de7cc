"""
collectives.py

Program fragments for the PRAM collectives the naming algorithms rely on:
counting occupied bins, ranking bins or (bin, counter) positions, and a
constant-time global OR.  Each fragment is a generator meant to be driven with
``yield from`` inside a processor program; every processor of the execution
must enter a fragment in the same round and leaves it in the same round.

Trees use heap numbering over a region of 2P cells, P = 2**ceil(lg m): node 1 is
the root, node j has children 2j and 2j+1, and leaf i (bins are 1-based) sits at
node P + i - 1.  Leaves beyond m are permanently empty.
"""

from dataclasses import dataclass
from typing import Generator, Optional, Tuple

from .machine import ProcessorContext
from .math_utils import ceil_lg
from .memory import Idle, Read, Write

GLOBAL_OR_ROUNDS = 3


@dataclass(frozen=True, order=True)
class Position:
    """A (bin, counter) pair; lexicographic order ranks positions."""

    bin: int
    counter: int


@dataclass(frozen=True)
class TreeLayout:
    m: int
    base: int

    @staticmethod
    def region_size(m: int) -> int:
        return 2 << ceil_lg(m)

    @classmethod
    def allocate(cls, ctx: ProcessorContext, m: int) -> "TreeLayout":
        """Fresh zeroed tree over m leaves, from the common allocation sequence."""
        return cls(m, ctx.allocate(cls.region_size(m)))

    @property
    def leaves(self) -> int:
        return 1 << ceil_lg(self.m)

    @property
    def depth(self) -> int:
        return ceil_lg(self.m)

    @property
    def root(self) -> int:
        return self.base + 1

    def node_addr(self, node: int) -> int:
        return self.base + node

    def leaf_node(self, i: int) -> int:
        if not 1 <= i <= self.m:
            raise ValueError(f"leaf {i} outside [1, {self.m}]")
        return self.leaves + i - 1

    def leaf_addr(self, i: int) -> int:
        return self.base + self.leaf_node(i)

    @property
    def sweep_rounds(self) -> int:
        """Rounds spent by count_occupied / compute_ranks on this tree."""
        return 2 * self.depth + 2


def _sweep(
    layout: TreeLayout,
    bin_index: Optional[int],
    leaf_value: Optional[int],
) -> Generator[object, Optional[int], Tuple[int, int]]:
    """Climb from ``bin_index``'s leaf to the root, then read the root.

    ``leaf_value`` set means write it to the leaf first; None means the leaf
    already holds the value and is read.  Returns (exclusive prefix, total).
    Non-participants (``bin_index`` None) idle through the climb and return
    (0, total).
    """
    depth = layout.depth
    if bin_index is None:
        yield Idle(1 + 2 * depth)
        total = yield Read(layout.root)
        return 0, total

    node = layout.leaf_node(bin_index)
    if leaf_value is None:
        own = yield Read(layout.node_addr(node))
    else:
        own = leaf_value
        yield Write(layout.node_addr(node), leaf_value)
    prefix = 0
    for _ in range(depth):
        sibling = yield Read(layout.node_addr(node ^ 1))
        if node & 1:
            prefix += sibling
        own += sibling
        node >>= 1
        yield Write(layout.node_addr(node), own)
    total = yield Read(layout.root)
    return prefix, total


def count_occupied(
    ctx: ProcessorContext,
    layout: TreeLayout,
    bin_index: Optional[int],
) -> Generator[object, Optional[int], int]:
    """Number of distinct occupied bins; every processor learns it.

    Participants pass the bin they occupy, others pass None.  Processors sharing
    a bin write identical values at every node.
    """
    _, total = yield from _sweep(layout, bin_index, 1)
    return total


def compute_ranks(
    ctx: ProcessorContext,
    layout: TreeLayout,
    bin_index: Optional[int],
    counter: Optional[int] = None,
) -> Generator[object, Optional[int], Tuple[Optional[int], int]]:
    """Rank of the caller's anchor among all anchors, plus their total.

    Without ``counter`` the anchors are occupied bins: rank = number of occupied
    bins <= bin.  With ``counter`` the anchor is the position (bin, counter) and
    the leaves must already hold the per-bin counter sums; rank = sum of
    counters of lower bins + counter, total = sum of all counters.
    Non-participants get (None, total).
    """
    if counter is None:
        prefix, total = yield from _sweep(layout, bin_index, 1)
        rank = None if bin_index is None else prefix + 1
    else:
        prefix, total = yield from _sweep(layout, bin_index, None)
        rank = None if bin_index is None else prefix + counter
    return rank, total


def global_or(
    ctx: ProcessorContext,
    scratch: int,
    flag: bool,
) -> Generator[object, Optional[int], bool]:
    """Every processor learns whether any processor raised its flag.

    The scratch cell must hold 0 on entry and holds 0 again on exit.
    """
    if flag:
        yield Write(scratch, 1)
        seen = yield Read(scratch)
        yield Write(scratch, 0)
        return bool(seen)
    yield Idle(1)
    seen = yield Read(scratch)
    yield Idle(1)
    return bool(seen)


def rank_probe(ctx: ProcessorContext, m: int) -> Generator[object, Optional[int], Tuple[int, int, int, int]]:
    """Program: pick a bin in [1, m], count the occupied bins, then rank the caller's bin.

    Returns (bin, occupied, rank, total).
    """
    counting = TreeLayout.allocate(ctx, m)
    ranking = TreeLayout.allocate(ctx, m)
    my_bin = ctx.draw_uniform(m)
    occupied = yield from count_occupied(ctx, counting, my_bin)
    rank, total = yield from compute_ranks(ctx, ranking, my_bin)
    return my_bin, occupied, rank, total


def position_rank_probe(
    ctx: ProcessorContext,
    m: int,
    max_counter: int,
) -> Generator[object, Optional[int], Tuple[Position, int, int]]:
    """Program: hold a position (bin, counter) and rank it among all positions.

    Each processor draws its bin and counter, then one coin saying whether it
    holds the largest counter of its bin; that processor seeds the bin's leaf.
    Returns (position, rank, total).
    """
    tree = TreeLayout.allocate(ctx, m)
    my_bin = ctx.draw_uniform(m)
    counter = ctx.draw_uniform(max_counter)
    if ctx.coin():
        yield Write(tree.leaf_addr(my_bin), counter)
    else:
        yield Idle(1)
    rank, total = yield from compute_ranks(ctx, tree, my_bin, counter)
    return Position(my_bin, counter), rank, total
