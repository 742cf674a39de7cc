"""
monte_carlo.py

Naming algorithms for an unknown number of processors.  They may hand two
processors the same name, with probability that vanishes as n grows; names are
always contiguous from 1.  Program bodies take ``(ctx, beta)`` or
``(ctx, beta, growth)`` and never see n.

Also home of the size-estimation subroutines and their stand-alone probes.
"""

import math
from dataclasses import dataclass
from typing import Generator, Optional, Tuple

from .collectives import Position, TreeLayout, compute_ranks, count_occupied, global_or
from .machine import ProcessorContext
from .math_utils import beta_lg, ceil_lg, ceil_positive, power_within
from .memory import Idle, Read, Write
from .models import GrowthFunction, SizeEstimate
from .primitives import VERIFY_ROUNDS, CollisionCells, verify_collision

ProgramGen = Generator[object, Optional[int], int]

_PAD_CLAIM_ROUNDS = 6
_FIRST_ESTIMATE_K = 3


def arbitrary_bounded_mc(ctx: ProcessorContext, beta: float) -> ProgramGen:
    """Sequential Pad claiming over ranges that square each iteration, Arbitrary PRAM.

    Iteration j draws values from [1, 2**k] with k doubling from 2, and claims
    names through one Pad cell until every processor is named.  The number of
    names given out equals the number of distinct values drawn; the run stops
    once that is at most 2**(k / beta), which happens after at most
    lg(beta lg n) + O(1) iterations.  Equal values share a name.
    """
    region = ctx.allocate(3)
    pad, last_name, all_named = region, region + 1, region + 2
    k = 1
    while True:
        ctx.count_iteration()
        k *= 2
        yield Write(last_name, 0)
        name = 0
        value = ctx.draw_uniform(1 << k)
        while True:
            yield Write(all_named, 1)
            if not name:
                yield Write(pad, value)
                seen = yield Read(pad)
                if seen == value:
                    claimed = yield Read(last_name)
                    name = claimed + 1
                    yield Write(last_name, name)
                else:
                    yield Write(all_named, 0)
                    yield Idle(1)
            else:
                yield Idle(_PAD_CLAIM_ROUNDS - 2)
            done = yield Read(all_named)
            if done:
                break
        assigned = yield Read(last_name)
        if power_within(assigned, beta, k):
            return name


def arbitrary_unbounded_mc(
    ctx: ProcessorContext,
    beta: float,
    growth: GrowthFunction = GrowthFunction.DOUBLING,
) -> ProgramGen:
    """Labelled bins sized by a growing k, Arbitrary PRAM; always terminates.

    In iteration k processors pick one of ceil(2**k / (beta k)) bins and a label
    of ceil(beta k) bits, then spend ceil(beta k) passes claiming positions
    (bin, counter) one surviving label per bin per pass.  Once no processor is
    left without a position the names are the position ranks.  k is advanced by
    ``growth`` from 1 before every iteration, so the first one runs at growth(1).
    """
    all_named = ctx.allocate(1)
    k = 1
    while True:
        ctx.count_iteration()
        k = growth.apply(k)
        bins, passes = labelled_bin_stage(k, beta)
        tree = TreeLayout.allocate(ctx, bins)
        pads = ctx.allocate(bins)
        my_bin = ctx.draw_uniform(bins)
        label = ctx.draw_uniform(1 << passes)
        leaf = tree.leaf_addr(my_bin)
        pad = pads + my_bin - 1
        position: Optional[Position] = None
        yield Write(all_named, 1)
        for step in range(passes):
            if position is not None:
                yield Idle(4 * (passes - step))
                break
            yield Write(pad, label)
            seen = yield Read(pad)
            if seen == label:
                count = yield Read(leaf)
                yield Write(leaf, count + 1)
                position = Position(my_bin, count + 1)
                ctx.observe("max_bin_load", count + 1)
            else:
                yield Idle(2)
        if position is None:
            yield Write(all_named, 0)
        else:
            yield Idle(1)
        done = yield Read(all_named)
        if done:
            name, _ = yield from compute_ranks(ctx, tree, position.bin, position.counter)
            return name


def labelled_bin_stage(k: int, beta: float) -> Tuple[int, int]:
    """(bins, claim passes) of the labelled-bin iteration at exponent k."""
    return ceil_positive(2 ** k / (beta * k)), math.ceil(beta * k)


def labelled_bin_bits(n: int, beta: float, growth: GrowthFunction) -> int:
    """Nominal random bits one processor of arb-unb-mc spends on n processors.

    Counts every iteration up to the first whose bins can hold all n balls
    (bins * passes >= n), the earliest stage at which the run can end.  Each
    iteration costs ceil(lg bins) bits for the bin and ``passes`` for the label.
    """
    k = 1
    total = 0
    while True:
        k = growth.apply(k)
        bins, passes = labelled_bin_stage(k, beta)
        total += ceil_lg(bins) + passes
        if bins * passes >= n:
            return total


@dataclass(frozen=True)
class BoundedCells:
    """The constant memory window of the Common bounded Monte Carlo algorithm."""

    last_name: int
    collision_flag: int
    probe: int
    nonempty: int
    collision: CollisionCells

    @classmethod
    def allocate(cls, ctx: ProcessorContext) -> "BoundedCells":
        base = ctx.allocate(6)
        return cls(base, base + 1, base + 2, base + 3, CollisionCells(base + 4, base + 5))


def estimate_size(
    ctx: ProcessorContext,
    nonempty: int,
) -> Generator[object, Optional[int], Tuple[SizeEstimate, int]]:
    """Estimate n from bin occupancy; returns the estimate and the caller's bin.

    For k = 3, 4, ... processors pick one of k 2**k bins and count the nonempty
    bins, owners of bin i incrementing the shared counter in the i-th pair of
    rounds.  The first k with at most 2**k nonempty bins yields
    (3 * 2**k, k * 2**k).  size < 6n holds with certainty for n >= 20.
    """
    k = _FIRST_ESTIMATE_K - 1
    while True:
        k += 1
        bins = k << k
        my_bin = ctx.draw_uniform(bins)
        yield Write(nonempty, 0)
        if my_bin > 1:
            yield Idle(2 * (my_bin - 1))
        count = yield Read(nonempty)
        yield Write(nonempty, count + 1)
        if my_bin < bins:
            yield Idle(2 * (bins - my_bin))
        occupied = yield Read(nonempty)
        if occupied <= 1 << k:
            estimate = SizeEstimate(3 << k, bins)
            ctx.observe("size_estimate", estimate.size)
            return estimate, my_bin


def extend_names(
    ctx: ProcessorContext,
    cells: BoundedCells,
    size: int,
    bins: int,
    beta: float,
    my_bin: int,
    name: int,
) -> Generator[object, Optional[int], Tuple[bool, int, int, int]]:
    """One pass over the bins handing out names to processors alone in their bin.

    ``my_bin`` 0 means the caller is already named.  Each bin is first probed in
    constant time; occupied bins are verified ceil(beta lg size) times and a bin
    without a detected collision hands its owners the next name.  Owners of a
    bin with a detected collision re-draw from the (possibly shrunk) range.
    Returns (collision detected anywhere, bins, my_bin, name).
    """
    verifications = beta_lg(size, beta)
    occupied_rounds = VERIFY_ROUNDS * verifications + 2
    yield Write(cells.collision_flag, 0)
    collided = False
    for i in range(1, bins + 1):
        mine = my_bin == i
        occupied = yield from global_or(ctx, cells.probe, mine)
        if not occupied:
            continue
        if not mine:
            yield Idle(occupied_rounds)
            continue
        for _ in range(verifications):
            if (yield from verify_collision(ctx, cells.collision, 1)):
                collided = True
        if collided:
            yield Write(cells.collision_flag, 1)
            yield Idle(1)
        else:
            claimed = yield Read(cells.last_name)
            name = claimed + 1
            yield Write(cells.last_name, name)
            my_bin = 0
    if bins > size:
        bins = size
    if collided:
        my_bin = ctx.draw_uniform(bins)
    detected = yield Read(cells.collision_flag)
    return bool(detected), bins, my_bin, name


def common_bounded_mc(ctx: ProcessorContext, beta: float) -> ProgramGen:
    """Estimate the size, then extend names pass by pass, Common PRAM, 6 shared cells.

    Up to ceil(lg size) Extend-Names passes run after each estimate; the first
    pass without a detected collision ends the run, otherwise everything starts
    over with a fresh estimate.
    """
    cells = BoundedCells.allocate(ctx)
    while True:
        ctx.count_iteration()
        yield Write(cells.last_name, 0)
        estimate, my_bin = yield from estimate_size(ctx, cells.nonempty)
        size, bins = estimate.size, estimate.number_of_bins
        name = 0
        for _ in range(ceil_lg(size)):
            detected, bins, my_bin, name = yield from extend_names(
                ctx, cells, size, bins, beta, my_bin, name,
            )
            if not detected:
                return name


def gauge_size_mc(
    ctx: ProcessorContext,
    beta: float,
    growth: GrowthFunction,
) -> Generator[object, Optional[int], int]:
    """Gauge n from how many of 2**k bins get picked, Common PRAM.

    k grows by ``growth`` from 1 until at most 2**k / beta distinct bins are
    picked; returns ceil(2**(k + 1) / beta).
    """
    k = 1
    while True:
        k = growth.apply(k)
        bins = 1 << k
        my_bin = ctx.draw_uniform(bins)
        tree = TreeLayout.allocate(ctx, bins)
        occupied = yield from count_occupied(ctx, tree, my_bin)
        if occupied * beta <= bins:
            size = math.ceil((bins << 1) / beta)
            ctx.observe("size_estimate", size)
            return size


def common_unbounded_mc(
    ctx: ProcessorContext,
    beta: float,
    growth: GrowthFunction = GrowthFunction.DOUBLING,
) -> ProgramGen:
    """Gauge the size, scatter over 3 size bins and verify until no collision remains, Common PRAM.

    The first ceil(beta lg size) verifications re-draw on a detected collision;
    the next ceil(beta lg size) only report.  Any report restarts the attempt
    with a new size; otherwise the bin ranks are the names.
    """
    collision_flag = ctx.allocate(1)
    while True:
        ctx.count_iteration()
        size = yield from gauge_size_mc(ctx, beta, growth)
        bins = 3 * size
        verifications = beta_lg(size, beta)
        cells = CollisionCells.allocate(ctx, bins)
        my_bin = ctx.draw_uniform(bins)
        for _ in range(verifications):
            if (yield from verify_collision(ctx, cells, my_bin)):
                my_bin = ctx.draw_uniform(bins)
        yield Write(collision_flag, 0)
        collided = False
        for _ in range(verifications):
            if (yield from verify_collision(ctx, cells, my_bin)):
                collided = True
        if collided:
            yield Write(collision_flag, 1)
        else:
            yield Idle(1)
        detected = yield Read(collision_flag)
        if not detected:
            tree = TreeLayout.allocate(ctx, bins)
            name, _ = yield from compute_ranks(ctx, tree, my_bin)
            return name


def estimate_size_probe(ctx: ProcessorContext) -> Generator[object, Optional[int], SizeEstimate]:
    """Program: run Estimate-Size alone and return its estimate."""
    nonempty = ctx.allocate(1)
    estimate, _ = yield from estimate_size(ctx, nonempty)
    return estimate


def gauge_size_probe(
    ctx: ProcessorContext,
    beta: float,
    growth: GrowthFunction = GrowthFunction.SUCCESSOR,
) -> Generator[object, Optional[int], int]:
    """Program: run Gauge-Size-MC alone and return its size."""
    size = yield from gauge_size_mc(ctx, beta, growth)
    return size
