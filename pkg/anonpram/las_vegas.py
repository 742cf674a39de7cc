"""
las_vegas.py

Naming algorithms for a known number of processors n that never err: each one
repeats an attempt until a shared check proves the names form a permutation of
[1..n].

Every function here is a processor program body taking ``(ctx, n, beta)``; bind
the parameters with ``functools.partial`` before handing it to the engine.
Private computation costs no rounds; when a processor has nothing to do while
others act it idles for exactly as many rounds as they spend, so all processors
stay in lock-step without any processor index.
"""

from typing import Generator, Optional

from .collectives import Position, TreeLayout, compute_ranks, global_or
from .machine import ProcessorContext
from .math_utils import beta_ln, ceil_lg, ceil_positive, int_power_ceil, n_over_ln
from .memory import Idle, Read, Write
from .primitives import VERIFY_ROUNDS, CollisionCells, verify_collision

ProgramGen = Generator[object, Optional[int], int]

# Rounds of one sequential-claim step over a Pad cell: write, read back, read
# the counter, write the counter.
_PAD_CLAIM_ROUNDS = 4
# Rounds of one inner pass of the labelled-bin claim loop.
_BIN_CLAIM_ROUNDS = 6


def arbitrary_bounded_lv(ctx: ProcessorContext, n: int, beta: float) -> ProgramGen:
    """Sequential claiming through a single Pad cell, Arbitrary PRAM, 2 shared cells.

    Each attempt every processor draws a value in [1, n**beta]; in each of n
    steps the unnamed processors write their value to Pad and the one whose
    value survived takes the next Counter value.  Processors with equal values
    end up sharing a name, which leaves Counter short of n and forces a retry.
    """
    region = ctx.allocate(2)
    pad, counter = region, region + 1
    value_range = int_power_ceil(n, beta)
    while True:
        ctx.count_iteration()
        yield Write(counter, 0)
        name = 0
        value = ctx.draw_uniform(value_range)
        for step in range(n):
            if name:
                yield Idle(_PAD_CLAIM_ROUNDS * (n - step))
                break
            yield Write(pad, value)
            seen = yield Read(pad)
            if seen == value:
                claimed = yield Read(counter)
                name = claimed + 1
                yield Write(counter, name)
            else:
                yield Idle(2)
        total = yield Read(counter)
        if total == n:
            return name


def arbitrary_unbounded_lv(ctx: ProcessorContext, n: int, beta: float) -> ProgramGen:
    """Labelled bins with per-bin counters and position ranks, Arbitrary PRAM.

    Processors throw themselves into ceil(n / ln n) bins and carry a label from
    [1, n**beta].  In each pass every bin accepts one surviving label, whose
    owners take the next counter value of that bin, so they hold the position
    (bin, counter).  Once everyone holds a position the names are the position
    ranks; the attempt repeats unless the largest name equals n.
    """
    bins = n_over_ln(n)
    label_range = int_power_ceil(n, beta)
    all_named = ctx.allocate(1)
    pads = ctx.allocate(bins)
    while True:
        ctx.count_iteration()
        tree = TreeLayout.allocate(ctx, bins)
        my_bin = ctx.draw_uniform(bins)
        label = ctx.draw_uniform(label_range)
        leaf = tree.leaf_addr(my_bin)
        pad = pads + my_bin - 1
        position: Optional[Position] = None
        while True:
            yield Write(all_named, 1)
            if position is None:
                yield Write(pad, label)
                seen = yield Read(pad)
                if seen == label:
                    count = yield Read(leaf)
                    yield Write(leaf, count + 1)
                    position = Position(my_bin, count + 1)
                    ctx.observe("max_bin_load", count + 1)
                else:
                    yield Write(all_named, 0)
                    yield Idle(1)
            else:
                yield Idle(_BIN_CLAIM_ROUNDS - 2)
            done = yield Read(all_named)
            if done:
                break
        name, largest = yield from compute_ranks(ctx, tree, position.bin, position.counter)
        if largest == n:
            return name


def restored_bin_count(n: int, beta: float) -> int:
    """Bins of a restored stage: n / (beta ln n), but at least the beta ln n balls it may hold.

    Fewer bins than balls leave almost every ball sharing a bin, and such a
    stage names nobody; the floor only binds while n < (beta ln n)**2.
    """
    verifications = beta_ln(n, beta)
    return max(ceil_positive(n / verifications), verifications)


def common_bounded_lv(ctx: ProcessorContext, n: int, beta: float) -> ProgramGen:
    """Shrinking and restored balls-into-bins stages, Common PRAM, 5 shared cells.

    In a stage every unnamed processor picks a bin; bins are visited in order
    and, when occupied, verified ceil(beta ln n) times by their owners.  A bin
    that survives verification hands its owner the next name.  The number of
    bins shrinks to the count of processors still unnamed while that count is
    large, and is reset to n / (beta ln n) otherwise, though never below the
    beta ln n balls a restored stage may receive.  Stages continue until
    one detects no collision; the attempt repeats unless n names were handed out.
    """
    region = ctx.allocate(5)
    last_name, collision_flag, probe = region, region + 1, region + 2
    cells = CollisionCells(region + 3, region + 4)
    verifications = beta_ln(n, beta)
    restored_bins = restored_bin_count(n, beta)
    # Each occupied bin costs the verifications, a collision report and a claim.
    occupied_rounds = VERIFY_ROUNDS * verifications + 2
    while True:
        ctx.count_iteration()
        bins = n
        name = 0
        yield Write(last_name, 0)
        while True:
            yield Write(collision_flag, 0)
            collided = False
            my_bin = ctx.draw_uniform(bins) if not name else 0
            for i in range(1, bins + 1):
                mine = my_bin == i
                occupied = yield from global_or(ctx, probe, mine)
                if not occupied:
                    continue
                if not mine:
                    yield Idle(occupied_rounds)
                    continue
                for _ in range(verifications):
                    if (yield from verify_collision(ctx, cells, 1)):
                        collided = True
                if collided:
                    yield Write(collision_flag, 1)
                    yield Idle(1)
                else:
                    claimed = yield Read(last_name)
                    name = claimed + 1
                    yield Write(last_name, name)
            assigned = yield Read(last_name)
            detected = yield Read(collision_flag)
            if not detected:
                break
            if n - assigned > verifications:
                bins = n - assigned
            else:
                bins = restored_bins
                ctx.tally("restored_stages")
        if assigned == n:
            return name


def common_unbounded_lv(ctx: ProcessorContext, n: int, beta: float) -> ProgramGen:
    """Verify-and-rethrow over (beta + 1) n bins, then rank the occupied bins, Common PRAM.

    Each attempt runs ceil(lg n) Verify-Collision steps on the processor's bin,
    jumping to a fresh random bin whenever a collision is detected, and then
    counts the occupied bins.  n occupied bins means every processor is alone
    and the bin ranks are the names.
    """
    bins = ceil_positive((beta + 1) * n)
    steps = ceil_lg(n)
    cells = CollisionCells.allocate(ctx, bins)
    my_bin = ctx.draw_uniform(bins)
    while True:
        ctx.count_iteration()
        for _ in range(steps):
            if (yield from verify_collision(ctx, cells, my_bin)):
                my_bin = ctx.draw_uniform(bins)
        tree = TreeLayout.allocate(ctx, bins)
        name, occupied = yield from compute_ranks(ctx, tree, my_bin)
        if occupied == n:
            return name
