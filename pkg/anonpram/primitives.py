"""
primitives.py

Verify-Collision: the coin-flip test that lets processors sharing a bin notice
each other without being able to count.
"""

from dataclasses import dataclass
from typing import Generator, Optional

from .machine import ProcessorContext
from .memory import Idle, Read, Write

VERIFY_ROUNDS = 5


@dataclass(frozen=True)
class CollisionCells:
    """Heads/Tails arrays; bin x uses ``heads + x - 1`` and ``tails + x - 1``."""

    heads: int
    tails: int

    @classmethod
    def allocate(cls, ctx: ProcessorContext, bins: int) -> "CollisionCells":
        return cls(ctx.allocate(bins), ctx.allocate(bins))


def verify_collision(
    ctx: ProcessorContext,
    cells: CollisionCells,
    bin_index: Optional[int],
) -> Generator[object, Optional[int], bool]:
    """True when another processor is detected in the caller's bin.

    Participants clear Heads[x] and Tails[x], toss one coin, write 1 into the
    chosen cell and read both back; a collision shows as both cells set.  A
    lone participant never sees both set; m participants detect each other
    unless all coins agree, i.e. with probability 1 - 2**(1 - m).  A processor
    with ``bin_index`` None sits the five rounds out.
    """
    if bin_index is None:
        yield Idle(VERIFY_ROUNDS)
        return False
    ctx.tally("verifications")
    heads = cells.heads + bin_index - 1
    tails = cells.tails + bin_index - 1
    yield Write(heads, 0)
    yield Write(tails, 0)
    yield Write(tails if ctx.coin() else heads, 1)
    seen_tails = yield Read(tails)
    seen_heads = yield Read(heads)
    return seen_tails == seen_heads


def verify_collision_probe(ctx: ProcessorContext) -> Generator[object, Optional[int], bool]:
    """Program: every processor runs one Verify-Collision on the same bin."""
    cells = CollisionCells.allocate(ctx, 1)
    detected = yield from verify_collision(ctx, cells, 1)
    return detected
