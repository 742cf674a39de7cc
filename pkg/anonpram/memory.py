"""
memory.py

Shared memory of the simulated PRAM, the per-round operations processors issue,
and concurrent-write resolution.

Reads observe the state at the start of a round and writes become visible from
the next round.  Never-written cells read as 0.
"""

import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import (
    IllegalCommonWrite,
    MalformedOp,
    ReadWriteClash,
    WindowExceeded,
    WordOverflow,
)


@dataclass(frozen=True, slots=True)
class Read:
    addr: int


@dataclass(frozen=True, slots=True)
class Write:
    addr: int
    value: int


@dataclass(frozen=True, slots=True)
class Idle:
    """``rounds`` consecutive NoOps."""

    rounds: int = 1


NOOP = Idle(1)


class PramVariant(str, Enum):
    COMMON = "common"
    ARBITRARY = "arbitrary"


class WriteSelector(str, Enum):
    """Simulator-side rule choosing the surviving value of an Arbitrary write."""

    FIRST = "first"
    LAST = "last"
    RANDOM = "random"
    ADVERSARIAL = "adversarial"


@dataclass(frozen=True)
class WritePolicy:
    variant: PramVariant
    selector: WriteSelector = WriteSelector.FIRST

    @classmethod
    def common(cls) -> "WritePolicy":
        return cls(PramVariant.COMMON)

    @classmethod
    def arbitrary(cls, selector: WriteSelector = WriteSelector.FIRST) -> "WritePolicy":
        return cls(PramVariant.ARBITRARY, WriteSelector(selector))

    @property
    def is_common(self) -> bool:
        return self.variant is PramVariant.COMMON

    def label(self) -> str:
        if self.is_common:
            return "common"
        return f"arbitrary/{self.selector.value}"


def resolve_concurrent_writes(
    addr: int,
    values: Sequence[Tuple[int, int]],
    policy: WritePolicy,
    rng: Optional[random.Random] = None,
) -> int:
    """Pick the value stored when ``values`` (processor index, value) hit ``addr`` together.

    Raises:
        ValueError: if ``values`` is empty, or SeededRandom has no generator.
        IllegalCommonWrite: Common policy with non-identical values.
    """
    if not values:
        raise ValueError("resolve_concurrent_writes needs at least one write")
    if policy.is_common:
        first = values[0][1]
        for _, v in values:
            if v != first:
                distinct = sorted({val for _, val in values})
                raise IllegalCommonWrite(addr, distinct)
        return first

    if len(values) == 1:
        return values[0][1]
    selector = policy.selector
    if selector is WriteSelector.FIRST:
        return min(values)[1]
    if selector is WriteSelector.LAST:
        return max(values)[1]
    if selector is WriteSelector.RANDOM:
        if rng is None:
            raise ValueError("the random selector needs a seeded generator")
        ordered = sorted(values)
        return ordered[rng.randrange(len(ordered))][1]
    # Adversarial: the value written by the largest group survives, ties to the lowest value.
    counts = Counter(v for _, v in values)
    return min(counts, key=lambda v: (-counts[v], v))


class SharedMemory:
    """Zero-initialized cells with touch tracking and fresh-region allocation.

    ``window`` bounds the address space to [0, window) when set; ``word_bits``
    bounds stored values to [0, 2**word_bits) when set.
    """

    def __init__(self, window: Optional[int] = None, word_bits: Optional[int] = None) -> None:
        self.cells: Dict[int, int] = {}
        self.touched: Set[int] = set()
        self.window = window
        self.word_bits = word_bits
        self.rounds = 0
        self.cells_allocated = 0
        self._cursor = 0
        self._high_water = -1
        self._regions: List[Tuple[int, int]] = []

    def _check_addr(self, addr: int) -> None:
        if addr < 0:
            raise MalformedOp(f"negative address {addr}", address=addr, round_index=self.rounds)
        if self.window is not None and addr >= self.window:
            raise WindowExceeded(
                f"address {addr} outside the {self.window}-cell window",
                address=addr,
                round_index=self.rounds,
            )

    def read(self, addr: int) -> int:
        self._check_addr(addr)
        self.touched.add(addr)
        if addr > self._high_water:
            self._high_water = addr
        return self.cells.get(addr, 0)

    def write(self, addr: int, value: int) -> None:
        self._check_addr(addr)
        if self.word_bits is not None and not 0 <= value < (1 << self.word_bits):
            raise WordOverflow(
                f"value {value} does not fit a {self.word_bits}-bit word",
                address=addr,
                round_index=self.rounds,
            )
        self.touched.add(addr)
        if addr > self._high_water:
            self._high_water = addr
        self.cells[addr] = value

    def peek(self, addr: int) -> int:
        """Inspect a cell without touching it."""
        return self.cells.get(addr, 0)

    def allocate_region(self, size: int) -> int:
        """Base address of a fresh region of ``size`` never-touched cells."""
        if size < 1:
            raise ValueError(f"region size must be >= 1, got {size}")
        base = max(self._cursor, self._high_water + 1)
        if self.window is not None and base + size > self.window:
            raise WindowExceeded(
                f"allocating {size} cells at {base} exceeds the {self.window}-cell window",
                address=base,
                round_index=self.rounds,
            )
        self._cursor = base + size
        self.cells_allocated += size
        return base

    def claim_region(self, ordinal: int, size: int) -> int:
        """Region number ``ordinal`` of an allocation sequence shared by all processors.

        Every processor issues the same allocations in the same order; the first
        request for an ordinal allocates, later ones get the same base back.
        """
        if ordinal < len(self._regions):
            base, known_size = self._regions[ordinal]
            if known_size != size:
                raise MalformedOp(
                    f"allocation #{ordinal} requested {size} cells, previously {known_size}",
                    round_index=self.rounds,
                )
            return base
        if ordinal != len(self._regions):
            raise MalformedOp(f"allocation #{ordinal} skips ahead", round_index=self.rounds)
        base = self.allocate_region(size)
        self._regions.append((base, size))
        return base


@dataclass
class RoundOutcome:
    reads: Dict[int, int] = field(default_factory=dict)
    written: FrozenSet[int] = frozenset()


def submit_round(
    ops: Mapping[int, object],
    policy: WritePolicy,
    memory: SharedMemory,
    strict: bool = True,
    rng: Optional[random.Random] = None,
) -> RoundOutcome:
    """Execute one synchronous round: ``ops`` maps processor index to its op.

    Processors absent from ``ops`` perform a NoOp.
    """
    reads: Dict[int, int] = {}
    writes: Dict[int, List[Tuple[int, int]]] = {}
    for idx, op in ops.items():
        kind = type(op)
        if kind is Read:
            reads[idx] = op.addr
        elif kind is Write:
            if not isinstance(op.value, int):
                raise MalformedOp(
                    f"processor wrote non-integer {op.value!r}",
                    address=op.addr,
                    round_index=memory.rounds,
                )
            bucket = writes.get(op.addr)
            if bucket is None:
                writes[op.addr] = [(idx, op.value)]
            else:
                bucket.append((idx, op.value))
        elif kind is Idle:
            continue
        else:
            raise MalformedOp(f"unknown memory op {op!r}", round_index=memory.rounds)

    if strict and writes and reads:
        for addr in reads.values():
            if addr in writes:
                raise ReadWriteClash(
                    f"cell {addr} read and written in round {memory.rounds}",
                    address=addr,
                    round_index=memory.rounds,
                )

    results = {idx: memory.read(addr) for idx, addr in reads.items()}
    for addr, attempts in writes.items():
        try:
            value = resolve_concurrent_writes(addr, attempts, policy, rng)
        except IllegalCommonWrite as exc:
            exc.round_index = memory.rounds
            raise
        memory.write(addr, value)
    memory.rounds += 1
    return RoundOutcome(reads=results, written=frozenset(writes))
