"""
machine.py

Lock-step engine for an anonymous synchronous PRAM.

A processor program is a callable ``program(ctx)`` returning a generator.  The
generator yields one op per round it acts in (``Read``, ``Write``) or
``Idle(k)`` to spend k rounds doing nothing, receives read values through
``send`` and halts by returning its final private state.  The context handed to
a program carries private randomness and the shared allocation sequence but no
processor index, so every program is anonymous by construction.

Rounds in which no processor acts are skipped in O(1), which keeps the
round-robin style of the bounded algorithms cheap to simulate.
"""

import heapq
import random
from dataclasses import dataclass
from typing import Any, Callable, Dict, Generator, List, Optional, Tuple

from .errors import MalformedOp, RoundCapExceeded
from .logging_utils import get_logger
from .memory import Idle, Read, SharedMemory, Write, WritePolicy, submit_round
from .models import ExecutionMetrics
from .rng import SELECTOR_STREAM, BitSource, ProcessorRng, derive_seed

logger = get_logger(__name__)

Op = Any
ProgramGen = Generator[Op, Optional[int], Any]
ProcessorProgram = Callable[["ProcessorContext"], ProgramGen]
BitSourceFactory = Callable[[int], BitSource]


@dataclass(frozen=True)
class SimulationLimits:
    """Execution limits: ``round_cap`` None means run until every processor halts."""

    round_cap: Optional[int] = None
    strict: bool = True
    window: Optional[int] = None
    word_bits: Optional[int] = None


class ProcessorContext:
    """What a running program may use besides shared memory."""

    __slots__ = ("rng", "_memory", "_allocations", "observations", "iterations")

    def __init__(self, rng: ProcessorRng, memory: SharedMemory) -> None:
        self.rng = rng
        self._memory = memory
        self._allocations = 0
        self.observations: Dict[str, int] = {}
        self.iterations = 0

    def draw_uniform(self, m: int) -> int:
        """Uniform integer in [1, m]."""
        return self.rng.draw_uniform(m)

    def coin(self) -> bool:
        return self.rng.bits(1) == 1

    def allocate(self, size: int) -> int:
        """Base address of the next fresh region in the common allocation sequence."""
        base = self._memory.claim_region(self._allocations, size)
        self._allocations += 1
        return base

    def observe(self, key: str, value: int) -> None:
        """Record a diagnostic; the execution keeps the maximum over processors."""
        if value > self.observations.get(key, value - 1):
            self.observations[key] = value

    def tally(self, key: str) -> None:
        """Count an event of this processor; the execution keeps the maximum count."""
        self.observations[key] = self.observations.get(key, 0) + 1

    def count_iteration(self) -> None:
        self.iterations += 1


class Machine:
    """One execution of ``program`` on ``n`` anonymous processors."""

    def __init__(
        self,
        n: int,
        program: ProcessorProgram,
        policy: WritePolicy,
        seed: int,
        limits: Optional[SimulationLimits] = None,
        bit_sources: Optional[BitSourceFactory] = None,
    ) -> None:
        if n < 1:
            raise ValueError(f"need at least one processor, got n={n}")
        self.n = n
        self.policy = policy
        self.seed = seed
        self.limits = limits or SimulationLimits()
        self.memory = SharedMemory(window=self.limits.window, word_bits=self.limits.word_bits)
        self._selector_rng = random.Random(derive_seed(seed, SELECTOR_STREAM))

        self.contexts: List[ProcessorContext] = []
        for idx in range(n):
            if bit_sources is not None:
                rng = ProcessorRng(bit_sources(idx))
            else:
                rng = ProcessorRng.seeded(derive_seed(seed, idx))
            self.contexts.append(ProcessorContext(rng, self.memory))
        self._program = program

        self._gens: List[Optional[ProgramGen]] = [None] * n
        self._ops: List[Op] = [None] * n
        self.states: List[Any] = [None] * n
        self._buckets: Dict[int, List[int]] = {}
        self._heap: List[int] = []
        self._last_round = 0

    def _advance(self, idx: int, value: Optional[int], now: int) -> None:
        """Resume processor ``idx`` after round ``now`` and schedule its next op."""
        gen = self._gens[idx]
        idle = 0
        try:
            op = gen.send(value)
            while type(op) is Idle:
                if op.rounds < 0:
                    raise MalformedOp(f"negative idle {op.rounds}", round_index=now)
                idle += op.rounds
                op = gen.send(None)
        except StopIteration as stop:
            self.states[idx] = stop.value
            halt = now + 1 + idle
            if halt > self._last_round:
                self._last_round = halt
            return
        if type(op) is not Read and type(op) is not Write:
            raise MalformedOp(f"program yielded {op!r}", round_index=now)
        due = now + 1 + idle
        self._ops[idx] = op
        bucket = self._buckets.get(due)
        if bucket is None:
            self._buckets[due] = [idx]
            heapq.heappush(self._heap, due)
        else:
            bucket.append(idx)

    def run(self) -> Tuple[List[Any], ExecutionMetrics]:
        cap = self.limits.round_cap
        for idx, ctx in enumerate(self.contexts):
            self._gens[idx] = self._program(ctx)
            self._advance(idx, None, -1)

        memory = self.memory
        while self._heap:
            now = heapq.heappop(self._heap)
            if cap is not None and now >= cap:
                raise RoundCapExceeded(cap, self._metrics(rounds=cap))
            due = self._buckets.pop(now)
            ops = {idx: self._ops[idx] for idx in due}
            memory.rounds = now
            outcome = submit_round(
                ops, self.policy, memory,
                strict=self.limits.strict, rng=self._selector_rng,
            )
            reads = outcome.reads
            for idx in due:
                self._advance(idx, reads.get(idx), now)

        if cap is not None and self._last_round > cap:
            raise RoundCapExceeded(cap, self._metrics(rounds=cap))
        metrics = self._metrics(rounds=self._last_round)
        logger.debug(
            "Executed n=%d under %s: %d rounds, %d bits, %d cells",
            self.n, self.policy.label(), metrics.rounds, metrics.random_bits,
            metrics.cells_touched,
        )
        return self.states, metrics

    def _metrics(self, rounds: int) -> ExecutionMetrics:
        per_bits = tuple(ctx.rng.bits_consumed for ctx in self.contexts)
        observations: Dict[str, int] = {}
        for ctx in self.contexts:
            for key, value in ctx.observations.items():
                if value > observations.get(key, value - 1):
                    observations[key] = value
        return ExecutionMetrics(
            rounds=rounds,
            random_bits=sum(per_bits),
            nominal_bits=sum(ctx.rng.nominal_bits for ctx in self.contexts),
            per_processor_bits=per_bits,
            cells_touched=len(self.memory.touched),
            cells_allocated=self.memory.cells_allocated,
            outer_iterations=max(ctx.iterations for ctx in self.contexts),
            observations=observations,
        )


def run_program(
    n: int,
    program: ProcessorProgram,
    policy: WritePolicy,
    seed: int,
    limits: Optional[SimulationLimits] = None,
    bit_sources: Optional[BitSourceFactory] = None,
) -> Tuple[List[Any], ExecutionMetrics]:
    """Drive ``n`` processors running ``program`` in lock-step until all halt.

    Returns the final private states in processor order plus the execution
    metrics.  ``bit_sources`` replaces the seeded per-processor streams, e.g.
    with :class:`~anonpram.rng.ScriptedBits` to force specific random choices.

    Raises:
        RoundCapExceeded: when ``limits.round_cap`` fires first.
        ModelViolation: propagated from the round that broke the model.
    """
    return Machine(n, program, policy, seed, limits, bit_sources).run()
