"""
tests/test_memory.py

Shared memory, synchronous round semantics and concurrent-write resolution.
"""

import random

import pytest

from anonpram.errors import (
    IllegalCommonWrite,
    MalformedOp,
    ReadWriteClash,
    WindowExceeded,
    WordOverflow,
)
from anonpram.memory import (
    Idle,
    Read,
    SharedMemory,
    Write,
    WritePolicy,
    WriteSelector,
    resolve_concurrent_writes,
    submit_round,
)


class TestResolveConcurrentWrites:
    def test_common_identical_values(self):
        assert resolve_concurrent_writes(3, [(0, 7), (4, 7), (2, 7)], WritePolicy.common()) == 7

    def test_common_conflict_raises(self):
        with pytest.raises(IllegalCommonWrite) as exc_info:
            resolve_concurrent_writes(3, [(0, 7), (1, 8)], WritePolicy.common())
        assert exc_info.value.address == 3
        assert exc_info.value.values == (7, 8)

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            resolve_concurrent_writes(0, [], WritePolicy.common())

    def test_first_picks_lowest_processor(self):
        policy = WritePolicy.arbitrary(WriteSelector.FIRST)
        assert resolve_concurrent_writes(0, [(2, 5), (0, 9), (1, 4)], policy) == 9

    def test_last_picks_highest_processor(self):
        policy = WritePolicy.arbitrary(WriteSelector.LAST)
        assert resolve_concurrent_writes(0, [(2, 5), (0, 9), (1, 4)], policy) == 5

    def test_adversarial_majority_then_lowest(self):
        policy = WritePolicy.arbitrary(WriteSelector.ADVERSARIAL)
        assert resolve_concurrent_writes(0, [(0, 1), (1, 2), (2, 2)], policy) == 2
        assert resolve_concurrent_writes(0, [(0, 3), (1, 1)], policy) == 1

    def test_random_needs_generator(self):
        policy = WritePolicy.arbitrary(WriteSelector.RANDOM)
        with pytest.raises(ValueError):
            resolve_concurrent_writes(0, [(0, 1), (1, 2)], policy)

    def test_random_is_seeded(self):
        policy = WritePolicy.arbitrary(WriteSelector.RANDOM)
        writes = [(i, 10 + i) for i in range(8)]
        first = [resolve_concurrent_writes(0, writes, policy, random.Random(5)) for _ in range(3)]
        again = [resolve_concurrent_writes(0, writes, policy, random.Random(5)) for _ in range(3)]
        assert first == again
        assert all(v in {val for _, val in writes} for v in first)

    def test_single_writer_always_wins(self):
        for selector in WriteSelector:
            policy = WritePolicy.arbitrary(selector)
            assert resolve_concurrent_writes(0, [(3, 42)], policy) == 42

    def test_policy_labels(self):
        assert WritePolicy.common().label() == "common"
        assert WritePolicy.arbitrary("last").label() == "arbitrary/last"


class TestSharedMemory:
    def test_unwritten_cells_read_zero(self):
        mem = SharedMemory()
        assert mem.read(12) == 0
        assert mem.touched == {12}

    def test_peek_does_not_touch(self):
        mem = SharedMemory()
        mem.write(1, 9)
        assert mem.peek(1) == 9
        assert mem.peek(2) == 0
        assert mem.touched == {1}

    def test_negative_address(self):
        with pytest.raises(MalformedOp):
            SharedMemory().read(-1)

    def test_window(self):
        mem = SharedMemory(window=2)
        mem.write(1, 1)
        with pytest.raises(WindowExceeded) as exc_info:
            mem.read(2)
        assert exc_info.value.address == 2

    def test_word_bits(self):
        mem = SharedMemory(word_bits=4)
        mem.write(0, 15)
        with pytest.raises(WordOverflow):
            mem.write(0, 16)

    def test_allocate_region_skips_touched_cells(self):
        mem = SharedMemory()
        mem.read(5)
        assert mem.allocate_region(3) == 6
        assert mem.allocate_region(1) == 9
        assert mem.cells_allocated == 4

    def test_allocate_region_respects_window(self):
        mem = SharedMemory(window=3)
        assert mem.allocate_region(2) == 0
        with pytest.raises(WindowExceeded):
            mem.allocate_region(2)

    def test_allocate_region_rejects_empty(self):
        with pytest.raises(ValueError):
            SharedMemory().allocate_region(0)

    def test_claim_region_is_shared(self):
        mem = SharedMemory()
        first = mem.claim_region(0, 4)
        assert mem.claim_region(0, 4) == first
        second = mem.claim_region(1, 2)
        assert second == first + 4
        assert mem.cells_allocated == 6

    def test_claim_region_mismatch(self):
        mem = SharedMemory()
        mem.claim_region(0, 4)
        with pytest.raises(MalformedOp):
            mem.claim_region(0, 5)
        with pytest.raises(MalformedOp):
            mem.claim_region(3, 1)


class TestSubmitRound:
    def test_reads_see_start_of_round_state(self):
        mem = SharedMemory()
        mem.write(0, 5)
        out = submit_round({0: Read(0), 1: Write(1, 7)}, WritePolicy.common(), mem)
        assert out.reads == {0: 5}
        assert out.written == frozenset({1})
        out = submit_round({0: Read(1)}, WritePolicy.common(), mem)
        assert out.reads == {0: 7}
        assert mem.rounds == 2

    def test_absent_and_idle_processors_do_nothing(self):
        mem = SharedMemory()
        out = submit_round({0: Idle(), 3: Write(2, 1)}, WritePolicy.common(), mem)
        assert out.reads == {}
        assert mem.peek(2) == 1

    def test_strict_clash(self):
        mem = SharedMemory()
        with pytest.raises(ReadWriteClash) as exc_info:
            submit_round({0: Read(3), 1: Write(3, 1)}, WritePolicy.common(), mem)
        assert exc_info.value.address == 3

    def test_non_strict_read_returns_old_value(self):
        mem = SharedMemory()
        mem.write(3, 4)
        out = submit_round({0: Read(3), 1: Write(3, 1)}, WritePolicy.common(), mem, strict=False)
        assert out.reads == {0: 4}
        assert mem.peek(3) == 1

    def test_common_conflict_carries_round(self):
        mem = SharedMemory()
        mem.rounds = 6
        with pytest.raises(IllegalCommonWrite) as exc_info:
            submit_round({0: Write(0, 1), 1: Write(0, 2)}, WritePolicy.common(), mem)
        assert exc_info.value.round_index == 6

    def test_arbitrary_resolution(self):
        mem = SharedMemory()
        submit_round(
            {0: Write(0, 1), 1: Write(0, 2)},
            WritePolicy.arbitrary(WriteSelector.LAST),
            mem,
        )
        assert mem.peek(0) == 2

    def test_malformed_ops(self):
        mem = SharedMemory()
        with pytest.raises(MalformedOp):
            submit_round({0: Write(0, 1.5)}, WritePolicy.common(), mem)
        with pytest.raises(MalformedOp):
            submit_round({0: "read"}, WritePolicy.common(), mem)
