"""
rng.py

Bit-accounted private randomness for simulated processors.

Every processor owns a stream seeded from (trial seed, processor index) through
SplitMix64, so streams are portable across platforms and never depend on
Python's randomized ``hash()``.  ``draw_uniform`` samples [1, m] by rejection on
ceil(lg m)-bit words and reports exactly how many bits it consumed.
"""

import random
from typing import Iterable, List, Protocol, Tuple

from .math_utils import ceil_lg

_MASK64 = (1 << 64) - 1

# Salts for streams that are not processor streams.
SELECTOR_STREAM = 0x5E1EC7
TRIAL_STREAM = 0x7121A1


def splitmix64(x: int) -> int:
    """SplitMix64 mix function."""
    z = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(*parts: int) -> int:
    """Fold integer parts into one 64-bit seed with SplitMix64."""
    h = 0
    for part in parts:
        h = splitmix64(h ^ (int(part) & _MASK64))
    return h


class BitSource(Protocol):
    def getrandbits(self, k: int) -> int:
        ...


class ScriptedBits:
    """Replays a fixed sequence of words; used to force specific random choices.

    Each call to ``getrandbits(k)`` pops the next scripted word, which must fit
    in k bits.
    """

    def __init__(self, words: Iterable[int]) -> None:
        self._words: List[int] = list(words)
        self._pos = 0

    def getrandbits(self, k: int) -> int:
        if self._pos >= len(self._words):
            raise IndexError("scripted bit source exhausted")
        word = self._words[self._pos]
        self._pos += 1
        if word < 0 or word >= (1 << k):
            raise ValueError(f"scripted word {word} does not fit in {k} bits")
        return word

    @property
    def remaining(self) -> int:
        return len(self._words) - self._pos


class ProcessorRng:
    """A processor's private random stream with exact bit accounting.

    ``bits_consumed`` counts every bit drawn, rejected words included;
    ``nominal_bits`` counts ceil(lg m) once per successful draw.
    """

    __slots__ = ("_source", "bits_consumed", "nominal_bits", "draws")

    def __init__(self, source: BitSource) -> None:
        self._source = source
        self.bits_consumed = 0
        self.nominal_bits = 0
        self.draws = 0

    @classmethod
    def seeded(cls, seed: int) -> "ProcessorRng":
        return cls(random.Random(seed))

    def bits(self, k: int) -> int:
        self.bits_consumed += k
        return self._source.getrandbits(k)

    def draw_uniform(self, m: int) -> int:
        value, _ = draw_uniform(self, m)
        return value


def draw_uniform(rng: ProcessorRng, m: int) -> Tuple[int, int]:
    """Uniform integer in [1, m] plus the number of bits this call consumed."""
    if m < 1:
        raise ValueError(f"draw_uniform requires m >= 1, got {m}")
    rng.draws += 1
    if m == 1:
        return 1, 0
    width = ceil_lg(m)
    rng.nominal_bits += width
    used = 0
    while True:
        word = rng.bits(width)
        used += width
        if word < m:
            return word + 1, used
