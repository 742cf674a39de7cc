"""
errors.py

Exception hierarchy shared by the simulator, the algorithms and the harness.
"""

from typing import Any, Optional, Sequence


class AnonPramError(Exception):
    """Base exception for anonpram operational errors."""


class ModelViolation(AnonPramError):
    """A processor step broke the PRAM model contract.

    ``address`` and ``round_index`` locate the offending access when known.
    """

    kind = "ModelViolation"

    def __init__(
        self,
        message: str,
        address: Optional[int] = None,
        round_index: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.address = address
        self.round_index = round_index


class IllegalCommonWrite(ModelViolation):
    """Distinct values written concurrently to one cell under the Common policy."""

    kind = "IllegalCommonWrite"

    def __init__(
        self,
        address: int,
        values: Sequence[int],
        round_index: Optional[int] = None,
    ) -> None:
        shown = ", ".join(str(v) for v in values[:4])
        if len(values) > 4:
            shown += ", ..."
        super().__init__(
            f"Common write conflict at cell {address}: values {{{shown}}}",
            address=address,
            round_index=round_index,
        )
        self.values = tuple(values)


class ReadWriteClash(ModelViolation):
    """Strict mode: one cell was read and written in the same round."""

    kind = "ReadWriteClash"


class WindowExceeded(ModelViolation):
    """Access or allocation outside the configured bounded-memory window."""

    kind = "WindowExceeded"


class WordOverflow(ModelViolation):
    """A written value does not fit the configured word size."""

    kind = "WordOverflow"


class MalformedOp(ModelViolation):
    """A program yielded something the engine cannot execute."""

    kind = "MalformedOp"


class RoundCapExceeded(AnonPramError):
    """The execution hit its round cap before every processor halted."""

    def __init__(self, cap: int, metrics: Any = None) -> None:
        super().__init__(f"Round cap of {cap} exceeded")
        self.cap = cap
        self.metrics = metrics


class ConfigError(AnonPramError, ValueError):
    """Invalid algorithm or experiment configuration."""


class DegenerateFit(AnonPramError, ValueError):
    """A scaling fit has no variance to explain."""
