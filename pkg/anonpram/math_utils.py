"""
math_utils.py

Exact integer helpers for the range sizes and loop counts the algorithms use,
plus float formatting for console tables.
"""

import math
from typing import Union

import numpy as np

Number = Union[int, float]


def ceil_lg(x: int) -> int:
    """ceil(lg x) for a positive integer, computed exactly (ceil_lg(1) == 0)."""
    if x < 1:
        raise ValueError(f"ceil_lg requires x >= 1, got {x}")
    return (x - 1).bit_length()


def next_power_of_two(x: int) -> int:
    """Smallest power of two that is >= x."""
    return 1 << ceil_lg(x)


def lg(x: Number) -> float:
    """Binary logarithm as a float."""
    return math.log2(x)


def ceil_positive(x: float) -> int:
    """ceil(x), but never below 1."""
    return max(1, math.ceil(x))


def int_power_ceil(base: int, exponent: float) -> int:
    """ceil(base ** exponent) using exact integers when the exponent is integral."""
    if float(exponent).is_integer():
        return base ** int(exponent)
    return math.ceil(base ** exponent)


def power_within(base: int, exponent: float, k: int) -> bool:
    """base ** exponent <= 2 ** k without float overflow.

    Integral exponents compare exact integers; fractional ones compare logarithms.
    """
    if base <= 1:
        return True
    if float(exponent).is_integer():
        return base ** int(exponent) <= 1 << k
    return exponent * math.log2(base) <= k


def beta_ln(n: int, beta: float) -> int:
    """ceil(beta * ln n), at least 1."""
    return ceil_positive(beta * math.log(n)) if n > 1 else 1


def beta_lg(x: int, beta: float) -> int:
    """ceil(beta * lg x), at least 1."""
    return ceil_positive(beta * math.log2(x)) if x > 1 else 1


def n_over_ln(n: int) -> int:
    """ceil(n / ln n), at least 1 (n = 1 has a single bin)."""
    if n <= 1:
        return 1
    return math.ceil(n / math.log(n))


def custom_float_format(x: Number) -> str:
    """Format numbers for console tables: integers plainly, floats compactly."""
    if x is None:
        return "N/A"
    if isinstance(x, (int, np.integer)):
        return f"{int(x):,}"
    if isinstance(x, (float, np.floating)):
        if np.isnan(x):
            return "N/A"
        abs_x = abs(x)
        if abs_x >= 1e6:
            return f"{x:,.0f}"
        if abs_x >= 100:
            return f"{x:,.1f}"
        if abs_x >= 0.01 or abs_x == 0:
            return f"{x:.3f}"
        return f"{x:.2e}"
    return str(x)
