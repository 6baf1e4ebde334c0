"""Exact combinatorial arithmetic.

Python ints are arbitrary precision and ``fractions.Fraction`` is always kept
in lowest terms with a positive denominator, so those two types carry every
number in the package.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

__all__ = [
    "factorial",
    "multinomial",
    "falling_factorial",
    "telephone_number",
]


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    """Return ``n!``. Memoized; ``lru_cache`` is safe under concurrent calls."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def multinomial(total: int, parts: Iterable[int]) -> int:
    """Return ``total! / prod(p!)``.

    Degenerate input gives 0 instead of raising: a negative part (a negative
    power of a psi class vanishes), a negative total, or parts that do not
    sum to ``total``.

    >>> multinomial(3, [1, 1, 1])
    6
    >>> multinomial(1, [1, -1, 0, 1])
    0
    """
    parts = list(parts)
    if total < 0 or any(p < 0 for p in parts) or sum(parts) != total:
        return 0
    result = factorial(total)
    for p in parts:
        if p > 1:
            result //= factorial(p)
    return result


def falling_factorial(a: int, b: int) -> int:
    """``a (a-1) ... (a-b+1)``; 1 for ``b == 0`` and 0 for ``b > a``."""
    if a < 0 or b < 0:
        raise ValueError("falling_factorial needs nonnegative arguments")
    return math.perm(a, b)


def telephone_number(n: int) -> int:
    """Number of partitions of ``[n]`` into blocks of size 1 or 2.

    Uses the closed sum over the number of pairs ``m``.
    """
    if n < 0:
        raise ValueError("telephone_number needs n >= 0")
    return sum(
        factorial(n) // (2**m * factorial(m) * factorial(n - 2 * m))
        for m in range(n // 2 + 1)
    )
