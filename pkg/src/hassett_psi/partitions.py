"""Partitions of ``[n]`` into blocks of size 1 or 2, and their reduced images.

Marks are 1-based throughout. Every enumeration places the smallest unplaced
mark first: it becomes a singleton, then is paired with each larger unplaced
mark in ascending order. The streams are therefore reproducible run to run.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "HalfPartition",
    "ReducedSelection",
    "enumerate_partitions",
    "enumerate_reduced",
    "project_to_reduced",
    "nonzero_first",
    "check_nonzero_first",
]

Pair = tuple[int, int]


@dataclass(frozen=True)
class HalfPartition:
    """A partition of ``[n]`` into pairs (forks) and singletons.

    ``pairs`` holds ``(a, b)`` with ``a < b``, sorted; ``singletons`` is sorted.
    """

    n: int
    pairs: tuple[Pair, ...]
    singletons: tuple[int, ...]

    def __post_init__(self):
        marks = [m for p in self.pairs for m in p] + list(self.singletons)
        if sorted(marks) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks do not partition [1..{self.n}]: {self}")
        if any(a >= b for a, b in self.pairs):
            raise ValueError("pairs must be written (a, b) with a < b")

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Sequence[int]]) -> "HalfPartition":
        pairs, singles = [], []
        for block in blocks:
            block = sorted(block)
            if len(block) == 2:
                pairs.append(tuple(block))
            elif len(block) == 1:
                singles.append(block[0])
            else:
                raise ValueError(f"block {block} has size other than 1 or 2")
        return cls(n, tuple(sorted(pairs)), tuple(sorted(singles)))

    @property
    def fork_count(self) -> int:
        return len(self.pairs)

    @property
    def size(self) -> int:
        """Number of blocks, ``n - fork_count``."""
        return len(self.pairs) + len(self.singletons)

    def blocks(self) -> list[tuple[int, ...]]:
        """Blocks ordered by smallest element."""
        return sorted(list(self.pairs) + [(s,) for s in self.singletons])

    def __str__(self):
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks())


@dataclass(frozen=True)
class ReducedSelection:
    """A member of the reduced index set over the nonzero-exponent marks ``[r]``.

    ``full_pairs`` are forks with both marks colored, ``half_forks`` are forks
    whose partner has exponent zero (the partner itself is not stored), and
    ``complement`` is the rest of ``[r]``, i.e. colored central legs.
    """

    n: int
    r: int
    full_pairs: tuple[Pair, ...]
    half_forks: tuple[int, ...]
    complement: tuple[int, ...]

    @property
    def t(self) -> int:
        return 2 * len(self.full_pairs)

    @property
    def s(self) -> int:
        return len(self.half_forks) + self.t

    @property
    def fork_count(self) -> int:
        return len(self.full_pairs) + len(self.half_forks)


def enumerate_partitions(n: int) -> Iterator[HalfPartition]:
    """Yield every partition of ``[n]`` into blocks of size <= 2 exactly once."""
    if n < 1:
        raise ValueError("enumerate_partitions needs n >= 1")

    def rec(remaining: tuple[int, ...], pairs: list, singles: list):
        if not remaining:
            yield HalfPartition(n, tuple(pairs), tuple(singles))
            return
        first, rest = remaining[0], remaining[1:]
        singles.append(first)
        yield from rec(rest, pairs, singles)
        singles.pop()
        for i, other in enumerate(rest):
            pairs.append((first, other))
            yield from rec(rest[:i] + rest[i + 1:], pairs, singles)
            pairs.pop()

    # pairs are appended in order of their smallest element, so stay sorted
    yield from rec(tuple(range(1, n + 1)), [], [])


def nonzero_first(k: Sequence[int]) -> tuple[int, ...]:
    """Relabel marks so nonzero exponents come first (sorted descending).

    Intersection numbers are symmetric in the marks, so this never changes a
    value.
    """
    return tuple(sorted(k, reverse=True))


def check_nonzero_first(k: Sequence[int]) -> int:
    """Return ``r``, the count of nonzero exponents; raise if they are not leading."""
    if any(e < 0 for e in k):
        raise ValueError(f"negative exponent in {tuple(k)}")
    r = sum(1 for e in k if e)
    if any(e == 0 for e in k[:r]):
        raise ValueError(f"exponents {tuple(k)} are not ordered nonzero-first")
    return r


def enumerate_reduced(k: Sequence[int]) -> Iterator[ReducedSelection]:
    """Yield every selection of disjoint pairs and half-forks inside ``[r]``.

    ``k`` must list nonzero exponents first (see ``nonzero_first``). Selections
    with more half-forks than there are zero-exponent marks are still produced;
    their multiplicity factor ``(n-r)!/(n-r-h)!`` is zero.
    """
    n = len(k)
    r = check_nonzero_first(k)
    bound = n // 2

    def rec(remaining, pairs, halves, comp):
        if not remaining:
            yield ReducedSelection(n, r, tuple(pairs), tuple(halves), tuple(comp))
            return
        first, rest = remaining[0], remaining[1:]
        comp.append(first)
        yield from rec(rest, pairs, halves, comp)
        comp.pop()
        if len(pairs) + len(halves) >= bound:
            return
        halves.append(first)
        yield from rec(rest, pairs, halves, comp)
        halves.pop()
        for i, other in enumerate(rest):
            pairs.append((first, other))
            yield from rec(rest[:i] + rest[i + 1:], pairs, halves, comp)
            pairs.pop()

    yield from rec(tuple(range(1, r + 1)), [], [], [])


def project_to_reduced(p: HalfPartition, k: Sequence[int]) -> ReducedSelection:
    """Forget singletons and zero-exponent fork members of ``p``."""
    if len(k) != p.n:
        raise ValueError("exponent vector length differs from partition size")
    r = check_nonzero_first(k)
    full, halves = [], []
    for a, b in p.pairs:
        if k[a - 1] and k[b - 1]:
            full.append((a, b))
        elif k[a - 1]:
            halves.append(a)
        elif k[b - 1]:
            halves.append(b)
    used = {m for pr in full for m in pr} | set(halves)
    comp = tuple(m for m in range(1, r + 1) if m not in used)
    return ReducedSelection(p.n, r, tuple(sorted(full)), tuple(sorted(halves)), comp)
