"""Top intersections of psi-hat classes on the all-weights-1/2 Hassett space.

Three engines compute the same integer and share no intermediate sums:

* ``integrate_direct`` sums over every partition of ``[n]`` into blocks of
  size <= 2;
* ``integrate_reduced`` sums over selections inside the nonzero-exponent
  marks, with zero-exponent fork partners collapsed into a falling factorial;
* ``integrate_pk`` sums over P_k-graphs weighted by their preimage counts.

``integrate_reduced`` and ``integrate_pk`` memoize on exponent multiplicities,
so a case like ``n = 61`` with 22 nonzero exponents runs in seconds. The
per-term helpers ``reduced_term`` and ``pk_term`` evaluate one summand of
each sum literally; the test suite checks the memoized totals against them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .arith import factorial, falling_factorial, multinomial
from .graphs import PGraph, PkGraph, count_preimages, s_vector
from .partitions import (
    HalfPartition,
    ReducedSelection,
    enumerate_partitions,
    nonzero_first,
)

__all__ = [
    "DomainError",
    "EmptyModuliSpaceError",
    "DimensionMismatchError",
    "PsiHatMonomial",
    "StratumClassTerm",
    "expand_class",
    "integrate_direct",
    "integrate_reduced",
    "integrate_pk",
    "psi_integral_m0n",
    "reduced_term",
    "pk_term",
    "direct_term",
]


class DomainError(ValueError):
    """Input outside the domain of the formulas (CLI exit code 2)."""


class EmptyModuliSpaceError(DomainError):
    pass


class DimensionMismatchError(DomainError):
    pass


@dataclass(frozen=True)
class PsiHatMonomial:
    """``psi_hat_1^k_1 ... psi_hat_n^k_n``."""

    n: int
    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(e) for e in self.k))
        if len(self.k) != self.n:
            raise DimensionMismatchError(
                f"dimension mismatch: {len(self.k)} exponents for n = {self.n}"
            )
        if any(e < 0 for e in self.k):
            raise ValueError(f"negative exponent in {self.k}")

    @classmethod
    def of(cls, m: "PsiHatMonomial | Sequence[int]") -> "PsiHatMonomial":
        if isinstance(m, PsiHatMonomial):
            return m
        k = tuple(m)
        return cls(len(k), k)

    @property
    def degree(self) -> int:
        return sum(self.k)

    def check_top(self):
        """Raise unless this is a top intersection on a nonempty space."""
        if self.n in (3, 4):
            raise EmptyModuliSpaceError(
                f"empty moduli space: no stable curves with {self.n} marks of weight 1/2"
            )
        if self.n < 3 or self.degree != self.n - 3:
            raise DimensionMismatchError(
                f"dimension mismatch: degree {self.degree} but dim = n - 3 = {self.n - 3}"
            )


@dataclass(frozen=True)
class StratumClassTerm:
    """One summand of the class-level expansion of a psi-hat monomial.

    ``center_leg_exponents`` maps central marks to psi exponents and
    ``fork_node_exponents`` maps each fork (a pair of marks) to the exponent of
    psi at the node branch on the central component.
    """

    sign: int
    graph: PGraph
    center_leg_exponents: tuple[tuple[int, int], ...]
    fork_node_exponents: tuple[tuple[tuple[int, int], int], ...]

    def degree(self) -> int:
        return sum(e for _, e in self.center_leg_exponents) + sum(
            e for _, e in self.fork_node_exponents
        )

    def integral(self) -> int:
        """Signed degree of this term (0 unless its degree fills the stratum)."""
        exps = [e for _, e in self.center_leg_exponents] + [
            e for _, e in self.fork_node_exponents
        ]
        return self.sign * multinomial(self.graph.partition.size - 3, exps)

    def __str__(self):
        psi = [f"psi_{m}^{e}" for m, e in self.center_leg_exponents if e]
        psi += [f"psi_*{{{a},{b}}}^{e}" for (a, b), e in self.fork_node_exponents if e]
        body = " ".join(psi) or "1"
        return f"{'+' if self.sign > 0 else '-'} [{self.graph.partition}] {body}"


def expand_class(m: PsiHatMonomial | Sequence[int]) -> list[StratumClassTerm]:
    """Write a psi-hat monomial as a signed sum of decorated boundary strata.

    Terms whose fork exponent ``k_a + k_b - 1`` is negative are zero classes
    and are left out. Order follows ``enumerate_partitions``.
    """
    m = PsiHatMonomial.of(m)
    if m.n < 5:
        raise DomainError("theorem requires n >= 5")
    k = m.k
    terms = []
    for p in enumerate_partitions(m.n):
        forks = tuple(((a, b), k[a - 1] + k[b - 1] - 1) for a, b in p.pairs)
        if any(e < 0 for _, e in forks):
            continue
        legs = tuple((a, k[a - 1]) for a in p.singletons)
        terms.append(StratumClassTerm((-1) ** p.fork_count, PGraph(p), legs, forks))
    return terms


def direct_term(p: HalfPartition, k: Sequence[int]) -> int:
    parts = [k[a - 1] + k[b - 1] - 1 for a, b in p.pairs]
    parts += [k[a - 1] for a in p.singletons]
    return (-1) ** p.fork_count * multinomial(p.size - 3, parts)


def integrate_direct(m: PsiHatMonomial | Sequence[int]) -> int:
    """Signed sum of psi integrals over all partitions of ``[n]``."""
    m = PsiHatMonomial.of(m)
    m.check_top()
    return sum(direct_term(p, m.k) for p in enumerate_partitions(m.n))


def reduced_term(sel: ReducedSelection, k: Sequence[int]) -> int:
    """One summand of the reduced sum; ``k`` is ordered nonzero-first."""
    n, r = sel.n, sel.r
    parts = [k[a - 1] + k[b - 1] - 1 for a, b in sel.full_pairs]
    parts += [k[a - 1] - 1 for a in sel.half_forks]
    parts += [k[c - 1] for c in sel.complement]
    sign = (-1) ** (sel.s + sel.t // 2)
    mult = falling_factorial(n - r, sel.s - sel.t)
    return sign * mult * multinomial(n - 3 - (sel.s - sel.t // 2), parts)


def integrate_reduced(m: PsiHatMonomial | Sequence[int]) -> int:
    """Reduced-partition sum over the nonzero-exponent marks.

    Walks the selections mark by mark (the smallest unplaced mark is a
    central leg, a half-fork, or paired with a later mark). The sum over
    completions depends only on the multiset of exponents still unplaced, so
    it is memoized on that multiset and kept as a table indexed by
    ``(full pairs, half forks)``. Each table entry carries the product of
    ``1/part!`` over the placed blocks.
    """
    m = PsiHatMonomial.of(m)
    m.check_top()
    n = m.n
    k = nonzero_first(m.k)
    r = sum(1 for e in k if e)
    counts = [0] * (max(k) + 1)
    for e in k[:r]:
        counts[e] += 1
    inv_fact = [Fraction(1, factorial(i)) for i in range(2 * len(counts))]

    @lru_cache(maxsize=None)
    def rec(state: tuple[int, ...]) -> dict:
        a = next((v for v in range(len(state) - 1, 0, -1) if state[v]), 0)
        if a == 0:
            return {(0, 0): Fraction(1)}
        rest = list(state)
        rest[a] -= 1
        out: dict = {}

        def absorb(table, weight, dp, dh):
            for (p, h), w in table.items():
                key = (p + dp, h + dh)
                out[key] = out.get(key, 0) + weight * w

        sub = rec(tuple(rest))
        absorb(sub, inv_fact[a], 0, 0)
        absorb(sub, inv_fact[a - 1], 0, 1)
        for b in range(1, len(rest)):
            if rest[b]:
                partner = list(rest)
                partner[b] -= 1
                absorb(rec(tuple(partner)), rest[b] * inv_fact[a + b - 1], 1, 0)
        return out

    total = Fraction(0)
    for (p, h), w in rec(tuple(counts)).items():
        forks = p + h
        if forks > n // 2 or n - 3 - forks < 0:
            continue
        total += (-1) ** forks * falling_factorial(n - r, h) * factorial(n - 3 - forks) * w
    rec.cache_clear()
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral reduced sum {total}")
    return int(total)


def pk_term(g: PkGraph, s: Sequence[int]) -> int:
    """One summand of the P_k-graph sum."""
    parts = [a + b - 1 for a, b in g.fork_pairs] + list(g.center_legs)
    n = g.n
    return (-1) ** g.m * count_preimages(g, s) * multinomial(n - g.m - 3, parts)


def integrate_pk(m: PsiHatMonomial | Sequence[int]) -> int:
    """Sum over P_k-graphs of ``(-1)^m C_{P_k}`` times a psi integral.

    Both the preimage count and the multinomial factor over fork types, so
    the sum is taken one fork type at a time with the leftover exponent
    supply as memo key. Graphs with a ``(0, 0)`` fork contribute zero and are
    skipped.
    """
    m = PsiHatMonomial.of(m)
    m.check_top()
    n = m.n
    s = s_vector(m.k)
    values = [v for v in range(len(s)) if s[v]]
    types = [(a, b) for i, a in enumerate(values) for b in values[i:] if b > 0]
    # forks touching exponent 0 go last so the s_0 coordinate stays fixed longest
    types.sort(key=lambda ab: (ab[0] == 0, ab))
    weights = [
        Fraction(1, (2 if a == b else 1) * factorial(a + b - 1)) for a, b in types
    ]

    def leaf(supply: tuple[int, ...]) -> Fraction:
        forks = (n - sum(supply)) // 2
        if n - forks - 3 < 0:
            return Fraction(0)
        num = factorial(n - forks - 3)
        den = 1
        for v, c in enumerate(supply):
            num *= factorial(s[v])
            den *= factorial(c) * factorial(v) ** c
        return (-1) ** forks * Fraction(num, den)

    @lru_cache(maxsize=None)
    def rec(i: int, supply: tuple[int, ...]) -> Fraction:
        if i == len(types):
            return leaf(supply)
        a, b = types[i]
        w = weights[i]
        total = Fraction(0)
        cur = list(supply)
        j, power = 0, Fraction(1)
        while cur[a] >= 0 and cur[b] >= 0:
            total += power / factorial(j) * rec(i + 1, tuple(cur))
            cur[a] -= 1
            cur[b] -= 1
            j += 1
            power *= w
        return total

    total = rec(0, tuple(s))
    rec.cache_clear()
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral P_k sum {total}")
    return int(total)


def psi_integral_m0n(n: int, k: Sequence[int]) -> int:
    """``int psi_1^k_1 ... psi_n^k_n`` over the moduli space of n-pointed curves."""
    if n < 3 or len(k) != n or sum(k) != n - 3:
        raise DimensionMismatchError(
            f"dimension mismatch: need n >= 3 exponents summing to n - 3, got n={n}, k={tuple(k)}"
        )
    if any(e < 0 for e in k):
        raise ValueError(f"negative exponent in {tuple(k)}")
    return multinomial(n - 3, k)
