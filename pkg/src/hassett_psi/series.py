"""Truncated formal power series in ``t_0, t_1, ...`` over the rationals.

Monomial keys are exponent tuples ``s`` with trailing zeros trimmed, so
``t_0^3 t_1`` is ``(3, 1)``. A series keeps only monomials with ``|s| <= n_max``.
Anything an operator pushes past ``n_max`` is dropped.
"""
from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .arith import factorial, falling_factorial, multinomial
from .intersections import DimensionMismatchError, EmptyModuliSpaceError

__all__ = [
    "FormalSeries",
    "trim",
    "graded_keys",
    "s_factorial",
    "fork_multiset_weight",
    "build_witten_F",
    "apply_L",
    "apply_normal_ordered_exp_negL",
    "build_G",
    "intersection_from_G",
    "check_string_equation",
]

Key = tuple[int, ...]


def trim(s: Iterable[int]) -> Key:
    s = list(s)
    while s and s[-1] == 0:
        s.pop()
    return tuple(s)


def _bump(s: Sequence[int], idx: int, by: int) -> list[int]:
    out = list(s) + [0] * (idx + 1 - len(s))
    out[idx] += by
    return out


def s_factorial(s: Sequence[int]) -> int:
    result = 1
    for c in s:
        result *= factorial(c)
    return result


class FormalSeries:
    """Sparse map ``key -> Fraction`` truncated at total degree ``n_max``."""

    def __init__(self, terms: Mapping[Sequence[int], Fraction] | None = None, n_max: int = 0):
        self.n_max = n_max
        self.terms: dict[Key, Fraction] = {}
        for s, c in (terms or {}).items():
            self.add_term(s, c)

    def add_term(self, s: Sequence[int], c) -> None:
        key = trim(s)
        if any(e < 0 for e in key):
            raise ValueError(f"negative exponent in key {key}")
        if sum(key) > self.n_max:
            return
        value = self.terms.get(key, 0) + Fraction(c)
        if value:
            self.terms[key] = value
        else:
            self.terms.pop(key, None)

    def coefficient(self, s: Sequence[int]) -> Fraction:
        return self.terms.get(trim(s), Fraction(0))

    def __getitem__(self, s):
        return self.coefficient(s)

    def __iter__(self) -> Iterator[Key]:
        return iter(sorted(self.terms))

    def __len__(self):
        return len(self.terms)

    def items(self):
        return [(s, self.terms[s]) for s in sorted(self.terms)]

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        out = self.copy(min(self.n_max, other.n_max))
        for s, c in other.terms.items():
            out.add_term(s, c)
        return out

    def __neg__(self) -> "FormalSeries":
        return FormalSeries({s: -c for s, c in self.terms.items()}, self.n_max)

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        return self + (-other)

    def copy(self, n_max: int | None = None) -> "FormalSeries":
        return FormalSeries(self.terms, self.n_max if n_max is None else n_max)

    def __repr__(self):
        return f"FormalSeries({len(self.terms)} terms, n_max={self.n_max})"

    def to_records(self) -> list[dict]:
        return [
            {"s": list(s), "num": str(c.numerator), "den": str(c.denominator)}
            for s, c in self.items()
        ]

    def to_json(self) -> str:
        """Byte-stable JSON: records sorted by key, big numbers as strings."""
        return json.dumps(self.to_records(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, n_max: int) -> "FormalSeries":
        records = json.loads(text)
        return cls({tuple(r["s"]): Fraction(int(r["num"]), int(r["den"])) for r in records}, n_max)


def graded_keys(n_max: int, n_min: int = 3) -> Iterator[Key]:
    """All ``s`` with ``n_min <= |s| <= n_max`` and ``sum(i s_i) = |s| - 3``."""

    def parts(total, largest):
        # partitions of total into parts <= largest, as descending lists
        if total == 0:
            yield []
            return
        for p in range(min(total, largest), 0, -1):
            for rest in parts(total - p, p):
                yield [p] + rest

    for n in range(max(n_min, 3), n_max + 1):
        for exps in parts(n - 3, n - 3):
            if len(exps) > n:
                continue
            s = [0] * ((exps[0] if exps else 0) + 1)
            s[0] = n - len(exps)
            for e in exps:
                s[e] += 1
            yield trim(s)


def _dense(s: Sequence[int]) -> list[int]:
    return [v for v in range(len(s)) for _ in range(s[v])]


def build_witten_F(n_max: int) -> FormalSeries:
    """Genus-0 Witten potential, ``sum_s t^s / s! <tau^s>`` up to ``|s| <= n_max``.

    Includes the ``t_0^3 / 3!`` term.
    """
    if n_max < 3:
        raise ValueError("build_witten_F needs n_max >= 3")
    f = FormalSeries(n_max=n_max)
    for s in graded_keys(n_max):
        n = sum(s)
        f.add_term(s, Fraction(multinomial(n - 3, _dense(s)), s_factorial(s)))
    return f


def apply_L(f: FormalSeries) -> FormalSeries:
    """``L = 1/2 sum_{i,j} t_i t_j d/dt_{i+j-1}``; the ``(0, 0)`` term is zero."""
    out = FormalSeries(n_max=f.n_max)
    half = Fraction(1, 2)
    for s, c in f.terms.items():
        if sum(s) + 1 > f.n_max:
            continue
        for d, sd in enumerate(s):
            if not sd:
                continue
            for i in range(d + 2):
                j = d + 1 - i
                new = _bump(_bump(_bump(s, d, -1), i, 1), j, 1)
                out.add_term(new, half * sd * c)
    return out


def fork_multiset_weight(pairs: Iterable[tuple[int, int]]) -> Fraction:
    """Coefficient of ``prod t_i t_j d/dt_{i+j-1}`` in ``:exp(-L):``.

    ``:L^m:/m!`` is ``(2^m m!)^-1`` times a sum over sequences of ``m``
    ordered index pairs, and normal ordering lets every sequence that
    rearranges to the same multiset contribute the same operator. The count
    of such sequences is ``m!/prod(j_f!)`` fork orderings times two
    orientations per fork with distinct indices.
    """
    pairs = [tuple(sorted(p)) for p in pairs]
    if any(p == (0, 0) for p in pairs):
        raise ValueError("(0, 0) has derivative index -1 and is not an operator term")
    m = len(pairs)
    mult = Counter(pairs)
    sequences = multinomial(m, list(mult.values())) * 2 ** sum(1 for a, b in pairs if a != b)
    return Fraction((-1) ** m * sequences, 2**m * factorial(m))


def _pair_types(d: int) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)``, ``i <= j``, with ``i + j - 1 = d``."""
    return [(i, d + 1 - i) for i in range((d + 1) // 2 + 1)]


def _multisets(items: Sequence, size: int) -> Iterator[tuple]:
    if size == 0:
        yield ()
        return
    if not items:
        return
    first, rest = items[0], items[1:]
    for c in range(size, -1, -1):
        for tail in _multisets(rest, size - c):
            yield (first,) * c + tail


def apply_normal_ordered_exp_negL(f: FormalSeries) -> FormalSeries:
    """Apply ``:exp(-L):`` to ``f``.

    For each source monomial every derivative acts on that monomial itself,
    never on the ``t``'s another fork inserted. Iterating ``apply_L`` would
    give ``L^m`` instead, which differs from ``:L^m:`` for ``m >= 2``.
    """
    out = FormalSeries(n_max=f.n_max)
    weight = lru_cache(maxsize=None)(lambda pairs: fork_multiset_weight(pairs))
    for s, c in f.terms.items():
        budget = f.n_max - sum(s)
        support = [d for d, sd in enumerate(s) if sd]
        # number of derivatives taken in each supported index
        ranges = [range(min(s[d], budget) + 1) for d in support]
        for counts in product(*ranges):
            if sum(counts) > budget:
                continue
            base = list(s)
            deriv = c
            for d, cd in zip(support, counts):
                deriv *= falling_factorial(s[d], cd)
                base[d] -= cd
            choices = [list(_multisets(_pair_types(d), cd)) for d, cd in zip(support, counts)]
            for combo in product(*choices):
                pairs = tuple(sorted(p for group in combo for p in group))
                new = list(base)
                for i, j in pairs:
                    new = _bump(_bump(new, i, 1), j, 1)
                out.add_term(new, weight(pairs) * deriv)
    return out


def build_G(n_max: int) -> FormalSeries:
    """Generating function of psi-hat top intersections.

    ``:exp(-L):`` applied to the Witten potential, with ``t_0^3/3!`` removed and
    ``2 t_0^3 t_1/3!`` added back so the empty 3- and 4-point spaces drop out.
    """
    if n_max < 5:
        raise ValueError("build_G needs n_max >= 5")
    g = apply_normal_ordered_exp_negL(build_witten_F(n_max))
    g.add_term((3,), Fraction(-1, 6))
    g.add_term((3, 1), Fraction(2, 6))
    return g


def intersection_from_G(g: FormalSeries, s: Sequence[int]) -> int:
    """``<tau_hat^s> = s! * [t^s] G``."""
    s = trim(s)
    n = sum(s)
    if n in (3, 4):
        raise EmptyModuliSpaceError(f"empty moduli space: {n} marks of weight 1/2")
    if n < 5 or sum(i * c for i, c in enumerate(s)) != n - 3:
        raise DimensionMismatchError(f"dimension mismatch: s = {s} is not graded")
    if n > g.n_max:
        raise ValueError(f"|s| = {n} exceeds truncation n_max = {g.n_max}")
    value = s_factorial(s) * g.coefficient(s)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral coefficient s! * G[{s}] = {value}")
    return int(value)


def check_string_equation(f: FormalSeries) -> bool:
    """Check ``dF/dt_0 = t_0^2/2 + sum_i t_{i+1} dF/dt_i`` on ``|s| <= n_max - 1``."""
    window = f.n_max - 1
    lhs = FormalSeries(n_max=window)
    rhs = FormalSeries({(2,): Fraction(1, 2)}, n_max=window)
    for s, c in f.terms.items():
        if s and s[0]:
            lhs.add_term(_bump(s, 0, -1), c * s[0])
        for i, si in enumerate(s):
            if si:
                rhs.add_term(_bump(_bump(s, i, -1), i + 1, 1), c * si)
    return lhs == rhs
