"""Fork-star dual graphs: P-graphs, decorated P-graphs and P_k-graphs.

A P-graph is a central vertex with some forks attached, one per pair of a
``HalfPartition``; singletons are legs on the central vertex. Replacing every
mark by its exponent gives a P_k-graph, stored as two sorted multisets so
equal graphs compare equal.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .arith import factorial, falling_factorial
from .partitions import HalfPartition

__all__ = [
    "PGraph",
    "DecoratedPGraph",
    "PkGraph",
    "IncompatibleSVectorError",
    "s_vector",
    "exponents_from_s_vector",
    "pk_from_p",
    "aut_count",
    "count_preimages",
    "enumerate_pk_graphs",
    "to_dot",
]


class IncompatibleSVectorError(ValueError):
    pass


@dataclass(frozen=True)
class PGraph:
    partition: HalfPartition

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def forks(self):
        return self.partition.pairs

    @property
    def center_legs(self):
        return self.partition.singletons

    @property
    def central_valence(self) -> int:
        """Legs plus fork edges at the central vertex."""
        return self.partition.size


@dataclass(frozen=True)
class DecoratedPGraph:
    graph: PGraph
    colored: frozenset

    @classmethod
    def decorate(cls, graph: PGraph, k: Sequence[int]) -> "DecoratedPGraph":
        if len(k) != graph.n:
            raise ValueError("exponent vector length differs from graph size")
        return cls(graph, frozenset(i + 1 for i, e in enumerate(k) if e))

    def fork_colors(self):
        """Per fork, how many of its two half-edges are colored."""
        return [sum(m in self.colored for m in f) for f in self.graph.forks]


@dataclass(frozen=True)
class PkGraph:
    fork_pairs: tuple[tuple[int, int], ...]
    center_legs: tuple[int, ...]

    @classmethod
    def make(cls, fork_pairs, center_legs) -> "PkGraph":
        """Build the canonical form from arbitrary orderings."""
        forks = tuple(sorted(tuple(sorted(p)) for p in fork_pairs))
        return cls(forks, tuple(sorted(center_legs)))

    def canonical(self) -> "PkGraph":
        return PkGraph.make(self.fork_pairs, self.center_legs)

    @property
    def m(self) -> int:
        return len(self.fork_pairs)

    @property
    def n(self) -> int:
        return 2 * len(self.fork_pairs) + len(self.center_legs)

    def fork_usage(self) -> Counter:
        """``l_v``: how often each exponent value sits on a fork."""
        return Counter(v for p in self.fork_pairs for v in p)

    def content(self) -> Counter:
        c = self.fork_usage()
        c.update(self.center_legs)
        return c


def s_vector(k: Sequence[int]) -> tuple[int, ...]:
    """``s_i`` = number of marks with exponent ``i``; trailing zeros trimmed."""
    if not k:
        return ()
    if min(k) < 0:
        raise ValueError("negative exponent")
    s = [0] * (max(k) + 1)
    for e in k:
        s[e] += 1
    return tuple(s)


def exponents_from_s_vector(s: Sequence[int]) -> tuple[int, ...]:
    """Dense exponent vector for ``s``, nonzero exponents first (descending)."""
    if any(c < 0 for c in s):
        raise ValueError("negative multiplicity in s-vector")
    return tuple(v for v in range(len(s) - 1, -1, -1) for _ in range(s[v]))


def pk_from_p(p: PGraph | HalfPartition, k: Sequence[int]) -> PkGraph:
    part = p.partition if isinstance(p, PGraph) else p
    if len(k) != part.n:
        raise ValueError("exponent vector length differs from graph size")
    return PkGraph.make(
        [(k[a - 1], k[b - 1]) for a, b in part.pairs],
        [k[a - 1] for a in part.singletons],
    )


def aut_count(g: PkGraph) -> int:
    """Automorphisms of the fork subgraph: ``2^d * prod(j_f!)``.

    ``d`` counts forks with equal exponents (flip symmetry); ``j_f`` are the
    multiplicities of identical forks (swap symmetry).
    """
    d = sum(1 for a, b in g.fork_pairs if a == b)
    result = 2**d
    for j in Counter(g.fork_pairs).values():
        result *= factorial(j)
    return result


def count_preimages(g: PkGraph, s: Sequence[int]) -> int:
    """Number of P-graphs mapping to ``g`` for marks with multiplicities ``s``."""
    content = g.content()
    top = max(len(s), max(content, default=-1) + 1)
    for v in range(top):
        sv = s[v] if v < len(s) else 0
        if content.get(v, 0) != sv:
            raise IncompatibleSVectorError("incompatible s-vector")
    num = 1
    for v, l in g.fork_usage().items():
        num *= falling_factorial(s[v], l)
    aut = aut_count(g)
    if num % aut:
        raise ArithmeticError(f"non-integral preimage count for {g}")
    return num // aut


def enumerate_pk_graphs(s: Sequence[int]) -> Iterator[PkGraph]:
    """Yield every canonical P_k-graph with exponent content ``s`` once.

    Works on multisets directly: a multiplicity is chosen for each possible
    fork type ``(a, b)``, ``a <= b``, in lexicographic order, subject to the
    supply ``s``; leftover exponents become central legs. Graphs with
    ``(0, 0)`` forks are included.
    """
    values = [v for v in range(len(s)) if s[v]]
    types = [(a, b) for i, a in enumerate(values) for b in values[i:]]

    def rec(i, supply, forks):
        if i == len(types):
            legs = [v for v in values for _ in range(supply[v])]
            yield PkGraph(tuple(forks), tuple(legs))
            return
        a, b = types[i]
        j = 0
        while True:
            yield from rec(i + 1, supply, forks)
            supply[a] -= 1
            supply[b] -= 1
            j += 1
            if supply[a] < 0 or supply[b] < 0:
                break
            forks.append((a, b))
        supply[a] += j
        supply[b] += j
        del forks[len(forks) - (j - 1):]

    yield from rec(0, list(s), [])


def to_dot(g: PGraph | HalfPartition | PkGraph) -> str:
    """Render a fork-star graph as an undirected DOT graph.

    Nodes: ``c`` (center), ``f0..f{m-1}`` (forks) and leaves ``h{index}``.
    For a P-graph the leaf index and label are the mark; for a P_k-graph the
    leaves are numbered in canonical order and labeled by exponent.
    """
    if isinstance(g, HalfPartition):
        g = PGraph(g)
    if isinstance(g, PGraph):
        name = "pgraph"
        forks = [((a, str(a)), (b, str(b))) for a, b in g.forks]
        legs = [(a, str(a)) for a in g.center_legs]
    else:
        name = "pkgraph"
        counter = iter(range(g.n))
        forks = [((next(counter), str(a)), (next(counter), str(b))) for a, b in g.fork_pairs]
        legs = [(next(counter), str(v)) for v in g.center_legs]

    lines = [f"graph {name} {{", '  c [label="c", shape=circle];']
    for i, leaves in enumerate(forks):
        lines.append(f'  f{i} [label="", shape=point];')
        lines.append(f"  c -- f{i};")
        for idx, label in leaves:
            lines.append(f'  h{idx} [label="{label}", shape=plaintext];')
            lines.append(f"  f{i} -- h{idx};")
    for idx, label in legs:
        lines.append(f'  h{idx} [label="{label}", shape=plaintext];')
        lines.append(f"  c -- h{idx};")
    lines.append("}")
    return "\n".join(lines) + "\n"
