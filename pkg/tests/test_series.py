from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hassett_psi.graphs import PkGraph, aut_count, exponents_from_s_vector
from hassett_psi.intersections import (
    DimensionMismatchError,
    EmptyModuliSpaceError,
    integrate_direct,
)
from hassett_psi.series import (
    FormalSeries,
    apply_L,
    apply_normal_ordered_exp_negL,
    build_G,
    build_witten_F,
    check_string_equation,
    fork_multiset_weight,
    graded_keys,
    intersection_from_G,
    s_factorial,
)

from oracles import count_words


@pytest.fixture(scope="module")
def G9():
    return build_G(9)


@pytest.mark.parametrize(
    "s, expected",
    [
        ((3,), Fraction(1, 6)),
        ((3, 1), Fraction(1, 6)),
        ((4, 0, 1), Fraction(1, 24)),
        ((3, 2), Fraction(1, 6)),
        ((5, 0, 0, 1), Fraction(1, 120)),
        ((4, 1, 1), Fraction(1, 8)),
    ],
)
def test_witten_F_coefficients(s, expected):
    assert build_witten_F(6).coefficient(s) == expected


def test_witten_F_small():
    f = build_witten_F(5)
    assert list(f.items()) == [
        ((3,), Fraction(1, 6)),
        ((3, 1), Fraction(1, 6)),
        ((3, 2), Fraction(1, 6)),
        ((4, 0, 1), Fraction(1, 24)),
    ]


@pytest.mark.parametrize("s", list(graded_keys(8)))
def test_witten_F_matches_word_count(s):
    dense = [v for v in range(len(s)) for _ in range(s[v])]
    assert build_witten_F(8).coefficient(s) * s_factorial(s) == count_words(dense)


def test_apply_L_examples():
    f = FormalSeries({(3,): Fraction(1, 6)}, n_max=6)
    assert apply_L(f).coefficient((3, 1)) == Fraction(1, 2)
    assert len(apply_L(FormalSeries({(): 1}, n_max=4))) == 0


@pytest.mark.parametrize("s", [(3,), (3, 1), (2, 2), (1, 0, 1), (0, 2, 1)])
def test_single_fork_part_is_minus_L(s):
    # truncating at |s| + 1 keeps only the m = 0 and m = 1 terms
    f = FormalSeries({s: Fraction(1)}, n_max=sum(s) + 1)
    assert apply_normal_ordered_exp_negL(f) == f - apply_L(f)


def test_normal_ordering_differs_from_iterated_L():
    f = FormalSeries({(0, 2): Fraction(1)}, n_max=4)
    ordered = apply_normal_ordered_exp_negL(f)
    iterated = f - apply_L(f) + FormalSeries(
        {s: c / 2 for s, c in apply_L(apply_L(f)).items()}, n_max=4
    )
    top = lambda g: {s: c for s, c in g.items() if sum(s) == 4}
    assert top(ordered) != top(iterated)
    assert {s: c for s, c in ordered.items() if sum(s) < 4} == {
        s: c for s, c in iterated.items() if sum(s) < 4
    }


def test_exp_negL_of_F_example():
    assert apply_normal_ordered_exp_negL(build_witten_F(5)).coefficient((3, 2)) == Fraction(1, 12)


def test_G_small():
    g = build_G(5)
    assert list(g.items()) == [((3, 2), Fraction(1, 12)), ((4, 0, 1), Fraction(-1, 8))]
    assert g.coefficient((3,)) == 0 and g.coefficient((3, 1)) == 0


def test_G_low_degree_vanishes(G9):
    assert not [s for s in G9 if sum(s) <= 4]


def test_G_graded_and_integral(G9):
    for s, c in G9.items():
        assert sum(i * v for i, v in enumerate(s)) == sum(s) - 3
        assert (c * s_factorial(s)).denominator == 1


@pytest.mark.parametrize("s", [s for s in graded_keys(9, 5)])
def test_G_matches_direct(G9, s):
    assert intersection_from_G(G9, s) == integrate_direct(exponents_from_s_vector(s))


def test_intersection_from_G_examples(G9):
    assert intersection_from_G(G9, (4, 0, 1)) == -3
    assert intersection_from_G(G9, (3, 2)) == 1
    assert intersection_from_G(G9, [3, 3, 0]) == 3


def test_intersection_from_G_errors(G9):
    with pytest.raises(EmptyModuliSpaceError):
        intersection_from_G(G9, (3, 1))
    with pytest.raises(DimensionMismatchError):
        intersection_from_G(G9, (5,))
    with pytest.raises(ValueError, match="exceeds"):
        intersection_from_G(G9, (9, 0, 0, 0, 0, 0, 0, 1))
    broken = G9.copy()
    broken.add_term((4, 0, 1), Fraction(1, 7))
    with pytest.raises(ArithmeticError):
        intersection_from_G(broken, (4, 0, 1))


@pytest.mark.parametrize("n_max", [5, 10])
def test_string_equation(n_max):
    assert check_string_equation(build_witten_F(n_max))


def test_string_equation_detects_perturbation():
    f = build_witten_F(8)
    f.add_term((4, 1, 1), Fraction(1, 1000))
    assert not check_string_equation(f)


def test_json_round_trip_and_stability():
    g = build_G(7)
    text = g.to_json()
    assert text == build_G(7).to_json()
    assert FormalSeries.from_json(text, 7) == g


def test_series_truncation_and_arithmetic():
    f = FormalSeries({(1, 0, 0): Fraction(1), (0, 3): Fraction(2)}, n_max=2)
    assert list(f) == [(1,)]
    assert len(f - f) == 0
    assert (f + f).coefficient((1,)) == 2


def brute_weight(pairs):
    """Expand :exp(-L): over ordered index sequences and keep those matching ``pairs``."""
    target = Counter(tuple(sorted(p)) for p in pairs)
    m = len(pairs)
    top = max(max(p) for p in pairs) if pairs else 0
    ordered = [(i, j) for i in range(top + 1) for j in range(top + 1) if i + j >= 1]
    hits = sum(
        1 for seq in product(ordered, repeat=m)
        if Counter(tuple(sorted(p)) for p in seq) == target
    )
    return Fraction((-1) ** m * hits, 2**m * _fact(m))


def _fact(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


pair_st = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda p: p != (0, 0))


@settings(deadline=None, max_examples=60)
@given(st.lists(pair_st, max_size=3))
def test_fork_weight_by_sequence_count(pairs):
    w = fork_multiset_weight(pairs)
    assert w == brute_weight(pairs)
    assert w == Fraction((-1) ** len(pairs), aut_count(PkGraph.make(pairs, [])))


def test_fork_weight_rejects_zero_pair():
    with pytest.raises(ValueError):
        fork_multiset_weight([(0, 0)])
