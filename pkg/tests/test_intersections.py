import pytest
from hypothesis import given, settings, strategies as st

from hassett_psi.graphs import enumerate_pk_graphs, s_vector
from hassett_psi.intersections import (
    DimensionMismatchError,
    DomainError,
    EmptyModuliSpaceError,
    PsiHatMonomial,
    direct_term,
    expand_class,
    integrate_direct,
    integrate_pk,
    integrate_reduced,
    pk_term,
    psi_integral_m0n,
    reduced_term,
)
from hassett_psi.partitions import enumerate_partitions, enumerate_reduced, nonzero_first

from oracles import count_words, partition_sum_oracle, top_exponent_vectors

ENGINES = (integrate_direct, integrate_reduced, integrate_pk)


@pytest.mark.parametrize(
    "k, value, breakdown",
    [
        ((2, 0, 0, 0, 0), -3, None),
        ((1, 1, 0, 0, 0), 1, {0: 2, 1: -7, 2: 6}),
        ((1, 1, 1, 0, 0, 0), 3, {0: 6, 1: -24, 2: 27, 3: -6}),
        ((3, 0, 0, 0, 0, 0), -4, None),
        ((4, 0, 0, 0, 0, 0, 0), -5, None),
    ],
)
def test_examples_against_brute_force(k, value, breakdown):
    assert partition_sum_oracle(k) == value
    if breakdown is not None:
        assert partition_sum_oracle(k, by_forks=True) == breakdown
    for engine in ENGINES:
        assert engine(k) == value


def test_direct_fork_breakdown():
    k = (1, 1, 1, 0, 0, 0)
    got = {}
    for p in enumerate_partitions(6):
        got[p.fork_count] = got.get(p.fork_count, 0) + direct_term(p, k)
    assert got == {0: 6, 1: -24, 2: 27, 3: -6}


@pytest.mark.parametrize("n", range(5, 11))
def test_engines_agree(n):
    for k in top_exponent_vectors(n):
        values = {engine(k) for engine in ENGINES}
        assert len(values) == 1, (k, values)
        if n <= 7:
            assert values == {partition_sum_oracle(k)}


@settings(deadline=None, max_examples=40)
@given(st.sampled_from([v for n in range(5, 10) for v in top_exponent_vectors(n)]), st.randoms())
def test_permutation_invariance(k, rnd):
    shuffled = list(k)
    rnd.shuffle(shuffled)
    value = integrate_direct(k)
    assert integrate_direct(shuffled) == value
    assert integrate_reduced(shuffled) == integrate_pk(shuffled) == value


@pytest.mark.parametrize("n", range(5, 13))
def test_single_exponent_family(n):
    k = (n - 3,) + (0,) * (n - 1)
    assert integrate_reduced(k) == integrate_pk(k) == 2 - n
    if n <= 10:
        assert integrate_direct(k) == 2 - n


@pytest.mark.parametrize("k", [v for n in range(5, 9) for v in top_exponent_vectors(n)])
def test_literal_sums_match_memoized(k):
    reduced = sum(reduced_term(sel, k) for sel in enumerate_reduced(k))
    s = s_vector(k)
    pk = sum(pk_term(g, s) for g in enumerate_pk_graphs(s))
    assert reduced == integrate_reduced(k)
    assert pk == integrate_pk(k)


def _expected_term_count(k):
    # partitions in which no fork joins two zero exponents
    n = len(k)
    return sum(
        1
        for p in enumerate_partitions(n)
        if all(k[a - 1] + k[b - 1] >= 1 for a, b in p.pairs)
    )


def test_expand_class_fundamental():
    terms = expand_class((0, 0, 0, 0, 0))
    assert len(terms) == 1 and terms[0].graph.partition.fork_count == 0


@pytest.mark.parametrize("k, count", [((2, 0, 0, 0, 0), 5), ((1, 1, 1, 0, 0, 0), 46)])
def test_expand_class_counts(k, count):
    terms = expand_class(k)
    assert len(terms) == count == _expected_term_count(k)
    for t in terms:
        assert t.sign == (-1) ** t.graph.partition.fork_count
        assert t.degree() == sum(k) - t.graph.partition.fork_count


@pytest.mark.parametrize("k", [v for n in range(5, 8) for v in top_exponent_vectors(n)])
def test_expand_class_integrates_to_direct(k):
    assert sum(t.integral() for t in expand_class(k)) == integrate_direct(k)


def test_expand_class_renders():
    lines = [str(t) for t in expand_class((2, 0, 0, 0, 0))]
    assert lines[0] == "+ [{1}{2}{3}{4}{5}] psi_1^2"
    assert any(line.startswith("- [{1,2}{3}{4}{5}] psi_*{1,2}^1") for line in lines)


def test_expand_class_small_n():
    with pytest.raises(DomainError, match="n >= 5"):
        expand_class((1, 0, 0, 0))


@pytest.mark.parametrize("k", [(1, 0, 0), (0, 0, 0), (1, 0, 0, 0), (0, 0, 0, 0)])
def test_empty_space(k):
    for engine in ENGINES:
        with pytest.raises(EmptyModuliSpaceError, match="empty moduli space"):
            engine(k)


@pytest.mark.parametrize("k", [(1, 1, 1, 0, 0), (0, 0, 0, 0, 0), (3, 0, 0, 0, 0, 0, 0)])
def test_dimension_mismatch(k):
    for engine in ENGINES:
        with pytest.raises(DimensionMismatchError, match="dimension mismatch"):
            engine(k)


def test_monomial_validation():
    with pytest.raises(DimensionMismatchError):
        PsiHatMonomial(5, (2, 0, 0, 0))
    with pytest.raises(ValueError):
        PsiHatMonomial(5, (3, -1, 0, 0, 0))
    m = PsiHatMonomial(5, [2, 0, 0, 0, 0])
    assert PsiHatMonomial.of(m) is m and m.degree == 2
    assert integrate_direct(m) == -3


def test_engines_accept_unsorted_exponents():
    assert integrate_reduced((0, 0, 1, 0, 1)) == 1
    assert nonzero_first((0, 0, 1, 0, 1)) == (1, 1, 0, 0, 0)


@pytest.mark.parametrize(
    "n, k, expected",
    [(3, (0, 0, 0), 1), (5, (2, 0, 0, 0, 0), 1), (5, (1, 1, 0, 0, 0), 2), (6, (1, 1, 1, 0, 0, 0), 6)],
)
def test_psi_integral_m0n(n, k, expected):
    assert psi_integral_m0n(n, k) == expected == count_words(k)


@pytest.mark.parametrize(
    "k", [v for n in range(4, 10) for v in top_exponent_vectors(n) if v[-1] == 0]
)
def test_psi_integral_m0n_string_recurrence(k):
    # a psi-free mark lowers one of the other exponents by one
    n, rest = len(k), k[:-1]
    rhs = sum(
        psi_integral_m0n(n - 1, rest[:j] + (rest[j] - 1,) + rest[j + 1:])
        for j in range(n - 1)
        if rest[j] >= 1
    )
    assert psi_integral_m0n(n, k) == rhs


def test_psi_integral_m0n_rejects_mismatch():
    with pytest.raises(DimensionMismatchError):
        psi_integral_m0n(5, (1, 0, 0, 0, 0))
