import itertools

import pytest
from hypothesis import given, strategies as st

from dlkoszul.seqcomb import (INF, Seq, admissible_basis, enumerate_admissible, excess,
                              free_unstable_basis, gamma_conditions, gamma_split,
                              is_admissible, lower_to_upper, omega, reindex,
                              reindex_inverse, stats, strictly_decreasing_words,
                              upper_to_lower, word_degree)


def compositions(n):
    """Every sequence of positive integers summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def brute_admissible(n):
    """Admissible sequences of degree n with positive entries, by filtering compositions."""
    return sorted((I for I in compositions(n) if is_admissible(I)), reverse=True)


def test_stats_of_empty():
    st_ = stats(())
    assert st_.length == 0 and st_.excess == INF


def test_stats_421():
    assert stats((4, 2, 1)) == (3, 7, 1, True)


def test_11_is_not_admissible():
    assert not stats((1, 1)).admissible


def test_omega_truncations():
    assert omega((3, 1), 0) == (3, 1)
    assert omega((3, 1), 1) == (1,)
    assert omega((3, 1), 2) == ()
    with pytest.raises(ValueError):
        omega((3, 1), 3)


def test_enumeration_examples():
    assert enumerate_admissible(3, strictly_positive=True) == [(3,), (2, 1)]
    assert enumerate_admissible(4, strictly_positive=True) == [(4,), (3, 1)]
    assert enumerate_admissible(3, 1, excess_at_most=2, strictly_positive=True) == []


@pytest.mark.parametrize("n", range(0, 13))
def test_enumeration_matches_brute_force(n):
    assert admissible_basis(n) == brute_admissible(n)


def test_free_unstable_basis_uses_excess():
    # F(2) in degrees 2..5: one class each, the degree 5 one is Sq^2 Sq^1
    assert [len(free_unstable_basis(2, k)) for k in range(4)] == [1, 1, 1, 1]
    assert free_unstable_basis(2, 3) == [(2, 1)]
    assert free_unstable_basis(0, 3) == []


def test_gamma_examples():
    assert gamma_split((2, 1), 1) == (0, (), (2, 1))
    assert gamma_split((4, 1), 1) == (1, (4,), (1,))
    assert gamma_split((5, 2, 1), 1) == (1, (5,), (2, 1))
    assert gamma_split((), 3).j == 0


def test_gamma_rejects_non_admissible():
    with pytest.raises(ValueError):
        gamma_split((1, 1), 0)


def test_lower_to_upper_examples():
    assert lower_to_upper((1, 0), 0) == (1, 0)
    assert lower_to_upper((2, 1), 0) == (3, 1)
    assert lower_to_upper((0,), 5) == (5,)


def iterate_lower(J, d):
    """Upper indices by applying Q_a x = Q^{|x|+a} x from the inside."""
    deg, out = d, []
    for a in reversed(J):
        out.append(deg + a)
        deg = 2 * deg + a
    return tuple(reversed(out))


def test_reindex_examples():
    assert reindex((1, 0), 0) == (2, 1)
    assert reindex((0,), -1) == (0,)
    assert reindex_inverse((2, 1), 0) == (1, 0)
    with pytest.raises(ValueError):
        reindex_inverse((1, 1), 0)


def test_seq_display():
    assert str(Seq((3, 1))) == "Sq^3 Sq^1"
    assert str(Seq((2, 1), "dl-lower")) == "Q_(2,1)"


admissible = st.lists(st.integers(1, 12), max_size=5).map(
    lambda xs: tuple(sorted(xs, reverse=True))).filter(is_admissible)


@given(admissible, st.integers(-3, 3))
def test_gamma_unique_and_consistent(I, d):
    hits = [j for j in range(len(I) + 1) if gamma_conditions(I, d, j)]
    assert len(hits) == 1
    g = gamma_split(I, d)
    assert g.prefix + g.suffix == I
    assert is_admissible(g.prefix) and is_admissible(g.suffix)
    if g.j < len(I):
        assert excess(g.suffix) <= d + g.j
    if g.j > 0:
        assert g.prefix[-1] >= d + sum(g.suffix) + g.j


@given(st.lists(st.integers(0, 9), max_size=5), st.integers(-3, 3))
def test_lower_to_upper_is_iteration(J, d):
    J = tuple(J)
    assert lower_to_upper(J, d) == iterate_lower(J, d)
    assert upper_to_lower(lower_to_upper(J, d), d) == J


@given(admissible)
def test_excess_formulas_agree(I):
    if I:
        assert excess(I) == I[0] - sum(I[1:])


@pytest.mark.parametrize("d", range(-2, 3))
def test_reindex_is_a_bijection(d):
    B = 6
    for s in range(1, 4):
        image = set()
        for J in itertools.product(range(B + 1), repeat=s):
            if not all(J[k] > J[k + 1] for k in range(s - 1)):
                continue
            I = reindex(J, d)
            assert is_admissible(I) and I[-1] > d
            assert reindex_inverse(I, d) == J
            image.add(I)
        # every admissible I with i_s > d in a box whose preimage lies in the box is hit
        for deg in range(-8, 14):
            for J in strictly_decreasing_words(s, d, deg):
                if max(J) <= B:
                    assert reindex(J, d) in image


def test_word_degree():
    assert word_degree((1, 0), 0) == 1
    assert word_degree((0, 0), 1) == 4
    assert word_degree((), -2) == -2
