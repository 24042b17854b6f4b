from math import comb

import pytest
from hypothesis import given, strategies as st

from dlkoszul.fpmodule import FpModule, build_F_dual, direct_sum, sphere, validate
from dlkoszul.gf2 import F2Matrix
from dlkoszul.seqcomb import admissible_basis, is_admissible
from dlkoszul.steenrod import (adem_reduce, adem_terms, binom_mod2, format_element,
                               is_normal, multiply, reduce_element)


def test_binomial_examples():
    assert binom_mod2(5, 2) == 0
    assert binom_mod2(5, 1) == 1
    assert all(binom_mod2(n, 0) == 1 for n in range(-6, 7))
    assert all(binom_mod2(-1, k) == 1 for k in range(0, 20))


@given(st.integers(0, 200), st.integers(0, 200))
def test_binomial_matches_integer_binomial(n, k):
    assert binom_mod2(n, k) == comb(n, k) % 2


@given(st.integers(-100, -1), st.integers(0, 60))
def test_negative_binomial_is_power_series(n, k):
    # (1+t)^n (1+t)^-n = 1, coefficientwise
    total = sum(binom_mod2(n, j) * binom_mod2(-n, k - j) for j in range(k + 1)) % 2
    assert total == (1 if k == 0 else 0)


def test_adem_examples():
    assert adem_reduce((1, 1)) == frozenset()
    assert adem_reduce((2, 2)) == frozenset([(3, 1)])
    assert adem_reduce((4, 2, 1)) == frozenset([(4, 2, 1)])
    assert format_element(adem_reduce((2, 2))) == "Sq^3 Sq^1"


def test_adem_terms_of_sq1_sq2():
    assert adem_terms(1, 2) == [(3,)]


@given(st.lists(st.integers(0, 6), min_size=0, max_size=4))
def test_normal_forms_are_admissible_and_stable(word):
    nf = adem_reduce(word)
    assert is_normal(nf)
    assert all(is_admissible(w) for w in nf)
    assert reduce_element(nf) == nf


@given(st.lists(st.integers(1, 5), min_size=1, max_size=3),
       st.lists(st.integers(1, 5), min_size=1, max_size=3),
       st.lists(st.integers(1, 5), min_size=1, max_size=3))
def test_multiplication_is_associative(a, b, c):
    x, y, z = adem_reduce(a), adem_reduce(b), adem_reduce(c)
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


def test_admissible_count_in_degree_eight():
    assert len(admissible_basis(8)) == 4  # (8), (7,1), (6,2), (5,2,1)


def test_F_dual_dimensions():
    assert build_F_dual(1, 16).hilbert() == {1: 1, 2: 1, 4: 1, 8: 1, 16: 1}
    assert build_F_dual(2, 12).hilbert() == {2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 8: 1,
                                              9: 1, 10: 1, 12: 1}
    assert build_F_dual(0, 10).hilbert() == {0: 1}
    assert build_F_dual(-1, 10).is_zero()


def test_trivial_module_is_valid():
    assert validate(sphere(3, 10)).ok
    assert validate(sphere(-2, 10)).ok


def test_F1_dual_is_valid_and_unstable(f1_dual):
    assert f1_dual.unstable
    assert validate(f1_dual).ok


def test_planted_sq1_sq1_failure_is_caught():
    bad = FpModule("bad", 4, {2: ("a",), 1: ("b",), 0: ("c",)},
                   {(1, 2): F2Matrix((1,), 1), (1, 1): F2Matrix((1,), 1)})
    report = validate(bad)
    assert not report.ok
    assert report.witnesses[0][:3] == ("a", "1", "1")


def test_instability_violation_is_caught():
    bad = FpModule("bad", 4, {2: ("a",), 0: ("c",)}, {(2, 2): F2Matrix((1,), 1)},
                   unstable=True)
    assert not validate(bad).ok
    assert any(w[-1] == "unstable" for w in validate(bad).witnesses)


def test_shift_and_sum_stay_valid(f1_dual, f2_dual):
    m = direct_sum(f1_dual, f2_dual.shift(3))
    assert validate(m).ok
    assert m.dim(5) == f1_dual.dim(5) + f2_dual.dim(2)


def test_truncation_is_a_submodule(f2_dual):
    t = f2_dual.truncate(9)
    assert max(t.degrees()) == 9
    assert validate(t).ok


@pytest.mark.parametrize("n", [1, 2, 3])
def test_F_dual_is_valid(n):
    assert validate(build_F_dual(n, 14)).ok
