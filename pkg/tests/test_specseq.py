import pytest
from hypothesis import given, strategies as st

from dlkoszul.fpmodule import build_F_dual, sphere
from dlkoszul.loops import NotUnstableError
from dlkoszul.seqcomb import admissible_basis
from dlkoszul.specseq import (SigmaPair, column_dim, conn_bound, connectivity_table,
                              filtration_quotients_unstable, instability_test,
                              negative_part, pair_ok, sigma_pairs, split_sequence,
                              ss_desusp2, ss_dual_steenrod, suspension_compatibility)
from dlkoszul.steinberg import steinberg_dim


def test_degree_three_splitting_for_n_zero():
    assert split_sequence((3,), 0) == SigmaPair((3,), (), 0)
    assert split_sequence((2, 1), 0) == SigmaPair((), (2, 1), 0)
    assert split_sequence((2,), 0) == SigmaPair((2,), (), 0)
    assert len(admissible_basis(3)) == 2


def test_sigma_pair_degree_and_label():
    p = SigmaPair((4,), (1,), 1)
    assert p.t == 1 and p.degree == 6
    assert pair_ok(p)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_reconstruction_totals(n):
    rec = ss_dual_steenrod(n, 16)
    assert rec.ok
    for k in range(n, 17):
        assert rec.totals().get(k, 0) == rec.target.get(k, 0) == len(admissible_basis(k - n))


@given(st.integers(0, 3), st.integers(0, 14))
def test_split_lands_in_the_pair_basis(n, k):
    for I in admissible_basis(k - n):
        p = split_sequence(I, n)
        assert pair_ok(p)
        assert p.degree == k
        assert p in sigma_pairs(n, p.t, k)


@pytest.mark.parametrize("n,t", [(0, 1), (1, 1), (0, 2), (2, 2)])
def test_column_is_steinberg_on_F_dual(n, t):
    # E^infty_{-t,t} = L_t Sigma^-1 F(n+t+1)^*: pairs are counted by Steinberg dims
    for k in range(0, 16):
        assert column_dim(n, t, k) == len(sigma_pairs(n, t, k))


def test_negative_part_for_n_minus_three():
    rec = ss_dual_steenrod(-3, 10)
    assert rec.ok
    neg = negative_part(rec)
    assert {t for t, _ in neg} == {2}
    assert min(k for _, k in neg) == -3
    for (t, k), v in neg.items():
        assert v == steinberg_dim(2, -1, k)


def test_desusp2_on_the_two_sphere():
    r = ss_desusp2(sphere(2, 12))
    assert r.ok
    assert r.v0 == {0: 1} and r.v1_over_v0 == {} and r.v1 == {0: 1}


def test_desusp2_on_a_suspension(f2_dual):
    N = f2_dual.truncate(12).shift(1)
    r = ss_desusp2(N)
    assert r.ok and r.v1_over_v0 == {}
    assert {k: v for k, v in r.v1.items() if k <= r.reliable_to} == r.v0


def test_desusp2_on_F1_dual():
    r = ss_desusp2(build_F_dual(1, 8))
    assert r.ok
    assert r.v0 == {-1: 1}
    assert r.v1_over_v0 == {0: 1, 2: 1, 6: 1}
    assert suspension_compatibility(build_F_dual(1, 8)) == []


def test_desusp2_rejects_stable_input():
    with pytest.raises(NotUnstableError):
        ss_desusp2(sphere(-1, 6))


def test_instability_verdicts():
    pos = instability_test(sphere(1, 12), 1)
    assert pos.suspension_unstable and pos.consistent
    assert instability_test(sphere(2, 12), 2).suspension_unstable
    neg = instability_test(build_F_dual(1, 8), 2)
    assert not neg.suspension_unstable and neg.consistent
    assert neg.cells[1]


def test_instability_test_rejects_other_cases():
    with pytest.raises(ValueError):
        instability_test(sphere(1, 8), 3)


def test_connectivity_rows_for_dual_steenrod():
    rows = connectivity_table(ss_dual_steenrod(0, 16).page, -1, range(0, 3))
    assert [(r.bound, r.lowest) for r in rows] == [(-1, 0), (1, 2), (8, 9)]
    assert all(r.ok for r in rows)


def test_connectivity_bound_low_cells():
    # c + t + 1 <= -1 gives connectivity -(t + 2)
    assert conn_bound(2, -5) == -4
    assert conn_bound(0, -1) == -1


def test_filtration_quotients_become_unstable():
    assert filtration_quotients_unstable(build_F_dual(1, 8)) == {0: True, 1: True}
    assert filtration_quotients_unstable(sphere(3, 12)) == {0: True, 1: True}
