import pytest

from dlkoszul.fpmodule import build_F_dual, sphere
from dlkoszul.loops import (NotUnstableError, check_loop_identity, deloop_ss, e_infinity,
                            f_filtration, loop_identity_sides, loops)

from conftest import zero_connected_modules


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_loops_of_a_sphere(d):
    lp = loops(sphere(d, 2 * d + 2))
    assert lp.omega.hilbert() == {d - 1: 1}
    assert lp.omega1.hilbert() == {2 * d - 1: 1}


def test_loops_of_the_bottom_sphere():
    lp = loops(sphere(0, 4))
    assert lp.omega.is_zero() and lp.omega1.is_zero()


def test_loops_of_a_suspension_is_the_desuspension(f1_dual):
    lp = loops(f1_dual.shift(1))
    assert lp.omega.hilbert() == f1_dual.truncate(f1_dual.cutoff).hilbert()


def test_omega_of_F_duals(f1_dual, f2_dual):
    assert loops(f1_dual).omega.hilbert() == {0: 1}
    assert loops(f1_dual).omega1.is_zero()
    assert loops(f2_dual).omega.hilbert() == {1: 1, 2: 1, 4: 1, 8: 1}


def test_four_term_sequence_is_exact(f2_dual):
    lp = loops(f2_dual)
    for n in range(0, f2_dual.cutoff // 2 + 1):
        # Sq_0 : M_{2n} -> (Phi M)_{2n} = M_n, so dim M - dim ker = dim Phi M - dim coker
        rank_from_M = f2_dual.dim(2 * n) - lp.sigma_omega.dim(2 * n)
        rank_from_phi = lp.phi.dim(2 * n) - lp.sigma_omega1.dim(2 * n)
        assert rank_from_M == rank_from_phi


def test_loops_rejects_stable_modules():
    with pytest.raises(NotUnstableError):
        loops(sphere(-1, 4))


@pytest.mark.parametrize("d,lhs", [(1, {1: 1, 2: -1}), (2, {2: 1, 4: -1})])
def test_loop_identity_on_spheres(d, lhs):
    left, right = loop_identity_sides(sphere(d, 8))
    assert {k: v for k, v in left.items() if v} == lhs
    assert left == right


def test_loop_identity_on_F1_dual(f1_dual):
    assert check_loop_identity(f1_dual, 8) is None


@pytest.mark.parametrize("m", zero_connected_modules(), ids=lambda m: m.name)
def test_loop_identity_on_test_modules(m):
    assert check_loop_identity(m, m.cutoff // 2) is None


def test_deloop_ss_of_the_circle():
    assert e_infinity(sphere(1, 4)).dims == {(0, 0, 1): 1}


def test_deloop_ss_converges_for_F1_dual(f1_dual):
    einf = e_infinity(f1_dual)
    for n in range(1, 17):
        assert einf.total(n) == f1_dual.dim(n)


def test_suspension_collapses_at_filtration_zero(f2_dual):
    m = f2_dual.truncate(13).shift(1)
    pages = deloop_ss(m)
    # E^1_{p,-p} = Phi^p Sigma Omega M = Phi^p M; q_0 is an isomorphism so E^2 sits at p = 0
    e1 = {(p, n): v for (p, q, n), v in pages[1].dims.items() if q == -p}
    for (p, n), v in e1.items():
        assert v == m.dim(n >> p) and n % (1 << p) == 0
    assert all(p == 0 for (p, q, n) in pages[2].dims)
    assert all(p == 0 for (p, q, n) in pages[-1].dims)


def test_filtration_of_F2_dual(f2_dual):
    f0 = f_filtration(f2_dual, 0)
    # f_0 is ker Sq_0
    dims = {n: len(v) for n, v in f0.items() if v}
    assert dims == loops(f2_dual).sigma_omega.hilbert()
    assert f_filtration(f2_dual, -1) == {n: [] for n in f2_dual.degrees()}


def test_deloop_ss_needs_positive_degrees():
    with pytest.raises(ValueError):
        deloop_ss(build_F_dual(0, 8))
