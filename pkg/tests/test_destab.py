import pytest

from dlkoszul.destab import (DUAL_STEENROD, UNSTABLE, connectivity_certificate,
                            desusp1_analysis, h0r_dual_steenrod, h0r_unstable,
                            imq_trivial_check, length_bound, lderq1_of_free_quotient,
                            susp_identity)
from dlkoszul.fpmodule import build_F_dual, sphere
from dlkoszul.loops import NotUnstableError


def lowest_by_length(h):
    low = {}
    for (l, n) in h.dims():
        low[l] = min(low.get(l, n), n)
    return low


def test_unstable_case_on_the_circle():
    h = h0r_unstable(sphere(1, 20), 4)
    assert h.provenance == UNSTABLE
    assert lowest_by_length(h) == {s: 1 << s for s in range(5)}


def test_unstable_case_on_the_bottom_sphere():
    h = h0r_unstable(sphere(0, 12), 3)
    assert lowest_by_length(h) == {0: 0, 1: 0, 2: 0, 3: 0}


def test_length_zero_is_the_module(f2_dual):
    h = h0r_unstable(f2_dual, 2)
    assert h.module.length_part(0).hilbert() == f2_dual.hilbert()


def test_unstable_case_rejects_stable_input():
    with pytest.raises(NotUnstableError):
        h0r_unstable(sphere(-1, 8), 2)


def test_dual_steenrod_cases():
    h0 = h0r_dual_steenrod(0, 20)
    assert h0.provenance == DUAL_STEENROD
    assert h0.dims() == {(0, (1 << k) - 1): 1 for k in range(5)}
    assert h0r_dual_steenrod(-2, 20).dims() == {}
    h1 = h0r_dual_steenrod(1, 12)
    assert [h1.module.dim(k) for k in (1, 2, 3, 4)] == [1, 1, 1, 1]
    assert all(l == 0 for l, _ in h1.dims())


def test_certificates():
    assert connectivity_certificate(h0r_unstable(sphere(1, 16), 3)).ok
    assert connectivity_certificate(h0r_dual_steenrod(-2, 12)).ok
    cert = connectivity_certificate(h0r_dual_steenrod(0, 12))
    assert cert.ok and cert.bounds == {0: -1} and cert.lowest == {0: 0}


def test_length_bound():
    assert [length_bound(i, 0) for i in range(4)] == [0, 1, 3, 7]
    assert length_bound(2, -1) == -1


def test_desusp1_on_the_two_sphere():
    D = desusp1_analysis(sphere(2, 12))
    assert D.sub1 == {2: 1}        # Sigma^-1 Omega_1 N = Sigma^2 F
    assert D.lderq1 == {}
    assert D.length0 == {1: 1}


def test_desusp1_on_a_suspension(f2_dual):
    N = f2_dual.truncate(12).shift(1)
    D = desusp1_analysis(N)
    assert D.lderq1 == {}
    # Sq_0 vanishes, so Sigma Omega_1 N is all of Phi N
    assert D.sub1 == D.phi


def test_desusp1_on_F1_dual():
    D = desusp1_analysis(build_F_dual(1, 8))
    assert D.reliable_to == 6
    assert D.lderq1 == {0: 1, 2: 1, 6: 1}
    assert D.sub1 == {}


@pytest.mark.parametrize("N", [sphere(2, 12), sphere(3, 12), build_F_dual(1, 8),
                               build_F_dual(2, 12).shift(1)], ids=lambda m: m.name)
def test_desusp1_layers_add_up(N):
    D = desusp1_analysis(N)
    for k, v in D.length1.items():
        assert v == D.sub1.get(k, 0) + D.quotient1.get(k, 0)
    free = lderq1_of_free_quotient(N)
    for k in range(-2, D.reliable_to + 1):
        assert free.get(k, 0) == D.phi.get(k, 0)


def test_suspension_identity_on_unstable_modules(f1_dual):
    M = f1_dual.truncate(10)
    h = h0r_unstable(M, 2, 10)
    hs = h0r_unstable(M.shift(1), 2, 11)
    assert susp_identity(h, hs) == []


def test_suspension_identity_on_spheres():
    h = h0r_unstable(sphere(1, 14), 3, 14)
    hs = h0r_unstable(sphere(2, 15), 3, 15)
    assert susp_identity(h, hs) == []


@pytest.mark.parametrize("n", [-2, 0, 1, 2, 3])
def test_loops_of_dual_steenrod_family(n):
    assert imq_trivial_check(n, 14) == []
