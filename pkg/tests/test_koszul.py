import pytest

from dlkoszul.dyerlashof import singer_free, triv
from dlkoszul.fpmodule import build_F_dual, sphere
from dlkoszul.gf2 import reduce
from dlkoszul.koszul import (BarComplex, bar_cell, bar_homology, build_bar, build_koszul,
                             compare_homologies, connectivity_bound, koszul_cell,
                             koszul_homology, lderq, lowest_degrees)
from dlkoszul.steinberg import steinberg_dim


def test_trivial_action_has_zero_differentials():
    N = triv(sphere(1, 16))
    for deg in range(0, 17):
        cx = koszul_cell(N, 2, deg)
        assert all(d.is_zero() for d in cx.diffs.values())
        assert cx.dims[1] == cx.dims[0] == 0
        assert cx.dims[2] == steinberg_dim(2, 1, deg)


def test_koszul_differential_on_free_object_is_surjective():
    R = singer_free(sphere(0, 12), 2, 12)
    for deg in range(0, 13):
        cx = koszul_cell(R, 1, deg)
        assert reduce(cx.diffs[1]).rank == cx.dims[0]


@pytest.mark.parametrize("d", [-1, 0, 1, 2])
def test_koszul_property_on_spheres(d):
    h = lderq(triv(sphere(d, 14)), 3, 14)
    for (l, t, deg), v in h.items():
        assert l == t
        assert v == steinberg_dim(t, d, deg)
    for t in range(0, 4):
        for deg in range(-6, 15):
            assert h.get((t, t, deg), 0) == steinberg_dim(t, d, deg)


def test_free_objects_are_acyclic():
    R = singer_free(sphere(0, 12), 2, 12)
    h = lderq(R, 2, 12)
    assert h == {(0, 0, 0): 1}


def test_lderq_in_length_zero(f1_dual):
    N = singer_free(f1_dual.truncate(8), 2, 10)
    h = lderq(N, 0, 10)
    assert all(t == 0 for (_, t, _) in h)
    assert {deg: v for (_, _, deg), v in h.items()} == N.length_part(0).hilbert()


def test_bar_on_a_trivial_length_zero_module():
    N = triv(sphere(0, 6))
    h = bar_homology(build_bar(N, 1, range(0, 7)))
    assert h == {(1, k): 1 for k in range(0, 7)}


def test_bar_on_free_object_vanishes_in_positive_degree():
    R = singer_free(sphere(0, 12), 2, 12)
    for l in (1, 2):
        h = bar_homology(build_bar(R, l, range(0, 13)))
        assert not h


def test_empty_window():
    assert build_bar(triv(sphere(1, 8)), 2, []).cells == {}
    assert koszul_homology(build_koszul(triv(sphere(1, 8)), 2, [])) == {}


def test_unreduced_bar_agrees_below_the_top():
    N = triv(sphere(1, 10))
    red = bar_homology(build_bar(N, 1, range(0, 10)))
    full = BarComplex(N, 1, {k: bar_cell(N, 1, k, reduced=False, max_t=3) for k in range(0, 10)})
    unred = bar_homology(full, 3)
    for t in (0, 1):
        for k in range(0, 10):
            assert unred.get((t, k), 0) == red.get((t, k), 0)


def test_unreduced_needs_explicit_top():
    with pytest.raises(ValueError):
        bar_cell(triv(sphere(1, 4)), 1, 3, reduced=False)


@pytest.mark.parametrize("N", [
    triv(sphere(1, 16)),
    singer_free(sphere(0, 12), 2, 12),
    singer_free(build_F_dual(1, 8), 2, 12),
], ids=["triv S1", "R S0", "R F1"])
def test_koszul_agrees_with_bar(N):
    cmp = compare_homologies(N, 2, N.cutoff)
    assert not cmp.skipped
    assert cmp.ok, cmp.mismatches


def test_comparison_skips_low_modules():
    assert compare_homologies(triv(sphere(-2, 6)), 1, 6).skipped


def test_connectivity_bound_examples():
    assert connectivity_bound(0, 0) == -1
    assert connectivity_bound(2, 0) == 0
    assert lowest_degrees(singer_free(sphere(1, 10), 2, 10)) == {0: 1, 1: 2, 2: 4}
