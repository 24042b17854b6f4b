import pytest
from hypothesis import given, strategies as st

from dlkoszul.gf2 import (ChainComplexF2, Echelon, F2Matrix, NotAComplexError, homology,
                          reduce, rref, support, vec)


def test_identity_has_full_rank():
    r = reduce(F2Matrix.from_rows([(1,)]))
    assert r.rank == 1 and r.kernel == ()


def test_zero_map_kernel_is_everything():
    r = reduce(F2Matrix.zero(2, 3))
    assert r.rank == 0 and len(r.kernel) == 3


def test_small_kernel_by_enumeration():
    m = F2Matrix.from_rows([(1, 1, 0), (0, 1, 1)])
    r = reduce(m)
    assert r.rank == 2
    killed = [v for v in range(8) if m.apply(v) == 0 and v]
    assert killed == [0b111]
    assert list(r.kernel) == [vec([0, 1, 2])]


def test_empty_matrix():
    r = reduce(F2Matrix((), 0))
    assert r.rank == 0 and r.kernel == () and r.image == ()


def test_homology_of_identity_is_zero():
    c = ChainComplexF2({0: 1, 1: 1}, {1: F2Matrix((1,), 1)})
    assert homology(c, 0).dimension == 0
    assert homology(c, 1).dimension == 0


def test_zero_differentials_give_the_terms():
    c = ChainComplexF2({0: 2, 1: 3, 2: 1})
    assert [homology(c, i).dimension for i in range(3)] == [2, 3, 1]


def test_surjection_onto_a_line():
    c = ChainComplexF2({0: 1, 1: 2}, {1: F2Matrix.from_rows([(1, 1)])})
    assert homology(c, 1).dimension == 1
    assert homology(c, 0).dimension == 0


def test_square_nonzero_is_rejected():
    d1 = F2Matrix((1,), 1)
    d2 = F2Matrix((1,), 1)
    c = ChainComplexF2({0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})
    with pytest.raises(NotAComplexError) as err:
        c.check_square_zero()
    assert err.value.index == 2
    with pytest.raises(NotAComplexError):
        homology(c, 1)


def test_bad_shape_is_rejected():
    with pytest.raises(ValueError):
        ChainComplexF2({0: 2, 1: 1}, {1: F2Matrix((1,), 1)})


matrices = st.integers(0, 6).flatmap(
    lambda nrows: st.lists(st.integers(0, (1 << nrows) - 1), max_size=7).map(
        lambda cols: F2Matrix(tuple(cols), nrows)))


@given(matrices)
def test_rank_nullity(m):
    r = reduce(m)
    assert r.rank + len(r.kernel) == m.ncols
    assert all(m.apply(v) == 0 for v in r.kernel)
    hits = {m.apply(v) for v in range(1 << m.ncols)} if m.ncols <= 7 else set()
    assert all(w in hits for w in r.image)
    assert len(r.image) == r.rank


@given(matrices)
def test_rref_is_canonical(m):
    a = rref(m.cols)
    b = rref(reversed(m.cols))
    assert a == b


@given(st.lists(st.integers(0, 63), max_size=6), st.integers(0, 63))
def test_echelon_coordinates(vectors, target):
    e = Echelon(vectors)
    if e.contains(target):
        coords = e.coordinates(target)
        acc = 0
        for k in support(coords):
            acc ^= e.basis()[k]
        assert acc == target


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.data())
def test_euler_characteristic_matches_homology(a, b, c, data):
    # build d1: b -> a and d2: c -> b with d1 d2 = 0 by factoring through a kernel
    d1 = F2Matrix(tuple(data.draw(st.integers(0, (1 << a) - 1)) for _ in range(b)), a)
    ker = list(reduce(d1).kernel)
    cols = []
    for _ in range(c):
        picks = data.draw(st.lists(st.booleans(), min_size=len(ker), max_size=len(ker)))
        v = 0
        for k, p in zip(ker, picks):
            if p:
                v ^= k
        cols.append(v)
    d2 = F2Matrix(tuple(cols), b)
    cx = ChainComplexF2({0: a, 1: b, 2: c}, {1: d1, 2: d2})
    cx.check_square_zero()
    hom = [homology(cx, i).dimension for i in range(3)]
    assert hom[0] - hom[1] + hom[2] == cx.euler_characteristic()
