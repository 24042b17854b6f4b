"""Steinberg functors as kernel intersections inside iterated R_1.

A point of ``(R_1)^s Sigma^d F`` is an F_2-combination of words
``Q_{j_1} ... Q_{j_s} iota_d`` with every ``j_k >= 0`` and no Adem relation
imposed. ``L_s`` is the intersection over ``0 <= i <= s-2`` of the kernels of
the maps that normalize the pair at positions ``(i+1, i+2)``.

Vectors are frozensets of words; a :class:`WordSpace` pairs a list of such
vectors with an echelon form for taking coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .dyerlashof import pair_terms
from .gf2 import F2Matrix, lowbit, reduce, rref, support
from .seqcomb import (enumerate_admissible, reindex, strictly_decreasing_words,
                      word_degree)
from .steenrod import binom_mod2

Word = tuple
Vec = frozenset


def xor_all(sets: Iterable[Iterable]) -> frozenset:
    acc: set = set()
    for s in sets:
        acc ^= set(s)
    return frozenset(acc)


class WordSpace:
    """Span of finitely many word-vectors, with coordinates in a fixed basis."""

    def __init__(self, vectors: Iterable[Vec]):
        self.vectors: list[Vec] = []
        self._index: dict = {}
        self._piv: dict[int, tuple[int, int]] = {}
        for v in vectors:
            self._add(v)

    def _bits(self, v: Iterable, grow: bool) -> int | None:
        out = 0
        for w in v:
            k = self._index.get(w)
            if k is None:
                if not grow:
                    return None
                k = self._index[w] = len(self._index)
            out ^= 1 << k
        return out

    def _reduce(self, b: int, hist: int = 0) -> tuple[int, int]:
        while b:
            p = lowbit(b)
            hit = self._piv.get(p)
            if hit is None:
                break
            b ^= hit[0]
            hist ^= hit[1]
        return b, hist

    def _add(self, v: Vec) -> bool:
        b = self._bits(v, True)
        b, hist = self._reduce(b, 1 << len(self.vectors))
        if not b:
            return False
        self._piv[lowbit(b)] = (b, hist)
        self.vectors.append(frozenset(v))
        return True

    def __len__(self):
        return len(self.vectors)

    def coordinates(self, v: Iterable) -> int:
        """Bitset of coefficients on ``self.vectors``; raises ValueError if ``v`` is outside."""
        b = self._bits(v, False)
        if b is None:
            raise ValueError("vector has a word outside the space")
        rest, hist = self._reduce(b)
        if rest:
            raise ValueError("vector is not in the space")
        return hist

    def contains(self, v: Iterable) -> bool:
        try:
            self.coordinates(v)
            return True
        except ValueError:
            return False


# -- word coordinates ----------------------------------------------------------

def r1_words(s: int, d: int, deg: int) -> list[Word]:
    """All ``J`` in N^s with ``|Q_J iota_d| = deg`` (iterated R_1 basis)."""
    target = deg - (d << s)
    if target < 0:
        return []
    out = []

    def rec(k: int, prefix: tuple, rem: int):
        if k == s:
            if rem == 0:
                out.append(prefix)
            return
        w = 1 << k
        for j in range(0, rem // w + 1):
            rec(k + 1, prefix + (j,), rem - j * w)

    rec(0, (), target)
    return out


def pair_image(J: Word, d: int, i: int) -> frozenset:
    """Normalize the pair at (0-based) positions ``i, i+1`` of ``J`` over ``iota_d``."""
    jo, ji = J[i], J[i + 1]
    if jo <= ji:
        return frozenset([J])
    head, tail = J[:i], J[i + 2:]
    y = word_degree(tail, d)
    return frozenset(head + (a, b) + tail for a, b in pair_terms(jo, ji, y))


def _kernel_of(cands: list[Vec], image_of) -> list[Vec]:
    """Combinations of ``cands`` killed by the linear map ``image_of`` (word-vector valued)."""
    if not cands:
        return []
    index: dict = {}
    cols = []
    for v in cands:
        img: set = set()
        for w in v:
            img ^= set(image_of(w))
        b = 0
        for w in img:
            k = index.setdefault(w, len(index))
            b ^= 1 << k
        cols.append(b)
    red = reduce(F2Matrix(tuple(cols), len(index)))
    return [xor_all(cands[k] for k in support(rel)) for rel in red.kernel]


def steinberg_direct(s: int, d: int, deg: int) -> list[Vec]:
    """``L_s Sigma^d F`` in one degree as the stacked kernel over all of ``(R_1)^s``."""
    words = r1_words(s, d, deg)
    if s < 2:
        return [frozenset([w]) for w in words]

    def image(w):
        # tag by position so the kernels intersect rather than add
        return xor_all({(i, u) for u in pair_image(w, d, i)} for i in range(s - 1))

    return _kernel_of([frozenset([w]) for w in words], image)


def lowest_degree(s: int, d: int) -> int:
    """Lowest degree of ``L_s Sigma^d F``: ``2^s (d + 1) - (s + 1)``."""
    return (1 << s) * (d + 1) - (s + 1)


@lru_cache(maxsize=None)
def steinberg_basis(s: int, d: int, deg: int) -> tuple[Vec, ...]:
    """Echelonized basis of ``L_s Sigma^d F`` in degree ``deg``.

    Built as ``ker(position 0) ∩ R_1 L_{s-1}``: the conditions at the inner
    positions are the defining conditions of ``L_{s-1}`` with one more
    operation on the outside, and R_1 is exact.
    """
    if s == 0:
        return (frozenset([()]),) if deg == d else ()
    if s == 1:
        j = deg - 2 * d
        return (frozenset([(j,)]),) if j >= 0 else ()
    cands = []
    lo = lowest_degree(s - 1, d)
    for e in range(lo, deg // 2 + 1):
        j = deg - 2 * e
        if j < 0:
            continue
        for v in steinberg_basis(s - 1, d, e):
            cands.append(frozenset((j,) + w for w in v))
    kern = _kernel_of(cands, lambda w: pair_image(w, d, 0))
    return tuple(canonical_basis(kern))


def canonical_basis(vectors: list[Vec]) -> list[Vec]:
    """Reduced echelon basis of a span of word-vectors, words ordered lexicographically."""
    words = sorted({w for v in vectors for w in v})
    pos = {w: k for k, w in enumerate(words)}
    bits = []
    for v in vectors:
        b = 0
        for w in v:
            b ^= 1 << pos[w]
        bits.append(b)
    return [frozenset(words[k] for k in support(b)) for b in rref(bits)]


@lru_cache(maxsize=None)
def steinberg_space(s: int, d: int, deg: int) -> WordSpace:
    return WordSpace(steinberg_basis(s, d, deg))


def steinberg_dim(s: int, d: int, deg: int) -> int:
    return len(steinberg_basis(s, d, deg))


# -- dimension cross-checks ----------------------------------------------------

@dataclass
class DimCheck:
    degree: int
    kernel: int
    decreasing: int
    admissible: int

    @property
    def ok(self) -> bool:
        return self.kernel == self.decreasing == self.admissible


def admissible_count(s: int, d: int, deg: int) -> int:
    """Admissible ``I`` of length s with ``i_s > d`` and ``d(I) + d - s = deg``."""
    return len(enumerate_admissible(deg - d + s, s, min_last=d + 1))


def steinberg_dim_check(s: int, d: int, degrees: Iterable[int], direct: bool = False) -> list[DimCheck]:
    """Kernel dimension vs strictly decreasing words vs reindexed admissible sequences."""
    out = []
    for deg in degrees:
        k = len(steinberg_direct(s, d, deg)) if direct else steinberg_dim(s, d, deg)
        dec = strictly_decreasing_words(s, d, deg)
        if s:
            for J in dec:  # the reindexing lands in the admissible set
                I = reindex(J, d)
                if I[-1] <= d or sum(I) + d - s != deg:
                    raise AssertionError(f"reindex({J}, {d}) = {I} has the wrong shape")
        out.append(DimCheck(deg, k, len(dec), admissible_count(s, d, deg) if s else int(deg == d)))
    return out


def lowest_nonzero_degree(s: int, d: int, search_to: int) -> int | None:
    for deg in range(lowest_degree(s, d) - 4, search_to + 1):
        if steinberg_dim(s, d, deg):
            return deg
    return None


# -- Steenrod action ------------------------------------------------------------

@lru_cache(maxsize=None)
def free_nishida(J: Word, d: int, r: int) -> frozenset:
    """``(Q_J iota_d) Sq^r`` in ``(R_1)^s``: Nishida stagewise, no Adem rewriting."""
    if r == 0:
        return frozenset([J])
    if not J:
        return frozenset()
    a, rest = J[0], J[1:]
    y = word_degree(rest, d)
    s_up = y + a
    acc: set = set()
    for i in range(r // 2 + 1):
        if not binom_mod2(s_up - r, r - 2 * i):
            continue
        b = a - r + 2 * i
        if b < 0:
            continue
        for w in free_nishida(rest, d, i):
            acc ^= {(b,) + w}
    return frozenset(acc)


def steinberg_action(s: int, d: int, r: int, deg: int) -> F2Matrix:
    """Matrix of ``Sq^r`` from ``L_s Sigma^d F`` in degree ``deg`` to degree ``deg - r``.

    Raises if the image leaves the Steinberg subspace.
    """
    src = steinberg_basis(s, d, deg)
    tgt = steinberg_space(s, d, deg - r)
    cols = []
    for v in src:
        img = xor_all(free_nishida(w, d, r) for w in v)
        cols.append(tgt.coordinates(img))
    return F2Matrix(tuple(cols), len(tgt))


# -- suspension ---------------------------------------------------------------

def suspend_word(J: Word) -> Word | None:
    """``Q_J iota_d -> Q_{J-1} iota_{d+1}`` (same upper indices); None if some ``j = 0``."""
    if any(j == 0 for j in J):
        return None
    return tuple(j - 1 for j in J)


@dataclass
class SuspensionCheck:
    degree: int
    source: int
    kernel_expected: int  # dim L_{s-1} Sigma^{2d+1} F in degree + 1
    target: int           # dim L_s Sigma^{d+1} F in degree + 1
    rank: int

    @property
    def surjective(self) -> bool:
        return self.rank == self.target

    @property
    def ok(self) -> bool:
        return self.surjective and self.source == self.kernel_expected + self.target


def stein_suspension(s: int, d: int, deg: int) -> tuple[F2Matrix, SuspensionCheck]:
    """``L_s Sigma^d F -> Sigma^{-1} L_s Sigma^{d+1} F`` in degree ``deg``."""
    src = steinberg_basis(s, d, deg)
    tgt = steinberg_space(s, d + 1, deg + 1)
    cols = []
    for v in src:
        img = frozenset(u for u in (suspend_word(w) for w in v) if u is not None)
        cols.append(tgt.coordinates(img))
    mat = F2Matrix(tuple(cols), len(tgt))
    red = reduce(mat)
    kexp = steinberg_dim(s - 1, 2 * d + 1, deg + 1) if s >= 1 else 0
    return mat, SuspensionCheck(deg, len(src), kexp, len(tgt), red.rank)
