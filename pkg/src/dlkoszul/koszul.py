"""Derived functors of Dyer-Lashof indecomposables, two ways.

* The Koszul complex ``Kz[n]N``: term ``i`` is ``L_i N<n-i>`` in homological
  degree ``i``; the differential feeds the innermost operation of a Steinberg
  word to the module through its DL action.
* The reduced bar complex: term ``t`` is ``(Rbar)^t N``, nested nonempty
  allowable layers ``[J_1 | ... | J_t | x]``; the faces merge adjacent layers
  (then normalize) or act with the innermost layer on ``N``.

Both are computed one (length, internal degree) cell at a time; the
differentials preserve both gradings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .dyerlashof import QModule, allowable_words, normal_form
from .gf2 import ChainComplexF2, F2Matrix, homology, support
from .seqcomb import word_degree
from .steinberg import WordSpace, lowest_degree, steinberg_basis


def _cells_of_length(N: QModule, l: int):
    """Basis elements of ``N<l>`` as ``(degree, index)``."""
    for n in N.degrees():
        for i, x in enumerate(N.lengths[n]):
            if x == l:
                yield n, i


def _apply_q(N: QModule, j: int, n: int, idx: int) -> list[tuple[int, int]]:
    t = 2 * n + j
    if j < 0:
        return []
    if t > N.cutoff and N.q:
        # trivial actions are known everywhere; tabulated ones only up to the cutoff
        raise ValueError(f"Q_{j} out of degree {n} leaves the window of {N.name}")
    return [(t, k) for k in support(N.qmat(j, n).cols[idx])]


def _apply_word(N: QModule, J, n: int, idx: int) -> list[tuple[int, int]]:
    """``Q_J x`` through the module's tables, innermost operation first."""
    cur = {(n, idx)}
    for j in reversed(J):
        nxt: set = set()
        for m, i in cur:
            nxt ^= set(_apply_q(N, j, m, i))
        cur = nxt
        if not cur:
            break
    return sorted(cur)


# -- Koszul complex -----------------------------------------------------------

def koszul_term(N: QModule, i: int, l: int, deg: int) -> list[frozenset]:
    """Basis of ``L_i N<l>`` in degree ``deg`` as vectors of cells ``(J, n, idx)``."""
    out = []
    for n, idx in _cells_of_length(N, l):
        if lowest_degree(i, n) > deg:
            continue
        for v in steinberg_basis(i, n, deg):
            out.append(frozenset((w, n, idx) for w in v))
    return out


def koszul_cell(N: QModule, length: int, deg: int) -> ChainComplexF2:
    """``Kz[length] N`` in internal degree ``deg``."""
    terms = {i: koszul_term(N, i, length - i, deg) for i in range(0, length + 1)}
    spaces = {i: WordSpace(v) for i, v in terms.items()}
    dims = {i: len(v) for i, v in terms.items()}
    diffs = {}
    for i in range(1, length + 1):
        cols = []
        for v in terms[i]:
            img: set = set()
            for J, n, idx in v:
                for m, k in _apply_q(N, J[-1], n, idx):
                    img ^= {(J[:-1], m, k)}
            try:
                cols.append(spaces[i - 1].coordinates(img))
            except ValueError as exc:
                raise AssertionError(
                    f"Koszul differential leaves the Steinberg subspace (i={i}, degree {deg})"
                ) from exc
        diffs[i] = F2Matrix(tuple(cols), dims[i - 1])
    cx = ChainComplexF2(dims, diffs)
    cx.check_square_zero()
    return cx


@dataclass
class KoszulComplex:
    module: QModule
    length: int
    cells: dict[int, ChainComplexF2] = field(default_factory=dict)  # by internal degree


def degree_window(N: QModule, max_length: int, max_degree: int) -> range:
    """Internal degrees worth scanning: from the lowest Steinberg class on N up to max_degree."""
    lows = [lowest_degree(i, n) for n in N.degrees() for i in range(max_length + 1)]
    lo = min(lows + [N.degrees()[0] if N.degrees() else 0])
    return range(min(lo, max_degree), max_degree + 1)


def build_koszul(N: QModule, length: int, degrees: Iterable[int]) -> KoszulComplex:
    return KoszulComplex(N, length, {k: koszul_cell(N, length, k) for k in degrees})


def koszul_homology(K: KoszulComplex) -> dict[tuple[int, int], int]:
    """``(t, degree) -> dim H_t`` (this is ``(L_t q N)<length>``)."""
    out = {}
    for k, cx in K.cells.items():
        for t in range(0, K.length + 1):
            h = homology(cx, t).dimension
            if h:
                out[(t, k)] = h
    return out


# -- bar complex ----------------------------------------------------------------

def _compositions(total: int, parts: int, allow_zero: bool):
    lo = 0 if allow_zero else 1
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(lo, total - lo * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, allow_zero):
            yield (first,) + rest


def bar_basis(N: QModule, t: int, length: int, deg: int, reduced: bool = True) -> list[tuple]:
    """Elements ``(layers, n, idx)``; ``layers[0]`` is the outermost word."""
    cap = max(deg, 0)
    out = []
    for n in N.degrees():
        for idx, l in enumerate(N.lengths[n]):
            if l > length:
                continue
            for sizes in _compositions(length - l, t, allow_zero=not reduced):
                # fill layers from the inside out
                def rec(k: int, layers: tuple, base: int):
                    if k < 0:
                        if base == deg:
                            out.append((layers, n, idx))
                        return
                    for J in allowable_words(sizes[k], base, cap):
                        rec(k - 1, (J,) + layers, word_degree(J, base))

                rec(t - 1, (), n)
    out.sort()
    return out


def _layer_bases(layers, n: int) -> list[int]:
    """Degree each layer is applied to: ``bases[k]`` is under ``layers[k]``."""
    bases = [0] * len(layers)
    deg = n
    for k in range(len(layers) - 1, -1, -1):
        bases[k] = deg
        deg = word_degree(layers[k], deg)
    return bases


def bar_face_sum(N: QModule, elt: tuple, reduced: bool = True) -> frozenset:
    layers, n, idx = elt
    t = len(layers)
    acc: set = set()
    if not reduced and layers and not layers[0]:
        acc ^= {(layers[1:], n, idx)}
    bases = _layer_bases(layers, n)
    for k in range(t - 1):
        merged = layers[k] + layers[k + 1]
        for w in normal_form(merged, bases[k + 1]):
            acc ^= {(layers[:k] + (w,) + layers[k + 2:], n, idx)}
    if t:
        for m, i in _apply_word(N, layers[-1], n, idx):
            acc ^= {(layers[:-1], m, i)}
    return frozenset(acc)


def bar_cell(N: QModule, length: int, deg: int, reduced: bool = True,
             max_t: int | None = None) -> ChainComplexF2:
    top = length if max_t is None else max_t
    if not reduced and max_t is None:
        raise ValueError("the unreduced complex needs an explicit max_t")
    bases = {t: bar_basis(N, t, length, deg, reduced) for t in range(0, top + 1)}
    index = {t: {e: i for i, e in enumerate(b)} for t, b in bases.items()}
    dims = {t: len(b) for t, b in bases.items()}
    diffs = {}
    for t in range(1, top + 1):
        cols = []
        for e in bases[t]:
            c = 0
            for f in bar_face_sum(N, e, reduced):
                c ^= 1 << index[t - 1][f]
            cols.append(c)
        diffs[t] = F2Matrix(tuple(cols), dims[t - 1])
    cx = ChainComplexF2(dims, diffs)
    cx.check_square_zero()
    return cx


@dataclass
class BarComplex:
    module: QModule
    length: int
    cells: dict[int, ChainComplexF2] = field(default_factory=dict)


def build_bar(N: QModule, length: int, degrees: Iterable[int], reduced: bool = True) -> BarComplex:
    return BarComplex(N, length, {k: bar_cell(N, length, k, reduced) for k in degrees})


def bar_homology(B: BarComplex, max_t: int | None = None) -> dict[tuple[int, int], int]:
    out = {}
    top = B.length if max_t is None else max_t
    for k, cx in B.cells.items():
        for t in range(0, top + 1):
            h = homology(cx, t).dimension
            if h:
                out[(t, k)] = h
    return out


# -- comparison ------------------------------------------------------------------

@dataclass
class Comparison:
    koszul: dict[tuple[int, int, int], int]  # (length, t, degree) -> dim
    bar: dict[tuple[int, int, int], int]
    skipped: bool = False

    @property
    def mismatches(self) -> list[tuple[int, int, int]]:
        keys = set(self.koszul) | set(self.bar)
        return sorted(k for k in keys if self.koszul.get(k, 0) != self.bar.get(k, 0))

    @property
    def ok(self) -> bool:
        return not self.mismatches


def lderq(N: QModule, max_length: int, max_degree: int, method: str = "koszul"):
    """``(length, t, degree) -> dim (L_t q N)<length>`` on a window."""
    out = {}
    degs = degree_window(N, max_length, max_degree)
    for l in range(0, max_length + 1):
        if method == "koszul":
            h = koszul_homology(build_koszul(N, l, degs))
        else:
            h = bar_homology(build_bar(N, l, degs))
        for (t, k), v in h.items():
            out[(l, t, k)] = v
    return out


def admissible_for_koszul(N: QModule) -> bool:
    """The Koszul comparison needs every ``N<i>`` to be (-2)-connected."""
    return all(n >= -1 for n in N.degrees())


def compare_homologies(N: QModule, max_length: int, max_degree: int) -> Comparison:
    if not admissible_for_koszul(N):
        return Comparison({}, {}, skipped=True)
    return Comparison(lderq(N, max_length, max_degree, "koszul"),
                      lderq(N, max_length, max_degree, "bar"))


def connectivity_bound(t: int, d: int) -> int:
    """``(L_t q N)<s>`` is this-connected when ``N<s-t>`` is (d-1)-connected."""
    return (1 << t) * (d + 1) - (t + 2)


def lowest_degrees(N: QModule) -> dict[int, int]:
    """Length -> lowest degree of ``N<l>``."""
    out: dict[int, int] = {}
    for n in N.degrees():
        for l in N.lengths[n]:
            out[l] = min(out.get(l, n), n)
    return out
