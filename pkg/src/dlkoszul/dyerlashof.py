"""Dyer-Lashof operations: Adem rewriting, Nishida relations, the free functor R.

Words are kept in lower indexing: ``J = (j_1, ..., j_s)`` stands for
``Q_{j_1} ... Q_{j_s} x`` with ``j_s`` applied first and ``Q_a x = Q^{|x|+a} x``.
In this indexing instability says ``Q_a = 0`` for ``a < 0`` and a word is
allowable exactly when ``j_1 <= j_2 <= ... <= j_s``.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .fpmodule import FpModule, Report, subquotient, validate
from .gf2 import F2Matrix, reduce, support
from .seqcomb import lower_to_upper, upper_to_lower, word_degree
from .steenrod import binom_mod2

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


def is_allowable(J) -> bool:
    return all(J[k] <= J[k + 1] for k in range(len(J) - 1)) and all(j >= 0 for j in J)


def dl_adem_upper(r: int, s: int) -> list[tuple[int, int]]:
    """Upper-index terms of ``Q^r Q^s`` for ``r > 2s`` (no instability imposed)."""
    if r <= 2 * s:
        raise ValueError(f"Q^{r} Q^{s} is already allowable")
    out = []
    for i in range((r + 1) // 2, r - s):
        if binom_mod2(i - s - 1, 2 * i - r):
            out.append((r + s - i, i))
    return out


def pair_terms(jo: int, ji: int, d: int) -> list[tuple[int, int]]:
    """Rewrite ``Q_{jo} Q_{ji} y`` (``jo > ji``, ``|y| = d``) as lower-index pairs.

    Terms with a negative lower index are dropped.
    """
    s = d + ji
    r = 2 * d + ji + jo
    out = []
    for a_up, i in dl_adem_upper(r, s):
        inner = i - d
        outer = a_up - (d + i)
        if inner >= 0 and outer >= 0:
            out.append((outer, inner))
    return out


@lru_cache(maxsize=None)
def insert(j: int, W: tuple[int, ...], d: int) -> frozenset:
    """Normal form of ``Q_j Q_W x`` for allowable ``W`` over ``|x| = d``."""
    if j < 0:
        return frozenset()
    if not W or j <= W[0]:
        return frozenset([(j,) + W])
    rest = W[1:]
    d_rest = word_degree(rest, d)
    acc: set = set()
    for a, b in pair_terms(j, W[0], d_rest):
        for w in insert(b, rest, d):
            acc ^= insert(a, w, d)
    return frozenset(acc)


def normal_form(J: Iterable[int], d: int) -> frozenset:
    """Allowable normal form of a lower-indexed word over a class of degree ``d``."""
    cur = frozenset([()])
    for j in reversed(tuple(J)):
        acc: set = set()
        for w in cur:
            acc ^= insert(j, w, d)
        cur = frozenset(acc)
        if not cur:
            break
    return cur


def act_lower(J: Iterable[int], d: int) -> frozenset:
    """``Q_J x`` for ``|x| = d``: zero if any lower index is negative, else normalized."""
    J = tuple(J)
    if any(j < 0 for j in J):
        return frozenset()
    return normal_form(J, d)


def dl_adem_reduce(word: Iterable[int], d: int) -> frozenset:
    """Allowable normal form of the upper-indexed word ``Q^{a_1} ... Q^{a_s}`` on degree ``d``.

    Returns upper-indexed words. A stage with negative lower index kills the word.
    """
    J = upper_to_lower(tuple(word), d)
    return frozenset(lower_to_upper(w, d) for w in act_lower(J, d))


def format_upper(elt, base: str = "x") -> str:
    if not elt:
        return "0"
    return " + ".join(
        (" ".join(f"Q^{a}" for a in w) + " " if w else "") + base for w in sorted(elt, reverse=True)
    )


# -- Nishida relations on free objects ----------------------------------------

Cell = tuple  # (J, base degree, base index)


def nishida_terms(a: int, y_deg: int, r: int) -> list[tuple[int, int]]:
    """``(Q_a y) Sq^r = sum Q_{a-r+2i}(y Sq^i)``: the (i, new lower index) pairs that occur."""
    s = y_deg + a
    out = []
    for i in range(r // 2 + 1):
        if binom_mod2(s - r, r - 2 * i):
            out.append((i, a - r + 2 * i))
    return out


class NishidaAction:
    """Steenrod action on words over a module with known action ``base(i, n, idx)``."""

    def __init__(self, base: Callable[[int, int, int], Iterable[int]]):
        self.base = base
        self.cache: dict = {}

    def __call__(self, cell: Cell, r: int) -> frozenset:
        J, n, idx = cell
        if r == 0:
            return frozenset([cell])
        key = (cell, r)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if not J:
            out = frozenset(((), n - r, k) for k in self.base(r, n, idx))
        else:
            a, rest = J[0], J[1:]
            y = (rest, n, idx)
            y_deg = word_degree(rest, n)
            acc: set = set()
            for i, b in nishida_terms(a, y_deg, r):
                if b < 0:
                    continue
                for Jz, nz, kz in self(y, i):
                    for w in insert(b, Jz, nz):
                        acc ^= {(w, nz, kz)}
            out = frozenset(acc)
        self.cache[key] = out
        return out


def _sphere_base(r, n, idx):
    return ()


_sphere_nishida = NishidaAction(_sphere_base)


def nishida_act(J: Iterable[int], d: int, r: int) -> frozenset:
    """``(Q_J iota_d) . Sq^r`` in the free object on a trivial class; returns lower words."""
    return frozenset(w for w, _, _ in _sphere_nishida((tuple(J), d, 0), r))


# -- modules with Dyer-Lashof action -----------------------------------------

@dataclass
class QModule(FpModule):
    """An :class:`FpModule` with a length grading and lower-indexed DL tables.

    ``q[(a, n)]`` is the matrix of ``Q_a`` from degree ``n`` to ``2n + a``;
    only ``a >= 0`` is stored. ``max_length`` marks a length truncation: the
    module is then the quotient by everything of greater length.
    """

    lengths: dict[int, tuple[int, ...]] = field(default_factory=dict)
    q: dict[tuple[int, int], F2Matrix] = field(default_factory=dict)
    max_length: int | None = None

    def __post_init__(self):
        super().__post_init__()
        for n in self.basis:
            ls = self.lengths.get(n)
            if ls is None or len(ls) != self.dim(n):
                raise ValueError(f"length data missing in degree {n}")
        self.lengths = {n: tuple(self.lengths[n]) for n in self.basis}
        for (a, n), m in list(self.q.items()):
            if a < 0:
                raise ValueError("only Q_a with a >= 0 is stored")
            if m.is_zero():
                del self.q[(a, n)]
                continue
            if m.ncols != self.dim(n) or m.nrows != self.dim(2 * n + a):
                raise ValueError(f"Q_{a} on degree {n} has the wrong shape")

    def qmat(self, a: int, n: int) -> F2Matrix:
        m = self.q.get((a, n)) if a >= 0 else None
        if m is None:
            return F2Matrix.zero(self.dim(2 * n + a), self.dim(n))
        return m

    def length_of(self, n: int, idx: int) -> int:
        return self.lengths[n][idx]

    def length_mask(self, n: int, l: int) -> int:
        return sum(1 << i for i, x in enumerate(self.lengths.get(n, ())) if x == l)

    def dim_at(self, n: int, l: int) -> int:
        return sum(1 for x in self.lengths.get(n, ()) if x == l)

    def length_range(self) -> list[int]:
        return sorted({x for ls in self.lengths.values() for x in ls})

    def bigraded_dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for n, ls in self.lengths.items():
            for x in ls:
                out[(x, n)] = out.get((x, n), 0) + 1
        return out

    def truncate(self, cutoff: int) -> "QModule":
        base = FpModule.truncate(self, cutoff)
        return QModule(
            base.name, base.cutoff, base.basis, base.sq, base.unstable,
            {n: self.lengths[n] for n in base.basis},
            {(a, n): m for (a, n), m in self.q.items() if 2 * n + a <= base.cutoff},
            self.max_length,
        )

    def length_shift(self, l: int) -> "QModule":
        """``N(l)``: lengths raised by ``l``."""
        return QModule(
            f"{self.name}({l})", self.cutoff, self.basis, dict(self.sq), self.unstable,
            {n: tuple(x + l for x in ls) for n, ls in self.lengths.items()},
            dict(self.q),
            None if self.max_length is None else self.max_length + l,
        )

    def desuspend(self) -> "QModule":
        """``Sigma^{-1} N`` with ``Q_b (s^-1 x) = s^-1 Q_{b-1} x`` (so ``Q_0`` acts by 0)."""
        return QModule(
            f"S^-1({self.name})", self.cutoff - 1,
            {n - 1: b for n, b in self.basis.items()},
            {(r, n - 1): m for (r, n), m in self.sq.items()}, False,
            {n - 1: ls for n, ls in self.lengths.items()},
            # Q_{a} on degree n maps to 2n + a; after desuspension the source
            # is n - 1 and the target 2n + a - 1 = 2(n - 1) + (a + 1)
            {(a + 1, n - 1): m for (a, n), m in self.q.items()},
            self.max_length,
        )

    def frobenius(self) -> "QModule":
        """``Phi N``: ``Q_{2a}(Phi x) = Phi(Q_a x)``, odd ``Q`` act by zero."""
        base = FpModule.frobenius(self)
        return QModule(
            base.name, base.cutoff, base.basis, base.sq, base.unstable,
            {2 * n: ls for n, ls in self.lengths.items() if 2 * n <= self.cutoff},
            {(2 * a, 2 * n): m for (a, n), m in self.q.items() if 2 * (2 * n + a) <= self.cutoff},
            self.max_length,
        )

    def length_part(self, l: int) -> FpModule:
        """``N<l>`` as a Steenrod module."""
        spaces = {n: [1 << i for i, x in enumerate(ls) if x == l] for n, ls in self.lengths.items()}
        return subquotient(FpModule(self.name, self.cutoff, self.basis, self.sq, self.unstable),
                           spaces, {}, f"{self.name}<{l}>")

    def validate(self) -> Report:
        return validate_q(self)


def as_qmodule(m: FpModule, lengths: dict[int, tuple[int, ...]] | None = None) -> QModule:
    if isinstance(m, QModule):
        return m
    lengths = lengths or {n: (0,) * m.dim(n) for n in m.basis}
    return QModule(m.name, m.cutoff, m.basis, dict(m.sq), m.unstable, lengths, {})


def triv(m: FpModule, length: int = 0) -> QModule:
    """``m`` with trivial Dyer-Lashof action, concentrated in one length."""
    return QModule(f"triv({m.name})", m.cutoff, m.basis, dict(m.sq), m.unstable,
                   {n: (length,) * m.dim(n) for n in m.basis}, {})


def q_subquotient(N: QModule, top, bottom, name: str) -> QModule:
    """Subquotient of a QModule by length-homogeneous subspaces closed under Sq and Q."""
    base = subquotient(N, top, bottom, name)
    emb = base.embedding
    lengths = {}
    for n, reps in emb.reps.items():
        ls = []
        for v in reps:
            vals = {N.lengths[n][i] for i in support(v)}
            if len(vals) != 1:
                raise ValueError(f"subspace in degree {n} is not length-homogeneous")
            ls.append(vals.pop())
        lengths[n] = tuple(ls)
    q = {}
    for (a, n), mat in N.q.items():
        t = 2 * n + a
        if n not in emb.reps or t not in emb.reps:
            continue
        cols = tuple(emb.project(t, mat.apply(v)) for v in emb.reps[n])
        q[(a, n)] = F2Matrix(cols, len(emb.reps[t]))
    out = QModule(name, base.cutoff, base.basis, base.sq, base.unstable, lengths, q, N.max_length)
    out.embedding = emb  # type: ignore[attr-defined]
    return out


# -- the free functor R ------------------------------------------------------

def allowable_words(s: int, d: int, max_degree: int) -> list[tuple[int, ...]]:
    """Nondecreasing ``J`` in N^s with ``|Q_J iota_d| <= max_degree``."""
    budget = max_degree - (d << s)
    if budget < 0:
        return []
    out = []

    def rec(k: int, suffix: tuple[int, ...], used: int):
        # k = number of inner entries placed; next entry has weight 2^(s-k-1)
        if k == s:
            out.append(suffix)
            return
        weight = 1 << (s - k - 1)
        hi = suffix[0] if suffix else budget
        for j in range(0, hi + 1):
            if used + j * weight > budget:
                break
            rec(k + 1, (j,) + suffix, used + j * weight)

    rec(0, (), 0)
    out.sort()
    return out


def word_label(J, label: str) -> str:
    if not J:
        return label
    return "Q_(" + ",".join(map(str, J)) + ")" + label


def singer_free(m: FpModule, max_length: int, cutoff: int | None = None,
                name: str | None = None) -> QModule:
    """``tau_{<= L} R m`` in degrees ``<= cutoff``, with allowable-word basis."""
    cutoff = m.cutoff if cutoff is None else cutoff
    cells: dict[int, list[Cell]] = {}
    for n in m.degrees():
        for idx in range(m.dim(n)):
            for s in range(max_length + 1):
                for J in allowable_words(s, n, cutoff):
                    deg = word_degree(J, n)
                    cells.setdefault(deg, []).append((J, n, idx))
    for deg in cells:
        cells[deg].sort(key=lambda c: (len(c[0]), c[1], c[2], c[0]))
    index = {deg: {c: i for i, c in enumerate(cs)} for deg, cs in cells.items()}

    def base(i, n, idx):
        return support(m.act(i, n).cols[idx]) if n - i in m.basis else ()

    nish = NishidaAction(base)
    degs = sorted(cells)
    low = degs[0] if degs else 0
    sq = {}
    for deg in degs:
        for r in range(1, deg - low + 1):
            tgt = deg - r
            if tgt not in cells:
                continue
            cols = []
            for c in cells[deg]:
                v = 0
                for z in nish(c, r):
                    v ^= 1 << index[tgt][z]
                cols.append(v)
            mat = F2Matrix(tuple(cols), len(cells[tgt]))
            if not mat.is_zero():
                sq[(r, deg)] = mat
    q = {}
    for deg in degs:
        for a in range(0, cutoff - 2 * deg + 1):
            tgt = 2 * deg + a
            if tgt not in cells:
                continue
            cols = []
            for J, n, idx in cells[deg]:
                v = 0
                if len(J) < max_length:
                    for w in insert(a, J, n):
                        v ^= 1 << index[tgt][(w, n, idx)]
                cols.append(v)
            mat = F2Matrix(tuple(cols), len(cells[tgt]))
            if not mat.is_zero():
                q[(a, deg)] = mat
    basis = {deg: tuple(word_label(J, m.basis[n][idx]) for J, n, idx in cs) for deg, cs in cells.items()}
    lengths = {deg: tuple(len(J) for J, _, _ in cs) for deg, cs in cells.items()}
    out = QModule(name or f"R({m.name})", cutoff, basis, sq, False, lengths, q, max_length)
    out.cells = cells  # type: ignore[attr-defined]
    return out


# -- validation ----------------------------------------------------------------

def validate_q(N: QModule, limit: int = 20) -> Report:
    """Steenrod relations, length bookkeeping, DL Adem and Nishida relations."""
    rep = validate(N, limit)
    bad = list(rep.witnesses)
    D = N.cutoff
    for (a, n), mat in N.q.items():
        t = 2 * n + a
        for i, c in enumerate(mat.cols):
            want = N.lengths[n][i] + 1
            if any(N.lengths[t][k] != want for k in support(c)):
                bad.append((N.basis[n][i], f"Q_{a}", "length"))
    for n in N.degrees():
        for ji in range(0, D - 2 * n + 1):
            mid = 2 * n + ji
            for jo in range(ji + 1, D - 2 * mid + 1):
                lhs = N.qmat(jo, mid).compose(N.qmat(ji, n))
                rhs = [0] * N.dim(n)
                for a, b in pair_terms(jo, ji, n):
                    t = N.qmat(a, 2 * n + b).compose(N.qmat(b, n))
                    rhs = [x ^ y for x, y in zip(rhs, t.cols)]
                for i, (x, y) in enumerate(zip(lhs.cols, rhs)):
                    if x != y:
                        bad.append((N.basis[n][i], f"Q_{jo}", f"Q_{ji}"))
                        break
        # Nishida: (Q_a x) Sq^r = sum binom(s-r, r-2i) Q_{a-r+2i}(x Sq^i)
        for a in range(0, D - 2 * n + 1):
            top = 2 * n + a
            for r in range(1, top - (min(N.degrees())) + 1):
                lhs = N.act(r, top).compose(N.qmat(a, n))
                rhs = [0] * N.dim(n)
                for i, b in nishida_terms(a, n, r):
                    if b < 0:
                        continue
                    t = N.qmat(b, n - i).compose(N.act(i, n))
                    rhs = [x ^ y for x, y in zip(rhs, t.cols)]
                for i, (x, y) in enumerate(zip(lhs.cols, rhs)):
                    if x != y:
                        bad.append((N.basis[n][i], f"Q_{a}", f"Sq^{r}"))
                        break
        if len(bad) >= limit:
            break
    return Report(not bad, bad[:limit])


# -- Q_0, the suspension adjunction ---------------------------------------------

@dataclass
class Q0Analysis:
    q0: dict[int, F2Matrix]   # (Phi N)(1) in degree 2n -> N in degree 2n
    source: QModule            # (Phi N)(1)
    image: dict[int, list[int]]
    qsusp: QModule             # Sigma^{-1} Sigma-bar N  = coker Q_0
    qsusp1: QModule            # Sigma^{-1} Sigma-bar_1 N = ker Q_0


def q0_analysis(N: QModule) -> Q0Analysis:
    """Kernel and cokernel of ``Q_0 : (Phi N)(1) -> N``.

    With a length truncation at L, source classes of length > L (whose image
    was cut off) are discarded rather than reported as kernel.
    """
    src = N.frobenius().length_shift(1)
    if N.max_length is not None:
        L = N.max_length
        full = {n: [1 << i for i in range(src.dim(n))] for n in src.degrees()}
        over = {n: [1 << i for i, x in enumerate(ls) if x > L] for n, ls in src.lengths.items()}
        src = q_subquotient(src, full, over, src.name)
        src.max_length = L
    q0 = {}
    for n2 in src.degrees():
        mat = N.qmat(0, n2 // 2)
        emb = getattr(src, "embedding", None)
        if emb is not None:
            mat = F2Matrix(tuple(mat.apply(v) for v in emb.reps[n2]), mat.nrows)
        q0[n2] = mat
    ker = {n: list(reduce(m).kernel) for n, m in q0.items()}
    img = {n: list(reduce(m).image) for n, m in q0.items()}
    full = {n: [1 << i for i in range(N.dim(n))] for n in N.degrees()}
    coker = q_subquotient(N, full, img, f"coker Q0({N.name})")
    kern = q_subquotient(src, ker, {}, f"ker Q0({N.name})")
    return Q0Analysis(q0, src, img, coker, kern)
