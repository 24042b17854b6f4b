"""Graded F_2-modules with a homological right Steenrod action.

``x . Sq^r`` lowers degree by ``r``; a product acts left to right, so
``x . (Sq^a Sq^b) = (x . Sq^a) . Sq^b``. Modules are stored degreewise: a list
of labels per degree and, for each ``(r, n)``, the matrix of ``Sq^r`` from
degree ``n`` to degree ``n - r``. Everything above ``cutoff`` is absent, and
since operations lower degree a truncation is an honest submodule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .gf2 import Echelon, F2Matrix, lowbit, reduce, support
from .seqcomb import excess, free_unstable_basis
from .steenrod import adem_reduce, adem_terms


@dataclass
class FpModule:
    name: str
    cutoff: int
    basis: dict[int, tuple[str, ...]]
    sq: dict[tuple[int, int], F2Matrix] = field(default_factory=dict)
    unstable: bool = False

    def __post_init__(self):
        self.basis = {n: tuple(b) for n, b in self.basis.items() if b and n <= self.cutoff}
        for (r, n), m in list(self.sq.items()):
            if r <= 0:
                raise ValueError(f"Sq^{r} is not stored; only r >= 1")
            if m.is_zero() or n not in self.basis or (n - r) not in self.basis:
                if not m.is_zero() and n in self.basis:
                    raise ValueError(f"Sq^{r} from degree {n} lands in an empty degree")
                del self.sq[(r, n)]
                continue
            if m.ncols != self.dim(n) or m.nrows != self.dim(n - r):
                raise ValueError(f"Sq^{r} on degree {n} has the wrong shape")

    # -- bookkeeping --------------------------------------------------------
    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def degrees(self) -> list[int]:
        return sorted(self.basis)

    def hilbert(self) -> dict[int, int]:
        return {n: self.dim(n) for n in self.degrees()}

    def total_dim(self) -> int:
        return sum(self.dim(n) for n in self.basis)

    def locate(self, label: str) -> tuple[int, int]:
        for n, labels in self.basis.items():
            if label in labels:
                return n, labels.index(label)
        raise KeyError(label)

    def act(self, r: int, n: int) -> F2Matrix:
        if r == 0:
            return F2Matrix(tuple(1 << i for i in range(self.dim(n))), self.dim(n))
        m = self.sq.get((r, n))
        if m is None:
            return F2Matrix.zero(self.dim(n - r), self.dim(n))
        return m

    def act_word(self, word: Iterable[int], n: int) -> F2Matrix:
        """Matrix of ``Sq^{w_1} ... Sq^{w_k}`` out of degree ``n``."""
        m = self.act(0, n)
        for r in word:
            m = self.act(r, n).compose(m)
            n -= r
        return m

    def act_vec(self, r: int, n: int, v: int) -> int:
        return self.act(r, n).apply(v)

    def is_zero(self) -> bool:
        return not self.basis

    # -- constructions ------------------------------------------------------
    def shift(self, k: int, name: str | None = None) -> "FpModule":
        """Suspension ``Sigma^k``: same tables, degrees moved up by ``k``."""
        return FpModule(
            name or f"S^{k}({self.name})",
            self.cutoff + k,
            {n + k: b for n, b in self.basis.items()},
            {(r, n + k): m for (r, n), m in self.sq.items()},
            unstable=self.unstable and k >= 0,
        )

    def truncate(self, cutoff: int) -> "FpModule":
        cutoff = min(cutoff, self.cutoff)
        return FpModule(
            self.name,
            cutoff,
            {n: b for n, b in self.basis.items() if n <= cutoff},
            {k: m for k, m in self.sq.items() if k[1] <= cutoff},
            self.unstable,
        )

    def frobenius(self) -> "FpModule":
        """``Phi M``: degrees doubled, ``(Phi x) Sq^{2i} = Phi(x Sq^i)``, odd squares zero.

        Kept only up to the same cutoff, where it is determined by ``M``.
        """
        basis = {2 * n: tuple(f"F({b})" for b in labels)
                 for n, labels in self.basis.items() if 2 * n <= self.cutoff}
        sq = {(2 * r, 2 * n): m for (r, n), m in self.sq.items() if 2 * n <= self.cutoff}
        return FpModule(f"Phi({self.name})", self.cutoff, basis, sq, self.unstable)

    def sq0(self) -> dict[int, F2Matrix]:
        """``Sq_0 : M -> Phi M`` degreewise; in degree 2k it is ``Sq^k`` into ``M_k``."""
        out = {}
        for n in self.degrees():
            if n % 2 == 0 and n // 2 in self.basis:
                out[n] = self.act(n // 2, n)
            else:
                out[n] = F2Matrix.zero(self.dim(n // 2) if n % 2 == 0 else 0, self.dim(n))
        return out

    def submodule(self, spaces: dict[int, Iterable[int]], name: str = "sub") -> "Subquotient":
        return subquotient(self, {n: list(v) for n, v in spaces.items()}, {}, name)

    def quotient(self, spaces: dict[int, Iterable[int]], name: str = "quot") -> "Subquotient":
        full = {n: [1 << i for i in range(self.dim(n))] for n in self.degrees()}
        return subquotient(self, full, {n: list(v) for n, v in spaces.items()}, name)

    def validate(self) -> "Report":
        return validate(self)


@dataclass
class Subquotient:
    """A subquotient ``A / B`` of a module, with its coordinate maps."""

    module: FpModule
    top: dict[int, Echelon]
    bottom: dict[int, Echelon]
    reps: dict[int, list[int]]  # ambient representatives of the basis

    def project(self, n: int, v: int) -> int:
        """Coordinates of the class of ambient ``v`` (which must lie in ``A``)."""
        v = self.bottom[n].reduce(v) if n in self.bottom else v
        coords = 0
        red = self._reps_echelon(n)
        rest = v
        for p, (w, hist) in red.items():
            if (rest >> p) & 1:
                rest ^= w
                coords ^= hist
        if rest:
            raise ValueError(f"vector is not in the subquotient in degree {n}")
        return coords

    def _reps_echelon(self, n: int) -> dict[int, tuple[int, int]]:
        cache = self.__dict__.setdefault("_cache", {})
        if n not in cache:
            piv: dict[int, tuple[int, int]] = {}
            for k, v in enumerate(self.reps.get(n, [])):
                hist = 1 << k
                while v:
                    p = lowbit(v)
                    if p not in piv:
                        break
                    w, h = piv[p]
                    v ^= w
                    hist ^= h
                # reps are independent modulo bottom and already bottom-reduced
                piv[lowbit(v)] = (v, hist)
            # fully reduce so one pass in project() suffices
            keys = sorted(piv, reverse=True)
            for p in keys:
                w, h = piv[p]
                for q in keys:
                    if q != p:
                        w2, h2 = piv[q]
                        if (w2 >> p) & 1:
                            piv[q] = (w2 ^ w, h2 ^ h)
            cache[n] = piv
        return cache[n]

    def lift(self, n: int, coords: int) -> int:
        v = 0
        reps = self.reps.get(n, [])
        for k in support(coords):
            v ^= reps[k]
        return v


def subquotient(m: FpModule, top: dict[int, list[int]], bottom: dict[int, list[int]],
                name: str) -> FpModule:
    """Build ``A/B`` for graded subspaces ``B <= A`` closed under the action.

    Returns a module whose ``.embedding`` attribute is the :class:`Subquotient`
    record (ambient representatives and projection).
    """
    tops = {n: Echelon(vs) for n, vs in top.items()}
    bots = {n: Echelon(vs) for n, vs in bottom.items()}
    reps: dict[int, list[int]] = {}
    for n, ech in tops.items():
        b = bots.get(n, Echelon())
        rs = []
        seen = Echelon(b.basis())
        for v in ech.basis():
            v = b.reduce(v)
            if seen.add(v):
                rs.append(v)
        if rs:
            reps[n] = rs
    sq_rec = Subquotient(m, tops, bots, reps)
    labels = {}
    for n, rs in reps.items():
        names = m.basis[n]
        labels[n] = tuple("+".join(names[i] for i in support(v)) for v in rs)
    sq = {}
    for (r, n), mat in m.sq.items():
        if n not in reps or n - r not in reps:
            continue
        cols = []
        for v in reps[n]:
            w = mat.apply(v)
            cols.append(sq_rec.project(n - r, w))
        sq[(r, n)] = F2Matrix(tuple(cols), len(reps[n - r]))
    out = FpModule(name, m.cutoff, labels, sq, m.unstable)
    out.embedding = sq_rec  # type: ignore[attr-defined]
    return out


def sphere(d: int, cutoff: int | None = None, name: str | None = None) -> FpModule:
    """``Sigma^d F``: one class in degree d, trivial action."""
    cutoff = d if cutoff is None else cutoff
    return FpModule(name or f"S^{d}F", cutoff, {d: (f"i{d}",)}, {}, unstable=d >= 0)


def direct_sum(*mods: FpModule, name: str = "sum") -> FpModule:
    cutoff = min(m.cutoff for m in mods)
    basis: dict[int, list[str]] = {}
    offsets: list[dict[int, int]] = []
    for k, m in enumerate(mods):
        off = {}
        for n in m.degrees():
            if n > cutoff:
                continue
            cur = basis.setdefault(n, [])
            off[n] = len(cur)
            cur.extend(f"{lab}#{k}" if len(mods) > 1 else lab for lab in m.basis[n])
        offsets.append(off)
    sq: dict[tuple[int, int], list[int]] = {}
    for k, m in enumerate(mods):
        for (r, n), mat in m.sq.items():
            if n > cutoff:
                continue
            cols = sq.setdefault((r, n), [0] * len(basis[n]))
            for j, c in enumerate(mat.cols):
                cols[offsets[k][n] + j] = c << offsets[k][n - r]
    return FpModule(
        name, cutoff, basis,
        {(r, n): F2Matrix(tuple(c), len(basis[n - r])) for (r, n), c in sq.items()},
        unstable=all(m.unstable for m in mods),
    )


# -- free unstable modules and their duals ----------------------------------

def sq_label(I) -> str:
    return "Sq(" + ",".join(map(str, I)) + ")" if I else "1"


def left_action_F(n: int, r: int, I: tuple[int, ...]) -> frozenset:
    """``Sq^r . Sq^I iota_n`` in F(n), as a set of admissible sequences of excess <= n."""
    if r == 0:
        return frozenset([I])
    return frozenset(w for w in adem_reduce((r,) + I) if excess(w) <= n)


def build_F_dual(n: int, cutoff: int) -> FpModule:
    """``F(n)^*``: dual of the free unstable module on a class of degree ``n``."""
    if n < 0:
        return FpModule(f"F({n})*", cutoff, {}, {}, unstable=True)
    bases = {n + k: free_unstable_basis(n, k) for k in range(0, cutoff - n + 1)}
    bases = {deg: b for deg, b in bases.items() if b}
    index = {deg: {I: i for i, I in enumerate(b)} for deg, b in bases.items()}
    sq = {}
    for deg, b in bases.items():
        for r in range(1, deg - n + 1):
            if deg - r not in bases:
                continue
            # transpose: (Sq^J)^* . Sq^r = sum over K with Sq^J in Sq^r Sq^K
            cols = [0] * len(b)
            for k, K in enumerate(bases[deg - r]):
                for J in left_action_F(n, r, K):
                    cols[index[deg][J]] ^= 1 << k
            mat = F2Matrix(tuple(cols), len(bases[deg - r]))
            if not mat.is_zero():
                sq[(r, deg)] = mat
    labels = {deg: tuple(sq_label(I) + "*" for I in b) for deg, b in bases.items()}
    return FpModule(f"F({n})*", cutoff, labels, sq, unstable=True)


# -- validation ---------------------------------------------------------------

@dataclass
class Report:
    ok: bool
    witnesses: list[tuple[str, ...]] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def validate(m: FpModule, limit: int = 20) -> Report:
    """Check degree bookkeeping, Adem relations on pairs and (if flagged) instability."""
    bad: list[tuple[str, ...]] = []
    degs = m.degrees()
    if not degs:
        return Report(True)
    low = degs[0]
    for (r, n), mat in m.sq.items():
        if mat.ncols != m.dim(n) or mat.nrows != m.dim(n - r):
            bad.append(("shape", str(r), str(n)))
    for n in degs:
        for b in range(1, n - low + 1):
            for a in range(1, min(2 * b, n - low - b + 1)):
                lhs = m.act_word((a, b), n)
                rhs = [0] * m.dim(n)
                for w in adem_terms(a, b):
                    t = m.act_word(w, n)
                    rhs = [x ^ y for x, y in zip(rhs, t.cols)]
                for j, (x, y) in enumerate(zip(lhs.cols, rhs)):
                    if x != y:
                        bad.append((m.basis[n][j], str(a), str(b)))
                        break
                if len(bad) >= limit:
                    return Report(False, bad)
        if m.unstable:
            for r in range(1, n - low + 1):
                if 2 * r > n:
                    mat = m.act(r, n)
                    for j, c in enumerate(mat.cols):
                        if c:
                            bad.append((m.basis[n][j], str(r), "unstable"))
                            break
    return Report(not bad, bad[:limit])


def graded_kernel(maps: dict[int, F2Matrix]) -> dict[int, list[int]]:
    return {n: list(reduce(mat).kernel) for n, mat in maps.items()}


def graded_image(maps: dict[int, F2Matrix]) -> dict[int, list[int]]:
    return {n: list(reduce(mat).image) for n, mat in maps.items()}
