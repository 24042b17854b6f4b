"""The infinite-delooping spectral sequence on the two families where it is explicit.

* ``M = Sigma^n A^*``: ``E^2`` sits on the anti-diagonal,
  ``E^infty_{-t,t} = L_t Sigma^{-1} F(n+t+1)^*``, and splitting admissible
  sequences recovers ``Sigma^n A^*`` degree by degree.
* ``M = Sigma^{-2} N`` with ``N`` unstable: two columns, read off from the
  four-term ``Sq_0`` sequence of ``N``.

Pages use the :class:`~dlkoszul.loops.SSPage` container with keys
``(s, t, degree)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .destab import require_unstable, desusp1_analysis, h0r_unstable
from .fpmodule import FpModule, build_F_dual, subquotient, validate
from .gf2 import reduce, rref
from .koszul import build_koszul, koszul_homology
from .loops import SSPage, loops
from .seqcomb import (admissible_basis, degree, enumerate_admissible, excess,
                      gamma_split, is_admissible)
from .steinberg import lowest_degree, steinberg_dim


@dataclass(frozen=True)
class SigmaPair:
    """The class ``sigma_{I'} Sq^{I''} iota_n`` of ``E^infty_{-t,t}``, ``t = len(I')``."""
    first: tuple[int, ...]
    second: tuple[int, ...]
    n: int

    @property
    def t(self) -> int:
        return len(self.first)

    @property
    def degree(self) -> int:
        return degree(self.first) + degree(self.second) + self.n

    def label(self) -> str:
        a = ",".join(map(str, self.first))
        b = ",".join(map(str, self.second))
        return f"s({a})Sq({b})i{self.n}"


def pair_ok(p: SigmaPair) -> bool:
    """Membership in the basis of ``L_t Sigma^{-1} F(n+t+1)^*``.

    When ``n + t + 1 = 0`` the module is ``Sigma^{-1} F`` and ``I'`` may end in
    zeros (its entries only need to exceed ``-1``).
    """
    I1, I2, n, t = p.first, p.second, p.n, p.t
    k = n + 1 + t
    if k < 0 or not is_admissible(I1) or not is_admissible(I2):
        return False
    if any(i <= 0 for i in I2) or (I2 and excess(I2) > k):
        return False
    if k == 0:
        return not I2 and all(i >= 0 for i in I1)
    if any(i <= 0 for i in I1):
        return False
    return t == 0 or I1[-1] >= k + degree(I2)


def sigma_pairs(n: int, t: int, deg: int) -> list[SigmaPair]:
    """All basis pairs of ``E^infty_{-t,t}`` in internal degree ``deg``."""
    k = n + 1 + t
    if k < 0:
        return []
    out = []
    total = deg - n
    if k == 0:
        for I1 in enumerate_admissible(total, t, min_last=0):
            out.append(SigmaPair(I1, (), n))
        return out
    for d2 in range(0, total + 1):
        for I2 in enumerate_admissible(d2, strictly_positive=True, excess_at_most=k):
            if t == 0:
                if d2 == total:
                    out.append(SigmaPair((), I2, n))
                continue
            for I1 in enumerate_admissible(total - d2, t, min_last=k + d2):
                out.append(SigmaPair(I1, I2, n))
    return out


def column_dim(n: int, t: int, deg: int) -> int:
    """``dim L_t Sigma^{-1} F(n+t+1)^*`` in degree ``deg``, from the Steinberg kernels.

    Degreewise ``L_t`` of a module is a sum of ``L_t Sigma^e F`` over a basis.
    """
    k = n + 1 + t
    if k < 0:
        return 0
    total = 0
    F = build_F_dual(k, max(deg + 1, k))
    for m in F.degrees():
        e = m - 1
        if lowest_degree(t, e) > deg:
            continue
        total += F.dim(m) * steinberg_dim(t, e, deg)
    return total


def split_sequence(I, n: int) -> SigmaPair:
    """``I -> (I', I'')`` for a basis element ``Sq^I`` of ``Sigma^n A^*``.

    For ``n < 0`` sequences too short to be split land in the column
    ``t = -(n+1)`` with ``I'`` padded by zeros.
    """
    I = tuple(I)
    T = -(n + 1)
    if n < 0 and len(I) <= T:
        return SigmaPair(I + (0,) * (T - len(I)), (), n)
    g = gamma_split(I, n + 1)
    return SigmaPair(g.prefix, g.suffix, n)


@dataclass
class Reconstruction:
    n: int
    cutoff: int
    page: SSPage
    target: dict[int, int]                          # dim Sigma^n A^* per degree
    pair_counts: dict[tuple[int, int], int]         # (t, degree) -> #pairs
    failures: list[tuple] = field(default_factory=list)

    def filtration(self) -> dict[tuple[int, int], int]:
        """``(t, degree) -> dim v_t``."""
        out = {}
        ts = sorted({t for (_, t, _) in self.page.dims} | {0})
        for k in range(min(self.n, 0), self.cutoff + 1):
            acc = 0
            for t in range(0, max(ts) + 1):
                acc += self.page.dims.get((-t, t, k), 0)
                out[(t, k)] = acc
        return out

    def totals(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (s, t, k), v in self.page.dims.items():
            out[k] = out.get(k, 0) + v
        return out

    @property
    def ok(self) -> bool:
        return not self.failures


def max_column(n: int, cutoff: int) -> int:
    """Beyond this ``t`` the column is zero in degrees ``<= cutoff``."""
    t = 0
    while True:
        t += 1
        k = n + 1 + t
        if k >= 0 and lowest_degree(t, k - 1) > cutoff:
            return t - 1


def ss_dual_steenrod(n: int, cutoff: int) -> Reconstruction:
    """``E^infty`` for ``Sigma^n A^*`` in degrees ``<= cutoff`` and the reconstruction check."""
    page = SSPage(r=-1)  # E^2 = E^infty
    tmax = max_column(n, cutoff)
    lo = min(n, 0)
    counts = {}
    failures: list[tuple] = []
    target = {}
    for k in range(lo, cutoff + 1):
        target[k] = len(admissible_basis(k - n)) if k >= n else 0
        pairs_here: set[SigmaPair] = set()
        for t in range(0, tmax + 1):
            ps = sigma_pairs(n, t, k)
            if ps:
                counts[(t, k)] = len(ps)
            pairs_here.update(ps)
            dim = column_dim(n, t, k)
            if dim != len(ps):
                failures.append(("column", t, k, dim, len(ps)))
            if dim:
                page.dims[(-t, t, k)] = dim
        if k < n:
            continue
        images = set()
        for I in admissible_basis(k - n):
            p = split_sequence(I, n)
            if not pair_ok(p) or p.degree != k:
                failures.append(("split", I, p))
            elif p in images:
                failures.append(("collision", I, p))
            images.add(p)
        if images != pairs_here:
            missed = sorted(pairs_here - images, key=lambda p: (p.t, p.first, p.second))
            failures.append(("not onto", k, missed[:3]))
    return Reconstruction(n, cutoff, page, target, counts, failures)


def negative_part(rec: Reconstruction) -> dict[tuple[int, int], int]:
    """``(t, degree) -> dim`` of ``E^infty`` in negative internal degrees."""
    return {(t, k): v for (s, t, k), v in rec.page.dims.items() if k < 0}


# -- M = Sigma^{-2} N --------------------------------------------------------------

@dataclass
class Desusp2:
    page: SSPage
    v0: dict[int, int]                # Sigma^{-1} Omega N
    v1_over_v0: dict[int, int]        # Sigma^{-2} ker(Phi N -> Sigma Omega_1 N)
    v1: dict[int, int]                # Sigma^{-2} N
    reliable_to: int
    failures: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def ss_desusp2(N: FpModule) -> Desusp2:
    """Columns ``E^2_{0,0}`` and ``E^2_{-1,1}`` for ``Sigma^{-2} N`` and the filtration check."""
    require_unstable(N)
    lp = loops(N)
    an = desusp1_analysis(N)
    D = N.cutoff - 2
    v0 = {n - 2: lp.sigma_omega.dim(n) for n in lp.sigma_omega.degrees() if n - 2 <= D}
    e1 = {k: v for k, v in an.lderq1.items() if k <= D}
    v1 = {n - 2: N.dim(n) for n in N.degrees()}
    page = SSPage(r=2)
    for k, v in v0.items():
        page.dims[(0, 0, k)] = v
    for k, v in e1.items():
        page.dims[(-1, 1, k)] = v
    failures = []
    for k in sorted(set(v0) | set(e1) | set(v1)):
        if k > D:
            continue
        if v0.get(k, 0) + e1.get(k, 0) != v1.get(k, 0):
            failures.append(("exhaustion", k, v0.get(k, 0), e1.get(k, 0), v1.get(k, 0)))
        # independent count of the quotient: rank of Sq_0 into Phi N
        rank = len(reduce(N.sq0()[k + 2]).image) if (k + 2) in N.basis else 0
        if e1.get(k, 0) != rank:
            failures.append(("quotient", k, e1.get(k, 0), rank))
    return Desusp2(page, v0, e1, v1, D, failures)


def suspension_compatibility(N: FpModule) -> list[tuple]:
    """``v_t Sigma^{-2} N -> Sigma^{-1} v_t Sigma^{-1} N`` is mono, and the identity on ``v_1``.

    ``v_t Sigma^{-1} N = Sigma^{-1} N`` for all ``t``; for ``t = 0`` the map is
    ``Sigma^{-1} Omega N -> Sigma^{-2} N``, induced by ``Sigma Omega N = ker Sq_0``.
    """
    r = ss_desusp2(N)
    lp = loops(N)
    bad = []
    emb = lp.sigma_omega.embedding
    for n in lp.sigma_omega.degrees():
        if n - 2 > r.reliable_to:
            continue
        if len(rref(emb.reps[n])) != lp.sigma_omega.dim(n):
            bad.append(("t=0 not mono", n - 2))
    for k, v in r.v1.items():
        if k <= r.reliable_to and r.v0.get(k, 0) + r.v1_over_v0.get(k, 0) != v:
            bad.append(("t=1 not iso", k))
    return bad


# -- instability ---------------------------------------------------------------------

@dataclass
class Verdict:
    cells: dict[int, dict[int, int]]   # t -> {degree: dim (L_t q H0r Sigma^t M)<t>}
    suspension_unstable: bool
    direct: bool                       # Sigma M checked directly against instability

    @property
    def consistent(self) -> bool:
        return self.suspension_unstable == self.direct


def _lderq_free(m: FpModule, t: int, cutoff: int) -> dict[int, int]:
    """``(L_t q R m)<t>``; zero by acyclicity of free objects, computed anyway."""
    R = h0r_unstable(m, t, cutoff).module
    degs = range(min(R.degrees(), default=0), cutoff + 1)
    h = koszul_homology(build_koszul(R, t, degs))
    return {k: v for (s, k), v in h.items() if s == t}


def instability_test(N: FpModule, desuspensions: int, max_t: int = 2,
                     cutoff: int | None = None) -> Verdict:
    """Is ``Sigma M`` unstable, for ``M = Sigma^{-desuspensions} N``, ``N`` unstable?

    ``desuspensions`` is 1 or 2. For ``t`` with ``t >= desuspensions`` the object
    ``H0r Sigma^t M`` is free on ``Sigma^{t-d} N``; for ``d = 2, t = 1`` it is
    the single-desuspension case.
    """
    if desuspensions not in (1, 2):
        raise ValueError("only Sigma^{-1} N and Sigma^{-2} N are covered")
    require_unstable(N)
    cutoff = N.cutoff if cutoff is None else cutoff
    cells: dict[int, dict[int, int]] = {}
    for t in range(1, max_t + 1):
        e = t - desuspensions
        if e >= 0:
            cells[t] = _lderq_free(N.shift(e), t, cutoff + e)
        else:
            cells[t] = dict(desusp1_analysis(N).lderq1)
    positive = all(not v for c in cells.values() for v in c.values())
    sm = N.shift(1 - desuspensions)
    sm.unstable = True
    return Verdict(cells, positive, bool(validate(sm)))


# -- connectivity -----------------------------------------------------------------------

def conn_bound(t: int, c: int) -> int:
    """``E^2_{-t,t}`` is this-connected when ``M`` is ``c``-connected."""
    d = max(c + t + 1, -1)
    return (1 << t) * (d + 1) - (t + 2)


@dataclass
class ConnRow:
    t: int
    bound: int
    lowest: int | None

    @property
    def ok(self) -> bool:
        return self.lowest is None or self.lowest > self.bound


def connectivity_table(page: SSPage, c: int, ts) -> list[ConnRow]:
    rows = []
    for t in ts:
        degs = [k for (s, tt, k), v in page.dims.items() if tt == t and s == -t and v]
        rows.append(ConnRow(t, conn_bound(t, c), min(degs) if degs else None))
    return rows


def filtration_quotients_unstable(N: FpModule) -> dict[int, bool]:
    """``Sigma^{2^t} gr_t`` is unstable for ``t = 0, 1``.

    ``Sigma gr_0 = Omega N`` and ``Sigma^2 gr_1 = im Sq_0``, a submodule of ``Phi N``.
    """
    lp = loops(N)
    im = {n: list(reduce(m).image) for n, m in N.sq0().items() if n in lp.phi.basis}
    gr1 = subquotient(lp.phi, im, {}, "im Sq0")
    gr1.unstable = True
    return {0: bool(validate(lp.omega)), 1: bool(validate(gr1))}
