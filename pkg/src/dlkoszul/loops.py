"""Loop functors, the Sq_0-kernel filtration and the single-delooping spectral sequence.

For an unstable module ``M`` the top square ``Sq_0 : M -> Phi M`` gives

    0 -> Sigma Omega M -> M -> Phi M -> Sigma Omega_1 M -> 0.

All constructions work up to the cutoff of ``M``; ``Phi M`` is only formed in
degrees ``<= cutoff`` so that the cokernel there is the true one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .fpmodule import FpModule, subquotient
from .gf2 import Echelon, F2Matrix, reduce, support


@dataclass
class Loops:
    sigma_omega: FpModule   # ker Sq_0, in the degrees of M
    sigma_omega1: FpModule  # coker Sq_0, in the degrees of Phi M
    phi: FpModule
    q0: dict[int, F2Matrix]  # Phi(Sigma Omega M) -> Sigma Omega_1 M, by degree
    name: str = "M"

    @property
    def omega(self) -> FpModule:
        om = self.sigma_omega.shift(-1, f"Omega({self.name})")
        om.unstable = True
        return om

    @property
    def omega1(self) -> FpModule:
        om = self.sigma_omega1.shift(-1, f"Omega1({self.name})")
        om.unstable = True
        return om


class NotUnstableError(ValueError):
    pass


def _require_unstable(m: FpModule):
    if not m.unstable:
        raise NotUnstableError(f"{m.name} is not flagged unstable")
    for (r, n), mat in m.sq.items():
        if 2 * r > n and not mat.is_zero():
            raise NotUnstableError(f"{m.name}: Sq^{r} nonzero on degree {n}")


def loops(m: FpModule) -> Loops:
    _require_unstable(m)
    phi = m.frobenius()
    s0 = m.sq0()
    ker = {n: list(reduce(mat).kernel) for n, mat in s0.items()}
    img = {n: list(reduce(mat).image) for n, mat in s0.items()}
    so = subquotient(m, ker, {}, f"SOmega({m.name})")
    full = {n: [1 << i for i in range(phi.dim(n))] for n in phi.degrees()}
    so1 = subquotient(phi, full, img, f"SOmega1({m.name})")
    so.unstable = so1.unstable = True
    # q0: Phi(ker) -> Phi M -> coker; in degree 2k the source is ker in degree k
    q0 = {}
    emb = so.embedding
    proj = so1.embedding
    for k in so.degrees():
        n = 2 * k
        if n > m.cutoff:
            continue
        cols = tuple(proj.project(n, v) if n in phi.basis else 0 for v in emb.reps[k])
        q0[n] = F2Matrix(cols, so1.dim(n))
    return Loops(so, so1, phi, q0, m.name)


def omega(m: FpModule) -> FpModule:
    return loops(m).omega


def omega1(m: FpModule) -> FpModule:
    return loops(m).omega1


# -- Hilbert series -----------------------------------------------------------

def hilbert(m: FpModule) -> dict[int, int]:
    return m.hilbert()


def loop_identity_sides(m: FpModule, upto: int | None = None):
    """Coefficients of ``H_M(t) - H_M(t^2)`` and ``t (H_{Omega M} - H_{Omega_1 M})``."""
    lp = loops(m)
    upto = m.cutoff if upto is None else upto
    lhs, rhs = {}, {}
    for k in range(0, upto + 1):
        lhs[k] = m.dim(k) - (m.dim(k // 2) if k % 2 == 0 else 0)
        rhs[k] = lp.omega.dim(k - 1) - lp.omega1.dim(k - 1)
    return lhs, rhs


def check_loop_identity(m: FpModule, upto: int | None = None) -> int | None:
    """First degree where the loop identity fails, or None."""
    if m.dim(0) or any(n < 0 for n in m.degrees()):
        raise ValueError("the loop identity needs a 0-connected module")
    lhs, rhs = loop_identity_sides(m, upto)
    for k in sorted(lhs):
        if lhs[k] != rhs[k]:
            return k
    return None


# -- the Sq_0-kernel filtration ----------------------------------------------

def sq0_power(m: FpModule, n: int, times: int) -> F2Matrix:
    """Matrix of the ``times``-fold iterate of ``Sq_0`` out of degree ``n``."""
    mat = m.act(0, n)
    deg = n
    for _ in range(times):
        if deg % 2:
            return F2Matrix.zero(0, m.dim(n))
        mat = m.act(deg // 2, deg).compose(mat)
        deg //= 2
    return mat


def f_filtration(m: FpModule, p: int) -> dict[int, list[int]]:
    """``f_p M``: kernel of the ``(p+1)``-fold iterate of ``Sq_0`` (``f_{-1} = 0``)."""
    if p < 0:
        return {n: [] for n in m.degrees()}
    return {n: list(reduce(sq0_power(m, n, p + 1)).kernel) for n in m.degrees()}


# -- the delooping spectral sequence -------------------------------------------

@dataclass
class SSPage:
    r: int
    dims: dict[tuple[int, int, int], int] = field(default_factory=dict)  # (p, q, degree)

    def total(self, n: int, q_of_p=lambda p: -p) -> int:
        return sum(v for (p, q, d), v in self.dims.items() if d == n and q == q_of_p(p))

    def nonzero(self):
        return {k: v for k, v in self.dims.items() if v}


def _odd_part(n: int) -> tuple[int, int]:
    j = 0
    while n % 2 == 0:
        n //= 2
        j += 1
    return n, j


def _span_dim(vectors) -> int:
    return len(Echelon(vectors))


def _intersect(a: list[int], b: list[int]) -> list[int]:
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    # kernel of [a | b] gives the relations sum x_i a_i = sum y_j b_j
    cols = tuple(a) + tuple(b)
    nbits = max(v.bit_length() for v in cols)
    mat = F2Matrix(cols, nbits)
    out = []
    for rel in reduce(mat).kernel:
        v = 0
        for i in support(rel):
            if i < len(a):
                v ^= a[i]
        if v:
            out.append(v)
    return Echelon(out).basis()


@dataclass
class _Tower:
    """One Sq_0 tower ``V_j = M_{m 2^j}`` with ``x : V_j -> V_{j-1}``, and its injective hull."""

    m: int
    levels: int                  # top level K (inclusive)
    dims: list[int]              # dim V_j
    x: list[F2Matrix]            # x[j] : V_j -> V_{j-1}  (x[0] = 0)
    socle_levels: list[int] = field(default_factory=list)  # k for each J(k) summand
    phi: list[F2Matrix] = field(default_factory=list)      # V_j -> I_j

    def hull_dim(self, j: int) -> int:
        return sum(1 for k in self.socle_levels if k <= j)

    def hull_index(self, j: int) -> list[int]:
        return [s for s, k in enumerate(self.socle_levels) if k <= j]

    def hull_x(self, j: int) -> F2Matrix:
        """``x : I_j -> I_{j-1}``; basis of I_j indexed by summands with k <= j."""
        src = self.hull_index(j)
        tgt = {s: i for i, s in enumerate(self.hull_index(j - 1))} if j > 0 else {}
        cols = tuple((1 << tgt[s]) if s in tgt else 0 for s in src)
        return F2Matrix(cols, len(tgt))


def _build_tower(mod: FpModule, m: int, cutoff: int) -> _Tower:
    K = 0
    while m << (K + 1) <= cutoff:
        K += 1
    dims = [mod.dim(m << j) for j in range(K + 1)]
    x = [F2Matrix.zero(0, dims[0])]
    for j in range(1, K + 1):
        n = m << j
        x.append(mod.act(n // 2, n))
    t = _Tower(m, K, dims, x)
    # socle at each level, with a retraction V_k -> socle coordinates
    socle_funcs: list[list[int]] = []  # per level: functionals (as row bitsets over V_k)
    for k in range(K + 1):
        ker = list(reduce(x[k]).kernel) if dims[k] else []
        # extend the socle basis to a basis of V_k; the dual basis restricted to
        # the socle part is a retraction
        ech = Echelon()
        basis = []
        for v in ker:
            ech.add(v)
            basis.append(v)
        for i in range(dims[k]):
            if ech.add(1 << i):
                basis.append(1 << i)
        # invert the basis matrix: functional s reads coefficient of basis[s]
        inv = _inverse_columns(basis, dims[k])
        funcs = inv[: len(ker)]
        socle_funcs.append(funcs)
        t.socle_levels.extend([k] * len(ker))
    # phi_j(v) has coordinate lambda_s(x^{j-k} v) on summand s (level k <= j)
    offsets = []
    acc = 0
    for k in range(K + 1):
        offsets.append(acc)
        acc += len(socle_funcs[k])
    for j in range(K + 1):
        idx = t.hull_index(j)
        pos = {s: i for i, s in enumerate(idx)}
        cols = []
        for b in range(dims[j]):
            v = 1 << b
            out = 0
            w = v
            for k in range(j, -1, -1):
                # w = x^{j-k} v in V_k
                for s_local, func in enumerate(socle_funcs[k]):
                    if (func & w).bit_count() & 1:
                        out |= 1 << pos[offsets[k] + s_local]
                if k > 0:
                    w = x[k].apply(w)
            cols.append(out)
        t.phi.append(F2Matrix(tuple(cols), len(idx)))
    return t


def _inverse_columns(basis: list[int], n: int) -> list[int]:
    """Rows of the inverse of the square matrix whose columns are ``basis``.

    Row ``s`` is the functional returning the coefficient of ``basis[s]``.
    """
    # Solve B^{-1} by eliminating [B | I] on rows.
    rows = [0] * n
    for j, c in enumerate(basis):
        for i in support(c):
            rows[i] |= 1 << j
    aug = [(rows[i], 1 << i) for i in range(n)]
    out = [0] * n
    used = [False] * n
    for col in range(n):
        piv = next(i for i in range(n) if not used[i] and (aug[i][0] >> col) & 1)
        used[piv] = True
        for i in range(n):
            if i != piv and (aug[i][0] >> col) & 1:
                aug[i] = (aug[i][0] ^ aug[piv][0], aug[i][1] ^ aug[piv][1])
    for i in range(n):
        col = aug[i][0].bit_length() - 1
        out[col] = aug[i][1]
    return out


def deloop_ss(mod: FpModule, cutoff: int | None = None, max_page: int | None = None) -> list[SSPage]:
    """Pages ``E^0, E^1, ...`` of the spectral sequence of the filtered injective hull.

    ``M -> I_0 -> I_1`` is realized towerwise (towers ``m 2^j``, m odd) with the
    injective hull built from the socle ``ker Sq_0``; both terms carry the
    filtration ``f_p = ker Sq_0^{p+1}``. The last page returned is ``E^infty``.
    Keys are ``(p, q, internal degree)`` with ``q = -p`` or ``-p-1``.
    """
    cutoff = mod.cutoff if cutoff is None else min(cutoff, mod.cutoff)
    if any(n <= 0 for n in mod.degrees()):
        raise ValueError("the delooping spectral sequence needs a 0-connected module")
    _require_unstable(mod)
    towers = [_build_tower(mod, m, cutoff) for m in range(1, cutoff + 1, 2)]
    top = max((t.levels for t in towers), default=0)
    last = top + 2 if max_page is None else max_page
    pages = [SSPage(r) for r in range(last + 1)]
    for t in towers:
        for j in range(t.levels + 1):
            _tower_level_pages(t, j, pages)
    return pages


def _tower_level_pages(t: _Tower, j: int, pages: list[SSPage]):
    n = t.m << j
    idx = t.hull_index(j)
    dimI = len(idx)
    if dimI == 0:
        return
    phiV = list(reduce(t.phi[j]).image)

    # F_p I_0 at level j: summands with j - k <= p
    def F(p: int) -> list[int]:
        return [1 << i for i, s in enumerate(idx) if j - t.socle_levels[s] <= p]

    # x^{a} : I_j -> I_{j-a}
    def hull_pow(a: int) -> F2Matrix:
        mat = F2Matrix(tuple(1 << i for i in range(dimI)), dimI)
        for lvl in range(j, j - a, -1):
            mat = t.hull_x(lvl).compose(mat)
        return mat

    cache: dict[int, list[int]] = {}

    def P(q: int) -> list[int]:
        """Preimage in I_0 of f_q I_1 = {y : x^{q+1} y in phi(V)}; P(q<0) = phi(V)."""
        if q < 0:
            return phiV
        if q not in cache:
            a = q + 1
            if j - a < 0:
                cache[q] = [1 << i for i in range(dimI)]
            else:
                tgt = Echelon(reduce(t.phi[j - a]).image)
                xa = hull_pow(a)
                cols = tuple(tgt.reduce(c) for c in xa.cols)
                nb = max((c.bit_length() for c in cols), default=0)
                cache[q] = list(reduce(F2Matrix(cols, nb)).kernel)
        return cache[q]

    def Z(r: int, p: int) -> list[int]:
        if p < 0:
            return []
        return _intersect(F(p), P(p - r))

    maxp = j + 1
    for page in pages:
        r = page.r
        for p in range(0, maxp + 1):
            d0 = _span_dim(Z(r, p)) - _span_dim(Z(r - 1, p - 1)) if r >= 1 else \
                _span_dim(F(p)) - _span_dim(F(p - 1))
            if d0:
                page.dims[(p, -p, n)] = page.dims.get((p, -p, n), 0) + d0
            # C_{-1}: numerator P(p), denominator P(p-1) + Z^{r-1}_{p+r-1}(C_0)
            if r >= 1:
                den = P(p - 1) + Z(r - 1, p + r - 1)
            else:
                den = P(p - 1)
            d1 = _span_dim(P(p)) - _span_dim(den)
            if d1:
                page.dims[(p, -p - 1, n)] = page.dims.get((p, -p - 1, n), 0) + d1


def e_infinity(mod: FpModule, cutoff: int | None = None) -> SSPage:
    return deloop_ss(mod, cutoff)[-1]
