"""``H_0 r`` in the cases where it is known in closed form.

Three families are built:

* ``M`` unstable: ``H_0 r M = R M`` with its canonical free DL action;
* ``M = Sigma^n A^*``: concentrated in length 0, equal to ``Sigma^{-1} F(n+1)^*``
  with trivial action;
* ``M = Sigma^{-1} N`` with ``N`` unstable: only the lengths ``<= 1`` layers,
  as a (sub, quotient) pair, together with ``(L_1 q)<1>``.

No Singer chain complex is ever formed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .dyerlashof import QModule, q0_analysis, singer_free, triv
from .fpmodule import FpModule, build_F_dual, validate
from .gf2 import F2Matrix, reduce
from .koszul import build_koszul, koszul_homology
from .loops import NotUnstableError, loops

UNSTABLE = "unstable"
DUAL_STEENROD = "dual-steenrod"
DESUSP1 = "desusp1"


@dataclass
class H0R:
    """A computed ``H_0 r M`` together with how it was obtained.

    ``c`` is the connectivity of ``M`` (``M_k = 0`` for ``k <= c``); it is
    ``None`` for the zero module.
    """
    module: QModule
    provenance: str
    c: int | None
    source: str = ""

    def dims(self) -> dict[tuple[int, int], int]:
        """``(length, degree) -> dim``."""
        return self.module.bigraded_dims()


def connectivity(m: FpModule) -> int | None:
    degs = m.degrees()
    return degs[0] - 1 if degs else None


def require_unstable(m: FpModule):
    if not m.unstable or not validate(m):
        raise NotUnstableError(f"{m.name} is not a valid unstable module")


def h0r_unstable(m: FpModule, max_length: int, cutoff: int | None = None) -> H0R:
    require_unstable(m)
    R = singer_free(m, max_length, cutoff, name=f"H0r({m.name})")
    return H0R(R, UNSTABLE, connectivity(m), m.name)


def h0r_dual_steenrod(n: int, cutoff: int) -> H0R:
    """``H_0 r Sigma^n A^* = Sigma^{-1} F(n+1)^*`` in length 0."""
    F = build_F_dual(n + 1, cutoff + 1).shift(-1, f"S^-1F({n + 1})*")
    N = triv(F)
    N.name = f"H0r(S^{n}A*)"
    return H0R(N, DUAL_STEENROD, n - 1, f"S^{n}A*")


# -- connectivity ----------------------------------------------------------------

@dataclass
class Certificate:
    bounds: dict[int, int]            # length -> vanishes in degrees <= bound
    lowest: dict[int, int]            # length -> lowest nonzero degree
    violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def length_bound(i: int, c: int) -> int:
    """``(H_0 r M)<i>`` vanishes in degrees ``<= 2^i (c + 1) - 1``."""
    return (1 << i) * (c + 1) - 1


def connectivity_certificate(h: H0R) -> Certificate:
    lowest: dict[int, int] = {}
    for (l, n) in h.dims():
        lowest[l] = min(lowest.get(l, n), n)
    if h.c is None:
        return Certificate({}, lowest, [(l, n) for l, n in lowest.items()])
    bounds = {l: length_bound(l, h.c) for l in lowest}
    bad = [(l, lowest[l]) for l in sorted(lowest) if lowest[l] <= bounds[l]]
    return Certificate(bounds, lowest, bad)


# -- the single desuspension of an unstable module ---------------------------------

@dataclass
class Desusp1:
    """``tau_{<=1} H_0 r Sigma^{-1} N`` as layers, plus ``(L_1 q H_0 r Sigma^{-1} N)<1>``.

    All tables are ``degree -> dim`` in the degrees of ``Sigma^{-1} N``.
    """
    length0: dict[int, int]          # Sigma^{-1} N
    sub1: dict[int, int]             # Sigma^{-1} Omega_1 N
    quotient1: dict[int, int]        # Sigma^{-1} R_1 N
    lderq1: dict[int, int]           # ker(Phi Sigma^{-1} N -> Sigma^{-1} Omega_1 N)
    phi: dict[int, int]              # Phi Sigma^{-1} N
    reliable_to: int                 # last degree not affected by the cutoff

    @property
    def length1(self) -> dict[int, int]:
        keys = set(self.sub1) | set(self.quotient1)
        return {k: self.sub1.get(k, 0) + self.quotient1.get(k, 0) for k in sorted(keys)}


def _nonzero(d: dict[int, int]) -> dict[int, int]:
    return {k: v for k, v in sorted(d.items()) if v}


def desusp1_analysis(N: FpModule) -> Desusp1:
    require_unstable(N)
    lp = loops(N)
    D = N.cutoff
    # Phi N -> Sigma Omega_1 N is the projection to coker Sq_0; its kernel is im Sq_0
    proj = lp.sigma_omega1.embedding
    kern = {}
    for n in lp.phi.degrees():
        cols = tuple(proj.project(n, 1 << i) for i in range(lp.phi.dim(n)))
        kern[n - 2] = len(reduce(F2Matrix(cols, lp.sigma_omega1.dim(n))).kernel)
    R1 = singer_free(N, 1, D)
    quot = {n - 1: R1.dim_at(n, 1) for n in R1.degrees()}
    return Desusp1(
        length0=_nonzero({n - 1: N.dim(n) for n in N.degrees()}),
        sub1=_nonzero({n - 2: lp.sigma_omega1.dim(n) for n in lp.sigma_omega1.degrees()}),
        quotient1=_nonzero(quot),
        lderq1=_nonzero(kern),
        phi=_nonzero({n - 2: lp.phi.dim(n) for n in lp.phi.degrees()}),
        reliable_to=D - 2,
    )


def lderq1_of_free_quotient(N: FpModule) -> dict[int, int]:
    """``(L_1 q Sigma^{-1} R N)<1>`` by the Koszul complex, ``degree -> dim``.

    It should be ``Phi Sigma^{-1} N`` (the kernel of ``R_1 Sigma^{-1} N ->
    Sigma^{-1} R_1 N``).
    """
    require_unstable(N)
    Q = singer_free(N, 1, N.cutoff).desuspend()
    degs = range(min(Q.degrees(), default=0), Q.cutoff + 1)
    h = koszul_homology(build_koszul(Q, 1, degs))
    return {k: v for (t, k), v in sorted(h.items()) if t == 1}


# -- suspension identities ---------------------------------------------------------

def susp_identity(h: H0R, h_susp: H0R) -> list[tuple[int, int]]:
    """Cells ``(length, degree)`` where

        dim Sigma-bar H0r M + dim Sigma-bar_1 H0r(Sigma M)(-1) = dim H0r(Sigma M)

    fails. ``Sigma-bar = Sigma coker Q_0`` and ``Sigma-bar_1 = Sigma ker Q_0``.
    Only degrees inside both windows are compared.
    """
    a = q0_analysis(h.module)
    b = q0_analysis(h_susp.module)
    top = min(h.module.cutoff + 1, h_susp.module.cutoff)
    target = h_susp.module.bigraded_dims()
    lhs: dict[tuple[int, int], int] = {}
    for (l, n), v in a.qsusp.bigraded_dims().items():
        lhs[(l, n + 1)] = lhs.get((l, n + 1), 0) + v
    for (l, n), v in b.qsusp1.bigraded_dims().items():
        lhs[(l - 1, n + 1)] = lhs.get((l - 1, n + 1), 0) + v
    L = h_susp.module.max_length
    bad = []
    for key in sorted(set(lhs) | set(target)):
        l, n = key
        if n > top or (L is not None and l >= L):
            continue
        if lhs.get(key, 0) != target.get(key, 0):
            bad.append(key)
    return bad


def imq_trivial_check(n: int, cutoff: int) -> list[int]:
    """Degrees where ``Omega F(n+1)^*`` and ``F(n)^*`` differ.

    This is ``Omega(Sigma H0r M) = Sigma H0r(Sigma^{-1} M)`` for ``M = Sigma^n A^*``,
    where ``im Q = 0`` and ``Q_0`` vanishes one level down.
    """
    om = loops(build_F_dual(n + 1, cutoff + 1)).omega
    ref = build_F_dual(n, cutoff)
    return [k for k in range(min(n, 0), cutoff + 1) if om.dim(k) != ref.dim(k)]
