"""Linear algebra over F_2.

Vectors are Python ints used as bitsets: bit ``i`` set means basis index ``i``
is in the support. Addition is XOR. Big ints give a compact dense bitset with
fast XOR, which is what the degreewise matrices in this package need.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


def vec(indices: Iterable[int]) -> int:
    """Build a vector from an iterable of basis indices (repeats cancel)."""
    v = 0
    for i in indices:
        v ^= 1 << i
    return v


def support(v: int) -> list[int]:
    """Sorted basis indices of ``v``."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def weight(v: int) -> int:
    return v.bit_count()


def lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


@dataclass(frozen=True)
class F2Matrix:
    """A linear map F_2^ncols -> F_2^nrows stored by columns.

    ``cols[j]`` is the image of the j-th basis vector, as a bitset over
    ``nrows`` indices.
    """

    cols: tuple[int, ...]
    nrows: int

    def __post_init__(self):
        limit = 1 << self.nrows
        for c in self.cols:
            if c < 0 or c >= limit:
                raise ValueError(f"column {c:b} exceeds {self.nrows} rows")

    @property
    def ncols(self) -> int:
        return len(self.cols)

    @classmethod
    def from_columns(cls, cols: Iterable[int], nrows: int) -> "F2Matrix":
        return cls(tuple(cols), nrows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "F2Matrix":
        """From a dense 0/1 row listing, e.g. ``[(1, 1, 0), (0, 1, 1)]``."""
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols = [0] * ncols
        for i, row in enumerate(rows):
            for j, bit in enumerate(row):
                if bit & 1:
                    cols[j] |= 1 << i
        return cls(tuple(cols), len(rows))

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls((0,) * ncols, nrows)

    @property
    def rows(self) -> list[int]:
        out = [0] * self.nrows
        for j, c in enumerate(self.cols):
            for i in support(c):
                out[i] |= 1 << j
        return out

    def apply(self, x: int) -> int:
        y = 0
        for j in support(x):
            y ^= self.cols[j]
        return y

    def compose(self, other: "F2Matrix") -> "F2Matrix":
        """``self @ other``."""
        if other.nrows != self.ncols:
            raise ValueError("shape mismatch")
        return F2Matrix(tuple(self.apply(c) for c in other.cols), self.nrows)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def dense(self) -> list[list[int]]:
        return [[(c >> i) & 1 for c in self.cols] for i in range(self.nrows)]


def rref(vectors: Iterable[int]) -> list[int]:
    """Fully reduced echelon basis of the span, sorted by pivot (lowest bit)."""
    return Echelon(vectors).basis()


class Echelon:
    """Incrementally maintained reduced echelon basis of a subspace."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.piv: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self.piv)

    def reduce(self, v: int) -> int:
        # basis is fully reduced, so one pass over pivots present in v suffices
        for p, w in self.piv.items():
            if (v >> p) & 1:
                v ^= w
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = lowbit(v)
        for q, w in self.piv.items():
            if (w >> p) & 1:
                self.piv[q] = w ^ v
        self.piv[p] = v
        return True

    def basis(self) -> list[int]:
        return [self.piv[p] for p in sorted(self.piv)]

    def coordinates(self, v: int) -> int:
        """Coordinates of ``v`` in ``basis()``; raises if ``v`` is not in the span."""
        order = {p: k for k, p in enumerate(sorted(self.piv))}
        out = 0
        rest = v
        for p, w in self.piv.items():
            if (v >> p) & 1:
                out |= 1 << order[p]
                rest ^= w
        if rest:
            raise ValueError("vector not in subspace")
        return out


@dataclass(frozen=True)
class Reduction:
    rank: int
    pivots: tuple[int, ...]
    kernel: tuple[int, ...]
    image: tuple[int, ...]


def reduce(m: F2Matrix) -> Reduction:
    """Rank, pivot columns, echelonized kernel and image bases of ``m``.

    Pivot columns are the domain indices whose columns are independent of the
    earlier ones; the kernel basis is reduced so it does not depend on the
    elimination order.
    """
    piv: dict[int, tuple[int, int]] = {}  # row pivot -> (reduced column, history)
    pivots = []
    kernel = []
    for j, c in enumerate(m.cols):
        hist = 1 << j
        while c:
            p = lowbit(c)
            if p not in piv:
                break
            w, h = piv[p]
            c ^= w
            hist ^= h
        if c:
            piv[lowbit(c)] = (c, hist)
            pivots.append(j)
        else:
            kernel.append(hist)
    image = rref(w for w, _ in piv.values())
    return Reduction(len(piv), tuple(pivots), tuple(rref(kernel)), tuple(image))


def rank(m: F2Matrix) -> int:
    return len(rref(m.cols))


def kernel(m: F2Matrix) -> list[int]:
    return list(reduce(m).kernel)


@dataclass
class ChainComplexF2:
    """Degreewise finite chain complex; ``diffs[i]`` maps term i to term i-1."""

    dims: dict[int, int]
    diffs: dict[int, F2Matrix] = field(default_factory=dict)
    labels: dict[int, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        for i, d in self.diffs.items():
            if d.ncols != self.dim(i) or d.nrows != self.dim(i - 1):
                raise ValueError(
                    f"d_{i} has shape {d.nrows}x{d.ncols}, expected "
                    f"{self.dim(i - 1)}x{self.dim(i)}"
                )

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def diff(self, i: int) -> F2Matrix:
        d = self.diffs.get(i)
        if d is None:
            return F2Matrix.zero(self.dim(i - 1), self.dim(i))
        return d

    def check_square_zero(self) -> None:
        for i in sorted(self.diffs):
            if i - 1 in self.diffs:
                if not self.diff(i - 1).compose(self.diff(i)).is_zero():
                    raise NotAComplexError(i)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (i % 2) * n for i, n in self.dims.items())


class NotAComplexError(ValueError):
    def __init__(self, index: int):
        super().__init__(f"d_{index - 1} o d_{index} is nonzero")
        self.index = index


@dataclass(frozen=True)
class Homology:
    dimension: int
    representatives: tuple[int, ...]


def homology(c: ChainComplexF2, i: int) -> Homology:
    """H_i with cycle representatives independent modulo boundaries."""
    d_in = c.diff(i + 1)
    d_out = c.diff(i)
    if not c.diff(i).compose(d_in).is_zero():
        raise NotAComplexError(i + 1)
    cycles = reduce(d_out).kernel
    bounds = Echelon(d_in.cols)
    reps = []
    for z in cycles:
        if bounds.add(z):
            reps.append(z)
    return Homology(len(reps), tuple(reps))


def homology_dims(c: ChainComplexF2) -> dict[int, int]:
    idx = set(c.dims)
    return {i: homology(c, i).dimension for i in sorted(idx) if c.dim(i)}
