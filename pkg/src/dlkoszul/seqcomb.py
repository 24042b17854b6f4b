"""Admissible sequences: degree, excess, enumeration, splittings, reindexing.

Sequences are plain tuples of ints. Whether a tuple is read as a Steenrod
monomial ``Sq^I``, an upper-indexed Dyer-Lashof word ``Q^I`` or a lower-indexed
word ``Q_J`` is up to the caller; :class:`Seq` carries that flag when it
matters for display.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

INF = math.inf  # excess of the empty sequence

SQ = "sq"
DL_UPPER = "dl-upper"
DL_LOWER = "dl-lower"


@dataclass(frozen=True)
class Seq:
    entries: tuple[int, ...]
    kind: str = SQ

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        if not self.entries:
            return "1"
        if self.kind == SQ:
            return " ".join(f"Sq^{i}" for i in self.entries)
        if self.kind == DL_UPPER:
            return " ".join(f"Q^{i}" for i in self.entries)
        return "Q_(" + ",".join(str(j) for j in self.entries) + ")"


class Stats(NamedTuple):
    length: int
    degree: int
    excess: float
    admissible: bool


def is_admissible(seq) -> bool:
    return all(seq[k] >= 2 * seq[k + 1] for k in range(len(seq) - 1))


def degree(seq) -> int:
    return sum(seq)


def excess(seq) -> float:
    """Sum of ``i_j - 2 i_{j+1}`` with the last term ``i_s``; +inf for ``()``."""
    if not seq:
        return INF
    return sum(seq[k] - 2 * seq[k + 1] for k in range(len(seq) - 1)) + seq[-1]


def stats(seq) -> Stats:
    seq = tuple(seq)
    e = excess(seq)
    adm = is_admissible(seq)
    if adm and seq:
        alt = seq[0] - sum(seq[1:])
        if alt != e:
            raise AssertionError(f"excess formulas disagree on {seq}")
    return Stats(len(seq), degree(seq), e, adm)


def omega(seq, j: int) -> tuple[int, ...]:
    """Drop the first ``j`` entries."""
    seq = tuple(seq)
    if not 0 <= j <= len(seq):
        raise ValueError(f"j={j} out of range for length {len(seq)}")
    return seq[j:]


def _admissible_of_length(s: int, n: int, lo: int) -> Iterator[tuple[int, ...]]:
    # build right to left: each new entry x satisfies x >= 2 * (entry to its
    # right), and the c entries still to place sum to at least x (2^c - 1)
    if s == 0:
        if n == 0:
            yield ()
        return

    def rec(tail: tuple[int, ...], rem: int, left: int, floor: int):
        if left == 1:
            if rem >= floor:
                yield (rem,) + tail
            return
        top = math.floor(rem / ((1 << left) - 1))
        for x in range(floor, top + 1):
            yield from rec((x,) + tail, rem - x, left - 1, 2 * x)

    yield from rec((), n, s, lo)


def enumerate_admissible(
    n: int,
    length: int | None = None,
    *,
    min_last: int | None = None,
    excess_at_most: int | None = None,
    strictly_positive: bool = False,
) -> list[tuple[int, ...]]:
    """Admissible sequences of degree ``n`` meeting the constraints.

    ``length=None`` means all lengths; that needs entries bounded below, i.e.
    ``strictly_positive``. The empty sequence counts as having excess 0 for
    ``excess_at_most`` (it indexes the generator of a free unstable module).
    Output is lexicographically descending.
    """
    lo = 1 if strictly_positive else min_last
    if strictly_positive and min_last is not None:
        lo = max(1, min_last)
    if length is None:
        if lo is None or lo < 1:
            raise ValueError("all-length enumeration needs strictly positive entries")
        lengths = [s for s in range(n + 1) if (1 << s) - 1 <= n]
    else:
        lengths = [length]
    out = []
    for s in lengths:
        if lo is None:
            raise ValueError("need a lower bound on the last entry")
        for seq in _admissible_of_length(s, n, lo):
            if excess_at_most is not None and seq and excess(seq) > excess_at_most:
                continue
            out.append(seq)
    out.sort(reverse=True)
    return out


def admissible_basis(n: int) -> list[tuple[int, ...]]:
    """Admissible monomial basis of the Steenrod algebra in degree ``n``."""
    if n < 0:
        return []
    return enumerate_admissible(n, strictly_positive=True)


def free_unstable_basis(n: int, deg: int) -> list[tuple[int, ...]]:
    """Admissible ``I`` with ``e(I) <= n`` and ``d(I) = deg``: basis of F(n) in degree n + deg."""
    if n < 0 or deg < 0:
        return []
    return enumerate_admissible(deg, strictly_positive=True, excess_at_most=n)


class GammaSplit(NamedTuple):
    j: int
    prefix: tuple[int, ...]
    suffix: tuple[int, ...]


def gamma_conditions(seq, d: int, j: int) -> bool:
    s = len(seq)
    rest = seq[j:]
    if j < s and not excess(rest) <= d + j:
        return False
    if j > 0 and not seq[j - 1] >= d + degree(rest) + j:
        return False
    return True


def gamma_split(seq, d: int) -> GammaSplit:
    """The unique cut ``I = I' I''`` with ``e(I'') <= d + j`` and ``i_j >= d + d(I'') + j``."""
    seq = tuple(seq)
    if not is_admissible(seq):
        raise ValueError(f"{seq} is not admissible")
    hits = [j for j in range(len(seq) + 1) if gamma_conditions(seq, d, j)]
    if len(hits) != 1:
        raise AssertionError(f"split of {seq} at d={d} not unique: {hits}")
    j = hits[0]
    return GammaSplit(j, seq[:j], seq[j:])


def lower_to_upper(J, d: int) -> tuple[int, ...]:
    """Upper indices of ``Q_J iota_d``, closed form.

    ``alpha_t = j_t + sum_{l>t} 2^(l-t-1) j_l + 2^(s-t) d`` (1-based t).
    """
    J = tuple(J)
    s = len(J)
    out = []
    for t in range(1, s + 1):
        a = J[t - 1] + sum(J[l - 1] << (l - t - 1) for l in range(t + 1, s + 1))
        a += d * (1 << (s - t))
        out.append(a)
    return tuple(out)


def upper_to_lower(alpha, d: int) -> tuple[int, ...]:
    """Inverse of :func:`lower_to_upper`, applying operations innermost first."""
    alpha = tuple(alpha)
    out = []
    deg = d
    for a in reversed(alpha):
        out.append(a - deg)
        deg += a
    return tuple(reversed(out))


def word_degree(J, d: int) -> int:
    """Degree of ``Q_J iota_d``: ``2^s d + sum_k 2^(k-1) j_k``."""
    return (d << len(J)) + sum(j << k for k, j in enumerate(J))


def is_strictly_decreasing(J) -> bool:
    return all(J[k] > J[k + 1] for k in range(len(J) - 1))


def reindex(J, d: int) -> tuple[int, ...]:
    """``alpha(J, d) + 1`` for strictly decreasing ``J`` in N^s."""
    J = tuple(J)
    if any(j < 0 for j in J) or not is_strictly_decreasing(J):
        raise ValueError(f"{J} is not a strictly decreasing sequence of naturals")
    return tuple(a + 1 for a in lower_to_upper(J, d))


def reindex_inverse(I, d: int) -> tuple[int, ...]:
    I = tuple(I)
    if not I or not is_admissible(I) or I[-1] <= d:
        raise ValueError(f"{I} is not admissible with last entry > {d}")
    J = upper_to_lower(tuple(i - 1 for i in I), d)
    if any(j < 0 for j in J) or not is_strictly_decreasing(J):
        raise ValueError(f"{I} is outside the image of reindexing at d={d}")
    return J


def strictly_decreasing_words(s: int, d: int, deg: int) -> list[tuple[int, ...]]:
    """Strictly decreasing ``J`` in N^s with ``Q_J iota_d`` in degree ``deg``."""
    target = deg - (d << s)
    out = []

    def rec(k: int, prefix: tuple[int, ...], rem: int):
        # k = number of entries placed (outermost first); weight of entry k is 2^k
        if k == s:
            if rem == 0:
                out.append(prefix)
            return
        left = s - k
        # the remaining entries j_{k+1} > ... > j_s >= 0 need at least
        # sum_{i<left} i * 2^(s-1-i) of weight, and j_{k+1} >= left - 1
        hi = prefix[-1] - 1 if prefix else rem
        for j in range(left - 1, hi + 1):
            r = rem - (j << k)
            if r < 0:
                break
            rec(k + 1, prefix + (j,), r)

    if s == 0:
        return [()] if target == 0 else []
    if target < 0:
        return []
    rec(0, (), target)
    return out
