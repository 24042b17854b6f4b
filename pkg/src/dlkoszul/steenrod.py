"""Binomial coefficients mod 2 and Adem normal forms in the Steenrod algebra.

An element of the Steenrod algebra is a ``frozenset`` of admissible tuples:
over F_2 a sum is the symmetric difference of supports.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .seqcomb import is_admissible

SteenrodElement = frozenset  # of admissible tuples


def binom_mod2(n: int, k: int) -> int:
    """Coefficient of ``t^k`` in ``(1+t)^n`` reduced mod 2, for any integer n."""
    if k < 0:
        return 0
    if n >= 0:
        return int(n & k == k)
    # (1+t)^(-m) = sum_k (-1)^k C(m+k-1, k) t^k
    m = -n
    return int((m + k - 1) & k == k)


def adem_terms(a: int, b: int) -> list[tuple[int, ...]]:
    """Right side of the Adem relation for ``Sq^a Sq^b`` with ``0 < a < 2b``."""
    out = []
    for c in range(a // 2 + 1):
        if binom_mod2(b - c - 1, a - 2 * c):
            out.append((a + b - c, c) if c else (a + b - c,))
    return out


def add(*elements: Iterable) -> frozenset:
    acc: set = set()
    for e in elements:
        acc ^= set(e)
    return frozenset(acc)


@lru_cache(maxsize=None)
def _reduce(word: tuple[int, ...]) -> frozenset:
    word = tuple(i for i in word if i)
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if a < 2 * b:
            head, tail = word[:k], word[k + 2:]
            acc: set = set()
            for mid in adem_terms(a, b):
                acc ^= _reduce(head + mid + tail)
            return frozenset(acc)
    return frozenset([word])


def adem_reduce(word: Iterable[int]) -> frozenset:
    """Admissible normal form of ``Sq^{w_1} ... Sq^{w_k}`` (``Sq^0`` factors are dropped)."""
    word = tuple(word)
    if any(i < 0 for i in word):
        raise ValueError(f"negative Steenrod index in {word}")
    return _reduce(word)


def reduce_element(elt: Iterable[tuple[int, ...]]) -> frozenset:
    acc: set = set()
    for w in elt:
        acc ^= adem_reduce(w)
    return frozenset(acc)


def multiply(x: Iterable[tuple[int, ...]], y: Iterable[tuple[int, ...]]) -> frozenset:
    acc: set = set()
    for u in x:
        for v in y:
            acc ^= adem_reduce(u + v)
    return frozenset(acc)


def is_normal(elt) -> bool:
    return all(is_admissible(w) and 0 not in w for w in elt)


def format_element(elt) -> str:
    if not elt:
        return "0"
    terms = sorted(elt, reverse=True)
    return " + ".join(" ".join(f"Sq^{i}" for i in w) if w else "1" for w in terms)
