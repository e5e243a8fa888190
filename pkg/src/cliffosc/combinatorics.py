"""Multi-indices and the permutation-sum Clifford constants.

For a multi-index ``m`` let ``e'_m`` be the sum of the blade products
``e_{l1} ... e_{l|m|}`` over the distinguishable orderings of the multiset
holding ``m_i`` copies of ``i``.  Summing over all ``|m|!`` orderings instead
(identical letters counted separately) gives ``e_m = m! e'_m``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .clifford import MAX_DIM, Multivector, blade_sign
from .errors import BudgetError, DimensionError

MAX_ORDER = 64
ENUM_BUDGET = 12


class MultiIndex(tuple):
    """Tuple of nonnegative integers ``(k_1, ..., k_n)``."""

    def __new__(cls, parts):
        parts = tuple(int(p) for p in parts)
        if not 1 <= len(parts) <= MAX_DIM:
            raise DimensionError(f"multi-index length must be in 1..{MAX_DIM}")
        if any(p < 0 for p in parts):
            raise ValueError(f"negative component in {parts}")
        if sum(parts) > MAX_ORDER:
            raise BudgetError(f"total degree {sum(parts)} exceeds {MAX_ORDER}")
        return super().__new__(cls, parts)

    @classmethod
    def unit(cls, n: int, i: int) -> "MultiIndex":
        """The index eps_i (1-based)."""
        return cls(1 if t == i - 1 else 0 for t in range(n))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        return sum(self)

    @property
    def factorial(self) -> int:
        return math.prod(math.factorial(p) for p in self)

    def minus(self, i: int):
        """``k - eps_i`` or ``None`` when ``k_i = 0``."""
        if self[i - 1] == 0:
            return None
        return MultiIndex(p - (t == i - 1) for t, p in enumerate(self))

    def plus(self, i: int) -> "MultiIndex":
        return MultiIndex(p + (t == i - 1) for t, p in enumerate(self))

    def __add__(self, other):
        if len(other) != len(self):
            raise DimensionError("multi-indices of different length")
        return MultiIndex(a + b for a, b in zip(self, other))

    def letters(self) -> tuple:
        """Multiset ``(1,..,1, 2,..)`` with ``k_i`` copies of ``i``."""
        return tuple(i + 1 for i, p in enumerate(self) for _ in range(p))

    def __repr__(self):
        return f"MultiIndex{tuple(self)!r}"


def multi_indices(n: int, k: int):
    """All multi-indices of length ``n`` and order ``k``, lexicographically descending."""
    if n == 1:
        yield MultiIndex((k,))
        return
    for first in range(k, -1, -1):
        for rest in multi_indices(n - 1, k - first):
            yield MultiIndex((first, *rest))


def count_indices(n: int, k: int) -> int:
    return math.comb(n + k - 1, k)


class IndexSet:
    """Graded-lex enumeration of all multi-indices with order at most ``K``.

    ``exps`` is an ``(L, n)`` integer array, ``degree`` the orders, and
    ``parent[i]`` the position of ``m - eps_{i+1}`` (``-1`` when absent).
    """

    def __init__(self, n: int, K: int):
        if K > MAX_ORDER:
            raise BudgetError(f"degree {K} exceeds {MAX_ORDER}")
        self.n = n
        self.K = K
        self.indices = [m for k in range(K + 1) for m in multi_indices(n, k)]
        self.position = {m: p for p, m in enumerate(self.indices)}
        self.exps = np.array(self.indices, dtype=np.int64).reshape(len(self.indices), n)
        self.degree = self.exps.sum(axis=1)
        self.offsets = np.searchsorted(self.degree, np.arange(K + 2))
        parent = np.full((n, len(self.indices)), -1, dtype=np.intp)
        for p, m in enumerate(self.indices):
            for i in range(n):
                if m[i]:
                    parent[i, p] = self.position[m.minus(i + 1)]
        self.parent = parent

    def __len__(self):
        return len(self.indices)

    def degree_slice(self, k: int) -> slice:
        return slice(self.offsets[k], self.offsets[k + 1])


@lru_cache(maxsize=64)
def index_set(n: int, K: int) -> IndexSet:
    return IndexSet(n, K)


def c_binom(n: int, m) -> Fraction:
    """``(n + |m| - 1)! / ((n - 1)! m!)`` exactly."""
    m = MultiIndex(m)
    if m.n != n:
        raise DimensionError(f"multi-index length {m.n} differs from n = {n}")
    return Fraction(math.factorial(n + m.order - 1), math.factorial(n - 1) * m.factorial)


def _blade_array(n: int, terms: dict) -> Multivector:
    c = np.zeros(1 << n, dtype=object)
    c[:] = 0
    for b, v in terms.items():
        c[b] = v
    return Multivector(c)


def enumerate_perm_sum(m, distinguishable: bool = True) -> Multivector:
    """Sum of blade products over orderings of the letters of ``m`` by explicit enumeration.

    With ``distinguishable=False`` every one of the ``|m|!`` orderings is
    visited, identical letters counted separately.
    """
    m = MultiIndex(m)
    letters = m.letters()
    acc: dict[int, int] = {}
    orders = _multiset_orderings(letters) if distinguishable else itertools.permutations(letters)
    for word in orders:
        blade, sign = 0, 1
        for letter in word:
            bit = 1 << (letter - 1)
            sign *= blade_sign(blade, bit)
            blade ^= bit
        acc[blade] = acc.get(blade, 0) + sign
    return _blade_array(m.n, acc)


def _multiset_orderings(letters):
    """Distinct orderings of a sorted tuple in lexicographic order."""
    word = sorted(letters)
    size = len(word)
    while True:
        yield tuple(word)
        i = size - 2
        while i >= 0 and word[i] >= word[i + 1]:
            i -= 1
        if i < 0:
            return
        j = size - 1
        while word[j] <= word[i]:
            j -= 1
        word[i], word[j] = word[j], word[i]
        word[i + 1 :] = reversed(word[i + 1 :])


@lru_cache(maxsize=None)
def _perm_sum_enum(m: MultiIndex) -> Multivector:
    return enumerate_perm_sum(m)


@lru_cache(maxsize=None)
def _perm_sum_rec(m: MultiIndex) -> Multivector:
    # Split on the first letter: e'_m = sum_i e_i e'_{m - eps_i}.
    n = m.n
    if m.order == 0:
        return Multivector.scalar(n, 1)
    out = Multivector.zero(n, exact=True)
    for i in range(1, n + 1):
        rest = m.minus(i)
        if rest is not None:
            out = out + Multivector.blade(n, (i,)) * _perm_sum_rec(rest)
    return out


def perm_sum_e(m, ordered: bool = False, method: str = "enumerate") -> Multivector:
    """The constant ``e'_m`` (or ``e_m = m! e'_m`` when ``ordered``), exact and memoized.

    ``method="enumerate"`` walks the multiset permutations and is limited to
    ``|m| <= 12``.  ``method="recursive"`` uses the first-letter recursion and
    works up to the global degree cap.
    """
    m = MultiIndex(m)
    if method == "enumerate":
        if m.order > ENUM_BUDGET:
            raise BudgetError(f"|m| = {m.order} exceeds the enumeration budget {ENUM_BUDGET}")
        val = _perm_sum_enum(m)
    elif method == "recursive":
        val = _perm_sum_rec(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return val * m.factorial if ordered else val


@lru_cache(maxsize=32)
def perm_sum_table(n: int, K: int) -> np.ndarray:
    """Integer array ``(L, 2**n)`` of ``e'_m`` over :func:`index_set` order.

    Built degree by degree from ``e'_m = sum_i e_i e'_{m - eps_i}``.
    """
    from .clifford import blade_tables

    iset = index_set(n, K)
    idx, sgn = blade_tables(n)
    table = np.zeros((len(iset), 1 << n), dtype=object)
    table[:] = 0
    table[0, 0] = 1
    for p in range(1, len(iset)):
        for i in range(n):
            q = iset.parent[i, p]
            if q < 0:
                continue
            # e_i * y: blade k receives sgn[k, bit] * y[idx[k, bit]]
            bit = 1 << i
            table[p] += sgn[:, bit] * table[q, idx[:, bit]]
    table.flags.writeable = False
    return table


def c_k_constant(n: int, k: int) -> Multivector:
    """``(-n)^q`` for ``k = 2q`` and ``(-n)^q (e_1 + ... + e_n)`` for ``k = 2q + 1``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    q, odd = divmod(k, 2)
    scale = (-n) ** q
    if not odd:
        return Multivector.scalar(n, scale)
    return _blade_array(n, {1 << i: scale for i in range(n)})
