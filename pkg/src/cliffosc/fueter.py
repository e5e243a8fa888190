"""Fueter polynomials ``P_k(x)`` built from ``z_i = x_i - x_0 e_i``.

``P_0 = 1``, ``P_k = 0`` when some ``k_i < 0``, and for ``|k| >= 1``

    |k| P_k(x) = sum_i k_i P_{k - eps_i}(x) z_i.

Each ``P_k`` is a paravector, ``d/dx_j P_k = k_j P_{k - eps_j}`` and
``P_k(x_1 e_1 + ... + x_n e_n) = x_1^{k_1} ... x_n^{k_n}``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .clifford import as_points, call_map, gp, wrap
from .combinatorics import MultiIndex, index_set
from .errors import BudgetError, DimensionError
from .numdiff import derivative

MAX_FUETER_DEGREE = 40
DIRECT_BUDGET = 7


def _prepare(k, x):
    k = MultiIndex(k)
    pts, was_para = as_points(x)
    if pts.shape[-1] != k.n + 1:
        raise DimensionError(f"point of dimension {pts.shape[-1]} for a length-{k.n} multi-index")
    return k, pts, was_para


def fueter_variables(points) -> np.ndarray:
    """Blade arrays of ``z_1 .. z_n`` stacked on a leading axis."""
    points = np.asarray(points)
    n = points.shape[-1] - 1
    out = np.zeros((n,) + points.shape[:-1] + (1 << n,), dtype=points.dtype)
    if out.dtype == object:
        out[...] = 0
    for i in range(n):
        out[i, ..., 0] = points[..., i + 1]
        out[i, ..., 1 << i] = -points[..., 0]
    return out


def _inv(d, dtype):
    return Fraction(1, d) if dtype == object else 1.0 / d


def fueter_eval(k, x, order: str = "right"):
    """``P_k(x)`` by the memoized recursion with full Clifford products.

    ``order="left"`` uses ``|k| P_k = sum_i k_i z_i P_{k - eps_i}`` instead.
    Accepts a Paravector (returns a Multivector) or points ``(..., n+1)``.
    """
    k, pts, was_para = _prepare(k, x)
    if k.order > MAX_FUETER_DEGREE:
        raise BudgetError(f"|k| = {k.order} exceeds {MAX_FUETER_DEGREE}")
    if order not in ("right", "left"):
        raise ValueError(f"unknown order {order!r}")
    n = k.n
    z = fueter_variables(pts)
    one = np.zeros(pts.shape[:-1] + (1 << n,), dtype=pts.dtype)
    if one.dtype == object:
        one[...] = 0
    one[..., 0] = 1
    memo = {MultiIndex.zero(n): one}
    box = sorted(itertools.product(*(range(p + 1) for p in k)), key=sum)
    for j in box[1:]:
        j = MultiIndex(j)
        acc = 0
        for i in range(1, n + 1):
            prev = j.minus(i)
            if prev is None:
                continue
            term = gp(memo[prev], z[i - 1]) if order == "right" else gp(z[i - 1], memo[prev])
            acc = acc + j[i - 1] * term
        memo[j] = acc * _inv(j.order, pts.dtype)
    return wrap(memo[k], was_para)


def fueter_eval_direct(k, x):
    """``P_k(x) = (1/|k|!) sum over all |k|! orderings of z_{l1} ... z_{l|k|}``.

    Orderings that differ only by swapping equal letters give equal products,
    so each distinct ordering is visited once and weighted by ``k!``.
    Limited to ``|k| <= 7``.
    """
    if any(int(p) < 0 for p in k):
        pts, was_para = as_points(x)
        zero = np.zeros(pts.shape[:-1] + (1 << (pts.shape[-1] - 1),), dtype=pts.dtype)
        return wrap(zero, was_para)
    k, pts, was_para = _prepare(k, x)
    if k.order > DIRECT_BUDGET:
        raise BudgetError(f"|k| = {k.order} exceeds the direct-sum budget {DIRECT_BUDGET}")
    z = fueter_variables(pts)
    n = k.n
    total = np.zeros(pts.shape[:-1] + (1 << n,), dtype=pts.dtype)
    if total.dtype == object:
        total[...] = 0
    total[..., 0] = 1
    if k.order:
        total = total * 0

        def walk(prefix, remaining):
            nonlocal total
            if not any(remaining):
                total = total + prefix
                return
            for i, left in enumerate(remaining):
                if left:
                    rem = list(remaining)
                    rem[i] -= 1
                    walk(gp(prefix, z[i]), rem)

        start = np.zeros_like(total)
        start[..., 0] = 1
        walk(start, list(k))
        weight = Fraction(k.factorial, math.factorial(k.order))
        total = total * (weight if total.dtype == object else float(weight))
    return wrap(total, was_para)


def fueter_partial(k, j: int, x):
    """``d/dx_j P_k(x) = k_j P_{k - eps_j}(x)``."""
    k = MultiIndex(k)
    if not 1 <= j <= k.n:
        raise DimensionError(f"derivative index {j} outside 1..{k.n}")
    prev = k.minus(j)
    if prev is None:
        pts, was_para = as_points(x)
        zero = np.zeros(pts.shape[:-1] + (1 << k.n,), dtype=pts.dtype)
        return wrap(zero, was_para)
    pts, was_para = as_points(x)
    return wrap(k[j - 1] * fueter_eval(prev, pts), was_para)


def fueter_table(points, K: int) -> np.ndarray:
    """All ``P_m(x)`` with ``|m| <= K`` as paravector components.

    Returns shape ``(L, ..., n+1)`` in :func:`index_set` order.  The products
    ``P z_i`` are reduced to their paravector part, which is exact because the
    bivector parts cancel in the symmetrised sum.
    """
    pts = np.asarray(points)
    if pts.dtype.kind in "iub":
        pts = pts.astype(float)
    n = pts.shape[-1] - 1
    if K > MAX_FUETER_DEGREE:
        raise BudgetError(f"K = {K} exceeds {MAX_FUETER_DEGREE}")
    iset = index_set(n, K)
    P = np.zeros((len(iset),) + pts.shape, dtype=pts.dtype)
    if P.dtype == object:
        P[...] = 0
    P[0, ..., 0] = 1
    x0 = pts[..., 0]
    pad = (1,) * pts.ndim
    for d in range(1, K + 1):
        sl = iset.degree_slice(d)
        acc = np.zeros((sl.stop - sl.start,) + pts.shape, dtype=pts.dtype)
        if acc.dtype == object:
            acc[...] = 0
        for i in range(n):
            par = iset.parent[i, sl]
            rows = np.nonzero(par >= 0)[0]
            Q = P[par[rows]]
            prod = Q * pts[..., i + 1][..., None]
            prod[..., 0] = prod[..., 0] + x0 * Q[..., i + 1]
            prod[..., i + 1] = prod[..., i + 1] - x0 * Q[..., 0]
            w = iset.exps[sl][rows, i].reshape((-1,) + pad)
            acc[rows] = acc[rows] + w * prod
        P[sl] = acc * _inv(d, pts.dtype)
    return P


def monogenic_residual(f, x, h: float = 1e-2) -> float:
    """``|D f(x)|`` with ``D = d/dx_0 + sum_i e_i d/dx_i`` by central differences."""
    pts, _ = as_points(x)
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[-1] - 1

    def values(p):
        return np.asarray(call_map(f, p), dtype=float)

    total = derivative(values, pts, np.eye(n + 1)[0], h)
    for i in range(1, n + 1):
        di = derivative(values, pts, np.eye(n + 1)[i], h)
        ei = np.zeros(1 << n)
        ei[1 << (i - 1)] = 1.0
        total = total + gp(ei, di)
    return float(np.sqrt(np.sum(total * total)))

