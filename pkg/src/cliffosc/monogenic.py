"""Monogenic series in the Fueter basis and the Cauchy-Kowalewski machinery.

A :class:`FueterSeries` stores coefficients ``a_m`` for ``|m| <= K`` and
represents ``sum P_m(x) a_m``.  Its restriction to ``x_0 = 0`` is the
monomial series ``sum x^m a_m``, so the CK product of two series is the
convolution of their coefficient arrays.

:class:`CliffordPolynomial` is an independent symbolic representation used
to run the CK extension formula term by term.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .clifford import Multivector, as_points, blade_tables, dim_of, gp, wrap
from .combinatorics import MultiIndex, index_set, perm_sum_table
from .errors import BudgetError, DimensionError, DomainError
from .fueter import fueter_table

MAX_CK_DEGREE = 20
MAX_EXP_DEGREE = 40


def _zero(size, exact):
    z = np.zeros(size, dtype=object if exact else float)
    if exact:
        z[...] = 0
    return z


def _blade_vec(n, i, exact=True):
    v = _zero(1 << n, exact)
    v[1 << (i - 1)] = 1
    return v


def _coeff_array(value, n):
    if isinstance(value, Multivector):
        if value.dim != n:
            raise DimensionError(f"R_{value.dim} coefficient in an R_{n} object")
        return value.coeffs
    arr = np.asarray(value)
    if arr.ndim == 0:
        out = _zero(1 << n, arr.dtype == object or isinstance(value, (int, Fraction)))
        out[0] = value
        return out
    return arr


class CliffordPolynomial:
    """Polynomial in ``x_0, x_1, .., x_n`` with Clifford coefficients on the right.

    ``terms`` maps exponent tuples ``(m_0, m_1, .., m_n)`` to blade arrays.
    """

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n + 1:
                raise DimensionError(f"exponent tuple {exps} for n = {n}")
            arr = _coeff_array(c, n)
            if any(v != 0 for v in arr):
                self.terms[exps] = arr

    # constructors
    @classmethod
    def constant(cls, n, value=1):
        return cls(n, {(0,) * (n + 1): value})

    @classmethod
    def variable(cls, n, i):
        """The coordinate ``x_i`` (``i = 0`` for the real part)."""
        e = [0] * (n + 1)
        e[i] = 1
        return cls(n, {tuple(e): 1})

    @classmethod
    def fueter_variable(cls, n, i):
        """``z_i = x_i - x_0 e_i``."""
        e0 = [0] * (n + 1)
        e0[0] = 1
        ei = [0] * (n + 1)
        ei[i] = 1
        return cls(n, {tuple(ei): 1, tuple(e0): -_blade_vec(n, i)})

    @classmethod
    def monomial(cls, m, coeff=1):
        """``x^m coeff`` in the variables ``x_1 .. x_n``."""
        m = MultiIndex(m)
        return cls(m.n, {(0, *m): coeff})

    # structure
    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        return self.n == other.n and (self - other).is_zero()

    __hash__ = None

    def allclose(self, other, atol=1e-12) -> bool:
        diff = self - other
        return all(max(abs(float(v)) for v in c) <= atol for c in diff.terms.values())

    def __repr__(self):
        return f"CliffordPolynomial(n={self.n}, {len(self.terms)} terms, degree {self.degree})"

    # arithmetic
    def _combine(self, other, sign):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + sign * c if e in out else sign * c
        return CliffordPolynomial(self.n, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return CliffordPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def scale(self, s) -> "CliffordPolynomial":
        return CliffordPolynomial(self.n, {e: c * s for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordPolynomial):
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    prod = gp(c1, c2)
                    out[e] = out[e] + prod if e in out else prod
            return CliffordPolynomial(self.n, out)
        if isinstance(other, Multivector):
            return CliffordPolynomial(self.n, {e: gp(c, other.coeffs) for e, c in self.terms.items()})
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return CliffordPolynomial(self.n, {e: gp(other.coeffs, c) for e, c in self.terms.items()})
        return self.scale(other)

    # calculus
    def derivative(self, i: int) -> "CliffordPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return CliffordPolynomial(self.n, out)

    def laplacian(self) -> "CliffordPolynomial":
        """Laplacian in ``x_1 .. x_n``."""
        out = CliffordPolynomial(self.n)
        for i in range(1, self.n + 1):
            out = out + self.derivative(i).derivative(i)
        return out

    def _vector_derivative(self, sign):
        out = self.derivative(0)
        for i in range(1, self.n + 1):
            di = self.derivative(i)
            ei = Multivector(_blade_vec(self.n, i))
            out = out + (ei * di).scale(sign)
        return out

    def dirac(self) -> "CliffordPolynomial":
        """``D f = d_0 f + sum e_i d_i f``."""
        return self._vector_derivative(1)

    def dbar(self) -> "CliffordPolynomial":
        """``Dbar f = d_0 f - sum e_i d_i f``."""
        return self._vector_derivative(-1)

    def restrict(self) -> "CliffordPolynomial":
        """Restriction to the hyperplane ``x_0 = 0``."""
        return CliffordPolynomial(self.n, {e: c for e, c in self.terms.items() if e[0] == 0})

    def evaluate(self, x):
        pts, was_para = as_points(x)
        if pts.shape[-1] != self.n + 1:
            raise DimensionError(f"R^{pts.shape[-1]} point for n = {self.n}")
        exact = pts.dtype == object
        out = _zero(pts.shape[:-1] + (1 << self.n,), exact)
        for e, c in sorted(self.terms.items()):
            mono = 1
            for i, p in enumerate(e):
                if p:
                    mono = mono * pts[..., i] ** p
            out = out + np.asarray(mono)[..., None] * c
        return wrap(out, was_para)


@lru_cache(maxsize=None)
def _fueter_polynomial(m: MultiIndex) -> CliffordPolynomial:
    n = m.n
    if m.order == 0:
        return CliffordPolynomial.constant(n, 1)
    acc = CliffordPolynomial(n)
    for i in range(1, n + 1):
        prev = m.minus(i)
        if prev is not None:
            acc = acc + (_fueter_polynomial(prev) * CliffordPolynomial.fueter_variable(n, i)).scale(m[i - 1])
    return acc.scale(Fraction(1, m.order))


def fueter_polynomial(m) -> CliffordPolynomial:
    """Symbolic ``P_m`` with exact rational coefficients."""
    return _fueter_polynomial(MultiIndex(m))


def ck_extend(p: CliffordPolynomial) -> CliffordPolynomial:
    """Left monogenic extension ``sum_k (-1)^k Dbar[x_0^{2k+1}/(2k+1)! Lap^k p]``."""
    if any(e[0] for e in p.terms):
        raise DomainError("CK data must not depend on x_0")
    if p.degree > MAX_CK_DEGREE:
        raise BudgetError(f"degree {p.degree} exceeds {MAX_CK_DEGREE}")
    n = p.n
    out = CliffordPolynomial(n)
    lap = p
    k = 0
    while not lap.is_zero():
        lift = {(e[0] + 2 * k + 1, *e[1:]): c for e, c in lap.terms.items()}
        weight = Fraction((-1) ** k, math.factorial(2 * k + 1))
        out = out + CliffordPolynomial(n, lift).scale(weight).dbar()
        lap = lap.laplacian()
        k += 1
    return out


class FueterSeries:
    """Truncated series ``sum_{|m| <= K} P_m(x) a_m``.

    ``coeffs`` is an ``(L, 2**n)`` array in the graded-lex order of
    :func:`~cliffosc.combinatorics.index_set`.
    """

    def __init__(self, n: int, K: int, coeffs=None):
        self.n = n
        self.K = K
        self.iset = index_set(n, K)
        if coeffs is None:
            coeffs = np.zeros((len(self.iset), 1 << n))
        elif isinstance(coeffs, dict):
            exact = any(
                (isinstance(v, Multivector) and v.exact) or isinstance(v, (int, Fraction)) for v in coeffs.values()
            )
            arr = _zero((len(self.iset), 1 << n), exact)
            for m, v in coeffs.items():
                m = MultiIndex(m)
                if m.order > K:
                    raise BudgetError(f"index {m} above truncation degree {K}")
                arr[self.iset.position[m]] = _coeff_array(v, n)
            coeffs = arr
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (len(self.iset), 1 << n):
            raise DimensionError(f"coefficient array of shape {coeffs.shape}, expected {(len(self.iset), 1 << n)}")
        if coeffs.dtype.kind in "iub":
            coeffs = coeffs.astype(object)
        coeffs.flags.writeable = False
        self.coeffs = coeffs

    @property
    def trunc_degree(self) -> int:
        return self.K

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def coefficient(self, m) -> Multivector:
        return Multivector(self.coeffs[self.iset.position[MultiIndex(m)]])

    def items(self):
        for m, c in zip(self.iset.indices, self.coeffs):
            yield m, Multivector(c)

    def to_float(self) -> "FueterSeries":
        return FueterSeries(self.n, self.K, self.coeffs.astype(float))

    def truncate(self, K: int) -> "FueterSeries":
        K = min(K, self.K)
        return FueterSeries(self.n, K, self.coeffs[: len(index_set(self.n, K))])

    def extend(self, K: int) -> "FueterSeries":
        """Zero-pad to a larger truncation degree."""
        if K <= self.K:
            return self.truncate(K)
        arr = _zero((len(index_set(self.n, K)), 1 << self.n), self.exact)
        arr[: len(self.iset)] = self.coeffs
        return FueterSeries(self.n, K, arr)

    def __add__(self, other):
        K = max(self.K, other.K)
        return FueterSeries(self.n, K, self.extend(K).coeffs + other.extend(K).coeffs)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s) -> "FueterSeries":
        return FueterSeries(self.n, self.K, self.coeffs * s)

    def left_multiply(self, w: Multivector) -> "FueterSeries":
        """Series of ``w f``; left multiplication keeps monogenicity only for real ``w``."""
        return FueterSeries(self.n, self.K, gp(w.coeffs, self.coeffs))

    def right_multiply(self, w: Multivector) -> "FueterSeries":
        return FueterSeries(self.n, self.K, gp(self.coeffs, w.coeffs))

    def to_polynomial(self) -> CliffordPolynomial:
        out = CliffordPolynomial(self.n)
        for m, c in zip(self.iset.indices, self.coeffs):
            if any(v != 0 for v in c):
                out = out + fueter_polynomial(m) * Multivector(c)
        return out

    def restriction_polynomial(self) -> CliffordPolynomial:
        """``sum x^m a_m`` on ``x_0 = 0``."""
        return CliffordPolynomial(self.n, {(0, *m): c for m, c in zip(self.iset.indices, self.coeffs)})

    def graded(self, x) -> np.ndarray:
        """Degree components ``sum_{|m|=k} P_m(x) a_m`` stacked as ``(K+1, ..., 2**n)``."""
        pts, _ = as_points(x)
        if pts.shape[-1] != self.n + 1:
            raise DimensionError(f"R^{pts.shape[-1]} point for n = {self.n}")
        if pts.dtype != object and self.exact:
            coeffs = self.coeffs.astype(float)
        else:
            coeffs = self.coeffs
        P = fueter_table(pts, self.K)
        # P a = p_0 a + sum_l p_l (e_l a) with P = p_0 + sum_l p_l e_l
        terms = [coeffs]
        idx, sgn = blade_tables(self.n)
        for i in range(self.n):
            bit = 1 << i
            terms.append(sgn[:, bit] * coeffs[:, idx[:, bit]])
        out = []
        for k in range(self.K + 1):
            sl = self.iset.degree_slice(k)
            acc = 0
            for l, t in enumerate(terms):
                acc = acc + np.einsum("i...,ib->...b", P[sl, ..., l], t[sl])
            out.append(np.asarray(acc))
        return np.stack(out)

    def evaluate(self, x):
        pts, was_para = as_points(x)
        return wrap(self.graded(pts).sum(axis=0), was_para)

    def __call__(self, x):
        return self.evaluate(x)


def fueter_series_eval(F: FueterSeries, x):
    """``sum_{|m| <= K} P_m(x) a_m``; degrees are accumulated in increasing order."""
    return F.evaluate(x)


@lru_cache(maxsize=16)
def pair_table(n: int, Kf: int, Kg: int, Kout: int):
    """Index pairs ``(p, q, r)`` with ``m_p + m_q = m_r``, ``|m_p| <= Kf``, ``|m_q| <= Kg``, ``|m_r| <= Kout``."""
    Kmax = max(Kf, Kg, Kout)
    iset = index_set(n, Kmax)
    base = Kmax + 1
    weights = base ** np.arange(n, dtype=np.int64)
    codes = iset.exps @ weights
    order = np.argsort(codes)
    sorted_codes = codes[order]
    P, Q = [], []
    for p in range(iset.offsets[Kf + 1]):
        d = int(iset.degree[p])
        top = min(Kg, Kout - d)
        if top < 0:
            continue
        q = np.arange(iset.offsets[top + 1])
        P.append(np.full(q.size, p))
        Q.append(q)
    P = np.concatenate(P)
    Q = np.concatenate(Q)
    target = codes[P] + codes[Q]
    R = order[np.searchsorted(sorted_codes, target)]
    for a in (P, Q, R):
        a.flags.writeable = False
    return P, Q, R


def ck_product(f: FueterSeries, g: FueterSeries, cap: int | None = None) -> FueterSeries:
    """CK product: coefficient ``p`` is ``sum_{m + m' = p} a_m b_{m'}``.

    The result is truncated at ``min(K_f + K_g, cap)`` with ``cap`` defaulting
    to ``max(K_f, K_g)``; higher degrees would be incomplete anyway because
    the factors are themselves truncated.
    """
    if f.n != g.n:
        raise DimensionError(f"R_{f.n} and R_{g.n} series")
    if cap is None:
        cap = max(f.K, g.K)
    K = min(f.K + g.K, cap)
    P, Q, R = pair_table(f.n, f.K, g.K, K)
    exact = f.exact and g.exact
    a = f.coeffs if exact else f.coeffs.astype(float)
    b = g.coeffs if exact else g.coeffs.astype(float)
    prods = gp(a[P], b[Q])
    out = _zero((len(index_set(f.n, K)), 1 << f.n), exact)
    np.add.at(out, R, prods)
    return FueterSeries(f.n, K, out)


def ck_power(f: FueterSeries, N: int, cap: int | None = None) -> FueterSeries:
    """``f^{(.)N}`` by binary powering, truncated at ``cap`` (default ``K_f``)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    cap = f.K if cap is None else cap
    one = _zero((1, 1 << f.n), f.exact)
    one[0, 0] = 1
    result = FueterSeries(f.n, 0, one)
    base = f.truncate(cap)
    while N:
        if N & 1:
            result = ck_product(result, base, cap)
        N >>= 1
        if N:
            base = ck_product(base, base, cap)
    return result


def monogenic_exp(alpha, K: int, n: int, kind: str = "exp", exact: bool = False) -> FueterSeries:
    """``E(alpha x)``, ``Cosh(alpha x)`` or ``Sinh(alpha x)`` truncated at total degree ``K``.

    Coefficients are ``a_m = alpha^{|m|} e'_m / |m|!``; Cosh keeps even and
    Sinh odd degrees.
    """
    if K > MAX_EXP_DEGREE:
        raise BudgetError(f"K = {K} exceeds {MAX_EXP_DEGREE}")
    if kind not in ("exp", "cosh", "sinh"):
        raise ValueError(f"unknown kind {kind!r}")
    iset = index_set(n, K)
    table = perm_sum_table(n, K)
    if exact:
        alpha = Fraction(alpha)
        scale = [alpha**k / math.factorial(k) for k in range(K + 1)]
        coeffs = _zero(table.shape, True)
    else:
        alpha = float(alpha)
        scale = [alpha**k / math.factorial(k) for k in range(K + 1)]
        coeffs = np.zeros(table.shape)
    for k in range(K + 1):
        if (kind == "cosh" and k % 2) or (kind == "sinh" and k % 2 == 0):
            continue
        sl = iset.degree_slice(k)
        block = table[sl]
        coeffs[sl] = block * scale[k] if exact else block.astype(float) * scale[k]
    return FueterSeries(n, K, coeffs)


def exp_tail_bound(n: int, alpha: float, r: float, K: int) -> float:
    """Bound ``sum_{k>K} (n |alpha| r)^k / k!`` on the truncation error of ``E(alpha x)`` at ``|x| = r``."""
    t = n * abs(alpha) * r
    if t == 0:
        return 0.0
    # Lagrange remainder of the exponential series
    return t ** (K + 1) / math.factorial(K + 1) * math.exp(t)


def derivative_moment(F: FueterSeries, k: int) -> Multivector:
    """``sum_{|m|=k} (1/m!) d^m F |_{x=0}``, read off the coefficients.

    ``d^m P_{m'}`` at the origin is ``m! delta_{m m'}``, so the moment is the
    coefficient sum over degree ``k``.  For ``E(alpha x)`` it equals
    ``alpha^k c_k / k!``; for the CK power ``(z_1 e_1 + ... + z_n e_n)^k`` it
    equals ``c_k``.
    """
    if not 0 <= k <= F.K:
        raise BudgetError(f"moment order {k} outside 0..{F.K}")
    block = F.coeffs[F.iset.degree_slice(k)]
    total = _zero(1 << F.n, F.exact)
    for row in block:
        total = total + row
    return Multivector(total)


def vector_variable_series(n: int) -> FueterSeries:
    """The series ``z_1 e_1 + ... + z_n e_n``, the CK extension of ``x_1 e_1 + ... + x_n e_n``."""
    coeffs = {MultiIndex.unit(n, i): Multivector(_blade_vec(n, i)) for i in range(1, n + 1)}
    return FueterSeries(n, 1, coeffs)
