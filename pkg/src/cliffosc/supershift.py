"""Supershift sequences ``F_N(x) = sum_j Z_j G(h_j x)`` for entire ``G``.

Production evaluation regroups the finite double sum over ``j`` and the
Taylor index through exact node moments: for ``G(y) = sum_s y^s G_s`` one
has ``F_N(x) = sum_s mu_s x^s G_s`` with ``mu_s = sum_j Z_j h_j^s``.  The
literal per-node sum is kept as ``method="direct"`` for small ``N`` and the
infinite-order differential operators are implemented as truncated
cross-checks.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import mpmath
import numpy as np

from .clifford import Multivector, Paravector, as_points, blade_tables, embed_points, gp, slice_frame, wrap
from .combinatorics import MultiIndex, c_k_constant, index_set, multi_indices, perm_sum_e, perm_sum_table
from .errors import BudgetError, DimensionError, DomainError, TruncationError
from .fueter import fueter_table
from .monogenic import FueterSeries, derivative_moment
from .slice import SliceSeries, coeff_growth_fit, exp_paravector
from .superosc import MAX_MONOGENIC_K, SuperoscSpec

# -- entire slice functions --------------------------------------------------


class EntireSliceFn:
    """``G(y) = sum_{s<=S} y^s G_s`` with a growth certificate for the tail.

    ``polynomial=True`` declares the coefficients complete, so the tail is zero.
    """

    def __init__(self, taylor, closed: str | None = None, polynomial: bool = False):
        self.series = SliceSeries([t.coeffs if isinstance(t, Multivector) else t for t in taylor])
        if self.series.coeffs.dtype == object:
            self.series = SliceSeries(self.series.coeffs.astype(float))
        self.fit = coeff_growth_fit(self.series)
        self.closed = closed
        self.polynomial = polynomial

    @property
    def n(self) -> int:
        return self.series.dim

    @property
    def S(self) -> int:
        return self.series.trunc_degree

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    @classmethod
    def from_real(cls, n: int, values, closed=None, polynomial=False) -> "EntireSliceFn":
        arr = np.zeros((len(values), 1 << n))
        arr[:, 0] = values
        return cls(arr, closed, polynomial)

    @classmethod
    def exp(cls, n: int, S: int = 100) -> "EntireSliceFn":
        return cls.from_real(n, [1 / math.factorial(s) for s in range(S + 1)], closed="exp")

    @classmethod
    def bessel(cls, n: int, S: int = 100) -> "EntireSliceFn":
        """``sum_s y^s / (s!)^2``."""
        return cls.from_real(n, [1 / math.factorial(s) ** 2 for s in range(S + 1)])

    @classmethod
    def monomial(cls, n: int, s: int, coeff=1.0) -> "EntireSliceFn":
        arr = np.zeros((s + 1, 1 << n))
        arr[s] = coeff.coeffs if isinstance(coeff, Multivector) else np.eye(1 << n)[0] * coeff
        return cls(arr, polynomial=True)

    @classmethod
    def from_taylor_file(cls, path, n: int, polynomial: bool = False) -> "EntireSliceFn":
        """Read a JSON array: real Taylor coefficients or one blade array per degree."""
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise OSError(f"{path}: {exc.strerror}") from exc
        arr = np.array(data, dtype=float)
        if arr.ndim == 1:
            return cls.from_real(n, arr, polynomial=polynomial)
        if arr.ndim != 2 or arr.shape[1] != 1 << n:
            raise DimensionError(f"{path}: expected arrays of {1 << n} blade coefficients")
        return cls(arr, polynomial=polynomial)

    def evaluate(self, x):
        return self.series.evaluate(x)

    def __call__(self, x):
        return self.evaluate(x)

    def tail_bound(self, r) -> float:
        if self.polynomial:
            return 0.0
        return self.fit.tail_bound(float(np.max(r)), self.S)


def _abs_moments(spec: SuperoscSpec) -> float:
    total = float(sum(abs(z) for z in spec.coeffs(exact=True)))
    if spec.left_weight is not None:
        total *= float(spec.left_weight.norm()) * 2 ** (spec.n / 2)
    return total


def _power_moments(spec: SuperoscSpec, node_map, T: int) -> list:
    """Exact ``nu_s = sum_j Z_j g(h_j)^s`` for a polynomial node map ``g``."""
    if node_map is None:
        return [float(m) for m in spec.moments(T)]
    g = [Fraction(c) for c in node_map]
    deg = len(g) - 1
    mu = spec.moments(deg * T)
    out = []
    poly = [Fraction(1)]
    for _ in range(T + 1):
        out.append(float(sum(c * m for c, m in zip(poly, mu))))
        poly = _polymul(poly, g)
    return out


def _polymul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _slice_moment_sum(G: EntireSliceFn, nu, pts):
    """``sum_s nu_s x^s G_s`` slice-wise."""
    u, v, j = slice_frame(pts)
    w = u + 1j * v
    S = min(G.S, len(nu) - 1)
    powers = w[..., None] ** np.arange(S + 1) * np.asarray(nu[: S + 1])
    re = powers.real @ G.coeffs[: S + 1]
    im = powers.imag @ G.coeffs[: S + 1]
    return re + gp(j, im)


def _check_tail(bound, tol, what):
    if tol is not None and bound > tol:
        raise TruncationError(f"{what}: certified tail {bound:.3e} exceeds tolerance {tol:.1e}")


def supershift_slice(G: EntireSliceFn, spec: SuperoscSpec, x, tol: float | None = 1e-8, method: str = "moments"):
    """``F_N(x) = sum_j Z_j G(h_j x)`` with ``Z_j`` on the left."""
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    r = np.sqrt(np.sum(pts**2, axis=-1))
    _check_tail(_abs_moments(spec) * G.tail_bound(r), tol, "supershift_slice")
    if method == "moments":
        vals = _slice_moment_sum(G, _power_moments(spec, None, G.S), pts)
    elif method == "direct":
        vals = 0
        for z, h in zip(spec.coeffs(), spec.node_values()):
            vals = vals + z * G.evaluate(h * pts)
    else:
        raise ValueError(f"unknown method {method!r}")
    return wrap(spec.weight(vals), was_para)


def slice_supershift_limit(G: EntireSliceFn, spec: SuperoscSpec, x, tol: float | None = 1e-8):
    """``G(a x)``."""
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    _check_tail(G.tail_bound(abs(spec.a) * np.sqrt(np.sum(pts**2, axis=-1))), tol, "limit")
    return wrap(spec.weight(G.evaluate(spec.a * pts)), was_para)


def operator_V_slice(G: EntireSliceFn, x, f: SliceSeries, S: int):
    """``sum_{s<=S} (s! a_s) x^s G_s`` where ``a_s`` are the coefficients of ``f``."""
    if S > min(G.S, f.trunc_degree):
        raise BudgetError(f"S = {S} exceeds the stored degrees ({G.S}, {f.trunc_degree})")
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    xs = embed_points(pts)
    power = np.zeros_like(xs)
    power[..., 0] = 1.0
    total = np.zeros_like(xs)
    fc = f.coeffs.astype(float)
    for s in range(S + 1):
        deriv = math.factorial(s) * fc[s]
        total = total + gp(gp(deriv, power), G.coeffs[s])
        power = gp(power, xs)
    return wrap(total, was_para)


# -- frequency profiles ------------------------------------------------------


class FrequencyProfile:
    """Real polynomials ``g_0 .. g_n`` with Taylor coefficients ``g[k, l]``."""

    def __init__(self, g, check: bool = True, tol: float = 1e-12):
        g = np.atleast_2d(np.asarray(g, dtype=float))
        if g.shape[0] < 2:
            raise DimensionError("a profile needs n + 1 >= 2 component functions")
        self.g = g
        self.g.flags.writeable = False
        if check:
            a = np.linspace(-1, 1, 201)
            vals = np.abs(self.values(a))
            if np.any(vals > 1 + tol):
                raise DomainError("profile functions must satisfy |g_k(a)| <= 1 on [-1, 1]")

    @property
    def n(self) -> int:
        return self.g.shape[0] - 1

    @property
    def degree(self) -> int:
        return self.g.shape[1] - 1

    @classmethod
    def identity(cls, n: int) -> "FrequencyProfile":
        return cls.power(n, 1)

    @classmethod
    def power(cls, n: int, p: int) -> "FrequencyProfile":
        g = np.zeros((n + 1, p + 1))
        g[:, p] = 1.0
        return cls(g)

    @classmethod
    def uniform(cls, n: int, coeffs) -> "FrequencyProfile":
        return cls(np.tile(np.asarray(coeffs, dtype=float), (n + 1, 1)))

    def values(self, h) -> np.ndarray:
        """``g_k(h)`` by Horner's rule; shape ``(..., n+1)``."""
        h = np.asarray(h, dtype=float)
        out = np.zeros(h.shape + (self.n + 1,))
        for c in self.g.T[::-1]:
            out = out * h[..., None] + c
        return out

    def u(self, ell: int, x):
        """``u_l(x) = x_0 g_{0,l} + sum_k e_k x_k g_{k,l}`` as paravector components."""
        pts, was_para = as_points(x)
        out = np.asarray(pts, dtype=float) * self.g[:, ell]
        return Paravector.from_array(out) if was_para else out

    @property
    def node_map(self):
        """Common coefficients when every ``g_k`` is the same polynomial, else ``None``."""
        if np.all(self.g == self.g[0]):
            return self.g[0]
        return None


def multifreq_exponent(profile: FrequencyProfile, h, x):
    """``x_0 g_0(h) + sum_k e_k x_k g_k(h)``."""
    pts, was_para = as_points(x)
    if pts.shape[-1] != profile.n + 1:
        raise DimensionError(f"R^{pts.shape[-1]} point for a profile with n = {profile.n}")
    out = np.asarray(pts, dtype=float) * profile.values(h)
    return Paravector.from_array(out) if was_para else out


def _hpoly_power_table(profile: FrequencyProfile, pts, S: int):
    """Coefficients in ``h`` of ``y(h)^s`` for ``s <= S``, ``y(h) = sum_l u_l(x) h^l``."""
    L = profile.degree
    H = L * S + 1
    n = profile.n
    u = embed_points(pts[..., None, :] * profile.g.T)  # (..., L+1, 2**n)
    power = np.zeros(pts.shape[:-1] + (H, 1 << n))
    power[..., 0, 0] = 1.0
    out = [power]
    for s in range(1, S + 1):
        nxt = np.zeros_like(power)
        top = L * (s - 1) + 1
        for ell in range(L + 1):
            nxt[..., ell : ell + top, :] += gp(power[..., :top, :], u[..., ell : ell + 1, :])
        power = nxt
        out.append(power)
    return out


def supershift_multifreq_slice(
    G: EntireSliceFn,
    profile: FrequencyProfile,
    spec: SuperoscSpec,
    x,
    tol: float | None = 1e-8,
    method: str = "moments",
):
    """``sum_j Z_j G(x_0 g_0(h_j) + sum_k e_k x_k g_k(h_j))``.

    With ``G.closed == "exp"`` the direct method uses the closed exponential.
    The moment method regroups through ``nu_s = sum_j Z_j g(h_j)^s`` when all
    ``g_k`` coincide and through the ``h``-expansion of ``G(y(h))`` otherwise.
    """
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    if pts.shape[-1] != profile.n + 1 or profile.n != spec.n:
        raise DimensionError("profile, spec and point dimensions differ")
    gmax = float(np.max(np.abs(profile.values(np.asarray(spec.node_values())))))
    r = np.sqrt(np.sum(pts**2, axis=-1))
    _check_tail(_abs_moments(spec) * G.tail_bound(gmax * r), tol, "supershift_multifreq_slice")
    if method == "direct":
        vals = 0
        for z, h in zip(spec.coeffs(), spec.node_values()):
            y = multifreq_exponent(profile, h, pts)
            g = embed_points(exp_paravector(y)) if G.closed == "exp" else G.evaluate(y)
            vals = vals + z * g
    elif method == "moments":
        if profile.node_map is not None:
            vals = _slice_moment_sum(G, _power_moments(spec, profile.node_map, G.S), pts)
        else:
            table = _hpoly_power_table(profile, pts, G.S)
            mu = [float(m) for m in spec.moments(profile.degree * G.S)]
            vals = 0
            for s, ys in enumerate(table):
                weighted = np.tensordot(np.asarray(mu[: ys.shape[-2]]), ys, axes=([0], [-2]))
                vals = vals + gp(weighted, G.coeffs[s])
    else:
        raise ValueError(f"unknown method {method!r}")
    return wrap(spec.weight(vals), was_para)


def multifreq_slice_limit(G: EntireSliceFn, profile: FrequencyProfile, spec: SuperoscSpec, x, tol=1e-8):
    """``G(x_0 g_0(a) + sum_k e_k x_k g_k(a))``."""
    pts, was_para = as_points(x)
    y = multifreq_exponent(profile, spec.a, np.asarray(pts, dtype=float))
    _check_tail(G.tail_bound(np.sqrt(np.sum(y**2, axis=-1))), tol, "limit")
    vals = embed_points(exp_paravector(y)) if G.closed == "exp" else G.evaluate(y)
    return wrap(spec.weight(vals), was_para)


# -- entire monogenic functions ----------------------------------------------


class EntireMonogenicFn:
    """``G(x) = sum_{|m| <= K} P_m(x) G_m``.

    Radial functions ``G_m = beta_{|m|} e'_m`` (the CK extensions of
    ``sum beta_s xbar^s``) carry a certified tail bound.
    """

    def __init__(self, series: FueterSeries, beta=None, log_beta=None):
        self.series = series if not series.exact else series.to_float()
        self.beta = beta
        if beta is not None and log_beta is None:
            log_beta = lambda k: math.log(abs(beta(k))) if beta(k) else -math.inf  # noqa: E731
        self.log_beta = log_beta

    @property
    def n(self) -> int:
        return self.series.n

    @property
    def K(self) -> int:
        return self.series.K

    @classmethod
    def radial(cls, n: int, K: int, beta, log_beta=None) -> "EntireMonogenicFn":
        if K > MAX_MONOGENIC_K:
            raise BudgetError(f"K = {K} exceeds {MAX_MONOGENIC_K}")
        iset = index_set(n, K)
        table = perm_sum_table(n, K)
        coeffs = np.zeros(table.shape)
        for k in range(K + 1):
            sl = iset.degree_slice(k)
            coeffs[sl] = table[sl].astype(float) * beta(k)
        return cls(FueterSeries(n, K, coeffs), beta, log_beta)

    @classmethod
    def exp(cls, n: int, K: int = MAX_MONOGENIC_K) -> "EntireMonogenicFn":
        return cls.radial(n, K, lambda k: 1 / math.factorial(k), lambda k: -math.lgamma(k + 1))

    @classmethod
    def bessel(cls, n: int, K: int = MAX_MONOGENIC_K) -> "EntireMonogenicFn":
        return cls.radial(n, K, lambda k: 1 / math.factorial(k) ** 2, lambda k: -2 * math.lgamma(k + 1))

    @classmethod
    def monomial(cls, m, coeff=1.0) -> "EntireMonogenicFn":
        m = MultiIndex(m)
        c = coeff if isinstance(coeff, Multivector) else Multivector(np.eye(1 << m.n)[0] * coeff)
        return cls(FueterSeries(m.n, m.order, {m: c}))

    def evaluate(self, x):
        return self.series.evaluate(x)

    def __call__(self, x):
        return self.evaluate(x)

    def tail_terms(self, r: float, extra: int = 200) -> np.ndarray:
        """``|beta_k| (n r)^k`` for ``k = K+1 .. K+extra`` (zeros when not radial)."""
        if self.beta is None:
            return np.zeros(extra)
        k = np.arange(self.K + 1, self.K + extra + 1)
        logs = np.array([self.log_beta(int(t)) for t in k])
        if r > 0:
            logs = logs + k * math.log(self.n * r)
        else:
            logs[:] = -np.inf
        with np.errstate(over="ignore"):
            return np.exp(logs)

    def tail_bound(self, r) -> float:
        """Bound on the truncation error at ``|x| <= r`` from ``|sum_{|m|=k} P_m e'_m| <= (n |x|)^k``."""
        return float(np.sum(self.tail_terms(float(np.max(r)))))


def _monogenic_tail(G: EntireMonogenicFn, spec: SuperoscSpec, r, node_map=None) -> float:
    if G.beta is None:
        return 0.0
    r = float(np.max(r))
    extra = 200
    terms = G.tail_terms(r, extra)
    nu = _power_moments(spec, node_map, G.K + extra)[G.K + 1 :]
    return float(np.sum(np.abs(nu) * terms))


def _graded_moment_sum(G: EntireMonogenicFn, nu, pts):
    graded = G.series.graded(pts)
    return np.tensordot(np.asarray(nu[: G.K + 1]), graded, axes=([0], [0]))


def supershift_monogenic(
    G: EntireMonogenicFn, spec: SuperoscSpec, x, tol: float | None = 1e-8, method: str = "moments"
):
    """``F_N(x) = sum_j Z_j G(h_j x)`` using ``P_m(h x) = h^{|m|} P_m(x)``.

    ``method="operator"`` applies the truncated operator ``V`` to the Fueter
    series of ``sum_j E(h_j y) Z_j`` (small degrees only).
    """
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    r = np.sqrt(np.sum(pts**2, axis=-1))
    _check_tail(_monogenic_tail(G, spec, r), tol, "supershift_monogenic")
    if method == "moments":
        vals = _graded_moment_sum(G, _power_moments(spec, None, G.K), pts)
    elif method == "direct":
        vals = 0
        for z, h in zip(spec.coeffs(), spec.node_values()):
            vals = vals + z * G.evaluate(h * pts)
    elif method == "operator":
        from .superosc import fn_monogenic_series

        f = fn_monogenic_series(spec, G.K)
        vals = operator_V_monogenic(G, pts, f, G.K)
    else:
        raise ValueError(f"unknown method {method!r}")
    return wrap(spec.weight(vals), was_para)


def monogenic_supershift_limit(G: EntireMonogenicFn, spec: SuperoscSpec, x, tol: float | None = 1e-8):
    """``G(a x)``."""
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    _check_tail(G.tail_bound(abs(spec.a) * np.sqrt(np.sum(pts**2, axis=-1))), tol, "limit")
    return wrap(spec.weight(G.evaluate(spec.a * pts)), was_para)


def c_k_inverse(n: int, k: int) -> Multivector:
    """Inverse of ``c_k``; ``(e_1 + ... + e_n)^{-1} = -(e_1 + ... + e_n)/n``."""
    c = c_k_constant(n, k)
    if k % 2 == 0:
        return Multivector.scalar(n, Fraction(1, c.scalar_part()))
    return c * Fraction(-1, n * ((-n) ** (k // 2)) ** 2)


def _sub_indices(m):
    return [MultiIndex(i) for i in np.ndindex(*(p + 1 for p in m))]


def operator_V_monogenic(G: EntireMonogenicFn, x, f: FueterSeries, S: int):
    """Truncated ``V(x, d_y) f``.

    ``sum_{s<=S} [c_s^{-1} s! M_s(f)] sum_{|m|=s} sum_{i+j=m} m!/(i! j!)
    (-x_0)^{|i|} (e_i/|i|!) x^j G_m`` where ``M_s`` is the derivative moment.
    The ``s!`` and the sign of ``x_0`` are the normalisations certified by the
    exact oracles in the test suite.
    """
    if S > min(G.K, f.K):
        raise BudgetError(f"S = {S} exceeds stored degrees ({G.K}, {f.K})")
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    n = G.n
    total = np.zeros(pts.shape[:-1] + (1 << n,))
    for s in range(S + 1):
        lead = (c_k_inverse(n, s) * derivative_moment(f, s) * math.factorial(s)).to_float().coeffs
        xs_part = np.zeros_like(total)
        for m in multi_indices(n, s):
            Gm = G.series.coeffs[G.series.iset.position[m]]
            if not np.any(Gm):
                continue
            for i in _sub_indices(m):
                j = MultiIndex(p - q for p, q in zip(m, i))
                weight = m.factorial // (i.factorial * j.factorial)
                ei = perm_sum_e(i, ordered=True).to_float().coeffs / math.factorial(i.order)
                scal = weight * (-pts[..., 0]) ** i.order
                for k, p in enumerate(j):
                    scal = scal * pts[..., k + 1] ** p
                xs_part = xs_part + scal[..., None] * gp(ei, Gm)
        total = total + gp(lead, xs_part)
    return wrap(total, was_para)


# -- several frequencies, monogenic -----------------------------------------


def _hpoly_fueter_table(profile: FrequencyProfile, pts, K: int, T: int):
    """``P_m(y(h))`` as paravector components with ``h``-polynomial coefficients up to degree ``T``.

    ``y(h)`` has coordinates ``x_k g_k(h)``; the Fueter recursion runs over
    the ring of polynomials in ``h`` truncated at degree ``T``.
    Shape ``(L, ..., n+1, T+1)``.
    """
    n = profile.n
    iset = index_set(n, K)
    H = T + 1
    coords = np.zeros(pts.shape + (H,))
    top = min(profile.degree, T) + 1
    coords[..., :top] = pts[..., None] * profile.g[:, :top]
    P = np.zeros((len(iset),) + pts.shape + (H,))
    P[0, ..., 0, 0] = 1.0

    def times(Q, c):
        # truncated polynomial product along the last axis
        out = np.zeros_like(Q)
        for ell in range(top):
            out[..., ell:] += Q[..., : H - ell] * c[..., ell : ell + 1]
        return out

    y0 = coords[..., 0, :]
    for d in range(1, K + 1):
        sl = iset.degree_slice(d)
        acc = np.zeros((sl.stop - sl.start,) + pts.shape + (H,))
        for i in range(n):
            par = iset.parent[i, sl]
            rows = np.nonzero(par >= 0)[0]
            Q = P[par[rows]]
            yi = coords[..., i + 1, :]
            prod = times(Q, yi[..., None, :])
            prod[..., 0, :] += times(Q[..., i + 1, :], y0)
            prod[..., i + 1, :] -= times(Q[..., 0, :], y0)
            w = iset.exps[sl][rows, i].reshape((-1,) + (1,) * (pts.ndim + 1))
            acc[rows] += w * prod
        P[sl] = acc / d
    return P


def _paravector_times(P, coeffs, n):
    """``sum_m P_m a_m`` for paravector components ``P`` (first axis ``m``)."""
    idx, sgn = blade_tables(n)
    out = np.tensordot(P[..., 0], coeffs, axes=([0], [0]))
    for i in range(n):
        bit = 1 << i
        ea = sgn[:, bit] * coeffs[:, idx[:, bit]]
        out = out + np.tensordot(P[..., i + 1], ea, axes=([0], [0]))
    return out


def supershift_multifreq_monogenic(
    G: EntireMonogenicFn,
    profile: FrequencyProfile,
    spec: SuperoscSpec,
    x,
    K: int | None = None,
    tol: float | None = 1e-8,
    method: str = "moments",
):
    """``sum_j Z_j G(x_0 g_0(h_j) + sum_k e_k x_k g_k(h_j))`` with ``G`` truncated at ``K``."""
    K = G.K if K is None else K
    if K > min(G.K, MAX_MONOGENIC_K):
        raise BudgetError(f"K = {K} exceeds {min(G.K, MAX_MONOGENIC_K)}")
    if K < G.K:
        G = EntireMonogenicFn(G.series.truncate(K), G.beta, G.log_beta)
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    if pts.shape[-1] != profile.n + 1 or profile.n != spec.n or G.n != spec.n:
        raise DimensionError("profile, spec, function and point dimensions differ")
    gmax = float(np.max(np.abs(profile.values(np.asarray(spec.node_values())))))
    r = np.sqrt(np.sum(pts**2, axis=-1))
    if method == "direct":
        _check_tail(_abs_moments(spec) * G.tail_bound(gmax * r), tol, "supershift_multifreq_monogenic")
        vals = 0
        for z, h in zip(spec.coeffs(), spec.node_values()):
            vals = vals + z * G.evaluate(multifreq_exponent(profile, h, pts))
    elif method == "moments":
        node_map = profile.node_map
        if node_map is not None:
            _check_tail(_monogenic_tail(G, spec, r, node_map), tol, "supershift_multifreq_monogenic")
            vals = _graded_moment_sum(G, _power_moments(spec, node_map, G.K), pts)
        else:
            _check_tail(_abs_moments(spec) * G.tail_bound(gmax * r), tol, "supershift_multifreq_monogenic")
            T = profile.degree * G.K
            mu = np.array([float(m) for m in spec.moments(T)])
            P = _hpoly_fueter_table(profile, pts, G.K, T)
            Pmu = np.tensordot(P, mu, axes=([-1], [0]))
            vals = _paravector_times(Pmu, G.series.coeffs, G.n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return wrap(spec.weight(vals), was_para)


def multifreq_monogenic_limit(
    G: EntireMonogenicFn, profile: FrequencyProfile, spec: SuperoscSpec, x, K: int | None = None, tol=1e-8
):
    """``G(x_0 g_0(a) + sum_k e_k x_k g_k(a))``."""
    K = G.K if K is None else K
    if K < G.K:
        G = EntireMonogenicFn(G.series.truncate(K), G.beta, G.log_beta)
    pts, was_para = as_points(x)
    y = multifreq_exponent(profile, spec.a, np.asarray(pts, dtype=float))
    _check_tail(G.tail_bound(np.sqrt(np.sum(y**2, axis=-1))), tol, "limit")
    return wrap(spec.weight(G.evaluate(y)), was_para)


def multifreq_truncated_direct(profile: FrequencyProfile, spec: SuperoscSpec, x, k_max: int = 3, s_max: int = 6):
    """``sum_j Z_j E_{<=k_max}(y(h_j))`` keeping powers ``h^s`` with ``s <= s_max``.

    Reference value for :func:`operator_U_monogenic`.
    """
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    E = EntireMonogenicFn.exp(profile.n, k_max)
    mu = np.array([float(m) for m in spec.moments(s_max)])
    P = _hpoly_fueter_table(profile, pts, k_max, s_max)
    vals = _paravector_times(np.tensordot(P, mu, axes=([-1], [0])), E.series.coeffs, profile.n)
    return wrap(vals, was_para)


def operator_U_monogenic(profile: FrequencyProfile, x, f: FueterSeries, k_max: int = 3, s_max: int = 6):
    """Truncated ``U(x, d_y) f`` for the several-frequency exponential.

    ``sum_{k<=k_max} (1/k!) sum_{|t|=k} sum_{i+r=t} t!/(i! r!)
    sum_{s<=s_max} [c_s^{-1} s! M_s(f)] (e_i/|i|!) [h^s]((-y_0)^{|i|} y^r) e'_t``
    with ``y_k(h) = x_k g_k(h)``.  Applied to the Fueter series of
    ``sum_j E(h_j y) Z_j`` it reproduces :func:`multifreq_truncated_direct`.
    """
    if s_max > f.K:
        raise BudgetError(f"s_max = {s_max} exceeds the series degree {f.K}")
    n = profile.n
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    leads = [
        (c_k_inverse(n, s) * derivative_moment(f, s) * math.factorial(s)).to_float().coeffs for s in range(s_max + 1)
    ]
    polys = [np.polynomial.Polynomial(profile.g[k]) for k in range(n + 1)]
    total = np.zeros(pts.shape[:-1] + (1 << n,))
    for k in range(k_max + 1):
        for t in multi_indices(n, k):
            et = perm_sum_e(t).to_float().coeffs
            for i in _sub_indices(t):
                r = MultiIndex(p - q for p, q in zip(t, i))
                weight = t.factorial / (i.factorial * r.factorial) / math.factorial(k)
                ei = perm_sum_e(i, ordered=True).to_float().coeffs / math.factorial(i.order)
                hpoly = polys[0] ** i.order * (-1) ** i.order
                for v, p in enumerate(r):
                    hpoly = hpoly * polys[v + 1] ** p
                xmono = pts[..., 0] ** i.order
                for v, p in enumerate(r):
                    xmono = xmono * pts[..., v + 1] ** p
                block = gp(ei, et)
                for s, c in enumerate(hpoly.coef[: s_max + 1]):
                    if c:
                        total = total + (weight * c * xmono)[..., None] * gp(leads[s], block)
    return wrap(total, was_para)
