"""Superoscillating sequences in the slice and monogenic settings.

The sequence is ``F_N(x) = sum_j Z_j e^{h_j x}`` with nodes ``|h_j| <= 1``.
With uniform nodes ``h_j = 1 - 2j/N`` and binomial coefficients it is the
power ``(cosh(x/N) + a sinh(x/N))^N`` and tends to ``e^{a x}``.

For ``|a| > 1`` the coefficients have ``sum |Z_j| = |a|^N``, so adding the
terms in double precision cancels catastrophically.  Two strategies keep
the sum form accurate: slice values are summed in mpmath at a working
precision sized from the cancellation, and everything else is regrouped
through the exact moments ``mu_t = sum_j Z_j h_j^t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy.stats import norm, qmc

from .clifford import Multivector, as_points, call_map, embed_points, gp, slice_frame, wrap
from .errors import BudgetError, ConsistencyError, DomainError
from .monogenic import FueterSeries, ck_power, monogenic_exp
from .slice import exp_paravector

MAX_MONOGENIC_K = 30


def binomial_coeffs(N: int, a, exact: bool = False):
    """``C_j = binom(N, j) ((1+a)/2)^{N-j} ((1-a)/2)^j`` for ``j = 0..N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if exact:
        a = Fraction(a)
        p, q = (1 + a) / 2, (1 - a) / 2
        return [math.comb(N, j) * p ** (N - j) * q**j for j in range(N + 1)]
    a = float(a)
    p, q = (1 + a) / 2, (1 - a) / 2
    return np.array([math.comb(N, j) * p ** (N - j) * q**j for j in range(N + 1)])


def lagrange_coeffs(nodes, a, exact: bool = False):
    """``X_j = prod_{k != j} (h_k - a) / (h_k - h_j)``.

    These solve ``sum_j X_j h_j^p = a^p`` for ``p = 0..len(nodes)-1``.
    """
    h = [Fraction(t) for t in nodes] if exact else [float(t) for t in nodes]
    if len(set(h)) != len(h):
        raise DomainError("Lagrange nodes must be pairwise distinct")
    a = Fraction(a) if exact else float(a)
    out = []
    for j, hj in enumerate(h):
        val = Fraction(1) if exact else 1.0
        for k, hk in enumerate(h):
            if k != j:
                val *= (hk - a) / (hk - hj)
        out.append(val)
    return out if exact else np.array(out)


def uniform_nodes(N: int, exact: bool = False):
    if exact:
        return [Fraction(N - 2 * j, N) for j in range(N + 1)]
    return np.array([1 - 2 * j / N for j in range(N + 1)])


def chebyshev_nodes(count: int) -> np.ndarray:
    """Chebyshev points of the first kind on ``[-1, 1]``, descending."""
    k = np.arange(count)
    return np.cos((2 * k + 1) * np.pi / (2 * count))


@dataclass(frozen=True)
class SuperoscSpec:
    """Parameters of ``F_N(x, a) = sum_j Z_j e^{h_j x}``.

    ``left_weight`` multiplies every ``Z_j`` on the left by a fixed multivector.
    """

    N: int
    a: float
    n: int = 3
    node_rule: str = "uniform"
    coeff_rule: str = "binomial"
    setting: str = "slice"
    nodes: tuple | None = None
    left_weight: Multivector | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.node_rule not in ("uniform", "custom"):
            raise ValueError(f"unknown node rule {self.node_rule!r}")
        if self.coeff_rule not in ("binomial", "lagrange"):
            raise ValueError(f"unknown coefficient rule {self.coeff_rule!r}")
        if self.setting not in ("slice", "monogenic"):
            raise ValueError(f"unknown setting {self.setting!r}")
        if self.node_rule == "custom":
            if self.nodes is None:
                raise ValueError("custom node rule needs nodes")
            object.__setattr__(self, "nodes", tuple(float(t) for t in self.nodes))
            if len(set(self.nodes)) != len(self.nodes):
                raise DomainError("nodes must be pairwise distinct")
            if max(abs(t) for t in self.nodes) > 1:
                raise DomainError("nodes must lie in [-1, 1]")
            if self.coeff_rule == "binomial":
                raise ValueError("binomial coefficients need uniform nodes")
        elif self.nodes is not None:
            raise ValueError("nodes given for the uniform rule")
        if self.left_weight is not None and self.left_weight.dim != self.n:
            raise DomainError("left weight lives in a different algebra")

    @property
    def is_superoscillating(self) -> bool:
        """Only ``|a| > 1`` gives frequencies beyond the band ``[-1, 1]``."""
        return abs(self.a) > 1

    def node_values(self, exact: bool = False):
        if self.node_rule == "uniform":
            return uniform_nodes(self.N, exact)
        return [Fraction(t) for t in self.nodes] if exact else np.array(self.nodes)

    def coeffs(self, exact: bool = False):
        """Real coefficients before the left weight is applied."""
        if self.coeff_rule == "binomial":
            return binomial_coeffs(self.N, self.a, exact)
        return lagrange_coeffs(self.node_values(exact), self.a, exact)

    def moments(self, T: int) -> list:
        """Exact ``mu_t = sum_j Z_j h_j^t`` for ``t = 0..T`` (real part of ``Z``)."""
        return _moments(self, T)

    def weight(self, values):
        """Apply the left weight to blade arrays ``values``."""
        if self.left_weight is None:
            return values
        return gp(self.left_weight.coeffs.astype(float), values)


@lru_cache(maxsize=256)
def _moments(spec: SuperoscSpec, T: int) -> list:
    h = spec.node_values(exact=True)
    Z = spec.coeffs(exact=True)
    out = []
    powers = [Fraction(1)] * len(h)
    for _ in range(T + 1):
        out.append(sum(z * p for z, p in zip(Z, powers)))
        powers = [p * t for p, t in zip(powers, h)]
    return out


# -- slice setting -----------------------------------------------------------


@lru_cache(maxsize=256)
def _abs_total(spec: SuperoscSpec) -> float:
    return float(sum(abs(z) for z in spec.coeffs(exact=True)))


@lru_cache(maxsize=256)
def _mp_coeffs(spec: SuperoscSpec, dps: int):
    with mpmath.workdps(dps):
        return [_mpf(z) for z in spec.coeffs(exact=True)], [_mpf(h) for h in spec.node_values(exact=True)]


def _working_dps(spec: SuperoscSpec, u: float) -> int:
    total = _abs_total(spec)
    cancel = math.log10(max(total, 1.0)) + abs(u) * (1 + abs(spec.a)) / math.log(10)
    # round up to a multiple of 5 so the coefficient cache is reused
    return 5 * math.ceil((25 + cancel) / 5)


def fn_complex(spec: SuperoscSpec, w: complex, exact_sum: bool = True) -> complex:
    """``sum_j Z_j e^{h_j w}`` for a complex ``w`` with real ``Z_j``."""
    if not exact_sum:
        h = spec.node_values()
        return complex(np.sum(spec.coeffs() * np.exp(h * w)))
    dps = _working_dps(spec, w.real)
    Z, H = _mp_coeffs(spec, dps)
    with mpmath.workdps(dps):
        wm = mpmath.mpc(w)
        if spec.node_rule == "uniform":
            # e^{h_j w} = e^{w} q^j with q = e^{-2w/N}
            term = mpmath.exp(wm)
            q = mpmath.exp(-2 * wm / spec.N)
            total = mpmath.mpc(0)
            for z in Z:
                total += z * term
                term *= q
        else:
            total = mpmath.fsum(z * mpmath.exp(h * wm) for z, h in zip(Z, H))
        return complex(total)


def fn_power_complex(spec: SuperoscSpec, w):
    """Closed power form ``(cosh(w/N) + a sinh(w/N))^N``."""
    t = np.asarray(w) / spec.N
    return (np.cosh(t) + spec.a * np.sinh(t)) ** spec.N


def _mpf(q):
    if isinstance(q, Fraction):
        return mpmath.mpf(q.numerator) / q.denominator
    return mpmath.mpf(q)


def _slice_values(j, values):
    """Blade arrays of ``Re(values) + j Im(values)``."""
    out = j * values.imag[..., None]
    out[..., 0] += values.real
    return out


def eval_FN_slice(spec: SuperoscSpec, x, check: bool = True):
    """``F_N(x) = sum_j Z_j exp(h_j x)`` evaluated slice-wise.

    The sum is formed in extended precision.  For binomial coefficients on
    uniform nodes the closed power form is also evaluated and the two must
    agree to ``1e-11`` relative, else :class:`ConsistencyError`.
    """
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    if pts.shape[-1] != spec.n + 1:
        raise DomainError(f"R^{pts.shape[-1]} point for n = {spec.n}")
    u, v, j = slice_frame(pts)
    w = (u + 1j * v).ravel()
    vals = np.array([fn_complex(spec, complex(t)) for t in w]).reshape(u.shape)
    if check and spec.coeff_rule == "binomial" and spec.node_rule == "uniform":
        power = fn_power_complex(spec, u + 1j * v)
        t = (u + 1j * v) / spec.N
        scale = (np.abs(np.cosh(t)) + abs(spec.a) * np.abs(np.sinh(t))) ** spec.N
        bad = np.abs(power - vals) > 1e-11 * np.abs(vals) + 1e-14 * scale
        if np.any(bad):
            raise ConsistencyError(
                f"sum and power forms of F_N differ by {np.max(np.abs(power - vals)):.3e} (N={spec.N}, a={spec.a})"
            )
    out = spec.weight(_slice_values(j, vals))
    return wrap(out, was_para)


def eval_FN_slice_power(spec: SuperoscSpec, x):
    """Closed power form on the slice; requires binomial coefficients and uniform nodes."""
    if spec.coeff_rule != "binomial" or spec.node_rule != "uniform":
        raise DomainError("the power form exists only for binomial coefficients on uniform nodes")
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    u, v, j = slice_frame(pts)
    out = spec.weight(_slice_values(j, fn_power_complex(spec, u + 1j * v)))
    return wrap(out, was_para)


def slice_limit(spec: SuperoscSpec, x):
    """``e^{a x}`` (left weight applied)."""
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    out = spec.weight(embed_points(exp_paravector(spec.a * pts)))
    return wrap(out, was_para)


def error_bound_slice(N: int, a: float, x):
    """``(2/3)(|a^2 - 1|/N)|x|^2 exp((alpha + 1)|x|)`` with ``alpha = max(1, |a|)``."""
    r = _radius(x)
    alpha = max(1.0, abs(a))
    return 2.0 / 3.0 * abs(a * a - 1) / N * r * r * np.exp((alpha + 1) * r)


def magnitude_bound_slice(a: float, x):
    """``exp((|a| + 1)|x|)``, a bound on ``|F_N(x)|``."""
    return np.exp((abs(a) + 1) * _radius(x))


def magnitude_bound_monogenic(a: float, n: int, x):
    """``exp((alpha + 1) n |x|)`` with ``alpha = max(1, |a|)``."""
    return np.exp((max(1.0, abs(a)) + 1) * n * _radius(x))


def _radius(x):
    pts, was_para = as_points(x)
    r = np.sqrt(np.sum(np.asarray(pts, dtype=float) ** 2, axis=-1))
    return float(r) if was_para else r


# -- monogenic setting -------------------------------------------------------


def _check_K(K):
    if K > MAX_MONOGENIC_K:
        raise BudgetError(f"K = {K} exceeds {MAX_MONOGENIC_K}")


@lru_cache(maxsize=64)
def _exp_unit(n: int, K: int) -> FueterSeries:
    return monogenic_exp(1.0, K, n)


def fn_monogenic_series(spec: SuperoscSpec, K: int, form: str = "sum") -> FueterSeries:
    """Fueter series of ``F_N`` truncated at degree ``K`` (left weight not applied).

    ``form="sum"`` uses ``sum_k mu_k E_k`` with exact moments; ``form="power"``
    is ``(Cosh(x/N) + a Sinh(x/N))^N`` by repeated CK products.
    """
    _check_K(K)
    if form == "sum":
        return _fn_sum_series(spec, K)
    if form == "power":
        if spec.coeff_rule != "binomial" or spec.node_rule != "uniform":
            raise DomainError("the power form exists only for binomial coefficients on uniform nodes")
        return _fn_power_series(spec.N, float(spec.a), spec.n, K)
    raise ValueError(f"unknown form {form!r}")


def _fn_sum_series(spec, K):
    base = _exp_unit(spec.n, K)
    mu = spec.moments(K)
    coeffs = base.coeffs.copy()
    for k in range(K + 1):
        coeffs[base.iset.degree_slice(k)] *= float(mu[k])
    return FueterSeries(spec.n, K, coeffs)


@lru_cache(maxsize=32)
def _fn_power_series(N, a, n, K):
    cosh = monogenic_exp(1.0 / N, K, n, kind="cosh")
    sinh = monogenic_exp(1.0 / N, K, n, kind="sinh")
    return ck_power(cosh + sinh.scale(a), N, cap=K)


def eval_FN_monogenic(spec: SuperoscSpec, x, K: int, check: bool = True, method: str = "moments"):
    """``F_N(x) = sum_j Z_j E(h_j x)`` with ``E`` truncated at degree ``K``.

    ``method="moments"`` regroups the sum through exact moments,
    ``method="direct"`` adds the ``N + 1`` truncated exponentials one by one
    (only trustworthy while ``sum |Z_j|`` is moderate).  With ``check`` the
    power form ``(Cosh(x/N) + a Sinh(x/N))^N`` is evaluated as well and must
    agree to ``1e-8`` relative.
    """
    _check_K(K)
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    if pts.shape[-1] != spec.n + 1:
        raise DomainError(f"R^{pts.shape[-1]} point for n = {spec.n}")
    if method == "moments":
        vals = _fn_sum_series(spec, K).evaluate(pts)
    elif method == "direct":
        vals = 0
        for z, h in zip(spec.coeffs(), spec.node_values()):
            vals = vals + z * monogenic_exp(float(h), K, spec.n).evaluate(pts)
    else:
        raise ValueError(f"unknown method {method!r}")
    if check and spec.coeff_rule == "binomial" and spec.node_rule == "uniform":
        power = _fn_power_series(spec.N, float(spec.a), spec.n, K).evaluate(pts)
        diff = np.sqrt(np.sum((power - vals) ** 2, axis=-1))
        size = np.sqrt(np.sum(vals**2, axis=-1))
        if np.any(diff > 1e-8 * np.maximum(size, 1.0)):
            raise ConsistencyError(f"sum and power forms of monogenic F_N differ by {np.max(diff):.3e}")
    return wrap(spec.weight(vals), was_para)


def monogenic_limit(spec: SuperoscSpec, x, K: int):
    """``E(a x)`` truncated at degree ``K`` (left weight applied)."""
    pts, was_para = as_points(x)
    vals = monogenic_exp(float(spec.a), K, spec.n).evaluate(np.asarray(pts, dtype=float))
    return wrap(spec.weight(vals), was_para)


def adapted_K(n: int, alpha: float, R: float, tol: float = 1e-10, K_max: int = MAX_MONOGENIC_K) -> int:
    """Smallest ``K`` with ``(n alpha R)^{K+1}/(K+1)! < tol``, capped at ``K_max``."""
    t = n * abs(alpha) * R
    for K in range(K_max + 1):
        if t ** (K + 1) / math.factorial(K + 1) < tol:
            return K
    return K_max


# -- weighted norms ----------------------------------------------------------


@dataclass(frozen=True)
class A1NormEstimate:
    """``value = max over grid of |f(x)| e^{-sigma |x|}``."""

    sigma: float
    grid: np.ndarray = field(repr=False)
    value: float
    argmax: int = 0


def structured_points(n: int, R: float, count: int = 64) -> np.ndarray:
    """Origin, then axis and diagonal points on shells of decreasing radius."""
    dirs = []
    for i in range(n + 1):
        e = np.zeros(n + 1)
        e[i] = 1.0
        dirs += [e, -e]
    diag = np.ones(n + 1) / math.sqrt(n + 1)
    alt = np.array([(-1.0) ** i for i in range(n + 1)]) / math.sqrt(n + 1)
    dirs += [diag, -diag, alt, -alt]
    pts = [np.zeros(n + 1)]
    for frac in (1.0, 0.5, 0.75, 0.25, 0.875, 0.625, 0.375, 0.125):
        pts += [R * frac * d for d in dirs]
    return np.array(pts[:count])


def sample_ball(n: int, R: float, samples: int = 512, seed: int = 0, structured: int = 64) -> np.ndarray:
    """Deterministic points of the ball ``|x| <= R`` in ``R^{n+1}``.

    A scrambled Sobol prefix (radius from one coordinate, direction from
    normal quantiles of the rest) followed by ``structured`` axis and
    diagonal points.  Longer prefixes contain shorter ones.
    """
    parts = []
    if samples:
        sob = qmc.Sobol(d=n + 2, scramble=True, seed=seed)
        m = math.ceil(math.log2(samples)) if samples > 1 else 0
        raw = sob.random_base2(m)[:samples]
        radius = R * raw[:, 0] ** (1.0 / (n + 1))
        g = norm.ppf(np.clip(raw[:, 1:], 1e-12, 1 - 1e-12))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        parts.append(radius[:, None] * g)
    if structured:
        parts.append(structured_points(n, R, structured))
    return np.concatenate(parts) if parts else np.zeros((0, n + 1))


def a1_norm_estimate(
    f, sigma: float, R: float, samples: int = 512, *, n: int, seed: int = 0, batched: bool = False
) -> A1NormEstimate:
    """Estimate ``sup |f(x)| e^{-sigma |x|}`` on a low-discrepancy sample of the ball.

    ``f`` maps a Paravector to a Multivector, or with ``batched=True`` a point
    array ``(S, n+1)`` to blade values ``(S, 2**n)``.
    """
    if sigma <= 0 or R <= 0:
        raise DomainError("sigma and R must be positive")
    grid = sample_ball(n, R, samples, seed)
    if batched:
        vals = np.asarray(f(grid), dtype=float)
    else:
        vals = np.stack([np.asarray(call_map(f, p), dtype=float) for p in grid])
    weighted = np.sqrt(np.sum(vals * vals, axis=-1)) * np.exp(-sigma * np.linalg.norm(grid, axis=1))
    k = int(np.argmax(weighted))
    return A1NormEstimate(float(sigma), grid, float(weighted[k]), k)
