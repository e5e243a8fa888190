"""Slice hyperholomorphic calculus on paravectors.

A paravector ``x = u + j v`` lives in the complex plane ``C_j``; a series
``sum x^k a_k`` with Clifford coefficients on the right evaluates there as
``sum Re(w^k) a_k + j sum Im(w^k) a_k`` with ``w = u + i v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .clifford import (
    Multivector,
    Paravector,
    as_points,
    call_map,
    dim_of,
    embed_points,
    gp,
    recip,
    slice_frame,
    slice_split,
    wrap,
)
from .errors import DimensionError, DomainError, SingularityError
from .numdiff import derivative


def slice_lift(F, x):
    """Apply a complex intrinsic function slice-wise: ``Re F(w) + j Im F(w)``.

    ``F`` maps complex arrays to complex arrays and must satisfy
    ``F(conj w) = conj F(w)``.  Returns paravector components ``(..., n+1)``
    for arrays and a Paravector for Paravector input.
    """
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    u, v, _ = slice_frame(pts)
    val = np.asarray(F(u + 1j * v), dtype=complex)
    vec = pts[..., 1:]
    safe = np.where(v > 0, v, 1.0)
    scale = np.where(v > 0, val.imag / safe, 0.0)
    out = np.concatenate([val.real[..., None], vec * scale[..., None]], axis=-1)
    return Paravector.from_array(out) if was_para else out


def exp_paravector(x):
    """``e^x = e^{x0} (cos v + j sin v)``; stays in the scalar kind of ``x`` for mpmath input."""
    if isinstance(x, Paravector) and any(isinstance(t, mpmath.mpf) for t in (x.x0, *x.xv)):
        u, v, j = slice_split(x)
        scale = mpmath.exp(u)
        if j is None:
            return Paravector(scale, tuple(mpmath.mpf(0) for _ in x.xv))
        s = scale * mpmath.sin(v) / v
        return Paravector(scale * mpmath.cos(v), tuple(s * t for t in x.xv))
    return slice_lift(np.exp, x)


class SliceSeries:
    """Truncated series ``sum_{k<=K} x^k a_k`` (``side="left"``) or ``sum a_k x^k``.

    ``coeffs`` has shape ``(K+1, 2**n)``; float or exact object arrays.
    """

    def __init__(self, coeffs, side: str = "left"):
        if side not in ("left", "right"):
            raise ValueError(f"unknown side {side!r}")
        rows = [c.coeffs if isinstance(c, Multivector) else c for c in coeffs]
        arr = np.array(rows)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError("coefficients must form a nonempty (K+1, 2**n) array")
        dim_of(arr.shape[1])
        if arr.dtype.kind in "iub":
            arr = arr.astype(object)
        arr.flags.writeable = False
        self.coeffs = arr
        self.side = side

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1].bit_length() - 1

    @property
    def trunc_degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @classmethod
    def real(cls, n: int, values, side: str = "left") -> "SliceSeries":
        """Series with real scalar coefficients ``values``."""
        values = np.asarray(values)
        arr = np.zeros((len(values), 1 << n), dtype=values.dtype if values.dtype == object else float)
        if arr.dtype == object:
            arr[...] = 0
        arr[:, 0] = values
        return cls(arr, side)

    def coefficient(self, k: int) -> Multivector:
        return Multivector(self.coeffs[k])

    def evaluate(self, x):
        pts, was_para = as_points(x)
        n = self.dim
        if pts.shape[-1] != n + 1:
            raise DimensionError(f"R^{pts.shape[-1]} point for an R_{n} series")
        if pts.dtype == object or self.coeffs.dtype == object:
            return wrap(self._evaluate_exact(pts), was_para)
        u, v, j = slice_frame(pts)
        w = u + 1j * v
        powers = w[..., None] ** np.arange(self.trunc_degree + 1)
        re = powers.real @ self.coeffs
        im = powers.imag @ self.coeffs
        out = re + (gp(j, im) if self.side == "left" else gp(im, j))
        return wrap(out, was_para)

    def _evaluate_exact(self, pts):
        xs = embed_points(pts.astype(object))
        power = np.zeros_like(xs)
        power[...] = 0
        power[..., 0] = 1
        total = np.zeros(pts.shape[:-1] + (self.coeffs.shape[1],), dtype=object)
        total[...] = 0
        for k in range(self.trunc_degree + 1):
            a = self.coeffs[k]
            total = total + (gp(power, a) if self.side == "left" else gp(a, power))
            power = gp(power, xs)
        return total

    def __call__(self, x):
        return self.evaluate(x)


def exp_series(n: int, K: int, alpha=1.0, exact: bool = False) -> SliceSeries:
    """Taylor series of ``e^{alpha x}`` truncated at degree ``K``."""
    if exact:
        alpha = Fraction(alpha)
        vals = np.array([alpha**k / math.factorial(k) for k in range(K + 1)], dtype=object)
    else:
        vals = np.array([alpha**k / math.factorial(k) for k in range(K + 1)], dtype=float)
    return SliceSeries.real(n, vals)


def _convolve(a, b, cap):
    K = a.shape[0] + b.shape[0] - 2
    if cap is not None:
        K = min(K, cap)
    dtype = object if object in (a.dtype, b.dtype) else float
    out = np.zeros((K + 1, a.shape[1]), dtype=dtype)
    if dtype == object:
        out[...] = 0
    for ell in range(K + 1):
        for k in range(max(0, ell - b.shape[0] + 1), min(ell, a.shape[0] - 1) + 1):
            out[ell] = out[ell] + gp(a[k], b[ell - k])
    return out


def star_product_left(f: SliceSeries, g: SliceSeries, cap: int | None = None) -> SliceSeries:
    """Left star product: coefficient ``l`` is ``sum_{k<=l} a_k b_{l-k}``."""
    if f.dim != g.dim:
        raise DimensionError(f"R_{f.dim} and R_{g.dim} series")
    return SliceSeries(_convolve(f.coeffs, g.coeffs, cap), side="left")


def star_product_right(f: SliceSeries, g: SliceSeries, cap: int | None = None) -> SliceSeries:
    """Right star product of right series ``sum a_k x^k``."""
    if f.dim != g.dim:
        raise DimensionError(f"R_{f.dim} and R_{g.dim} series")
    return SliceSeries(_convolve(f.coeffs, g.coeffs, cap), side="right")


def slice_derivative_numeric(f, x, h: float = 1e-2):
    """Slice derivative of a left slice function: ``d/du`` along the real direction of the slice."""
    pts, was_para = as_points(x)
    pts = np.asarray(pts, dtype=float)
    direction = np.zeros(pts.shape[-1])
    direction[0] = 1.0
    out = derivative(lambda p: call_map(f, p), pts, direction, h)
    return wrap(out, was_para)


def cauchy_kernel_left(s, x, right: bool = False):
    """``S_L^{-1}(s, x) = -(x^2 - 2 Re(s) x + |s|^2)^{-1} (x - conj s)``.

    ``right=True`` returns ``S_R^{-1}(s, x) = -(x - conj s)(x^2 - 2 Re(s) x + |s|^2)^{-1}``.
    """
    sp, s_para = as_points(s)
    xp, x_para = as_points(x)
    sp, xp = np.broadcast_arrays(sp, xp)
    dt = object if object in (sp.dtype, xp.dtype) else float

    def arr(v):
        return np.asarray(v, dtype=dt)

    x0 = arr(xp[..., 0])
    xv = xp[..., 1:]
    s0 = arr(sp[..., 0])
    xv2 = arr(np.sum(xv * xv, axis=-1))
    s2 = arr(np.sum(sp * sp, axis=-1))
    q0 = arr(x0 * x0 - xv2 - 2 * s0 * x0 + s2)
    qv = arr(2 * x0 - 2 * s0)[..., None] * xv
    q2 = arr(q0 * q0 + np.sum(qv * qv, axis=-1))
    if q2.dtype == object:
        singular = np.asarray(q2 == 0)
    else:
        scale = np.maximum(s2, x0 * x0 + xv2)
        singular = q2 <= 1e-28 * scale * scale
    if singular.any():
        raise SingularityError("x lies on the sphere [s]; the Cauchy kernel is singular")
    q_inv = np.concatenate([q0[..., None], -qv], axis=-1)
    if q2.dtype == object:
        q_inv = q_inv * np.vectorize(recip, otypes=[object])(q2)[..., None]
    else:
        q_inv = q_inv / q2[..., None]
    diff = np.concatenate([arr(x0 - s0)[..., None], xv + sp[..., 1:]], axis=-1)
    a, b = embed_points(q_inv), embed_points(diff)
    out = -(gp(b, a) if right else gp(a, b))
    return wrap(out, s_para or x_para)


def cauchy_reconstruct(f, R: float, j, x, M: int = 512, dps: int | None = None):
    """Recover ``f(x)`` from values on the circle ``|s| = R`` of the slice ``C_j``.

    Trapezoid rule for ``(1/2pi) \\oint S_L^{-1}(s, x) ds_j f(s)``; with
    ``ds_j = -ds j = s dtheta`` this is ``(1/M) sum S_L^{-1}(s_m, x) s_m f(s_m)``.
    ``f`` maps a Paravector to a Multivector.  With ``dps`` set, nodes, kernel
    and sum are computed in mpmath at that many digits and ``f`` receives
    mpmath-valued paravectors.
    """
    jp = j if isinstance(j, Paravector) else Paravector.from_array(j)
    xp = x if isinstance(x, Paravector) else Paravector.from_array(x)
    if jp.dim != xp.dim:
        raise DimensionError("slice unit and point live in different dimensions")
    if M < 1:
        raise ValueError("M must be positive")
    if float(xp.norm()) >= R:
        raise DomainError(f"|x| = {float(xp.norm())} is not inside the circle of radius {R}")
    jv = np.array([float(t) for t in jp.xv])
    if abs(np.linalg.norm(jv) - 1) > 1e-12 or float(jp.x0) != 0:
        raise DomainError("j must be a unit purely imaginary paravector")
    xv = np.array([float(t) for t in xp.xv])
    xn = np.linalg.norm(xv)
    if xn > 0 and min(np.linalg.norm(xv / xn - jv), np.linalg.norm(xv / xn + jv)) > 1e-12:
        raise DomainError("x does not lie in the slice C_j")
    n = xp.dim
    if dps is None:
        theta = 2 * np.pi * np.arange(M) / M
        nodes = np.concatenate([R * np.cos(theta)[:, None], R * np.sin(theta)[:, None] * jv], axis=1)
        kern = cauchy_kernel_left(nodes, np.array([float(xp.x0), *xv]))
        values = np.stack([call_map(f, s) for s in nodes]).astype(float)
        terms = gp(gp(kern, embed_points(nodes)), values)
        return Multivector(terms.sum(axis=0) / M)
    with mpmath.workdps(dps):
        Rm = mpmath.mpf(R)
        jm = [_mp(t) for t in jp.xv]
        xm = np.array([_mp(xp.x0), *(_mp(t) for t in xp.xv)], dtype=object)
        total = np.zeros(1 << n, dtype=object)
        total[:] = mpmath.mpf(0)
        for m in range(M):
            th = 2 * mpmath.pi * m / M
            c, s_ = Rm * mpmath.cos(th), Rm * mpmath.sin(th)
            node = np.array([c, *(s_ * t for t in jm)], dtype=object)
            kern = cauchy_kernel_left(node, xm)
            val = call_map(f, node)
            total = total + gp(gp(kern, embed_points(node)), val)
        return Multivector(total / M)


def _mp(t):
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


@dataclass(frozen=True)
class GrowthFit:
    """Envelope ``|a_k| <= C_f b_f^k / k!``; ``k_sup`` is the index attaining ``b_f``."""

    C_f: float
    b_f: float
    k_sup: int = 0

    def envelope(self, k: int) -> float:
        return self.C_f * self.b_f**k / math.factorial(k)

    def tail_bound(self, r: float, K: int) -> float:
        """Bound on ``sum_{k>K} C_f (b_f r)^k / k!``."""
        t = self.b_f * r
        if t == 0:
            return 0.0
        return self.C_f * t ** (K + 1) / math.factorial(K + 1) * math.exp(t)


def coeff_growth_fit(S: SliceSeries) -> GrowthFit:
    """Smallest exponential-type envelope certified on the stored coefficients.

    ``b_f = max_k (|a_k| k!)^{1/k}`` over ``k >= 1`` (ties go to the largest
    ``k``) and ``C_f = max_k |a_k| k! / b_f^k``.
    """
    norms = [float(np.sqrt(sum(float(c) ** 2 for c in row))) for row in S.coeffs]
    b, k_sup = 0.0, 0
    for k in range(1, len(norms)):
        if norms[k] == 0:
            continue
        # logs avoid overflow in |a_k| k!
        r = math.exp((math.log(norms[k]) + math.lgamma(k + 1)) / k)
        if r >= b * (1 - 1e-12):
            b, k_sup = max(b, r), k
    if b == 0:
        return GrowthFit(norms[0], 0.0, 0)
    C = max(math.exp(math.log(a) + math.lgamma(k + 1) - k * math.log(b)) if a > 0 else 0.0 for k, a in enumerate(norms))
    return GrowthFit(C, b, k_sup)
