"""Dense multivectors and paravectors in the Clifford algebra R_n.

The generators satisfy e_i**2 = -1 and e_i e_j = -e_j e_i.  A multivector is
stored as 2**n coefficients; position ``b`` holds the blade e_A where A is the
set of bits of ``b`` (bit ``i - 1`` stands for e_i, position 0 is the scalar).

Two scalar kinds share one representation: ``float64`` arrays for numerical
work and ``object`` arrays holding ``int``/``Fraction`` (exact) or ``mpmath``
numbers (extended precision).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import mpmath
import numpy as np

from .errors import DimensionError, SingularityError

MAX_DIM = 8


def blade_sign(a: int, b: int) -> int:
    """Sign of e_a e_b relative to e_(a^b) for blade bitmasks ``a`` and ``b``."""
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    swaps += bin(a & b).count("1")  # e_i e_i = -1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def blade_tables(n: int):
    """Index and sign tables: ``e_i * e_idx[k, i] = sgn[k, i] * e_k``."""
    size = 1 << n
    idx = np.empty((size, size), dtype=np.intp)
    sgn = np.empty((size, size), dtype=np.int64)
    for k in range(size):
        for i in range(size):
            j = i ^ k
            idx[k, i] = j
            sgn[k, i] = blade_sign(i, j)
    idx.flags.writeable = False
    sgn.flags.writeable = False
    return idx, sgn


def dim_of(size: int) -> int:
    n = size.bit_length() - 1
    if size != 1 << n or not 1 <= n <= MAX_DIM:
        raise DimensionError(f"{size} coefficients do not describe R_n with 1 <= n <= {MAX_DIM}")
    return n


def gp(a, b):
    """Geometric product of coefficient arrays, broadcasting over leading axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    size = a.shape[-1]
    if b.shape[-1] != size:
        raise DimensionError(f"cannot multiply {size} and {b.shape[-1]} blade arrays")
    idx, sgn = blade_tables(dim_of(size))
    shape = np.broadcast_shapes(a.shape, b.shape)
    dtype = object if object in (a.dtype, b.dtype) else np.result_type(a.dtype, b.dtype, float)
    out = np.zeros(shape, dtype=dtype)
    for i in range(size):
        ai = a[..., i : i + 1]
        if not ai.any():
            continue
        out = out + ai * (sgn[:, i] * b[..., idx[:, i]])
    return out


def _coerce(values):
    arr = np.array(values)
    if arr.dtype.kind in "iub":
        arr = np.array([int(v) for v in arr.ravel()], dtype=object).reshape(arr.shape)
    elif arr.dtype.kind == "f":
        arr = arr.astype(np.float64)
    elif arr.dtype.kind != "O":
        raise TypeError(f"unsupported coefficient dtype {arr.dtype}")
    return arr


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def recip(value):
    """``1 / value``, exact for ints and Fractions."""
    return Fraction(1) / value if is_exact(value) else 1 / value


def sqrt_scalar(value):
    """Square root that stays exact for rational perfect squares."""
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return mpmath.sqrt(value)
    if is_exact(value):
        q = Fraction(value)
        if q >= 0:
            rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
            if rn * rn == q.numerator and rd * rd == q.denominator:
                return Fraction(rn, rd)
        return math.sqrt(q)
    return math.sqrt(value)


class Multivector:
    """Element of R_n given by its 2**n blade coefficients.

    Instances are immutable; arithmetic returns new objects.

    >>> e1, e2 = Multivector.blade(2, (1,)), Multivector.blade(2, (2,))
    >>> e1 * e2 == -(e2 * e1)
    True
    """

    __slots__ = ("coeffs",)
    __array_priority__ = 100

    def __init__(self, coeffs):
        arr = _coerce(coeffs)
        if arr.ndim != 1:
            raise DimensionError("multivector coefficients must be one-dimensional")
        dim_of(arr.size)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # construction
    @classmethod
    def zero(cls, n, exact=False):
        return cls(np.zeros(1 << n, dtype=object if exact else float) + (0 if exact else 0.0))

    @classmethod
    def scalar(cls, n, value):
        c = np.zeros(1 << n, dtype=object if not isinstance(value, float) else float)
        if c.dtype == object:
            c[:] = 0
        c[0] = value
        return cls(c)

    @classmethod
    def blade(cls, n, indices=(), value=1):
        """Product ``value * e_{i1} e_{i2} ...`` taken in the order given."""
        out = cls.scalar(n, value)
        for i in indices:
            if not 1 <= i <= n:
                raise DimensionError(f"generator e_{i} does not exist in R_{n}")
            c = np.zeros(1 << n, dtype=object)
            c[:] = 0
            c[1 << (i - 1)] = 1
            out = out * cls(c)
        return out

    # basic properties
    @property
    def dim(self) -> int:
        return self.coeffs.size.bit_length() - 1

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def __getitem__(self, blade):
        if isinstance(blade, tuple):
            blade = sum(1 << (i - 1) for i in blade)
        return self.coeffs[blade]

    def scalar_part(self):
        return self.coeffs[0]

    def grade(self, r: int) -> "Multivector":
        mask = np.array([bin(b).count("1") == r for b in range(self.coeffs.size)])
        c = self.coeffs.copy()
        c[~mask] = 0
        return Multivector(c)

    def norm2(self):
        return sum(v * v for v in self.coeffs) if self.exact else float(np.dot(self.coeffs, self.coeffs))

    def norm(self):
        return sqrt_scalar(self.norm2())

    def is_paravector(self, tol=0) -> bool:
        rest = [abs(v) for b, v in enumerate(self.coeffs) if bin(b).count("1") > 1]
        return all(v <= tol for v in rest)

    def to_float(self) -> "Multivector":
        return Multivector(np.array([float(v) for v in self.coeffs]))

    def allclose(self, other, rtol=1e-12, atol=0.0) -> bool:
        diff = (self - other).to_float().coeffs
        scale = max(np.abs(self.to_float().coeffs).max(), np.abs(_as_mv(other, self.dim).to_float().coeffs).max())
        return bool(np.abs(diff).max() <= atol + rtol * scale)

    # arithmetic
    def _check(self, other):
        if other.dim != self.dim:
            raise DimensionError(f"R_{self.dim} and R_{other.dim} operands")

    def __add__(self, other):
        other = _as_mv(other, self.dim)
        self._check(other)
        return Multivector(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_mv(other, self.dim)
        self._check(other)
        return Multivector(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return _as_mv(other, self.dim) - self

    def __neg__(self):
        return Multivector(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return Multivector(gp(self.coeffs, other.coeffs))
        if isinstance(other, Paravector):
            return self * other.embed()
        if isinstance(other, (Number, mpmath.mpf)):
            return Multivector(self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Paravector):
            return other.embed() * self
        if isinstance(other, (Number, mpmath.mpf)):
            return Multivector(other * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (Number, mpmath.mpf)):
            if self.exact and is_exact(other):
                return Multivector(np.array([Fraction(v) / other for v in self.coeffs], dtype=object))
            return Multivector(self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Paravector):
            other = other.embed()
        if isinstance(other, (Number, mpmath.mpf)):
            other = Multivector.scalar(self.dim, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.dim == other.dim and all(x == y for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def __repr__(self):
        fmt = repr if self.exact else (lambda v: format(float(v), ".17g"))
        terms = [f"{fmt(v)}*{blade_label(b)}" for b, v in enumerate(self.coeffs) if v != 0]
        return f"Multivector(R_{self.dim}: {' + '.join(terms) or '0'})"


def blade_label(b: int) -> str:
    if b == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(b.bit_length()) if b >> i & 1)


def _as_mv(value, n) -> Multivector:
    if isinstance(value, Multivector):
        return value
    if isinstance(value, Paravector):
        return value.embed()
    return Multivector.scalar(n, value)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Clifford product ``a b``; raises :class:`DimensionError` on mismatch."""
    if a.dim != b.dim:
        raise DimensionError(f"R_{a.dim} and R_{b.dim} operands")
    return a * b


@dataclass(frozen=True)
class Paravector:
    """Point ``x0 + x1 e1 + ... + xn en`` of R^{n+1}."""

    x0: object
    xv: tuple

    def __post_init__(self):
        object.__setattr__(self, "xv", tuple(self.xv))
        if not 1 <= len(self.xv) <= MAX_DIM:
            raise DimensionError(f"paravector needs 1..{MAX_DIM} imaginary parts")

    @classmethod
    def from_array(cls, arr):
        arr = arr.tolist() if isinstance(arr, np.ndarray) else list(arr)
        return cls(arr[0], tuple(arr[1:]))

    @classmethod
    def from_multivector(cls, mv: Multivector, tol=0):
        if not mv.is_paravector(tol):
            raise ValueError("multivector has components of grade >= 2")
        c = mv.coeffs
        return cls(c[0], tuple(c[1 << i] for i in range(mv.dim)))

    @property
    def dim(self) -> int:
        return len(self.xv)

    @property
    def vector(self) -> "Paravector":
        zero = 0 if is_exact(self.x0) else type(self.x0)(0) if isinstance(self.x0, mpmath.mpf) else 0.0
        return Paravector(zero, self.xv)

    def as_array(self) -> np.ndarray:
        return _coerce([self.x0, *self.xv])

    def embed(self) -> Multivector:
        vals = self.as_array()
        c = np.zeros(1 << self.dim, dtype=vals.dtype)
        if c.dtype == object:
            c[:] = 0
        c[0] = vals[0]
        for i in range(self.dim):
            c[1 << i] = vals[i + 1]
        return Multivector(c)

    def conj(self) -> "Paravector":
        return Paravector(self.x0, tuple(-v for v in self.xv))

    def norm2(self):
        return self.x0 * self.x0 + sum(v * v for v in self.xv)

    def norm(self):
        return sqrt_scalar(self.norm2())

    def __add__(self, other):
        if isinstance(other, Paravector):
            return Paravector(self.x0 + other.x0, tuple(a + b for a, b in zip(self.xv, other.xv, strict=True)))
        if isinstance(other, (Number, mpmath.mpf)):
            return Paravector(self.x0 + other, self.xv)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Paravector(-self.x0, tuple(-v for v in self.xv))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Number, mpmath.mpf)):
            return Paravector(self.x0 * other, tuple(v * other for v in self.xv))
        if isinstance(other, (Paravector, Multivector)):
            return self.embed() * other
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Number, mpmath.mpf)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if is_exact(other) and is_exact(self.x0) and all(map(is_exact, self.xv)):
            return Paravector(Fraction(self.x0) / other, tuple(Fraction(v) / other for v in self.xv))
        return Paravector(self.x0 / other, tuple(v / other for v in self.xv))


def paravector_inverse(x: Paravector) -> Paravector:
    """``x^{-1} = conj(x) / |x|^2``."""
    r2 = x.norm2()
    if r2 == 0:
        raise SingularityError("the zero paravector has no inverse")
    return x.conj() / r2


def slice_split(x: Paravector):
    """Return ``(u, v, j)`` with ``x = u + j v``, ``v >= 0``; ``j`` is None on the real axis."""
    v = sqrt_scalar(sum(t * t for t in x.xv))
    if v == 0:
        return x.x0, v, None
    return x.x0, v, Paravector(0, x.xv) / v if not is_exact(v) else Paravector(0, tuple(Fraction(t) / v for t in x.xv))


# -- array helpers ---------------------------------------------------------
# Batched routines take points of shape (..., n+1) and return blade arrays of
# shape (..., 2**n).


def embed_points(points) -> np.ndarray:
    points = np.asarray(points)
    n = points.shape[-1] - 1
    out = np.zeros(points.shape[:-1] + (1 << n,), dtype=points.dtype)
    out[..., 0] = points[..., 0]
    for i in range(n):
        out[..., 1 << i] = points[..., i + 1]
    return out


def project_points(values) -> np.ndarray:
    values = np.asarray(values)
    n = dim_of(values.shape[-1])
    return values[..., [0] + [1 << i for i in range(n)]]


def as_points(x):
    """Normalise a Paravector or array-like to ``(points, was_paravector)``."""
    if isinstance(x, Paravector):
        return x.as_array(), True
    arr = np.asarray(x)
    if arr.dtype.kind in "iub":
        arr = arr.astype(float)
    return arr, False


def call_map(f, point) -> np.ndarray:
    """Call a Paravector -> Multivector map on a point array and return blade coefficients."""
    point = np.asarray(point)
    n = point.shape[-1] - 1
    out = f(Paravector.from_array(point))
    if isinstance(out, Multivector):
        return out.coeffs
    if isinstance(out, Paravector):
        return out.embed().coeffs
    if np.ndim(out) == 0:
        arr = np.zeros(1 << n, dtype=np.result_type(type(out), float) if not isinstance(out, complex) else complex)
        arr[0] = out
        return arr
    out = np.asarray(out)
    if out.shape[-1] == n + 1:
        return embed_points(out)
    return out



def wrap(values, was_paravector):
    return Multivector(values) if was_paravector else values


def slice_frame(points):
    """Batched slice decomposition: ``u``, ``v >= 0`` and the embedded unit ``j``.

    Real points get ``j = e1``; every slice contains them.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[-1] - 1
    u = points[..., 0]
    vec = points[..., 1:]
    v = np.sqrt(np.sum(vec * vec, axis=-1))
    safe = np.where(v > 0, v, 1.0)
    unit = vec / safe[..., None]
    unit[v == 0] = 0.0
    unit[..., 0] = np.where(v == 0, 1.0, unit[..., 0])
    j = np.zeros(points.shape[:-1] + (1 << n,))
    for i in range(n):
        j[..., 1 << i] = unit[..., i]
    return u, v, j


def lift(re, im, j):
    """Assemble ``re + j im`` for blade arrays ``re``, ``im`` and unit ``j``."""
    return re + gp(j, im)
