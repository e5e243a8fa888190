"""Property suites run by ``cliffosc verify``.

Each check reports a measured residual against a fixed tolerance.  The
suites are scaled-down versions of the test suite, sized to finish in well
under a minute together.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .clifford import Multivector, Paravector, embed_points, gp
from .combinatorics import MultiIndex, c_k_constant, multi_indices, perm_sum_e
from .fueter import fueter_eval, fueter_eval_direct, fueter_partial, monogenic_residual
from .monogenic import CliffordPolynomial, ck_extend, ck_product, fueter_polynomial, monogenic_exp
from .slice import cauchy_reconstruct, exp_paravector, exp_series, star_product_left
from .superosc import (
    SuperoscSpec,
    chebyshev_nodes,
    error_bound_slice,
    eval_FN_monogenic,
    eval_FN_slice,
    lagrange_coeffs,
    sample_ball,
    slice_limit,
)
from .supershift import (
    EntireSliceFn,
    FrequencyProfile,
    operator_V_slice,
    supershift_multifreq_slice,
    supershift_slice,
)

SUITES = ("clifford", "combinatorics", "fueter", "slice", "ck", "superosc", "supershift")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    residual: float
    tolerance: float
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.suite}.{self.name} residual={self.residual:.3e} "
            f"tol={self.tolerance:.1e} time={self.seconds:.2f}s"
        )


def _rand_mv(rng, n, lo=-3, hi=4):
    return Multivector([int(v) for v in rng.integers(lo, hi, 1 << n)])


def _rand_para(rng, n, lo=-3, hi=4):
    return Paravector(int(rng.integers(lo, hi)), tuple(int(v) for v in rng.integers(lo, hi, n)))


def _rational_point(rng, n):
    return Paravector(Fraction(int(rng.integers(-5, 6)), 3), tuple(Fraction(int(v), 4) for v in rng.integers(-5, 6, n)))


def _exact_mismatches(pairs) -> float:
    return float(sum(1 for lhs, rhs in pairs if lhs != rhs))


def _clifford(rng):
    cases = []
    for _ in range(200):
        n = int(rng.integers(1, 6))
        a, b, c = (_rand_mv(rng, n) for _ in range(3))
        cases.append((n, a, b, c))
    yield "associativity", _exact_mismatches(((a * b) * c, a * (b * c)) for _, a, b, c in cases), 0.0
    yield "distributivity", _exact_mismatches((a * (b + c), a * b + a * c) for _, a, b, c in cases), 0.0
    pairs = []
    for n in range(1, 6):
        for i in range(1, n + 1):
            ei = Multivector.blade(n, (i,))
            pairs.append((ei * ei, Multivector.scalar(n, -1)))
            for j in range(i + 1, n + 1):
                ej = Multivector.blade(n, (j,))
                pairs.append((ei * ej, -(ej * ei)))
    yield "generator relations", _exact_mismatches(pairs), 0.0
    paras = [_rand_para(rng, int(rng.integers(1, 6))) for _ in range(200)]
    yield "x xbar = |x|^2", _exact_mismatches((x * x.conj(), Multivector.scalar(x.dim, x.norm2())) for x in paras), 0.0


def _combinatorics(rng):
    pairs = []
    for n in range(1, 5):
        for k in range(7):
            total = Multivector.zero(n, exact=True)
            for m in multi_indices(n, k):
                total = total + perm_sum_e(m, method="recursive")
            pairs.append((total, c_k_constant(n, k)))
    yield "sum e'_m = c_k", _exact_mismatches(pairs), 0.0
    pairs = [
        (perm_sum_e(m, method="enumerate"), perm_sum_e(m, method="recursive"))
        for n in (2, 3)
        for k in range(6)
        for m in multi_indices(n, k)
    ]
    yield "enumeration = recursion", _exact_mismatches(pairs), 0.0
    pairs = [
        (perm_sum_e(m, ordered=True), perm_sum_e(m) * m.factorial) for n in (2, 3) for k in range(5) for m in multi_indices(n, k)
    ]
    yield "e_m = m! e'_m", _exact_mismatches(pairs), 0.0


def _fueter(rng):
    pairs = []
    for _ in range(20):
        n = int(rng.integers(1, 4))
        k = MultiIndex(int(v) for v in rng.multinomial(int(rng.integers(0, 5)), [1 / n] * n))
        x = _rational_point(rng, n)
        right = fueter_eval(k, x)
        pairs += [(right, fueter_eval(k, x, order="left")), (right, fueter_eval_direct(k, x))]
    yield "recursion orders and direct sum", _exact_mismatches(pairs), 0.0
    pairs = []
    for _ in range(20):
        n = int(rng.integers(1, 4))
        k = MultiIndex(int(v) for v in rng.multinomial(4, [1 / n] * n))
        x = _rational_point(rng, n)
        j = int(rng.integers(1, n + 1))
        poly = fueter_polynomial(k).derivative(j)
        pairs.append((fueter_partial(k, j, x), poly.evaluate(x)))
    yield "partial derivative formula", _exact_mismatches(pairs), 0.0
    worst = 0.0
    pts = sample_ball(3, 1.5, 64, seed=int(rng.integers(1 << 30)), structured=0)
    for k in [(1, 0, 0), (2, 1, 0), (1, 1, 1), (3, 0, 2)]:
        vals = fueter_eval(k, pts)
        norms = np.sqrt(np.sum(vals**2, axis=-1))
        worst = max(worst, float(np.max(norms - np.linalg.norm(pts, axis=1) ** sum(k))))
    yield "|P_k(x)| <= |x|^|k|", max(worst, 0.0), 1e-12
    worst = 0.0
    for k in [(1, 1), (2, 1, 0), (1, 2, 2)]:
        x = Paravector.from_array(rng.uniform(-0.7, 0.7, len(k) + 1))
        worst = max(worst, monogenic_residual(lambda y, k=k: fueter_eval(k, y), x))
    yield "monogenic residual", worst, 1e-6


def _slice(rng):
    n = 3
    pts = sample_ball(n, 2.0, 64, seed=int(rng.integers(1 << 30)), structured=0)
    err = float(np.max(np.abs(exp_series(n, 60).evaluate(pts) - embed_points(exp_paravector(pts)))))
    yield "exp series = closed form", err, 1e-12
    f = exp_series(n, 10, 0.5)
    g = exp_series(n, 10, 0.25)
    h = exp_series(n, 10, 0.75)
    err = float(np.max(np.abs(star_product_left(f, g, cap=10).coeffs - h.coeffs)))
    yield "real star product", err, 1e-15
    worst = 0.0
    for _ in range(5):
        j = rng.normal(size=n)
        j /= np.linalg.norm(j)
        x = Paravector(float(rng.uniform(-0.3, 0.3)), tuple(float(rng.uniform(-0.35, 0.35)) * j))
        rec = cauchy_reconstruct(exp_paravector, 1.0, Paravector(0.0, tuple(j)), x, M=512)
        worst = max(worst, float((rec - exp_paravector(x).embed()).norm()))
    yield "Cauchy reconstruction M=512", worst, 1e-8


def _ck(rng):
    pairs = []
    for n in (1, 2, 3):
        for k in range(5 if n == 3 else 7):
            for m in multi_indices(n, k):
                pairs.append((ck_extend(CliffordPolynomial.monomial(m)), fueter_polynomial(m)))
    yield "CK extension of monomials = Fueter polynomials", _exact_mismatches(pairs), 0.0
    prod = ck_product(monogenic_exp(0.7, 12, 3), monogenic_exp(-0.4, 12, 3))
    err = float(np.max(np.abs(prod.coeffs - monogenic_exp(0.3, 12, 3).coeffs)))
    yield "E(a) . E(b) = E(a+b)", err, 1e-12
    pts = sample_ball(3, 4 / 3, 32, seed=int(rng.integers(1 << 30)), structured=0)
    pts[:, 0] = 0
    vals = monogenic_exp(1.0, 40, 3).evaluate(pts)
    err = float(np.max(np.abs(vals - embed_points(exp_paravector(pts)))))
    yield "restriction of E = Euler form", err, 1e-10


def _superosc(rng):
    worst = 0.0
    for n in (4, 8, 12):
        h = chebyshev_nodes(n + 1)
        X = lagrange_coeffs(h, 2.5)
        for p in range(n + 1):
            worst = max(worst, abs(float(np.dot(X, h**p)) - 2.5**p) / 2.5**p)
    yield "Lagrange moment identities", worst, 1e-6
    pts = sample_ball(3, 2.0, 128, seed=int(rng.integers(1 << 30)))
    violations = 0
    for N in (4, 16, 64):
        spec = SuperoscSpec(N=N, a=2.0)
        err = np.linalg.norm(eval_FN_slice(spec, pts) - slice_limit(spec, pts), axis=-1)
        violations += int(np.sum(err > error_bound_slice(N, 2.0, pts)))
    yield "slice error bound violations", float(violations), 0.0
    spec = SuperoscSpec(N=8, a=2.0, setting="monogenic")
    small = sample_ball(3, 0.5, 16, seed=1, structured=0)
    a = eval_FN_monogenic(spec, small, 16, check=False)
    b = eval_FN_monogenic(spec, small, 16, check=False, method="direct")
    yield "monogenic moments = direct sum", float(np.max(np.abs(a - b))), 1e-10


def _supershift(rng):
    n = 3
    G = EntireSliceFn.exp(n, 40)
    worst = 0.0
    for _ in range(20):
        h = float(rng.uniform(-1, 1))
        x = rng.normal(size=n + 1)
        x *= rng.uniform(0, 2) / np.linalg.norm(x)
        f = exp_series(n, 40, h)
        direct = G.evaluate(h * x)
        worst = max(worst, float(np.max(np.abs(operator_V_slice(G, x, f, 40) - direct))))
    yield "operator V = direct", worst, 1e-10
    pts = sample_ball(n, 1.0, 0, structured=64)
    spec = SuperoscSpec(N=6, a=3.0, n=n, node_rule="custom", nodes=tuple(chebyshev_nodes(7)), coeff_rule="lagrange")
    err = float(np.max(np.abs(supershift_slice(EntireSliceFn.monomial(n, 1), spec, pts) - 3 * embed_points(pts))))
    yield "G(l) = l with Lagrange rule", err, 1e-9
    w = Multivector([1, 0, 0, 2, 0, 0, 0, 0]).to_float()
    weighted = SuperoscSpec(N=8, a=2.0, left_weight=w)
    plain = SuperoscSpec(N=8, a=2.0)
    B = EntireSliceFn.bessel(n)
    err = float(np.max(np.abs(supershift_slice(B, weighted, pts) - gp(w.coeffs, supershift_slice(B, plain, pts)))))
    yield "left linearity in Z_j", err, 1e-12
    ident = supershift_multifreq_slice(G, FrequencyProfile.identity(n), plain, pts)
    err = float(np.max(np.abs(ident - supershift_slice(G, plain, pts))))
    yield "identity profile reduction", err, 1e-12


_RUNNERS = {
    "clifford": _clifford,
    "combinatorics": _combinatorics,
    "fueter": _fueter,
    "slice": _slice,
    "ck": _ck,
    "superosc": _superosc,
    "supershift": _supershift,
}


def run_verify(suite: str = "all", seed: int = 0) -> list[CheckResult]:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        rng = np.random.default_rng(seed)
        gen = _RUNNERS[name](rng)
        while True:
            start = time.perf_counter()
            try:
                check, residual, tol = next(gen)
            except StopIteration:
                break
            elapsed = time.perf_counter() - start
            ok = math.isfinite(residual) and residual <= tol
            results.append(CheckResult(name, check, ok, residual, tol, elapsed))
    return results

