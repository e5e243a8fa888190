"""Acceptance criteria, one test each.

Every test prints ``criterion K: PASS|FAIL <title> [<checks>] time=.. budget=..``
and the lines are repeated in the terminal summary.  A criterion passes only
if every check holds and the run fits its time budget.
"""

import math
import time
from fractions import Fraction

import mpmath
import numpy as np

import oracles
from cliffosc.clifford import Multivector, Paravector, embed_points, gp
from cliffosc.combinatorics import MultiIndex, c_k_constant, multi_indices, perm_sum_e
from cliffosc.errors import CliffordError
from cliffosc.fueter import fueter_eval, fueter_eval_direct, fueter_partial, monogenic_residual
from cliffosc.harness import ExperimentConfig, render, run_convergence
from cliffosc.monogenic import CliffordPolynomial, FueterSeries, ck_extend, ck_product, monogenic_exp
from cliffosc.numdiff import derivative
from cliffosc.slice import cauchy_reconstruct, exp_paravector, exp_series
from cliffosc.superosc import (
    SuperoscSpec,
    chebyshev_nodes,
    error_bound_slice,
    eval_FN_monogenic,
    eval_FN_slice,
    fn_monogenic_series,
    lagrange_coeffs,
    magnitude_bound_monogenic,
    monogenic_limit,
    sample_ball,
    slice_limit,
    structured_points,
)
from cliffosc.supershift import (
    EntireMonogenicFn,
    EntireSliceFn,
    FrequencyProfile,
    monogenic_supershift_limit,
    multifreq_monogenic_limit,
    multifreq_slice_limit,
    operator_V_slice,
    slice_supershift_limit,
    supershift_monogenic,
    supershift_multifreq_monogenic,
    supershift_multifreq_slice,
    supershift_slice,
)


class Criterion:
    def __init__(self, number, title, budget, record):
        self.number, self.title, self.budget, self.record = number, title, budget, record
        self.checks = []

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def check(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))

    def __exit__(self, *exc):
        elapsed = time.perf_counter() - self.start
        self.check("time", elapsed < self.budget)
        ok = all(c[1] for c in self.checks) and exc[0] is None
        parts = ", ".join(f"{n}={'ok' if g else 'FAILED'}" + (f" ({d})" if d else "") for n, g, d in self.checks)
        self.record(
            f"criterion {self.number}: {'PASS' if ok else 'FAIL'} {self.title} "
            f"[{parts}] time={elapsed:.2f}s budget={self.budget}s"
        )
        self.passed = ok
        return False


def sup_err(a, b):
    return float(np.max(np.linalg.norm(np.asarray(a) - np.asarray(b), axis=-1)))


def ball(rng, n, count, R):
    x = rng.normal(size=(count, n + 1))
    return x * (R * rng.uniform(0, 1, count) ** (1 / (n + 1)) / np.linalg.norm(x, axis=1))[:, None]


# -- 1 ------------------------------------------------------------------------


def test_clifford_exactness(acceptance):
    rng = np.random.default_rng(1)
    with Criterion(1, "Clifford exactness", 5, acceptance) as c:
        assoc = distrib = anti = norm = True
        for case in range(1000):
            n = 1 + case % 5
            a, b, d = (Multivector([int(v) for v in rng.integers(-3, 4, 1 << n)]) for _ in range(3))
            assoc &= (a * b) * d == a * (b * d)
            distrib &= a * (b + d) == a * b + a * d and (a + b) * d == a * d + b * d
            i, j = rng.choice(np.arange(1, n + 1), 2, replace=n == 1)
            if i != j:
                ei, ej = Multivector.blade(n, (int(i),)), Multivector.blade(n, (int(j),))
                anti &= ei * ej == -(ej * ei)
            x = Paravector(Fraction(int(rng.integers(-9, 10)), 7), tuple(Fraction(int(t), 5) for t in rng.integers(-9, 10, n)))
            norm &= x * x.conj() == Multivector.scalar(n, x.norm2())
        c.check("associativity", assoc)
        c.check("distributivity", distrib)
        c.check("anticommutation", anti)
        c.check("x*conj(x)=|x|^2", norm)
    assert c.passed


# -- 2 ------------------------------------------------------------------------


def test_permutation_constant_identity(acceptance):
    with Criterion(2, "permutation-constant identity", 10, acceptance) as c:
        ok = True
        for n in range(1, 5):
            for k in range(7):
                total = Multivector.zero(n, exact=True)
                for m in multi_indices(n, k):
                    total = total + perm_sum_e(m)
                ok &= total == c_k_constant(n, k)
        c.check("sum e'_m = c_k (n<=4, k<=6)", ok)
    assert c.passed


# -- 3 ------------------------------------------------------------------------


def test_fueter_suite(acceptance):
    rng = np.random.default_rng(3)
    with Criterion(3, "Fueter suite", 30, acceptance) as c:
        # exact recursion orders and direct symmetrised sum, |k| <= 5
        exact = True
        for n in (1, 2, 3):
            for k in range(6):
                for m in multi_indices(n, k):
                    x = Paravector(Fraction(int(rng.integers(-5, 6)), 3), tuple(Fraction(int(t), 4) for t in rng.integers(-5, 6, n)))
                    right = fueter_eval(m, x)
                    exact &= right == fueter_eval(m, x, order="left") == fueter_eval_direct(m, x)
                    exact &= oracles.to_dict(right.coeffs) == oracles.fueter_direct(m, x.x0, x.xv)
        c.check("recursions=direct=oracle exactly", exact)

        worst = fd_worst = 0.0
        for _ in range(60):
            n = int(rng.integers(1, 4))
            m = MultiIndex(rng.multinomial(int(rng.integers(1, 6)), [1 / n] * n))
            x = rng.normal(size=n + 1)
            j = int(rng.integers(1, n + 1))
            formula = m[j - 1] * fueter_eval(m.minus(j), x) if m[j - 1] else np.zeros(1 << n)
            fd = derivative(lambda p: fueter_eval(m, p), x, np.eye(n + 1)[j])
            worst = max(worst, np.max(np.abs(fueter_partial(m, j, x) - formula)))
            fd_worst = max(fd_worst, np.max(np.abs(fd - formula)) / max(1.0, np.max(np.abs(formula))))
        c.check("d_j P_k = k_j P_(k-e_j)", worst <= 1e-12, f"{worst:.1e}")
        c.check("finite differences", fd_worst <= 1e-6, f"{fd_worst:.1e}")

        rel = 0.0
        for _ in range(40):
            n = int(rng.integers(1, 4))
            m = MultiIndex(rng.multinomial(int(rng.integers(0, 6)), [1 / n] * n))
            x, y = rng.normal(size=(2, n + 1))
            total = 0
            for i in np.ndindex(*(p + 1 for p in m)):
                j = tuple(p - t for p, t in zip(m, i))
                w = math.prod(math.comb(p, t) for p, t in zip(m, i))
                total = total + w * gp(fueter_eval(i, x), fueter_eval(j, y))
            lhs = fueter_eval(m, x + y)
            rel = max(rel, np.max(np.abs(lhs - total)) / max(1.0, np.max(np.abs(lhs))))
        c.check("binomial formula", rel <= 1e-11, f"{rel:.1e}")

        bound = True
        for _ in range(1000):
            n = int(rng.integers(1, 4))
            m = MultiIndex(rng.multinomial(int(rng.integers(0, 8)), [1 / n] * n))
            x = rng.normal(size=n + 1)
            bound &= np.linalg.norm(fueter_eval(m, x)) <= np.linalg.norm(x) ** m.order * (1 + 1e-12)
        c.check("|P_k(x)| <= |x|^|k| on 1000 points", bound)

        res = 0.0
        for n in (1, 2, 3):
            for k in range(1, 6):
                for m in multi_indices(n, k):
                    x = Paravector.from_array(rng.uniform(-1, 1, n + 1))
                    res = max(res, monogenic_residual(lambda p, m=m: fueter_eval(m, p), x))
        c.check("D P_k residual", res <= 1e-6, f"{res:.1e}")
    assert c.passed


# -- 4 ------------------------------------------------------------------------


def test_ck_engine(acceptance):
    rng = np.random.default_rng(4)
    with Criterion(4, "CK engine", 60, acceptance) as c:
        unique = True
        for n in (1, 2, 3):
            for k in range(7):
                for m in multi_indices(n, k):
                    lam = Multivector.blade(n, (n,)) * Fraction(k + 2, 5) + Multivector.scalar(n, Fraction(1, k + 1))
                    unique &= ck_extend(CliffordPolynomial.monomial(m, lam)) == FueterSeries(n, k, {m: lam}).to_polynomial()
        c.check("extension = Fueter series (deg<=6)", unique)

        n, K = 3, 24
        prod = ck_product(monogenic_exp(0.9, K, n), monogenic_exp(-0.4, K, n))
        E = monogenic_exp(0.5, K, n)
        pts = ball(rng, n, 20, 1.0)
        err = sup_err(prod(pts), E(pts))
        c.check("E(a)(.)E(b)=E(a+b)", err <= 1e-8, f"{err:.1e}")

        worst = 0.0
        for _ in range(40):
            n = int(rng.integers(1, 4))
            E = monogenic_exp(1.0, 40, n)
            v = rng.normal(size=n)
            v *= rng.uniform(0, 4) / (n * np.linalg.norm(v))
            x = np.concatenate([[0.0], v])
            worst = max(worst, np.max(np.abs(E(x) - oracles.euler_exp(x))))
        c.check("restriction = Euler", worst <= 1e-10, f"{worst:.1e}")
    assert c.passed


# -- 5 ------------------------------------------------------------------------


def test_slice_cauchy_reconstruction(acceptance):
    rng = np.random.default_rng(5)
    with Criterion(5, "slice Cauchy reconstruction", 5, acceptance) as c:
        worst = 0.0
        for _ in range(5):
            jv = rng.normal(size=3)
            jv /= np.linalg.norm(jv)
            r, phi = 0.5 * np.sqrt(rng.uniform()), rng.uniform(0, 2 * np.pi)
            x = np.concatenate([[r * np.cos(phi)], r * np.sin(phi) * jv])
            got = cauchy_reconstruct(exp_paravector, 1.0, np.concatenate([[0.0], jv]), x, M=512)
            worst = max(worst, np.max(np.abs(got.coeffs - embed_points(exp_paravector(x)))))
        c.check("M=512 error <= 1e-8", worst <= 1e-8, f"{worst:.1e}")

        # doubles saturate near 1e-16 before M=64, so the decay is measured at 50 digits
        x = Paravector(Fraction(3, 10), (Fraction(2, 5), 0))
        j = np.array([0.0, 1.0, 0.0])
        errs = []
        with mpmath.workdps(50):
            ref = exp_paravector(Paravector(mpmath.mpf(3) / 10, (mpmath.mpf(2) / 5, mpmath.mpf(0)))).embed().coeffs
            for M in (64, 128):
                got = cauchy_reconstruct(exp_paravector, 1.0, j, x, M=M, dps=50)
                errs.append(float(max(abs(g - e) for g, e in zip(got.coeffs, ref))))
        c.check("error shrinks >= 10x (M=64->128)", errs[1] * 10 <= errs[0], f"{errs[0]:.1e} -> {errs[1]:.1e}")
    assert c.passed


# -- 6 ------------------------------------------------------------------------


def test_superoscillation_slice(acceptance):
    with Criterion(6, "superoscillation (slice)", 30, acceptance) as c:
        violations, ratios = 0, []
        for n in (2, 3):
            pts = sample_ball(n, 2.0, 512, seed=0)
            for a in (1.5, 2.0, 3.0):
                errs = []
                for N in (4, 8, 16, 32, 64):
                    spec = SuperoscSpec(N, a, n=n)
                    err = np.linalg.norm(eval_FN_slice(spec, pts) - slice_limit(spec, pts), axis=1)
                    violations += int(np.sum(err > error_bound_slice(N, a, pts)))
                    errs.append(float(np.max(err)))
                ratios += [errs[i] / errs[i + 1] for i in range(1, len(errs) - 1)]
        c.check("zero bound violations", violations == 0, f"{violations}")
        inside = all(1.6 <= r <= 2.4 for r in ratios)
        c.check("ratios in [1.6, 2.4] for N>=8", inside, f"{min(ratios):.3f}..{max(ratios):.3f}")
    assert c.passed


# -- 7 ------------------------------------------------------------------------


def test_superoscillation_monogenic(acceptance):
    rng = np.random.default_rng(7)
    with Criterion(7, "superoscillation (monogenic)", 120, acceptance) as c:
        n, K = 3, 24
        pts = ball(rng, n, 64, 0.5)
        agree = 0.0
        for N in range(1, 9):
            spec = SuperoscSpec(N, 2.0, n=n)
            s, p = fn_monogenic_series(spec, K), fn_monogenic_series(spec, K, form="power")
            agree = max(agree, sup_err(s(pts), p(pts)) / max(1.0, float(np.max(np.abs(s(pts))))))
        c.check("sum = power form", agree <= 1e-8, f"{agree:.1e}")

        wide = ball(rng, n, 200, 1.0)
        vals = eval_FN_monogenic(SuperoscSpec(8, 2.0, n=n), wide, K)
        ok = np.all(np.linalg.norm(vals, axis=1) <= magnitude_bound_monogenic(2.0, n, wide))
        c.check("|F_N| <= exp((alpha+1) n |x|)", ok)

        errs = {}
        for N in (4, 32):
            spec = SuperoscSpec(N, 2.0, n=n)
            errs[N] = sup_err(eval_FN_monogenic(spec, pts, K), monogenic_limit(spec, pts, K))
        c.check("err(32) < err(4)/4", errs[32] < errs[4] / 4, f"{errs[4]:.3e} -> {errs[32]:.3e}")
    assert c.passed


# -- 8 ------------------------------------------------------------------------


def _convergence(evaluate, limit):
    try:
        e8 = sup_err(evaluate(8), limit(8))
        e64 = sup_err(evaluate(64), limit(64))
    except CliffordError as exc:
        return False, f"{type(exc).__name__}"
    return e64 < e8 / 4, f"{e8:.3g} -> {e64:.3g}"


def test_supershift(acceptance):
    rng = np.random.default_rng(8)
    with Criterion(8, "supershift", 120, acceptance) as c:
        G = EntireSliceFn.bessel(3, 60)
        worst = 0.0
        for _ in range(100):
            h = float(rng.uniform(-1, 1))
            x = rng.normal(size=4)
            x *= rng.uniform(0, 2) / np.linalg.norm(x)
            worst = max(worst, np.max(np.abs(operator_V_slice(G, x, exp_series(3, 60, alpha=h), 60) - G(h * x))))
        c.check("V_slice = direct G(hx)", worst <= 1e-10, f"{worst:.1e}")

        a = 2.0
        cubic = {n: FrequencyProfile.power(n, 3) for n in (2, 3)}
        for n in (2, 3):
            pts = structured_points(n, 1.0, 64)

            def spec(N, n=n):
                return SuperoscSpec(N, a, n=n)

            for name, Gs, Gm in (
                ("exp", EntireSliceFn.exp(n), EntireMonogenicFn.exp(n, 30)),
                ("bessel", EntireSliceFn.bessel(n), EntireMonogenicFn.bessel(n, 30)),
            ):
                cases = {
                    "slice": (
                        lambda N, Gs=Gs, spec=spec, pts=pts: supershift_slice(Gs, spec(N), pts),
                        lambda N, Gs=Gs, spec=spec, pts=pts: slice_supershift_limit(Gs, spec(N), pts),
                    ),
                    "multifreq-slice": (
                        lambda N, Gs=Gs, spec=spec, pts=pts, n=n: supershift_multifreq_slice(Gs, cubic[n], spec(N), pts),
                        lambda N, Gs=Gs, spec=spec, pts=pts, n=n: multifreq_slice_limit(Gs, cubic[n], spec(N), pts),
                    ),
                    "monogenic": (
                        lambda N, Gm=Gm, spec=spec, pts=pts: supershift_monogenic(Gm, spec(N), pts),
                        lambda N, Gm=Gm, spec=spec, pts=pts: monogenic_supershift_limit(Gm, spec(N), pts),
                    ),
                    "multifreq-monogenic": (
                        lambda N, Gm=Gm, spec=spec, pts=pts, n=n: supershift_multifreq_monogenic(Gm, cubic[n], spec(N), pts),
                        lambda N, Gm=Gm, spec=spec, pts=pts, n=n: multifreq_monogenic_limit(Gm, cubic[n], spec(N), pts),
                    ),
                }
                for label, (ev, lim) in cases.items():
                    ok, detail = _convergence(ev, lim)
                    c.check(f"{label} n={n} G={name} err(64)<err(8)/4", ok, detail)

        nodes = (-1.0, -0.5, 0.0, 0.5, 1.0)
        lag = SuperoscSpec(4, 3.0, n=2, node_rule="custom", coeff_rule="lagrange", nodes=nodes)
        pts = structured_points(2, 1.0, 64)
        exact = sup_err(supershift_slice(EntireSliceFn.monomial(2, 1), lag, pts), embed_points(3.0 * pts))
        c.check("G=lambda with Lagrange rule", exact <= 1e-9, f"{exact:.1e}")
    assert c.passed


# -- 9 ------------------------------------------------------------------------


def test_lagrange_coefficients(acceptance):
    with Criterion(9, "Lagrange coefficients", 1, acceptance) as c:
        worst = 0.0
        for n in range(1, 13):
            h = chebyshev_nodes(n + 1)
            for a in (1.5, 2.0, 3.0):
                X = lagrange_coeffs(h, a)
                for p in range(n + 1):
                    worst = max(worst, abs(X @ h**p - a**p) / a**p)
        c.check("moment identities (n<=12)", worst <= 1e-6, f"{worst:.1e}")
    assert c.passed


# -- 10 -----------------------------------------------------------------------


def test_determinism(acceptance):
    with Criterion(10, "determinism", 60, acceptance) as c:
        cfg = ExperimentConfig(n=3, a=2.0, Ns=(8, 16, 32, 64), grid=128, seed=11)
        first = render(run_convergence(cfg))
        second = render(run_convergence(cfg))
        single = render(run_convergence(ExperimentConfig(**{**cfg.to_dict(), "threads": 1})))
        c.check("byte-identical CSV", first == second)
        c.check("independent of threads", first == single)
    assert c.passed
