"""Convergence experiments and their CSV/JSON emission."""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .clifford import MAX_DIM, Paravector
from .errors import CliffordError, ConfigError
from .slice import cauchy_reconstruct, exp_paravector
from .superosc import (
    MAX_MONOGENIC_K,
    SuperoscSpec,
    error_bound_slice,
    eval_FN_monogenic,
    eval_FN_slice,
    monogenic_limit,
    sample_ball,
    slice_limit,
)
from .supershift import (
    EntireMonogenicFn,
    EntireSliceFn,
    FrequencyProfile,
    monogenic_supershift_limit,
    multifreq_monogenic_limit,
    multifreq_slice_limit,
    slice_supershift_limit,
    supershift_monogenic,
    supershift_multifreq_monogenic,
    supershift_multifreq_slice,
    supershift_slice,
)

SETTINGS = ("slice", "monogenic", "supershift-slice", "supershift-monogenic")
TARGETS = ("exp", "bessel", "taylor-file")
FORMATS = ("csv", "json")
COLUMNS = ("N", "sup_error", "bound", "a1_error", "wall_ms")
CHUNK = 16  # points per work unit; fixed so results do not depend on the thread count


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 3
    a: float = 2.0
    Ns: tuple = (8, 16, 32, 64)
    setting: str = "slice"
    radius: float = 1.0
    grid: int = 64
    sigma: float = 3.0
    target: str = "exp"
    taylor_file: str | None = None
    profile: str | None = None
    rule: str = "binomial"
    K: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    threads: int | None = None
    timing: bool = False

    def __post_init__(self):
        object.__setattr__(self, "Ns", tuple(self.Ns))
        _validate(self)

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in names:
                raise ConfigError(key, "unknown configuration key")
        return cls(**data)

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "ExperimentConfig":
        data = read_config_file(path)
        data.update(overrides or {})
        return cls.from_mapping(data)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["Ns"] = list(self.Ns)
        return d

    @property
    def truncation(self) -> int:
        """``K`` for Fueter series, ``S`` for slice Taylor series."""
        if self.K is not None:
            return self.K
        if self.setting == "monogenic":
            return 24
        if self.setting == "supershift-monogenic":
            return MAX_MONOGENIC_K
        return 100

    def effective_threads(self) -> int:
        if self.threads is not None:
            return self.threads
        env = os.environ.get("CLIFFOSC_THREADS")
        if env:
            try:
                value = int(env)
            except ValueError:
                raise ConfigError("CLIFFOSC_THREADS", f"not an integer: {env!r}") from None
            if value < 1:
                raise ConfigError("CLIFFOSC_THREADS", "must be at least 1")
            return value
        return os.cpu_count() or 1


def read_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("config", f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path}: expected a JSON object")
    return data


def _is_int(v) -> bool:
    return isinstance(v, (int, np.integer)) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) and math.isfinite(v)


def _validate(c: ExperimentConfig) -> None:
    if not _is_int(c.n) or not 1 <= c.n <= MAX_DIM:
        raise ConfigError("n", f"must be an integer in 1..{MAX_DIM}")
    if not _is_real(c.a):
        raise ConfigError("a", "must be a finite real number")
    if not c.Ns or not all(_is_int(N) and N >= 1 for N in c.Ns):
        raise ConfigError("Ns", "must be a non-empty list of positive integers")
    if any(p >= q for p, q in zip(c.Ns, c.Ns[1:])):
        raise ConfigError("Ns", "must be strictly increasing")
    if c.setting not in SETTINGS:
        raise ConfigError("setting", f"must be one of {', '.join(SETTINGS)}")
    if not _is_real(c.radius) or c.radius <= 0:
        raise ConfigError("radius", "must be positive")
    if not _is_int(c.grid) or c.grid < 1:
        raise ConfigError("grid", "must be a positive integer")
    if not _is_real(c.sigma) or c.sigma <= 0:
        raise ConfigError("sigma", "must be positive")
    if c.target not in TARGETS:
        raise ConfigError("target", f"must be one of {', '.join(TARGETS)}")
    if c.target == "taylor-file" and not c.taylor_file:
        raise ConfigError("taylor_file", "required when target is taylor-file")
    if c.target == "taylor-file" and c.setting != "supershift-slice":
        raise ConfigError("target", "taylor-file targets are supported for supershift-slice only")
    if c.rule not in ("binomial", "lagrange"):
        raise ConfigError("rule", "must be binomial or lagrange")
    if c.profile is not None:
        try:
            parse_profile(c.profile, c.n)
        except (ValueError, CliffordError) as exc:
            raise ConfigError("profile", str(exc)) from None
        if not c.setting.startswith("supershift"):
            raise ConfigError("profile", "frequency profiles apply to supershift settings only")
    if c.K is not None:
        if not _is_int(c.K) or c.K < 0:
            raise ConfigError("K", "must be a non-negative integer")
        if c.setting in ("monogenic", "supershift-monogenic") and c.K > MAX_MONOGENIC_K:
            raise ConfigError("K", f"must not exceed {MAX_MONOGENIC_K} in the monogenic settings")
    if not _is_int(c.seed) or c.seed < 0:
        raise ConfigError("seed", "must be a non-negative integer")
    if c.format not in FORMATS:
        raise ConfigError("format", "must be csv or json")
    if c.threads is not None and (not _is_int(c.threads) or c.threads < 1):
        raise ConfigError("threads", "must be a positive integer")
    if not isinstance(c.timing, bool):
        raise ConfigError("timing", "must be true or false")


def parse_profile(text: str, n: int) -> FrequencyProfile:
    """``identity``, ``cubic``, ``power:P`` or a JSON list of ``n + 1`` coefficient lists."""
    text = text.strip()
    if text == "identity":
        return FrequencyProfile.identity(n)
    if text == "cubic":
        return FrequencyProfile.power(n, 3)
    if text.startswith("power:"):
        p = int(text.split(":", 1)[1])
        if p < 0:
            raise ValueError("power must be non-negative")
        return FrequencyProfile.power(n, p)
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        raise ValueError(f"unrecognised profile {text!r}") from None
    if not isinstance(rows, list) or len(rows) != n + 1:
        raise ValueError(f"profile needs {n + 1} coefficient lists")
    width = max(len(r) for r in rows)
    return FrequencyProfile([list(r) + [0.0] * (width - len(r)) for r in rows])


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    sup_error: float
    bound: float
    a1_error: float
    wall_ms: int = 0


def experiment_grid(config: ExperimentConfig) -> np.ndarray:
    """``min(grid, 64)`` structured points plus Sobol samples up to ``grid`` points."""
    structured = min(config.grid, 64)
    return sample_ball(config.n, config.radius, config.grid - structured, config.seed, structured)


def _evaluators(config: ExperimentConfig):
    """Functions ``(spec, pts) -> (F_N values, limit values)``."""
    K = config.truncation
    setting = config.setting
    profile = parse_profile(config.profile, config.n) if config.profile else None
    if setting == "slice":
        return lambda spec, pts: (eval_FN_slice(spec, pts), slice_limit(spec, pts))
    if setting == "monogenic":
        return lambda spec, pts: (eval_FN_monogenic(spec, pts, K), monogenic_limit(spec, pts, K))
    if setting == "supershift-slice":
        if config.target == "taylor-file":
            G = EntireSliceFn.from_taylor_file(config.taylor_file, config.n)
        else:
            G = getattr(EntireSliceFn, config.target)(config.n, K)
        if profile is None:
            return lambda spec, pts: (supershift_slice(G, spec, pts), slice_supershift_limit(G, spec, pts))
        return lambda spec, pts: (
            supershift_multifreq_slice(G, profile, spec, pts),
            multifreq_slice_limit(G, profile, spec, pts),
        )
    G = getattr(EntireMonogenicFn, config.target)(config.n, K)
    if profile is None:
        return lambda spec, pts: (supershift_monogenic(G, spec, pts), monogenic_supershift_limit(G, spec, pts))
    return lambda spec, pts: (
        supershift_multifreq_monogenic(G, profile, spec, pts),
        multifreq_monogenic_limit(G, profile, spec, pts),
    )


def _map_chunks(fn, pts, threads: int):
    chunks = [pts[i : i + CHUNK] for i in range(0, len(pts), CHUNK)]
    if threads <= 1 or len(chunks) <= 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, chunks))
    return np.concatenate(parts)


def _spec(config: ExperimentConfig, N: int) -> SuperoscSpec:
    setting = "monogenic" if "monogenic" in config.setting else "slice"
    if config.rule == "lagrange":
        return SuperoscSpec(N=N, a=config.a, n=config.n, coeff_rule="lagrange", setting=setting)
    return SuperoscSpec(N=N, a=config.a, n=config.n, setting=setting)


def run_convergence(config: ExperimentConfig) -> list[ConvergenceRow]:
    """One row per ``N``: sup error on the grid, the pointwise bound (slice only) and the weighted error."""
    pts = experiment_grid(config)
    r = np.linalg.norm(pts, axis=1)
    weight = np.exp(-config.sigma * r)
    evaluate = _evaluators(config)
    threads = config.effective_threads()
    rows = []
    for N in config.Ns:
        start = time.perf_counter()
        spec = _spec(config, N)

        def err(chunk, spec=spec):
            vals, lim = evaluate(spec, chunk)
            return np.sqrt(np.sum((vals - lim) ** 2, axis=-1))

        e = _map_chunks(err, pts, threads)
        if config.setting == "slice" and config.rule == "binomial":
            bound = float(np.max(error_bound_slice(N, config.a, pts)))
        else:
            bound = math.nan
        ms = int(round(1000 * (time.perf_counter() - start))) if config.timing else 0
        rows.append(ConvergenceRow(N, float(np.max(e)), bound, float(np.max(e * weight)), ms))
    return rows


def run_cauchy(config: ExperimentConfig) -> list[ConvergenceRow]:
    """Slice Cauchy reconstruction of ``exp`` with ``N`` quadrature nodes.

    Points fill ``|x| <= radius/2``; the contour has radius ``radius``.  The
    ``bound`` column is empty and ``a1_error`` is the weighted error.
    """
    half = dataclasses.replace(config, radius=config.radius / 2)
    pts = experiment_grid(half)
    weight = np.exp(-config.sigma * np.linalg.norm(pts, axis=1))
    threads = config.effective_threads()
    rows = []
    for M in config.Ns:
        start = time.perf_counter()

        def err(chunk, M=M):
            out = []
            for p in chunk:
                v = np.linalg.norm(p[1:])
                j = p[1:] / v if v > 0 else np.eye(config.n)[0]
                x = Paravector.from_array(p)
                rec = cauchy_reconstruct(exp_paravector, config.radius, Paravector(0.0, tuple(j)), x, M=M)
                out.append((rec - exp_paravector(x).embed()).norm())
            return np.array(out, dtype=float)

        e = _map_chunks(err, pts, threads)
        ms = int(round(1000 * (time.perf_counter() - start))) if config.timing else 0
        rows.append(ConvergenceRow(M, float(np.max(e)), math.nan, float(np.max(e * weight)), ms))
    return rows


# -- emission ----------------------------------------------------------------


def format_float(x: float) -> str:
    """17 significant digits; round-trips bit-exactly."""
    return format(float(x), ".17g")


def _json_text(obj) -> str:
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        text = format_float(obj)
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_text(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def render(rows, fmt: str = "csv", config: ExperimentConfig | None = None) -> str:
    if fmt == "csv":
        lines = [",".join(COLUMNS)]
        for row in rows:
            lines.append(
                f"{row.N},{format_float(row.sup_error)},{format_float(row.bound)},"
                f"{format_float(row.a1_error)},{row.wall_ms}"
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "config": config.to_dict() if config is not None else None,
            "rows": [dataclasses.asdict(row) for row in rows],
        }
        return _json_text(payload) + "\n"
    raise ConfigError("format", "must be csv or json")


def emit(rows, fmt: str = "csv", path=None, config: ExperimentConfig | None = None) -> None:
    """Write rows to ``path`` (standard output for ``None`` or ``"-"``)."""
    text = render(rows, fmt, config)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"{path}: {exc.strerror}") from exc


def parse_csv(text: str) -> list[ConvergenceRow]:
    lines = text.strip().splitlines()
    if not lines or lines[0] != ",".join(COLUMNS):
        raise ValueError("missing or wrong CSV header")
    rows = []
    for line in lines[1:]:
        N, s, b, a1, ms = line.split(",")
        rows.append(ConvergenceRow(int(N), float(s), float(b), float(a1), int(ms)))
    return rows


def parse_json(text: str) -> tuple[dict | None, list[ConvergenceRow]]:
    data = json.loads(text)
    rows = [
        ConvergenceRow(
            r["N"],
            math.nan if r["sup_error"] is None else r["sup_error"],
            math.nan if r["bound"] is None else r["bound"],
            math.nan if r["a1_error"] is None else r["a1_error"],
            r["wall_ms"],
        )
        for r in data["rows"]
    ]
    return data["config"], rows


__all__ = [
    "COLUMNS",
    "ConvergenceRow",
    "ExperimentConfig",
    "emit",
    "experiment_grid",
    "format_float",
    "parse_csv",
    "parse_json",
    "parse_profile",
    "render",
    "run_cauchy",
    "run_convergence",
]
