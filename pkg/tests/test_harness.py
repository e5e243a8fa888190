import json
import math

import numpy as np
import pytest

from cliffosc.errors import ConfigError
from cliffosc.harness import (
    COLUMNS,
    ConvergenceRow,
    ExperimentConfig,
    emit,
    experiment_grid,
    format_float,
    parse_csv,
    parse_json,
    parse_profile,
    render,
    run_cauchy,
    run_convergence,
)

SMALL = dict(n=2, Ns=(4, 8, 16), grid=24)


def test_slice_a_equal_one_is_exact():
    rows = run_convergence(ExperimentConfig(a=1.0, **SMALL))
    assert [r.N for r in rows] == [4, 8, 16]
    assert all(r.sup_error <= 1e-12 for r in rows)
    assert all(r.wall_ms == 0 for r in rows)


def test_slice_rows_respect_bound():
    rows = run_convergence(ExperimentConfig(a=2.0, n=3, Ns=(8, 16, 32, 64), grid=64, radius=1.0))
    for r in rows:
        assert r.sup_error <= r.bound
        assert r.a1_error <= r.sup_error
    errs = [r.sup_error for r in rows]
    assert all(u > v for u, v in zip(errs, errs[1:]))


def test_monogenic_rows_decrease():
    rows = run_convergence(ExperimentConfig(setting="monogenic", n=2, Ns=(4, 8, 16), grid=16, radius=0.5, K=16))
    errs = [r.sup_error for r in rows]
    assert all(u > v for u, v in zip(errs, errs[1:]))
    assert all(math.isnan(r.bound) for r in rows)


def test_supershift_targets_and_profiles():
    base = dict(n=2, Ns=(8, 16), grid=16, setting="supershift-slice")
    bessel = run_convergence(ExperimentConfig(target="bessel", **base))
    assert bessel[1].sup_error < bessel[0].sup_error
    ident = run_convergence(ExperimentConfig(profile="identity", **base))
    plain = run_convergence(ExperimentConfig(**base))
    assert ident[0].sup_error == pytest.approx(plain[0].sup_error, rel=1e-9)


def test_taylor_file_target(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps([1 / math.factorial(s) for s in range(80)]))
    cfg = ExperimentConfig(n=2, Ns=(8,), grid=16, setting="supershift-slice", target="taylor-file", taylor_file=str(path))
    ref = ExperimentConfig(n=2, Ns=(8,), grid=16, setting="supershift-slice")
    assert run_convergence(cfg)[0].sup_error == pytest.approx(run_convergence(ref)[0].sup_error, rel=1e-9)


def test_cauchy_rows_shrink():
    rows = run_cauchy(ExperimentConfig(n=2, Ns=(16, 32, 64), grid=8))
    assert rows[0].sup_error > rows[1].sup_error > rows[2].sup_error
    assert rows[2].sup_error <= 1e-12


def test_grid_is_deterministic_and_inside_ball():
    cfg = ExperimentConfig(n=3, grid=100, radius=1.5, seed=4)
    g = experiment_grid(cfg)
    assert g.shape == (100, 4)
    assert np.all(np.linalg.norm(g, axis=1) <= 1.5 * (1 + 1e-12))
    assert np.array_equal(g, experiment_grid(cfg))
    assert not np.array_equal(g, experiment_grid(ExperimentConfig(n=3, grid=100, radius=1.5, seed=5)))


# -- determinism ------------------------------------------------------------------


def test_byte_identical_and_thread_independent(monkeypatch):
    cfg = dict(n=2, Ns=(4, 8), grid=40, a=2.5)
    texts = [render(run_convergence(ExperimentConfig(threads=t, **cfg))) for t in (1, 1, 3)]
    assert texts[0] == texts[1] == texts[2]
    monkeypatch.setenv("CLIFFOSC_THREADS", "2")
    assert render(run_convergence(ExperimentConfig(**cfg))) == texts[0]


def test_threads_fallback(monkeypatch):
    monkeypatch.setenv("CLIFFOSC_THREADS", "5")
    assert ExperimentConfig().effective_threads() == 5
    assert ExperimentConfig(threads=2).effective_threads() == 2
    monkeypatch.setenv("CLIFFOSC_THREADS", "many")
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig().effective_threads()
    assert exc.value.field == "CLIFFOSC_THREADS"


# -- emission -------------------------------------------------------------------------


def test_empty_rows_give_header_only():
    assert render([]) == ",".join(COLUMNS) + "\n"
    assert COLUMNS == ("N", "sup_error", "bound", "a1_error", "wall_ms")


def test_csv_round_trip_is_bit_exact():
    rows = [ConvergenceRow(8, 0.1 + 0.2, 1 / 3, 2.0**-60, 0), ConvergenceRow(16, 1e300, math.nan, 5e-324, 7)]
    text = render(rows)
    assert len(text.splitlines()) == 3
    back = parse_csv(text)
    for a, b in zip(rows, back):
        assert a.N == b.N and a.wall_ms == b.wall_ms
        for f in ("sup_error", "a1_error"):
            assert getattr(a, f) == getattr(b, f)
    assert math.isnan(back[1].bound)


def test_json_round_trip_mirrors_config():
    cfg = ExperimentConfig(**SMALL)
    rows = run_convergence(cfg)
    config, back = parse_json(render(rows, "json", cfg))
    assert config == cfg.to_dict()
    assert back == rows


def test_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(math.pi)) == math.pi


def test_emit_to_file_and_error(tmp_path, capsys):
    rows = [ConvergenceRow(4, 1.0, 2.0, 0.5, 0)]
    emit(rows, "csv", tmp_path / "out.csv")
    assert (tmp_path / "out.csv").read_text() == render(rows)
    emit(rows, "csv", "-")
    assert capsys.readouterr().out == render(rows)
    with pytest.raises(OSError, match="nowhere"):
        emit(rows, "csv", tmp_path / "nowhere" / "out.csv")


# -- configuration ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "overrides, field",
    [
        (dict(n=0), "n"),
        (dict(Ns=(8, 4)), "Ns"),
        (dict(Ns=()), "Ns"),
        (dict(radius=-1.0), "radius"),
        (dict(sigma=0.0), "sigma"),
        (dict(setting="weird"), "setting"),
        (dict(target="taylor-file", setting="supershift-slice"), "taylor_file"),
        (dict(target="taylor-file", taylor_file="g.json"), "target"),
        (dict(profile="cubic"), "profile"),
        (dict(setting="supershift-slice", profile="power:x"), "profile"),
        (dict(setting="monogenic", K=31), "K"),
        (dict(seed=-1), "seed"),
        (dict(format="xml"), "format"),
        (dict(threads=0), "threads"),
        (dict(rule="chebyshev"), "rule"),
        (dict(grid=0), "grid"),
        (dict(a=math.inf), "a"),
    ],
)
def test_config_errors_name_the_field(overrides, field):
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig(**overrides)
    assert exc.value.field == field


def test_config_file_and_unknown_keys(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"n": 2, "Ns": [4, 8], "a": 1.5}))
    cfg = ExperimentConfig.from_file(path, {"a": 3.0})
    assert (cfg.n, cfg.Ns, cfg.a) == (2, (4, 8), 3.0)
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_mapping({"colour": "red"})
    assert exc.value.field == "colour"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError) as exc:
        ExperimentConfig.from_file(bad)
    assert exc.value.field == "config"


def test_profile_parsing():
    assert parse_profile("identity", 2).degree == 1
    assert parse_profile("cubic", 2).degree == 3
    assert parse_profile("power:2", 3).n == 3
    p = parse_profile("[[0, 1], [0, 0, 1], [0, 0.5, 0, 0.5]]", 2)
    assert p.degree == 3
    with pytest.raises(ValueError):
        parse_profile("[[0, 1]]", 2)


def test_truncation_defaults():
    assert ExperimentConfig().truncation == 100
    assert ExperimentConfig(setting="monogenic").truncation == 24
    assert ExperimentConfig(setting="supershift-monogenic").truncation == 30
    assert ExperimentConfig(K=7).truncation == 7
