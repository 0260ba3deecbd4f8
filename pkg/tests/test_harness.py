from __future__ import annotations

import hashlib
import json
import math
import subprocess

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashlab.errors import InsufficientData, NonPositiveData, ParameterError
from nashlab.harness import cli, experiments
from nashlab.harness.experiments import ExperimentSpec
from nashlab.harness.fitting import budget_value, compare_to_budget, fit_rate


def test_fit_rate_exact_power_law():
    x = np.geomspace(1e-4, 1e-1, 10)
    fit = fit_rate(x, 3.0 * x**-0.5)
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.within(-0.5, 1e-9)


def test_fit_rate_trim_records_window():
    x = np.geomspace(1e-4, 1e-1, 8)
    fit = fit_rate(x, x, trim=2)
    assert fit.window == pytest.approx((x[2], x[-3]))


def test_fit_rate_errors():
    with pytest.raises(InsufficientData):
        fit_rate([1, 2, 3], [1, 2, 3])
    with pytest.raises(NonPositiveData):
        fit_rate([1, 2, 3, 4], [1, -2, 3, 4])
    with pytest.raises(InsufficientData):
        fit_rate([1, 2, 3, 4], [1, 2, 3, 4], trim=2)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(1e-3, 1e3), b=st.floats(1e-3, 1e3), slope=st.floats(-3, 3))
def test_fit_rate_scale_invariant(a, b, slope):
    x = np.geomspace(1e-3, 1.0, 7)
    rng = np.random.default_rng(0)
    y = x**slope * np.exp(0.05 * rng.standard_normal(x.size))
    f1 = fit_rate(x, y)
    f2 = fit_rate(a * x, b * y)
    assert f2.slope == pytest.approx(f1.slope, abs=1e-9)


def test_budget_value_and_compare():
    assert budget_value("inverse_log", math.e**-4, {}) == pytest.approx(0.25)
    nus, r = compare_to_budget({1e-4: 1e-2, 1e-6: 1e-3}, "algebraic", {"alpha": 1.0})
    assert list(nus) == [1e-4, 1e-6]
    assert np.allclose(r, [1.0, 1.0])
    with pytest.raises(ParameterError):
        budget_value("bogus", 0.1, {})


def test_spec_json_roundtrip():
    spec = ExperimentSpec("x", "BudgetTable", {"mode": "timescale", "k_min": 2}, seed=3)
    assert ExperimentSpec.from_json(spec.to_json()) == spec
    with pytest.raises(ParameterError):
        ExperimentSpec("x", "Nope")


def test_git_blob_hash_matches_git_format():
    data = b"hello\n"
    assert experiments.git_blob_hash(data) == "ce013625030ba8dba906f756967f9e9ca394464a"
    assert experiments.git_blob_hash(data) == hashlib.sha1(b"blob 6\0hello\n").hexdigest()


def test_bundled_specs_cover_all_kinds():
    specs = experiments.bundled_specs()
    assert len(specs) == 11
    assert {s.kind for s in specs.values()} == set(experiments.KINDS)


def test_run_writes_deterministic_report(tmp_path):
    spec = experiments.resolve_spec("c11_timescale")
    r1 = experiments.run(spec, tmp_path / "a")
    experiments.run(spec, tmp_path / "b")
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    assert (tmp_path / "a" / "timescale_verdicts.csv").read_bytes() == (tmp_path / "b" / "timescale_verdicts.csv").read_bytes()
    assert set(r1) == {"spec", "input_hash", "assertions", "pass"}
    assert set(r1["assertions"][0]) == {"name", "expected", "measured", "tolerance", "pass"}
    assert r1["input_hash"] == experiments.git_blob_hash(spec.to_json().encode())


def test_cli_list_and_exit_codes(tmp_path, capsys):
    assert cli.main(["--list-specs"]) == 0
    assert "c01_cantor_saturation" in capsys.readouterr().out
    assert cli.main(["budget", "--spec", "c11_timescale", "--out", str(tmp_path / "ok")]) == 0
    # criterion-1 spec fails for alpha = 1, 1.5, so the exit code is nonzero
    assert cli.main(["cantor", "--spec", "c01_cantor_saturation", "--out", str(tmp_path / "bad")]) == 1
    # kind/subcommand mismatch
    assert cli.main(["nash", "--spec", "c11_timescale", "--out", str(tmp_path / "x")]) == 2


def test_cli_custom_spec_file(tmp_path):
    spec = {"name": "tiny", "kind": "CantorSaturation", "parameters": {"check": "logsparse", "n_max": 2, "rtol": 0.1}}
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(spec))
    assert cli.main(["cantor", "--spec", str(path), "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert all(a["pass"] for a in report["assertions"])


def test_console_script_installed(tmp_path):
    out = subprocess.run(["nashlab", "--list-specs"], capture_output=True, text=True)
    assert out.returncode == 0 and "c11_timescale" in out.stdout
