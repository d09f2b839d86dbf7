import json
import math
import os
import subprocess
from pathlib import Path

import jsonschema
import pytest

CLI = os.environ.get("WEYLDENS_CLI", "weyldens")
SCHEMAS = Path(os.environ.get("WEYLDENS_SCHEMAS", Path(__file__).resolve().parents[2] / "schemas"))
HEADER = "lambda,rho_prime,log10_rho_prime,region"


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("WEYL_DENS_THREADS", None)
    if env:
        full_env.update(env)
    return subprocess.run([CLI, *args], capture_output=True, env=full_env, timeout=600)


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)


def parse_json(stdout):
    # Non-finite values are written as null, never as bare NaN.
    return json.loads(stdout, parse_constant=lambda c: pytest.fail(f"non-JSON constant {c}"))


def csv_rows(stdout):
    lines = stdout.decode().split("\n")
    assert lines[-1] == ""
    return lines[0], [line.split(",") for line in lines[1:-1]]


@pytest.fixture(scope="module")
def sweep500():
    r = run("sweep", "--alpha", "0.785398", "--eps", "0.1", "--lmin", "-3", "--lmax", "-0.01", "--n", "500",
            "--format", "csv")
    assert r.returncode == 0, r.stderr
    return r.stdout


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_sweep_row_count_and_header(sweep500):
    header, rows = csv_rows(sweep500)
    assert header == HEADER
    assert len(rows) == 500
    assert all(len(r) == 4 for r in rows)
    assert b"\r" not in sweep500
    assert float(rows[0][0]) == -3.0
    assert float(rows[-1][0]) == -0.01


def test_sweep_number_formatting(sweep500):
    _, rows = csv_rows(sweep500)
    for r in rows[:20]:
        for field in r[:3]:
            mantissa = field.lstrip("-").split("e")[0]
            assert len(mantissa.replace(".", "")) == 17


def test_sweep_values_positive(sweep500):
    _, rows = csv_rows(sweep500)
    for r in rows:
        assert float(r[1]) >= 0.0
        assert math.isfinite(float(r[2]))
    assert all(float(r[1]) > 0.0 for r in rows if float(r[0]) > -2.5)


def test_sweep_single_maximum_inside_critical_segment(sweep500):
    _, rows = csv_rows(sweep500)
    inside = [(float(r[0]), float(r[2])) for r in rows if -2.0 <= float(r[0]) <= -0.5]
    logs = [v for _, v in inside]
    peaks = [i for i in range(1, len(logs) - 1) if logs[i] > logs[i - 1] and logs[i] > logs[i + 1]]
    assert len(peaks) == 1
    assert abs(inside[peaks[0]][0] + 1.05) < 0.01


def test_sweep_deterministic_across_runs_and_threads():
    args = ("sweep", "--eps", "0.1", "--lmin", "-3", "--lmax", "-0.01", "--n", "200")
    first = run(*args, "--threads", "1").stdout
    assert run(*args, "--threads", "1").stdout == first
    assert run(*args, "--threads", "3").stdout == first
    assert run(*args, env={"WEYL_DENS_THREADS": "2"}).stdout == first


def test_sweep_underflow_keeps_log_column():
    r = run("sweep", "--eps", "1", "--lmin", "-400", "--lmax", "-399", "--n", "2")
    _, rows = csv_rows(r.stdout)
    assert float(rows[0][1]) == 0.0
    assert float(rows[0][2]) < -4000.0
    assert rows[0][3] == "deep_left"


def test_sweep_json_validates():
    r = run("sweep", "--eps", "0.2", "--n", "25", "--format", "json")
    assert r.returncode == 0
    doc = parse_json(r.stdout)
    validate(doc, "sweep")
    assert len(doc["rows"]) == 25


def test_sweep_output_file(tmp_path):
    out = tmp_path / "s.csv"
    r = run("sweep", "--eps", "0.1", "--n", "10", "-o", str(out))
    assert r.returncode == 0
    assert out.read_bytes() == run("sweep", "--eps", "0.1", "--n", "10").stdout


@pytest.mark.parametrize(
    "args",
    [
        ("sweep",),
        ("sweep", "--eps", "0"),
        ("sweep", "--eps", "0.1", "--lmax", "0.5"),
        ("sweep", "--eps", "0.1", "--n", "0"),
        ("sweep", "--eps", "0.1", "--format", "xml"),
        ("sweep", "--eps", "0.1", "--alpha", "2.0"),
        ("sweep", "--eps", "0.1", "--alpha", "0.5", "--cot", "1"),
        ("print-config", "--c1", "-1"),
        ("print-config", "--root-rel", "0.5"),
        ("no-such-command",),
    ],
)
def test_usage_and_config_errors_exit_2(args):
    assert run(*args).returncode == 2


def test_resonance_quarter():
    r = run("resonance", "--alpha", "0.785398163397448", "--eps", "0.1")
    assert r.returncode == 0, r.stderr
    doc = parse_json(r.stdout)
    validate(doc, "resonance")
    assert abs(doc["lambda1"] + 1.05) < 0.01
    assert abs(doc["mass"] - 4.0) < 0.5
    assert doc["drift_prediction"] == pytest.approx(-1.05)
    assert doc["drift_residual"] == pytest.approx(doc["lambda1"] - doc["drift_prediction"], abs=1e-15)


def test_resonance_outside_validity_exits_3():
    r = run("resonance", "--eps", "10")
    assert r.returncode == 3
    assert b"no_bracket" in r.stderr


def test_resonance_residual_bounded_over_grid():
    grid = [0.02, 0.05, 0.08, 0.11, 0.14]
    r = run("resonance", "--eps", ",".join(map(str, grid)))
    # Below eps ~ 0.05 the peak is narrower than double precision resolves;
    # the zero and drift are still reported.
    assert r.returncode == 3
    docs = parse_json(r.stdout)
    validate(docs, "resonance")
    assert [d["eps"] for d in docs] == grid
    assert [d.get("error") for d in docs] == ["model_mismatch", None, None, None, None]
    assert docs[0]["mass"] is None
    assert all(d["mass"] > 0 for d in docs[1:])
    assert max(abs(d["drift_residual"]) / d["eps"] ** 2 for d in docs) <= 1.0


def test_resonance_desk_range_resolves():
    r = run("resonance", "--eps", "0.05,0.1,0.2,0.25")
    assert r.returncode == 0, r.stderr
    docs = parse_json(r.stdout)
    validate(docs, "resonance")
    widths = [d["width"] for d in docs]
    assert widths == sorted(widths)


def test_mass_validates():
    r = run("mass", "--eps", "0.1")
    assert r.returncode == 0
    doc = parse_json(r.stdout)
    validate(doc, "mass")
    assert abs(doc["mass"] - doc["expected_mass"]) <= 0.5
    assert doc["in_admissible_window"] is False


def test_mass_bad_window_is_domain_failure():
    assert run("mass", "--eps", "0.1", "--d", "0.02").returncode == 3


def test_baseline_validates():
    r = run("baseline")
    assert r.returncode == 0
    doc = parse_json(r.stdout)
    validate(doc, "baseline")
    assert [p["lambda"] for p in doc["points"]] == [0.5, 1.0, 2.0]
    assert all(p["rel_error"] <= 1e-2 for p in doc["points"])
    assert doc["points"][1]["baseline"] == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert run("baseline", "--lambda", "-1").returncode == 2


def test_print_config_validates():
    r = run("print-config", "--cot", "2", "--c3", "0.25", env={"WEYL_DENS_THREADS": "3"})
    assert r.returncode == 0
    doc = parse_json(r.stdout)
    validate(doc, "config")
    assert doc["cot_alpha"] == 2.0
    assert doc["constants"]["c3"] == 0.25
    assert doc["threads_cap"] == 3


def test_verify_unknown_suite_exits_2():
    r = run("verify", "--suite", "nope")
    assert r.returncode == 2
    assert b"unknown suite" in r.stderr


@pytest.mark.parametrize("suite", ["quad", "baseline", "oracle"])
def test_verify_passing_suites(tmp_path, suite):
    report = tmp_path / "report.json"
    r = run("verify", "--suite", suite, "--report", str(report))
    assert r.returncode == 0, r.stdout
    assert b"PASS" in r.stdout
    doc = json.loads(report.read_text())
    validate(doc, "verify_report")
    assert doc["pass"] is True
    assert [s["suite"] for s in doc["suites"]] == [suite]


def test_verify_failure_exits_1(tmp_path):
    report = tmp_path / "report.json"
    r = run("verify", "--suite", "thm2", "--big-o-const", "1e-6", "--report", str(report))
    assert r.returncode == 1
    doc = json.loads(report.read_text())
    validate(doc, "verify_report")
    assert doc["pass"] is False
    assert any(not c["pass"] for c in doc["suites"][0]["checks"])
