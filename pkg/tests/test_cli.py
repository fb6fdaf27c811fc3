"""Driver contract: exit codes, certificate schema, determinism, CSV."""

import json
import os

import pytest

from steinlab import certs
from steinlab.cli import main, run_suite


def run(argv):
    return main(argv)


def test_single_suite_pass_exit_zero(tmp_path, capsys):
    out = tmp_path / "cert.json"
    code = run(["--suite", "solomon-tits", "--n", "2", "--p", "3", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["pass"] is True
    assert payload["suite"] == "solomon-tits"
    assert payload["computed"]["building_dim"] == 3
    assert payload["expected"]["building_dim"]["source"] in (
        "oracle",
        "classical",
        "definition",
    )
    assert "wall_ms" in payload and "version" in payload and "kernel" in payload


def test_stdout_when_no_out_path(capsys):
    code = run(["--suite", "nilmanifold", "--n", "3"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["computed"]["3"] == [1, 2, 2, 1]


def test_usage_error_missing_params():
    assert run(["--suite", "solomon-tits"]) == 2


def test_usage_error_out_of_range():
    assert run(["--suite", "solomon-tits", "--n", "9", "--p", "2"]) == 2
    assert run(["--suite", "modular-symbols", "--level", "99"]) == 2


def test_usage_error_no_suite_no_config():
    assert run([]) == 2


def test_usage_error_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        run(["--suite", "no-such-suite"])
    assert exc.value.code == 2


def test_missing_config_exit_two(tmp_path):
    assert run(["--config", str(tmp_path / "nope.json")]) == 2


def test_check_failure_exit_one(monkeypatch, tmp_path):
    """An intentionally wrong golden value must fail the run with exit 1."""
    poisoned = json.loads(
        json.dumps(certs.golden())  # deep copy
    )
    poisoned["steinberg_dimension"]["2,2"]["value"] = 999
    monkeypatch.setattr(certs, "_golden_cache", poisoned)
    cfg = tmp_path / "grid.json"
    cfg.write_text(
        json.dumps({"suites": [{"suite": "solomon-tits", "params": {"n": 2, "p": 2}}]})
    )
    assert run(["--config", str(cfg)]) == 1


def test_empty_grid_warns_and_passes(tmp_path, capsys):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"suites": []}))
    assert run(["--config", str(cfg)]) == 0
    assert "empty" in capsys.readouterr().out


def test_config_with_unknown_suite_exit_two(tmp_path):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"suites": [{"suite": "bogus", "params": {}}]}))
    assert run(["--config", str(cfg)]) == 2


def test_modular_symbols_writes_csv(tmp_path):
    out = tmp_path / "ms.json"
    code = run(["--suite", "modular-symbols", "--level", "4", "--out", str(out)])
    assert code == 0
    csv_path = tmp_path / "ms.csv"
    assert csv_path.exists()
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].startswith("N,cosets")
    assert len(lines) == 5


def test_certificates_byte_identical_modulo_runtime():
    a = run_suite("coinvariants", {"n": 2, "p": 3})
    b = run_suite("coinvariants", {"n": 2, "p": 3})
    ja = json.loads(a.to_json())
    jb = json.loads(b.to_json())
    ja.pop("wall_ms"), jb.pop("wall_ms")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_small_grid_with_workers(tmp_path, capsys):
    cfg = tmp_path / "grid.json"
    cfg.write_text(
        json.dumps(
            {
                "suites": [
                    {"suite": "solomon-tits", "params": {"n": 2, "p": 2}},
                    {"suite": "modular-symbols", "params": {"level": 3}},
                    {"suite": "nilmanifold", "params": {"n": 3}},
                ]
            }
        )
    )
    out_dir = tmp_path / "certs"
    code = run(["--config", str(cfg), "--workers", "2", "--out", str(out_dir)])
    assert code == 0
    text = capsys.readouterr().out
    assert "3/3 suites passed" in text
    names = sorted(os.listdir(out_dir))
    assert names == [
        "modular-symbols-3.json",
        "nilmanifold-3.json",
        "solomon-tits-2-2.json",
    ]
    for name in names:
        payload = json.loads((out_dir / name).read_text())
        assert payload["pass"] is True


def test_default_grid_loads():
    from steinlab.cli import load_config

    jobs = load_config("default")
    assert len(jobs) >= 25
    assert all(isinstance(p, dict) for _, p in jobs)


def test_lattice_suite_small(tmp_path):
    out = tmp_path / "lat.json"
    code = run(
        ["--suite", "lattice", "--height", "1", "--word-length", "3", "--out", str(out)]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["computed"]["member_count"] == 4
    assert payload["computed"]["unipotent_found"] is False
