"""Report assembly, serialization determinism, CLI argument surface."""

import json
import os

import numpy as np
import pytest

from fkm_willmore import (VerificationConfig, VerificationReport,
                          build_clifford_system, exit_code, parse_matrices,
                          render_text, run_suite)
from fkm_willmore.cli import main, parse_cli
from fkm_willmore.report import evaluate_system

TINY = dict(n_points=3, n_normals=4, n_pde_samples=50)

EXPECTED_BLOCKS = ("clifford", "cartan_munzner", "points", "geometry",
                   "lemma", "willmore", "einstein")


def tiny_config(**over):
    merged = {"configurations": ((1, 3),), **TINY, **over}
    return VerificationConfig(**merged)


def test_config_validation():
    with pytest.raises(ValueError):
        VerificationConfig(configurations=())
    with pytest.raises(ValueError):
        VerificationConfig(configurations=((0, 1),))
    with pytest.raises(ValueError):
        VerificationConfig(tolerances={"nope": 1e-8})
    with pytest.raises(ValueError):
        VerificationConfig(tolerances={"pde": -1.0})
    with pytest.raises(ValueError):
        VerificationConfig(format="yaml")
    with pytest.raises(ValueError):
        VerificationConfig(n_points=0)
    cfg = VerificationConfig(tolerances={"geom": 1e-6})
    assert cfg.tolerances["geom"] == 1e-6
    assert cfg.tolerances["pde"] == 1e-8


def test_entry_structure_and_pass():
    cfg = tiny_config()
    report = run_suite(cfg)
    assert report.overall_pass and not report.internal_error
    assert exit_code(report) == 0
    assert report.wall_time_s > 0.0
    (entry,) = report.entries
    assert entry["m"] == 1 and entry["k"] == 3 and entry["l"] == 3
    assert entry["ambient_dim"] == 6 and entry["focal_dim"] == 3
    assert entry["admissible"] and entry["pass"]
    for name in EXPECTED_BLOCKS:
        assert name in entry["blocks"], name
        assert entry["blocks"][name]["pass"], name
    assert entry["blocks"]["clifford"]["max_deviation"] == 0.0
    assert entry["blocks"]["points"]["count"] == 3
    assert entry["blocks"]["points"]["jacobian_ranks"] == [3]
    assert entry["blocks"]["lemma"]["multiplicities"] == [1, 1, 1]
    assert entry["blocks"]["einstein"]["status"] == "evidence"


def test_inadmissible_entry_reported_not_fatal():
    cfg = tiny_config(configurations=((1, 3), (3, 1)))
    report = run_suite(cfg)
    good, bad = report.entries
    assert good["pass"]
    assert bad == {"m": 3, "k": 1, "admissible": False,
                   "reason": "inadmissible: m2=0", "pass": False}
    assert not report.overall_pass and not report.internal_error
    assert exit_code(report) == 1


def test_unimplemented_entry_reported():
    cfg = tiny_config(configurations=((10, 1),))
    report = run_suite(cfg)
    (entry,) = report.entries
    assert entry["admissible"] is False and not entry["pass"]
    assert "m <= 9" in entry["reason"] or "periodicity" in entry["reason"]


def test_json_byte_identical_across_runs():
    cfg = tiny_config(configurations=((1, 3), (2, 2)))
    first = run_suite(cfg).to_json()
    second = run_suite(cfg).to_json()
    assert first == second
    parsed = json.loads(first)
    assert parsed["schema_version"] == 1
    assert parsed["overall_pass"] is True
    assert parsed["seed"] == 42
    assert parsed["config"]["configurations"] == [[1, 3], [2, 2]]


def test_seed_changes_sampled_coordinates():
    base = run_suite(tiny_config()).to_dict()
    moved = run_suite(tiny_config(seed=43)).to_dict()
    a = np.array(base["configurations"][0]["blocks"]["points"]["coordinates"])
    b = np.array(moved["configurations"][0]["blocks"]["points"]["coordinates"])
    assert np.array_equal(a[0], b[0]), "deterministic point ignores the seed"
    assert not np.array_equal(a[1:], b[1:])


def test_internal_error_becomes_exit_3(monkeypatch):
    def boom(system, cfg, config_index):
        raise RuntimeError("synthetic failure")
    monkeypatch.setattr("fkm_willmore.report.evaluate_system", boom)
    report = run_suite(tiny_config())
    assert report.internal_error
    (entry,) = report.entries
    assert entry["internal"] and not entry["pass"]
    assert "synthetic failure" in entry["error"]
    assert exit_code(report) == 3


def test_exit_code_mapping():
    cfg = tiny_config()
    mk = lambda ok, internal: VerificationReport(
        config=cfg, entries=[], overall_pass=ok, internal_error=internal)
    assert exit_code(mk(True, False)) == 0
    assert exit_code(mk(False, False)) == 1
    assert exit_code(mk(True, True)) == 3
    assert exit_code(mk(False, True)) == 3


def test_render_text_shape():
    report = run_suite(tiny_config(configurations=((1, 3), (3, 1))))
    text = render_text(report)
    lines = text.splitlines()
    assert lines[0].startswith("fkm-verify")
    assert any(ln.startswith("[PASS] m=1 k=3:") for ln in lines)
    assert "[FAIL] m=3 k=1: inadmissible: m2=0" in lines
    assert lines[-1] == "overall: FAIL"
    assert render_text(run_suite(tiny_config(configurations=((1, 3), (3, 1))))) == text


def test_evaluate_system_detects_corruption():
    from conftest import corrupt_system
    cfg = tiny_config(configurations=((2, 2),))
    entry = evaluate_system(corrupt_system(2, 2), cfg, 0)
    assert not entry["pass"]
    assert not entry["blocks"]["clifford"]["pass"]
    assert not entry["blocks"]["cartan_munzner"]["pass"]
    # a failed sampling stage must not be shadowed by the partial point list
    points = entry["blocks"]["points"]
    if points["pass"]:
        assert points["count"] == cfg.n_points
    else:
        assert "geometry" not in entry["blocks"]


# ---------------------------------------------------------------------------
# CLI surface
# ---------------------------------------------------------------------------

def test_parse_cli_defaults(monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    cfg = parse_cli([])
    assert cfg.seed == 42
    assert cfg.n_points == 20 and cfg.n_normals == 50
    assert cfg.configurations == ((1, 3), (1, 4), (2, 2), (3, 2), (4, 2),
                                  (5, 1), (6, 1))
    assert cfg.format == "json" and cfg.out is None


def test_parse_cli_overrides(monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    cfg = parse_cli(["--grid", "2:2,1:3", "--points", "5", "--normals", "7",
                     "--seed", "11", "--tol", "geom=1e-6",
                     "--tol", "willmore=1e-5", "--format", "text",
                     "--out", "r.txt", "--dump-matrices", "dumps"])
    assert cfg.configurations == ((2, 2), (1, 3))
    assert cfg.n_points == 5 and cfg.n_normals == 7 and cfg.seed == 11
    assert cfg.tolerances["geom"] == 1e-6
    assert cfg.tolerances["willmore"] == 1e-5
    assert cfg.tolerances["pde"] == 1e-8
    assert cfg.format == "text" and cfg.out == "r.txt"
    assert cfg.dump_matrices == "dumps"


def test_seed_environment_fallback(monkeypatch):
    monkeypatch.setenv("FKM_SEED", "123")
    assert parse_cli([]).seed == 123
    assert parse_cli(["--seed", "9"]).seed == 9, "flag beats environment"
    monkeypatch.setenv("FKM_SEED", "twelve")
    with pytest.raises(SystemExit) as info:
        parse_cli([])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [
    ["--grid", "0:1"],
    ["--grid", "1:x"],
    ["--grid", "1-3"],
    ["--grid", ""],
    ["--points", "x"],
    ["--points", "0"],
    ["--tol", "nope=1e-8"],
    ["--tol", "pde=abc"],
    ["--tol", "pde=-1"],
    ["--tol", "pde"],
    ["--format", "yaml"],
    ["--bogus"],
])
def test_cli_argument_errors_exit_2(argv, capsys, monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    with pytest.raises(SystemExit) as info:
        parse_cli(argv)
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_main_writes_json_report(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    out = tmp_path / "report.json"
    code = main(["--grid", "1:3", "--points", "2", "--normals", "2",
                 "--out", str(out)])
    assert code == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "fkm-verify: pass" in captured.err
    payload = json.loads(out.read_text())
    assert payload["overall_pass"] is True
    assert payload["config"]["n_points"] == 2
    assert "wall" not in json.dumps(payload), "timing must stay out of JSON"


def test_main_stdout_text_and_failure_exit(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    code = main(["--grid", "1:3,3:1", "--points", "2", "--normals", "2",
                 "--format", "text"])
    assert code == 1
    captured = capsys.readouterr()
    assert captured.out.splitlines()[-1] == "overall: FAIL"
    assert "inadmissible: m2=0" in captured.out
    assert "fkm-verify: fail" in captured.err


def test_main_dump_matrices_roundtrip(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FKM_SEED", raising=False)
    dumps = tmp_path / "dumps"
    out = tmp_path / "r.json"
    code = main(["--grid", "2:2,3:1", "--points", "2", "--normals", "2",
                 "--out", str(out), "--dump-matrices", str(dumps)])
    assert code == 1  # 3:1 is inadmissible, but dumps still cover 2:2
    files = sorted(os.listdir(dumps))
    assert files == ["clifford_m2_k2.txt"]
    back = parse_matrices((dumps / files[0]).read_text())
    system = build_clifford_system(2, 2)
    for a, b in zip(back.matrices, system.matrices):
        assert np.array_equal(a, b)


def test_main_binary_reproducible(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("FKM_SEED", raising=False)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["--grid", "1:3", "--points", "2", "--normals", "3", "--seed", "5"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
