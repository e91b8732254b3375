import json
import os

import pytest

import src.main as cli
from src.main import build_parser, main
from src.render.manifest import Manifest
from src.schemas import RunConfig

FAST = ["--modes", "16", "--quadrature", "128"]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("OWF_LOG_LEVEL", "OWF_OUTPUT_DIR", "OWF_MODES"):
        monkeypatch.delenv(name, raising=False)


def _write_run(tmp_path, body: str) -> str:
    path = tmp_path / "run.yaml"
    path.write_text(body, encoding="utf-8")
    return str(path)


def test_parser_commands():
    args = build_parser().parse_args(["image", "--preset", "ex1-kite", "--variant", "classical"])
    assert args.command == "image" and args.variant == "classical"
    args = build_parser().parse_args(["reproduce", "ex4"])
    assert args.example == "ex4"


def test_synthesize_empty_disk(tmp_path):
    code = main(["synthesize", "--preset", "empty-disk", "--out", str(tmp_path), *FAST])
    assert code == 0
    run_dir = tmp_path / "empty-disk"
    payload = json.loads((run_dir / "cauchy.json").read_text(encoding="utf-8"))
    assert payload["n_modes"] == 16
    manifest = json.loads((run_dir / "manifest.json").read_text(encoding="utf-8"))
    assert "cauchy.json" in manifest["outputs"]
    assert "geometry.svg" in manifest["outputs"]


def test_coeffs_from_run_file(tmp_path):
    path = _write_run(
        tmp_path,
        "name: small\n"
        "scenario:\n"
        "  q: 4.0\n"
        "pipeline:\n"
        "  variant: classical\n"
        "  coefficients:\n"
        "    test_domain:\n"
        "      outer: {radius: 2.0}\n"
        "      inner: {radius: 0.5}\n"
        "    tau_grid: [0.5, 1.0]\n"
        "    kappa_grid: [2.0]\n",
    )
    code = main(["coeffs", "--config", path, "--out", str(tmp_path / "out"), *FAST])
    assert code == 0
    run_dir = tmp_path / "out" / "small"
    assert (run_dir / "coefficients.csv").exists()
    manifest = json.loads((run_dir / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "coeffs"
    assert manifest["parameters"]["estimate"]["sigma"] == pytest.approx(1.0)


def test_unknown_preset_exit_code(tmp_path):
    assert main(["image", "--preset", "nope", "--out", str(tmp_path)]) == 2


def test_preset_for_other_command(tmp_path):
    assert main(["image", "--preset", "ex2", "--out", str(tmp_path)]) == 2


def test_missing_run_file(tmp_path):
    assert main(["coeffs", "--config", str(tmp_path / "missing.yaml")]) == 4


def test_run_file_and_preset_together(tmp_path):
    path = _write_run(tmp_path, "scenario: {q: 4.0}\n")
    assert main(["synthesize", "--config", path, "--preset", "empty-disk"]) == 2


def test_polygon_touching_boundary(tmp_path):
    path = _write_run(
        tmp_path,
        "scenario:\n"
        "  q: 4.0\n"
        "  object:\n"
        "    kind: dirichlet\n"
        "    curve: {kind: polygon, vertices: [[0.0, -1.0], [5.0, 0.0], [0.0, 1.0]]}\n",
    )
    assert main(["synthesize", "--config", path, "--out", str(tmp_path / "out"), *FAST]) == 2
    assert not os.path.exists(tmp_path / "out" / "run" / "cauchy.json")


def test_settings_output_dir_only_fills_an_unset_run_dir():
    settings = {"output": {"dir": "shared"}}
    own = RunConfig.model_validate({"scenario": {"q": 4.0}, "output": {"dir": "mine"}})
    bare = RunConfig.model_validate({"scenario": {"q": 4.0}})
    assert cli._override_run(own, settings).output.dir == "mine"
    assert cli._override_run(bare, settings).output.dir == "shared"
    assert cli._override_run(own, settings, out_dir="cli").output.dir == "cli"


def test_reproduce_applies_modes_and_log_scale(tmp_path, monkeypatch):
    seen = []

    def record(run, settings, out_dir=None, data_path=None):
        seen.append(run)
        manifest = Manifest(os.path.join(out_dir, run.name), "record")
        manifest.write()
        return manifest

    monkeypatch.setattr(cli, "COMMAND_HANDLERS", {name: record for name in cli.COMMAND_HANDLERS})
    assert main(["reproduce", "ex2", "--out", str(tmp_path), "--modes", "16", "--log-scale"]) == 0
    assert seen
    assert all(run.boundary_data.n_modes == 16 for run in seen)
    assert all(run.output.log_scale for run in seen)
    top = json.loads((tmp_path / "ex2" / "manifest.json").read_text(encoding="utf-8"))
    assert top["parameters"]["modes"] == 16


@pytest.mark.slow
def test_reproduce_coefficients(tmp_path):
    assert main(["reproduce", "ex2", "--variant", "tilde", "--out", str(tmp_path)]) == 0
    manifest = json.loads((tmp_path / "ex2" / "tilde" / "ex2" / "manifest.json").read_text(encoding="utf-8"))
    estimate = manifest["parameters"]["estimate"]
    assert estimate["sigma"] == pytest.approx(1.0, abs=0.05)
    assert estimate["k"] == pytest.approx(2.0, abs=0.05)


@pytest.mark.slow
def test_reproduce_is_byte_identical(tmp_path):
    for name in ("first", "second"):
        assert main(["reproduce", "ex2", "--variant", "tilde", "--out", str(tmp_path / name), *FAST]) == 0
    first, second = tmp_path / "first", tmp_path / "second"
    files = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert files == sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    assert any(p.suffix == ".csv" for p in files)
    for rel in files:
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), str(rel)
