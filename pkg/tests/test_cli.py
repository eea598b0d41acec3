"""Tests for the colorseg command line"""

import json
from pathlib import Path

import numpy as np
import pytest

from src.cli import ColourSegCLI
from src.main import main
from src.raster import read_label_map, write_label_map, write_rgb
from src.reports import EvalReportDocument, RunReportDocument, report_schema
from src.synth import SynthSceneSpec, generate_scene

FAST = ["--radius", "2"]


def _required(kind: str):
    return report_schema(kind)["required"]


@pytest.fixture
def scene_png(tmp_path: Path) -> Path:
    path = tmp_path / "scene.png"
    scene = generate_scene(SynthSceneSpec("mondrian-rank0", 24, 20, segments=3, noise=2.0, seed=5))
    write_rgb(path, scene.image)
    return path


def test_segment_writes_label_map_sidecar_and_report(tmp_path, scene_png):
    report_path = tmp_path / "run.json"
    code = main(["segment", str(scene_png), "--report", str(report_path), "--sigma0", "7", *FAST])
    assert code == 0

    labels = read_label_map(tmp_path / "scene.labels.png")
    assert labels.shape == (20, 24)
    sidecar = json.loads((tmp_path / "scene.labels.json").read_text())
    assert sidecar["segment_count"] == int(labels.max()) + 1
    assert (sidecar["width"], sidecar["height"]) == (24, 20)
    assert sidecar["config"]["sigma0"] == 7.0

    report = json.loads(report_path.read_text())
    RunReportDocument.model_validate(report)
    assert set(_required("run")) <= set(report)
    assert [s["name"] for s in report["stages"]][0] == "rank0"
    assert report["segment_count"] == sidecar["segment_count"]
    assert report["config"]["sigma1"] == pytest.approx(7.0 * (2 / 3) ** 0.5)


def test_segment_is_byte_reproducible(tmp_path, scene_png):
    first, second = tmp_path / "first.png", tmp_path / "second.png"
    assert main(["segment", str(scene_png), "-o", str(first), *FAST]) == 0
    assert main(["segment", str(scene_png), "-o", str(second), *FAST]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_ablation_flags_are_echoed(tmp_path, scene_png):
    report_path = tmp_path / "run.json"
    args = ["segment", str(scene_png), "--report", str(report_path), "--no-offscale", "--no-lt-check", *FAST]
    assert main(args) == 0
    report = json.loads(report_path.read_text())
    assert report["config"]["use_offscale"] is False
    assert report["config"]["use_lt_check"] is False
    assert report["stages"][-1]["skipped"] is True
    assert report["locked_edges"] == 0
    steps = {s["name"]: s["skipped"] for s in report["steps"]}
    assert steps == {"smoothing": False, "homography": False, "lt-check": True}


def test_preset_and_config_file(tmp_path, scene_png):
    config_file = tmp_path / "params.cfg"
    config_file.write_text("delta_l = 27\n")
    report_path = tmp_path / "run.json"
    args = ["segment", str(scene_png), "--preset", "iitp-close", "--config", str(config_file)]
    assert main([*args, "--report", str(report_path), *FAST]) == 0
    report = json.loads(report_path.read_text())
    assert report["preset"] == "iitp-close"
    assert report["config"]["mu_b"] == 160.0
    assert report["config"]["delta_l"] == 27.0


def test_missing_input_leaves_no_outputs(tmp_path):
    code = main(["segment", str(tmp_path / "absent.png"), "--report", str(tmp_path / "run.json")])
    assert code == 2
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize(
    "argv",
    [
        ["segment"],
        ["unknown-command"],
        ["synth", "plaid", "-o", "out"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == 2


def test_invalid_parameters_exit_with_two(scene_png):
    assert main(["segment", str(scene_png), "--homography-b", "0.2"]) == 2


def test_help_exits_cleanly():
    assert main(["--help"]) == 0


def test_eval_perfect_predictions(tmp_path):
    pred, gt = tmp_path / "pred", tmp_path / "gt"
    pred.mkdir()
    gt.mkdir()
    labels = np.repeat(np.array([[1, 1, 2, 2, 3]], dtype=np.uint16), 4, axis=0)
    write_label_map(gt / "img.png", labels)
    write_label_map(pred / "img.png", labels + 100)
    output = tmp_path / "eval.json"
    assert main(["eval", str(pred), str(gt), "-o", str(output), "--threads", "2"]) == 0
    report = json.loads(output.read_text())
    EvalReportDocument.model_validate(report)
    assert set(_required("eval")) <= set(report)
    assert report["dataset"]["miou"] == 1.0
    assert report["dataset"]["gt_segments"] == 3
    assert report["success"] is True


def test_eval_with_no_predictions_fails(tmp_path):
    pred, gt = tmp_path / "pred", tmp_path / "gt"
    pred.mkdir()
    gt.mkdir()
    write_label_map(gt / "img.png", np.ones((2, 2), dtype=np.uint16))
    output = tmp_path / "eval.json"
    assert main(["eval", str(pred), str(gt), "-o", str(output)]) != 0
    assert not output.exists()


def test_synth_writes_images_and_ground_truth(tmp_path):
    out = tmp_path / "scenes"
    args = ["synth", "offscale-stripe", "-o", str(out), "--width", "32", "--height", "32"]
    assert main([*args, "--segments", "2", "--seed", "5", "--count", "2"]) == 0
    assert sorted(p.name for p in (out / "images").iterdir()) == [
        "offscale-stripe-0005.png",
        "offscale-stripe-0006.png",
    ]
    gt = read_label_map(out / "gt" / "offscale-stripe-0006.png")
    assert np.unique(gt).tolist() == [1, 2]
    assert (out / "masks" / "offscale-stripe-0005.stripe.png").exists()


def test_synth_then_sweep(tmp_path):
    out = tmp_path / "scenes"
    args = ["synth", "mondrian-rank0", "-o", str(out), "--width", "24", "--height", "24"]
    assert main([*args, "--segments", "3", "--noise", "0", "--count", "2"]) == 0
    output = tmp_path / "sweep.json"
    sweep_args = ["sweep", str(out / "images"), str(out / "gt"), "-o", str(output)]
    grid = ["--sigma0-values", "10,2000", "--delta-l-values", "22.5"]
    assert main([*sweep_args, *grid, "--a", "0", "--b", "1", "--smoothing", "none"]) == 0
    report = json.loads(output.read_text())
    assert len(report["grid"]) == 2
    assert report["best"]["params"] == {"sigma0": 10.0, "delta_l": 22.5}
    assert report["best"]["miou"] == 1.0
    assert report["base_config"]["b"] == 1.0


@pytest.mark.parametrize("kind,model", [("run", RunReportDocument), ("eval", EvalReportDocument)])
def test_schema_command_writes_the_model_schema(tmp_path, kind, model):
    output = tmp_path / f"{kind}.schema.json"
    assert main(["schema", kind, "-o", str(output)]) == 0
    schema = json.loads(output.read_text())
    assert schema["$schema"] == "https://json-schema.org/draft/2020-12/schema"
    schema.pop("$schema")
    assert schema == json.loads(json.dumps(model.model_json_schema()))


def test_schema_command_rejects_unknown_kind(tmp_path):
    assert main(["schema", "sweep", "-o", str(tmp_path / "x.json")]) == 2
    assert not (tmp_path / "x.json").exists()


def test_presets_command():
    assert main(["presets"]) == 0


def test_environment_controls_logging(tmp_path, monkeypatch):
    log_file = tmp_path / "colorseg.log"
    monkeypatch.setenv("COLORSEG_LOG_FILE", str(log_file))
    monkeypatch.setenv("COLORSEG_LOG_LEVEL", "DEBUG")
    cli = ColourSegCLI()
    assert cli.config_manager.config.log_file == str(log_file)
    assert cli.run(["presets"]) == 0
    assert log_file.exists()
