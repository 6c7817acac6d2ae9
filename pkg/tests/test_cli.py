import subprocess
import sys

import numpy as np
import pytest

from stc import cli, sequence_io
from stc.synth import SynthSpec, gen_translation_sequence


@pytest.fixture
def seq_dir(tmp_path):
    traj = tuple((80.0 + 1.0 * t, 60.0 + 0.5 * t) for t in range(8))
    frames, boxes = gen_translation_sequence(SynthSpec(frame_size=(160, 120), patch_size=(30, 24),
                                                       trajectory=traj, noise_sigma=1.0, seed=2))
    path = tmp_path / "seq"
    sequence_io.save_sequence(path, frames, boxes)
    return path


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_track_writes_one_line_per_frame(seq_dir, tmp_path, capsys):
    out = tmp_path / "out"
    assert run("track", "--seq", seq_dir, "--init", "66,49,30,24", "--out", out) == 0
    lines = (out / "results.txt").read_text().splitlines()
    assert len(lines) == 8
    assert lines[0] == "66.00,49.00,30.00,24.00"
    assert "frames=8" in capsys.readouterr().out


def test_track_defaults_to_groundtruth_box(seq_dir, tmp_path):
    out = tmp_path / "out"
    assert run("track", "--seq", seq_dir, "--out", out) == 0
    gt = (seq_dir / "groundtruth_rect.txt").read_text().splitlines()[0]
    assert (out / "results.txt").read_text().splitlines()[0] == gt


def test_track_without_init_or_groundtruth(seq_dir, tmp_path):
    (seq_dir / "groundtruth_rect.txt").unlink()
    with pytest.raises(SystemExit) as exc:
        run("track", "--seq", seq_dir, "--out", tmp_path / "out")
    assert exc.value.code != 0


def test_param_echo(seq_dir, tmp_path, capsys):
    out = tmp_path / "out"
    assert run("track", "--seq", seq_dir, "--init", "66,49,30,24", "--rho", "0.2", "--out", out) == 0
    assert "rho=0.2" in capsys.readouterr().out
    manifest = cli.read_manifest(out / "run-manifest.txt")
    assert manifest["rho"] == "0.2"
    assert manifest["lambda"] == "0.25"


def test_invalid_param_value(seq_dir, tmp_path, capsys):
    assert run("track", "--seq", seq_dir, "--init", "66,49,30,24", "--rho", "1.5",
               "--out", tmp_path / "out") == 1
    assert "rho" in capsys.readouterr().err


def test_eval_reports_metrics(seq_dir, tmp_path, capsys):
    out = tmp_path / "out"
    assert run("eval", "--seq", seq_dir, "--out", out) == 0
    text = capsys.readouterr().out
    assert "name,frames,mean_cle,success_rate,fps" in text
    row = (out / "metrics.csv").read_text().splitlines()[1].split(",")
    assert row[0] == "seq" and row[1] == "8"
    assert float(row[3]) == 1.0
    assert float(row[2]) < 2.0


def test_eval_single_frame(tmp_path):
    path = tmp_path / "one"
    frames, boxes = gen_translation_sequence(SynthSpec(frame_size=(80, 60), patch_size=(20, 20),
                                                       trajectory=((40.0, 30.0),)))
    sequence_io.save_sequence(path, frames, boxes)
    out = tmp_path / "out"
    assert run("eval", "--seq", path, "--out", out) == 0
    row = (out / "metrics.csv").read_text().splitlines()[1].split(",")
    assert float(row[2]) == 0.0 and float(row[3]) == 1.0


def test_eval_corrupt_groundtruth(seq_dir, tmp_path, capsys):
    gt = seq_dir / "groundtruth_rect.txt"
    lines = gt.read_text().splitlines()
    lines[4] = "1,2,3"
    gt.write_text("\n".join(lines) + "\n")
    out = tmp_path / "out"
    assert run("eval", "--seq", seq_dir, "--out", out) != 0
    assert "line 5" in capsys.readouterr().err
    assert not (out / "results.txt").exists()


def test_synth_preset(tmp_path):
    out = tmp_path / "syn"
    assert run("synth", "--preset", "translation-100", "--out", out) == 0
    assert len(list((out / "img").glob("*.png"))) == 100
    assert len((out / "groundtruth_rect.txt").read_text().splitlines()) == 100


def test_synth_unknown_preset(tmp_path, capsys):
    assert run("synth", "--preset", "nope", "--out", tmp_path / "syn") == 1
    assert "zoom-60" in capsys.readouterr().err


def test_bench_report(tmp_path, capsys):
    out = tmp_path / "b"
    assert run("bench", "--frames", "20", "--runs", "5", "--warmup", "0", "--out", out) == 0
    text = capsys.readouterr().out
    assert "window=80x40" in text and "median_fps=" in text and "iqr_fps=" in text
    assert (out / "bench.txt").read_text() == text


@pytest.mark.parametrize("argv", [
    ["bench", "--frames", "0"],
    ["bench", "--runs", "3"],
    ["track", "--bogus"],
    ["track", "--init", "1,2,3"],
    ["frobnicate"],
])
def test_usage_errors(argv, tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(*argv, "--out", tmp_path / "x")
    assert exc.value.code == 2


def test_no_abbreviations(seq_dir, tmp_path):
    with pytest.raises(SystemExit):
        run("track", "--seq", seq_dir, "--in", "66,49,30,24", "--out", tmp_path / "x")


def test_manifest_rerun_is_bit_identical(seq_dir, tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert run("track", "--seq", seq_dir, "--init", "66,49,30,24", "--rho", "0.1",
               "--alpha", "2.5", "--out", first) == 0
    assert run("track", "--manifest", first / "run-manifest.txt", "--out", second) == 0
    assert (first / "results.txt").read_bytes() == (second / "results.txt").read_bytes()
    assert cli.read_manifest(second / "run-manifest.txt")["alpha"] == "2.5"


def test_dump_confidence_and_overlay(seq_dir, tmp_path):
    out = tmp_path / "out"
    assert run("track", "--seq", seq_dir, "--init", "66,49,30,24", "--dump-confidence",
               "--overlay", "--out", out) == 0
    pgms = sorted((out / "confidence").glob("*.pgm"))
    assert [p.name for p in pgms] == [f"{i:04d}.pgm" for i in range(2, 9)]
    assert pgms[0].read_bytes().startswith(b"P5\n60 48\n255\n")
    assert len(list((out / "overlay").glob("*.png"))) == 8


def test_run_tracker_times_only_tracking():
    frames = [np.random.default_rng(i).uniform(0, 255, (60, 80)) for i in range(3)]
    from stc.tracker import BoundingBox
    seen = []
    boxes, elapsed = cli.run_tracker(frames, BoundingBox(30, 20, 16, 16), None,
                                     lambda i, f, b, c: seen.append(i))
    assert len(boxes) == 3 and seen == [0, 1, 2] and elapsed > 0


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "stc.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("stc ")
