import json

import numpy as np
import pytest
from PIL import Image

from circlereg import AngleField, GridSpec, load_angle_image, load_signal_csv, save_signal_csv
from circlereg.cli import main


def _write_signal(path, values):
    with open(path, "w") as fh:
        for v in values:
            fh.write(f"{v}\n")


def _strip_times(report):
    report = dict(report)
    report.pop("wall_time_ms", None)
    return report


class TestExitCodes:
    def test_missing_input_file(self, tmp_path, capsys):
        rc = main(["denoise1d", "--input", str(tmp_path / "none.csv")])
        assert rc == 2

    def test_invalid_param_combination(self, tmp_path, capsys):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.linspace(0, 3, 20))
        rc = main(["denoise1d", "--input", str(sig), "--s", "1.0", "--k", "2", "--l", "0"])
        assert rc == 2
        assert "s=1 requires k=0" in capsys.readouterr().err

    def test_unknown_flag(self, tmp_path):
        assert main(["denoise1d", "--frobnicate"]) == 2

    def test_success(self, tmp_path):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.linspace(0, 3, 20))
        rc = main(["denoise1d", "--input", str(sig), "--steps", "5",
                   "--out", str(tmp_path / "o.csv")])
        assert rc == 0


class TestMakeRainbow:
    def test_writes_image_with_formula(self, tmp_path):
        out = tmp_path / "rain.png"
        rc = main(["make-rainbow", "--rows", "60", "--cols", "60", "--out", str(out)])
        assert rc == 0
        f = load_angle_image(out)
        expected = (4 * np.pi * np.arange(60) / 60) % (2 * np.pi)
        np.testing.assert_allclose(f.values[:, 0], expected, atol=2 * np.pi / 65536 + 1e-9)

    def test_render_option(self, tmp_path):
        out = tmp_path / "rain.png"
        hsv = tmp_path / "rain_hsv.png"
        rc = main(["make-rainbow", "--out", str(out), "--render", str(hsv)])
        assert rc == 0
        with Image.open(hsv) as img:
            assert img.mode == "RGB"


class TestAddNoise:
    def test_deterministic(self, tmp_path):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.linspace(0, 6, 50))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["add-noise", "--input", str(sig), "--sigma", "0.2",
                     "--seed", "9", "--out", str(a)]) == 0
        assert main(["add-noise", "--input", str(sig), "--sigma", "0.2",
                     "--seed", "9", "--out", str(b)]) == 0
        assert a.read_text() == b.read_text()


class TestReports:
    def test_denoise_report_schema(self, tmp_path):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.linspace(0, 3, 30))
        rep = tmp_path / "r.json"
        rc = main(["denoise1d", "--input", str(sig), "--steps", "5",
                   "--sigma", "0.1", "--clean", str(sig), "--report", str(rep)])
        assert rc == 0
        data = json.loads(rep.read_text())
        assert data["schema_version"] == "1"
        assert data["command"] == "denoise1d"
        assert data["seed"] == 0
        assert "wrapped_rmse" in data["metrics"]
        assert all(np.isfinite(e) for _, e in data["energy_trace"])

    def test_reports_identical_modulo_wall_time(self, tmp_path):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.linspace(0, 3, 30))
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        args = ["denoise1d", "--input", str(sig), "--steps", "10", "--sigma", "0.1",
                "--seed", "4", "--clean", str(sig)]
        assert main(args + ["--report", str(r1)]) == 0
        assert main(args + ["--report", str(r2)]) == 0
        a = _strip_times(json.loads(r1.read_text()))
        b = _strip_times(json.loads(r2.read_text()))
        assert a == b


class TestInpaintCommand:
    def test_end_to_end(self, tmp_path):
        n = 16
        arr = np.full((n, n), 16384, np.uint16)
        img = tmp_path / "in.png"
        Image.fromarray(arr).save(img)
        mask = np.zeros((n, n), np.uint8)
        mask[6:10, 6:10] = 255
        mpath = tmp_path / "mask.png"
        Image.fromarray(mask, mode="L").save(mpath)
        out = tmp_path / "out.png"
        rep = tmp_path / "rep.json"
        rc = main(["inpaint", "--input", str(img), "--mask", str(mpath),
                   "--p", "1.5", "--steps", "200", "--step-size", "0.00002",
                   "--eps", "0.2", "--clean", str(img),
                   "--out", str(out), "--report", str(rep)])
        assert rc == 0
        data = json.loads(rep.read_text())
        assert "wrapped_rmse_unknown" in data["metrics"]

    def test_mask_required(self, tmp_path):
        arr = np.zeros((8, 8), np.uint8)
        img = tmp_path / "in.png"
        Image.fromarray(arr, mode="L").save(img)
        assert main(["inpaint", "--input", str(img)]) == 2


class TestStudyCommands:
    def test_bbm_study_report(self, tmp_path, capsys):
        rep = tmp_path / "bbm.json"
        rc = main(["bbm-study", "--n", "512", "--eps-list", "0.05,0.02",
                   "--report", str(rep)])
        assert rc == 0
        rows = json.loads(rep.read_text())["metrics"]["rows"]
        assert len(rows) == 2
        assert all(np.isfinite(r["ratio"]) for r in rows)

    def test_conjecture_study_runs(self, tmp_path):
        rep = tmp_path / "conj.json"
        rc = main(["conjecture-study", "--n", "512", "--eps-list", "0.1,0.05",
                   "--s", "0.5", "--report", str(rep)])
        assert rc == 0
        data = json.loads(rep.read_text())
        assert "stabilized" in data["metrics"]

    def test_poincare_study_runs(self, tmp_path):
        rep = tmp_path / "poin.json"
        rc = main(["poincare-study", "--n", "48", "--samples", "20",
                   "--report", str(rep)])
        assert rc == 0
        assert np.isfinite(json.loads(rep.read_text())["metrics"]["max_ratio"])


class TestTvCommands:
    def test_tv_denoise_csv(self, tmp_path):
        sig = tmp_path / "s.csv"
        _write_signal(sig, np.concatenate([np.full(20, 1.0), np.full(20, 2.0)]))
        out = tmp_path / "o.csv"
        assert main(["tv-denoise", "--input", str(sig), "--lam", "0.5",
                     "--out", str(out)]) == 0
        f = load_signal_csv(out)
        assert f.grid.dims == (40,)

    def test_tv_inpaint_image(self, tmp_path):
        arr = np.full((12, 12), 10000, np.uint16)
        img = tmp_path / "in.png"
        Image.fromarray(arr).save(img)
        mask = np.zeros((12, 12), np.uint8)
        mask[4:8, 4:8] = 1
        mpath = tmp_path / "m.png"
        Image.fromarray(mask, mode="L").save(mpath)
        out = tmp_path / "o.png"
        assert main(["tv-inpaint", "--input", str(img), "--mask", str(mpath),
                     "--out", str(out)]) == 0
        g = load_angle_image(out)
        assert abs(g.values[5, 5] - g.values[0, 0]) < 0.01
