import json

import numpy as np
import pytest

from eulergrid import (
    BinaryGrid,
    chi,
    make_grid,
    noise_mask,
    sample_threshold,
)
from eulergrid.cli import build_metrics_report, main
from eulergrid.io_formats import read_bvol, write_bvol, write_pgm
from eulergrid.tvd import ViolationMap, normalized_threshold_mask
from tests.conftest import random_grid


@pytest.fixture
def ring_pgm(tmp_path, ring2d):
    path = tmp_path / "ring.pgm"
    path.write_bytes(write_pgm(ring2d))
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestChiCommand:
    def test_ring_prints_zero(self, ring_pgm, capsys):
        code, out, _ = run(["chi", ring_pgm], capsys)
        assert code == 0
        assert out.strip() == "0"

    def test_missing_file_is_format_error(self, tmp_path, capsys):
        missing = tmp_path / "missing.pgm"
        code, _, err = run(["chi", missing], capsys)
        assert code == 2
        assert "missing.pgm" in err

    def test_bvol_3d(self, tmp_path, capsys, hollow_shell):
        path = tmp_path / "shell.bvol"
        path.write_bytes(write_bvol(hollow_shell))
        code, out, _ = run(["chi", path], capsys)
        assert code == 0
        assert out.strip() == "2"

    def test_probability_map_binarized(self, tmp_path, capsys):
        probs = np.array([[0.9, 0.4], [0.1, 0.51]], dtype=np.float32)
        path = tmp_path / "probs.bvol"
        path.write_bytes(write_bvol(probs))
        code, out, _ = run(["chi", path], capsys)
        assert code == 0
        assert out.strip() == str(chi(BinaryGrid(probs >= 0.5)))

    def test_unknown_extension_requires_format(self, tmp_path, capsys):
        path = tmp_path / "grid.dat"
        path.write_bytes(write_bvol(make_grid(2, (2, 2), 1)))
        code, _, err = run(["chi", path], capsys)
        assert code == 1
        code, out, _ = run(["chi", path, "--format", "bvol"], capsys)
        assert code == 0
        assert out.strip() == "1"


class TestBettiCommand:
    def test_ring(self, ring_pgm, capsys):
        code, out, _ = run(["betti", ring_pgm], capsys)
        assert code == 0
        assert out.split() == ["1", "1"]


class TestChiMapCommand:
    def test_writes_scaled_i32(self, tmp_path, ring_pgm, capsys, ring2d):
        out_path = tmp_path / "map.bvol"
        code, _, _ = run(["chi-map", ring_pgm, out_path, "--patch", "2"], capsys)
        assert code == 0
        values = read_bvol(out_path.read_bytes())
        assert values.dtype == np.int32
        from eulergrid import chi_map

        assert np.array_equal(values, chi_map(ring2d, patch=2).values)


class TestMetricsCommand:
    def test_self_comparison(self, ring_pgm, capsys):
        code, out, _ = run(["metrics", ring_pgm, ring_pgm], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["dice"] == 1
        assert doc["betti_error_per_dim"] == [0, 0]
        assert doc["betti_error_sum"] == 0
        assert doc["chi_error"] == 0
        assert doc["params"]["patch"] == 32

    def test_report_relation_mean_sum(self, tmp_path, capsys, rng):
        pred = random_grid(rng, 2, hi=10)
        gt = BinaryGrid(rng.random(pred.dims) < 0.4)
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        a.write_bytes(write_pgm(pred))
        b.write_bytes(write_pgm(gt))
        code, out, _ = run(["metrics", a, b], capsys)
        assert code == 0
        doc = json.loads(out)
        mean = doc["betti_error_mean"]
        if isinstance(mean, str) and "/" in mean:
            num, den = mean.split("/")
            assert int(num) * len(doc["betti_error_per_dim"]) == doc[
                "betti_error_sum"
            ] * int(den)
        else:
            assert float(mean) * len(doc["betti_error_per_dim"]) == pytest.approx(
                doc["betti_error_sum"]
            )

    def test_report_builder_matches_library(self, ring2d):
        report = build_metrics_report(ring2d, ring2d)
        assert report["chi_pred"] == report["chi_gt"] == 0
        assert report["betti_pred"] == [1, 1]


class TestViolationCommand:
    def test_writes_map_and_raster(self, tmp_path, capsys, ring2d):
        from eulergrid import flip_cell

        pred = flip_cell(ring2d, (0, 1))
        p, g = tmp_path / "pred.pgm", tmp_path / "gt.pgm"
        p.write_bytes(write_pgm(pred))
        g.write_bytes(write_pgm(ring2d))
        out_path = tmp_path / "viol.bvol"
        code, _, _ = run(["violation", p, g, out_path], capsys)
        assert code == 0
        values = read_bvol(out_path.read_bytes())
        from eulergrid import violation_map

        assert np.array_equal(values, violation_map(pred, ring2d, patch=32).values)
        raster = (tmp_path / "viol.pgm").read_bytes()
        assert raster.startswith(b"P5")


class TestViolation3D:
    def test_raster_is_depth_projection(self, tmp_path, capsys, hollow_shell):
        from eulergrid import flip_cell

        pred = flip_cell(hollow_shell, (0, 0, 0))
        p, g = tmp_path / "pred.bvol", tmp_path / "gt.bvol"
        p.write_bytes(write_bvol(pred))
        g.write_bytes(write_bvol(hollow_shell))
        out_path = tmp_path / "viol.bvol"
        code, _, _ = run(["violation", p, g, out_path], capsys)
        assert code == 0
        values = read_bvol(out_path.read_bytes())
        assert values.shape == pred.dims
        raster = (tmp_path / "viol.pgm").read_bytes()
        assert raster.startswith(b"P5")
        from eulergrid.io_formats import read_pgm

        read_pgm(raster)  # well-formed 2D projection


class TestMaskCommand:
    def test_matches_library_pipeline(self, tmp_path, capsys, ring2d):
        from eulergrid import flip_cell, violation_map

        pred = flip_cell(ring2d, (0, 1))
        vmap = violation_map(pred, ring2d, patch=32)
        p = tmp_path / "pred.pgm"
        v = tmp_path / "v.bvol"
        out_path = tmp_path / "masked.bvol"
        p.write_bytes(write_pgm(pred))
        v.write_bytes(write_bvol(vmap.values))
        code, _, _ = run(["mask", p, v, out_path, "--seed", "42"], capsys)
        assert code == 0
        got = read_bvol(out_path.read_bytes())
        assert got.dtype == np.float32

        t = sample_threshold(42)
        raw = ViolationMap(
            values=vmap.values.astype(np.int64), scale=1, patch=32, mode="tiled"
        )
        mask = normalized_threshold_mask(raw, t)
        expected = noise_mask(pred, mask, 42).values.astype(np.float32)
        assert got.tobytes() == expected.tobytes()

    def test_explicit_threshold(self, tmp_path, capsys, ring2d):
        from eulergrid import flip_cell, violation_map

        pred = flip_cell(ring2d, (0, 1))
        vmap = violation_map(pred, ring2d, patch=32)
        p = tmp_path / "pred.pgm"
        v = tmp_path / "v.bvol"
        out_path = tmp_path / "masked.bvol"
        p.write_bytes(write_pgm(pred))
        v.write_bytes(write_bvol(vmap.values))
        code, _, _ = run(
            ["mask", p, v, out_path, "--threshold", "0.5", "--seed", "1"], capsys
        )
        assert code == 0


class TestDeriveCommand:
    def test_document_shape(self, tmp_path, capsys):
        out_path = tmp_path / "coeffs.json"
        code, _, _ = run(
            ["derive-3d-coefficients", "--output", out_path, "--samples", "64"],
            capsys,
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert doc["rank"] == 22
        assert doc["unique"] is True
        assert len(doc["classes"]) == 22
        assert sum(c["orbit_size"] for c in doc["classes"]) == 256
        for c in doc["classes"]:
            assert 0 <= c["representative"] <= 255
            Fraction = __import__("fractions").Fraction
            Fraction(c["coefficient"])  # parses as an exact rational


class TestBenchCommand:
    def test_csv_schema(self, tmp_path, capsys, monkeypatch):
        import eulergrid.cli as cli

        monkeypatch.setattr(
            cli, "bench_rows", lambda seed=0: [("chi-2d", 64, 4096, 123456)]
        )
        out_path = tmp_path / "bench.csv"
        code, _, _ = run(["bench", "--output", out_path], capsys)
        assert code == 0
        lines = out_path.read_text().strip().splitlines()
        assert lines[0] == "op,extent,cells,ns_median"
        assert lines[1] == "chi-2d,64,4096,123456"


class TestExitCodes:
    def test_usage_error(self, capsys):
        code, _, err = run(["no-such-command"], capsys)
        assert code == 1
        assert err

    def test_corrupt_bvol_is_format_error(self, tmp_path, capsys):
        path = tmp_path / "bad.bvol"
        path.write_bytes(b"BVL2aaaaaaaaaaaaaaaa")
        code, _, err = run(["chi", path], capsys)
        assert code == 2
        assert "magic" in err
