import io as _io
import json
import math

import jsonschema
import numpy as np
import pytest

from chebext.harness import (
    CSV_HEADER,
    ComplianceRow,
    ExperimentConfig,
    Resolution,
    inject_noise,
    quadrature_floor,
    row_seed,
    run_compliance,
    run_to_directory,
    splitmix64,
    uniform_stream,
    write_rows_csv,
)
from chebext.chebyshev import NodeGrid
from chebext.examples import suite_member


class TestSplitMix:
    def test_reference_values(self):
        # first outputs of the reference generator seeded with 0 (state advances by the golden gamma)
        gamma = 0x9E3779B97F4A7C15
        states = np.array([0, gamma, (2 * gamma) % 2**64], dtype=np.uint64)
        out = [int(z) for z in splitmix64(states)]
        assert out[0] == 0xE220A8397B1DCDAF
        assert out[1] == 0x6E789E6AA1B965F4
        assert out[2] == 0x06C45D188009454F

    def test_uniform_range(self):
        u = uniform_stream(3, 0, 10_000)
        assert u.min() >= 0 and u.max() < 1
        assert abs(u.mean() - 0.5) < 0.02

    def test_prefix_stable(self):
        assert np.array_equal(uniform_stream(9, 1, 50), uniform_stream(9, 1, 500)[:50])

    def test_streams_differ(self):
        assert not np.array_equal(uniform_stream(9, 0, 20), uniform_stream(9, 1, 20))

    def test_row_seed_distinct(self):
        assert len({row_seed(1, k) for k in range(1000)}) == 1000


class TestNoise:
    def test_worst_case_magnitude(self):
        samples = np.zeros((32, 32), dtype=complex)
        noisy = inject_noise(samples, 1e-6, "worst", seed=4)
        assert noisy.shape == samples.shape
        assert np.allclose(np.abs(noisy), 1e-6, rtol=1e-14, atol=0)

    def test_uniform_bounded(self):
        noisy = inject_noise(np.zeros(4096), 2.5, "uniform", seed=4)
        assert np.abs(noisy).max() <= 2.5
        assert np.abs(noisy).min() < 0.01

    def test_reproducible(self):
        a = inject_noise(np.ones(100), 1e-3, seed=11)
        b = inject_noise(np.ones(100), 1e-3, seed=11)
        assert a.tobytes() == b.tobytes()

    def test_seeds_independent(self):
        a = inject_noise(np.zeros(10_000), 1.0, seed=5)
        b = inject_noise(np.zeros(10_000), 1.0, seed=6)
        assert np.mean(a != b) >= 0.99

    @pytest.mark.parametrize("delta", [0.0, -1.0])
    def test_rejects_nonpositive(self, delta):
        with pytest.raises(ValueError):
            inject_noise(np.zeros(4), delta)

    def test_rejects_mode(self):
        with pytest.raises(ValueError):
            inject_noise(np.zeros(4), 1.0, mode="gaussian")


class TestConfig:
    def test_defaults_per_dimension(self):
        assert ExperimentConfig.default("E1", 2).resolution == Resolution(256, 3.0, 129, 64)
        assert ExperimentConfig.default("E1", 1).resolution == Resolution()

    def test_round_trip(self, tmp_path):
        cfg = ExperimentConfig.default("E3", 1, seed=7)
        cfg.dump(tmp_path / "c.json")
        back = ExperimentConfig.load(tmp_path / "c.json")
        assert back == cfg
        assert back.to_dict() == cfg.to_dict()

    def test_minimal_document(self):
        cfg = ExperimentConfig.from_dict({"schema": 1, "experiment": "E2"})
        assert cfg.suite == "indicator" and cfg.R_factors == (2.0,)

    def test_partial_resolution(self):
        cfg = ExperimentConfig.from_dict({"schema": 1, "experiment": "E1", "d": 2,
                                          "resolution": {"nodes": 48}})
        assert cfg.resolution == Resolution(256, 3.0, 129, 48)

    @pytest.mark.parametrize("doc", [
        {"experiment": "E1"},
        {"schema": 2, "experiment": "E1"},
        {"schema": 1, "experiment": "E9"},
        {"schema": 1, "experiment": "E1", "colour": "red"},
        {"schema": 1, "experiment": "E1", "noise": "loud"},
    ])
    def test_schema_rejects(self, doc):
        with pytest.raises(jsonschema.ValidationError):
            ExperimentConfig.from_dict(doc)


class TestRows:
    def test_header(self):
        buf = _io.StringIO()
        write_rows_csv(buf, [])
        assert buf.getvalue() == "delta,tau,R,rho,n,measured,bound,ratio,hyp_ok\n"
        assert ",".join(CSV_HEADER) == buf.getvalue().strip()

    def test_full_precision(self):
        row = ComplianceRow(0.1, 0.5, 2.0, 8.0, 7, 1 / 3, 2 / 3, True)
        fields = row.csv_fields()
        assert float(fields[5]) == 1 / 3
        assert fields[7] == "0.5" and fields[8] == "1"

    def test_ratio_not_clipped(self):
        row = ComplianceRow(1e-3, math.nan, 1.0, 4.0, 3, 5.0, 2.0, True)
        assert row.ratio == 2.5

    def test_failed_hypothesis_has_no_ratio(self):
        row = ComplianceRow(1e-3, math.nan, 1.0, 2.0, 3, 5.0, math.nan, False)
        assert math.isnan(row.ratio)
        assert row.csv_fields()[-1] == "0"


class TestExperiments:
    def test_quadrature_floor_small(self):
        member = suite_member("indicator", 1)
        assert 0 < quadrature_floor(member, NodeGrid(1, 128, 1.0)) < 1e-14

    def test_e1_small_sweep(self):
        cfg = ExperimentConfig.default("E1", 1, deltas=("floor", 1e-6), R_factors=(0.5, 2.0),
                                       rho_factors=(0.5, 1.0), orders=(4, 12))
        rows, summary = run_compliance(cfg)
        assert len(rows) == 2 * 2 * 2 * 2
        # R < r and rho < 4R/r are recorded, never dropped
        assert len(summary.hypothesis_failures) == 12
        assert all(r.ratio <= 1 for r in rows if r.hypothesis_ok)
        assert summary.passed

    def test_violations_are_reported(self, monkeypatch):
        from chebext import harness

        monkeypatch.setattr(harness.bounds, "bound_lemma21", lambda *a: 1e-30)
        cfg = ExperimentConfig.default("E1", 1, deltas=(1e-6,), R_factors=(2.0,),
                                       rho_factors=(1.0,), orders=(4,))
        rows, summary = run_compliance(cfg)
        assert rows[0].ratio > 1
        assert len(summary.violations) == 1 and not summary.passed

    def test_e3_zero_padding_identity(self):
        cfg = ExperimentConfig.default("E3", 1, deltas=(1e-6,), taus=(0.0, 0.5), smoothness=(1,))
        rows, summary = run_compliance(cfg)
        assert summary.checks["tau0_bit_identical"]
        assert rows[0].n == 0 and rows[1].n > 0
        assert summary.passed

    def test_e5_rows(self):
        cfg = ExperimentConfig.default("E5", 1, pairs=3)
        rows, summary = run_compliance(cfg)
        assert len(rows) == 3
        assert summary.metrics["plan_rel_dev"] <= 1e-14
        assert all(r.measured <= r.bound for r in rows)


class TestDeterminism:
    def test_byte_identical_outputs(self, tmp_path):
        cfg = ExperimentConfig.default("E2", 1, deltas=(1e-4, 1e-6, 1e-8))
        run_to_directory(cfg, tmp_path / "a")
        run_to_directory(cfg, tmp_path / "b")
        for name in ("e2.csv", "e2_summary.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_noise(self, tmp_path):
        base = dict(deltas=(1e-4, 1e-6))
        run_to_directory(ExperimentConfig.default("E2", 1, seed=1, **base), tmp_path / "a")
        run_to_directory(ExperimentConfig.default("E2", 1, seed=2, **base), tmp_path / "b")
        assert (tmp_path / "a" / "e2.csv").read_bytes() != (tmp_path / "b" / "e2.csv").read_bytes()

    def test_summary_json(self, tmp_path):
        summary = run_to_directory(ExperimentConfig.default("E2", 1, deltas=(1e-4, 1e-8)), tmp_path)
        data = json.loads((tmp_path / "e2_summary.json").read_text())
        assert data["experiment"] == "E2" and data["rows"] == 2
        assert data["passed"] == summary.passed
