import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqtik import SpaceParams
from seqtik.errors import InvalidInputError
from seqtik.experiments import cli
from seqtik.experiments.report import emit_report, load_report_json, read_report_csv
from seqtik.experiments.sweep import (
    SweepConfig,
    SweepReport,
    bound_ratios,
    fit_slope,
    has_plateau,
    resolve_truncation,
    run_sweep,
)

SPARSE = SpaceParams(0, 0, 2, 4, 4)
OVERSMOOTH = SpaceParams(0, 1, 2, 4, 4)


def small_config(**kw):
    base = dict(params=OVERSMOOTH, n=256, deltas=(1e-1, 1e-2, 1e-3), trials_per_delta=2, seed=3,
                post_process=True)
    base.update(kw)
    return SweepConfig(**base)


class TestFitSlope:
    def test_identity(self):
        slope, intercept, r2 = fit_slope([1, 2, 4, 8], [1, 2, 4, 8])
        assert slope == pytest.approx(1.0, abs=1e-14)
        assert intercept == pytest.approx(0.0, abs=1e-14)
        assert r2 == pytest.approx(1.0, abs=1e-14)

    def test_power_law(self):
        xs = [0.1, 0.3, 1.0, 7.0]
        slope, intercept, _ = fit_slope(xs, [5 * x ** 0.5 for x in xs])
        assert slope == pytest.approx(0.5, abs=1e-14)
        assert intercept == pytest.approx(math.log(5), abs=1e-13)

    def test_constant(self):
        assert fit_slope([1, 2, 3], [4, 4, 4])[0] == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("xs,ys", [([1, 2], [1, 2]), ([1, 0, 2], [1, 1, 1]),
                                       ([1, 2, 3], [1, -1, 1]), ([1, 2, 3], [1, 2])])
    def test_rejections(self, xs, ys):
        with pytest.raises(InvalidInputError):
            fit_slope(xs, ys)

    @given(st.floats(-3, 3), st.floats(0.1, 10))
    def test_recovers_exact_exponent(self, k, c):
        xs = np.geomspace(1e-4, 1e-1, 8)
        assert fit_slope(xs, c * xs ** k)[0] == pytest.approx(k, abs=1e-9)


class TestConfig:
    def test_round_trip(self):
        cfg = small_config()
        assert SweepConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

    def test_unknown_field(self):
        data = small_config().to_dict()
        data["colour"] = "red"
        with pytest.raises(InvalidInputError):
            SweepConfig.from_dict(data)

    @pytest.mark.parametrize("deltas", [(0.1, 0.01), (0.1, 0.1, 0.01), (2.0, 0.1, 0.01), (0.01, 0.1, 0.001)])
    def test_bad_deltas(self, deltas):
        with pytest.raises(InvalidInputError):
            small_config(deltas=deltas)

    def test_truncation_sparse(self):
        n, tail, ok = resolve_truncation(SweepConfig(SPARSE, truth_kind="sparse"))
        assert (n, tail, ok) == (64, 0.0, True)

    def test_truncation_capped_and_flagged(self, caplog):
        n, tail, ok = resolve_truncation(SweepConfig(OVERSMOOTH, max_n=2 ** 10))
        assert n == 2 ** 10 and not ok and tail > 1e-6
        assert "truth tail" in caplog.text


class TestRunSweep:
    def test_shape_and_metadata(self):
        report = run_sweep(small_config())
        assert len(report.rows) == 3
        assert report.metadata["n"] == 256
        assert report.predicted["gamma1"] == pytest.approx(2 / 3)
        assert all(r.post_support is not None for r in report.rows)
        assert report.slopes["slope_err_tau"] is not None
        assert 1 <= report.metadata["d1"] <= report.metadata["d2"] <= 2

    def test_thread_independence(self):
        a = run_sweep(small_config(), threads=1)
        b = run_sweep(small_config(), threads=3)
        assert a == b
        assert emit_report(a, "json", None) == emit_report(b, "json", None)

    def test_seed_changes_result(self):
        assert run_sweep(small_config(seed=1)) != run_sweep(small_config(seed=2))

    def test_ratios(self):
        report = run_sweep(small_config())
        ratios = bound_ratios(report, OVERSMOOTH)
        assert set(ratios) == {"objective", "error_a", "penalty"}
        assert all(len(v) == 3 and all(x >= 0 for x in v) for v in ratios.values())

    def test_plateau(self):
        assert has_plateau([1, 1, 1, 1.5, 1.9, 2.0])
        assert not has_plateau([1, 1, 1, 1, 1, 2.5])
        with pytest.raises(InvalidInputError):
            has_plateau([1, 2])


class TestReport:
    def test_json_round_trip_bit_exact(self, tmp_path):
        report = run_sweep(small_config())
        path = tmp_path / "r.json"
        emit_report(report, "json", path)
        back = load_report_json(path)
        assert back == report
        for r1, r2 in zip(back.rows, report.rows):
            assert r1.err_tau.hex() == r2.err_tau.hex()

    def test_csv_layout_and_doubles(self, tmp_path):
        report = run_sweep(small_config())
        path = tmp_path / "r.csv"
        emit_report(report, "csv", path)
        rows, comments = read_report_csv(path)
        assert len(rows) == len(report.rows)
        for parsed, row in zip(rows, report.rows):
            assert parsed["err_tau"] == row.err_tau
            assert parsed["alpha"] == row.alpha
        assert float(comments["slope_err_tau"]) == report.slopes["slope_err_tau"]
        assert float(comments["gamma1"]) == report.predicted["gamma1"]
        header = path.read_text().splitlines()[0]
        assert header.startswith("delta,alpha,err_tau")

    def test_unknown_format(self):
        with pytest.raises(InvalidInputError):
            emit_report(SweepReport([], {}, {}, {}), "xml", None)


class TestCli:
    def write_config(self, tmp_path, **kw):
        cfg = small_config(**kw).to_dict()
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_sweep_json(self, tmp_path):
        cfg = self.write_config(tmp_path)
        out = tmp_path / "out.json"
        assert cli.main(["sweep", "--config", str(cfg), "--out", str(out), "--threads", "2"]) == 0
        data = json.loads(out.read_text())
        assert len(data["rows"]) == 3

    def test_sweep_csv_with_seed_override(self, tmp_path):
        cfg = self.write_config(tmp_path)
        out = tmp_path / "out.csv"
        assert cli.main(["sweep", "--config", str(cfg), "--out", str(out), "--format", "csv",
                         "--seed", "11"]) == 0
        _, comments = read_report_csv(out)
        assert comments["seed"] == "11"

    def test_solve_from_sweep_config_and_problem_file(self, tmp_path):
        cfg = self.write_config(tmp_path, n=8)
        out = tmp_path / "sol.json"
        assert cli.main(["solve", "--config", str(cfg), "--out", str(out), "--delta", "0.01"]) == 0
        data = json.loads(out.read_text())
        assert len(data["solution"]["u_reg"]) == 8
        prob = tmp_path / "prob.json"
        prob.write_text(json.dumps(data["problem"]))
        out2 = tmp_path / "sol2.json"
        assert cli.main(["solve", "--config", str(prob), "--out", str(out2)]) == 0
        assert json.loads(out2.read_text())["solution"] == data["solution"]

    def test_check_and_oracle(self, tmp_path, capsys):
        assert cli.main(["check", "--cases", "200", "--seed", "1", "--out", str(tmp_path / "c.json")]) == 0
        assert len(json.loads((tmp_path / "c.json").read_text())) == 4
        assert cli.main(["oracle-compare", "--seed", "2"]) == 0

    def test_unknown_field_gives_error_object(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"params": OVERSMOOTH.to_dict(), "bogus": 1}))
        assert cli.main(["sweep", "--config", str(path)]) == 2
        err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert err["error"] == "InvalidInputError"

    def test_missing_file(self, tmp_path, capsys):
        assert cli.main(["sweep", "--config", str(tmp_path / "nope.json")]) == 2
        assert "error" in json.loads(capsys.readouterr().err.strip().splitlines()[-1])
