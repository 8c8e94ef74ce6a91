"""Acceptance criteria 1-9, each run at its stated tolerance.

Every test appends one ``PASS``/``FAIL`` line that the terminal summary
prints under "acceptance criteria".
"""
import time

import pytest

from seqtik import SpaceParams
from seqtik.experiments.checks import inequality_suites, oracle_suites
from seqtik.experiments.report import emit_report
from seqtik.experiments.sweep import SweepConfig, bound_ratios, has_plateau, run_sweep

SPARSE = SpaceParams(0, 0, 2, 4, 4)
CONJUGATE = SpaceParams(1, 4 / 3, 2, 4, 4)
OVERSMOOTH = SpaceParams(0, 1, 2, 4, 4)


def record(log, number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    log.append(line)
    print(line)
    assert ok, line


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def oversmooth_report():
    return timed(run_sweep, SweepConfig(OVERSMOOTH))


def test_criterion_1_inequality_suites(acceptance_log):
    results, secs = timed(inequality_suites, 10_000, 0)
    ok = all(r.passed and r.cases >= 10_000 for r in results) and secs < 10
    detail = "; ".join(r.summary() for r in results)
    record(acceptance_log, 1, ok, f"{detail}; {secs:.1f}s (limit 10s)")


def test_criterion_2_oracle_equivalence(acceptance_log):
    results, secs = timed(oracle_suites, 0)
    names = {r.name for r in results}
    ok = all(r.passed for r in results) and secs < 60 and len(names) == 9
    failed = [r.summary() for r in results if not r.passed]
    record(acceptance_log, 2, ok,
           f"{len(results)} suites, failures: {failed or 'none'}; {secs:.1f}s (limit 60s)")


def test_criterion_3_sparse_rate(acceptance_log):
    report, secs = timed(run_sweep, SweepConfig(SPARSE, truth_kind="sparse"))
    slope, n = report.slopes["slope_err_tau"], report.metadata["n"]
    ok = slope >= 0.9 and n <= 2 ** 14 and secs < 60
    record(acceptance_log, 3, ok, f"slope_err_tau={slope:.4f} (>= 0.9), n={n}, {secs:.1f}s")


def test_criterion_4_conjugate_rate(acceptance_log):
    report, secs = timed(run_sweep, SweepConfig(CONJUGATE))
    slope = report.slopes["slope_err_tau"]
    ok = slope >= 0.4 and secs < 120
    record(acceptance_log, 4, ok,
           f"slope_err_tau={slope:.4f} (>= 0.4), n={report.metadata['n']}, {secs:.1f}s")


def test_criterion_5_oversmoothing(acceptance_log, oversmooth_report):
    report, secs = oversmooth_report
    slope, support = report.slopes["slope_err_tau"], report.slopes["slope_support"]
    gamma2 = report.predicted["gamma2"]
    ok = slope >= 0.56 and support >= -(gamma2 + 0.15) and secs < 120
    record(acceptance_log, 5, ok,
           f"slope_err_tau={slope:.4f} (>= 0.56), slope_support={support:.4f} "
           f"(>= {-(gamma2 + 0.15):.4f}), {secs:.1f}s")


def test_criterion_6_p_independence(acceptance_log):
    slopes = {}
    for p in (0.0, 0.5, 1.0):
        report = run_sweep(SweepConfig(SpaceParams(p, 1, 2, 4, 4)))
        slopes[p] = report.slopes["slope_err_tau"]
    spread = max(slopes.values()) - min(slopes.values())
    shown = ", ".join(f"p={p}: {s:.4f}" for p, s in slopes.items())
    record(acceptance_log, 6, spread <= 0.1, f"{shown}; spread={spread:.4f} (<= 0.1)")


def test_criterion_7_post_processing(acceptance_log):
    report = run_sweep(SweepConfig(CONJUGATE, post_process=True))
    slope, post = report.slopes["slope_err_tau"], report.slopes["slope_post_err_tau"]
    n = report.metadata["n"]
    support = report.rows[-1].post_support
    rate_ok = post >= slope - 0.05
    sparse_ok = support < n / 10
    record(acceptance_log, 7, rate_ok and sparse_ok,
           f"slope_post_err_tau={post:.4f} vs slope_err_tau={slope:.4f} "
           f"({'ok' if rate_ok else 'low'}); post_support={support:.0f} at delta="
           f"{report.rows[-1].delta:.0e} vs n/10={n / 10:.1f} ({'ok' if sparse_ok else 'not sparse'})")


def test_criterion_8_bounded_ratios(acceptance_log, oversmooth_report):
    report, _ = oversmooth_report
    ratios = bound_ratios(report, OVERSMOOTH)
    verdict = {name: has_plateau(values) for name, values in ratios.items()}
    shown = ", ".join(
        f"{name}: late max {max(v[-3:]):.3g} vs early max {max(v[:3]):.3g}"
        for name, v in ratios.items())
    record(acceptance_log, 8, all(verdict.values()), shown)


def test_criterion_9_determinism(acceptance_log):
    configs = [SweepConfig(OVERSMOOTH, seed=7, post_process=True),
               SweepConfig(SPARSE, truth_kind="sparse", seed=7)]
    same = []
    for cfg in configs:
        texts = {emit_report(run_sweep(cfg, threads=t), "json", None) for t in (1, 2, 4)}
        same.append(len(texts) == 1)
    record(acceptance_log, 9, all(same), f"threads 1/2/4 byte-identical JSON for {sum(same)}/{len(same)} sweeps")
