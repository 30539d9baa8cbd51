"""Exit criteria.  Each test is one criterion; a PASS/FAIL line per criterion is
printed in the terminal summary (see conftest.py)."""
import io
import math
import time

import pytest

from qcorr.cli import run
from qcorr.measures import binary_shannon_entropy
from qcorr.sweep import (
    SweepSpec,
    emit_csv,
    evaluate_point,
    find_separability_boundaries,
    run_sweep,
)

ALPHA_99 = [k / 100 for k in range(1, 100)]
P_10 = [k / 10 for k in range(10)]
ALPHA_9 = [k / 10 for k in range(1, 10)]


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue()


def timed_threshold(channel):
    start = time.perf_counter()
    code, out = cli("threshold", "--channel", channel)
    return code, out, time.perf_counter() - start


def test_criterion_1_adc_threshold():
    code, out, elapsed = timed_threshold("adc")
    p_star = float(out)
    assert code == 0
    assert abs(p_star - 0.2928) <= 5e-4
    assert abs(p_star - (1 - 1 / math.sqrt(2))) <= 1e-5
    assert elapsed < 1.0


def test_criterion_2_dpc_threshold():
    code, out, elapsed = timed_threshold("dpc")
    p_star = float(out)
    assert code == 0
    assert abs(p_star - 0.1591) <= 5e-4
    assert abs(p_star - 0.15905) <= 5e-4
    assert abs(p_star - (1 - 2 ** -0.25)) <= 1e-5
    assert elapsed < 1.0


def test_criterion_3_pdc_identity():
    start = time.perf_counter()
    recs = run_sweep(SweepSpec("pdc", tuple(P_10), 99, measures=frozenset({"N", "B"})))
    elapsed = time.perf_counter() - start
    assert len(recs) == 990
    assert [r.alpha for r in recs[:99]] == pytest.approx(ALPHA_99)
    assert max(abs(r.bchsh - r.negativity) for r in recs) <= 1e-8
    assert elapsed < 5.0


def _closed_form_residual(p, alpha):
    q = 1 - p
    return q * q * alpha * math.sqrt(1 - alpha * alpha) - (1 - q * q) / 4


def _dpc_edges(p):
    q = 1 - p
    ab = (1 - q * q) / (4 * q * q)
    a2 = (1 - math.sqrt(1 - 4 * ab * ab)) / 2
    return math.sqrt(a2), math.sqrt(1 - a2)


@pytest.mark.parametrize("p,low_window,high_window", [
    (0.2, (0.12, 0.18), (0.95, 1.0)),
    (0.3, (0.24, 0.30), (0.93, 0.99)),
    (0.4, (0.45, 0.55), (0.80, 0.90)),
])
def test_criterion_4_dpc_separability(p, low_window, high_window):
    intervals = find_separability_boundaries("dpc", p=p)
    assert len(intervals) == 2
    lower, upper = intervals[0][1], intervals[1][0]
    assert low_window[0] <= lower <= low_window[1]
    assert high_window[0] <= upper <= high_window[1]
    assert upper < 1.0
    lo_exact, hi_exact = _dpc_edges(p)
    assert abs(lower - lo_exact) <= 1e-5 and abs(upper - hi_exact) <= 1e-5
    assert abs(_closed_form_residual(p, lower)) <= 1e-5
    assert abs(_closed_form_residual(p, upper)) <= 1e-5


@pytest.mark.parametrize("p", [0.43, 0.5, 0.7, 1.0])
def test_criterion_4_dpc_all_separable(p):
    assert find_separability_boundaries("dpc", p=p) == [(0.0, 1.0)]


@pytest.mark.parametrize("channel", ["adc", "pdc"])
def test_criterion_5_adc_pdc_robustness(channel):
    recs = run_sweep(SweepSpec(channel, tuple(P_10), 99, measures=frozenset({"N"})))
    assert min(r.negativity for r in recs) > 0
    assert not any(r.separable for r in recs)


def test_criterion_6_pure_state_oracle():
    start = time.perf_counter()
    recs = run_sweep(SweepSpec("none", (0.0,), 99))
    elapsed = time.perf_counter() - start
    for r in recs:
        c = 2 * r.alpha * math.sqrt(1 - r.alpha ** 2)
        assert abs(r.negativity - c) <= 1e-10
        assert abs(r.bchsh - c) <= 1e-10
        assert abs(r.discord - binary_shannon_entropy(r.alpha ** 2)) <= 1e-4
    assert elapsed < 10.0


@pytest.mark.parametrize("channel", ["adc", "pdc", "dpc"])
def test_criterion_7_monotone_decay(channel):
    for a in ALPHA_9:
        rows = [evaluate_point(channel, p, a) for p in P_10]
        for prev, cur in zip(rows, rows[1:]):
            assert cur.negativity <= prev.negativity + 1e-7, (a, cur.p)
            assert cur.discord <= prev.discord + 1e-7, (a, cur.p)
            assert cur.bchsh <= prev.bchsh + 1e-7, (a, cur.p)


def test_criterion_8_selfcheck():
    code, out = cli("selfcheck")
    print(out)
    assert code == 0
    assert "[FAIL]" not in out
    assert out.count("[PASS]") >= 16


@pytest.mark.parametrize("channel", ["adc", "pdc", "dpc"])
def test_criterion_9_figure_data(channel):
    args = ["sweep", "--channel", channel, "--p-list", ",".join(map(str, P_10)), "--alpha-steps", "9"]
    code1, first = cli(*args)
    code2, second = cli(*args)
    assert code1 == code2 == 0
    assert first == second
    lines = first.splitlines()
    assert len(lines) == 1 + 10 * 9
    rows = [dict(zip(lines[0].split(","), ln.split(","))) for ln in lines[1:]]
    # qualitative shape: every curve starts at its noiseless value and sinks with p
    for a in ALPHA_9:
        curve = [r for r in rows if float(r["alpha"]) == pytest.approx(a)]
        first_row, last_row = curve[0], curve[-1]
        for key in ("negativity", "discord", "bchsh"):
            assert float(last_row[key]) <= float(first_row[key])
    if channel == "adc":
        assert all(float(r["bchsh"]) == 0 for r in rows if float(r["p"]) >= 0.3)
    if channel == "dpc":
        assert all(r["separable"] == "true" for r in rows if float(r["p"]) >= 0.5)
        assert all(float(r["bchsh"]) == 0 for r in rows if float(r["p"]) >= 0.2)
    if channel == "pdc":
        assert all(r["negativity"] == r["bchsh"] for r in rows)
