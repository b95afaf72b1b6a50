"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPTANCE <id> PASS|FAIL <title>`` line to the
terminal (bypassing output capture), then lets pytest report the outcome.
Run just these with ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import contextlib
import json
import shutil
import time

import numpy as np
import pytest

from conftest import DATA, normalized_of, series_of
from scalefit.analysis import classify_bound, detect_saturation, efficiency_table, recommend
from scalefit.cli import main
from scalefit.fitting import fit_powerlaw, fit_superserial
from scalefit.ingest import BreakdownRecord, augment_linear
from scalefit.metrics import efficiency, scaleup, scalability_ratio
from scalefit.models import (
    ModelParams,
    eval_capacity,
    superserial_capacity,
    superserial_nc_int,
)

POW2_512 = [2**k for k in range(10)]
POW2_1024 = [2**k for k in range(11)]
SIGMA, GAMMA = 6.85e-3, 3.13e-4


@contextlib.contextmanager
def criterion(capsys, cid: str, title: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\nACCEPTANCE {cid} {'PASS' if ok else 'FAIL'} {title}")


def test_c1_powerlaw_recovery(capsys):
    with criterion(capsys, "1", "power fit recovers a=0.77, b=1.28 (1e-9), < 1 s"):
        series = series_of(POW2_512, [1.28 * n**0.77 for n in POW2_512])
        t0 = time.perf_counter()
        fit = fit_powerlaw(series)
        elapsed = time.perf_counter() - t0
        assert fit.a == pytest.approx(0.77, abs=1e-9)
        assert fit.b == pytest.approx(1.28, abs=1e-9)
        assert elapsed < 1.0


def test_c2_shared_exponent(capsys):
    with criterion(capsys, "2", "raw and normalized fits share a (1e-9) for every base"):
        raw = series_of(POW2_512, [0.19 * n**0.77 for n in POW2_512])
        a_raw = fit_powerlaw(raw).a
        for base in POW2_512:
            assert fit_powerlaw(scaleup(raw, base)).a == pytest.approx(a_raw, abs=1e-9)
        assert a_raw == pytest.approx(0.77, abs=1e-9)


def test_c3_superserial_critical_point(capsys):
    with criterion(capsys, "3", "brute-force argmax of C_S equals superserial_nc_int, in [678, 684], < 1 s"):
        t0 = time.perf_counter()
        ns = np.arange(1, 5001, dtype=float)
        brute = int(ns[np.argmax(superserial_capacity(ns, SIGMA, GAMMA))])
        n_int = superserial_nc_int(SIGMA, GAMMA)
        elapsed = time.perf_counter() - t0
        assert brute == n_int
        assert 678 <= n_int <= 684
        assert elapsed < 1.0


def _exact_cs():
    return normalized_of(POW2_1024, [float(superserial_capacity(n, SIGMA, GAMMA)) for n in POW2_1024])


def test_c4a_superserial_recovery(capsys):
    with criterion(capsys, "4a", "super-serial fit recovers sigma, gamma within 1% on powers of two to 1024"):
        fit = fit_superserial(_exact_cs(), (1e-5, 0.5))
        assert fit.sigma == pytest.approx(SIGMA, rel=0.01)
        assert fit.gamma == pytest.approx(GAMMA, rel=0.01)
        assert not fit.degenerate


def test_c4b_augmentation_does_not_widen_intervals(capsys):
    # Expected to fail: exact data leaves the plain fit with ~zero residuals, so
    # its intervals are ~1e-18, while interpolated points carry real residuals.
    with criterion(capsys, "4b", "augmented (100..1024) half-widths <= unaugmented on exact data"):
        plain = fit_superserial(_exact_cs(), (1e-5, 0.5))
        aug = fit_superserial(augment_linear(_exact_cs(), 100, 1024), (1e-5, 0.5))
        assert aug.sigma_ci <= plain.sigma_ci, (aug.sigma_ci, plain.sigma_ci)
        assert aug.gamma_ci <= plain.gamma_ci, (aug.gamma_ci, plain.gamma_ci)


def test_c5_saturation_and_recommendation(capsys):
    with criterion(capsys, "5", "frozen tail saturates at 1024, recommends 512; clean series never saturates"):
        ns = POW2_512 + [1024, 2048]
        frozen = [1.28 * min(n, 512) ** 0.77 for n in ns]
        series = normalized_of(ns, [v / frozen[0] for v in frozen])
        fit = fit_powerlaw(series, (1, 512))
        sat = detect_saturation(series, fit)
        assert sat.threshold == 0.10
        assert sat.saturation_n == 1024
        rec = recommend([fit], sat)
        assert (rec.optimal_n, rec.rationale) == (512, "power-fit-saturation")

        clean = normalized_of(ns, [n**0.77 for n in ns])
        clean_fit = fit_powerlaw(clean)
        for t in (1e-12, 1e-6, 1e-3, 0.01, 0.1, 0.5, 1.0, 10.0):
            assert detect_saturation(clean, clean_fit, t).saturation_n is None


def test_c6_model_identities(capsys):
    with criterion(capsys, "6", "C_S(gamma=0) == C_A (1e-12), models are 1 at N=1, Amdahl asymptote 1/sigma"):
        ns = np.arange(1, 4097, dtype=float)
        for s in (1e-5, 1e-3, 6.85e-3, 0.1, 0.5):
            cs = eval_capacity(ModelParams("superserial", sigma=s, gamma=0.0), ns)
            ca = eval_capacity(ModelParams("amdahl", sigma=s), ns)
            np.testing.assert_allclose(cs, ca, rtol=1e-12, atol=0)
        models = [
            ModelParams("linear"),
            ModelParams("amdahl", sigma=0.05),
            ModelParams("gustafson", sigma_prime=0.05),
            ModelParams("superserial", sigma=SIGMA, gamma=GAMMA),
            ModelParams("powerlaw", a=0.77, b=1.0),
        ]
        for p in models:
            assert eval_capacity(p, 1) == 1.0
        assert eval_capacity(ModelParams("amdahl", sigma=0.01), 1e9) == pytest.approx(100, rel=1e-4)


def test_c7_metric_algebra(capsys):
    with criterion(capsys, "7", "E*N == speedup exactly; SC(linear)=1; SC = 2^(a-1) (1e-9)"):
        for a in (0.5, 0.77, 1.0, 1.3):
            for n in POW2_1024:
                s = 1.28 * n**a
                assert efficiency(s, n) * n == s
        lin = efficiency_table(normalized_of(POW2_1024, [float(n) for n in POW2_1024]))
        assert all(r.scalability_ratio == 1.0 for r in lin[1:])
        for a in (0.56, 0.77, 0.91):
            table = efficiency_table(normalized_of(POW2_1024, [n**a for n in POW2_1024]))
            for row in table[1:]:
                assert row.scalability_ratio == pytest.approx(2 ** (a - 1), abs=1e-9)
        assert scalability_ratio(efficiency(8.0, 8), efficiency(4.0, 4)) == 1.0


def test_c8_bound_classification(capsys):
    with criterion(capsys, "8", "(62, 37, 1) is cpu-bound; mpi strictly largest is mpi-bound"):
        assert classify_bound(BreakdownRecord(64, 62, 37, 1)).bound == "cpu-bound"
        for cpu, mpi, io in ((30, 69, 1), (0, 100, 0), (33, 34, 33), (10, 45.5, 44.5)):
            assert classify_bound(BreakdownRecord(128, cpu, mpi, io)).bound == "mpi-bound"


def test_c9_cli_determinism_and_round_trip(capsys, tmp_path):
    with criterion(capsys, "9", "analyze --deterministic is byte-stable; ingest then analyze equals direct"):
        runs = tmp_path / "lowres_runs.csv"
        shutil.copy(DATA / "lowres_runs.csv", runs)
        common = ["--superserial", "--fit-range", "1:512", "--deterministic"]
        assert main(["analyze", str(runs), "--out", str(tmp_path / "a.json"), *common]) == 0
        assert main(["analyze", str(runs), "--out", str(tmp_path / "b.json"), *common]) == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

        assert main(["ingest", str(runs), "--out", str(tmp_path / "series")]) == 0
        via = tmp_path / "series" / "throughput.csv"
        assert main(["analyze", str(via), "--format", "series-csv",
                     "--out", str(tmp_path / "c.json"), *common]) == 0
        direct = json.loads((tmp_path / "a.json").read_text())
        staged = json.loads((tmp_path / "c.json").read_text())
        direct.pop("inputs")
        staged.pop("inputs")
        assert direct == staged


def test_c10_cross_domain_exponent(capsys):
    with criterion(capsys, "10", "Desmond-style grid recovers a=0.56 (1e-9)"):
        ns = [1, 2, 8, 16, 32, 48, 96, 144, 192, 256]
        for b in (2.1, 0.03, 140.0):
            series = series_of(ns, [b * n**0.56 for n in ns], label="throughput")
            assert fit_powerlaw(series).a == pytest.approx(0.56, abs=1e-9)
