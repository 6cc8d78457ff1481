"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion
in the terminal summary.
"""
import filecmp
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from mbcoherence.engine import (
    coherence_asymptote,
    coherence_exact_product,
    coherence_maximally_mixed,
    coherence_oracle,
    coherence_reduced,
    coherence_spectral,
    coherence_spectral_series,
    h_complete,
    log_coherence_maximally_mixed,
    oracle_power_sum,
)
from mbcoherence.external import build_external, symmetric_projection
from mbcoherence.photon import (
    PhotonConfig,
    admissible_jitter,
    admissible_jitter_simple,
    faint_jitter_approx,
    photon_coherence,
    photon_coherence_series,
    photon_spectrum,
)
from mbcoherence.states import DensityMatrix, product_state
from mbcoherence.thermal import (
    ThermalConfig,
    admissible_temperature,
    coherence_vs_temperature,
    log_temperature_grid,
    low_T_approx,
    thermal_spectrum,
)
from helpers import random_density
from oracles import (
    binomial_maximally_mixed,
    log10_binomial_maximally_mixed,
    photon_purity_closed_form,
    photon_purity_dblquad,
    symmetric_expectation,
)


def test_c01_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for m in (1, 2, 3):
        for _ in range(50):
            lam = rng.dirichlet(np.ones(m))
            for n in range(2, 6):
                rho = product_state(DensityMatrix(np.diag(lam)), n)
                dev = abs(coherence_oracle(rho, n).value - coherence_spectral(lam, n).value)
                worst = max(worst, dev)
    elapsed = time.perf_counter() - start
    assert worst < 1e-10
    assert elapsed < 10.0


def test_c02_symmetric_function_identity():
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst = 0.0
    for m in range(1, 7):
        for _ in range(100):
            lam = rng.dirichlet(np.ones(m))
            for n in range(1, 9):
                worst = max(worst, abs(oracle_power_sum(lam, n) - float(h_complete(lam, n))))
    elapsed = time.perf_counter() - start
    assert worst < 1e-12
    assert elapsed < 30.0


def test_c03_projector_identity():
    rng = np.random.default_rng(3)
    worst = 0.0
    for stats in ("boson", "fermion"):
        for m in (1, 2, 3):
            for n in (1, 2, 3):
                for _ in range(4):
                    rho = product_state(random_density(m, rng), n)
                    got = symmetric_projection(build_external(rho, n, stats))
                    worst = max(worst, abs(got - symmetric_expectation(rho.data, m, n)))
    assert worst < 1e-10


def test_c04_maximally_mixed_closed_form():
    assert coherence_maximally_mixed(4, 2) == pytest.approx(0.625, abs=1e-15)
    assert coherence_maximally_mixed(2, 3) == pytest.approx(0.5, abs=1e-15)
    exact = float(binomial_maximally_mixed(4, 100))
    assert coherence_maximally_mixed(4, 100) == pytest.approx(exact, rel=1e-12)
    assert log_coherence_maximally_mixed(4, 100) / math.log(10) == pytest.approx(
        log10_binomial_maximally_mixed(4, 100), abs=1e-12)
    assert float(h_complete([0.25] * 4, 100)) == pytest.approx(exact, rel=1e-12)


def test_c05_thermal_low_temperature():
    start = time.perf_counter()
    temps = log_temperature_grid()
    ns = list(range(2, 101))
    rows = coherence_vs_temperature(temps, ns)
    grid = np.array([r[2].value for r in rows]).reshape(len(temps), len(ns))
    assert np.all(np.diff(grid, axis=0) <= 1e-15), "not monotone in temperature"
    assert np.all(np.diff(grid, axis=1) <= 1e-15), "not monotone in N"
    low = np.concatenate([temps[temps <= 0.3], np.arange(0.02, 0.3001, 0.02)])
    worst, where = 0.0, None
    for t in low:
        spec = thermal_spectrum(ThermalConfig(float(t)))
        for n, res in zip((2, 10, 50, 100), coherence_spectral_series(spec, (2, 10, 50, 100))):
            dev = abs(res.value - low_T_approx(float(t), n))
            if dev > worst:
                worst, where = dev, (float(t), n)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    assert worst <= 0.02, f"max |spectral - (1-e^-1/kT)^N| = {worst:.4f} at (kT, N) = {where}"


def test_c06_thermal_asymptote():
    for t in (0.3, 0.5, 1.0):
        spec = thermal_spectrum(ThermalConfig(t))
        ratio = coherence_spectral(spec, 100).value / coherence_asymptote(spec, 100)
        assert 0.95 <= ratio <= 1.05


def test_c07_admissible_temperature_round_trip():
    for w in (0.5, 0.9, 0.99):
        for n in (2, 10, 100):
            assert abs(low_T_approx(admissible_temperature(w, n), n) - w) <= 1e-9


def test_c08_photon_purity():
    start = time.perf_counter()
    purities = {s: photon_spectrum(PhotonConfig(s, quadrature_points=200)).purity() for s in (0.1, 0.5, 1.0, 2.0)}
    elapsed = time.perf_counter() - start
    for s, p in purities.items():
        assert abs(p - photon_purity_closed_form(s)) <= 1e-6
        assert abs(p - photon_purity_dblquad(s)) <= 1e-6
    assert elapsed < 5.0


def test_c09_photon_faint_overlay():
    sigmas = [s for s in np.concatenate([[0.0], np.logspace(-2, 1, 61)]) if s <= 0.2 + 1e-12]
    worst, where = 0.0, None
    for s in sigmas:
        for n in (2, 10, 100):
            dev = abs(photon_coherence(PhotonConfig(float(s)), n).value - faint_jitter_approx(float(s), n))
            if dev > worst:
                worst, where = dev, (float(s), n)
    assert worst <= 0.01, f"max |W_C - (1-(σΔ)²)^N| = {worst:.4f} at (σΔ, N) = {where}"


def test_c10_admissible_jitter_power_law():
    assert abs(admissible_jitter(0.9, 100) / admissible_jitter_simple(0.9, 100) - 1) <= 0.03
    ns = np.arange(100, 1001)
    logs = np.log([admissible_jitter(0.9, int(n)) for n in ns])
    slope = np.polyfit(np.log(ns), logs, 1)[0]
    assert abs(slope + 0.5) <= 0.02


def test_c11_photon_exponential_convergence():
    res = photon_coherence_series(PhotonConfig(0.5), range(2, 103))
    logs = np.array([r.log10_value for r in res]) * math.log(10)
    d = np.diff(logs)
    # last difference is between N = 101 and N = 102
    assert abs(d[-1] - d[-2]) < 1e-3


def test_c12_bounds_and_monotonicity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        m = int(rng.integers(1, 9))
        lam = rng.dirichlet(np.ones(m) * rng.uniform(0.2, 5.0))
        n = int(rng.integers(2, 60))
        full = coherence_spectral(lam, n).value
        assert 0.0 <= full <= 1.0
        for k in range(2, n + 1):
            wk = coherence_reduced(lam, n, k).value
            assert 0.0 <= wk <= 1.0
            assert wk >= full - 1e-15
        small = min(n, 5)
        assert 0.0 <= coherence_exact_product(lam, small).value <= 1.0


def test_c13_cli_determinism(tmp_path):
    for run in ("a", "b"):
        for cmd in ("fig-thermal", "fig-photon"):
            subprocess.run([sys.executable, "-m", "mbcoherence", cmd, "--output", str(tmp_path / run)],
                           check=True, capture_output=True)
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["fig1b.csv", "fig1c.csv", "fig1d.csv", "fig1e.csv", "fig2b.csv", "fig2c.csv", "fig2d.csv"]
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    assert not mismatch and not errors
