"""End-to-end acceptance checks, one per headline result.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or
``pytest -v -rA``) in addition to its asserts.
"""

import contextlib
import dataclasses
import math

import numpy as np
import pytest

from fransonsim import (AnalyzerSettings, BiphotonSource, CountingConfig,
                        FitModel, ScanResult, SpectralKind, SpectralModel,
                        StageConfig, analytic_scan, carrier_phase,
                        coincidence_probability, estimate_beat_frequency,
                        estimate_visibility, fit_envelope_center,
                        franson_paths, polarization_correlation, preset_scan,
                        run_scan, sample_counts, stage_to_delays)
from fransonsim.cli import main as cli_main

C = 299792458.0
LAM = 812.4e-9
QUARTER = math.pi / 4.0

COUNTING = dict(plateau_rate=2000.0, bin_duration=1.0)


@contextlib.contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} [{label}]: FAIL")
        raise
    print(f"ACCEPTANCE {number} [{label}]: PASS")


def test_criterion_1_engine_matches_factorized_law_on_all_presets():
    with criterion(1, "fringe-law oracle equivalence"):
        total = 0
        for name, sign in (("fig2a", 1), ("fig2a", -1), ("fig2b", None),
                           ("fig2c", None), ("fig3", 1), ("fig3", -1),
                           ("fig4", None)):
            spec = preset_scan(name, sign)
            result = run_scan(spec)
            oracle = analytic_scan(spec)
            total += len(result)
            assert np.max(np.abs(result.probabilities - oracle)) <= 1e-6, name
        # the analyzer-rotation preset checks against the rotation law
        spec = preset_scan("fig2d")
        result = run_scan(spec)
        v = spec.source.visibility
        oracle = 0.5 * (1.0 + v) * np.array([
            polarization_correlation(AnalyzerSettings(QUARTER, t), v)
            for t in result.positions])
        total += len(result)
        assert np.max(np.abs(result.probabilities - oracle)) <= 1e-6
        assert total >= 1000


def test_criterion_2_hom_peak_and_dip_visibilities():
    with criterion(2, "HOM peak/dip visibility recovery"):
        for sign, configured in ((1, 0.92), (-1, 0.93)):
            spec = preset_scan("fig2a", sign)
            assert spec.source.visibility == configured
            scan = run_scan(spec)
            extremum = np.argmax(scan.probabilities) if sign > 0 \
                else np.argmin(scan.probabilities)
            assert scan.positions[extremum] == 0.0
            records = sample_counts(scan, CountingConfig(**COUNTING,
                                                         rng_seed=101 + sign))
            est = estimate_visibility(records, FitModel.TRIANGLE_PEAK_DIP)
            assert abs(est.visibility - configured) <= 0.03


def test_criterion_3_single_arm_envelope_twice_as_wide():
    with criterion(3, "single-arm scan doubles the fringe width"):
        fwhm_dx1 = fit_envelope_center(run_scan(preset_scan("fig2a", -1))).width
        fwhm_dx2 = fit_envelope_center(run_scan(preset_scan("fig2b")),
                                       carrier_wavelength=LAM).width
        assert abs(fwhm_dx2 / fwhm_dx1 - 2.0) <= 0.05


def test_criterion_4_phase_fringe_period_and_visibility():
    with criterion(4, "phase-scan period and visibility"):
        scan = run_scan(preset_scan("fig2c"))
        exact = estimate_visibility(scan, FitModel.SINUSOID)
        assert abs(exact.period - LAM) / LAM <= 0.01
        records = sample_counts(scan, CountingConfig(**COUNTING, rng_seed=104))
        sampled = estimate_visibility(records, FitModel.SINUSOID)
        assert abs(sampled.visibility - 0.91) <= 0.03


def test_criterion_5_polarization_correlation():
    with criterion(5, "analyzer-rotation correlation"):
        spec = preset_scan("fig2d")
        scan = run_scan(spec)
        v = spec.source.visibility
        normalized = scan.probabilities / (0.5 * (1.0 + v))
        law = np.array([polarization_correlation(AnalyzerSettings(QUARTER, t), v)
                        for t in scan.positions])
        assert np.max(np.abs(normalized - law)) <= 1e-9
        records = sample_counts(scan, CountingConfig(**COUNTING, rng_seed=105))
        est = estimate_visibility(records, FitModel.POLARIZATION_CURVE)
        assert abs(est.visibility - 0.94) <= 0.02


def test_criterion_6_beat_frequency_recovery():
    with criterion(6, "spatial beat frequency"):
        spec = preset_scan("fig3", -1)
        configured = abs(spec.source.delta_omega) / (2.0 * math.pi)
        scan = run_scan(spec)
        exact = estimate_beat_frequency(scan, LAM)
        assert abs(exact.delta_f - 0.69e12) / 0.69e12 <= 0.01
        assert abs(exact.delta_f - configured) / configured <= 0.01
        assert abs(exact.delta_lambda - 1.52e-9) / 1.52e-9 <= 0.01
        records = sample_counts(scan, CountingConfig(**COUNTING, rng_seed=106))
        sampled = estimate_beat_frequency(records, LAM)
        assert abs(sampled.delta_f - configured) <= 0.01e12


def test_criterion_7_delayed_compensation():
    with criterion(7, "delayed compensation"):
        dx0 = 1e-3
        spec = preset_scan("fig4", -1)
        assert spec.source.delta_x0 == dx0
        scan = run_scan(spec)
        step = float(np.diff(scan.positions).max())
        est = fit_envelope_center(scan)
        assert abs(est.center - dx0) <= step
        # long-arm path difference at the apex equals twice the source offset
        delays = stage_to_delays(StageConfig(dx0=dx0, dx1=est.center))
        assert abs(delays.delta_l_l - delays.delta_l_u) == pytest.approx(
            2.0 * dx0, rel=1e-6)

        # analyzer rotation: flat when uncompensated, full contrast at dx1=dx0
        rotation = preset_scan("fig2d", visibility=0.94, dx0=dx0)
        uncompensated = dataclasses.replace(
            rotation, fixed=dataclasses.replace(rotation.fixed, dx1=0.0))
        est = estimate_visibility(run_scan(uncompensated),
                                  FitModel.POLARIZATION_CURVE)
        assert est.visibility < 1e-6
        compensated = dataclasses.replace(
            rotation, fixed=dataclasses.replace(rotation.fixed, dx1=dx0))
        est = estimate_visibility(run_scan(compensated),
                                  FitModel.POLARIZATION_CURVE)
        assert abs(est.visibility - 0.94) <= 1e-6


def test_criterion_8_structural_invariants():
    with criterion(8, "structural invariants"):
        source = preset_scan("fig2a", 1).source

        # exactly two detection alternatives, whatever the stage settings
        for dx1 in (0.0, 3.7e-5, -2e-4, 1e-3):
            assert len(franson_paths(StageConfig(dx1=dx1))) == 2

        # the roundtrip-pair phase never moves with the shared mirror
        for dx1 in np.linspace(-2e-4, 2e-4, 41):
            rr = next(p for p in franson_paths(StageConfig(dx1=dx1))
                      if abs(p.pol_u.v) > 0.0)
            assert carrier_phase(rr, source) == 0.0

        # exact complementarity of the peak/dip analyzer pair
        for dx1 in np.linspace(-1.5e-4, 1.5e-4, 101):
            paths = franson_paths(StageConfig(dx1=dx1))
            p_plus = coincidence_probability(
                paths, source, AnalyzerSettings(QUARTER, QUARTER))
            p_minus = coincidence_probability(
                paths, source, AnalyzerSettings(QUARTER, -QUARTER))
            assert p_plus + p_minus == 1.0

        # shared-mirror scan equals the bare envelope law pointwise
        t_w = source.spectral.correlation_width
        for dx1 in np.linspace(-1.5e-4, 1.5e-4, 201):
            paths = franson_paths(StageConfig(dx1=dx1))
            p = coincidence_probability(paths, source,
                                        AnalyzerSettings(QUARTER, QUARTER))
            envelope = max(0.0, 1.0 - abs(2.0 * dx1 / C) / t_w)
            assert p == pytest.approx(0.5 * (1.0 + 0.92 * envelope), abs=1e-12)

        # probability bounds over randomized configurations
        rng = np.random.default_rng(108)
        pump = 406.2e-9
        for _ in range(10000):
            width = rng.uniform(0.02, 5.0) * 200e-6 / C
            spectral = SpectralModel(rng.choice(list(SpectralKind)), width)
            dx0 = rng.uniform(-2e-3, 2e-3)
            visibility = rng.uniform(0.0, 1.0)
            if rng.random() < 0.5:
                src = BiphotonSource.degenerate(pump, spectral, delta_x0=dx0,
                                                visibility=visibility)
            else:
                src = BiphotonSource.from_wavelength_splitting(
                    pump, rng.uniform(-4e-9, 4e-9), spectral, delta_x0=dx0,
                    visibility=visibility)
            cfg = StageConfig(dx0=dx0,
                              dx1=rng.uniform(-4e-4, 4e-4),
                              dx2=rng.uniform(-4e-4, 4e-4),
                              dx3=rng.uniform(-4e-4, 4e-4),
                              theta1=rng.uniform(-math.pi, math.pi),
                              theta2=rng.uniform(-math.pi, math.pi))
            p = coincidence_probability(franson_paths(cfg), src,
                                        AnalyzerSettings(cfg.theta1, cfg.theta2))
            assert 0.0 <= p <= 1.0

        # fringe parity and the source-offset shift identity
        def probability(dx1, dx0=0.0):
            src = dataclasses.replace(source, delta_x0=dx0)
            paths = franson_paths(StageConfig(dx0=dx0, dx1=dx1))
            return coincidence_probability(
                paths, src, AnalyzerSettings(QUARTER, QUARTER))

        shift = 2.5e-5
        for dx1 in np.linspace(-1.2e-4, 1.2e-4, 61):
            assert abs(probability(dx1) - probability(-dx1)) <= 1e-9
            assert abs(probability(dx1, shift)
                       - probability(dx1 - shift)) <= 1e-9


def test_criterion_9_counting_statistics(tmp_path):
    with criterion(9, "counting statistics and determinism"):
        spec = preset_scan("fig2a")
        positions = np.linspace(-1e-4, 1e-4, 10000)
        flat = ScanResult(spec, positions, np.full(10000, 0.5),
                          np.ones(10000, bool), np.ones(10000, bool))
        records = sample_counts(flat, CountingConfig(**COUNTING, rng_seed=109))
        counts = np.array([r.counts for r in records])
        mean = counts.mean()
        assert abs(mean - 2000.0) <= 5.0 * math.sqrt(2000.0 / counts.size)
        assert 0.9 <= counts.var() / mean <= 1.1

        first, second = tmp_path / "run1.csv", tmp_path / "run2.csv"
        for out in (first, second):
            assert cli_main(["scan", "--preset", "fig3", "--counts",
                             "--seed", "9", "--out", str(out)]) == 0
        assert first.read_bytes() == second.read_bytes()
