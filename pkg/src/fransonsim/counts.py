"""Poissonian coincidence counting and fringe-parameter estimation.

Exact scan probabilities are converted to counts with

    rate(x) = 2 * plateau_rate * P(x) + accidental_rate,
    counts ~ Poisson(rate * bin_duration),

so the plateau (P = 1/2) reproduces the configured plateau rate.  The
estimators fit triangle, sinusoid, beat (triangle x cosine) and
analyzer-rotation models with scipy least squares and report visibilities
as fitted modulation amplitude over fitted offset, i.e. (max - min) /
(max + min) of the underlying oscillation, with 1-sigma uncertainties
propagated from the fit covariance.
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.optimize import curve_fit

from .errors import (FeatureOutOfWindow, FitDiverged, InsufficientData,
                     NoBeatDetected)
from .scenarios import ScanResult

MIN_RECORDS = 10


@dataclass(frozen=True)
class CountingConfig:
    """Counting-run parameters; rates in Hz, bin duration in seconds."""

    plateau_rate: float
    bin_duration: float = 1.0
    accidental_rate: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.plateau_rate > 0.0:
            raise ValueError("plateau_rate must be positive")
        if not self.bin_duration > 0.0:
            raise ValueError("bin_duration must be positive")
        if self.accidental_rate < 0.0:
            raise ValueError("accidental_rate must be nonnegative")


@dataclass(frozen=True)
class CountRecord:
    """One counting bin: position (m or rad), rate (Hz), counts, sqrt-N error."""

    position: float
    expected_rate: float
    counts: int
    uncertainty: float


def sample_counts(scan: ScanResult, cfg: CountingConfig) -> list[CountRecord]:
    """Draw one Poisson dataset from a scan; same seed, same dataset."""
    rng = np.random.default_rng(cfg.rng_seed)
    rates = 2.0 * cfg.plateau_rate * scan.probabilities + cfg.accidental_rate
    counts = rng.poisson(rates * cfg.bin_duration)
    return [
        CountRecord(float(x), float(r), int(n), math.sqrt(int(n)))
        for x, r, n in zip(scan.positions, rates, counts)
    ]


class FitModel:
    TRIANGLE_PEAK_DIP = "triangle_peak_dip"
    SINUSOID = "sinusoid"
    POLARIZATION_CURVE = "polarization_curve"


@dataclass(frozen=True)
class VisibilityEstimate:
    visibility: float
    sigma: float
    offset: float
    amplitude: float
    model: str
    period: float | None = None
    sigma_period: float | None = None


@dataclass(frozen=True)
class BeatEstimate:
    delta_f: float
    sigma_delta_f: float
    delta_lambda: float
    sigma_delta_lambda: float
    period: float
    visibility: float
    sigma_visibility: float


@dataclass(frozen=True)
class EnvelopeEstimate:
    center: float
    width: float
    sigma_center: float
    sigma_width: float


def _extract_xy(data, accidentals_per_bin: float = 0.0):
    """(x, y, sigma) from a ScanResult (exact, unweighted) or count records."""
    if isinstance(data, ScanResult):
        return data.positions.astype(float), data.probabilities.astype(float), None
    records: Sequence[CountRecord] = list(data)
    x = np.array([r.position for r in records], dtype=float)
    y = np.array([r.counts for r in records], dtype=float) - accidentals_per_bin
    sigma = np.sqrt(np.maximum([r.counts for r in records], 1.0))
    return x, y, sigma


def _require_records(x: np.ndarray):
    if x.size < MIN_RECORDS:
        raise InsufficientData(
            f"need at least {MIN_RECORDS} records, got {x.size}")


def _triangle(x, offset, amplitude, center, half_width):
    return offset + amplitude * np.maximum(
        0.0, 1.0 - np.abs(x - center) / half_width)


def _curve_fit(model, x, y, p0, sigma=None, bounds=(-np.inf, np.inf)):
    absolute = sigma is not None
    try:
        popt, pcov = curve_fit(model, x, y, p0=p0, sigma=sigma,
                               absolute_sigma=absolute, bounds=bounds,
                               maxfev=20000)
    except RuntimeError as exc:
        raise FitDiverged(str(exc)) from exc
    return popt, pcov


def _visibility_from_fit(amplitude, offset, cov_aa, cov_oo, cov_ao):
    v = abs(amplitude) / offset
    da = math.copysign(1.0, amplitude) / offset
    do = -abs(amplitude) / offset ** 2
    var = da * da * cov_aa + do * do * cov_oo + 2.0 * da * do * cov_ao
    return v, math.sqrt(max(var, 0.0))


def _triangle_p0(x, y):
    edge = max(2, x.size // 10)
    offset = float(np.mean(np.concatenate([y[:edge], y[-edge:]])))
    idx = int(np.argmax(np.abs(y - offset)))
    amplitude = float(y[idx] - offset)
    center = float(x[idx])
    scale = abs(amplitude)
    inside = np.abs(y - offset) > 0.5 * scale if scale > 0 else np.zeros_like(y, bool)
    if np.any(inside):
        half_width = 2.0 * float(np.max(np.abs(x[inside] - center)))
    else:
        half_width = (x[-1] - x[0]) / 4.0
    half_width = max(half_width, 2.0 * float(np.median(np.diff(x))))
    return offset, amplitude, center, half_width


def _fit_triangle(x, y, sigma):
    offset, amplitude, center, half_width = _triangle_p0(x, y)
    span = x[-1] - x[0]
    bounds = ([-np.inf, -np.inf, x[0] - span, 0.0],
              [np.inf, np.inf, x[-1] + span, np.inf])
    return _curve_fit(_triangle, x, y, [offset, amplitude, center, half_width],
                      sigma=sigma, bounds=bounds)


def _dominant_period(x, y, longest: float):
    """Period of the strongest spectral component shorter than ``longest``."""
    step = float(np.median(np.diff(x)))
    detrended = y - np.mean(y)
    spectrum = np.abs(np.fft.rfft(detrended))
    freqs = np.fft.rfftfreq(x.size, step)
    usable = freqs > 1.0 / longest
    if not np.any(usable) or np.max(spectrum[usable]) == 0.0:
        return None
    return 1.0 / float(freqs[usable][np.argmax(spectrum[usable])])


def estimate_visibility(data, model: str,
                        accidentals_per_bin: float = 0.0) -> VisibilityEstimate:
    """Least-squares visibility of a fringe dataset.

    ``data`` is a ScanResult (exact probabilities, unweighted fit) or a list
    of CountRecord (Poisson-weighted fit).  ``accidentals_per_bin`` is
    subtracted from counts before fitting, which removes the visibility bias
    a flat accidental background introduces.
    """
    x, y, sigma = _extract_xy(data, accidentals_per_bin)
    _require_records(x)

    if model == FitModel.TRIANGLE_PEAK_DIP:
        popt, pcov = _fit_triangle(x, y, sigma)
        offset, amplitude = popt[0], popt[1]
        v, sv = _visibility_from_fit(amplitude, offset, pcov[1, 1],
                                     pcov[0, 0], pcov[0, 1])
        return VisibilityEstimate(v, sv, offset, amplitude, model)

    if model == FitModel.SINUSOID:
        period0 = _dominant_period(x, y, longest=2.0 * (x[-1] - x[0]))
        if period0 is None:
            raise FitDiverged("no oscillation found for the sinusoid model")
        # linear pre-fit of offset and quadratures at the spectral period
        k = 2.0 * math.pi / period0
        design = np.column_stack([np.ones_like(x), np.cos(k * x), np.sin(k * x)])
        coeff, *_ = np.linalg.lstsq(design, y, rcond=None)
        amp0 = math.hypot(coeff[1], coeff[2])
        phase0 = math.atan2(-coeff[2], coeff[1])

        def sinusoid(xx, offset, amplitude, period, phase):
            return offset + amplitude * np.cos(2.0 * math.pi * xx / period + phase)

        step = float(np.median(np.diff(x)))
        bounds = ([-np.inf, 0.0, 2.0 * step, -2.0 * math.pi],
                  [np.inf, np.inf, 4.0 * (x[-1] - x[0]), 2.0 * math.pi])
        popt, pcov = _curve_fit(sinusoid, x, y,
                                [coeff[0], amp0, period0, phase0],
                                sigma=sigma, bounds=bounds)
        offset, amplitude, period = popt[0], popt[1], popt[2]
        v, sv = _visibility_from_fit(amplitude, offset, pcov[1, 1],
                                     pcov[0, 0], pcov[0, 1])
        return VisibilityEstimate(v, sv, offset, amplitude, model,
                                  period=period,
                                  sigma_period=math.sqrt(max(pcov[2, 2], 0.0)))

    if model == FitModel.POLARIZATION_CURVE:
        # linear in (offset, cos, sin) quadratures of the 2-theta rotation
        design = np.column_stack([np.ones_like(x), np.cos(2.0 * x), np.sin(2.0 * x)])
        if sigma is not None:
            w = 1.0 / sigma
            coeff, *_ = np.linalg.lstsq(design * w[:, None], y * w, rcond=None)
            gram = np.linalg.inv((design * w[:, None]).T @ (design * w[:, None]))
        else:
            coeff, *_ = np.linalg.lstsq(design, y, rcond=None)
            residual = y - design @ coeff
            dof = max(x.size - 3, 1)
            gram = np.linalg.inv(design.T @ design) * (residual @ residual) / dof
        offset, qc, qs = coeff
        amplitude = math.hypot(qc, qs)
        if amplitude > 0.0:
            jac = np.array([-amplitude / offset ** 2,
                            qc / (amplitude * offset),
                            qs / (amplitude * offset)])
        else:
            jac = np.array([0.0, 1.0 / offset, 1.0 / offset])
        var = float(jac @ gram @ jac)
        return VisibilityEstimate(amplitude / offset, math.sqrt(max(var, 0.0)),
                                  offset, amplitude, model)

    raise ValueError(f"unknown visibility model {model!r}")


def _beat_model(x, offset, amplitude, center, half_width, period, phase):
    envelope = np.maximum(0.0, 1.0 - np.abs(x - center) / half_width)
    return offset + amplitude * envelope * np.cos(
        2.0 * math.pi * (x - center) / period + phase)


def estimate_beat_frequency(data, center_wavelength: float,
                            accidentals_per_bin: float = 0.0) -> BeatEstimate:
    """Beat frequency of an envelope x cosine fringe.

    Fits a triangle envelope carrying a free-period cosine and converts the
    fitted spatial period L to delta_f = c / L and to the center-wavelength
    splitting delta_lambda = lambda^2 delta_f / c.  Raises NoBeatDetected
    when the modulation is insignificant (amplitude under 3 sigma), when the
    period is unconstrained, or when fewer than two beat periods fit inside
    the fitted envelope.
    """
    x, y, sigma = _extract_xy(data, accidentals_per_bin)
    _require_records(x)

    span = x[-1] - x[0]
    offset0, amplitude0, center0, half_width0 = _triangle_p0(x, y)
    period0 = _dominant_period(x, y, longest=span / 2.0)
    if period0 is None:
        raise NoBeatDetected("no spectral component with >= 2 periods in the scan")

    step = float(np.median(np.diff(x)))
    bounds = ([-np.inf, -np.inf, x[0], 2.0 * step, 2.0 * step, -2.0 * math.pi],
              [np.inf, np.inf, x[-1], 4.0 * span, span / 2.0, 2.0 * math.pi])
    best = None
    for phase0 in (0.0, math.pi / 2.0, math.pi, -math.pi / 2.0):
        p0 = [offset0, amplitude0, center0, half_width0, period0, phase0]
        try:
            popt, pcov = _curve_fit(_beat_model, x, y, p0, sigma=sigma,
                                    bounds=bounds)
        except FitDiverged:
            continue
        rss = float(np.sum((_beat_model(x, *popt) - y) ** 2))
        if best is None or rss < best[0]:
            best = (rss, popt, pcov)
    if best is None:
        raise NoBeatDetected("beat model fit did not converge")
    _, popt, pcov = best

    offset, amplitude, _, half_width, period = popt[:5]
    sigma_amp = math.sqrt(max(pcov[1, 1], 0.0))
    sigma_period = math.sqrt(max(pcov[4, 4], 0.0))
    if abs(amplitude) <= 1e-9 * abs(offset) or abs(amplitude) < 3.0 * sigma_amp:
        raise NoBeatDetected("fitted modulation amplitude below 3 sigma")
    if sigma_period > 0.5 * period:
        raise NoBeatDetected("beat period is unconstrained by the data")
    if half_width < period:
        raise NoBeatDetected("fewer than 2 beat periods inside the envelope")

    delta_f = SPEED_OF_LIGHT / period
    sigma_delta_f = SPEED_OF_LIGHT * sigma_period / period ** 2
    conv = center_wavelength ** 2 / SPEED_OF_LIGHT
    visibility, sigma_visibility = _visibility_from_fit(
        amplitude, offset, pcov[1, 1], pcov[0, 0], pcov[0, 1])
    return BeatEstimate(delta_f, sigma_delta_f, conv * delta_f,
                        conv * sigma_delta_f, period,
                        visibility, sigma_visibility)


def fit_envelope_center(data, carrier_wavelength: float | None = None,
                        accidentals_per_bin: float = 0.0) -> EnvelopeEstimate:
    """Apex position and base half-width of a triangle fringe envelope.

    For scans that carry a resolved optical oscillation (the single-arm
    stage scans), pass ``carrier_wavelength`` to fit the triangle times a
    fixed-wavelength cosine instead of the bare triangle.  The returned
    ``width`` is the base half-width, which for a triangle equals its FWHM.
    Raises FeatureOutOfWindow when the fitted apex leaves the scan window.
    """
    x, y, sigma = _extract_xy(data, accidentals_per_bin)
    _require_records(x)

    if carrier_wavelength is None:
        popt, pcov = _fit_triangle(x, y, sigma)
        center, half_width = popt[2], popt[3]
        sigma_c = math.sqrt(max(pcov[2, 2], 0.0))
        sigma_w = math.sqrt(max(pcov[3, 3], 0.0))
    else:
        offset0, amplitude0, center0, half_width0 = _triangle_p0(x, y)
        k = 2.0 * math.pi / carrier_wavelength

        def model(xx, offset, amplitude, center, half_width, phase):
            envelope = np.maximum(0.0, 1.0 - np.abs(xx - center) / half_width)
            return offset + amplitude * envelope * np.cos(k * xx + phase)

        span = x[-1] - x[0]
        bounds = ([-np.inf, -np.inf, x[0] - span, 0.0, -2.0 * math.pi],
                  [np.inf, np.inf, x[-1] + span, np.inf, 2.0 * math.pi])
        best = None
        for phase0 in (0.0, math.pi / 2.0, math.pi, -math.pi / 2.0):
            try:
                popt, pcov = _curve_fit(
                    model, x, y, [offset0, amplitude0, center0, half_width0, phase0],
                    sigma=sigma, bounds=bounds)
            except FitDiverged:
                continue
            rss = float(np.sum((model(x, *popt) - y) ** 2))
            if best is None or rss < best[0]:
                best = (rss, popt, pcov)
        if best is None:
            raise FitDiverged("envelope-with-carrier fit did not converge")
        _, popt, pcov = best
        center, half_width = popt[2], popt[3]
        sigma_c = math.sqrt(max(pcov[2, 2], 0.0))
        sigma_w = math.sqrt(max(pcov[3, 3], 0.0))

    if not (x[0] <= center <= x[-1]):
        raise FeatureOutOfWindow(
            f"fitted apex {center:.3e} outside scan window [{x[0]:.3e}, {x[-1]:.3e}]")
    return EnvelopeEstimate(float(center), float(half_width), sigma_c, sigma_w)
