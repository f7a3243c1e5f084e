"""Stage geometry and the packaged fringe-scan experiments.

Stage sign conventions (geometry factor g, default 1.0, scales stage travel
to single-pass optical path change):

    delta_L_u = g * (-dx1 + dx2)        upper long-arm excess
    delta_L_l = g * (+dx1 - dx3)        lower long-arm excess

The shared double-sided mirror (dx1) therefore changes the two long arms in
opposite directions and leaves their summed optical phase untouched, while
dx2 and dx3 act on one arm each.  A source offset dx0 delays the lower photon
of the HH term and the upper photon of the VV term by dx0/c.

The packaged scan presets:

    fig2a   dx1 scan, degenerate pairs, dx0 = 0         (triangle peak/dip)
    fig2b   dx2 scan at dx1 = 0                         (doubled envelope, carrier)
    fig2c   dx3 scan over two optical periods           (phase fringe)
    fig2d   analyzer-2 rotation, all stages parked      (polarization correlation)
    fig3    dx1 scan, nondegenerate pairs (1.52 nm)     (spatial beat)
    fig4    dx1 scan with dx0 = +1 mm                   (delayed compensation)
"""

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .coincidence import (AnalyzerSettings, BiphotonSource,
                          check_interference_conditions,
                          coincidence_probability)
from .errors import GridTooCoarse
from .optics import PathAmplitude, delay_segment, entangled_input, enumerate_paths
from .spectral import SpectralKind, SpectralModel

DEFAULT_PUMP_WAVELENGTH = 406.2e-9
# c * T_w; illustrative scale giving a 200 um triangle base in dx1 travel
DEFAULT_CORRELATION_LENGTH = 200e-6
# wider pairs for the beat preset so that >= 2 beat periods fit the envelope
BEAT_CORRELATION_LENGTH = 900e-6
BEAT_WAVELENGTH_SPLITTING = 1.52e-9
COMPENSATION_OFFSET = 1e-3

MIN_POINTS_PER_PERIOD = 8


@dataclass(frozen=True)
class StageConfig:
    """Stage positions (meters), analyzer angles (radians), geometry factor."""

    dx0: float = 0.0
    dx1: float = 0.0
    dx2: float = 0.0
    dx3: float = 0.0
    theta1: float = math.pi / 4.0
    theta2: float = math.pi / 4.0
    geometry_factor: float = 1.0

    def __post_init__(self):
        if not self.geometry_factor > 0.0:
            raise ValueError("geometry_factor must be positive")


@dataclass(frozen=True)
class DelaySet:
    """Long-arm excess lengths (meters) and the source pair offset (seconds)."""

    delta_l_u: float
    delta_l_l: float
    pair_offset: float


def stage_to_delays(cfg: StageConfig) -> DelaySet:
    g = cfg.geometry_factor
    return DelaySet(
        delta_l_u=g * (-cfg.dx1 + cfg.dx2),
        delta_l_l=g * (cfg.dx1 - cfg.dx3),
        pair_offset=cfg.dx0 / SPEED_OF_LIGHT,
    )


def franson_paths(cfg: StageConfig) -> list[PathAmplitude]:
    """Detection alternatives of the entangled input for this stage setting."""
    delays = stage_to_delays(cfg)
    return enumerate_paths(
        entangled_input(cfg.dx0),
        [delay_segment(delays.delta_l_u)],
        [delay_segment(delays.delta_l_l)],
    )


class Preset(Enum):
    FIG2A = "fig2a"
    FIG2B = "fig2b"
    FIG2C = "fig2c"
    FIG2D = "fig2d"
    FIG3 = "fig3"
    FIG4 = "fig4"
    CUSTOM = "custom"


_VARIED_FIELDS = ("dx1", "dx2", "dx3", "theta2")


@dataclass(frozen=True)
class ScanSpec:
    """One scan: which stage moves, over which grid, and around what setting."""

    preset: Preset
    varied: str
    grid: np.ndarray
    fixed: StageConfig
    source: BiphotonSource
    sign: int = 1

    def __post_init__(self):
        if self.varied not in _VARIED_FIELDS:
            raise ValueError(f"varied must be one of {_VARIED_FIELDS}")
        grid = np.asarray(self.grid, dtype=float)
        if grid.size == 0:
            raise ValueError("scan grid is empty")
        if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
            raise ValueError("scan grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 (peak) or -1 (dip)")


@dataclass(frozen=True)
class ScanResult:
    """Exact probabilities over the grid plus per-point condition reports."""

    spec: ScanSpec
    positions: np.ndarray
    probabilities: np.ndarray
    condition_long_arms: np.ndarray
    condition_pair_coherence: np.ndarray

    def __len__(self) -> int:
        return self.positions.size


def _shortest_period(spec: ScanSpec) -> float:
    """Shortest oscillation period along the varied axis, inf if none."""
    source = spec.source
    g = spec.fixed.geometry_factor
    if spec.varied == "theta2":
        return math.pi
    if spec.varied in ("dx2", "dx3"):
        return source.degenerate_wavelength / g
    # dx1: only the beat oscillates, and only for nondegenerate pairs
    if source.is_degenerate:
        return math.inf
    return 2.0 * math.pi * SPEED_OF_LIGHT / (g * abs(source.delta_omega))


def run_scan(spec: ScanSpec) -> ScanResult:
    """Evaluate the coincidence probability at every grid point.

    Emits a GridTooCoarse warning when the step undersamples the shortest
    oscillation period (fewer than MIN_POINTS_PER_PERIOD points/period).
    """
    grid = spec.grid
    if grid.size > 1:
        step = float(np.max(np.diff(grid)))
        period = _shortest_period(spec)
        if math.isfinite(period) and step * MIN_POINTS_PER_PERIOD > period * (1.0 + 1e-9):
            warnings.warn(
                f"step {step:.3e} gives fewer than {MIN_POINTS_PER_PERIOD} "
                f"points per oscillation period {period:.3e}",
                GridTooCoarse,
                stacklevel=2,
            )

    probabilities = np.empty(grid.size)
    cond_arms = np.empty(grid.size, dtype=bool)
    cond_pair = np.empty(grid.size, dtype=bool)
    for i, value in enumerate(grid):
        cfg = replace(spec.fixed, **{spec.varied: float(value)})
        paths = franson_paths(cfg)
        analyzers = AnalyzerSettings(cfg.theta1, cfg.theta2)
        probabilities[i] = coincidence_probability(paths, spec.source, analyzers)
        delays = stage_to_delays(cfg)
        report = check_interference_conditions(delays.delta_l_u,
                                               delays.delta_l_l, spec.source)
        cond_arms[i] = report.condition_long_arms
        cond_pair[i] = report.condition_pair_coherence
    return ScanResult(spec, grid.copy(), probabilities, cond_arms, cond_pair)


def analytic_scan(spec: ScanSpec) -> np.ndarray:
    """Factorized-law values over the same grid (oracle for run_scan)."""
    from .coincidence import analytic_probability, polarization_correlation

    values = np.empty(spec.grid.size)
    for i, value in enumerate(spec.grid):
        cfg = replace(spec.fixed, **{spec.varied: float(value)})
        if spec.varied == "theta2":
            v = spec.source.visibility
            values[i] = 0.5 * (1.0 + v) * polarization_correlation(
                AnalyzerSettings(cfg.theta1, cfg.theta2), v)
        else:
            values[i] = analytic_probability(
                cfg.dx1, cfg.dx2, cfg.dx3, spec.source, spec.sign,
                geometry_factor=cfg.geometry_factor)
    return values


def _spectral(correlation_length: float) -> SpectralModel:
    return SpectralModel(SpectralKind.SINC_SQUARED,
                         correlation_length / SPEED_OF_LIGHT)


def _symmetric_grid(half_span: float, n: int, center: float = 0.0) -> np.ndarray:
    return np.linspace(center - half_span, center + half_span, n)


# per-preset default visibilities; HOM presets differ between the peak and
# dip analyzer combinations, matching the reported pairs
_PRESET_VISIBILITY = {
    Preset.FIG2A: {1: 0.92, -1: 0.93},
    Preset.FIG2B: {1: 0.92, -1: 0.92},
    Preset.FIG2C: {1: 0.91, -1: 0.91},
    Preset.FIG2D: {1: 0.94, -1: 0.94},
    Preset.FIG3: {1: 0.92, -1: 0.91},
    Preset.FIG4: {1: 0.92, -1: 0.92},
}
_DEFAULT_SIGN = {
    Preset.FIG2A: -1,
    Preset.FIG2B: 1,
    Preset.FIG2C: 1,
    Preset.FIG2D: 1,
    Preset.FIG3: -1,
    Preset.FIG4: -1,
}

ENVELOPE_SCAN_POINTS = 201
PHASE_SCAN_POINTS = 101


def preset_scan(preset, sign: int | None = None, *,
                pump_wavelength: float = DEFAULT_PUMP_WAVELENGTH,
                correlation_length: float | None = None,
                visibility: float | None = None,
                dx0: float | None = None,
                theta1: float = math.pi / 4.0,
                geometry_factor: float = 1.0) -> ScanSpec:
    """Build the ScanSpec for a named preset.

    ``sign`` picks the peak (+1) or dip (-1) analyzer combination where that
    applies; keyword overrides replace the preset's canonical source values.
    ``correlation_length`` and ``dx0`` are c*T_w and the source offset in
    meters.
    """
    preset = Preset(preset)
    if preset is Preset.CUSTOM:
        raise ValueError("custom scans are built directly as ScanSpec objects")
    if sign is None:
        sign = _DEFAULT_SIGN[preset]
    if visibility is None:
        visibility = _PRESET_VISIBILITY[preset][sign]

    lam = 2.0 * pump_wavelength
    g = geometry_factor

    if preset is Preset.FIG3:
        corr = BEAT_CORRELATION_LENGTH if correlation_length is None else correlation_length
        source = BiphotonSource.from_wavelength_splitting(
            pump_wavelength, BEAT_WAVELENGTH_SPLITTING, _spectral(corr),
            delta_x0=0.0 if dx0 is None else dx0, visibility=visibility)
    else:
        corr = DEFAULT_CORRELATION_LENGTH if correlation_length is None else correlation_length
        if dx0 is None:
            dx0 = COMPENSATION_OFFSET if preset is Preset.FIG4 else 0.0
        source = BiphotonSource.degenerate(
            pump_wavelength, _spectral(corr), delta_x0=dx0,
            visibility=visibility)

    fixed = StageConfig(dx0=source.delta_x0, theta1=theta1,
                        theta2=sign * math.pi / 4.0, geometry_factor=g)

    if preset in (Preset.FIG2A, Preset.FIG3, Preset.FIG4):
        support = corr / (2.0 * g)  # envelope zero of a dx1 scan
        center = source.delta_x0 / g
        grid = _symmetric_grid(1.5 * support, ENVELOPE_SCAN_POINTS, center)
        return ScanSpec(preset, "dx1", grid, fixed, source, sign)
    if preset is Preset.FIG2B:
        # resolve the optical carrier: one point every lambda/8
        support = corr / g
        step = lam / (g * MIN_POINTS_PER_PERIOD)
        half_points = round(1.5 * support / step)
        grid = _symmetric_grid(half_points * step, 2 * half_points + 1)
        return ScanSpec(preset, "dx2", grid, fixed, source, sign)
    if preset is Preset.FIG2C:
        grid = _symmetric_grid(lam / g, PHASE_SCAN_POINTS)
        return ScanSpec(preset, "dx3", grid, fixed, source, sign)
    # FIG2D: rotate analyzer 2 through two full correlation periods
    grid = np.linspace(0.0, 2.0 * math.pi, PHASE_SCAN_POINTS)
    return ScanSpec(preset, "theta2", grid, fixed, source, sign)
