"""Coincidence probabilities from path amplitudes, plus the factorized law.

The engine (:func:`coincidence_probability`) projects every enumerated path
onto the two analyzers and evaluates

    P = N * integral dnu S(nu) | sum_k c_k exp(i [(omega_u0 + nu) t_u,k
                                               + (omega_l0 - nu) t_l,k]) |^2

with the interference cross terms scaled by the source visibility V.  For an
even detuning density the nu integral reduces exactly to the closed-form
envelope of :mod:`fransonsim.spectral` times a carrier-phase cosine, which is
how it is computed.  N is fixed so that the incoherent plateau at +/-45
analyzers sits at exactly 1/2, turning the probability into a count rate
relative to twice the plateau rate.

:func:`analytic_probability` is the independent factorized fringe law

    P = 1/2 [1 +/- V f(tau) cos(delta_omega tau / 2) cos(2 pi g (dx2 - dx3)/lambda)]

restricted to single-stage scan protocols, used as an oracle for the engine.
"""

import math
from dataclasses import dataclass

from scipy.constants import c as SPEED_OF_LIGHT

from .errors import NormalizationFailure, ProtocolViolation
from .optics import PathAmplitude
from .spectral import SpectralModel, coherence_support, correlation_envelope

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BiphotonSource:
    """Pair source parameters: wavelengths in meters, delta_x0 in meters.

    Center wavelengths must satisfy 1/lambda_u + 1/lambda_l = 1/lambda_pump
    (monochromatic pump).  ``visibility`` scales interference cross terms.
    """

    pump_wavelength: float
    center_wavelength_u: float
    center_wavelength_l: float
    spectral: SpectralModel
    delta_x0: float = 0.0
    visibility: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must lie in [0, 1]")
        mismatch = (1.0 / self.center_wavelength_u
                    + 1.0 / self.center_wavelength_l
                    - 1.0 / self.pump_wavelength)
        if abs(mismatch) * self.pump_wavelength > 1e-9:
            raise ValueError(
                "center wavelengths break pump energy conservation by "
                f"{abs(mismatch) * self.pump_wavelength:.3e} relative"
            )

    @classmethod
    def degenerate(cls, pump_wavelength: float, spectral: SpectralModel,
                   *, delta_x0: float = 0.0, visibility: float = 1.0):
        lam = 2.0 * pump_wavelength
        return cls(pump_wavelength, lam, lam, spectral,
                   delta_x0=delta_x0, visibility=visibility)

    @classmethod
    def from_wavelength_splitting(cls, pump_wavelength: float,
                                  delta_lambda: float, spectral: SpectralModel,
                                  *, delta_x0: float = 0.0,
                                  visibility: float = 1.0):
        """Nondegenerate pair split by ``delta_lambda`` about 2x the pump.

        The split is applied symmetrically in frequency so that energy
        conservation holds exactly; ``delta_lambda`` is the center-wavelength
        difference evaluated at the degenerate point.
        """
        lam = 2.0 * pump_wavelength
        delta_f = SPEED_OF_LIGHT * delta_lambda / lam ** 2
        f_half = SPEED_OF_LIGHT / pump_wavelength / 2.0
        return cls(pump_wavelength,
                   SPEED_OF_LIGHT / (f_half + delta_f / 2.0),
                   SPEED_OF_LIGHT / (f_half - delta_f / 2.0),
                   spectral, delta_x0=delta_x0, visibility=visibility)

    @property
    def omega_u0(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.center_wavelength_u

    @property
    def omega_l0(self) -> float:
        return TWO_PI * SPEED_OF_LIGHT / self.center_wavelength_l

    @property
    def delta_omega(self) -> float:
        """Angular beat frequency omega_u0 - omega_l0."""
        return self.omega_u0 - self.omega_l0

    @property
    def degenerate_wavelength(self) -> float:
        """Single-photon wavelength at the mean frequency: twice the pump."""
        return 2.0 * self.pump_wavelength

    @property
    def is_degenerate(self) -> bool:
        return abs(self.delta_omega) <= 1e-12 * self.omega_u0


@dataclass(frozen=True)
class AnalyzerSettings:
    """Analyzer angles (radians from H) in front of the two detectors."""

    theta1: float
    theta2: float


def carrier_phase(path: PathAmplitude, source: BiphotonSource) -> float:
    """Optical phase the path accumulates at the center frequencies."""
    return (source.omega_u0 * path.time_u + source.omega_l0 * path.time_l)


def coincidence_probability(paths: list[PathAmplitude],
                            source: BiphotonSource,
                            analyzers: AnalyzerSettings) -> float:
    """Plateau-normalized coincidence probability for the given paths.

    Raises NormalizationFailure when the incoherent +/-45 plateau vanishes
    (no path survives the analyzers), since the relative rate is then
    undefined.
    """
    if not paths:
        raise NormalizationFailure("no paths reach the detectors")

    amps = [p.coeff * p.pol_u.project(analyzers.theta1)
            * p.pol_l.project(analyzers.theta2) for p in paths]
    diagonal = sum(abs(a) ** 2 for a in amps)

    quarter = math.pi / 4.0
    plateau = sum(abs(p.coeff * p.pol_u.project(quarter)
                      * p.pol_l.project(quarter)) ** 2 for p in paths)
    if plateau <= 0.0:
        raise NormalizationFailure("plateau normalizer vanished")

    cross = 0.0
    for j in range(len(paths)):
        for k in range(j + 1, len(paths)):
            pair = amps[j] * amps[k].conjugate()
            if pair == 0.0:
                continue
            dt_u = paths[j].time_u - paths[k].time_u
            dt_l = paths[j].time_l - paths[k].time_l
            envelope = correlation_envelope(source.spectral, dt_u - dt_l)
            if envelope == 0.0:
                continue
            phase = source.omega_u0 * dt_u + source.omega_l0 * dt_l
            cross += 2.0 * (pair * complex(math.cos(phase),
                                           math.sin(phase))).real * envelope

    probability = (diagonal + source.visibility * cross) / (2.0 * plateau)
    if -1e-12 <= probability < 0.0:
        return 0.0
    if 1.0 < probability <= 1.0 + 1e-12:
        return 1.0
    return probability


def analytic_probability(dx1: float, dx2: float, dx3: float,
                         source: BiphotonSource, sign: int = 1,
                         *, geometry_factor: float = 1.0) -> float:
    """Factorized fringe law for single-stage scans, analyzers at +/-45 deg.

    ``sign`` +1 selects the peak combination (both analyzers at +45 deg),
    -1 the dip (second analyzer at -45 deg).  Valid only on the scan
    protocols where the factorization is exact: at most one of dx1 and the
    (dx2, dx3) pair away from zero, and a degenerate source whenever dx2 or
    dx3 is scanned.  Elsewhere it raises ProtocolViolation; the engine is the
    ground truth there.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 (peak) or -1 (dip)")
    tol = 1e-12
    if abs(dx1) > tol and (abs(dx2) > tol or abs(dx3) > tol):
        raise ProtocolViolation(
            "factorized law needs a single varied stage: dx1 and dx2/dx3 "
            "are nonzero together"
        )
    if not source.is_degenerate and (abs(dx2) > tol or abs(dx3) > tol):
        raise ProtocolViolation(
            "factorized law covers dx2/dx3 scans only for degenerate pairs"
        )

    g = geometry_factor
    tau_env = (g * (-2.0 * dx1 + dx2 + dx3)
               + 2.0 * source.delta_x0) / SPEED_OF_LIGHT
    envelope = correlation_envelope(source.spectral, tau_env)
    beat = math.cos(source.delta_omega * tau_env / 2.0)
    lam = source.degenerate_wavelength
    phase = math.cos(TWO_PI / lam * g * (dx2 - dx3))
    return 0.5 * (1.0 + sign * source.visibility * envelope * beat * phase)


def polarization_correlation(analyzers: AnalyzerSettings,
                             visibility: float) -> float:
    """(1 + V cos 2(theta2 - theta1)) / (1 + V), the unit-peak analyzer law."""
    if not 0.0 <= visibility <= 1.0:
        raise ValueError("visibility must lie in [0, 1]")
    delta = analyzers.theta2 - analyzers.theta1
    return (1.0 + visibility * math.cos(2.0 * delta)) / (1.0 + visibility)


@dataclass(frozen=True)
class InterferenceReport:
    """Outcome of the two interference prerequisites.

    ``condition_long_arms`` is True when the net long-arm imbalance (source
    offset included) stays inside the single-photon coherence window.
    ``condition_pair_coherence`` compares the short-short vs long-long pair
    delay against the two-photon coherence length; with the monochromatic
    pump modeled here that length is unbounded, so it always holds and
    ``pair_coherence_unbounded`` flags why.
    """

    condition_long_arms: bool
    condition_pair_coherence: bool
    differential_delay: float
    coherence_window: float
    pair_coherence_unbounded: bool = True

    @property
    def condition_i(self) -> bool:
        return self.condition_long_arms

    @property
    def condition_ii(self) -> bool:
        return self.condition_pair_coherence


def check_interference_conditions(delta_l_u: float, delta_l_l: float,
                                  source: BiphotonSource) -> InterferenceReport:
    """Evaluate the interference prerequisites for given long-arm excesses."""
    tau = (delta_l_u - delta_l_l
           + 2.0 * source.delta_x0) / SPEED_OF_LIGHT
    window = coherence_support(source.spectral)
    return InterferenceReport(
        condition_long_arms=abs(tau) < window,
        condition_pair_coherence=True,
        differential_delay=tau,
        coherence_window=window,
    )
