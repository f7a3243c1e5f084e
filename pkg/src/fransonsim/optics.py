"""Jones-calculus elements and two-photon path enumeration.

Each photon of a pair enters its own unbalanced interferometer built around a
polarizing beamsplitter: H transmits along the short path, V is sent on a
roundtrip through the long arm.  Enumerating the surviving detection
alternatives for both photons yields a small list of :class:`PathAmplitude`
objects which the coincidence engine turns into probabilities.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import InvalidState

_BASIS_LABELS = ("H", "V")


@dataclass(frozen=True)
class PolarizationVector:
    """Single-photon polarization state in the H/V basis."""

    h: complex
    v: complex

    def __post_init__(self):
        if self.norm_sq > 1.0 + 1e-12:
            raise ValueError("polarization amplitudes exceed unit norm")

    @property
    def norm_sq(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2

    def project(self, angle: float) -> complex:
        """Amplitude transmitted by an ideal analyzer at ``angle`` from H."""
        return math.cos(angle) * self.h + math.sin(angle) * self.v


POL_H = PolarizationVector(1.0, 0.0)
POL_V = PolarizationVector(0.0, 1.0)


class ElementKind(Enum):
    PBS = "pbs"
    HALF_WAVE_PLATE = "half_wave_plate"
    QUARTER_WAVE_PLATE = "quarter_wave_plate"
    POLARIZER = "polarizer"
    DELAY_SEGMENT = "delay_segment"
    PHASE_SHIFT = "phase_shift"


@dataclass(frozen=True)
class Element:
    """One optical element; ``angle`` in radians from H, ``length`` in meters."""

    kind: ElementKind
    angle: float = 0.0
    length: float = 0.0
    phase: float = 0.0


def pbs() -> Element:
    return Element(ElementKind.PBS)


def half_wave_plate(angle: float) -> Element:
    return Element(ElementKind.HALF_WAVE_PLATE, angle=angle)


def quarter_wave_plate(angle: float) -> Element:
    return Element(ElementKind.QUARTER_WAVE_PLATE, angle=angle)


def polarizer(angle: float) -> Element:
    return Element(ElementKind.POLARIZER, angle=angle)


def delay_segment(length: float) -> Element:
    """Extra optical path, in meters, relative to the balanced reference."""
    return Element(ElementKind.DELAY_SEGMENT, length=length)


def phase_shift(phase: float) -> Element:
    return Element(ElementKind.PHASE_SHIFT, phase=phase)


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _retarder(angle: float, retardance: float) -> np.ndarray:
    """Fast axis at ``angle``; slow axis picks up exp(i * retardance)."""
    rot = _rotation(angle)
    return rot @ np.diag([1.0, cmath.exp(1j * retardance)]) @ rot.T


def jones_matrix(element: Element) -> np.ndarray:
    """2x2 transfer matrix for single-beam elements (not the PBS)."""
    if element.kind is ElementKind.HALF_WAVE_PLATE:
        return _retarder(element.angle, math.pi)
    if element.kind is ElementKind.QUARTER_WAVE_PLATE:
        return _retarder(element.angle, math.pi / 2.0)
    if element.kind is ElementKind.POLARIZER:
        c, s = math.cos(element.angle), math.sin(element.angle)
        return np.array([[c * c, c * s], [c * s, s * s]], dtype=complex)
    if element.kind is ElementKind.DELAY_SEGMENT:
        # time shift is bookkept by path enumeration, not the Jones algebra
        return np.eye(2, dtype=complex)
    if element.kind is ElementKind.PHASE_SHIFT:
        return cmath.exp(1j * element.phase) * np.eye(2, dtype=complex)
    raise ValueError(f"{element.kind} has no single 2x2 transfer matrix")


def transfer(element: Element, p: PolarizationVector):
    """Apply ``element`` to ``p``.

    Returns a single :class:`PolarizationVector`, except for the PBS which
    returns the ``(transmitted, reflected)`` port pair: H goes to the
    transmitted port and V to the reflected port, exactly.
    """
    if element.kind is ElementKind.PBS:
        return PolarizationVector(p.h, 0.0), PolarizationVector(0.0, p.v)
    m = jones_matrix(element)
    out = m @ np.array([p.h, p.v])
    return PolarizationVector(out[0], out[1])


@dataclass(frozen=True)
class StateTerm:
    """One coherent term of the two-photon input state.

    ``pol_u`` / ``pol_l`` are basis labels ('H' or 'V'); the offsets (seconds)
    are source-side time shifts the photons carry before entering the
    interferometers.
    """

    coefficient: complex
    pol_u: str
    pol_l: str
    offset_u: float = 0.0
    offset_l: float = 0.0


@dataclass(frozen=True)
class TwoPhotonInput:
    terms: tuple[StateTerm, ...]

    def __post_init__(self):
        total = sum(abs(t.coefficient) ** 2 for t in self.terms)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"state not normalized: sum |c|^2 = {total!r}")


def entangled_input(delta_x0: float = 0.0) -> TwoPhotonInput:
    """(|HH> + |VV>)/sqrt(2) as delivered at the source output ports.

    A source offset ``delta_x0`` (meters) delays the lower photon of the HH
    term and the upper photon of the VV term by ``delta_x0 / c``: the
    polarizing splitter that recombines the two source modes swaps which
    photon carries the late arrival.
    """
    amp = 1.0 / math.sqrt(2.0)
    lag = delta_x0 / SPEED_OF_LIGHT
    return TwoPhotonInput((
        StateTerm(amp, "H", "H", offset_u=0.0, offset_l=lag),
        StateTerm(amp, "V", "V", offset_u=lag, offset_l=0.0),
    ))


@dataclass(frozen=True)
class PathAmplitude:
    """One two-photon detection alternative.

    ``tau_u`` / ``tau_l`` are interferometer delays (seconds) of the photon
    heading to the upper / lower detector; ``term_offset_*`` are the
    source-side offsets inherited from the input term.  ``pol_*`` are the
    polarization states arriving at the analyzers.
    """

    coeff: complex
    tau_u: float
    tau_l: float
    pol_u: PolarizationVector
    pol_l: PolarizationVector
    term_offset_u: float = 0.0
    term_offset_l: float = 0.0

    @property
    def time_u(self) -> float:
        return self.tau_u + self.term_offset_u

    @property
    def time_l(self) -> float:
        return self.tau_l + self.term_offset_l


def _arm_delay_and_phase(arm: Sequence[Element]) -> tuple[float, float]:
    delay = 0.0
    phase = 0.0
    for element in arm:
        if element.kind is ElementKind.DELAY_SEGMENT:
            delay += element.length / SPEED_OF_LIGHT
        elif element.kind is ElementKind.PHASE_SHIFT:
            phase += element.phase
        else:
            raise ValueError(
                "long arms are described by delay segments and phase shifts; "
                f"got {element.kind}"
            )
    return delay, phase


_POL_OF_LABEL = {"H": POL_H, "V": POL_V}


def enumerate_paths(state: TwoPhotonInput,
                    long_arm_u: Sequence[Element],
                    long_arm_l: Sequence[Element],
                    *, splitter: str = "pbs") -> list[PathAmplitude]:
    """Enumerate the two-photon amplitudes surviving to the detectors.

    With ``splitter="pbs"`` (the circuit modeled here) routing is
    deterministic: an H photon takes the short path, a V photon the long one,
    so each input term contributes exactly one path and the mixed short-long
    alternatives never appear.  ``splitter="balanced"`` replaces both
    splitters by non-polarizing 50:50 ones, in which case every photon splits
    into short and long branches and a single term yields all four
    combinations (the behavior of the classic unbalanced-interferometer
    scheme, kept for contrast).
    """
    tau_u, phase_u = _arm_delay_and_phase(long_arm_u)
    tau_l, phase_l = _arm_delay_and_phase(long_arm_l)

    for term in state.terms:
        if term.pol_u not in _BASIS_LABELS or term.pol_l not in _BASIS_LABELS:
            raise InvalidState(
                f"term polarization labels must be in {_BASIS_LABELS}, "
                f"got ({term.pol_u!r}, {term.pol_l!r})"
            )

    paths: list[PathAmplitude] = []
    if splitter == "pbs":
        for term in state.terms:
            long_u = term.pol_u == "V"
            long_l = term.pol_l == "V"
            coeff = term.coefficient
            if long_u:
                coeff *= cmath.exp(1j * phase_u)
            if long_l:
                coeff *= cmath.exp(1j * phase_l)
            paths.append(PathAmplitude(
                coeff=coeff,
                tau_u=tau_u if long_u else 0.0,
                tau_l=tau_l if long_l else 0.0,
                pol_u=_POL_OF_LABEL[term.pol_u],
                pol_l=_POL_OF_LABEL[term.pol_l],
                term_offset_u=term.offset_u,
                term_offset_l=term.offset_l,
            ))
    elif splitter == "balanced":
        # per photon: short = t*t = 1/2, long = r*r = -1/2 (i-reflection
        # convention), so each term spawns all four route combinations
        for term in state.terms:
            for long_u in (False, True):
                for long_l in (False, True):
                    branch_u = -0.5 * cmath.exp(1j * phase_u) if long_u else 0.5
                    branch_l = -0.5 * cmath.exp(1j * phase_l) if long_l else 0.5
                    paths.append(PathAmplitude(
                        coeff=term.coefficient * branch_u * branch_l,
                        tau_u=tau_u if long_u else 0.0,
                        tau_l=tau_l if long_l else 0.0,
                        pol_u=_POL_OF_LABEL[term.pol_u],
                        pol_l=_POL_OF_LABEL[term.pol_l],
                        term_offset_u=term.offset_u,
                        term_offset_l=term.offset_l,
                    ))
    else:
        raise ValueError(f"unknown splitter {splitter!r}")
    return paths
