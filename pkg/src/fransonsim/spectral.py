"""Biphoton spectral densities and the fringe envelopes they produce.

A pair source with a monochromatic pump emits photons at frequencies
``omega_u0 + nu`` and ``omega_l0 - nu``; the detuning ``nu`` is distributed
with a normalized, even density ``S(nu)``.  The quantity that shapes the
two-photon fringe is the cosine transform

    g(tau) = integral S(nu) * cos(nu * tau) dnu,

evaluated here both in closed form (:func:`correlation_envelope`) and by
adaptive trapezoid quadrature (:func:`envelope_numeric`) so that the two
routes can check each other.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import sici

from .errors import QuadratureNotConverged


class SpectralKind(Enum):
    SINC_SQUARED = "sinc_squared"
    GAUSSIAN = "gaussian"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class SpectralModel:
    """Detuning density family, parameterized by a correlation time.

    ``correlation_width`` (seconds) is the full width of the rectangular
    two-photon temporal wave function for the sinc-squared kind, which makes
    the envelope the triangle ``max(0, 1 - |tau|/correlation_width)``.  For
    the other kinds it is the matching time scale: the 1/e point of the
    Gaussian envelope, and the first envelope zero of the rectangular kind.
    """

    kind: SpectralKind
    correlation_width: float

    def __post_init__(self):
        if not self.correlation_width > 0.0:
            raise ValueError("correlation_width must be positive")


def spectral_density(model: SpectralModel, nu):
    """Normalized detuning density S(nu); ``nu`` in rad/s, scalar or array."""
    nu = np.asarray(nu, dtype=float)
    t_w = model.correlation_width
    if model.kind is SpectralKind.SINC_SQUARED:
        # |FT of a rectangle of width t_w|^2, unit area
        out = (t_w / (2.0 * math.pi)) * np.sinc(nu * t_w / (2.0 * math.pi)) ** 2
    elif model.kind is SpectralKind.GAUSSIAN:
        out = (t_w / (2.0 * math.sqrt(math.pi))) * np.exp(-((nu * t_w / 2.0) ** 2))
    elif model.kind is SpectralKind.RECTANGULAR:
        half_width = math.pi / t_w
        out = np.where(np.abs(nu) <= half_width, t_w / (2.0 * math.pi), 0.0)
    else:
        raise ValueError(f"unknown spectral kind {model.kind!r}")
    return out if out.ndim else float(out)


def correlation_envelope(model: SpectralModel, tau):
    """Closed-form fringe envelope g(tau) in [-1, 1]; ``tau`` in seconds."""
    tau = np.asarray(tau, dtype=float)
    t_w = model.correlation_width
    if model.kind is SpectralKind.SINC_SQUARED:
        out = np.maximum(0.0, 1.0 - np.abs(tau) / t_w)
    elif model.kind is SpectralKind.GAUSSIAN:
        out = np.exp(-((tau / t_w) ** 2))
    elif model.kind is SpectralKind.RECTANGULAR:
        # sin(pi tau / t_w) / (pi tau / t_w)
        out = np.sinc(tau / t_w)
    else:
        raise ValueError(f"unknown spectral kind {model.kind!r}")
    return out if out.ndim else float(out)


def coherence_support(model: SpectralModel) -> float:
    """Delay beyond which the envelope is (effectively) gone, in seconds.

    Exact for the sinc-squared triangle; for the other kinds this returns the
    point where the envelope has decayed to the few-1e-4 level (3x the 1/e
    time for the Gaussian) or its first zero (rectangular).
    """
    if model.kind is SpectralKind.GAUSSIAN:
        return 3.0 * model.correlation_width
    return model.correlation_width


def envelope_numeric(model: SpectralModel, tau: float, *, tol: float = 1e-8,
                     n_start: int = 4096, max_doublings: int = 12) -> float:
    """Quadrature value of integral S(nu) cos(nu tau) dnu.

    Composite trapezoid over a finite detuning window with automatic grid
    doubling until successive results differ by at most ``tol``; the returned
    value is Richardson extrapolated.  The sinc-squared density has 1/nu^2
    tails, so the part of the integral beyond the window is added in closed
    form (sine-integral terms) instead of being truncated.

    Raises QuadratureNotConverged if the doubling budget is exhausted while
    the result still moves by more than ``tol``.
    """
    tau = float(tau)
    t_w = model.correlation_width
    if model.kind is SpectralKind.SINC_SQUARED:
        window = 64.0 * 2.0 * math.pi / t_w
        tail = _sinc_squared_tail(t_w, tau, window)
    elif model.kind is SpectralKind.GAUSSIAN:
        window = 8.0 * math.sqrt(2.0) / t_w
        tail = 0.0
    elif model.kind is SpectralKind.RECTANGULAR:
        window = math.pi / t_w
        tail = 0.0
    else:
        raise ValueError(f"unknown spectral kind {model.kind!r}")

    def bulk(n: int) -> float:
        nu = np.linspace(0.0, window, n + 1)
        integrand = spectral_density(model, nu) * np.cos(nu * tau)
        # even integrand: twice the half-line integral
        return 2.0 * float(np.trapezoid(integrand, nu))

    n = n_start
    previous = bulk(n)
    for _ in range(max_doublings):
        n *= 2
        current = bulk(n)
        if abs(current - previous) <= tol:
            # one Richardson step on the h^2 trapezoid error
            return current + (current - previous) / 3.0 + tail
        previous = current
    raise QuadratureNotConverged(
        f"trapezoid result still changing by more than {tol:g} after "
        f"{max_doublings} grid doublings (n={n})"
    )


def _sinc_squared_tail(t_w: float, tau: float, window: float) -> float:
    """Exact |nu| > window remainder of the sinc-squared envelope integral.

    Uses sin^2(x) = (1 - cos 2x)/2 and
    integral_L^inf cos(a nu)/nu^2 dnu = cos(aL)/L - |a| (pi/2 - Si(|a| L)).
    """

    def cos_over_nu_sq(a: float) -> float:
        a = abs(a)
        if a == 0.0:
            return 1.0 / window
        si, _ = sici(a * window)
        return math.cos(a * window) / window - a * (math.pi / 2.0 - si)

    return (2.0 / (math.pi * t_w)) * (
        cos_over_nu_sq(tau)
        - 0.5 * cos_over_nu_sq(t_w + tau)
        - 0.5 * cos_over_nu_sq(t_w - tau)
    )
