"""
Raman pulse envelopes, the effective two-photon pulse and the
superadiabatic correction fields.

Three envelope families are available (Gaussian, exponential and
trigonometric). All frequencies are angular, in rad/us, and times are in
us. Every sampling function accepts a scalar time or an array of times
and broadcasts accordingly.
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import expit

__all__ = [
    "PulseFamily", "PulseParams", "EnvelopeSample", "CorrectionParams",
    "CorrectionSample", "DegenerateEnvelopeError", "sample_envelope",
    "omega_d", "sample_correction", "adiabaticity_figure",
    "adiabaticity_kind", "gaussian_reference",
]

# relative slack on the [0, T] domain check, absorbs rounding in t grids
_DOMAIN_RTOL = 1e-12


class DegenerateEnvelopeError(ValueError):
    """Both Raman envelopes vanish, so the mixing angle is undefined."""


class PulseFamily(str, enum.Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"
    TRIGONOMETRIC = "trigonometric"


@dataclass(frozen=True)
class PulseParams:
    """Parameters of a pump/Stokes envelope pair.

    Parameters
    ----------
    family : PulseFamily
    omega0 : float
        Peak Rabi frequency in rad/us (angular).
    T : float
        Total protocol duration in us.
    sigma : float, optional
        Width in us. Required by the Gaussian and exponential families.
    delta_t : float, optional
        Half delay between the pulse centers in us (Gaussian only).
    """

    family: PulseFamily
    omega0: float
    T: float
    sigma: Optional[float] = None
    delta_t: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", PulseFamily(self.family))
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if not self.T > 0:
            raise ValueError(f"T must be > 0, got {self.T}")
        if self.family in (PulseFamily.GAUSSIAN, PulseFamily.EXPONENTIAL):
            if self.sigma is None or not self.sigma > 0:
                raise ValueError(
                    f"sigma must be > 0 for the {self.family.value} family, "
                    f"got {self.sigma}")
        if self.family is PulseFamily.GAUSSIAN:
            if self.delta_t is None or not self.delta_t >= 0:
                raise ValueError(
                    f"delta_t must be >= 0 for the gaussian family, "
                    f"got {self.delta_t}")


class EnvelopeSample(NamedTuple):
    omega_p: np.ndarray
    omega_s: np.ndarray
    d_omega_p: np.ndarray
    d_omega_s: np.ndarray


@dataclass(frozen=True)
class CorrectionParams:
    """Detuning (rad/us) and constant phase of the ``a`` correction field."""

    delta: float
    phase_a: float = np.pi / 2

    def __post_init__(self):
        if self.delta == 0 or not np.isfinite(self.delta):
            raise ValueError(f"detuning delta must be nonzero, got {self.delta}")


class CorrectionSample(NamedTuple):
    omega_a: np.ndarray
    omega_b: np.ndarray


def gaussian_reference(T, omega0=2 * np.pi * 2.0):
    """Gaussian pair with the default scalings delta_t = T/10, sigma = T/6."""
    return PulseParams(PulseFamily.GAUSSIAN, omega0, T, sigma=T / 6,
                       delta_t=T / 10)


def _check_domain(params, t):
    t = np.asarray(t, dtype=float)
    slack = _DOMAIN_RTOL * params.T
    if np.any(t < -slack) or np.any(t > params.T + slack) or np.any(np.isnan(t)):
        raise ValueError(f"time outside protocol window [0, {params.T}] us")
    return t


def sample_envelope(params, t):
    """Pump and Stokes envelopes and their analytic time derivatives.

    The Gaussian pair is centered at ``T/2 +- delta_t`` with the Stokes
    pulse first. The exponential pair uses square roots of logistic
    functions of ``(t - T/2)/sigma``; the trigonometric pair is
    ``Omega_S = omega0 sin(pi t / 2T)``, ``Omega_P = omega0 cos(pi t / 2T)``.
    """
    t = _check_domain(params, t)
    w0, T = params.omega0, params.T
    fam = params.family
    if fam is PulseFamily.GAUSSIAN:
        s2 = params.sigma ** 2
        xs = t - T / 2 + params.delta_t
        xp = t - T / 2 - params.delta_t
        om_s = w0 * np.exp(-xs ** 2 / s2)
        om_p = w0 * np.exp(-xp ** 2 / s2)
        d_s = -2 * xs / s2 * om_s
        d_p = -2 * xp / s2 * om_p
    elif fam is PulseFamily.EXPONENTIAL:
        u = (t - T / 2) / params.sigma
        fs = expit(u)
        fp = expit(-u)
        om_s = w0 * np.sqrt(fs)
        om_p = w0 * np.sqrt(fp)
        # d/dt sqrt(expit(u)) = sqrt(expit(u)) * (1 - expit(u)) / (2 sigma)
        d_s = om_s * fp / (2 * params.sigma)
        d_p = -om_p * fs / (2 * params.sigma)
    else:
        k = np.pi / (2 * T)
        om_s = w0 * np.sin(k * t)
        om_p = w0 * np.cos(k * t)
        d_s = k * om_p
        d_p = -k * om_s
        assert np.all(om_s ** 2 + om_p ** 2 > 0)
    return EnvelopeSample(om_p[()], om_s[()], d_p[()], d_s[()])


def _norm2(env):
    den = np.asarray(env.omega_p) ** 2 + np.asarray(env.omega_s) ** 2
    if np.any(den < np.finfo(float).tiny):
        raise DegenerateEnvelopeError(
            "pump and Stokes envelopes both vanish; mixing angle undefined")
    return den


def mixing_rate(params, t):
    """Time derivative of the mixing angle, tan(theta) = Omega_P/Omega_S."""
    env = sample_envelope(params, t)
    den = _norm2(env)
    num = env.d_omega_p * env.omega_s - env.omega_p * env.d_omega_s
    return (num / den)[()]


def omega_d(params, t):
    """Effective two-photon pulse, ``-2i (dP S - P dS) / (P^2 + S^2)``."""
    return (-2j * np.asarray(mixing_rate(params, t)))[()]


def sample_correction(params, corr, t):
    """Correction fields ``Omega_a``, ``Omega_b`` emulating ``Omega_d``.

    Both share the magnitude ``sqrt(2 |Delta| |Omega_d|)``; ``Omega_a``
    carries the extra constant phase ``corr.phase_a``.
    """
    amp = np.sqrt(2 * abs(corr.delta) * np.abs(omega_d(params, t)))
    return CorrectionSample((np.exp(1j * corr.phase_a) * amp)[()],
                            (amp + 0j)[()])


def adiabaticity_figure(params):
    """Global adiabaticity figure ``omega0 * delta_t``.

    The criterion is defined for delayed Gaussian pairs. Other families
    return ``omega0 * T`` as a proxy; see :func:`adiabaticity_kind`.
    """
    if params.family is PulseFamily.GAUSSIAN:
        return params.omega0 * params.delta_t
    return params.omega0 * params.T


def adiabaticity_kind(params):
    if params.family is PulseFamily.GAUSSIAN:
        return "omega0_delta_t"
    return "omega0_T_proxy"
