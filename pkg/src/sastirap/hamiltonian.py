"""
Three-level Hamiltonians in the fixed basis order (|0>, |-1>, |+1>).

Row/column 0 is the intermediate state |0>. Matrices are in rad/us and
every builder is vectorized over time: a scalar ``t`` gives a 3x3 array,
an array of shape ``(n,)`` gives ``(n, 3, 3)``.
"""

import enum
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .pulses import (DegenerateEnvelopeError, mixing_rate, sample_correction,
                     sample_envelope)

__all__ = [
    "BASIS", "IDX_0", "IDX_M1", "IDX_P1", "TrajectoryLabel",
    "HamiltonianTrajectory", "EigenFrame", "h_stirap", "h_sa_from_fields",
    "h_sa_rotating", "mixing_angle", "eigenframe", "h_cd_exact",
    "stirap_trajectory", "sa_correction_trajectory", "total_trajectory",
    "exact_cd_trajectory", "stirap_plus_exact_cd_trajectory",
]

BASIS = ("0", "-1", "+1")
IDX_0, IDX_M1, IDX_P1 = 0, 1, 2


def _zeros(t):
    t = np.asarray(t, dtype=float)
    return t, np.zeros(t.shape + (3, 3), dtype=complex)


def h_stirap(params, t):
    """Pump couples |-1>-|0>, Stokes couples |+1>-|0>, both with factor 1/2."""
    env = sample_envelope(params, t)
    t, h = _zeros(t)
    h[..., IDX_0, IDX_M1] = h[..., IDX_M1, IDX_0] = env.omega_p / 2
    h[..., IDX_0, IDX_P1] = h[..., IDX_P1, IDX_0] = env.omega_s / 2
    return h


def h_sa_from_fields(omega_a, omega_b, delta, t):
    """Rotating-frame correction Hamiltonian for given field values.

    The ``exp(+-i delta t)`` factors are kept explicitly; no rotating-wave
    approximation is applied on top of them.
    """
    t, h = _zeros(t)
    ph = np.exp(1j * delta * t)
    omega_a = np.asarray(omega_a)
    omega_b = np.asarray(omega_b)
    h[..., IDX_0, IDX_M1] = np.conj(omega_a) * np.conj(ph) / 2
    h[..., IDX_0, IDX_P1] = omega_b * np.conj(ph) / 2
    h[..., IDX_M1, IDX_0] = omega_a * ph / 2
    h[..., IDX_P1, IDX_0] = np.conj(omega_b) * ph / 2
    return h


def h_sa_rotating(params, corr, t):
    c = sample_correction(params, corr, t)
    return h_sa_from_fields(c.omega_a, c.omega_b, corr.delta, t)


def mixing_angle(params, t):
    """theta = atan2(Omega_P, Omega_S), in [0, pi/2] for the three families."""
    env = sample_envelope(params, t)
    if np.any(np.asarray(env.omega_p) ** 2 + np.asarray(env.omega_s) ** 2
              < np.finfo(float).tiny):
        raise DegenerateEnvelopeError(
            "pump and Stokes envelopes both vanish; mixing angle undefined")
    return np.arctan2(env.omega_p, env.omega_s)[()]


@dataclass(frozen=True)
class EigenFrame:
    """Instantaneous eigenbasis of :func:`h_stirap`.

    Vectors have shape ``(..., 3)``. Phases are fixed so that
    ``<-1|dark> >= 0`` and ``<0|bright_pm>`` is real positive.
    """

    dark: np.ndarray
    bright_minus: np.ndarray
    bright_plus: np.ndarray
    eigenvalues: np.ndarray
    theta: np.ndarray

    def vectors(self):
        """Columns dark, bright_minus, bright_plus, shape ``(..., 3, 3)``."""
        return np.stack([self.dark, self.bright_minus, self.bright_plus],
                        axis=-1)


def _frame_vectors(theta):
    c, s = np.cos(theta), np.sin(theta)
    z = np.zeros_like(theta)
    r = 1 / np.sqrt(2)
    dark = np.stack([z, c, -s], axis=-1)
    bm = np.stack([np.full_like(theta, r), -r * s, -r * c], axis=-1)
    bp = np.stack([np.full_like(theta, r), r * s, r * c], axis=-1)
    return dark, bm, bp


def eigenframe(params, t):
    theta = np.asarray(mixing_angle(params, t), dtype=float)
    env = sample_envelope(params, t)
    half = 0.5 * np.hypot(env.omega_p, env.omega_s)
    dark, bm, bp = _frame_vectors(theta)
    evals = np.stack([np.zeros_like(half), -half, half], axis=-1)
    return EigenFrame(dark.astype(complex), bm.astype(complex),
                      bp.astype(complex), evals, theta[()])


def h_cd_exact(params, t):
    """Exact transitionless-driving term built from the eigenframe.

    Evaluates ``i sum_n (|dn><n| - <n|dn> |n><n|)`` with
    ``|dn> = theta_dot d|n>/dtheta``. With the phase convention of
    :func:`eigenframe` only the mixing angle moves the basis, so the
    result is ``i theta_dot (|-1><+1| - |+1><-1|)``.
    """
    theta = np.asarray(mixing_angle(params, t), dtype=float)
    rate = np.asarray(mixing_rate(params, t), dtype=float)
    vecs = np.stack(_frame_vectors(theta), axis=-1)
    c, s = np.cos(theta), np.sin(theta)
    z = np.zeros_like(theta)
    r = 1 / np.sqrt(2)
    d_dark = np.stack([z, -s, -c], axis=-1)
    d_bm = np.stack([z, -r * c, r * s], axis=-1)
    d_bp = np.stack([z, r * c, -r * s], axis=-1)
    dvecs = rate[..., None, None] * np.stack([d_dark, d_bm, d_bp], axis=-1)
    # <n|dn>, zero for real normalized vectors but kept for gauge generality
    berry = np.einsum("...in,...in->...n", vecs.conj(), dvecs)
    h = 1j * (np.einsum("...in,...jn->...ij", dvecs, vecs.conj())
              - np.einsum("...n,...in,...jn->...ij", berry, vecs, vecs.conj()))
    return h


class TrajectoryLabel(str, enum.Enum):
    STIRAP = "stirap"
    SA_CORRECTION = "sa_correction"
    TOTAL = "total"
    EXACT_CD = "exact_cd"
    STIRAP_PLUS_EXACT_CD = "stirap_plus_exact_cd"


@dataclass(frozen=True)
class HamiltonianTrajectory:
    """A time-dependent 3x3 Hamiltonian on ``[0, T]``.

    ``evaluate`` must accept scalars and 1-D arrays of times. ``detuning``
    is the fastest explicit phase rate (rad/us) present in the matrix and
    feeds the propagator's step-size check. ``breakpoints`` lists times
    inside ``(0, T)`` where H jumps; the propagator splits steps there.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    label: TrajectoryLabel
    T: float
    detuning: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)
    breakpoints: tuple = ()

    def __call__(self, t):
        return self.evaluate(t)

    def time_reversed(self):
        """Trajectory ``s -> conj(H(T - s))``.

        Propagating the conjugated final state under it and conjugating
        the result undoes the forward evolution.
        """
        T, f = self.T, self.evaluate
        return replace(self, evaluate=lambda s: np.conj(f(T - np.asarray(s))),
                       breakpoints=tuple(sorted(T - b for b in self.breakpoints)))

    def __add__(self, other):
        if not isinstance(other, HamiltonianTrajectory):
            return NotImplemented
        if not np.isclose(self.T, other.T, rtol=1e-14, atol=0):
            raise ValueError("cannot add trajectories of different duration")
        f, g = self.evaluate, other.evaluate
        return HamiltonianTrajectory(
            lambda t: f(t) + g(t), TrajectoryLabel.TOTAL, self.T,
            max(abs(self.detuning), abs(other.detuning)),
            breakpoints=tuple(sorted(set(self.breakpoints)
                                     | set(other.breakpoints))))


def stirap_trajectory(params):
    return HamiltonianTrajectory(lambda t: h_stirap(params, t),
                                 TrajectoryLabel.STIRAP, params.T)


def sa_correction_trajectory(params, corr):
    return HamiltonianTrajectory(lambda t: h_sa_rotating(params, corr, t),
                                 TrajectoryLabel.SA_CORRECTION, params.T,
                                 abs(corr.delta))


def total_trajectory(params, corr):
    return HamiltonianTrajectory(
        lambda t: h_stirap(params, t) + h_sa_rotating(params, corr, t),
        TrajectoryLabel.TOTAL, params.T, abs(corr.delta))


def exact_cd_trajectory(params):
    return HamiltonianTrajectory(lambda t: h_cd_exact(params, t),
                                 TrajectoryLabel.EXACT_CD, params.T)


def stirap_plus_exact_cd_trajectory(params):
    return HamiltonianTrajectory(
        lambda t: h_stirap(params, t) + h_cd_exact(params, t),
        TrajectoryLabel.STIRAP_PLUS_EXACT_CD, params.T)
