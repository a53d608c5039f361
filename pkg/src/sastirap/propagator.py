"""
Time-dependent Schroedinger propagation for 3x3 Hamiltonian trajectories.

Two exponential integrators are provided. The exponential midpoint rule
(second-order Magnus) applies ``exp(-i H(t_k + dt/2) dt)`` per step. The
default is a fourth-order commutator-free Magnus scheme that applies two
such exponentials per step, built from H at the two Gauss-Legendre nodes
with real weights. Every exponential comes from the spectral decomposition
of a Hermitian matrix, so each step is unitary to machine precision. A
classical RK4 integrator is kept as an independent cross-check.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .hamiltonian import IDX_0, IDX_P1

__all__ = [
    "Method", "PropagationConfig", "TraceRecord", "PropagationError",
    "StepConstraintError", "normalize_state", "basis_state", "expm_hermitian",
    "propagate", "transfer_efficiency", "max_intermediate_population",
]

# step <= STEP_FRACTION * 2 pi / |delta|
STEP_FRACTION = 0.02
# Hamiltonian evaluations are batched to bound memory on long runs
_CHUNK = 8192


class PropagationError(RuntimeError):
    pass


class StepConstraintError(ValueError):
    pass


class Method(str, enum.Enum):
    MAGNUS4 = "magnus4"
    MIDPOINT_EXPONENTIAL = "midpoint_exponential"
    RK4 = "rk4"


# Gauss-Legendre nodes and commutator-free weights of the 4th-order scheme
_GL_NODES = (0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6)
_CF_WEIGHTS = ((3 + 2 * np.sqrt(3)) / 12, (3 - 2 * np.sqrt(3)) / 12)


@dataclass(frozen=True)
class PropagationConfig:
    step_count: int = 20000
    method: Method = Method.MAGNUS4
    record_stride: int = 20

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if int(self.step_count) != self.step_count or self.step_count < 1:
            raise ValueError(f"step_count must be a positive integer, "
                             f"got {self.step_count}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError(f"record_stride must be a positive integer, "
                             f"got {self.record_stride}")


@dataclass(frozen=True)
class TraceRecord:
    """Populations of (|0>, |-1>, |+1>) on the recorded time grid."""

    times: np.ndarray
    populations: np.ndarray
    final_state: np.ndarray
    efficiency: float
    meta: dict = None


def basis_state(index):
    psi = np.zeros(3, dtype=complex)
    psi[index] = 1.0
    return psi


def normalize_state(psi, atol=1e-12):
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (3,):
        raise ValueError(f"state must have 3 amplitudes, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > atol:
        raise ValueError(f"initial state not normalized (norm = {norm!r})")
    return psi


def expm_hermitian(h, dt):
    """``exp(-i h dt)`` for a stack of Hermitian matrices, via ``eigh``."""
    w, v = np.linalg.eigh(h)
    return np.einsum("...ij,...j,...kj->...ik", v, np.exp(-1j * w * dt),
                     v.conj())


def _check_step(traj, dt):
    delta = abs(getattr(traj, "detuning", 0.0))
    if delta > 0:
        limit = STEP_FRACTION * 2 * np.pi / delta
        if dt > limit * (1 + 1e-12):
            raise StepConstraintError(
                f"step {dt:.3g} us exceeds {limit:.3g} us required to resolve "
                f"the detuning phase; increase step_count to at least "
                f"{int(np.ceil(traj.T / limit))}")


def _evaluate(traj, t):
    h = np.asarray(traj(t))
    if not np.all(np.isfinite(h)):
        bad = t[np.argmax(~np.isfinite(h).all(axis=(-2, -1)))]
        raise PropagationError(
            f"non-finite Hamiltonian in {traj.label.value} at t = {bad:.6g} us")
    return h


def _inward(a, b):
    # one ulp inside [a, b]: the one-sided limits of H at a jump
    return np.nextafter(a, b), np.nextafter(b, a)


def _midpoint_piece(traj, psi, a, b):
    return expm_hermitian(_evaluate(traj, np.array([(a + b) / 2]))[0],
                          b - a) @ psi


def _magnus4_piece(traj, psi, a, b):
    (w1, w2), h = _CF_WEIGHTS, b - a
    h1, h2 = _evaluate(traj, a + np.array(_GL_NODES) * h)
    psi = expm_hermitian(w1 * h1 + w2 * h2, h) @ psi
    return expm_hermitian(w2 * h1 + w1 * h2, h) @ psi


def _rk4_piece(traj, psi, a, b):
    lo, hi = _inward(a, b)
    h0, h1, h2 = -1j * _evaluate(traj, np.array([lo, (a + b) / 2, hi]))
    return _rk4_update(psi, b - a, h0, h1, h2)


def _rk4_update(psi, h, h0, h1, h2):
    k1 = h0 @ psi
    k2 = h1 @ (psi + 0.5 * h * k1)
    k3 = h1 @ (psi + 0.5 * h * k2)
    k4 = h2 @ (psi + h * k3)
    return psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _split_steps(traj, n, dt):
    """Steps whose closed interval holds a breakpoint, with interior cuts."""
    out = {}
    tol = 1e-9 * dt
    for b in traj.breakpoints:
        if not 0 < b < traj.T:
            continue
        k = min(int(b // dt), n - 1)
        for j in (k - 1, k, k + 1):
            if 0 <= j < n and j * dt - tol <= b <= (j + 1) * dt + tol:
                cuts = out.setdefault(j, [])
                if j * dt + tol < b < (j + 1) * dt - tol:
                    cuts.append(b)
    return out


def _take_split(piece, traj, psi, k, dt, cuts):
    pts = [k * dt, *sorted(cuts), (k + 1) * dt]
    for a, b in zip(pts[:-1], pts[1:]):
        psi = piece(traj, psi, a, b)
    return psi


def _midpoint(traj, psi, n, dt, stride, out, split):
    k = 0
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        tm = (np.arange(start, stop) + 0.5) * dt
        us = expm_hermitian(_evaluate(traj, tm), dt)
        for u in us:
            if k in split:
                psi = _take_split(_midpoint_piece, traj, psi, k, dt, split[k])
            else:
                psi = u @ psi
            k += 1
            if k % stride == 0 or k == n:
                out.append((k, psi))
    return psi


def _magnus4(traj, psi, n, dt, stride, out, split):
    (c1, c2), (w1, w2) = _GL_NODES, _CF_WEIGHTS
    k = 0
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        t0 = np.arange(start, stop) * dt
        h1 = _evaluate(traj, t0 + c1 * dt)
        h2 = _evaluate(traj, t0 + c2 * dt)
        first = expm_hermitian(w1 * h1 + w2 * h2, dt)
        second = expm_hermitian(w2 * h1 + w1 * h2, dt)
        for ua, ub in zip(first, second):
            if k in split:
                psi = _take_split(_magnus4_piece, traj, psi, k, dt, split[k])
            else:
                psi = ub @ (ua @ psi)
            k += 1
            if k % stride == 0 or k == n:
                out.append((k, psi))
    return psi


def _rk4(traj, psi, n, dt, stride, out, split):
    k = 0
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        # H at t_k, t_k + dt/2 for every step in the chunk, plus the last t_k + dt
        tt = np.arange(2 * start, 2 * stop + 1) * (dt / 2)
        hs = -1j * _evaluate(traj, tt)
        for j in range(stop - start):
            if k in split:
                psi = _take_split(_rk4_piece, traj, psi, k, dt, split[k])
            else:
                psi = _rk4_update(psi, dt, hs[2 * j], hs[2 * j + 1],
                                  hs[2 * j + 2])
            k += 1
            if k % stride == 0 or k == n:
                out.append((k, psi))
    return psi


def propagate(traj, initial, config=PropagationConfig()):
    """Integrate ``i d psi/dt = H(t) psi`` over ``[0, traj.T]``.

    Parameters
    ----------
    traj : HamiltonianTrajectory
    initial : array_like, shape (3,)
        Normalized initial amplitudes in the basis (|0>, |-1>, |+1>).
    config : PropagationConfig

    Returns
    -------
    TraceRecord
        Populations every ``record_stride`` steps, always including t = 0
        and t = T.

    Raises
    ------
    StepConstraintError
        If the step does not resolve the explicit detuning phase.
    PropagationError
        If the state becomes non-finite.
    """
    psi0 = normalize_state(initial)
    n = int(config.step_count)
    dt = traj.T / n
    _check_step(traj, dt)
    out = [(0, psi0)]
    step = {Method.MAGNUS4: _magnus4,
            Method.MIDPOINT_EXPONENTIAL: _midpoint,
            Method.RK4: _rk4}[config.method]
    psi = step(traj, psi0, n, dt, config.record_stride, out,
               _split_steps(traj, n, dt))
    if not np.all(np.isfinite(psi)):
        raise PropagationError(
            f"non-finite amplitudes after propagating {traj.label} "
            f"(T = {traj.T} us, {n} steps, {config.method.value})")
    steps = np.array([k for k, _ in out])
    states = np.array([s for _, s in out])
    times = steps * dt
    times[-1] = traj.T
    pops = np.abs(states) ** 2
    return TraceRecord(times, pops, psi, float(pops[-1, IDX_P1]),
                       {"label": traj.label.value, "T": traj.T,
                        "step_count": n, "method": config.method.value})


def transfer_efficiency(record):
    """Final population of the target state |+1>."""
    return float(abs(record.final_state[IDX_P1]) ** 2)


def max_intermediate_population(record):
    return float(np.max(record.populations[:, IDX_0]))
