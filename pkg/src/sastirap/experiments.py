"""
Scenario runners: population traces, efficiency-vs-duration sweeps,
(sigma, delta_t) robustness grids and pulse previews.

Sweep and grid points are independent propagations. They can be spread
over worker processes; results are always ordered by grid index.
"""

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Tuple, Union

import numpy as np

from . import __version__
from .hamiltonian import (HamiltonianTrajectory, TrajectoryLabel,
                          eigenframe, h_sa_from_fields, h_stirap,
                          stirap_plus_exact_cd_trajectory, stirap_trajectory,
                          total_trajectory)
from .propagator import (PropagationConfig, TraceRecord, basis_state,
                         max_intermediate_population, propagate)
from .pulses import (CorrectionParams, PulseFamily, PulseParams,
                     adiabaticity_figure, adiabaticity_kind, mixing_rate,
                     sample_correction, sample_envelope)

__all__ = [
    "ScenarioKind", "Protocol", "DurationSweep", "RobustnessSweep",
    "ScenarioSpec", "SweepRecord", "PreviewTable", "default_phase",
    "resolve_initial_state", "build_trajectory", "shifted_correction_trajectory",
    "run_population_trace", "run_efficiency_sweep", "run_robustness_grid",
    "run_pulse_preview", "run_scenario",
]


class ScenarioKind(str, enum.Enum):
    POPULATION_TRACE = "trace"
    EFFICIENCY_VS_DURATION = "sweep"
    ROBUSTNESS_GRID = "grid"
    PULSE_PREVIEW = "pulses"


class Protocol(str, enum.Enum):
    STIRAP = "stirap"
    SA_STIRAP = "sa"
    EXACT_CD = "exact-cd"


_NAMED_STATES = {"zero": 0, "minus1": 1, "plus1": 2}


@dataclass(frozen=True)
class DurationSweep:
    """Durations to scan; delta_t and sigma scale with T."""

    T_values: Tuple[float, ...] = tuple(np.linspace(0.5, 6.0, 24))
    delta_t_over_T: float = 0.1
    sigma_over_T: float = 1 / 6
    protocols: Tuple[Protocol, ...] = (Protocol.STIRAP, Protocol.SA_STIRAP)

    def __post_init__(self):
        object.__setattr__(self, "T_values",
                           tuple(float(v) for v in self.T_values))
        object.__setattr__(self, "protocols",
                           tuple(Protocol(p) for p in self.protocols))
        if not self.T_values:
            raise ValueError("duration sweep needs at least one T value")
        if min(self.T_values) <= 0:
            raise ValueError("sweep durations must be > 0")
        if not self.protocols:
            raise ValueError("duration sweep needs at least one protocol")


@dataclass(frozen=True)
class RobustnessSweep:
    """(sigma, delta_t) grid with ``delta_t = ratio * sigma`` and
    ``T = 6 sigma + 2 delta_t``.

    The correction fields are frozen at the center point and laid onto
    every run centered at its ``T/2``.
    """

    sigma_values: Tuple[float, ...] = tuple(np.linspace(0.2, 1.0, 9))
    delta_t_ratios: Tuple[float, ...] = tuple(np.linspace(0.0, 2.0, 9))
    center_sigma: float = 0.6
    center_delta_t: float = 0.6
    protocols: Tuple[Protocol, ...] = (Protocol.STIRAP, Protocol.SA_STIRAP)

    def __post_init__(self):
        object.__setattr__(self, "sigma_values",
                           tuple(float(v) for v in self.sigma_values))
        object.__setattr__(self, "delta_t_ratios",
                           tuple(float(v) for v in self.delta_t_ratios))
        object.__setattr__(self, "protocols",
                           tuple(Protocol(p) for p in self.protocols))
        if not self.sigma_values or not self.delta_t_ratios:
            raise ValueError("robustness grid axes must be non-empty")
        if min(self.sigma_values) <= 0 or min(self.delta_t_ratios) < 0:
            raise ValueError("grid needs sigma > 0 and delta_t >= 0")
        if Protocol.EXACT_CD in self.protocols:
            raise ValueError("robustness grid compares stirap and sa only")

    def center_pulse(self, omega0):
        return PulseParams(PulseFamily.GAUSSIAN, omega0,
                           6 * self.center_sigma + 2 * self.center_delta_t,
                           sigma=self.center_sigma,
                           delta_t=self.center_delta_t)


@dataclass(frozen=True)
class ScenarioSpec:
    """One scenario to run.

    ``initial_state`` is a length-3 amplitude vector or one of ``"auto"``,
    ``"dark"``, ``"zero"``, ``"minus1"``, ``"plus1"``. ``"auto"`` is
    |-1> for the Gaussian family and the dark state at t = 0 otherwise.
    """

    kind: ScenarioKind
    pulse: PulseParams
    correction: Optional[CorrectionParams] = None
    protocol: Protocol = Protocol.SA_STIRAP
    sweep: Union[DurationSweep, RobustnessSweep, None] = None
    initial_state: Union[str, Tuple[complex, ...]] = "auto"
    propagation: PropagationConfig = PropagationConfig()
    workers: int = 1
    preview_points: int = 401

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        object.__setattr__(self, "protocol", Protocol(self.protocol))
        if not isinstance(self.initial_state, str):
            object.__setattr__(self, "initial_state",
                               tuple(complex(c) for c in self.initial_state))
        elif self.initial_state not in ("auto", "dark", *_NAMED_STATES):
            raise ValueError(f"unknown initial state {self.initial_state!r}")
        kind = self.kind
        if kind is ScenarioKind.EFFICIENCY_VS_DURATION:
            if self.sweep is None:
                object.__setattr__(self, "sweep", DurationSweep())
            elif not isinstance(self.sweep, DurationSweep):
                raise ValueError("efficiency sweep needs a DurationSweep")
        if kind is ScenarioKind.ROBUSTNESS_GRID:
            if self.pulse.family is not PulseFamily.GAUSSIAN:
                raise ValueError("robustness grid requires the gaussian family")
            if self.sweep is None:
                object.__setattr__(self, "sweep", RobustnessSweep())
            elif not isinstance(self.sweep, RobustnessSweep):
                raise ValueError("robustness grid needs a RobustnessSweep")
        if kind in (ScenarioKind.EFFICIENCY_VS_DURATION,
                    ScenarioKind.ROBUSTNESS_GRID):
            needs_corr = Protocol.SA_STIRAP in self.sweep.protocols
        else:
            needs_corr = (kind is ScenarioKind.PULSE_PREVIEW
                          or self.protocol is Protocol.SA_STIRAP)
        if needs_corr and self.correction is None:
            raise ValueError("sa protocol and pulse preview need correction "
                             "parameters (detuning)")
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")
        if self.preview_points < 2:
            raise ValueError("preview_points must be >= 2")


@dataclass(frozen=True)
class SweepRecord:
    """Sweep or grid results.

    ``axes`` is ordered and always starts with ``"protocol"``;
    ``efficiencies`` and ``max_intermediate`` have one dimension per axis.
    ``coords`` holds derived same-shape coordinates (e.g. ``T_us``).
    """

    axes: dict
    efficiencies: np.ndarray
    max_intermediate: np.ndarray
    coords: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def efficiency(self, protocol):
        idx = list(self.axes["protocol"]).index(Protocol(protocol).value)
        return self.efficiencies[idx]


@dataclass(frozen=True)
class PreviewTable:
    """Envelopes on a uniform grid, angular units (rad/us)."""

    t: np.ndarray
    omega_s: np.ndarray
    omega_p: np.ndarray
    abs_omega_a: np.ndarray
    metadata: dict = field(default_factory=dict)


def default_phase(params):
    """Correction phase that emulates the exact counterdiabatic coupling.

    ``+pi/2`` when the mixing angle grows over the protocol (Gaussian pair),
    ``-pi/2`` when it shrinks (exponential and trigonometric pairs as
    written, whose pump precedes the Stokes pulse).
    """
    return np.pi / 2 if mixing_rate(params, params.T / 2) >= 0 else -np.pi / 2


def resolve_initial_state(spec_state, params):
    if not isinstance(spec_state, str):
        psi = np.asarray(spec_state, dtype=complex)
        return psi / np.linalg.norm(psi)
    if spec_state == "auto":
        spec_state = ("minus1" if params.family is PulseFamily.GAUSSIAN
                      else "dark")
    if spec_state == "dark":
        return eigenframe(params, 0.0).dark.copy()
    return basis_state(_NAMED_STATES[spec_state])


def build_trajectory(protocol, params, correction=None):
    protocol = Protocol(protocol)
    if protocol is Protocol.STIRAP:
        return stirap_trajectory(params)
    if protocol is Protocol.SA_STIRAP:
        return total_trajectory(params, correction)
    return stirap_plus_exact_cd_trajectory(params)


def shifted_correction_trajectory(params, center, correction):
    """STIRAP for ``params`` plus corrections frozen at ``center``.

    The central correction envelope is evaluated at
    ``t - T/2 + T_c/2`` and is zero outside ``[0, T_c]``; the detuning
    phase runs on the laboratory time ``t``.
    """
    T, Tc = params.T, center.T

    def evaluate(t):
        t = np.asarray(t, dtype=float)
        tau = t - T / 2 + Tc / 2
        inside = (tau >= 0) & (tau <= Tc)
        fields = sample_correction(center, correction, np.clip(tau, 0, Tc))
        oa = np.where(inside, fields.omega_a, 0)
        ob = np.where(inside, fields.omega_b, 0)
        return h_stirap(params, t) + h_sa_from_fields(oa, ob, correction.delta, t)

    # zero-padding for T > T_c leaves small jumps at the window edges
    edges = tuple(b for b in (T / 2 - Tc / 2, T / 2 + Tc / 2) if 0 < b < T)
    return HamiltonianTrajectory(evaluate, TrajectoryLabel.TOTAL, T,
                                 abs(correction.delta),
                                 {"correction_center_T": Tc}, edges)


def _jsonable(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def spec_snapshot(spec):
    snap = _jsonable(asdict(spec))
    snap["adiabaticity_figure"] = adiabaticity_figure(spec.pulse)
    snap["adiabaticity_figure_kind"] = adiabaticity_kind(spec.pulse)
    snap["version"] = __version__
    return snap


def _trace(protocol, params, correction, initial, config):
    traj = build_trajectory(protocol, params, correction)
    psi0 = resolve_initial_state(initial, params)
    rec = propagate(traj, psi0, config)
    dark_end = eigenframe(params, params.T).dark
    meta = dict(rec.meta)
    meta.update(protocol=Protocol(protocol).value,
                max_intermediate=max_intermediate_population(rec),
                dark_state_transfer=float(abs(np.vdot(dark_end,
                                                      rec.final_state)) ** 2))
    return replace(rec, meta=meta)


def run_population_trace(spec):
    """Propagate the selected protocol over ``[0, T]``."""
    if spec.kind is not ScenarioKind.POPULATION_TRACE:
        raise ValueError(f"expected a trace scenario, got {spec.kind.value}")
    rec = _trace(spec.protocol, spec.pulse, spec.correction,
                 spec.initial_state, spec.propagation)
    rec.meta["config"] = spec_snapshot(spec)
    return rec


def _point(job):
    protocol, params, correction, center, initial, config = job
    if center is not None and Protocol(protocol) is Protocol.SA_STIRAP:
        traj = shifted_correction_trajectory(params, center, correction)
    else:
        traj = build_trajectory(protocol, params, correction)
    rec = propagate(traj, resolve_initial_state(initial, params), config)
    return rec.efficiency, max_intermediate_population(rec)


def _run_jobs(jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_point, jobs))
    return [_point(j) for j in jobs]


def run_efficiency_sweep(spec):
    """One propagation per (protocol, T); delta_t, sigma scale with T."""
    if spec.kind is not ScenarioKind.EFFICIENCY_VS_DURATION:
        raise ValueError(f"expected a sweep scenario, got {spec.kind.value}")
    sw = spec.sweep
    Ts = np.array(sw.T_values)

    def pulse_at(T):
        p = spec.pulse
        if p.family is PulseFamily.GAUSSIAN:
            return replace(p, T=T, sigma=sw.sigma_over_T * T,
                           delta_t=sw.delta_t_over_T * T)
        if p.family is PulseFamily.EXPONENTIAL:
            return replace(p, T=T, sigma=sw.sigma_over_T * T)
        return replace(p, T=T)

    jobs = [(proto, pulse_at(T), spec.correction, None, spec.initial_state,
             spec.propagation) for proto in sw.protocols for T in Ts]
    res = np.array(_run_jobs(jobs, spec.workers)).reshape(
        len(sw.protocols), len(Ts), 2)
    return SweepRecord(
        {"protocol": np.array([p.value for p in sw.protocols]), "T_us": Ts},
        res[..., 0], res[..., 1], {}, spec_snapshot(spec))


def run_robustness_grid(spec):
    """STIRAP vs. sa-STIRAP on the (sigma, delta_t) grid, ``T = 6 sigma + 2 delta_t``."""
    if spec.kind is not ScenarioKind.ROBUSTNESS_GRID:
        raise ValueError(f"expected a grid scenario, got {spec.kind.value}")
    sw = spec.sweep
    center = sw.center_pulse(spec.pulse.omega0)
    sig = np.array(sw.sigma_values)
    ratio = np.array(sw.delta_t_ratios)
    dts = sig[:, None] * ratio[None, :]
    Ts = 6 * sig[:, None] + 2 * dts
    jobs = []
    for proto in sw.protocols:
        for i, s in enumerate(sig):
            for j in range(len(ratio)):
                p = PulseParams(PulseFamily.GAUSSIAN, spec.pulse.omega0,
                                Ts[i, j], sigma=s, delta_t=dts[i, j])
                jobs.append((proto, p, spec.correction, center,
                             spec.initial_state, spec.propagation))
    res = np.array(_run_jobs(jobs, spec.workers)).reshape(
        len(sw.protocols), len(sig), len(ratio), 2)
    meta = spec_snapshot(spec)
    meta["correction_center_T_us"] = center.T
    return SweepRecord(
        {"protocol": np.array([p.value for p in sw.protocols]),
         "sigma_us": sig, "delta_t_over_sigma": ratio},
        res[..., 0], res[..., 1], {"delta_t_us": dts, "T_us": Ts}, meta)


def run_pulse_preview(spec):
    if spec.kind is not ScenarioKind.PULSE_PREVIEW:
        raise ValueError(f"expected a pulses scenario, got {spec.kind.value}")
    t = np.linspace(0, spec.pulse.T, spec.preview_points)
    env = sample_envelope(spec.pulse, t)
    corr = sample_correction(spec.pulse, spec.correction, t)
    return PreviewTable(t, env.omega_s, env.omega_p, np.abs(corr.omega_a),
                        spec_snapshot(spec))


def run_scenario(spec):
    return {
        ScenarioKind.POPULATION_TRACE: run_population_trace,
        ScenarioKind.EFFICIENCY_VS_DURATION: run_efficiency_sweep,
        ScenarioKind.ROBUSTNESS_GRID: run_robustness_grid,
        ScenarioKind.PULSE_PREVIEW: run_pulse_preview,
    }[spec.kind](spec)
