"""Simulation of STIRAP and two-photon superadiabatic STIRAP in a
three-level V system."""

__version__ = "0.1.0"

from .pulses import (CorrectionParams, PulseFamily, PulseParams,
                     gaussian_reference, omega_d, sample_correction,
                     sample_envelope)
from .propagator import PropagationConfig, propagate
from .experiments import Protocol, ScenarioKind, ScenarioSpec, run_scenario

MHZ = 2 * 3.141592653589793
"""Multiply a value quoted as Omega/2pi in MHz by this to get rad/us."""
