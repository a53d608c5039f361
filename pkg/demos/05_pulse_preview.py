"""
Pulse envelopes and correction amplitude for the three families, without
any propagation. The Gaussian correction peaks at T/2.
"""
#%%
from pathlib import Path

from sastirap import MHZ, CorrectionParams, PulseParams, ScenarioSpec, gaussian_reference, run_scenario
from sastirap.experiments import default_phase
from sastirap.output import render_svg

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

pulses = {
    "gaussian": (gaussian_reference(2.0), 3 * MHZ),
    "exponential": (PulseParams("exponential", 1.2 * MHZ, 2.0, sigma=2.0 / 15), 3 * MHZ),
    "trigonometric": (PulseParams("trigonometric", 0.5 * MHZ, 2.0), 20 * MHZ),
}
for name, (pulse, delta) in pulses.items():
    corr = CorrectionParams(delta, default_phase(pulse))
    tab = run_scenario(ScenarioSpec("pulses", pulse, corr))
    k = tab.abs_omega_a.argmax()
    print(f"{name:14} peak |Omega_a|/2pi = {tab.abs_omega_a[k] / MHZ:.4f} MHz "
          f"at t = {tab.t[k]:.3f} us")
    (out / f"pulses_{name}.svg").write_text(render_svg(tab))
