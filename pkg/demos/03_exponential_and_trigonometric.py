"""
The exponential and trigonometric pulse pairs start with the pump on, so
the mixing angle falls from pi/2 to 0 and the dark state carries |+1>
into |-1>. Following that direction needs the opposite sign of the
correction phase; default_phase picks it from the sign of d(theta)/dt.
Transfer is scored as overlap with the final dark state.
"""
#%%
import numpy as np

from sastirap import MHZ, CorrectionParams, PulseParams, ScenarioSpec, run_scenario
from sastirap.experiments import default_phase

cases = {
    "exponential": (PulseParams("exponential", 1.2 * MHZ, 2.0, sigma=2.0 / 15), 3 * MHZ),
    "trigonometric": (PulseParams("trigonometric", 0.5 * MHZ, 2.0), 20 * MHZ),
}

#%%
for name, (pulse, delta) in cases.items():
    phase = default_phase(pulse)
    print(f"{name}: correction phase {np.degrees(phase):+.0f} deg")
    for label, protocol, ph in [("stirap", "stirap", phase),
                                ("sa, matched phase", "sa", phase),
                                ("sa, flipped phase", "sa", -phase)]:
        rec = run_scenario(ScenarioSpec("trace", pulse, CorrectionParams(delta, ph),
                                        protocol))
        print(f"   {label:18}  dark-state transfer {rec.meta['dark_state_transfer']:.4f}"
              f"   max P(0) {rec.meta['max_intermediate']:.4f}")
