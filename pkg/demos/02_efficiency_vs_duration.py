"""
Transfer efficiency against total duration T, with delta_t = T/10 and
sigma = T/6 scaled along. Takes about ten seconds on one core; pass
a worker count to spread the 48 propagations:  python3 demos/02_efficiency_vs_duration.py 4
"""
#%%
import sys
from pathlib import Path

import numpy as np

from sastirap import MHZ, CorrectionParams, ScenarioSpec, gaussian_reference, run_scenario
from sastirap.output import render_svg

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 1
spec = ScenarioSpec("sweep", gaussian_reference(2.0), CorrectionParams(3 * MHZ),
                    workers=workers)
rec = run_scenario(spec)

#%%
st, sa = rec.efficiency("stirap"), rec.efficiency("sa")
print("  T (us)   stirap      sa")
for T, a, b in zip(rec.axes["T_us"], st, sa):
    print(f"  {T:6.3f}   {a:.4f}   {b:.4f}")
print(f"smallest margin sa - stirap: {np.min(sa - st):+.4f}")

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
(out / "efficiency_vs_T.svg").write_text(render_svg(rec))
