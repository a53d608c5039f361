"""
Robustness over (sigma, delta_t) with T = 6 sigma + 2 delta_t. The
correction is computed once for sigma = delta_t = 0.6 us and laid onto
every run, centered at its T/2. Runs 162 propagations (about half a
minute on one core).  python3 demos/04_robustness_grid.py [workers]
"""
#%%
import sys
from pathlib import Path

import numpy as np

from sastirap import MHZ, CorrectionParams, ScenarioSpec, gaussian_reference, run_scenario
from sastirap.output import render_svg

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 1
rec = run_scenario(ScenarioSpec("grid", gaussian_reference(2.0),
                                CorrectionParams(3 * MHZ), workers=workers))

#%% '#' marks efficiency >= 0.9; rows are sigma, columns delta_t / sigma
ratios = rec.axes["delta_t_over_sigma"]
for proto in ("stirap", "sa"):
    eff = rec.efficiency(proto)
    print(f"{proto}: {np.sum(eff >= 0.9)} cells >= 0.9")
    print("  sigma  " + " ".join(f"{r:4.2f}" for r in ratios))
    for s, row in zip(rec.axes["sigma_us"], eff):
        print(f"  {s:4.2f}   " + " ".join("   #" if e >= 0.9 else f"{e:4.2f}"[1:].rjust(4)
                                       for e in row))

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)
(out / "robustness_grid.svg").write_text(render_svg(rec))
