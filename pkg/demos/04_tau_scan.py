# E(tau) traces across the whole extension family, written as plot-ready CSV.
# Run:  python demos/04_tau_scan.py [outdir]
import math
import os
import sys
import warnings

import numpy as np

from sae_oscillator import PhysicalParams, SpectralProblem, derive, solve_spectrum
from sae_oscillator.errors import PhysicalityWarning
from sae_oscillator.spectrum import negative_level_exists, tau_lower_bound

out = sys.argv[1] if len(sys.argv) > 1 else None
d = derive(PhysicalParams.from_index(0.3))
lb = tau_lower_bound(d)

# tau = -cot(theta) sweeps the real line once; theta -> 0 and theta -> pi both meet tau = inf
theta = np.linspace(0.02, math.pi - 0.02, 120)  # even count skips tau = 0 itself
taus = -1.0 / np.tan(theta)
rows = []
with warnings.catch_warnings():
    warnings.simplefilter("ignore", PhysicalityWarning)  # tau > 0 is allowed here, just flagged
    for t in taus:
        E = [lev.energy for lev in solve_spectrum(SpectralProblem(d, t), 4, search_floor=-math.inf)]
        rows.append([t] + E)
rows = np.array(rows)

print(f"tau bound {lb:.6f}; negative ground level for tau in ({lb:.4f}, 0)")
for t, e0 in rows[::10, :2]:
    predicted = t < 0 and negative_level_exists(SpectralProblem(d, t))
    print(f"tau={t: 9.3f}  E0={e0: 14.6g}  negative={e0 < 0}  predicted={predicted}")

if out:
    os.makedirs(out, exist_ok=True)
    np.savetxt(os.path.join(out, "tau_scan.csv"), rows, delimiter=",",
               header="tau,E0,E1,E2,E3", comments="", fmt="%.16e")
    print("wrote", os.path.join(out, "tau_scan.csv"))
