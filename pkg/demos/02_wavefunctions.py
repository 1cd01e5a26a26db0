# Radial functions in their three closed forms, plus normalization.
# Run:  python demos/02_wavefunctions.py
import numpy as np

from sae_oscillator import PhysicalParams, SpectralProblem, derive, solve_spectrum
from sae_oscillator.wavefn import (
    GENERAL_FORM_KAPPA, build, eval_general, eval_unified, eval_whittaker,
    norm_integral, normalization_constant, normalized, sample)

d = derive(PhysicalParams.from_index(0.25))  # omega = 1, kappa = r^2
problem = SpectralProblem(d, -1.0)
level = solve_spectrum(problem, 3)[1]
w = build(problem, level)
print("E =", level.energy, " n_eff =", w.n_eff)

# Closed-form C^2 against adaptive quadrature
c2 = normalization_constant(w)
print("C^2 =", c2, "  C^2 * integral(R^2 r^2) =", c2 * norm_integral(w))

w = normalized(w)
r = np.linspace(0.05, 2.5, 8)
table = np.column_stack([r, sample(eval_general, w, r), sample(eval_unified, w, r),
                         sample(eval_whittaker, w, r)])
np.set_printoptions(precision=12, suppress=False, linewidth=120)
print("\n   r            two-Kummer         Tricomi            Whittaker")
print(table)

# The two-Kummer form is a difference of two terms growing like e^kappa:
# fine at small kappa, useless in the tail. The single-function forms are not.
for kappa in (5.0, GENERAL_FORM_KAPPA, 20.0, 30.0):
    rr = np.sqrt(kappa / d.kappa_scale)
    g, u = eval_general(w, rr), eval_unified(w, rr)
    print(f"kappa={kappa:5.1f}  rel. gap {abs(g - u) / abs(u):.1e}")

# Small r: R ~ a_st r^(-1/2+P) + a_add r^(-1/2-P), and r R -> 0 in every case
r = np.geomspace(1e-10, 1e-2, 5)
print("\nr R near the origin:", r * sample(eval_whittaker, w, r))

# The n_r-th state has n_r nodes
for lev in solve_spectrum(problem, 4):
    ww = normalized(build(problem, lev))
    rr = np.geomspace(1e-6, 7.0, 4000)
    R = sample(eval_unified, ww, rr)
    print(f"n_r={lev.n_r}: sign changes = {np.count_nonzero(np.diff(np.sign(R)))}")
