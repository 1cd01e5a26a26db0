# Levels of the singular oscillator  V = -V0/r^2 + g r^2  in units where hbar = 1.
# Run:  python demos/01_spectrum_tour.py
import math

import numpy as np

from sae_oscillator import PhysicalParams, SpectralProblem, derive, solve_spectrum
from sae_oscillator.spectrum import eigenvalue_rhs, f_p, tau_lower_bound

# m = 1/2, g = 1 gives omega = 1, so energies below are already in units of omega
params = PhysicalParams(m=0.5, V0=0.09, g=1.0, l=0)
d = derive(params)
print("P =", d.P, " omega =", d.omega, " regime:", d.regime.value)

# 0 < P < 1/2: both r^(-1/2+P) and r^(-1/2-P) are square integrable at the origin,
# and tau fixes their ratio. tau = 0 and tau = inf are the two equidistant ladders.
for tau in (0.0, "inf"):
    E = [lev.energy for lev in solve_spectrum(SpectralProblem(d, tau), 5)]
    print(f"tau = {tau!s:>4}:", np.round(E, 12), " spacings", np.diff(E))

# Any other tau: roots of f_P(E) = -tau Gamma(1-P)/Gamma(1+P).
problem = SpectralProblem(d, -1.0)
levels = solve_spectrum(problem, 5)
E = np.array([lev.energy for lev in levels])
print("\ntau = -1:", E)
print("spacings :", np.diff(E))  # no longer 4 omega
rhs = eigenvalue_rhs(-1.0, d)
print("residuals:", [f_p(e, d) - rhs for e in E])

# Each root sits between two additional levels, except the lowest one which may go negative
for lev in levels:
    lo, hi = lev.bracket
    print(f"  n_r={lev.n_r}  E={lev.energy: .10f}  bracket=({lo:.4g}, {hi:.4g})")

# The lowest level is negative only for tau_lower_bound < tau < 0
lb = tau_lower_bound(d)
print("\ntau bound:", lb)
for tau in (0.5 * lb, 0.99 * lb, 1.01 * lb, 2 * lb):
    E0 = solve_spectrum(SpectralProblem(d, tau), 1, search_floor=-math.inf)[0].energy
    print(f"  tau = {tau: .5f}  E0 = {E0: .6f}")

# As tau -> 0- the extra level dives like (-tau)^(-1/P) while the rest approach the tau = 0 ladder
for tau in (-1e-2, -1e-4, -1e-6):
    E = [lev.energy for lev in solve_spectrum(SpectralProblem(d, tau), 3, search_floor=-math.inf)]
    print(f"  tau = {tau:g}: {E}")
