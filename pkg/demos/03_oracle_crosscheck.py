# Independent check: integrate the radial equation numerically and compare.
# Run:  python demos/03_oracle_crosscheck.py
import numpy as np

from sae_oscillator import PhysicalParams, SpectralProblem, derive, solve_spectrum
from sae_oscillator.oracle import (
    default_grid, oracle_state, orthogonality_defect, orthogonality_relation, shoot_eigenvalue)

d = derive(PhysicalParams.from_index(0.4))

# The Numerov shooter only knows the potential and the small-r coefficient ratio tau;
# it never sees the Gamma-function equation.
for tau in (0.0, -0.3, -3.0, "inf"):
    problem = SpectralProblem(d, tau)
    for lev in solve_spectrum(problem, 3):
        E_num = shoot_eigenvalue(problem, lev.bracket)
        print(f"tau={tau!s:>5} n_r={lev.n_r}  Gamma eq. {lev.energy: .12f}  Numerov {E_num: .12f}"
              f"  rel {abs(E_num - lev.energy) / abs(lev.energy):.1e}")

# Same tau: the states are orthogonal
problem = SpectralProblem(d, -1.0)
G = orthogonality_defect(problem, solve_spectrum(problem, 4))
np.set_printoptions(precision=3, linewidth=120)
print("\nGram matrix, tau = -1\n", G)

# Different tau: they are not, and the overlap is fixed by the small-r coefficients alone,
#   m (E1 - E2) <R1, R2> = P (a1_st a2_add - a2_st a1_add)
pa, pb = SpectralProblem(d, 0.0), SpectralProblem(d, -1.0)
ea, eb = solve_spectrum(pa, 1)[0].energy, solve_spectrum(pb, 2)[1].energy
grid = default_grid(pa, min(ea, eb), max(ea, eb), n_steps=40_000)
lhs, rhs = orthogonality_relation(oracle_state(pa, ea, grid), oracle_state(pb, eb, grid))
print(f"\ncross-tau overlap: lhs {lhs:.12f}  rhs {rhs:.12f}")
