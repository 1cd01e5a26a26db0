"""
Bound states of the singular oscillator V(r) = -V0/r^2 + g r^2.

When 0 < P < 1/2, with P = sqrt((l+1/2)^2 - 2 m V0), both small-r solutions
are square integrable and the radial Hamiltonian needs a boundary condition
at the origin, labelled by a real extension parameter tau (or tau = inf).
This package solves the resulting spectrum for any tau, evaluates the
eigenfunctions and checks both against direct numerical integration.

Modules
-------
special   gamma-type and confluent hypergeometric functions
model     parameters, regimes and the extension parameter
spectrum  eigenvalue equation, closed forms, census, perturbation theory
wavefn    eigenfunctions in three equivalent forms and their normalization
oracle    Numerov shooting and quadrature used as an independent check
checks    the acceptance checks
cli       ``sae-oscillator`` command line
"""

from .errors import (
    DegenerateBranch,
    DomainError,
    FallToCenterError,
    GridMismatch,
    InfiniteTau,
    NoSignChange,
    ParameterPole,
    PhysicalityWarning,
    PoleError,
    RegimeError,
    SaeError,
    SolverError,
    StepError,
)
from .model import (
    TAU_INFINITY,
    DerivedParams,
    ExtensionParameter,
    PhysicalParams,
    Regime,
    additional_to_standard_ratio,
    classify,
    derive,
)
from .spectrum import (
    Branch,
    EnergyLevel,
    SpectralProblem,
    count_negative_levels,
    f_p,
    negative_level_exists,
    perturbative_level,
    solve_spectrum,
    tau_lower_bound,
)
from .wavefn import RadialWavefunction, build, normalized

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "DegenerateBranch",
    "DerivedParams",
    "DomainError",
    "EnergyLevel",
    "ExtensionParameter",
    "FallToCenterError",
    "GridMismatch",
    "InfiniteTau",
    "NoSignChange",
    "ParameterPole",
    "PhysicalParams",
    "PhysicalityWarning",
    "PoleError",
    "RadialWavefunction",
    "Regime",
    "RegimeError",
    "SaeError",
    "SolverError",
    "SpectralProblem",
    "StepError",
    "TAU_INFINITY",
    "additional_to_standard_ratio",
    "build",
    "classify",
    "count_negative_levels",
    "derive",
    "f_p",
    "negative_level_exists",
    "normalized",
    "perturbative_level",
    "solve_spectrum",
    "tau_lower_bound",
]
