"""
Bound-state spectrum of the singular oscillator for any extension parameter.

Eigenvalues solve

    f_P(E) = -tau * Gamma(1-P) / Gamma(1+P),
    f_P(E) = Gamma(-E/4w + 1/2 - P/2) / Gamma(-E/4w + 1/2 + P/2),

with w = sqrt(g/2m). f_P vanishes on the standard levels 2w(2n+1+P), blows up
on the additional levels 2w(2n+1-P), and increases monotonically between
consecutive additional levels. That interlacing gives one root per bracket
and lets a plain bracketed solver find every level.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    InfiniteTau,
    NoSignChange,
    PhysicalityWarning,
    PoleError,
    RegimeError,
    SolverError,
)
from .model import DerivedParams, ExtensionParameter, PhysicalParams, Regime, as_tau, derive
from .special import gamma, lgamma_signed, log_gamma_ratio, rgamma

__all__ = [
    "Branch",
    "SpectralProblem",
    "EnergyLevel",
    "PerturbedLevel",
    "DEFAULT_SEARCH_FLOOR",
    "f_p",
    "eigenvalue_rhs",
    "standard_energy",
    "additional_energy",
    "closed_form_level",
    "solve_spectrum",
    "negative_level_exists",
    "count_negative_levels",
    "tau_lower_bound",
    "perturbative_level",
    "equidistance_ratio",
]

DEFAULT_SEARCH_FLOOR = -1e6  # in units of omega
_POLE_GUARD = 1e-10  # in units of omega
_MAXITER = 200


class Branch(enum.Enum):
    STANDARD = "Standard"
    ADDITIONAL = "Additional"
    GENERIC_TAU = "GenericTau"


@dataclass(frozen=True)
class SpectralProblem:
    """Derived parameters plus the extension parameter tau (coerced on construction)."""

    derived: DerivedParams
    tau: ExtensionParameter = field(default_factory=lambda: ExtensionParameter(0.0))

    def __post_init__(self):
        tau = as_tau(self.tau)
        object.__setattr__(self, "tau", tau)
        if self.derived.regime is not Regime.SAE_REQUIRED and not tau.is_zero:
            raise RegimeError(
                f"regime {self.derived.regime.value}: only the standard branch (tau = 0) exists")

    @classmethod
    def from_params(cls, params: PhysicalParams, tau=0.0) -> "SpectralProblem":
        return cls(derive(params), as_tau(tau))

    @property
    def unphysical(self) -> bool:
        """tau > 0: no negative level, excluded on physical grounds."""
        return not self.tau.is_infinite and self.tau.value > 0.0


@dataclass(frozen=True)
class EnergyLevel:
    n_r: int
    energy: float
    branch: Branch
    bracket: tuple[float, float] = (math.nan, math.nan)


@dataclass(frozen=True)
class PerturbedLevel:
    n_r: int
    energy: float
    nu: float


# ---------------------------------------------------------------------------
# f_P and the right-hand side
# ---------------------------------------------------------------------------

def _gamma_args(E: float, derived: DerivedParams) -> tuple[float, float]:
    q = E / (4.0 * derived.omega)
    z_num = 0.5 - 0.5 * derived.P - q
    return z_num, z_num + derived.P


def _near_nonpositive_integer(z: float, tol: float) -> bool:
    return z <= tol and abs(z - round(z)) <= tol


def _log_f(E: float, derived: DerivedParams) -> tuple[float, int]:
    """(log|f_P(E)|, sign f_P(E)); the caller has excluded both pole sets."""
    z_num, z_den = _gamma_args(E, derived)
    if z_num > 200.0:
        return -log_gamma_ratio(z_num, derived.P), 1
    ln, ld = lgamma_signed(z_num), lgamma_signed(z_den)
    return ln.log_abs - ld.log_abs, ln.sign * ld.sign


def f_p(E: float, derived: DerivedParams) -> float:
    """Spectral function f_P(E), evaluated through log-gammas.

    Raises
    ------
    PoleError
        Within 1e-10 omega of an additional level 2w(2n+1-P).
    """
    z_num, z_den = _gamma_args(E, derived)
    if _near_nonpositive_integer(z_num, _POLE_GUARD / 4.0):
        raise PoleError(f"f_P has a pole at E={E!r} (additional level)")
    if _near_nonpositive_integer(z_den, 1e-12):
        return 0.0
    log_abs, sign = _log_f(E, derived)
    return sign * math.exp(log_abs)


def eigenvalue_rhs(tau, derived: DerivedParams) -> float:
    """-tau Gamma(1-P)/Gamma(1+P)."""
    tau = as_tau(tau)
    if tau.is_infinite:
        raise InfiniteTau("the right-hand side is infinite at tau = inf; use the closed form")
    if tau.is_zero:
        return 0.0
    P = derived.P
    return -tau.value * gamma(1.0 - P) / gamma(1.0 + P)


def _residual(E: float, derived: DerivedParams, rhs: float) -> float:
    """Bounded function with the sign of rgamma(z_num) * (f_P(E) - rhs).

    rgamma(z_den) - rhs * rgamma(z_num) has no poles, vanishes exactly at
    the eigenvalues and has one sign change per bracket; dividing by the sum
    of magnitudes keeps it in [-1, 1].
    """
    z_num, z_den = _gamma_args(E, derived)
    if z_num > 150.0:
        # both reciprocals underflow; work with log f directly (f > 0 here)
        if rhs <= 0.0:
            return 1.0
        log_rho = -log_gamma_ratio(z_num, derived.P) - math.log(rhs)
        # sign(B) = +1, rho = f/rhs > 0
        return math.tanh(0.5 * log_rho)
    a = rgamma(z_den)
    b = rhs * rgamma(z_num)
    denom = abs(a) + abs(b)
    if denom == 0.0:
        return 0.0
    return (a - b) / denom


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def standard_energy(derived: DerivedParams, n_r: int) -> float:
    return 2.0 * derived.omega * (2 * n_r + 1 + derived.P)


def additional_energy(derived: DerivedParams, n_r: int) -> float:
    return 2.0 * derived.omega * (2 * n_r + 1 - derived.P)


def closed_form_level(derived: DerivedParams, branch: Branch, n_r: int) -> EnergyLevel:
    """Level n_r of the pure standard or pure additional branch, E = 2w(2n_r + 1 +/- P)."""
    if n_r < 0:
        raise DomainError("n_r must be non-negative")
    w = derived.omega
    sae = derived.regime is Regime.SAE_REQUIRED
    if branch is Branch.STANDARD:
        E = standard_energy(derived, n_r)
        if sae:
            bracket = (additional_energy(derived, n_r), additional_energy(derived, n_r + 1))
        else:
            bracket = (E - 2.0 * w, E + 2.0 * w)
    elif branch is Branch.ADDITIONAL:
        if not sae:
            raise RegimeError("additional levels exist only for 0 < P < 1/2")
        E = additional_energy(derived, n_r)
        lo = standard_energy(derived, n_r - 1) if n_r > 0 else E - 2.0 * w
        bracket = (lo, standard_energy(derived, n_r))
    else:
        raise DomainError("closed forms exist only for the standard and additional branches")
    return EnergyLevel(n_r=n_r, energy=E, branch=branch, bracket=bracket)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

def _bracketed_root(fun, lo: float, hi: float, flo: float, fhi: float,
                    xtol: float, maxiter: int = _MAXITER) -> float:
    """Illinois false position with a bisection fallback.

    A bisection step is forced whenever two consecutive steps fail to halve
    the bracket, so the worst case is plain bisection.
    """
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoSignChange(f"no sign change on [{lo!r}, {hi!r}]")
    side = 0
    width_before = hi - lo
    for it in range(maxiter):
        width = hi - lo
        if width <= xtol:
            break
        if it % 2 == 0:
            if width > 0.5 * width_before and it > 0:
                x = 0.5 * (lo + hi)
            else:
                x = hi - fhi * (hi - lo) / (fhi - flo)
                if not (lo < x < hi):
                    x = 0.5 * (lo + hi)
            width_before = width
        else:
            x = hi - fhi * (hi - lo) / (fhi - flo)
            if not (lo < x < hi):
                x = 0.5 * (lo + hi)
        fx = fun(x)
        if fx == 0.0:
            return x
        if (fx > 0.0) == (flo > 0.0):
            lo, flo = x, fx
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = x, fx
            if side == 1:
                flo *= 0.5
            side = 1
    else:
        if hi - lo > 1e3 * xtol:
            raise SolverError(f"root not converged on [{lo!r}, {hi!r}] after {maxiter} iterations")
    return lo if abs(flo) < abs(fhi) else hi


def _endpoint_residual(E: float, derived: DerivedParams, rhs: float) -> float:
    """Residual at a bracket end; on an additional level it is the exact limit sign(rgamma(z_den)).

    Evaluating there directly leaves rhs * rgamma(rounding error), which for
    huge |tau| can carry the wrong sign.
    """
    z_num, z_den = _gamma_args(E, derived)
    if _near_nonpositive_integer(z_num, 1e-9):
        return math.copysign(1.0, rgamma(z_den))
    return _residual(E, derived, rhs)


def _solve_in(derived: DerivedParams, rhs: float, lo: float, hi: float) -> float:
    fun = lambda E: _residual(E, derived, rhs)  # noqa: E731
    xtol = 4.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi), derived.omega)
    return _bracketed_root(fun, lo, hi, _endpoint_residual(lo, derived, rhs),
                           _endpoint_residual(hi, derived, rhs), xtol)


def _lowest_bracket(derived: DerivedParams, rhs: float, search_floor: float) -> tuple[float, float]:
    """Bracket below the first additional level: expand E_left = -w 2^k downward."""
    w = derived.omega
    hi = additional_energy(derived, 0)
    e_left = min(0.0, hi - w)
    k = 0
    prev = hi
    while True:
        if _residual(e_left, derived, rhs) < 0.0:
            return e_left, prev
        if e_left < search_floor or k > 1000:
            raise SolverError(
                f"lowest level lies below search_floor={search_floor!r} (tau too close to 0-)")
        prev = e_left
        e_left = -w * math.ldexp(1.0, k)
        if math.isinf(e_left):
            raise SolverError("lowest level lies beyond the floating-point range (tau too close to 0-)")
        k += 1


def solve_spectrum(problem: SpectralProblem, count: int,
                   search_floor: float | None = None) -> list[EnergyLevel]:
    """Lowest ``count`` eigenvalues, strictly increasing.

    Parameters
    ----------
    problem : SpectralProblem
    count : int
        Number of levels to return.
    search_floor : float, optional
        Lowest energy the negative-level search may reach; defaults to
        ``-1e6 * omega``. Pass ``-math.inf`` to search without bound.

    Notes
    -----
    tau = 0 and tau = inf return the closed forms. tau > 0 is solved but a
    :class:`PhysicalityWarning` is emitted.
    """
    if count < 0:
        raise DomainError("count must be non-negative")
    derived, tau = problem.derived, problem.tau
    if count == 0:
        return []
    if tau.is_zero:
        return [closed_form_level(derived, Branch.STANDARD, n) for n in range(count)]
    if tau.is_infinite:
        return [closed_form_level(derived, Branch.ADDITIONAL, n) for n in range(count)]
    if problem.unphysical:
        warnings.warn(f"tau = {tau.value!r} > 0 has no negative level and is excluded on "
                      "physical grounds", PhysicalityWarning, stacklevel=2)
    if search_floor is None:
        search_floor = DEFAULT_SEARCH_FLOOR * derived.omega
    rhs = eigenvalue_rhs(tau, derived)
    brackets = []
    if rhs > 0.0:
        brackets.append(_lowest_bracket(derived, rhs, search_floor))
    j = 0
    while len(brackets) < count:
        brackets.append((additional_energy(derived, j), additional_energy(derived, j + 1)))
        j += 1
    levels = []
    for n, (lo, hi) in enumerate(brackets[:count]):
        E = _solve_in(derived, rhs, lo, hi)
        levels.append(EnergyLevel(n_r=n, energy=E, branch=Branch.GENERIC_TAU, bracket=(lo, hi)))
    return levels


# ---------------------------------------------------------------------------
# negative level census
# ---------------------------------------------------------------------------

def tau_lower_bound(derived: DerivedParams) -> float:
    """Most negative tau that still gives a negative level.

    Equality f_P(0) = -tau Gamma(1-P)/Gamma(1+P) puts the lowest root at E = 0:

        tau_min = -Gamma(1/2 - P/2) Gamma(1+P) / (Gamma(1/2 + P/2) Gamma(1-P))
    """
    if derived.regime is not Regime.SAE_REQUIRED:
        raise RegimeError("the tau bound is defined only for 0 < P < 1/2")
    P = derived.P
    return -(gamma(0.5 - 0.5 * P) * gamma(1.0 + P)) / (gamma(0.5 + 0.5 * P) * gamma(1.0 - P))


def negative_level_exists(problem: SpectralProblem) -> bool:
    """True iff f_P(0) > -tau Gamma(1-P)/Gamma(1+P) (strict), for tau < 0."""
    derived, tau = problem.derived, problem.tau
    if derived.regime is not Regime.SAE_REQUIRED:
        raise RegimeError("requires 0 < P < 1/2")
    if tau.is_infinite or tau.value >= 0.0:
        raise DomainError("defined for finite tau < 0 only; tau >= 0 and tau = inf "
                          "have no negative level")
    return f_p(0.0, derived) > eigenvalue_rhs(tau, derived)


def count_negative_levels(problem: SpectralProblem, search_floor: float = -math.inf) -> int:
    """Number of eigenvalues below zero, found by actually solving."""
    tau = problem.tau
    if tau.is_zero or tau.is_infinite:
        return 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PhysicalityWarning)
        levels = solve_spectrum(problem, 2, search_floor=search_floor)
    return sum(1 for lev in levels if lev.energy < 0.0)


# ---------------------------------------------------------------------------
# perturbative levels and equidistance
# ---------------------------------------------------------------------------

def perturbative_level(problem: SpectralProblem, n_r: int, side: str = "auto") -> PerturbedLevel:
    """Level n_r to first order in tau (near tau = 0) or in 1/tau (near tau = inf).

    Expanding Gamma(-n_r + d) ~ (-1)^n_r / (n_r! d) in the eigenvalue equation:

        E  = 2w [2(n_r - nu) + P + 1]
        nu = -(-1)^n_r / n_r! * Gamma(1-P) / (Gamma(1+P) Gamma(-n_r-P)) * tau

    and the mirror image P -> -P, tau -> 1/tau near the additional levels.
    ``side`` is ``"standard"``, ``"additional"`` or ``"auto"`` (|tau| <= 1
    picks the standard side).

    Raises
    ------
    DomainError
        If |nu| >= 0.1, where the first-order formula is not trustworthy.
    """
    if n_r < 0:
        raise DomainError("n_r must be non-negative")
    derived, tau = problem.derived, problem.tau
    P, w = derived.P, derived.omega
    if side == "auto":
        side = "additional" if tau.is_infinite or abs(tau.value) > 1.0 else "standard"
    if side == "standard":
        if tau.is_infinite:
            raise DomainError("tau = inf is not near the standard branch")
        sgn_p, small = P, tau.value
    elif side == "additional":
        if derived.regime is not Regime.SAE_REQUIRED:
            raise RegimeError("additional levels exist only for 0 < P < 1/2")
        sgn_p, small = -P, (0.0 if tau.is_infinite else 1.0 / tau.value)
    else:
        raise ValueError(f"unknown side {side!r}")
    if small == 0.0:
        nu = 0.0
    else:
        nu = (-((-1) ** n_r) / math.factorial(n_r)
              * gamma(1.0 - sgn_p) / (gamma(1.0 + sgn_p) * gamma(-n_r - sgn_p)) * small)
    if abs(nu) >= 0.1:
        raise DomainError(f"|nu| = {abs(nu):.3g} >= 0.1: first-order expansion not valid")
    E = 2.0 * w * (2.0 * (n_r - nu) + sgn_p + 1.0)
    return PerturbedLevel(n_r=n_r, energy=E, nu=nu)


def equidistance_ratio(E: float, derived: DerivedParams) -> float:
    """f_P(E + 4w) / f_P(E) in closed form: (-q + P/2 - 1/2) / (-q - P/2 - 1/2), q = E/4w."""
    w, P = derived.omega, derived.P
    for e in (E, E + 4.0 * w):
        z_num, z_den = _gamma_args(e, derived)
        if _near_nonpositive_integer(z_num, _POLE_GUARD / 4.0) or \
                _near_nonpositive_integer(z_den, _POLE_GUARD / 4.0):
            raise PoleError(f"E={E!r}: f_P(E) or f_P(E+4w) sits on a zero or pole")
    q = E / (4.0 * w)
    return (-q + 0.5 * P - 0.5) / (-q - 0.5 * P - 0.5)
