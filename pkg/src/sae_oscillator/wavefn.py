"""
Radial wavefunctions of the singular oscillator.

With kappa = sqrt(2mg) r^2 and n = E/(4w) - (1+P)/2 the general solution is

    u(r) = r R(r) = k^(-1/2) e^(-kappa/2) [ C kappa^((1/2+P)/2) M(-n, 1+P, kappa)
                                          + D kappa^((1/2-P)/2) M(-n-P, 1-P, kappa) ]

(k = sqrt(2mg)), so that tau = D/C is the coefficient ratio in the kappa
variable and R ~ a_st r^(-1/2+P) + a_add r^(-1/2-P) near the origin. On an
eigenvalue the two Kummer functions combine into a single Tricomi function,
equivalently a single Whittaker function W_{n+(1+P)/2, P/2}(kappa). The three
forms are exposed separately so they can be checked against each other.

All evaluators return R(r); multiply by r for the reduced function u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .errors import DegenerateBranch, DomainError
from .model import DerivedParams, ExtensionParameter, Regime
from .spectrum import EnergyLevel, SpectralProblem
from .special import digamma, gamma, kummer_m, lgamma_signed, sinpi, tricomi_u, whittaker_w

__all__ = [
    "RadialWavefunction",
    "UNDERFLOW_KAPPA",
    "R_MAX_KAPPA",
    "GENERAL_FORM_KAPPA",
    "DEEP_LEVEL_LIMIT",
    "build",
    "eval_general",
    "general_form_valid",
    "eval_unified",
    "eval_whittaker",
    "eval_standard",
    "eval_additional",
    "normalization_constant",
    "norm_integral",
    "normalized",
    "r_max",
    "sample",
]

UNDERFLOW_KAPPA = 1400.0
R_MAX_KAPPA = 50.0
# largest kappa at which the two-Kummer form keeps ~1e-8 relative accuracy
# on generic-tau eigenstates
GENERAL_FORM_KAPPA = 10.0
# single-Tricomi forms need Gamma(-n - P); it overflows for deeper levels
DEEP_LEVEL_LIMIT = 150.0


@dataclass(frozen=True)
class RadialWavefunction:
    """Coefficients and indices of one eigenfunction.

    For tau = inf the standard slot ``c_coeff`` is zero and ``d_coeff``
    carries the amplitude.
    """

    derived: DerivedParams
    tau: ExtensionParameter
    energy: float
    n_eff: float
    c_coeff: float
    d_coeff: float

    @property
    def kummer_a(self) -> float:
        return -self.n_eff

    @property
    def kummer_b_plus(self) -> float:
        return 1.0 + self.derived.P

    @property
    def kummer_b_minus(self) -> float:
        return 1.0 - self.derived.P


def build(problem: SpectralProblem, level: EnergyLevel, c_coeff: float = 1.0) -> RadialWavefunction:
    """Attach coefficients to an eigenvalue: D = tau C (C slot zero at tau = inf)."""
    d = problem.derived
    tau = problem.tau
    n_eff = level.energy / (4.0 * d.omega) - 0.5 * (1.0 + d.P)
    if tau.is_infinite:
        c, dd = 0.0, c_coeff
    else:
        c, dd = c_coeff, tau.value * c_coeff
    return RadialWavefunction(derived=d, tau=tau, energy=level.energy, n_eff=n_eff,
                              c_coeff=c, d_coeff=dd)


def r_max(derived: DerivedParams) -> float:
    """Radius where kappa = 50; the Gaussian factor is below 1e-10 beyond it."""
    return math.sqrt(R_MAX_KAPPA / derived.kappa_scale)


# ---------------------------------------------------------------------------
# scale factors (kept in one place; the overall constants are fixed by
# requiring the three representations and the normalization to agree)
# ---------------------------------------------------------------------------

def _power_prefactors(derived: DerivedParams) -> tuple[float, float]:
    """k^((P-1/2)/2) and k^((-P-1/2)/2): the (2mg) powers multiplying r^(1/2 +/- P) in u."""
    k, P = derived.kappa_scale, derived.P
    return k ** (0.5 * (P - 0.5)), k ** (0.5 * (-P - 0.5))


def _single_function_prefactor(w: RadialWavefunction) -> float:
    """Constant c such that C M1 + D kappa^-P M2 = c U(-n, 1+P, kappa) on an eigenvalue.

    c = C Gamma(1+P) Gamma(-n-P) sin(pi(1+P))/pi, or, when C = 0 (tau = inf),
    c = -D Gamma(1-P) Gamma(-n) sin(pi(1+P))/pi.
    """
    P, n = w.derived.P, w.n_eff
    if n < -DEEP_LEVEL_LIMIT:
        raise DomainError(f"n_eff = {n:.6g} < -{DEEP_LEVEL_LIMIT:g}: level too deep for the "
                          "single-Tricomi representation")
    s = sinpi(1.0 + P) / math.pi
    if w.c_coeff != 0.0:
        lg = lgamma_signed(-n - P)
        return w.c_coeff * gamma(1.0 + P) * lg.sign * math.exp(lg.log_abs) * s
    lg = lgamma_signed(-n)
    return -w.d_coeff * gamma(1.0 - P) * lg.sign * math.exp(lg.log_abs) * s


def _kappa(w: RadialWavefunction, r: float) -> float:
    if not r > 0.0:
        raise DomainError("r must be positive")
    return w.derived.kappa_scale * r * r


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

def eval_general(w: RadialWavefunction, r: float) -> float:
    """R(r) from the two-Kummer general solution.

    Exact zero beyond kappa = 1400. For generic tau both terms grow like
    e^kappa and cancel on eigenstates; the rounding of the eigenvalue leaves
    a growing remainder, so the relative accuracy drops from ~1e-11 at
    kappa = 10 to ~1e-6 at kappa = 20. Use :func:`eval_unified` for tails.
    """
    x = _kappa(w, r)
    if x > UNDERFLOW_KAPPA:
        return 0.0
    P, n = w.derived.P, w.n_eff
    pc, pd = _power_prefactors(w.derived)
    total = 0.0
    if w.c_coeff != 0.0:
        total += w.c_coeff * pc * r ** (0.5 + P) * kummer_m(-n, 1.0 + P, x)
    if w.d_coeff != 0.0:
        total += w.d_coeff * pd * r ** (0.5 - P) * kummer_m(-n - P, 1.0 - P, x)
    u = math.exp(-0.5 * x) * total
    return u / r


def general_form_valid(w: RadialWavefunction, r: float) -> bool:
    """Whether :func:`eval_general` keeps ~1e-11 relative accuracy at ``r``.

    Always true on the pure branches; for generic tau only up to
    kappa = ``GENERAL_FORM_KAPPA``.
    """
    if w.c_coeff == 0.0 or w.d_coeff == 0.0:
        return True
    return _kappa(w, r) <= GENERAL_FORM_KAPPA


def eval_standard(w: RadialWavefunction, r: float) -> float:
    """Pure standard-branch form C k^((P-1/2)/2) r^(1/2+P) e^(-kappa/2) M(-n, 1+P, kappa) / r."""
    x = _kappa(w, r)
    if x > UNDERFLOW_KAPPA:
        return 0.0
    P = w.derived.P
    pc, _ = _power_prefactors(w.derived)
    return w.c_coeff * pc * r ** (-0.5 + P) * math.exp(-0.5 * x) * kummer_m(-w.n_eff, 1.0 + P, x)


def eval_additional(w: RadialWavefunction, r: float) -> float:
    """Pure additional-branch form D k^((-P-1/2)/2) r^(1/2-P) e^(-kappa/2) M(-n-P, 1-P, kappa) / r."""
    x = _kappa(w, r)
    if x > UNDERFLOW_KAPPA:
        return 0.0
    P = w.derived.P
    _, pd = _power_prefactors(w.derived)
    return w.d_coeff * pd * r ** (-0.5 - P) * math.exp(-0.5 * x) * kummer_m(-w.n_eff - P, 1.0 - P, x)


def eval_unified(w: RadialWavefunction, r: float) -> float:
    """R(r) through one Tricomi function U(-n, 1+P, kappa).

    Relies on the quantization condition; off an eigenvalue it is a
    different function from :func:`eval_general`.
    """
    x = _kappa(w, r)
    if x > UNDERFLOW_KAPPA:
        return 0.0
    P = w.derived.P
    c = _single_function_prefactor(w)
    u_val = tricomi_u(-w.n_eff, 1.0 + P, x)
    if c == 0.0 or u_val == 0.0:
        return 0.0
    k = w.derived.kappa_scale
    log_mag = (-0.5 * math.log(k) - 0.5 * x + 0.5 * (0.5 + P) * math.log(x)
               + math.log(abs(u_val)) + math.log(abs(c)) - math.log(r))
    return math.copysign(math.exp(log_mag), c * u_val)


def eval_whittaker(w: RadialWavefunction, r: float) -> float:
    """R(r) = k^(-1/2) kappa^(-1/4) c W_{n+(1+P)/2, P/2}(kappa) / r."""
    x = _kappa(w, r)
    if x > UNDERFLOW_KAPPA:
        return 0.0
    P = w.derived.P
    c = _single_function_prefactor(w)
    wv = whittaker_w(w.n_eff + 0.5 * (1.0 + P), 0.5 * P, x)
    k = w.derived.kappa_scale
    return c * wv * k ** -0.5 * x ** -0.25 / r


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def normalization_constant(w: RadialWavefunction) -> float:
    """Closed-form C^2 making the integral of R^2 r^2 over (0, inf) equal to one.

        C^2 = 2 pi (2mg)^(3/4) Gamma(-n)
              / [ Gamma(1+P)^2 Gamma(-n-P) sin(pi P) (psi(-n) - psi(-n-P)) ]

    comes from the tabulated integral of W_{k,mu}(z)^2 / z, valid for
    |mu| = P/2 < 1/2.

    Raises
    ------
    DegenerateBranch
        For tau = 0 or tau = inf, where Gamma(-n) or Gamma(-n-P) has a pole;
        use :func:`norm_integral` there.
    """
    d = w.derived
    if w.tau.is_zero or w.tau.is_infinite:
        raise DegenerateBranch("closed-form normalization degenerates on the pure branches")
    if d.regime is not Regime.SAE_REQUIRED:
        raise DomainError("requires 0 < P < 1/2")
    P, n = d.P, w.n_eff
    lg_n = lgamma_signed(-n)
    lg_np = lgamma_signed(-n - P)
    ratio = lg_n.sign * lg_np.sign * math.exp(lg_n.log_abs - lg_np.log_abs)
    psi_diff = digamma(-n) - digamma(-n - P)
    return (2.0 * math.pi * d.kappa_scale ** 1.5 * ratio
            / (gamma(1.0 + P) ** 2 * sinpi(P) * psi_diff))


def norm_integral(w: RadialWavefunction) -> float:
    """Integral of R^2 r^2 dr over (0, inf) by adaptive quadrature on the unified form."""
    d = w.derived
    k = d.kappa_scale

    def integrand(x):
        r = math.sqrt(x / k)
        R = eval_unified(w, r)
        # dr = dx / (2 k r)
        return R * R * r * r / (2.0 * k * r)

    edges = [0.0, 0.5, 2.0, 8.0, 20.0, 45.0, 120.0]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        total += val
    return total


def normalized(w: RadialWavefunction) -> RadialWavefunction:
    """Copy with the amplitude fixed so the norm is one (closed form when available)."""
    try:
        c2 = normalization_constant(w)
        if c2 <= 0.0:
            raise DegenerateBranch(f"closed-form C^2 = {c2!r} is not positive")
        c = math.sqrt(c2)
        return replace(w, c_coeff=c, d_coeff=w.tau.value * c)
    except DegenerateBranch:
        scale = 1.0 / math.sqrt(norm_integral(w))
        return replace(w, c_coeff=w.c_coeff * scale, d_coeff=w.d_coeff * scale)


def sample(func, w: RadialWavefunction, r: np.ndarray) -> np.ndarray:
    """Evaluate one of the scalar evaluators on an array of radii."""
    return np.array([func(w, float(ri)) for ri in np.ravel(r)]).reshape(np.shape(r))
