"""
Independent check of the spectrum and wavefunctions by direct integration.

The reduced radial equation

    u'' + [2mE - (P^2 - 1/4)/r^2 - 2mg r^2] u = 0

is integrated with Numerov's method in t = ln r on phi = u / sqrt(r), where it
becomes

    phi'' = [P^2 - 2mE r^2 + 2mg r^4] phi .

The singular point r = 0 moves to t = -inf and the two small-r behaviours
r^(1/2 +/- P) of u turn into plain exponentials e^(+/- P t), so a uniform
t-grid resolves both. The outward solution is seeded with the small-r
Frobenius series fixed by tau, the inward one with a WKB tail; eigenvalues are
zeros of the normalized Wronskian at a matching radius.

Nothing here calls the Gamma-function eigenvalue equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import GridMismatch, NoSignChange, StepError
from .model import DerivedParams, additional_to_standard_ratio
from .spectrum import EnergyLevel, SpectralProblem

__all__ = [
    "RadialGrid",
    "BoundarySeries",
    "SampledState",
    "default_grid",
    "numerov_integrate",
    "match_radius",
    "wronskian_mismatch",
    "shoot_eigenvalue",
    "oracle_state",
    "fit_boundary_coefficients",
    "inner_product",
    "orthogonality_defect",
    "orthogonality_relation",
    "count_nodes",
]

DEFAULT_STEPS = 20_000
_RESCALE = 1e150


@dataclass(frozen=True)
class RadialGrid:
    """Grid uniform in t = ln r from ``r_min`` to ``r_max`` with ``n_steps`` intervals."""

    r_min: float
    r_max: float
    n_steps: int = DEFAULT_STEPS

    def __post_init__(self):
        if not (0.0 < self.r_min < self.r_max):
            raise ValueError("need 0 < r_min < r_max")
        if self.n_steps < 1000:
            raise ValueError("at least 1000 steps")

    @property
    def t(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.n_steps + 1)

    @property
    def r(self) -> np.ndarray:
        return np.exp(self.t)

    @property
    def step(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / self.n_steps

    def index_of(self, r: float) -> int:
        i = int(round((math.log(r) - math.log(self.r_min)) / self.step))
        return min(max(i, 2), self.n_steps - 2)


@dataclass(frozen=True)
class BoundarySeries:
    """u ~ a_st r^(1/2+P) + a_add r^(1/2-P) near the origin."""

    a_st: float
    a_add: float

    def __post_init__(self):
        if self.a_st == 0.0 and self.a_add == 0.0:
            raise ValueError("boundary coefficients must not both vanish")

    @classmethod
    def from_problem(cls, problem: SpectralProblem) -> "BoundarySeries":
        tau = problem.tau
        if tau.is_infinite:
            return cls(0.0, 1.0)
        return cls(1.0, additional_to_standard_ratio(tau, problem.derived))


@dataclass
class SampledState:
    """A normalized oracle eigenfunction R(r) on a grid, with its small-r coefficients."""

    grid: RadialGrid
    energy: float
    R: np.ndarray
    a_st: float
    a_add: float
    derived: DerivedParams

    @property
    def u(self) -> np.ndarray:
        return self.R * self.grid.r


def _coefficient(problem: SpectralProblem, E: float, r: np.ndarray) -> np.ndarray:
    d = problem.derived
    k2 = d.kappa_scale ** 2
    r2 = r * r
    return d.P ** 2 - 2.0 * d.m * E * r2 + k2 * r2 * r2


_SERIES_TERMS = 12


def _series(sigma: float, E: float, derived: DerivedParams) -> list[float]:
    """Coefficients c_j of phi = r^sigma sum_j c_j r^(2j) for sigma = +/-P.

    From phi_tt = (P^2 - 2mE r^2 + k^2 r^4) phi:
    4 j (j + sigma) c_j = -2mE c_(j-1) + k^2 c_(j-2).
    """
    two_me = 2.0 * derived.m * E
    k2 = derived.kappa_scale ** 2
    c = [1.0]
    for j in range(1, _SERIES_TERMS):
        prev2 = c[j - 2] if j >= 2 else 0.0
        c.append((-two_me * c[j - 1] + k2 * prev2) / (4.0 * j * (j + sigma)))
    return c


def _frobenius(sigma: float, E: float, derived: DerivedParams, r: np.ndarray) -> np.ndarray:
    """phi = u / sqrt(r) of the small-r solution starting as r^sigma."""
    r = np.asarray(r, dtype=float)
    x = r * r
    acc = np.zeros_like(x)
    for cj in reversed(_series(sigma, E, derived)):
        acc = acc * x + cj
    return r ** sigma * acc


def default_grid(problem: SpectralProblem, e_lo: float, e_hi: float | None = None,
                 n_steps: int = DEFAULT_STEPS) -> RadialGrid:
    """Grid wide enough for every eigenfunction with energy in [e_lo, e_hi].

    r_max sits where kappa = max(50, E/omega + 40) for the oscillator-bound
    states, or 40 decay lengths out for deeply bound negative levels.
    """
    d = problem.derived
    k, m, w = d.kappa_scale, d.m, d.omega
    e_hi = e_lo if e_hi is None else e_hi
    if e_hi < 0.0:
        scale = 1.0 / math.sqrt(2.0 * m * abs(e_hi))
        r_max = min(math.sqrt(50.0 / k), 40.0 * scale)
    else:
        r_max = math.sqrt(max(50.0, e_hi / w + 40.0) / k)
    r_min = 1e-4 * k ** -0.5
    if e_lo < 0.0:
        r_min = min(r_min, 1e-4 / math.sqrt(2.0 * m * abs(e_lo)))
    return RadialGrid(r_min, r_max, n_steps)


def _numerov(F: list, h2: float, y0: float, y1: float, stop: int) -> tuple[np.ndarray, float]:
    """y'' = F y from indices 0, 1 up to ``stop``.

    Summed form: with w = (1 - h^2 F / 12) y the scheme is
    w[i+1] - 2 w[i] + w[i-1] = h^2 F[i] y[i], and the first difference of w
    is carried explicitly and w is accumulated with Kahan summation. The textbook three-term update loses about
    log10(12 / (h^2 F)) digits to cancellation, which feeds the growing mode
    when a recessive solution is integrated.
    """
    y = [0.0] * (stop + 1)
    y[0], y[1] = y0, y1
    w_prev = (1.0 - h2 * F[0] / 12.0) * y0
    w = (1.0 - h2 * F[1] / 12.0) * y1
    dw = w - w_prev
    carry = 0.0  # Kahan compensation for the running sum w
    log_scale = 0.0
    for i in range(1, stop):
        dw += h2 * F[i] * y[i]
        inc = dw - carry
        nw = w + inc
        carry = (nw - w) - inc
        w = nw
        y[i + 1] = w / (1.0 - h2 * F[i + 1] / 12.0)
        if abs(y[i + 1]) > _RESCALE:
            inv = 1.0 / _RESCALE
            for j in range(i + 2):
                y[j] *= inv
            w *= inv
            dw *= inv
            carry *= inv
            log_scale += math.log(_RESCALE)
    return np.asarray(y), log_scale


def numerov_integrate(problem: SpectralProblem, E: float, grid: RadialGrid,
                      boundary: BoundarySeries | None = None, direction: str = "outward",
                      stop_index: int | None = None) -> tuple[np.ndarray, float]:
    """Integrate the reduced radial equation at energy E.

    Returns ``(u, log_scale)``: samples of u = r R on ``grid.r`` (outward:
    indices 0..stop, inward: stop..N) and the log of the factor divided out
    to avoid overflow.

    Raises
    ------
    StepError
        If step * sqrt(max |F|) > 0.5 on the grid.
    """
    d = problem.derived
    P, m = d.P, d.m
    t, r, h = grid.t, grid.r, grid.step
    F = _coefficient(problem, E, r)
    if h * math.sqrt(float(np.max(np.abs(F)))) > 0.5:
        raise StepError(f"grid too coarse: step*sqrt(max|F|) = "
                        f"{h * math.sqrt(float(np.max(np.abs(F)))):.3g} > 0.5")
    h2 = h * h
    N = grid.n_steps
    if direction == "outward":
        boundary = boundary or BoundarySeries.from_problem(problem)
        stop = N if stop_index is None else stop_index
        r01 = r[:2]
        seed = np.zeros(2)
        if boundary.a_st != 0.0:
            seed += boundary.a_st * _frobenius(P, E, d, r01)
        if boundary.a_add != 0.0:
            seed += boundary.a_add * _frobenius(-P, E, d, r01)
        phi, log_scale = _numerov(F.tolist(), h2, float(seed[0]), float(seed[1]), stop)
        return phi * np.sqrt(r[: stop + 1]), log_scale
    if direction == "inward":
        stop = 0 if stop_index is None else stop_index
        if F[-1] <= 0.0 or F[-2] <= 0.0:
            raise StepError("r_max is not in the classically forbidden region")
        # WKB: phi ~ F^(-1/4) exp(-int sqrt F dt)
        ratio = math.exp(0.5 * h * (math.sqrt(F[-1]) + math.sqrt(F[-2]))) * (F[-1] / F[-2]) ** 0.25
        phi, log_scale = _numerov(F[::-1].tolist(), h2, 1.0, ratio, N - stop)
        phi = phi[::-1]
        return phi * np.sqrt(r[stop:]), log_scale
    raise ValueError(f"direction must be 'outward' or 'inward', got {direction!r}")


def match_radius(problem: SpectralProblem, E: float) -> float:
    """Outer classical turning point when there is one, else the minimum of F (or the decay length)."""
    d = problem.derived
    m, k, P = d.m, d.kappa_scale, d.P
    if E > 0.0:
        disc = (m * E) ** 2 - (k * P) ** 2
        if disc > 0.0:
            return math.sqrt((m * E + math.sqrt(disc)) / (k * k))
        return math.sqrt(m * E) / k
    if E < 0.0:
        return 1.0 / math.sqrt(2.0 * m * abs(E))
    return k ** -0.5


def wronskian_mismatch(problem: SpectralProblem, E: float, grid: RadialGrid,
                       i_match: int) -> float:
    """sin of the angle between outward and inward solution vectors at i_match.

    Continuous in E, bounded by 1, and zero exactly at eigenvalues.
    """
    uo, _ = numerov_integrate(problem, E, grid, direction="outward", stop_index=i_match + 1)
    ui, _ = numerov_integrate(problem, E, grid, direction="inward", stop_index=i_match)
    a0, a1 = uo[i_match], uo[i_match + 1]
    b0, b1 = ui[0], ui[1]
    return (a0 * b1 - a1 * b0) / (math.hypot(a0, a1) * math.hypot(b0, b1))


def shoot_eigenvalue(problem: SpectralProblem, bracket: tuple[float, float],
                     grid: RadialGrid | None = None) -> float:
    """Eigenvalue inside ``bracket`` from the zero of the matching Wronskian.

    Raises
    ------
    NoSignChange
        If the mismatch has the same sign at both ends.
    """
    lo, hi = map(float, bracket)
    w = problem.derived.omega
    if grid is None:
        grid = default_grid(problem, lo, hi)
    r_m = match_radius(problem, 0.5 * (lo + hi) if hi < 0.0 or lo > 0.0 else max(hi, 0.0))
    r_m = min(max(r_m, grid.r_min * 10.0), grid.r_max * 0.5)
    i_m = grid.index_of(r_m)
    fun = lambda E: wronskian_mismatch(problem, E, grid, i_m)  # noqa: E731
    flo, fhi = fun(lo), fun(hi)
    if flo * fhi > 0.0:
        raise NoSignChange(f"matching Wronskian has one sign on [{lo!r}, {hi!r}]")
    return optimize.brentq(fun, lo, hi, xtol=1e-12 * w, rtol=1e-15, maxiter=200)


# ---------------------------------------------------------------------------
# states, overlaps, orthogonality
# ---------------------------------------------------------------------------

def fit_boundary_coefficients(grid: RadialGrid, u: np.ndarray, derived: DerivedParams,
                              energy: float, span: float = 10.0) -> tuple[float, float]:
    """Least-squares (a_st, a_add) in u = a_st r^(1/2+P)(1 + ...) + a_add r^(1/2-P)(1 + ...).

    The basis functions are the full small-r series at ``energy``, fitted on
    [r_min, span * r_min].
    """
    r = grid.r
    sel = r <= span * grid.r_min
    rr = r[sel]
    P = derived.P
    A = np.column_stack([np.sqrt(rr) * _frobenius(P, energy, derived, rr),
                         np.sqrt(rr) * _frobenius(-P, energy, derived, rr)])
    # column scaling keeps the least-squares problem tame
    sc = np.max(np.abs(A), axis=0)
    coef, *_ = np.linalg.lstsq(A / sc, u[sel], rcond=None)
    return float(coef[0] / sc[0]), float(coef[1] / sc[1])


def _inner_tail(r0: float, s1: SampledState, s2: SampledState) -> float:
    """Integral of u1 u2 over (0, r0) from the small-r series of both states."""
    d = s1.derived
    P = d.P
    total = 0.0
    for sig1, a1 in ((P, s1.a_st), (-P, s1.a_add)):
        if a1 == 0.0:
            continue
        c1 = _series(sig1, s1.energy, d)
        for sig2, a2 in ((P, s2.a_st), (-P, s2.a_add)):
            if a2 == 0.0:
                continue
            c2 = _series(sig2, s2.energy, s2.derived)
            # u1 u2 = r^(1 + sig1 + sig2) sum_ij c1_i c2_j r^(2(i+j))
            acc = 0.0
            for i, ci in enumerate(c1):
                for j, cj in enumerate(c2):
                    p = 2.0 + sig1 + sig2 + 2.0 * (i + j)
                    acc += ci * cj * r0 ** p / p
            total += a1 * a2 * acc
    return total


def inner_product(R1, R2, grid: RadialGrid) -> float:
    """Integral of R1 R2 r^2 dr on the log grid (composite Simpson in t).

    ``R1``/``R2`` are arrays on ``grid.r`` or :class:`SampledState` objects.
    When both are states the piece below r_min is added from their small-r
    series.
    """
    for x in (R1, R2):
        if isinstance(x, SampledState) and x.grid != grid:
            raise GridMismatch("state sampled on a different grid")
    f1 = R1.R if isinstance(R1, SampledState) else np.asarray(R1, dtype=float)
    f2 = R2.R if isinstance(R2, SampledState) else np.asarray(R2, dtype=float)
    r = grid.r
    if f1.shape != r.shape or f2.shape != r.shape:
        raise GridMismatch(f"sample shapes {f1.shape}, {f2.shape} do not match grid {r.shape}")
    # r^2 dr = r^3 dt
    body = float(integrate.simpson(f1 * f2 * r ** 3, x=grid.t))
    if isinstance(R1, SampledState) and isinstance(R2, SampledState):
        body += _inner_tail(grid.r_min, R1, R2)
    return body


def oracle_state(problem: SpectralProblem, E: float, grid: RadialGrid) -> SampledState:
    """Outward and inward Numerov solutions spliced at the matching radius, normalized.

    The small-r coefficients (a_st, a_add) of the result are fitted to the
    samples, not copied from the seed, so they also audit the tau convention.
    """
    d = problem.derived
    r = grid.r
    r_m = min(max(match_radius(problem, E), grid.r_min * 10.0), grid.r_max * 0.5)
    i_m = grid.index_of(r_m)
    uo, _ = numerov_integrate(problem, E, grid, direction="outward", stop_index=i_m)
    ui, _ = numerov_integrate(problem, E, grid, direction="inward", stop_index=i_m)
    ui = ui * (uo[i_m] / ui[0])
    u = np.concatenate([uo[:i_m], ui])
    a_st, a_add = fit_boundary_coefficients(grid, u, d, E)
    raw = SampledState(grid=grid, energy=E, R=u / r, a_st=a_st, a_add=a_add, derived=d)
    scale = 1.0 / math.sqrt(inner_product(raw, raw, grid))
    # sign convention: the leading small-r coefficient of the tau family is positive
    lead = a_add if problem.tau.is_infinite else a_st
    if lead < 0.0:
        scale = -scale
    return SampledState(grid=grid, energy=E, R=raw.R * scale, a_st=a_st * scale,
                        a_add=a_add * scale, derived=d)


def orthogonality_defect(problem: SpectralProblem, levels: list[EnergyLevel],
                         grid: RadialGrid | None = None) -> np.ndarray:
    """Gram matrix of the normalized oracle eigenfunctions at the given levels."""
    energies = [lev.energy for lev in levels]
    if grid is None:
        grid = default_grid(problem, min(energies), max(energies), n_steps=2 * DEFAULT_STEPS)
    states = [oracle_state(problem, E, grid) for E in energies]
    n = len(states)
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = inner_product(states[i], states[j], grid)
    return G


def orthogonality_relation(state1: SampledState, state2: SampledState) -> tuple[float, float]:
    """Both sides of  m (E1 - E2) <R1, R2> = P (a1_st a2_add - a2_st a1_add)."""
    if state1.grid != state2.grid:
        raise GridMismatch("states sampled on different grids")
    m, P = state1.derived.m, state1.derived.P
    lhs = m * (state1.energy - state2.energy) * inner_product(state1, state2, state1.grid)
    rhs = P * (state1.a_st * state2.a_add - state2.a_st * state1.a_add)
    return lhs, rhs


def count_nodes(R: np.ndarray, rel_floor: float = 1e-9) -> int:
    """Sign changes of R, ignoring samples below rel_floor * max|R| (the tails)."""
    R = np.asarray(R)
    keep = np.abs(R) > rel_floor * np.max(np.abs(R))
    s = np.sign(R[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))
