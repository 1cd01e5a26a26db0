import math

import numpy as np
import pytest

from sae_oscillator import oracle
from sae_oscillator.errors import DegenerateBranch, DomainError, RegimeError
from sae_oscillator.model import PhysicalParams
from sae_oscillator.spectrum import SpectralProblem, solve_spectrum
from sae_oscillator.wavefn import (
    DEEP_LEVEL_LIMIT, GENERAL_FORM_KAPPA, build, eval_general, eval_standard, eval_unified, eval_whittaker,
    norm_integral, normalization_constant, normalized, r_max, sample)

from conftest import problem_for


def state(P, tau, n, g=1.0, m=0.5, norm=True):
    pr = problem_for(P, tau, m=m, g=g)
    lev = solve_spectrum(pr, n + 1, search_floor=-math.inf)[n]
    w = build(pr, lev)
    return (normalized(w) if norm else w), pr


def radii(w, kappa_lo, kappa_hi, num, seed=0):
    k = w.derived.kappa_scale
    x = np.random.default_rng(seed).uniform(kappa_lo, kappa_hi, num)
    return np.sqrt(x / k)


def test_build_standard():
    w, _ = state(0.4, 0.0, 1, norm=False)
    assert w.d_coeff == 0.0
    assert w.n_eff == pytest.approx(1.0, abs=1e-9)
    assert w.kummer_a == -w.n_eff
    assert 1.0 < w.kummer_b_plus < 1.5 and 0.5 < w.kummer_b_minus < 1.0


def small_r_slope(w, lo=1e-8, hi=1e-6):
    r = np.geomspace(lo, hi, 20)
    R = np.abs(sample(eval_general, w, r))
    return np.polyfit(np.log(r), np.log(R), 1)[0]


def test_small_r_exponents():
    P = 0.4
    w0, _ = state(P, 0.0, 0)
    winf, _ = state(P, "inf", 0)
    wg, _ = state(P, -1e-3, 1)
    assert winf.c_coeff == 0.0 and winf.d_coeff != 0.0
    # R ~ r^(-1/2 + P) on the standard branch, r^(-1/2 - P) on the additional one
    assert small_r_slope(w0) == pytest.approx(-0.5 + P, abs=1e-6)
    assert small_r_slope(winf) == pytest.approx(-0.5 - P, abs=1e-6)
    # generic tau: additional term dominates at tiny r, standard one takes over later
    s_in = small_r_slope(wg, 1e-12, 1e-11)
    s_out = small_r_slope(wg, 1e-2, 3e-2)
    assert s_in == pytest.approx(-0.5 - P, abs=0.02)
    assert s_out == pytest.approx(-0.5 + P, abs=0.05)


@pytest.mark.parametrize("g", [1.0, 3.0])
def test_coefficient_ratio_recovers_tau(g):
    P, tau = 0.25, -1.0
    w, pr = state(P, tau, 1, g=g)
    k = w.derived.kappa_scale
    r = np.geomspace(1e-6, 1e-4, 40) * k ** -0.5
    R = sample(eval_general, w, r)
    # leading powers plus their first r^2 corrections
    A = np.column_stack([r ** (-0.5 + P), r ** (-0.5 - P), r ** (1.5 + P), r ** (1.5 - P)])
    A /= np.max(np.abs(A), axis=0)
    coef = np.linalg.lstsq(A, R, rcond=None)[0]
    a_st = coef[0] / np.max(r ** (-0.5 + P))
    a_add = coef[1] / np.max(r ** (-0.5 - P))
    assert a_add / a_st * k ** P == pytest.approx(tau, rel=1e-7)


def test_standard_state_matches_closed_form():
    w, _ = state(0.4, 0.0, 2)
    for r in radii(w, 0.01, 40, 100):
        assert eval_general(w, r) == pytest.approx(eval_standard(w, r), rel=1e-13)


@pytest.mark.filterwarnings("ignore::sae_oscillator.errors.PhysicalityWarning")
@pytest.mark.parametrize("P, tau, n", [(0.25, -1.0, 0), (0.25, -1.0, 3), (0.4, 0.0, 1),
                                       (0.1, "inf", 2), (0.4, -3.0, 2), (0.3, 0.5, 1)])
def test_representations_agree(P, tau, n):
    w, _ = state(P, tau, n)
    r = radii(w, 1e-6, 45, 300, seed=n)
    Rg = sample(eval_general, w, r)
    Ru = sample(eval_unified, w, r)
    Rw = sample(eval_whittaker, w, r)
    floor = 1e-12 * np.max(np.abs(Ru))
    mask = np.abs(Ru) > floor
    assert np.max(np.abs(Rw - Ru)[mask] / np.abs(Ru[mask])) <= 1e-8
    kappa = w.derived.kappa_scale * r * r
    mask &= kappa <= GENERAL_FORM_KAPPA if (w.c_coeff and w.d_coeff) else True
    assert np.max(np.abs(Rg - Ru)[mask] / np.abs(Ru[mask])) <= 1e-8


def test_unified_ground_state_is_bare_prefactor():
    w, _ = state(0.4, 0.0, 0)
    x = np.array([0.3, 2.0, 11.0])
    r = np.sqrt(x / w.derived.kappa_scale)
    R = sample(eval_unified, w, r)
    bare = r ** (-0.5 + 0.4) * np.exp(-x / 2)
    ratio = R / bare
    assert np.ptp(ratio) <= 1e-13 * abs(ratio[0])


def test_large_r_envelope():
    for tau, n in [(0.0, 1), (-1.0, 2), ("inf", 0)]:
        w, _ = state(0.25, tau, n)
        k = w.derived.kappa_scale
        for x in np.linspace(25, 200, 40):
            r = math.sqrt(x / k)
            assert abs(eval_unified(w, r)) <= math.exp(-x / 4)


def test_decay_law():
    w, _ = state(0.25, -1.0, 2)
    k, P = w.derived.kappa_scale, w.derived.P
    x = np.linspace(60, 200, 30)
    r = np.sqrt(x / k)
    R = sample(eval_whittaker, w, r)
    slope = np.polyfit(np.log(x), np.log(np.abs(R) * np.exp(x / 2)), 1)[0]
    # R e^(kappa/2) ~ kappa^(n_eff + (P - 1/2)/2) at large kappa
    assert slope == pytest.approx(w.n_eff + 0.5 * (P - 0.5), abs=0.05)


def test_boundary_condition():
    for P, tau, n in [(0.25, -1.0, 0), (0.1, "inf", 0), (0.4, 0.0, 0)]:
        w, _ = state(P, tau, n)
        r = np.geomspace(1e-8, 1e-4, 60)
        rR = np.abs(r * sample(eval_whittaker, w, r))
        assert np.all(np.diff(rR) > 0.0)  # sup over (0, r] shrinks with r
        # decays like r^(1/2 - P) or faster
        assert rR[0] <= 1.01 * rR[-1] * 1e-4 ** (0.5 - P)


def test_underflow_to_zero():
    w, _ = state(0.25, -1.0, 0)
    r = math.sqrt(1500.0 / w.derived.kappa_scale)
    for f in (eval_general, eval_unified, eval_whittaker):
        assert f(w, r) == 0.0
    with pytest.raises(DomainError):
        eval_general(w, 0.0)


@pytest.mark.parametrize("n", range(5))
def test_node_count(n):
    for tau in (0.0, -1.0, "inf"):
        w, _ = state(0.25, tau, n)
        r = np.geomspace(1e-6, r_max(w.derived), 4000)
        R = sample(eval_unified, w, r)
        assert oracle.count_nodes(R) == n


# -- normalization ------------------------------------------------------------------

def test_normalization_constant_against_quadrature():
    w, _ = state(0.25, -1.0, 0, norm=False)
    c2 = normalization_constant(w)
    assert c2 * norm_integral(w) == pytest.approx(1.0, abs=1e-6)
    wn = normalized(w)
    assert norm_integral(wn) == pytest.approx(1.0, abs=1e-10)


def test_normalization_positive_random():
    rng = np.random.default_rng(17)
    done = 0
    while done < 20:
        P = rng.uniform(0.15, 0.49)
        tau = -10 ** rng.uniform(-0.5, 2)
        n = int(rng.integers(0, 4))
        w, _ = state(P, tau, n, g=rng.uniform(0.5, 3.0), norm=False)
        if w.n_eff < -20:
            continue  # very deep negative level; quadrature there is slow
        c2 = normalization_constant(w)
        assert c2 > 0.0
        assert c2 * norm_integral(w) == pytest.approx(1.0, abs=1e-6)
        done += 1


def test_deep_level_rejected_by_single_function_forms():
    w, _ = state(0.05, -0.5, 0, norm=False)
    assert w.n_eff < -DEEP_LEVEL_LIMIT
    with pytest.raises(DomainError):
        eval_unified(w, 1e-3)
    assert math.isfinite(eval_general(w, 1e-3))


def test_normalization_degenerate_branches():
    for tau in (0.0, "inf"):
        w, _ = state(0.25, tau, 1, norm=False)
        with pytest.raises(DegenerateBranch):
            normalization_constant(w)
        assert norm_integral(normalized(w)) == pytest.approx(1.0, abs=1e-10)


def test_normalization_range_of_p():
    w, _ = state(0.49, -1.0, 1, norm=False)
    assert normalization_constant(w) * norm_integral(w) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(RegimeError):
        problem_for(0.5, -1.0)  # P = 1/2 is already regular


# -- consistency with the radial equation ----------------------------------------------

def ode_residual(w, r, h):
    d = w.derived
    m, k, P, E = d.m, d.kappa_scale, d.P, w.energy

    def u(x):
        return x * eval_unified(w, x)

    st = [u(r + j * h) for j in (-2, -1, 0, 1, 2)]
    upp = (-st[0] + 16 * st[1] - 30 * st[2] + 16 * st[3] - st[4]) / (12 * h * h)
    pot = (P * P - 0.25) / (r * r) + k * k * r * r - 2 * m * E
    return abs(upp - pot * st[2]), abs(upp) + abs(pot * st[2])


@pytest.mark.parametrize("tau, n", [(-1.0, 0), (-1.0, 2), (0.0, 1), ("inf", 1)])
def test_ode_residual(tau, n):
    w, _ = state(0.25, tau, n)
    for x in np.linspace(0.3, 8.0, 25):
        r = math.sqrt(x / w.derived.kappa_scale)
        res, scale = ode_residual(w, r, 1e-3 * r)
        assert res <= 1e-6 * scale


def test_log_derivative_matches_oracle():
    pr = problem_for(0.25, -1.0, g=2.0)
    lev = solve_spectrum(pr, 2)[1]
    w = normalized(build(pr, lev))
    grid = oracle.default_grid(pr, lev.energy)
    st = oracle.oracle_state(pr, lev.energy, grid)
    r0 = 3.0 * w.derived.kappa_scale ** -0.5
    i = grid.index_of(r0)
    r = grid.r[i - 2: i + 3]
    h = grid.step
    # d ln u / d ln r from both sides
    uo = st.u[i - 2: i + 3]
    dlog_o = (uo[0] - 8 * uo[1] + 8 * uo[3] - uo[4]) / (12 * h) / uo[2]
    ua = r * sample(eval_general, w, r)
    dlog_a = (ua[0] - 8 * ua[1] + 8 * ua[3] - ua[4]) / (12 * h) / ua[2]
    assert dlog_o == pytest.approx(dlog_a, rel=1e-6)
