"""Acceptance criteria, one test each, at their stated tolerances and time budgets.

Each test prints one PASS/FAIL line. Run directly for the bare report:

    python tests/test_acceptance.py
"""

import sys

import pytest

from sae_oscillator.checks import CHECKS, run_checks

CRITERIA = [
    ("closed_form", "closed-form branches, n_r <= 20, |dE| <= 1e-10 omega"),
    ("equidistance", "4 omega spacing on pure branches, violated for tau = -1"),
    ("ratio_identity", "closed-form ratio f(E + 4w)/f(E) vs direct quotient"),
    ("oracle_agreement", "Numerov shooting vs Gamma-equation roots, 3x5 grid"),
    ("orthogonality", "Gram matrices and the cross-tau overlap identity"),
    ("normalization", "closed-form C^2 times quadrature norm"),
    ("perturbative", "first-order levels leave an O(tau^2) residual"),
    ("census", "negative-level census and tau > 0 flag"),
    ("quantum_defect", "linear quantum defect leaves an O(V0^2) residual"),
    ("representations", "three radial representations and r R -> 0"),
    ("special_functions", "Gamma, psi, M and U identities"),
]


def test_every_check_is_covered():
    assert [name for name, _ in CRITERIA] == list(CHECKS)


@pytest.mark.parametrize("name", [name for name, _ in CRITERIA])
def test_criterion(name, capsys):
    res = CHECKS[name]()
    with capsys.disabled():
        print(f"\n{res.line()}")
    assert res.passed, res.line()
    assert res.within_budget, res.line()


def test_zero_tolerance_is_reported_as_failure():
    res = CHECKS["ratio_identity"](0.0)
    assert not res.passed


if __name__ == "__main__":
    results = run_checks()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed and r.within_budget for r in results) else 1)
