import math

import numpy as np
import pytest

from sae_oscillator.errors import DomainError, FallToCenterError
from sae_oscillator.model import (
    TAU_INFINITY, ExtensionParameter, PhysicalParams, Regime, additional_to_standard_ratio,
    as_tau, classify, derive, p_small_v0_l0, quantum_defect_small_v0)


def params_2mv0(x, l=0, m=0.5, g=1.0):
    return PhysicalParams(m=m, V0=x / (2 * m), g=g, l=l)


def test_derive_example():
    d = derive(PhysicalParams(m=0.5, V0=0.09, g=0.5, l=0))
    assert d.P == pytest.approx(0.4, rel=1e-15)
    assert d.omega == pytest.approx(0.7071067811865476, rel=1e-15)
    assert d.defect == pytest.approx(-0.1, rel=1e-14)
    assert d.s == pytest.approx(-0.05, rel=1e-14)
    assert d.kappa_scale == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert d.regime is Regime.SAE_REQUIRED


def test_small_v0_limit():
    d = derive(params_2mv0(1e-12))
    assert d.P < 0.5 and d.P == pytest.approx(0.5, abs=1e-11)
    assert d.defect < 0.0 and d.defect == pytest.approx(-1e-12, rel=1e-10)


def test_fall_to_center():
    with pytest.raises(FallToCenterError, match="fall to the center"):
        derive(PhysicalParams(m=0.5, V0=0.25, g=1.0, l=0))
    assert classify(params_2mv0(0.3)) is Regime.FALL_TO_CENTER


@pytest.mark.parametrize("x, l, regime", [
    (0.05, 0, Regime.SAE_REQUIRED),
    (2.1, 1, Regime.SAE_REQUIRED),
    (0.3, 0, Regime.FALL_TO_CENTER),
    (0.0, 0, Regime.REGULAR),
    (2.0, 1, Regime.REGULAR),       # boundary l(l+1) counts as regular
    (2.25, 1, Regime.FALL_TO_CENTER),
])
def test_classify(x, l, regime):
    assert classify(params_2mv0(x, l=l)) is regime


def test_invalid_params():
    for kw in (dict(m=0.0, V0=0.1, g=1.0), dict(m=1.0, V0=-0.1, g=1.0),
               dict(m=1.0, V0=0.1, g=0.0), dict(m=1.0, V0=0.1, g=1.0, l=1.5)):
        with pytest.raises(ValueError):
            PhysicalParams(**kw)


def test_random_params_invariants():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        l = int(rng.integers(0, 4))
        m = rng.uniform(0.1, 5.0)
        x = rng.uniform(0.0, (l + 0.5) ** 2 * 1.2)
        p = PhysicalParams(m=m, V0=x / (2 * m), g=rng.uniform(0.1, 5.0), l=l)
        reg = classify(p)
        x = p.two_m_v0
        if x >= (l + 0.5) ** 2:
            assert reg is Regime.FALL_TO_CENTER
            continue
        assert reg is (Regime.REGULAR if x <= l * (l + 1) else Regime.SAE_REQUIRED)
        d = derive(p)
        assert d.P > 0.0
        assert (2 * d.s + 0.5) ** 2 == pytest.approx(d.P ** 2, abs=1e-12)
        assert d.P ** 2 == pytest.approx((l + 0.5) ** 2 - x, abs=1e-12)
        if x > 0.0:
            assert d.defect < 0.0


def test_quantum_defect_examples():
    assert quantum_defect_small_v0(params_2mv0(0.01)) == pytest.approx(-0.01)
    assert quantum_defect_small_v0(params_2mv0(0.0)) == 0.0
    p = params_2mv0(0.04)
    assert quantum_defect_small_v0(p) == pytest.approx(-0.04)
    assert derive(p).defect == pytest.approx(math.sqrt(0.21) - 0.5, rel=1e-14)
    assert derive(p).defect == pytest.approx(-0.0417424, abs=1e-7)


def test_quantum_defect_slope():
    v0s = np.array([1e-2, 1e-3, 1e-4])
    errs = [abs(derive(PhysicalParams(m=0.5, V0=v, g=1.0, l=1)).defect
                - quantum_defect_small_v0(PhysicalParams(m=0.5, V0=v, g=1.0, l=1))) for v in v0s]
    slope = np.polyfit(np.log(v0s), np.log(errs), 1)[0]
    assert slope >= 1.9


def test_p_small_v0_examples():
    assert p_small_v0_l0(params_2mv0(0.02)) == pytest.approx(0.48)
    assert p_small_v0_l0(params_2mv0(0.0)) == 0.5
    p = params_2mv0(0.1)
    assert p_small_v0_l0(p) == pytest.approx(0.4)
    assert derive(p).P == pytest.approx(0.387298, abs=1e-6)
    with pytest.raises(DomainError):
        p_small_v0_l0(params_2mv0(2.1, l=1))


def test_from_index():
    d = derive(PhysicalParams.from_index(0.3, l=2, m=2.0, g=8.0))
    assert d.P == pytest.approx(0.3, rel=1e-13)
    assert d.omega == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_extension_parameter():
    assert ExtensionParameter.parse("inf") == ExtensionParameter.parse("-inf") == TAU_INFINITY
    assert ExtensionParameter(-math.inf).is_infinite
    assert ExtensionParameter.parse(" -1.5 ").value == -1.5
    assert ExtensionParameter.parse("−2").value == -2.0
    assert ExtensionParameter(0.0).is_zero and not ExtensionParameter(0.0).is_generic
    assert ExtensionParameter(-1.0).is_generic
    assert hash(ExtensionParameter(2.0)) == hash(as_tau(2.0))
    assert as_tau(TAU_INFINITY) is TAU_INFINITY
    assert str(TAU_INFINITY) == "inf"
    with pytest.raises(ValueError):
        ExtensionParameter(math.nan)
    with pytest.raises(ValueError):
        ExtensionParameter.parse("banana")
    with pytest.raises(AttributeError):
        ExtensionParameter(1.0)._value = 2.0


def test_coefficient_ratio_convention():
    d = derive(PhysicalParams.from_index(0.25, g=4.0))
    assert additional_to_standard_ratio(-1.0, d) == pytest.approx(-d.kappa_scale ** -0.25)
    assert additional_to_standard_ratio("inf", d) == math.inf
    assert additional_to_standard_ratio(0.0, d) == 0.0
