"""
Physical parameters, derived quantities and regime classification for the
singular oscillator V(r) = -V0/r^2 + g r^2 (hbar = 1).

The index

    P = sqrt((l + 1/2)^2 - 2 m V0)

decides everything. P >= 1/2 is the ordinary (regular) case, 0 < P < 1/2 is
the window in which the second, more singular solution r^(-1/2-P) must be
kept and a one-parameter family of boundary conditions (tau) appears, and
P^2 <= 0 is the fall to the center.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, FallToCenterError

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "Regime",
    "ExtensionParameter",
    "TAU_INFINITY",
    "as_tau",
    "classify",
    "derive",
    "additional_to_standard_ratio",
    "quantum_defect_small_v0",
    "p_small_v0_l0",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Mass ``m``, inverse-square strength ``V0``, oscillator coupling ``g``, orbital number ``l``."""

    m: float
    V0: float
    g: float
    l: int = 0

    def __post_init__(self):
        if not (self.m > 0.0):
            raise ValueError(f"mass must be positive, got {self.m!r}")
        if not (self.g > 0.0):
            raise ValueError(f"oscillator coupling g must be positive, got {self.g!r}")
        if not (self.V0 >= 0.0):
            raise ValueError(f"V0 must be non-negative, got {self.V0!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"l must be a non-negative integer, got {self.l!r}")
        object.__setattr__(self, "l", int(self.l))

    @property
    def two_m_v0(self) -> float:
        return 2.0 * self.m * self.V0

    @classmethod
    def from_index(cls, P: float, l: int = 0, m: float = 0.5, g: float = 1.0) -> "PhysicalParams":
        """Pick V0 so that the index takes the value ``P`` (defaults give omega = 1)."""
        two_m_v0 = (l + 0.5) ** 2 - P * P
        return cls(m=m, V0=two_m_v0 / (2.0 * m), g=g, l=l)


class Regime(enum.Enum):
    REGULAR = "Regular"
    SAE_REQUIRED = "SaeRequired"
    FALL_TO_CENTER = "FallToCenter"


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from :class:`PhysicalParams`.

    Attributes
    ----------
    P : float
        Index sqrt((l+1/2)^2 - 2 m V0).
    s : float
        Small-kappa exponent (P - 1/2)/2 of R in the variable kappa.
    omega : float
        sqrt(g / 2m); level spacing of the pure branches is 4 omega.
    kappa_scale : float
        sqrt(2 m g); kappa = kappa_scale * r^2.
    defect : float
        Quantum defect P - (l + 1/2).
    """

    params: PhysicalParams
    P: float
    s: float
    omega: float
    kappa_scale: float
    defect: float
    regime: Regime

    @property
    def m(self) -> float:
        return self.params.m

    @property
    def l(self) -> int:
        return self.params.l


class ExtensionParameter:
    """Projective real: a finite tau or the single point at infinity.

    +inf and -inf are the same point. Instances are immutable and hashable.
    """

    __slots__ = ("_value",)

    def __init__(self, value: float):
        value = float(value)
        if math.isnan(value):
            raise ValueError("tau must not be NaN")
        if math.isinf(value):
            value = math.inf
        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionParameter is immutable")

    @property
    def value(self) -> float:
        return self._value

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self._value)

    @property
    def is_zero(self) -> bool:
        return self._value == 0.0

    @property
    def is_generic(self) -> bool:
        return not (self.is_infinite or self.is_zero)

    @classmethod
    def parse(cls, text: str | float) -> "ExtensionParameter":
        """Accepts numbers and the spellings ``inf``, ``+inf``, ``-inf``, ``infinity``."""
        if isinstance(text, (int, float)):
            return cls(text)
        t = str(text).strip().lower().replace("−", "-")
        if t in ("inf", "+inf", "-inf", "infinity", "+infinity", "-infinity"):
            return cls(math.inf)
        return cls(float(t))

    def __eq__(self, other):
        if isinstance(other, ExtensionParameter):
            return self._value == other._value
        return NotImplemented

    def __hash__(self):
        return hash(("tau", self._value))

    def __repr__(self):
        return "ExtensionParameter(inf)" if self.is_infinite else f"ExtensionParameter({self._value!r})"

    def __str__(self):
        return "inf" if self.is_infinite else repr(self._value)


TAU_INFINITY = ExtensionParameter(math.inf)


def as_tau(tau) -> ExtensionParameter:
    if isinstance(tau, ExtensionParameter):
        return tau
    return ExtensionParameter.parse(tau)


def classify(params: PhysicalParams) -> Regime:
    """Regime from the size of 2 m V0 relative to l(l+1) and (l+1/2)^2.

    The boundary 2 m V0 = l(l+1) (P = 1/2) counts as regular; the boundary
    2 m V0 = (l+1/2)^2 (P = 0) counts as fall to the center.
    """
    l = params.l
    x = params.two_m_v0
    if x >= (l + 0.5) ** 2:
        return Regime.FALL_TO_CENTER
    if x <= l * (l + 1):
        return Regime.REGULAR
    return Regime.SAE_REQUIRED


def derive(params: PhysicalParams) -> DerivedParams:
    regime = classify(params)
    l = params.l
    if regime is Regime.FALL_TO_CENTER:
        raise FallToCenterError(
            f"fall to the center: 2mV0 = {params.two_m_v0!r} >= (l+1/2)^2 = {(l + 0.5) ** 2!r}; "
            "the index P is not a positive real number")
    lh = l + 0.5
    P = math.sqrt(lh * lh - params.two_m_v0)
    # P - (l+1/2) without cancellation for small V0
    defect = -params.two_m_v0 / (P + lh)
    return DerivedParams(
        params=params,
        P=P,
        s=0.5 * (P - 0.5),
        omega=math.sqrt(params.g / (2.0 * params.m)),
        kappa_scale=math.sqrt(2.0 * params.m * params.g),
        defect=defect,
        regime=regime,
    )


def additional_to_standard_ratio(tau, derived: DerivedParams) -> float:
    """a_add / a_st of the small-r expansion R ~ a_st r^(-1/2+P) + a_add r^(-1/2-P).

    tau is defined as the coefficient ratio in the kappa variable, so the
    two differ by (2mg)^(-P/2). Returns ``inf`` at the point at infinity.
    """
    tau = as_tau(tau)
    if tau.is_infinite:
        return math.inf
    return tau.value * derived.kappa_scale ** (-derived.P)


def quantum_defect_small_v0(params: PhysicalParams) -> float:
    """First-order quantum defect -2 m V0 / (2l + 1)."""
    return -params.two_m_v0 / (2 * params.l + 1)


def p_small_v0_l0(params: PhysicalParams) -> float:
    """First-order index (1 - 4 m V0)/2 for l = 0."""
    if params.l != 0:
        raise DomainError("the small-V0 expansion of P is only defined for l = 0")
    return 0.5 * (1.0 - 4.0 * params.m * params.V0)
