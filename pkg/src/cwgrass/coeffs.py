"""Coefficient models for W(F), I(F) and GW(F).

Two concrete models ship: ``real`` (W = Z, I = 2Z, <-1> = -1) and
``quadratically-closed`` (W = F2, I = 0, <-1> = 1).  Torsion coefficients
are always W/I = Z/2.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ConfigurationError",
    "WittModel",
    "GWElement",
    "RingDescriptor",
    "witt_model",
    "torsion_ring",
    "MODEL_NAMES",
]

MODEL_NAMES = ("real", "quadratically-closed")


class ConfigurationError(ValueError):
    """Unknown or unsupported coefficient model."""


@dataclass(frozen=True)
class RingDescriptor:
    name: str
    characteristic: int
    cardinality: int | None  # None for infinite rings


@dataclass(frozen=True)
class WittModel:
    name: str
    base_ring: str  # "Integers" or "F2"
    fundamental_ideal_generator: int
    sign_unit: int

    @property
    def modulus(self) -> int:
        """Characteristic of the base ring (0 for Z)."""
        return 0 if self.base_ring == "Integers" else 2

    def reduce(self, a: int) -> int:
        """Normalize an integer into the base ring."""
        return a % 2 if self.modulus == 2 else a

    def to_torsion(self, a: int) -> int:
        """The reduction W -> W/I = Z/2."""
        return a % 2

    def in_ideal(self, a: int) -> bool:
        g = self.fundamental_ideal_generator
        a = self.reduce(a)
        if g == 0:
            return a == 0
        return a % g == 0

    def sign_power(self, e: int) -> int:
        """<-1>^e in the base ring."""
        return self.reduce(self.sign_unit ** (e % 2))

    def gw(self, w: int, r: int) -> "GWElement":
        return GWElement(self, w, r)


@dataclass(frozen=True)
class GWElement:
    """An element of GW(F) as a pair (w in W, rank r in Z), w = r mod 2."""

    witt: WittModel
    w: int
    r: int

    def __post_init__(self):
        object.__setattr__(self, "w", self.witt.reduce(self.w))
        if self.witt.to_torsion(self.w) != self.r % 2:
            raise ValueError("GW pair (w, r) violates w = r mod 2")

    def __add__(self, other: "GWElement") -> "GWElement":
        return GWElement(self.witt, self.w + other.w, self.r + other.r)

    def __mul__(self, other: "GWElement") -> "GWElement":
        return GWElement(self.witt, self.w * other.w, self.r * other.r)

    def __neg__(self) -> "GWElement":
        return GWElement(self.witt, -self.w, -self.r)


_MODELS = {
    "real": WittModel("real", "Integers", 2, -1),
    "quadratically-closed": WittModel("quadratically-closed", "F2", 0, 1),
}


def witt_model(name: str) -> WittModel:
    """Look up one of the two shipped Witt models by name."""
    try:
        return _MODELS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown coefficient model {name!r}; expected one of {', '.join(MODEL_NAMES)}"
        ) from None


def torsion_ring(m: WittModel) -> RingDescriptor:
    # W/I is Z/2 for both models
    return RingDescriptor("F2", 2, 2)
