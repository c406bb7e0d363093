"""Exact spider phase labels.

An :class:`Angle` is stored as a rational number ``r`` standing for the angle
``2*pi*r`` reduced into ``[0, 1)``.  The multiples of ``1/3`` form the
stabilizer fragment in which every equality can be decided exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

AngleLike = Union["Angle", Fraction, int, str]

__all__ = ["Angle", "PhasePair", "ZERO", "STABILIZER_ANGLES", "stabilizer_pairs"]


@dataclass(frozen=True, order=True)
class Angle:
    value: Fraction

    def __post_init__(self) -> None:
        v = Fraction(self.value) % 1
        object.__setattr__(self, "value", v)

    @classmethod
    def coerce(cls, x: AngleLike) -> Angle:
        if isinstance(x, Angle):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls(Fraction(x))

    @classmethod
    def parse(cls, text: str) -> Angle:
        """Parse ``"a/b"`` (meaning 2*pi*a/b) or the shorthands ``"0"``, ``"1"``, ``"2"``.

        The shorthand ``"1"`` is 2*pi/3 and ``"2"`` is 4*pi/3.
        """
        s = text.strip()
        if s in ("0", "1", "2"):
            return cls(Fraction(int(s), 3))
        try:
            num, den = s.split("/")
            return cls(Fraction(int(num), int(den)))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"malformed angle {text!r}; expected 'a/b' or 0/1/2") from None

    def __add__(self, other: Angle) -> Angle:
        return Angle(self.value + other.value)

    def __neg__(self) -> Angle:
        return Angle(-self.value)

    def __sub__(self, other: Angle) -> Angle:
        return Angle(self.value - other.value)

    def is_stabilizer(self) -> bool:
        return 3 % self.value.denominator == 0

    def thirds(self) -> int:
        """Return k with angle = 2*pi*k/3; only valid for stabilizer angles."""
        if not self.is_stabilizer():
            raise ValueError(f"{self} is not a multiple of 2*pi/3")
        return int(self.value * 3)

    def radians(self) -> float:
        return 2 * math.pi * float(self.value)

    def phasor(self) -> complex:
        return cmath.exp(1j * self.radians())

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self) -> str:
        return f"Angle({self})"


@dataclass(frozen=True, order=True)
class PhasePair:
    """Phases (alpha, beta) of a spider: weights 1, e^{i alpha}, e^{i beta} on |0>, |1>, |2>."""

    alpha: Angle = Angle(Fraction(0))
    beta: Angle = Angle(Fraction(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", Angle.coerce(self.alpha))
        object.__setattr__(self, "beta", Angle.coerce(self.beta))

    @classmethod
    def of(cls, alpha: AngleLike = 0, beta: AngleLike = 0) -> PhasePair:
        return cls(Angle.coerce(alpha), Angle.coerce(beta))

    @classmethod
    def thirds(cls, a: int, b: int) -> PhasePair:
        """Pair (2*pi*a/3, 2*pi*b/3), i.e. the shorthand labels a and b."""
        return cls(Angle(Fraction(a, 3)), Angle(Fraction(b, 3)))

    def add(self, other: PhasePair) -> PhasePair:
        return PhasePair(self.alpha + other.alpha, self.beta + other.beta)

    __add__ = add

    def negate(self) -> PhasePair:
        return PhasePair(-self.alpha, -self.beta)

    __neg__ = negate

    def __sub__(self, other: PhasePair) -> PhasePair:
        return self.add(other.negate())

    def swap_components(self) -> PhasePair:
        return PhasePair(self.beta, self.alpha)

    def is_zero(self) -> bool:
        return self.alpha.value == 0 and self.beta.value == 0

    def is_stabilizer(self) -> bool:
        return self.alpha.is_stabilizer() and self.beta.is_stabilizer()

    def components(self) -> tuple[Angle, Angle, Angle]:
        """Phase angles on the three levels; level 0 always carries angle 0."""
        return (Angle(Fraction(0)), self.alpha, self.beta)

    def to_json(self) -> list[str]:
        return [str(self.alpha), str(self.beta)]

    @classmethod
    def from_json(cls, data) -> PhasePair:
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ValueError(f"phase must be a two-element list, got {data!r}")
        return cls(Angle.coerce(str(data[0])), Angle.coerce(str(data[1])))

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta})"


ZERO = PhasePair()
STABILIZER_ANGLES = tuple(Angle(Fraction(k, 3)) for k in range(3))


def stabilizer_pairs() -> list[PhasePair]:
    """All nine phase pairs with both components in {0, 2pi/3, 4pi/3}."""
    return [PhasePair(a, b) for a in STABILIZER_ANGLES for b in STABILIZER_ANGLES]
