from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

Coordinate = Union[int, Fraction, str]


class DegreeNotZeroError(ValueError):
    pass


def d_of_n(n: int) -> int:
    """The generic order of the fibre over an ``n``-torsion point: ``n/2`` for even ``n``, ``n`` otherwise."""
    if n < 1:
        raise ValueError(f"n must be a positive integer. Got: {n}")
    return n // 2 if n % 2 == 0 else n


def _mod_one(x: Coordinate) -> Fraction:
    value = Fraction(x)
    return value - math.floor(value)


def torsion_point_order(coords: Sequence[Coordinate]) -> int:
    """Order of a point of ``(ℚ/ℤ)²``: the lcm of the reduced denominators."""
    return math.lcm(*(_mod_one(x).denominator for x in coords))


@dataclass(frozen=True)
class EllipticCurveLattice:
    """An elliptic curve seen through ``H₁(E, ℤ) = ℤv₀ ⊕ ℤv₁`` with ``(v₀·v₁) = 1``.

    ``cm_data = (m, d)`` records the period lattice ``ℤm ⊕ ℤ√d``.
    """

    label: str
    basis_names: tuple[str, str] = ("v0", "v1")
    cm_data: Optional[tuple[int, int]] = None

    def __post_init__(self) -> None:
        if self.cm_data is not None:
            m, d = self.cm_data
            if m < 1 or d > -1:
                raise ValueError(f"CM data needs m >= 1 and d <= -1. Got: m={m}, d={d}")

    @staticmethod
    def intersection(i: int, j: int) -> int:
        """The symplectic form on the basis: ``v₀·v₁ = 1 = −v₁·v₀``."""
        return (0, 1, -1, 0)[2 * i + j]


@dataclass(frozen=True)
class TorsionPoint:
    """A torsion point ``a·ω₀ + b·ω₁`` with ``(a, b) ∈ (ℚ/ℤ)²``, kept reduced into ``[0, 1)``."""

    coords: tuple[Fraction, Fraction]

    def __post_init__(self) -> None:
        if len(self.coords) != 2:
            raise ValueError(f"A torsion point needs two coordinates. Got: {self.coords!r}")
        object.__setattr__(self, "coords", (_mod_one(self.coords[0]), _mod_one(self.coords[1])))

    @classmethod
    def origin(cls) -> TorsionPoint:
        return cls((Fraction(0), Fraction(0)))

    @classmethod
    def canonical(cls, n: int) -> TorsionPoint:
        """The default point ``(1/n, 0)`` of order ``n``."""
        if n < 1:
            raise ValueError(f"n must be a positive integer. Got: {n}")
        return cls((Fraction(1, n), Fraction(0)))

    @classmethod
    def from_numerators(cls, a: int, b: int, n: int) -> TorsionPoint:
        return cls((Fraction(a, n), Fraction(b, n)))

    @classmethod
    def parse(cls, text: str) -> TorsionPoint:
        """Parse ``"a/n,b/n"``."""
        try:
            first, second = (Fraction(part.strip()) for part in text.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Torsion point must look like 'a/n,b/n'. Got: {text!r}") from exc
        return cls((first, second))

    @property
    def order(self) -> int:
        return torsion_point_order(self.coords)

    def __add__(self, other: TorsionPoint) -> TorsionPoint:
        return TorsionPoint((self.coords[0] + other.coords[0], self.coords[1] + other.coords[1]))

    def __neg__(self) -> TorsionPoint:
        return TorsionPoint((-self.coords[0], -self.coords[1]))

    def scale(self, k: int) -> TorsionPoint:
        return TorsionPoint((k * self.coords[0], k * self.coords[1]))

    def __str__(self) -> str:
        return f"{self.coords[0]},{self.coords[1]}"


@dataclass(frozen=True)
class ZeroCycleClass:
    """A class in ``CH¹(E) ≅ ℤ ⊕ E``: its degree and the Abel–Jacobi point of ``c − deg(c)[e]``."""

    degree: int = 0
    aj: TorsionPoint = TorsionPoint.origin()

    @classmethod
    def point(cls, p: TorsionPoint) -> ZeroCycleClass:
        return cls(1, p)

    @classmethod
    def origin(cls) -> ZeroCycleClass:
        return cls(1, TorsionPoint.origin())

    @classmethod
    def zero(cls) -> ZeroCycleClass:
        return cls()

    def __add__(self, other: ZeroCycleClass) -> ZeroCycleClass:
        return ZeroCycleClass(self.degree + other.degree, self.aj + other.aj)

    def __neg__(self) -> ZeroCycleClass:
        return ZeroCycleClass(-self.degree, -self.aj)

    def __sub__(self, other: ZeroCycleClass) -> ZeroCycleClass:
        return self + (-other)

    def scale(self, k: int) -> ZeroCycleClass:
        return ZeroCycleClass(k * self.degree, self.aj.scale(k))

    def convolve(self, other: ZeroCycleClass) -> ZeroCycleClass:
        """Pushforward of ``self × other`` under the addition map: degrees multiply, points add."""
        return ZeroCycleClass(self.degree * other.degree, self.aj.scale(other.degree) + other.aj.scale(self.degree))

    def is_zero(self) -> bool:
        return self.degree == 0 and self.aj == TorsionPoint.origin()

    @property
    def is_homologically_trivial(self) -> bool:
        return self.degree == 0

    def __str__(self) -> str:
        return f"({self.degree}; {self.aj})"


def scaled_difference_class(k: int, t: TorsionPoint) -> ZeroCycleClass:
    """The class ``k([t] − [e])``."""
    return ZeroCycleClass(0, t.scale(k))


def class_order(c: ZeroCycleClass) -> int:
    """Order of a degree-zero class, i.e. of its Abel–Jacobi point in ``(ℚ/ℤ)²``."""
    if c.degree:
        raise DegreeNotZeroError(f"Only degree-zero classes have finite order. Got degree {c.degree}")
    return c.aj.order


def abel_jacobi_vector(t: TorsionPoint) -> tuple[int, int]:
    """The primitive vector ``γ_t ∈ H₁(E, ℤ)`` proportional to ``(a, b)`` for ``t = (a/n, b/n)``."""
    n = t.order
    a, b = (int(x * n) for x in t.coords)
    g = math.gcd(a, b)
    if g == 0:
        return 0, 0
    return a // g, b // g
