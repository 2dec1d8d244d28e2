"""Formal one-cycles on a triple product ``E₁ × E₂ × E₃``.

A class is stored through its five graded pieces::

    g022  [E₁] ⊗ β ⊗ θ      β on E₂, θ on E₃
    g112  [g] ⊗ β           g: E₁ → E₂, β on E₃
    g202  α ⊗ [E₂] ⊗ γ      α on E₁, γ on E₃
    g211  α ⊗ [h]           α on E₁, h: E₂ → E₃
    g220  α ⊗ β ⊗ [E₃]      α on E₁, β on E₂

Zero-cycles are kept as ``(degree, Abel–Jacobi point)`` and isogenies by their matrices on ``H₁``.
Each piece is reduced to a canonical form, so equal classes have equal pieces.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple, Union

from ccc_order.elliptic import TorsionPoint, ZeroCycleClass, scaled_difference_class
from ccc_order.isogeny import IsogenyClass, kunneth_tensor, tensor_pairing, trace
from ccc_order.lattice import IntegerMatrix

logger = logging.getLogger(__name__)

#: ``E₁ × E₂ × E₂``, the product carrying the addition map on the last two factors.
DEFAULT_CURVES = ("E1", "E2", "E2")


class CurveMismatchError(ValueError):
    pass


class GradedPiece(str, Enum):
    G022 = "g022"
    G112 = "g112"
    G202 = "g202"
    G211 = "g211"
    G220 = "g220"

    @classmethod
    def parse(cls, label: Union[str, GradedPiece]) -> GradedPiece:
        try:
            return cls(label)
        except ValueError:
            raise ValueError(f"Unknown graded piece {label!r}. Expected one of {[p.value for p in cls]}") from None


class PairTerm(NamedTuple):
    """``first ⊗ second`` for the pieces carrying two zero-cycles and one fundamental class."""

    first: ZeroCycleClass
    second: ZeroCycleClass


class MixedTerm(NamedTuple):
    """A zero-cycle paired with an isogeny class (pieces g112 and g211)."""

    cycle: ZeroCycleClass
    isogeny: IsogenyClass


def _cycle_key(c: ZeroCycleClass) -> tuple[int, tuple[object, ...]]:
    return c.degree, c.aj.coords


def _normal_pairs(terms: Iterable[PairTerm]) -> tuple[PairTerm, ...]:
    """Reduce ``Σ c ⊗ c′`` to ``(D, P)⊗[e] + [e]⊗(0, P′)``.

    Torsion tensored with torsion vanishes, so a pair class is fixed by ``D = Σ deg c·deg c′``,
    ``P = Σ deg c′·aj(c)`` and ``P′ = Σ deg c·aj(c′)``.
    """
    first = ZeroCycleClass.zero()
    second_aj = TorsionPoint.origin()
    for c, c_prime in terms:
        first += ZeroCycleClass(c.degree * c_prime.degree, c.aj.scale(c_prime.degree))
        second_aj += c_prime.aj.scale(c.degree)
    kept: list[PairTerm] = []
    if not first.is_zero():
        kept.append(PairTerm(first, ZeroCycleClass.origin()))
    if second_aj != TorsionPoint.origin():
        kept.append(PairTerm(ZeroCycleClass.origin(), ZeroCycleClass(0, second_aj)))
    return tuple(kept)


def _normal_mixed(terms: Iterable[MixedTerm], source: str, target: str) -> tuple[MixedTerm, ...]:
    """Expand ``Σ c ⊗ [g]`` over the matrix entries, then regroup entries with equal coefficients."""
    coefficients = [ZeroCycleClass.zero()] * 4
    for cycle, isogeny in terms:
        for k, entry in enumerate(isogeny.matrix.entries):
            coefficients[k] += cycle.scale(entry)
    grouped: dict[ZeroCycleClass, list[int]] = {}
    for k, coefficient in enumerate(coefficients):
        if not coefficient.is_zero():
            grouped.setdefault(coefficient, [0, 0, 0, 0])[k] = 1
    kept = [
        MixedTerm(cycle, IsogenyClass(IntegerMatrix(2, 2, tuple(entries)), source, target))
        for cycle, entries in grouped.items()
    ]
    return tuple(sorted(kept, key=lambda term: (_cycle_key(term.cycle), term.isogeny.matrix.entries)))


@dataclass(frozen=True)
class ProductCycleClass:
    curves: tuple[str, str, str] = DEFAULT_CURVES
    g022: tuple[PairTerm, ...] = ()
    g112: tuple[MixedTerm, ...] = ()
    g202: tuple[PairTerm, ...] = ()
    g211: tuple[MixedTerm, ...] = ()
    g220: tuple[PairTerm, ...] = ()

    def __post_init__(self) -> None:
        e1, e2, e3 = self.curves
        object.__setattr__(self, "g022", _normal_pairs(self.g022))
        object.__setattr__(self, "g112", _normal_mixed(self.g112, e1, e2))
        object.__setattr__(self, "g202", _normal_pairs(self.g202))
        object.__setattr__(self, "g211", _normal_mixed(self.g211, e2, e3))
        object.__setattr__(self, "g220", _normal_pairs(self.g220))

    def component(self, piece: Union[str, GradedPiece]) -> tuple[Union[PairTerm, MixedTerm], ...]:
        terms: tuple[Union[PairTerm, MixedTerm], ...] = getattr(self, GradedPiece.parse(piece).value)
        return terms

    def is_zero(self) -> bool:
        return not any(self.component(piece) for piece in GradedPiece)

    def _check_curves(self, other: ProductCycleClass) -> None:
        if self.curves != other.curves:
            raise CurveMismatchError(f"Classes live on different products: {self.curves} and {other.curves}")

    def __add__(self, other: ProductCycleClass) -> ProductCycleClass:
        self._check_curves(other)
        return ProductCycleClass(
            self.curves,
            self.g022 + other.g022,
            self.g112 + other.g112,
            self.g202 + other.g202,
            self.g211 + other.g211,
            self.g220 + other.g220,
        )

    def scale(self, k: int) -> ProductCycleClass:
        """Multiply by ``k``; the zero-cycle factor carries the scalar so torsion classes can vanish."""
        return ProductCycleClass(
            self.curves,
            tuple(PairTerm(t.first.scale(k), t.second) for t in self.g022),
            tuple(MixedTerm(t.cycle.scale(k), t.isogeny) for t in self.g112),
            tuple(PairTerm(t.first.scale(k), t.second) for t in self.g202),
            tuple(MixedTerm(t.cycle.scale(k), t.isogeny) for t in self.g211),
            tuple(PairTerm(t.first.scale(k), t.second) for t in self.g220),
        )

    def __neg__(self) -> ProductCycleClass:
        return self.scale(-1)

    def __sub__(self, other: ProductCycleClass) -> ProductCycleClass:
        return self + (-other)


@dataclass(frozen=True)
class DivisorClass:
    """A class in ``CH¹(E₁ × E₂) ≅ CH¹(E₁) ⊕ CH¹(E₂) ⊕ Hom(E₁, E₂)``.

    ``e1_part`` stands for ``α × [E₂]`` and ``e2_part`` for ``[E₁] × β``.
    """

    e1_part: ZeroCycleClass = ZeroCycleClass.zero()
    e2_part: ZeroCycleClass = ZeroCycleClass.zero()
    hom: IntegerMatrix = field(default_factory=lambda: IntegerMatrix.zeros(2, 2))

    def __add__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.e1_part + other.e1_part, self.e2_part + other.e2_part, self.hom + other.hom)

    def is_zero(self) -> bool:
        return self.e1_part.is_zero() and self.e2_part.is_zero() and self.hom.is_zero()


def make_diagonal_type_class(
    t: TorsionPoint,
    f: IsogenyClass,
    k: int = 2,
    curves: tuple[str, str, str] = DEFAULT_CURVES,
) -> ProductCycleClass:
    """``k([t] − [e₁]) ⊗ [f]``; with ``f = id`` and ``k = 2`` this is the class ``Z′_t``."""
    return ProductCycleClass(curves, g211=(MixedTerm(scaled_difference_class(k, t), f),))


def graph_class(
    f: IsogenyClass,
    beta: ZeroCycleClass,
    translation: TorsionPoint = TorsionPoint.origin(),
    curves: tuple[str, str, str] = DEFAULT_CURVES,
) -> ProductCycleClass:
    """``[Γ_{f⊕y}] ⊗ β`` expanded as ``([E₁×y] + deg(f)[e₁×E₂] + [f]) ⊗ β``."""
    return ProductCycleClass(
        curves,
        g022=(PairTerm(ZeroCycleClass.point(translation), beta),),
        g112=(MixedTerm(beta, f),),
        g202=(PairTerm(ZeroCycleClass.origin().scale(f.det), beta),),
    )


def cycle_times_graph(
    alpha: ZeroCycleClass,
    h: IsogenyClass,
    translation: TorsionPoint = TorsionPoint.origin(),
    curves: tuple[str, str, str] = DEFAULT_CURVES,
) -> ProductCycleClass:
    """``α ⊗ [Γ_{h⊕y}]`` expanded as ``α ⊗ ([E₂×y] + deg(h)[e₂×E₃] + [h])``."""
    return ProductCycleClass(
        curves,
        g202=(PairTerm(alpha, ZeroCycleClass.point(translation)),),
        g211=(MixedTerm(alpha, h),),
        g220=(PairTerm(alpha.scale(h.det), ZeroCycleClass.origin()),),
    )


def pushforward_sum(z: ProductCycleClass) -> DivisorClass:
    """Pushforward along ``id × Σ: E₁ × E₂ × E₂ → E₁ × E₂``, with ``Σ`` the addition map."""
    _, e2, e3 = z.curves
    if e2 != e3:
        raise CurveMismatchError(f"The addition map needs equal second and third factors. Got: {e2} and {e3}")

    result = DivisorClass()
    for beta, theta in z.g022:
        result += DivisorClass(e2_part=beta.convolve(theta))
    for beta, g in z.g112:
        result += DivisorClass(hom=g.matrix.scale(beta.degree))
    for alpha, gamma in z.g202:
        result += DivisorClass(e1_part=alpha.scale(gamma.degree))
    for alpha, h in z.g211:
        result += DivisorClass(e1_part=alpha.scale(trace(h)))
    for alpha, beta in z.g220:
        result += DivisorClass(e1_part=alpha.scale(beta.degree))
    logger.debug("Pushforward along the addition map: %s", result)
    return result


def correspondence_action(z: ProductCycleClass, correspondence: IsogenyClass) -> ZeroCycleClass:
    """Action of a ``g211`` class ``α ⊗ [g]`` on ``[T]``: ``Q([g], [T]) · α``."""
    if any(z.component(piece) for piece in GradedPiece if piece is not GradedPiece.G211):
        raise ValueError("The correspondence action is only defined on the g211 piece.")
    target = kunneth_tensor(correspondence)
    result = ZeroCycleClass.zero()
    for alpha, g in z.g211:
        result += alpha.scale(tensor_pairing(kunneth_tensor(g), target))
    return result


def project_to_graded(z: ProductCycleClass, piece: Union[str, GradedPiece]) -> ProductCycleClass:
    label = GradedPiece.parse(piece).value
    return ProductCycleClass(z.curves, **{label: getattr(z, label)})


def is_homologically_trivial_slice(z: ProductCycleClass, piece: Union[str, GradedPiece]) -> bool:
    """Whether ``z`` lies in the homologically trivial part of ``g112`` or ``g211``."""
    selected = GradedPiece.parse(piece)
    if selected not in (GradedPiece.G112, GradedPiece.G211):
        raise ValueError(f"Only g112 and g211 have a homologically trivial slice. Got: {selected.value}")
    if any(z.component(other) for other in GradedPiece if other is not selected):
        return False
    return all(term.cycle.is_homologically_trivial for term in getattr(z, selected.value))
