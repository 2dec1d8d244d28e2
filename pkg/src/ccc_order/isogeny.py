from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Sequence

from ccc_order.elliptic import EllipticCurveLattice
from ccc_order.lattice import IntegerMatrix, content


@dataclass(frozen=True)
class H2Tensor:
    """A class in ``H₁(E₁) ⊗ H₁(E₂)``, coefficients of ``v₀⊗w₀, v₀⊗w₁, v₁⊗w₀, v₁⊗w₁``."""

    c00: int = 0
    c01: int = 0
    c10: int = 0
    c11: int = 0

    @classmethod
    def parse(cls, text: str) -> H2Tensor:
        values = [int(part) for part in text.split(",")]
        if len(values) != 4:
            raise ValueError(f"A tensor needs 4 comma-separated integers. Got: {text!r}")
        return cls(*values)

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return self.c00, self.c01, self.c10, self.c11

    def __iter__(self) -> Iterator[int]:
        return iter(self.coefficients)

    def coefficient(self, i: int, j: int) -> int:
        return self.coefficients[2 * i + j]

    def __add__(self, other: H2Tensor) -> H2Tensor:
        return H2Tensor(*(a + b for a, b in zip(self, other)))

    def __neg__(self) -> H2Tensor:
        return self.scale(-1)

    def __sub__(self, other: H2Tensor) -> H2Tensor:
        return self + (-other)

    def scale(self, k: int) -> H2Tensor:
        return H2Tensor(*(k * c for c in self))

    def is_zero(self) -> bool:
        return not any(self)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self)


@dataclass(frozen=True)
class IsogenyClass:
    """A homomorphism ``H₁(source) → H₁(target)``; row ``i`` of the matrix is ``f(v_i)`` in the target basis."""

    matrix: IntegerMatrix
    source: str = "E1"
    target: str = "E2"

    def __post_init__(self) -> None:
        if self.matrix.shape != (2, 2):
            raise ValueError(f"An isogeny class needs a 2x2 matrix. Got: {self.matrix.shape}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], source: str = "E1", target: str = "E2") -> IsogenyClass:
        return cls(IntegerMatrix.from_rows(rows), source, target)

    @classmethod
    def identity(cls, label: str = "E") -> IsogenyClass:
        return cls(IntegerMatrix.identity(2), label, label)

    @classmethod
    def multiplication(cls, k: int, label: str = "E") -> IsogenyClass:
        return cls(IntegerMatrix.diagonal([k, k]), label, label)

    @property
    def det(self) -> int:
        """Signed determinant, the topological degree."""
        m = self.matrix
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def compose(self, other: IsogenyClass) -> IsogenyClass:
        """``self ∘ other``."""
        if other.target != self.source:
            raise ValueError(f"Cannot compose {self.source}->{self.target} after {other.source}->{other.target}")
        return IsogenyClass(other.matrix @ self.matrix, other.source, self.target)

    def __add__(self, other: IsogenyClass) -> IsogenyClass:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("Isogeny classes must share source and target to be added.")
        return IsogenyClass(self.matrix + other.matrix, self.source, self.target)

    def __neg__(self) -> IsogenyClass:
        return self.scale(-1)

    def scale(self, k: int) -> IsogenyClass:
        return IsogenyClass(self.matrix.scale(k), self.source, self.target)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


class HomKind(str, Enum):
    ZERO = "zero"
    RANK_ONE = "rank-one"
    RANK_TWO = "rank-two"


@dataclass(frozen=True)
class HomGroup:
    generators: tuple[IsogenyClass, ...]
    relation_kind: HomKind

    def __post_init__(self) -> None:
        expected = {HomKind.ZERO: 0, HomKind.RANK_ONE: 1, HomKind.RANK_TWO: 2}[self.relation_kind]
        if len(self.generators) != expected:
            raise ValueError(
                f"A {self.relation_kind.value} Hom group has {expected} generators. Got: {len(self.generators)}"
            )

    def tensors(self) -> tuple[H2Tensor, ...]:
        return tuple(kunneth_tensor(g) for g in self.generators)


class GraphDecomposition(NamedTuple):
    """``[Γ_f] = horizontal·[E₁×e₂] + vertical·[e₁×E₂] + [f]``."""

    horizontal: int
    vertical: int
    hom: IsogenyClass


def cm_hom_generators(m: int, d: int) -> HomGroup:
    """Generators ``φ₁``, ``φ_√d`` of ``Hom(ℂ/(ℤm ⊕ ℤ√d), ℂ/(ℤ ⊕ ℤ√d))``."""
    source = EllipticCurveLattice("E1", cm_data=(m, d))
    target = EllipticCurveLattice("E2", cm_data=(1, d))
    phi_one = IsogenyClass.from_rows([[m, 0], [0, 1]], source.label, target.label)
    phi_sqrt_d = IsogenyClass.from_rows([[0, m], [d, 0]], source.label, target.label)
    return HomGroup((phi_one, phi_sqrt_d), HomKind.RANK_TWO)


def degree(f: IsogenyClass) -> int:
    return abs(f.det)


def trace(f: IsogenyClass) -> int:
    if not f.is_endomorphism:
        raise ValueError(f"Trace is only defined for endomorphisms. Got: {f.source}->{f.target}")
    return f.matrix.trace()


def graph_decomposition(f: IsogenyClass) -> GraphDecomposition:
    if f.is_zero():
        raise ValueError("The zero class has no graph.")
    return GraphDecomposition(1, degree(f), f)


def kunneth_tensor(f: IsogenyClass) -> H2Tensor:
    """The ``(1,1)`` Künneth component ``v₀⊗f(v₁) − v₁⊗f(v₀)`` of the graph of ``f``."""
    m = f.matrix
    return H2Tensor(m[1, 0], m[1, 1], -m[0, 0], -m[0, 1])


def tensor_pairing(first: H2Tensor, second: H2Tensor) -> int:
    """Intersection pairing ``Q(x⊗y, x'⊗y') = −(x·x')(y·y')``, so that ``[id]`` has square ``−2``."""
    form = EllipticCurveLattice.intersection
    return -sum(
        first.coefficient(i, j) * second.coefficient(k, q) * form(i, k) * form(j, q)
        for i in (0, 1)
        for j in (0, 1)
        for k in (0, 1)
        for q in (0, 1)
    )


def tensor_content(tensor: H2Tensor) -> int:
    return content(tensor.coefficients)
