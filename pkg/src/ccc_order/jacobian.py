"""Torsion classes of intermediate Jacobians and the order of fibre constant cycle curves.

A torsion class is written ``(1/k)·(γ ⊗ T)`` inside ``(H₁ ⊗ H₁ ⊗ H₁) ⊗ ℚ / ℤ⁸`` with ``γ`` on the first
curve and ``T`` on the product of the other two. Coefficients are indexed by ``4i + 2j + k``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple, Optional, Sequence

import sympy

from ccc_order.cycles import make_diagonal_type_class, pushforward_sum
from ccc_order.elliptic import TorsionPoint, abel_jacobi_vector, d_of_n
from ccc_order.isogeny import (
    H2Tensor,
    HomGroup,
    HomKind,
    IsogenyClass,
    cm_hom_generators,
    kunneth_tensor,
    tensor_content,
)
from ccc_order.lattice import InconsistencyError, IntegerMatrix, content, lattice_from_generators, solve_mod

logger = logging.getLogger(__name__)

BEYOND_PROVEN_RANGE = "model answer, beyond paper's proven range"


class InvalidPairError(ValueError):
    pass


@dataclass(frozen=True)
class TorsionTensorClass:
    k: int
    gamma: tuple[int, int]
    tensor: H2Tensor

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"The denominator must be a positive integer. Got: {self.k}")
        if len(self.gamma) != 2:
            raise ValueError(f"gamma must be an integer 2-vector. Got: {self.gamma!r}")

    @property
    def coefficients(self) -> tuple[int, ...]:
        """The eight coefficients of ``γ ⊗ T``."""
        return tuple(g * c for g in self.gamma for c in self.tensor)

    def normal_form(self) -> tuple[int, ...]:
        return tuple(c % self.k for c in self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.normal_form())


def order_of_tensor_class(c: TorsionTensorClass) -> int:
    return c.k // math.gcd(c.k, content(c.gamma) * tensor_content(c.tensor))


def _congruence_matrix(generators: Sequence[H2Tensor]) -> IntegerMatrix:
    rows = []
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                row = []
                for g in generators:
                    row.extend(g.coefficient(i, j) if k == kk else 0 for kk in (0, 1))
                rows.append(row)
    return IntegerMatrix.from_rows(rows, cols=2 * len(generators))


def solve_tensor_congruence(
    gamma: Sequence[int],
    target: H2Tensor,
    generators: Sequence[H2Tensor],
    modulus: int,
) -> Optional[tuple[int, ...]]:
    """Solve ``γ ⊗ target ≡ Σ_g G_g ⊗ x_g (mod modulus)`` for vectors ``x_g ∈ (ℤ/modulus)²``.

    Each ``G_g`` sits on the first two factors and ``x_g`` on the third. The solution lists
    ``x_g`` generator by generator, e.g. ``(c₀, c₁, d₀, d₁)`` for two generators; it is the
    lexicographically smallest one, or ``None`` when the system is inconsistent.
    """
    if modulus < 1:
        raise ValueError(f"Modulus must be at least 1. Got: {modulus}")
    if len(gamma) != 2:
        raise ValueError(f"gamma must be an integer 2-vector. Got: {gamma!r}")

    rhs = [gamma[i] * target.coefficient(j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]
    if not generators:
        return () if all(value % modulus == 0 for value in rhs) else None

    solution = solve_mod(_congruence_matrix(generators), rhs, modulus)
    logger.debug("Tensor congruence mod %d with %d generators: %s", modulus, len(generators), solution)
    return solution


class PairKind(str, Enum):
    NON_ISOGENOUS = "non-isogenous"
    ISOGENOUS_NO_CM = "no-cm"
    ISOMORPHIC_NO_CM = "isomorphic-no-cm"
    ISOMORPHIC_CM = "isomorphic-cm"
    ISOGENOUS_CM = "cm"


@dataclass(frozen=True)
class CurvePairSpec:
    """The pair ``(E₁, E₂)`` through the data the order depends on.

    ``generators`` are the Hom generators for the ``no-cm`` and ``isomorphic-cm`` kinds, while
    ``cm`` carries ``(m, d)`` for ``E₁ = ℂ/(ℤm ⊕ ℤ√d)`` and ``E₂ = ℂ/(ℤ ⊕ ℤ√d)``.
    """

    kind: PairKind
    generators: tuple[IsogenyClass, ...] = ()
    m: Optional[int] = None
    d: Optional[int] = None

    def __post_init__(self) -> None:
        kind = self.kind
        if kind is PairKind.ISOGENOUS_CM:
            if self.m is None or self.d is None:
                raise InvalidPairError("A CM pair needs both m and d.")
            if self.m < 1 or self.d > -1:
                raise InvalidPairError(f"A CM pair needs m >= 1 and d <= -1. Got: m={self.m}, d={self.d}")
        elif self.m is not None or self.d is not None:
            raise InvalidPairError(f"m and d only apply to CM pairs. Got kind {kind.value!r}")

        expected = {PairKind.ISOGENOUS_NO_CM: 1, PairKind.ISOMORPHIC_CM: 2}.get(kind, 0)
        if len(self.generators) != expected:
            raise InvalidPairError(f"A {kind.value!r} pair takes {expected} generators. Got: {len(self.generators)}")
        for generator in self.generators:
            if generator.det == 0:
                raise InvalidPairError(f"Hom generators must be isogenies. Got singular matrix {generator.matrix}")
        if kind is PairKind.ISOMORPHIC_CM:
            span = lattice_from_generators([g.matrix.entries for g in self.generators])
            if not span.contains(IntegerMatrix.identity(2).entries):
                raise InvalidPairError("The endomorphism generators must span the identity.")

    @classmethod
    def non_isogenous(cls) -> CurvePairSpec:
        return cls(PairKind.NON_ISOGENOUS)

    @classmethod
    def isogenous_no_cm(cls, generator: IsogenyClass) -> CurvePairSpec:
        return cls(PairKind.ISOGENOUS_NO_CM, (generator,))

    @classmethod
    def isomorphic_no_cm(cls) -> CurvePairSpec:
        return cls(PairKind.ISOMORPHIC_NO_CM)

    @classmethod
    def isomorphic_cm(cls, generators: Optional[Sequence[IsogenyClass]] = None) -> CurvePairSpec:
        """Defaults to ``End(E) = ℤ[i]``, generated by ``id`` and ``[[0, 1], [−1, 0]]``."""
        if generators is None:
            generators = (IsogenyClass.from_rows([[1, 0], [0, 1]]), IsogenyClass.from_rows([[0, 1], [-1, 0]]))
        return cls(PairKind.ISOMORPHIC_CM, tuple(generators))

    @classmethod
    def isogenous_cm(cls, m: int, d: int) -> CurvePairSpec:
        return cls(PairKind.ISOGENOUS_CM, m=m, d=d)

    @property
    def is_isomorphic(self) -> bool:
        if self.kind is PairKind.ISOGENOUS_CM:
            # ℤm ⊕ ℤ√d and ℤ ⊕ ℤ√d are homothetic exactly when m = 1
            return self.m == 1
        return self.kind in (PairKind.ISOMORPHIC_NO_CM, PairKind.ISOMORPHIC_CM)

    def hom_group(self) -> HomGroup:
        if self.kind is PairKind.NON_ISOGENOUS:
            return HomGroup((), HomKind.ZERO)
        if self.kind is PairKind.ISOMORPHIC_NO_CM:
            return HomGroup((IsogenyClass.from_rows([[1, 0], [0, 1]]),), HomKind.RANK_ONE)
        if self.kind is PairKind.ISOGENOUS_CM:
            assert self.m is not None and self.d is not None
            return cm_hom_generators(self.m, self.d)
        kind = HomKind.RANK_ONE if len(self.generators) == 1 else HomKind.RANK_TWO
        return HomGroup(self.generators, kind)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.generators:
            data["generators"] = [list(g.matrix.entries) for g in self.generators]
        if self.kind is PairKind.ISOGENOUS_CM:
            data["m"] = self.m
            data["d"] = self.d
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CurvePairSpec:
        generators = tuple(IsogenyClass(IntegerMatrix(2, 2, tuple(g))) for g in data.get("generators", []))
        return cls(PairKind(data["kind"]), generators, data.get("m"), data.get("d"))


class Method(str, Enum):
    RATIONAL_FIBER = "rational-fiber"
    GENERIC_FORMULA = "generic-formula"
    CONGRUENCE_SOLVER = "congruence-solver"


class CertificateEntry(NamedTuple):
    """One membership system: is ``divisor · class`` in the image of the product cycles mod ``modulus``."""

    divisor: int
    modulus: int
    solvable: bool
    solution: Optional[tuple[int, ...]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "divisor": self.divisor,
            "modulus": self.modulus,
            "solvable": self.solvable,
            "solution": list(self.solution) if self.solution is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CertificateEntry:
        solution = data["solution"]
        solution = tuple(solution) if solution is not None else None
        return cls(data["divisor"], data["modulus"], data["solvable"], solution)


@dataclass(frozen=True)
class OrderResult:
    order: int
    method: Method
    n: int
    pair: CurvePairSpec
    certificate: tuple[CertificateEntry, ...] = field(default_factory=tuple)
    note: Optional[str] = None

    @property
    def d_of_n(self) -> int:
        return d_of_n(self.n)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "order": self.order,
            "method": self.method.value,
            "n": self.n,
            "d_of_n": self.d_of_n,
            "pair": self.pair.to_dict(),
            "certificate": [entry.to_dict() for entry in self.certificate],
        }
        if self.note is not None:
            data["note"] = self.note
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> OrderResult:
        return cls(
            order=data["order"],
            method=Method(data["method"]),
            n=data["n"],
            pair=CurvePairSpec.from_dict(data["pair"]),
            certificate=tuple(CertificateEntry.from_dict(entry) for entry in data["certificate"]),
            note=data.get("note"),
        )


def _odd_part(value: int) -> int:
    while value % 2 == 0:
        value //= 2
    return value


def _torsion_point(n: int, t: Optional[TorsionPoint]) -> TorsionPoint:
    if t is None:
        return TorsionPoint.canonical(n)
    if t.order != n:
        raise InvalidPairError(f"The torsion point {t} has order {t.order}, expected {n}")
    return t


def _check_generic_order(t: TorsionPoint, n: int, pair: CurvePairSpec) -> None:
    """Cross-check ``ord = d(n)`` through the tensor class and the pushforward obstruction."""
    expected = d_of_n(n)
    gamma = abel_jacobi_vector(t)
    order = order_of_tensor_class(TorsionTensorClass(expected, gamma, kunneth_tensor(IsogenyClass.identity())))
    if order != expected:
        raise InconsistencyError(f"The Abel–Jacobi class of the fibre has order {order}, expected {expected}")

    diagonal = make_diagonal_type_class(t, IsogenyClass.identity("E2"))
    for p in sympy.primefactors(expected):
        multiple = expected // p
        if pair.kind is PairKind.NON_ISOGENOUS:
            # Hom(E₁, E₂) = 0, so only the empty system is available
            if solve_tensor_congruence(gamma, kunneth_tensor(IsogenyClass.identity()), (), p) is not None:
                raise InconsistencyError(f"{multiple} times the fibre class is decomposable without any isogeny")
            continue
        if p == 2 and n % 4 == 0:
            # 4·(n/4)·t = 0 here; the mod-2 membership system covers the 2-part
            continue
        if pushforward_sum(diagonal.scale(multiple)).e1_part.is_zero():
            raise InconsistencyError(f"The pushforward of {multiple}·Z′_t vanishes for n={n}")


def _lemma_certificate(gamma: tuple[int, int], pair: CurvePairSpec, n: int) -> tuple[CertificateEntry, ...]:
    """The mod-2 system showing the 2-part of ``d(n)`` cannot drop for isomorphic or non-CM pairs."""
    tensors = pair.hom_group().tensors()
    solution = solve_tensor_congruence(gamma, kunneth_tensor(IsogenyClass.identity()), tensors, 2)
    if solution is not None:
        raise InconsistencyError(f"The mod-2 membership system is solvable for {pair.kind.value!r}: {solution}")
    return (CertificateEntry(d_of_n(n) // 2, 2, False, None),)


def closed_form_excluded_order(m: int, d: int) -> int:
    """Order for the CM family at ``n = 4`` and ``t = (1/4, 0)``: 1 iff ``m`` is even and ``d`` odd."""
    if m < 1 or d > -1:
        raise InvalidPairError(f"A CM pair needs m >= 1 and d <= -1. Got: m={m}, d={d}")
    return 1 if m % 2 == 0 and d % 2 != 0 else 2


def excluded_case_order(m: int, d: int, n: int, t: Optional[TorsionPoint] = None) -> OrderResult:
    """Order for ``E₁ = ℂ/(ℤm ⊕ ℤ√d)``, ``E₂ = ℂ/(ℤ ⊕ ℤ√d)`` and ``4 | n`` through the congruence solver alone."""
    if n < 4 or n % 4:
        raise ValueError(f"The solver path needs 4 | n. Got: {n}")
    pair = CurvePairSpec.isogenous_cm(m, d)
    point = _torsion_point(n, t)
    gamma = abel_jacobi_vector(point)
    target = kunneth_tensor(IsogenyClass.identity())
    generators = pair.hom_group().tensors()

    full = d_of_n(n)
    odd = _odd_part(full)
    certificate = []
    order = full
    for divisor in sympy.divisors(full):
        if divisor % odd:
            continue
        modulus = full // divisor
        solution = solve_tensor_congruence(gamma, target, generators, modulus)
        certificate.append(CertificateEntry(divisor, modulus, solution is not None, solution))
        logger.debug("m=%d d=%d n=%d divisor %d: %s", m, d, n, divisor, solution)
        if solution is not None:
            order = divisor
            break

    note = BEYOND_PROVEN_RANGE if n % 8 == 0 else None
    return OrderResult(order, Method.CONGRUENCE_SOLVER, n, pair, tuple(certificate), note)


def decide_order(pair: CurvePairSpec, n: int, t: Optional[TorsionPoint] = None) -> OrderResult:
    """Order of the constant cycle curve ``E_t`` on ``Kum(E₁ × E₂)`` for ``t`` of order ``n``."""
    if n < 1:
        raise ValueError(f"n must be a positive integer. Got: {n}")
    point = _torsion_point(n, t)

    if n <= 2:
        return OrderResult(1, Method.RATIONAL_FIBER, n, pair)

    if pair.kind is PairKind.NON_ISOGENOUS or n % 4:
        _check_generic_order(point, n, pair)
        return OrderResult(d_of_n(n), Method.GENERIC_FORMULA, n, pair)

    if pair.kind is not PairKind.ISOGENOUS_CM or pair.is_isomorphic:
        _check_generic_order(point, n, pair)
        certificate = _lemma_certificate(abel_jacobi_vector(point), pair, n)
        return OrderResult(n // 2, Method.GENERIC_FORMULA, n, pair, certificate)

    assert pair.m is not None and pair.d is not None
    _check_generic_order(point, n, pair)
    result = excluded_case_order(pair.m, pair.d, n, point)
    gamma = abel_jacobi_vector(point)
    if n == 4 and (gamma[0] % 2, gamma[1] % 2) == (1, 0):
        expected = closed_form_excluded_order(pair.m, pair.d)
        if result.order != expected:
            raise InconsistencyError(
                f"Solver order {result.order} disagrees with the closed form {expected} for m={pair.m}, d={pair.d}"
            )
    return result


def realize_order(k: int) -> tuple[CurvePairSpec, int]:
    """A non-isogenous pair and a torsion order ``n`` whose fibre has order exactly ``k``."""
    if k < 1:
        raise ValueError(f"Orders are positive integers. Got: {k}")
    if k == 1:
        return CurvePairSpec.non_isogenous(), 2
    return CurvePairSpec.non_isogenous(), 2 * k


def upper_bounds(n: int) -> tuple[int, int]:
    """The a-priori bound ``ord | n`` and the sharper ``ord | d(n)``."""
    return n, d_of_n(n)
