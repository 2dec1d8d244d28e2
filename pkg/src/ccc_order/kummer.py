"""The Kummer lattice of a Kummer surface and its pullback to the blown-up abelian surface.

The 16 exceptional curves are indexed by ``F₂⁴`` through the bits of ``0..15``. The glue code is
the first order Reed–Muller code ``RM(1, 4)``.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from ccc_order.lattice import (
    InconsistencyError,
    IntegerLattice,
    IntegerMatrix,
    Rational,
    gram_determinant,
    lattice_from_generators,
    sublattice_index,
)

logger = logging.getLogger(__name__)

LENGTH = 16
EXCEPTIONAL_SQUARE = -2
BLOWUP_SQUARE = -1

Codeword = tuple[int, ...]


@dataclass(frozen=True)
class KummerCode:
    generators: tuple[Codeword, ...]

    def __post_init__(self) -> None:
        if any(len(word) != LENGTH or set(word) - {0, 1} for word in self.generators):
            raise ValueError(f"Codewords must be binary words of length {LENGTH}.")

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def codewords(self) -> tuple[Codeword, ...]:
        words: set[Codeword] = set()
        for coefficients in itertools.product((0, 1), repeat=self.dimension):
            word = [0] * LENGTH
            for c, generator in zip(coefficients, self.generators):
                if c:
                    word = [(a + b) % 2 for a, b in zip(word, generator)]
            words.add(tuple(word))
        return tuple(sorted(words))

    def __contains__(self, word: object) -> bool:
        return word in self.codewords()

    def minimum_weight(self) -> int:
        return min(sum(word) for word in self.codewords() if any(word))


def build_kummer_code() -> KummerCode:
    """``RM(1, 4)``: the all-ones word and the four coordinate hyperplane indicators."""
    ones = (1,) * LENGTH
    bits = tuple(tuple((i >> bit) & 1 for i in range(LENGTH)) for bit in range(4))
    code = KummerCode((ones,) + bits)
    if len(code.codewords()) != 2**code.dimension:
        raise InconsistencyError("The glue code generators are not independent over F₂.")
    return code


def weight_enumerator(code: KummerCode) -> dict[int, int]:
    return dict(sorted(Counter(sum(word) for word in code.codewords()).items()))


def format_weight_enumerator(enumerator: dict[int, int]) -> str:
    """Render as ``1 + 30z^8 + z^16``."""
    terms = []
    for weight, count in enumerator.items():
        if weight == 0:
            terms.append(str(count))
        else:
            terms.append(f"{count if count != 1 else ''}z^{weight}")
    return " + ".join(terms)


def _form(square: int) -> IntegerMatrix:
    return IntegerMatrix.diagonal([square] * LENGTH)


def _unit_vectors() -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(int(i == j)) for j in range(LENGTH)) for i in range(LENGTH)]


@dataclass(frozen=True)
class KummerLattice:
    """``K`` in coordinates of the exceptional classes ``Ē_i``, together with ``⊕ℤĒ_i``."""

    lattice: IntegerLattice
    roots: IntegerLattice
    code: KummerCode

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def discriminant(self) -> int:
        return abs(gram_determinant(self.lattice))

    def is_even(self) -> bool:
        assert self.lattice.gram is not None
        return all(self.lattice.gram[i, i] % 2 == 0 for i in range(self.rank))


def build_kummer_lattice() -> KummerLattice:
    code = build_kummer_code()
    form = _form(EXCEPTIONAL_SQUARE)
    glue = [tuple(Fraction(x, 2) for x in word) for word in code.generators]
    lattice = lattice_from_generators(_unit_vectors() + glue, form)
    roots = IntegerLattice.from_form(_unit_vectors(), form)
    logger.debug("Kummer lattice of rank %d with discriminant %d", lattice.rank, gram_determinant(lattice))
    return KummerLattice(lattice, roots, code)


def pullback(vector: Sequence[Rational]) -> tuple[Fraction, ...]:
    """``π*`` on coordinates: ``Ē_i ↦ 2E_i``."""
    return tuple(2 * Fraction(x) for x in vector)


def pullback_pairing(x: Sequence[Rational], y: Sequence[Rational]) -> Fraction:
    """The blow-up form ``E_i·E_j = −δ_ij`` applied to ``π*x`` and ``π*y``."""
    return sum((BLOWUP_SQUARE * a * b for a, b in zip(pullback(x), pullback(y))), Fraction(0))


def is_glue_preimage(kummer: KummerLattice) -> bool:
    """Whether ``K`` is the part of ``(π*)⁻¹(⊕ℤE_i) = ½⊕ℤĒ_i`` cut out by the glue code."""
    words = set(kummer.code.codewords())
    for vector in kummer.lattice.basis:
        doubled = pullback(vector)
        if any(x.denominator != 1 for x in doubled):
            return False
        if tuple(int(x) % 2 for x in doubled) not in words:
            return False
    return sublattice_index(kummer.lattice, kummer.roots) == len(words)


class PullbackIndices(NamedTuple):
    pullback_index: int
    glue_index: int


def pullback_index_check(kummer: Optional[KummerLattice] = None) -> PullbackIndices:
    """``([⊕ℤE_i : π*K], [K : ⊕ℤĒ_i])``, after checking the pullback against the glue code."""
    if kummer is None:
        kummer = build_kummer_lattice()
    blowup_form = _form(BLOWUP_SQUARE)
    ambient = IntegerLattice.from_form(_unit_vectors(), blowup_form)
    image = IntegerLattice.from_form([pullback(vector) for vector in kummer.lattice.basis], blowup_form)

    basis = kummer.lattice.basis
    for x, y in itertools.combinations_with_replacement(basis, 2):
        expected = 2 * sum((EXCEPTIONAL_SQUARE * a * b for a, b in zip(x, y)), Fraction(0))
        if pullback_pairing(x, y) != expected:
            raise InconsistencyError("The pullback does not double the intersection form.")
    if not is_glue_preimage(kummer):
        raise InconsistencyError("The Kummer lattice is not the preimage of the blow-up lattice.")

    pullback_index = sublattice_index(ambient, image)
    glue_index = sublattice_index(kummer.lattice, kummer.roots)
    return PullbackIndices(int(pullback_index), int(glue_index))
