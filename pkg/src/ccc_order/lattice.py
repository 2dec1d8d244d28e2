from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import sympy
from sympy.matrices.normalforms import hermite_normal_form as sympy_hermite_normal_form

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
IndexValue = Union[int, float]

#: Returned by ``sublattice_index`` when the sublattice has smaller rank.
INFINITE_INDEX = math.inf


class DimensionMismatchError(ValueError):
    pass


class NotASublatticeError(ValueError):
    pass


class MissingGramError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class IntegerMatrix:
    """A dense integer matrix stored in row-major order.

    Entries are Python integers, so every product and elimination step is exact.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Matrix dimensions must be non-negative. Got: {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                f"A {self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries. Got: {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> IntegerMatrix:
        """Build a matrix from a list of rows.

        ``cols`` is only needed for matrices without rows.
        """
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(row) != width for row in rows):
            raise DimensionMismatchError("All rows must have the same length.")
        return cls(len(rows), width, tuple(e for row in rows for e in row))

    @classmethod
    def identity(cls, size: int) -> IntegerMatrix:
        return cls(size, size, tuple(int(i == j) for i in range(size) for j in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> IntegerMatrix:
        size = len(values)
        return cls(size, size, tuple(values[i] if i == j else 0 for i in range(size) for j in range(size)))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows([list(self.column(j)) for j in range(self.cols)], cols=self.rows)

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Return ``self · vector`` for a column vector."""
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"Cannot apply a {self.rows}x{self.cols} matrix to {len(vector)} entries")
        return tuple(sum(a * b for a, b in zip(self.row(i), vector)) for i in range(self.rows))

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = [other.column(j) for j in range(other.cols)]
        return IntegerMatrix(
            self.rows,
            other.cols,
            tuple(sum(a * b for a, b in zip(self.row(i), col)) for i in range(self.rows) for col in columns),
        )

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Cannot add {self.shape} and {other.shape}")
        return IntegerMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntegerMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        return self + (-other)

    def scale(self, k: int) -> IntegerMatrix:
        return IntegerMatrix(self.rows, self.cols, tuple(k * e for e in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def trace(self) -> int:
        return sum(self[i, i] for i in range(min(self.rows, self.cols)))


@dataclass(frozen=True)
class SnfDecomposition:
    """``U · M · V = S`` with ``U``, ``V`` unimodular and ``S`` in Smith normal form."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def elementary_divisors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d)

    @property
    def rank(self) -> int:
        return len(self.elementary_divisors)


def smith_normal_form(matrix: IntegerMatrix) -> SnfDecomposition:
    """Compute the Smith normal form of an integer matrix with its transformation matrices.

    The pivot is always the entry of smallest nonzero absolute value in the remaining block,
    ties broken by the lowest (row, column) index, so ``U`` and ``V`` are reproducible.
    """
    rows, cols = matrix.shape
    a = matrix.to_rows()
    u = IntegerMatrix.identity(rows).to_rows()
    v = IntegerMatrix.identity(cols).to_rows()
    steps = 0

    def add_row(target: int, source: int, k: int) -> None:
        a[target] = [x + k * y for x, y in zip(a[target], a[source])]
        u[target] = [x + k * y for x, y in zip(u[target], u[source])]

    def add_col(target: int, source: int, k: int) -> None:
        for line in a:
            line[target] += k * line[source]
        for line in v:
            line[target] += k * line[source]

    for t in range(min(rows, cols)):
        while True:
            steps += 1
            candidates = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not candidates:
                break
            _, pi, pj = min(candidates)
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
            for line in a:
                line[t], line[pj] = line[pj], line[t]
            for line in v:
                line[t], line[pj] = line[pj], line[t]

            pivot = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // pivot))
                    clean = clean and not a[i][t]
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // pivot))
                    clean = clean and not a[t][j]
            if not clean:
                continue

            # The pivot must divide the whole remaining block
            offender = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % pivot),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)

        if t < rows and t < cols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    logger.debug("SNF of a %dx%d matrix in %d pivot steps", rows, cols, steps)
    return SnfDecomposition(
        U=IntegerMatrix.from_rows(u, cols=rows),
        S=IntegerMatrix.from_rows(a, cols=cols),
        V=IntegerMatrix.from_rows(v, cols=cols),
    )


def hermite_normal_form(matrix: IntegerMatrix) -> IntegerMatrix:
    """Row-style Hermite normal form of the row lattice of ``matrix``.

    Zero rows are dropped. Pivots are positive, move strictly to the right, and the entries
    above each pivot are reduced into ``[0, pivot)``.
    """
    nrows, ncols = matrix.shape
    if not any(matrix.entries):
        return IntegerMatrix(0, ncols, ())

    # sympy works on columns with pivots in the bottom-right corner: mirror the columns going in,
    # then mirror the columns and the row order coming out.
    mirrored = sympy.Matrix([row[::-1] for row in matrix.to_rows()])
    reduced = sympy_hermite_normal_form(mirrored.T).T
    rows = [[int(x) for x in reduced.row(i)][::-1] for i in reversed(range(reduced.rows))]
    logger.debug("HNF of a %dx%d matrix has rank %d", nrows, ncols, len(rows))
    return IntegerMatrix.from_rows(rows, cols=ncols)


def content(vector: Iterable[int]) -> int:
    """The gcd of the entries, 0 for the zero vector."""
    return math.gcd(*(int(x) for x in vector))


def is_primitive(vector: Sequence[int]) -> bool:
    return content(vector) == 1


def determinant(matrix: IntegerMatrix) -> int:
    if not matrix.is_square:
        raise DimensionMismatchError(f"Determinant needs a square matrix. Got: {matrix.rows}x{matrix.cols}")
    if matrix.rows == 0:
        return 1
    return int(sympy.Matrix(matrix.to_rows()).det(method="bareiss"))


def _to_sympy(rows: Sequence[Sequence[Rational]]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows])


def rational_rank(rows: Sequence[Sequence[Rational]]) -> int:
    if not rows:
        return 0
    return int(_to_sympy(rows).rank())


def solve_mod(matrix: IntegerMatrix, rhs: Sequence[int], modulus: int) -> Optional[tuple[int, ...]]:
    """Solve ``matrix · x ≡ rhs (mod modulus)``.

    Returns the lexicographically smallest solution in ``[0, modulus)^cols``, or ``None`` when the
    system has no solution. Solvability is read off the Smith normal form of ``matrix`` over ℤ.
    """
    if modulus < 1:
        raise ValueError(f"Modulus must be at least 1. Got: {modulus}")
    if len(rhs) != matrix.rows:
        raise DimensionMismatchError(f"Right-hand side has length {len(rhs)}, expected {matrix.rows}")

    snf = smith_normal_form(matrix)
    transformed = snf.U.apply(rhs)
    rank_bound = min(matrix.rows, matrix.cols)

    # Diagonal system S·y ≡ U·rhs
    y = [0] * matrix.cols
    for i, c in enumerate(transformed):
        s = snf.S[i, i] if i < rank_bound else 0
        g = math.gcd(s, modulus)
        if c % g:
            logger.debug("No solution mod %d: row %d needs %d | %d", modulus, i, g, c)
            return None
        if i < matrix.cols and s:
            reduced = modulus // g
            y[i] = (c // g) * pow(s // g, -1, reduced) % reduced if reduced > 1 else 0

    particular = snf.V.apply(y)

    # Solutions form particular + L with L = {x : matrix·x ≡ 0}, a full-rank lattice
    kernel_rows = []
    for j in range(matrix.cols):
        s = snf.S[j, j] if j < rank_bound else 0
        step = modulus // math.gcd(s, modulus)
        kernel_rows.append([step * x for x in snf.V.column(j)])
    hnf = hermite_normal_form(IntegerMatrix.from_rows(kernel_rows, cols=matrix.cols))

    x = list(particular)
    for i in range(hnf.rows):
        pivot = hnf[i, i]
        q = x[i] // pivot
        if q:
            x = [a - q * b for a, b in zip(x, hnf.row(i))]
    return tuple(x)


@dataclass(frozen=True)
class IntegerLattice:
    """A free abelian group given by a basis of rational vectors, with an optional Gram matrix."""

    basis: tuple[tuple[Fraction, ...], ...]
    gram: Optional[IntegerMatrix] = None

    def __post_init__(self) -> None:
        basis = tuple(tuple(Fraction(x) for x in vector) for vector in self.basis)
        if len({len(vector) for vector in basis}) > 1:
            raise DimensionMismatchError("Basis vectors must live in the same ambient space.")
        if rational_rank(basis) != len(basis):
            raise ValueError("Basis vectors must be linearly independent over the rationals.")
        if self.gram is not None:
            if self.gram.shape != (len(basis), len(basis)):
                raise DimensionMismatchError(f"Gram matrix must be {len(basis)}x{len(basis)}. Got: {self.gram.shape}")
            if self.gram != self.gram.transpose():
                raise ValueError("Gram matrix must be symmetric.")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_form(cls, basis: Sequence[Sequence[Rational]], form: IntegerMatrix) -> IntegerLattice:
        """Build a lattice whose Gram matrix is induced by an ambient bilinear form."""
        vectors = [tuple(Fraction(x) for x in vector) for vector in basis]
        if any(len(vector) != form.rows for vector in vectors) or not form.is_square:
            raise DimensionMismatchError(f"Basis vectors must have length {form.rows}")
        gram_rows = []
        for x in vectors:
            fx = [sum(x[k] * form[k, j] for k in range(form.rows)) for j in range(form.cols)]
            values = [sum(a * b for a, b in zip(fx, y)) for y in vectors]
            if any(value.denominator != 1 for value in values):
                raise ValueError("The induced Gram matrix is not integral.")
            gram_rows.append([int(value) for value in values])
        return cls(tuple(vectors), IntegerMatrix.from_rows(gram_rows, cols=len(vectors)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def coordinates(self, vector: Sequence[Rational]) -> Optional[tuple[Fraction, ...]]:
        """Coordinates of ``vector`` in the basis, or ``None`` outside the rational span."""
        if len(vector) != self.dimension:
            raise DimensionMismatchError(f"Vector has length {len(vector)}, expected {self.dimension}")
        if not self.basis:
            return () if not any(vector) else None
        system = _to_sympy(self.basis).T
        try:
            solution, params = system.gauss_jordan_solve(_to_sympy([[x] for x in vector]))
        except ValueError:
            return None
        if params.shape[0]:  # pragma: nocover
            raise ValueError("Basis vectors are not independent.")
        return tuple(Fraction(int(c.p), int(c.q)) for c in solution)

    def contains(self, vector: Sequence[Rational]) -> bool:
        coords = self.coordinates(vector)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Pair two vectors given by their coordinates in the basis."""
        if self.gram is None:
            raise MissingGramError("The lattice has no Gram matrix.")
        gx = [sum(x[i] * self.gram[i, j] for i in range(self.rank)) for j in range(self.rank)]
        return sum(a * b for a, b in zip(gx, y))


def lattice_from_generators(
    generators: Sequence[Sequence[Rational]],
    form: Optional[IntegerMatrix] = None,
) -> IntegerLattice:
    """A basis of the ℤ-span of ``generators`` (through the HNF), with the Gram matrix of ``form``."""
    vectors = [[Fraction(x) for x in vector] for vector in generators]
    if not vectors:
        raise ValueError("At least one generator must be given.")
    denominator = math.lcm(*(x.denominator for vector in vectors for x in vector))
    scaled = IntegerMatrix.from_rows([[int(x * denominator) for x in vector] for vector in vectors])
    hnf = hermite_normal_form(scaled)
    basis = [tuple(Fraction(e, denominator) for e in hnf.row(i)) for i in range(hnf.rows)]
    if form is not None:
        return IntegerLattice.from_form(basis, form)
    return IntegerLattice(tuple(basis))


def sublattice_index(lattice: IntegerLattice, sublattice: IntegerLattice) -> IndexValue:
    """The index ``[lattice : sublattice]``, or ``INFINITE_INDEX`` when the ranks differ."""
    if lattice.dimension != sublattice.dimension:
        raise DimensionMismatchError(
            f"Lattices live in different ambient spaces ({lattice.dimension} and {sublattice.dimension})"
        )
    change_of_basis = []
    for vector in sublattice.basis:
        coords = lattice.coordinates(vector)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise NotASublatticeError(f"Vector {[str(x) for x in vector]} is not in the lattice.")
        change_of_basis.append([int(c) for c in coords])
    if sublattice.rank < lattice.rank:
        return INFINITE_INDEX
    divisors = smith_normal_form(IntegerMatrix.from_rows(change_of_basis)).diagonal
    return math.prod(divisors)


def gram_determinant(lattice: IntegerLattice) -> int:
    if lattice.gram is None:
        raise MissingGramError("The lattice has no Gram matrix.")
    return determinant(lattice.gram)
