import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from ccc_order.lattice import (
    INFINITE_INDEX,
    DimensionMismatchError,
    IntegerLattice,
    IntegerMatrix,
    MissingGramError,
    NotASublatticeError,
    content,
    determinant,
    gram_determinant,
    hermite_normal_form,
    is_primitive,
    lattice_from_generators,
    rational_rank,
    smith_normal_form,
    solve_mod,
    sublattice_index,
)
from tests.settings import EXHAUSTIVE_SETTINGS, ORACLE_SETTINGS, QUICK_SETTINGS, STANDARD_SETTINGS


@st.composite
def matrices(draw, max_size=8, bound=50):
    rows = draw(st.integers(1, max_size))
    cols = draw(st.integers(1, max_size))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=rows * cols, max_size=rows * cols))
    return IntegerMatrix(rows, cols, tuple(entries))


@st.composite
def nonsingular_matrices(draw, size=3, bound=6):
    entries = draw(st.lists(st.integers(-bound, bound), min_size=size * size, max_size=size * size))
    matrix = IntegerMatrix(size, size, tuple(entries))
    assume(determinant(matrix) != 0)
    return matrix


def brute_force_solve(matrix, rhs, modulus):
    for x in itertools.product(range(modulus), repeat=matrix.cols):
        if all((a - b) % modulus == 0 for a, b in zip(matrix.apply(x), rhs)):
            return x
    return None


def test_matrix_construction():
    m = IntegerMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3)
    assert m[1, 2] == 6
    assert m.row(0) == (1, 2, 3)
    assert m.column(1) == (2, 5)
    assert m.transpose().shape == (3, 2)
    assert m.apply([1, 0, -1]) == (-2, -2)
    assert IntegerMatrix.identity(2) @ m == m
    assert (m - m).is_zero()


def test_matrix_validation():
    with pytest.raises(DimensionMismatchError, match="needs 4 entries"):
        IntegerMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatchError, match="same length"):
        IntegerMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionMismatchError):
        IntegerMatrix.identity(2) @ IntegerMatrix.identity(3)


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0], [0, 1]], (1, 1)),
        ([[2, 0], [0, 4]], (2, 4)),
        ([[2, 4], [6, 8]], (2, 4)),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
        ([[0, 0], [0, 0]], (0, 0)),
        ([[6, 4, 10]], (2,)),
    ],
)
def test_smith_normal_form_examples(rows, expected):
    matrix = IntegerMatrix.from_rows(rows)
    snf = smith_normal_form(matrix)
    assert snf.diagonal == expected
    assert snf.U @ matrix @ snf.V == snf.S


def test_smith_normal_form_is_deterministic():
    matrix = IntegerMatrix.from_rows([[3, 6, -9], [12, 0, 5]])
    assert smith_normal_form(matrix) == smith_normal_form(matrix)


@given(matrix=matrices())
@EXHAUSTIVE_SETTINGS
def test_smith_normal_form_properties(matrix):
    snf = smith_normal_form(matrix)
    assert snf.U @ matrix @ snf.V == snf.S
    assert abs(determinant(snf.U)) == 1
    assert abs(determinant(snf.V)) == 1

    s = snf.S
    assert all(s[i, j] == 0 for i in range(s.rows) for j in range(s.cols) if i != j)
    assert all(d >= 0 for d in snf.diagonal)
    divisors = snf.diagonal
    for current, following in zip(divisors, divisors[1:]):
        assert (following % current == 0) if current else following == 0


@given(matrix=matrices(max_size=3, bound=9))
@STANDARD_SETTINGS
def test_elementary_divisors_match_determinantal_divisors(matrix):
    divisors = smith_normal_form(matrix).diagonal
    product = 1
    for k in range(1, len(divisors) + 1):
        minors = [
            determinant(IntegerMatrix.from_rows([[matrix[i, j] for j in cols] for i in rows]))
            for rows in itertools.combinations(range(matrix.rows), k)
            for cols in itertools.combinations(range(matrix.cols), k)
        ]
        product *= divisors[k - 1]
        assert product == math.gcd(*minors)


@given(matrix=matrices(max_size=5, bound=20))
@STANDARD_SETTINGS
def test_smith_diagonal_matches_sympy_invariant_factors(matrix):
    expected = [abs(int(x)) for x in invariant_factors(sympy.Matrix(matrix.to_rows())) if x]
    assert list(smith_normal_form(matrix).elementary_divisors) == expected


def test_hermite_normal_form_examples():
    singular = IntegerMatrix.from_rows([[2, 3, 6], [4, 1, 5], [6, 4, 11]])
    assert hermite_normal_form(singular).to_rows() == [[2, 3, 6], [0, 5, 7]]
    assert hermite_normal_form(IntegerMatrix.from_rows([[0, -3], [0, 6]])).to_rows() == [[0, 3]]
    assert hermite_normal_form(IntegerMatrix.zeros(2, 3)).shape == (0, 3)


@given(matrix=matrices(max_size=4, bound=9))
@STANDARD_SETTINGS
def test_hermite_normal_form_spans_the_row_lattice(matrix):
    hnf = hermite_normal_form(matrix)
    snf = smith_normal_form(matrix)
    assert hnf.rows == snf.rank
    pivots = [next(j for j in range(hnf.cols) if hnf[i, j]) for i in range(hnf.rows)]
    assert pivots == sorted(set(pivots))
    for i, p in enumerate(pivots):
        assert hnf[i, p] > 0
        assert all(0 <= hnf[k, p] < hnf[i, p] for k in range(i))
    if not hnf.rows:
        return

    lattice = IntegerLattice(tuple(hnf.to_rows()))
    assert all(lattice.contains(matrix.row(i)) for i in range(matrix.rows))
    # Same rank and the same product of elementary divisors: the containment is an equality
    assert math.prod(smith_normal_form(hnf).elementary_divisors) == math.prod(snf.elementary_divisors)


@given(matrix=nonsingular_matrices())
@STANDARD_SETTINGS
def test_hermite_normal_form_properties(matrix):
    hnf = hermite_normal_form(matrix)
    assert hnf.shape == matrix.shape
    for i in range(hnf.rows):
        assert hnf[i, i] > 0
        assert all(hnf[i, j] == 0 for j in range(i))
        assert all(0 <= hnf[k, i] < hnf[i, i] for k in range(i))
    assert math.prod(hnf[i, i] for i in range(hnf.rows)) == abs(determinant(matrix))

    lattice = IntegerLattice(tuple(hnf.to_rows()))
    assert all(lattice.contains(matrix.row(i)) for i in range(matrix.rows))


@pytest.mark.parametrize(
    "vector, expected",
    [((0, 0, 0), 0), ((2, 4, 6), 2), ((3, 5), 1), ((-4, 6), 2)],
)
def test_content(vector, expected):
    assert content(vector) == expected


def test_primitive():
    assert is_primitive((3, 5))
    assert not is_primitive((0, 0))
    assert not is_primitive((2, 4))


def test_rational_rank():
    assert rational_rank([]) == 0
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[Fraction(1, 2), 0], [0, Fraction(1, 3)]]) == 2


@given(vector=st.lists(st.integers(-1000, 1000), min_size=1, max_size=6), k=st.integers(-50, 50))
@STANDARD_SETTINGS
def test_content_is_homogeneous(vector, k):
    assert content([k * x for x in vector]) == abs(k) * content(vector)


def test_solve_mod_examples():
    assert solve_mod(IntegerMatrix.identity(2), (1, 0), 2) == (1, 0)
    assert solve_mod(IntegerMatrix.from_rows([[2, 0]]), (1,), 4) is None
    assert solve_mod(IntegerMatrix.from_rows([[3]]), (1,), 7) == (5,)
    assert solve_mod(IntegerMatrix.from_rows([[2, 4]]), (2,), 6) == (0, 2)
    assert solve_mod(IntegerMatrix.from_rows([[5, 7], [1, 1]]), (3, 2), 1) == (0, 0)


def test_solve_mod_validation():
    with pytest.raises(ValueError, match="Modulus must be at least 1"):
        solve_mod(IntegerMatrix.identity(2), (0, 0), 0)
    with pytest.raises(DimensionMismatchError):
        solve_mod(IntegerMatrix.identity(2), (0, 0, 0), 3)


@st.composite
def congruence_systems(draw):
    modulus = draw(st.integers(1, 4))
    max_cols = 6 if modulus <= 3 else 5
    rows = draw(st.integers(1, 4))
    cols = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(-6, 6), min_size=rows * cols, max_size=rows * cols))
    matrix = IntegerMatrix(rows, cols, tuple(entries))
    if draw(st.booleans()):
        x = draw(st.lists(st.integers(0, modulus - 1), min_size=cols, max_size=cols))
        rhs = matrix.apply(x)
    else:
        rhs = tuple(draw(st.lists(st.integers(-6, 6), min_size=rows, max_size=rows)))
    return matrix, rhs, modulus


@given(system=congruence_systems())
@ORACLE_SETTINGS
def test_solve_mod_agrees_with_enumeration(system):
    matrix, rhs, modulus = system
    assert solve_mod(matrix, rhs, modulus) == brute_force_solve(matrix, rhs, modulus)


def test_lattice_validation():
    with pytest.raises(ValueError, match="linearly independent"):
        IntegerLattice(((1, 2), (2, 4)))
    with pytest.raises(ValueError, match="symmetric"):
        IntegerLattice(((1, 0), (0, 1)), IntegerMatrix.from_rows([[1, 2], [0, 1]]))
    with pytest.raises(ValueError, match="not integral"):
        IntegerLattice.from_form([(Fraction(1, 2), 0)], IntegerMatrix.identity(2))


def test_lattice_membership():
    lattice = lattice_from_generators([(2, 0), (1, 1)])
    assert lattice.rank == 2
    assert lattice.contains((3, 1))
    assert not lattice.contains((1, 0))
    assert lattice.coordinates((1, 0)) is not None

    line = lattice_from_generators([(Fraction(1, 2), Fraction(1, 2)), (1, 1)])
    assert line.rank == 1
    assert line.coordinates((1, 0)) is None


def test_sublattice_index_examples():
    square = IntegerLattice(((1, 0), (0, 1)))
    assert sublattice_index(square, IntegerLattice(((2, 0), (0, 2)))) == 4
    assert sublattice_index(square, IntegerLattice(((1, 0),))) == INFINITE_INDEX
    with pytest.raises(NotASublatticeError):
        sublattice_index(IntegerLattice(((2, 0), (0, 2))), square)
    with pytest.raises(DimensionMismatchError):
        sublattice_index(square, IntegerLattice(((1, 0, 0),)))


@given(outer=nonsingular_matrices(), inner=nonsingular_matrices())
@QUICK_SETTINGS
def test_sublattice_index_is_multiplicative(outer, inner):
    ambient = IntegerLattice.from_form(IntegerMatrix.identity(3).to_rows(), IntegerMatrix.identity(3))
    middle = IntegerLattice.from_form(outer.to_rows(), IntegerMatrix.identity(3))
    smallest = IntegerLattice.from_form((inner @ outer).to_rows(), IntegerMatrix.identity(3))

    first = sublattice_index(ambient, middle)
    second = sublattice_index(middle, smallest)
    assert first * second == sublattice_index(ambient, smallest)
    assert first == abs(determinant(outer))
    assert abs(gram_determinant(smallest)) == abs(gram_determinant(ambient)) * (first * second) ** 2


def test_gram_determinant():
    assert gram_determinant(IntegerLattice(((1,),), IntegerMatrix.from_rows([[-2]]))) == -2
    roots = IntegerLattice.from_form(IntegerMatrix.identity(16).to_rows(), IntegerMatrix.diagonal([-2] * 16))
    assert gram_determinant(roots) == 65536
    with pytest.raises(MissingGramError):
        gram_determinant(IntegerLattice(((1, 0),)))
