from fractions import Fraction

import pytest

from lorentzian_fft.domain.linalg import (
    RationalMatrix,
    ShapeMismatch,
    SingularMatrix,
)
from lorentzian_fft.domain.scalars import (
    RationalParseError,
    conjugate,
    gaussian,
    parse_rational,
    render_gaussian,
    render_rational,
    to_rational,
)


@pytest.mark.parametrize(
    ("text", "expected"),
    [("3", "3"), ("-2/4", "-1/2"), (" 6 / 3 ", "2"), ("0/5", "0")],
)
def test_parse_rational_normalises(text: str, expected: str) -> None:
    assert render_rational(parse_rational(text)) == expected


@pytest.mark.parametrize("text", ["", "1.5", "1/0", "a/b", "1//2"])
def test_parse_rational_rejects_malformed(text: str) -> None:
    with pytest.raises(RationalParseError):
        parse_rational(text)


def test_to_rational_accepts_fractions_and_rejects_booleans() -> None:
    assert to_rational(Fraction(3, 6)) == parse_rational("1/2")
    assert to_rational(4) == parse_rational("4")
    with pytest.raises(RationalParseError):
        to_rational(True)
    with pytest.raises(RationalParseError):
        to_rational(0.5)


def test_gaussian_rendering_and_conjugation() -> None:
    z = gaussian("1/2", -3)
    assert render_gaussian(z) == "(1/2-3i)"
    assert render_gaussian(conjugate(z)) == "(1/2+3i)"


def test_matrix_inverse_is_exact() -> None:
    matrix = RationalMatrix.from_rows([[2, 1], [1, 1]])
    inverse = matrix.inverse()

    assert inverse.render() == [["1", "-1"], ["-1", "2"]]
    assert matrix @ inverse == RationalMatrix.identity(2)


def test_singular_matrix_has_no_inverse() -> None:
    matrix = RationalMatrix.from_rows([[1, 2], [2, 4]])

    assert matrix.rank() == 1
    assert not matrix.is_invertible()
    with pytest.raises(SingularMatrix):
        matrix.inverse()


def test_non_square_matrix_is_not_invertible() -> None:
    assert not RationalMatrix.zeros(2, 3).is_invertible()


def test_shape_mismatch_on_ragged_rows() -> None:
    with pytest.raises(ShapeMismatch):
        RationalMatrix([[1, 2], [3]], (2, 2))
    with pytest.raises(ShapeMismatch):
        RationalMatrix.identity(2) @ RationalMatrix.zeros(3, 1)


def test_permutation_moves_basis_vectors() -> None:
    matrix = RationalMatrix.permutation([2, 0, 1])

    assert matrix.column(0) == (0, 0, 1)
    assert matrix.apply([1, 2, 3]) == (2, 3, 1)
