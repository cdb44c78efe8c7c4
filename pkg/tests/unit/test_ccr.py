import random

import pytest

from lorentzian_fft.domain.ccr import (
    CCRElement,
    CCRMorphism,
    ElementParseError,
    IndexOutOfRange,
    NotPoisson,
    ParentMismatch,
    ccr_map,
    commutator,
    multiply,
    normal_form,
    parse_element,
    random_element,
    star,
)
from lorentzian_fft.domain.kleingordon import PoissonSpace
from lorentzian_fft.domain.linalg import RationalMatrix
from lorentzian_fft.domain.scalars import gaussian


@pytest.fixture(scope="module")
def plane() -> PoissonSpace:
    """Symplectic plane with ``tau(q, p) = -1``."""

    return PoissonSpace(
        ("q", "p"), RationalMatrix.from_rows([[0, -1], [1, 0]])
    )


@pytest.fixture(scope="module")
def four(plane: PoissonSpace) -> PoissonSpace:
    rows = [[0] * 4 for _ in range(4)]
    rows[0][2], rows[2][0] = -1, 1
    rows[1][3], rows[3][1] = -1, 1
    return PoissonSpace(
        ("q0", "q1", "p0", "p1"), RationalMatrix.from_rows(rows)
    )


def test_commutator_of_generators_is_scalar(plane: PoissonSpace) -> None:
    q = CCRElement.generator(plane, 0)
    p = CCRElement.generator(plane, 1)

    assert commutator(q, p) == CCRElement.scalar(plane, gaussian(0, -1))
    assert commutator(p, q) == CCRElement.scalar(plane, gaussian(0, 1))
    assert commutator(q, q).is_zero()


def test_products_are_normal_ordered(plane: PoissonSpace) -> None:
    q = CCRElement.generator(plane, 0)
    p = CCRElement.generator(plane, 1)
    product = multiply(q, p)

    assert set(product.terms) == {(1, 0), ()}
    assert product.render() == "(1+0i)*e2.e1 + (0-1i)*1"
    assert product.degree == 2


def test_normal_form_does_not_depend_on_rewrite_order(
    four: PoissonSpace,
) -> None:
    raw = {(0, 1, 2, 3): gaussian(1, 2), (0, 2, 0, 2): gaussian(-1)}
    leftmost = normal_form(four, raw)
    for seed in range(5):
        assert normal_form(four, raw, random.Random(seed)) == leftmost


def test_multiplication_is_associative(four: PoissonSpace) -> None:
    rng = random.Random(11)
    a, b, c = (random_element(four, rng, max_degree=2) for _ in range(3))

    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_star_is_an_anti_involution(four: PoissonSpace) -> None:
    rng = random.Random(5)
    a = random_element(four, rng, max_degree=3)
    b = random_element(four, rng, max_degree=2)

    assert star(star(a)) == a
    assert star(multiply(a, b)) == multiply(star(b), star(a))


def test_parse_element_reads_rendered_output(four: PoissonSpace) -> None:
    element = parse_element(four, "(1+2i)*e3.e1 - 2*e4 + i")

    assert element.terms[(2, 0)] == gaussian(1, 2)
    assert element.terms[(3,)] == gaussian(-2)
    assert element.terms[()] == gaussian(0, 1)
    assert parse_element(four, element.render()) == element


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("2i", gaussian(0, 2)),
        ("-1/2i", gaussian(0, "-1/2")),
        ("(3i)", gaussian(0, 3)),
        ("(1+2i)", gaussian(1, 2)),
        ("-(1-i)", gaussian(-1, 1)),
    ],
)
def test_parse_element_reads_bare_coefficients(
    four: PoissonSpace, text: str, expected: object
) -> None:
    element = parse_element(four, text)

    assert element.terms == {(): expected}
    assert parse_element(four, element.render()) == element


def test_imaginary_coefficient_multiplies_a_word(four: PoissonSpace) -> None:
    element = parse_element(four, "2i*e1 - i*e2")

    assert element.terms[(0,)] == gaussian(0, 2)
    assert element.terms[(1,)] == gaussian(0, -1)


@pytest.mark.parametrize("text", ["(1+2i*e1", "2*x1", "e0"])
def test_parse_element_rejects_bad_literals(
    four: PoissonSpace, text: str
) -> None:
    with pytest.raises(ElementParseError):
        parse_element(four, text)


def test_generator_index_is_checked(plane: PoissonSpace) -> None:
    with pytest.raises(IndexOutOfRange):
        CCRElement.generator(plane, 2)


def test_parents_must_agree(plane: PoissonSpace, four: PoissonSpace) -> None:
    with pytest.raises(ParentMismatch):
        multiply(CCRElement.unit(plane), CCRElement.unit(four))


def test_morphism_requires_poisson_map(plane: PoissonSpace) -> None:
    with pytest.raises(NotPoisson):
        CCRMorphism.from_matrix(
            plane, plane, RationalMatrix.from_rows([[1, 1], [0, 2]])
        )


def test_ccr_map_is_multiplicative(four: PoissonSpace) -> None:
    shear = RationalMatrix.from_rows(
        [[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]]
    )
    f = CCRMorphism.from_matrix(four, four, shear)
    rng = random.Random(3)
    a = random_element(four, rng, max_degree=2)
    b = random_element(four, rng, max_degree=2)

    assert ccr_map(f, multiply(a, b)) == multiply(
        ccr_map(f, a), ccr_map(f, b)
    )
    assert ccr_map(f.then(f.inverse()), a) == a
    assert ccr_map(CCRMorphism.identity(four), b) == b
