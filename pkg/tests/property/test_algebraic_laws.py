import random
from typing import Any

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorentzian_fft.domain.ccr import (
    CCRElement,
    commutator,
    multiply,
    random_element,
    star,
)
from lorentzian_fft.domain.engine import RunConfig
from lorentzian_fft.domain.engine.config import build_config
from lorentzian_fft.domain.kleingordon import (
    Field,
    PoissonSpace,
    apply_P,
    causal_propagator,
    green_advanced,
    green_retarded,
)
from lorentzian_fft.domain.lattice import LatticeSpacetime
from lorentzian_fft.domain.linalg import RationalMatrix

pytestmark = pytest.mark.property

MASSES = st.sampled_from(["0", "1/4", "1", "2"])
SMALL = st.integers(min_value=-4, max_value=4)
VECTORS = st.lists(SMALL, min_size=4, max_size=4)
FOUR = PoissonSpace(
    ("q0", "q1", "p0", "p1"),
    RationalMatrix.from_rows(
        [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]
    ),
)


def _interior_field(m: LatticeSpacetime, data: Any) -> Field:
    sites = sorted(m.interior)
    chosen = data.draw(st.lists(st.sampled_from(sites), max_size=5))
    return Field(m, {site: data.draw(SMALL) for site in chosen})


@given(st.data())
def test_green_operators_invert_P_on_the_interior(
    ring_slab: LatticeSpacetime, data: Any
) -> None:
    mass = data.draw(MASSES)
    source = _interior_field(ring_slab, data)

    for green in (green_retarded, green_advanced):
        result = apply_P(ring_slab, green(ring_slab, source, mass), mass)
        assert result.restricted(ring_slab.interior) == source


@given(st.data())
def test_retarded_green_operator_is_linear(
    ring_slab: LatticeSpacetime, data: Any
) -> None:
    mass = data.draw(MASSES)
    f = _interior_field(ring_slab, data)
    g = _interior_field(ring_slab, data)
    k = data.draw(SMALL)

    lhs = green_retarded(ring_slab, f + g.scaled(k), mass)
    rhs = green_retarded(ring_slab, f, mass) + green_retarded(
        ring_slab, g, mass
    ).scaled(k)
    assert lhs == rhs


@given(st.data())
def test_causal_propagator_solves_homogeneous_equation(
    line_slab: LatticeSpacetime, data: Any
) -> None:
    mass = data.draw(MASSES)
    source = _interior_field(line_slab, data)

    solution = causal_propagator(line_slab, source, mass)
    residual = apply_P(line_slab, solution, mass)
    assert residual.restricted(line_slab.interior) == Field.zero(line_slab)


def _element(seed: int, degree: int = 2) -> CCRElement:
    return random_element(FOUR, random.Random(seed), degree)


@given(st.integers(), st.integers(), st.integers())
def test_ccr_multiplication_is_associative(a: int, b: int, c: int) -> None:
    x, y, z = _element(a), _element(b), _element(c)

    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))


@given(st.integers(), st.integers())
def test_star_reverses_products(a: int, b: int) -> None:
    x, y = _element(a, 3), _element(b, 3)

    assert star(multiply(x, y)) == multiply(star(y), star(x))
    assert star(star(x)) == x


@given(VECTORS, VECTORS)
def test_commutator_of_generators_is_central(
    left: list[int], right: list[int]
) -> None:
    a = CCRElement.linear(FOUR, left)
    b = CCRElement.linear(FOUR, right)

    bracket = commutator(a, b)
    assert bracket.degree == 0
    assert commutator(b, a) == -bracket


@given(
    st.integers(min_value=0, max_value=50),
    st.integers(min_value=1, max_value=50),
    st.integers(min_value=1, max_value=9),
)
def test_config_mass_is_canonical(p: int, q: int, k: int) -> None:
    scaled = build_config({"mass_squared": f"{p * k}/{q * k}"})
    reduced = build_config({"mass_squared": f"{p}/{q}"})

    assert scaled.mass_squared == reduced.mass_squared
    assert scaled.digest() == reduced.digest()


@given(
    st.sampled_from(["quiet", "normal", "verbose"]),
    st.one_of(st.none(), st.text(min_size=1, max_size=12)),
)
def test_digest_ignores_presentation(verbosity: str, out: str | None) -> None:
    base = RunConfig()
    config = base.with_overrides({"verbosity": verbosity, "output": out})

    assert config.digest() == base.digest()
