import pytest

from lorentzian_fft.domain.kleingordon import (
    DegenerateRegion,
    Field,
    FormMismatch,
    NotCauchy,
    PoissonMap,
    PoissonSpace,
    SourceTouchesBoundary,
    apply_P,
    causal_propagator,
    data_map,
    data_space,
    evolve,
    extend_P,
    functorial_maps,
    green_advanced,
    green_map,
    green_retarded,
    green_support_ok,
    iso_chain,
    observables_map,
    observables_space,
    res_map,
    restrict_to_row,
    solutions_space,
    symplectic_current,
)
from lorentzian_fft.domain.lattice import (
    LatticeSpacetime,
    LocMorphism,
    Translation,
    diamond,
    inclusion,
    slab,
)
from lorentzian_fft.domain.linalg import RationalMatrix
from lorentzian_fft.domain.scalars import parse_rational

MASSES = ("0", "1/4", "1")


def test_apply_p_uses_leapfrog_stencil(ring_slab: LatticeSpacetime) -> None:
    phi = Field(ring_slab, {(1, 0): 2, (2, 1): 1, (3, 0): -1})
    result = apply_P(ring_slab, phi, "1/2")

    assert result[(2, 0)] == 2 - 1 - 1
    assert result[(1, 0)] == parse_rational("1")
    assert result[(2, 1)] == parse_rational("1/2")
    assert result[(1, 1)] == -1


def test_field_rejects_foreign_sites(ring_slab: LatticeSpacetime) -> None:
    with pytest.raises(ValueError):
        Field(ring_slab, {(9, 0): 1})


@pytest.mark.parametrize("mass", MASSES)
def test_green_operators_invert_p(
    ring_slab: LatticeSpacetime, mass: str
) -> None:
    for site in sorted(ring_slab.interior):
        delta = Field.delta(ring_slab, site)
        for green in (green_retarded, green_advanced):
            psi = green(ring_slab, delta, mass)
            image = apply_P(ring_slab, psi, mass)
            assert image.restricted(ring_slab.interior) == delta
        assert green_support_ok(ring_slab, delta, mass)


def test_retarded_green_vanishes_in_the_past(
    ring_slab: LatticeSpacetime,
) -> None:
    psi = green_retarded(ring_slab, Field.delta(ring_slab, (2, 1)), 0)

    assert all(t > 2 for t, _ in psi.support)
    assert psi[(3, 1)] == 1


def test_green_left_inverse_on_second_interior() -> None:
    m = slab(4, 0, 6)
    site = (3, 2)
    source = extend_P(m, Field.delta(m, site), "1/4")

    assert green_retarded(m, source, "1/4") == Field.delta(m, site)
    assert green_advanced(m, source, "1/4") == Field.delta(m, site)


def test_sources_on_the_boundary_are_rejected(
    ring_slab: LatticeSpacetime,
) -> None:
    boundary = Field.delta(ring_slab, (0, 0))
    with pytest.raises(SourceTouchesBoundary):
        green_retarded(ring_slab, boundary, 0)
    with pytest.raises(SourceTouchesBoundary):
        extend_P(ring_slab, boundary, 0)


def test_region_without_interior_rejects_every_source() -> None:
    thin = slab(4, 0, 1)

    assert not thin.interior
    for green in (green_retarded, green_advanced, causal_propagator):
        with pytest.raises(SourceTouchesBoundary):
            green(thin, Field.delta(thin, (1, 2)), "1/4")
    assert causal_propagator(thin, Field(thin), "1/4") == Field(thin)


def test_propagator_solves_field_equation(
    ring_slab: LatticeSpacetime,
) -> None:
    propagated = causal_propagator(
        ring_slab, Field.delta(ring_slab, (2, 3)), "1"
    )
    image = apply_P(ring_slab, propagated, "1")

    assert not image.restricted(ring_slab.interior).support


def test_degenerate_region_has_no_observables() -> None:
    corner = LatticeSpacetime(8, frozenset({(0, 0), (0, 1), (1, 1)}))
    with pytest.raises(DegenerateRegion):
        observables_space(corner, 0)


@pytest.mark.parametrize("mass", MASSES)
def test_observables_match_data_dimension(
    ring_slab: LatticeSpacetime, mass: str
) -> None:
    observables = observables_space(ring_slab, mass)

    assert observables.space.dim == 8
    assert observables.space.is_nondegenerate()


def test_quotient_kills_image_of_p(ring_slab: LatticeSpacetime) -> None:
    observables = observables_space(ring_slab, "1/4")
    source = extend_P(ring_slab, Field.delta(ring_slab, (2, 2)), "1/4")

    assert not any(observables.reduce(source))


def test_poisson_chain_is_isomorphism(ring_slab: LatticeSpacetime) -> None:
    for row in ring_slab.cauchy_rows:
        green, restriction = iso_chain(ring_slab, row, "1")

        assert green.is_isomorphism()
        assert restriction.is_isomorphism()
        assert green.target == restriction.source
        assert restriction.target == data_space(row)


def test_solution_form_is_data_form(ring_slab: LatticeSpacetime) -> None:
    solutions = solutions_space(ring_slab, "1/4")
    reference = solutions.reference

    assert solutions.space.form == data_space(reference).form
    for row in ring_slab.cauchy_rows:
        assert solutions.form_at(row.t0) == solutions.space.form


def test_chain_sends_site_to_propagator_data(
    ring_slab: LatticeSpacetime,
) -> None:
    observables = observables_space(ring_slab, 0)
    row = ring_slab.cauchy_rows[2]
    chain = green_map(ring_slab, 0).then(res_map(ring_slab, row, 0))
    site = (1, 3)
    column = chain.matrix.column(observables.basis.index(site))
    propagated = causal_propagator(ring_slab, Field.delta(ring_slab, site), 0)

    assert column == restrict_to_row(propagated.values, row)


def test_evolution_reproduces_initial_data(
    ring_slab: LatticeSpacetime,
) -> None:
    row = ring_slab.cauchy_rows[1]
    data = [1, 0, 2, 0, 0, 1, 0, -1]
    phi = evolve(ring_slab, row, data, "1/4")

    assert restrict_to_row(phi.values, row) == tuple(
        parse_rational(str(value)) for value in data
    )
    assert not apply_P(ring_slab, phi, "1/4").support


def test_evolution_rejects_wrong_data_length(
    ring_slab: LatticeSpacetime,
) -> None:
    with pytest.raises(FormMismatch):
        evolve(ring_slab, ring_slab.cauchy_rows[0], [1, 2], 0)


def test_symplectic_current_is_antisymmetric(
    ring_slab: LatticeSpacetime,
) -> None:
    row = ring_slab.cauchy_rows[0]
    first = evolve(ring_slab, row, [1, 0, 0, 0, 0, 0, 0, 0], 0).values
    second = evolve(ring_slab, row, [0, 0, 0, 0, 1, 0, 0, 0], 0).values

    assert symplectic_current(ring_slab, first, second, 0) == -1
    assert symplectic_current(ring_slab, second, first, 2) == 1


def test_poisson_map_must_preserve_forms() -> None:
    form = RationalMatrix.from_rows([[0, -1], [1, 0]])
    space = PoissonSpace(("q", "p"), form)
    with pytest.raises(FormMismatch):
        PoissonMap(space, space, RationalMatrix.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(FormMismatch):
        PoissonSpace(("q", "p"), RationalMatrix.identity(2))


def test_translation_maps_are_isomorphisms(
    ring_slab: LatticeSpacetime,
) -> None:
    f = LocMorphism(slab(4, 0, 2), ring_slab, Translation(2, 1))
    maps = functorial_maps(f, "1/4")

    assert maps.observables.is_isomorphism()
    assert maps.solutions.is_isomorphism()
    assert maps.data.matrix == RationalMatrix.permutation(
        [1, 2, 3, 0, 5, 6, 7, 4]
    )
    target_green = green_map(ring_slab, "1/4")
    source_green = green_map(f.source, "1/4")
    assert target_green.matrix @ maps.observables.matrix == (
        maps.solutions.matrix @ source_green.matrix
    )


def test_non_cauchy_inclusion_has_no_data_map() -> None:
    outer = slab(8, 0, 6)
    f = inclusion(diamond(8, 2, 0, 2), outer)

    assert observables_map(f, 0).matrix.shape == (16, 6)
    with pytest.raises(NotCauchy):
        data_map(f, 0)


def test_one_dimensional_chain(line_slab: LatticeSpacetime) -> None:
    observables = observables_space(line_slab, "1")

    assert observables.space.dim == 2
    for row in line_slab.cauchy_rows:
        chain = green_map(line_slab, "1").then(res_map(line_slab, row, "1"))
        assert chain.matrix.is_invertible()
