import random

import pytest

from lorentzian_fft.domain import compare
from lorentzian_fft.domain.ccr import CCRMorphism
from lorentzian_fft.domain.kleingordon import (
    NotCauchy,
    PoissonMap,
    PoissonSpace,
)
from lorentzian_fft.domain.lattice import (
    LocMorphism,
    Translation,
    diamond,
    identity,
    inclusion,
    slab,
)
from lorentzian_fft.domain.engine.instances import (
    capped_slab,
    translation_germs,
)
from lorentzian_fft.domain.lbord import (
    BordObject,
    Bordism,
    Germ,
    companion,
    hcompose,
    unit_bordism,
)
from lorentzian_fft.domain.linalg import RationalMatrix
from lorentzian_fft.domain.models import CheckResult

MASS = "1/4"


@pytest.fixture(scope="module")
def obj() -> BordObject:
    return BordObject.slab(4, 0, 2, 0)


@pytest.fixture(scope="module")
def bordisms(obj: BordObject) -> list[Bordism]:
    return [
        Bordism(
            obj,
            obj,
            slab(4, 0, duration + 2),
            Translation(),
            Translation(duration, dx),
        )
        for duration, dx in ((0, 1), (1, 0), (2, 3))
    ]


@pytest.fixture(scope="module")
def cauchy_morphisms() -> list[LocMorphism]:
    outer = slab(4, 0, 5)
    return [
        identity(outer),
        inclusion(slab(4, 1, 4), outer),
        LocMorphism(slab(4, 0, 2), outer, Translation(2, 1)),
    ]


def _all_pass(results: list[CheckResult]) -> None:
    failures = [r for r in results if not r.passed]
    assert not failures, failures[:3]
    assert results


def test_matrices_agree_reports_digest_or_witness() -> None:
    left = RationalMatrix.from_rows([[1, 0], [0, 1]])
    right = RationalMatrix.from_rows([[1, 0], [2, 1]])

    passed = compare.matrices_agree("eq", "fft", "k", left, left)
    failed = compare.matrices_agree("eq", "fft", "k", left, right)

    assert passed.passed
    assert passed.lhs == passed.rhs
    assert passed.lhs.startswith("2x2:")
    assert not failed.passed
    assert failed.witness == [1, 0, "0", "2"]
    assert failed.rhs == [["1", "0"], ["2", "1"]]


def test_evolution_of_unit_bordism_is_identity(obj: BordObject) -> None:
    matrix = compare.evolution_map(unit_bordism(obj), MASS).matrix

    assert matrix == RationalMatrix.identity(8)


def test_evolution_composes_under_gluing(bordisms: list[Bordism]) -> None:
    f_kg = compare.build_fft_kg(MASS)
    first, second = bordisms[1], bordisms[2]
    glued = hcompose(second, first)

    assert f_kg.morphism(glued).generator_map.matrix == (
        f_kg.morphism(second).generator_map.matrix
        @ f_kg.morphism(first).generator_map.matrix
    )


def test_kg_fft_functoriality(bordisms: list[Bordism]) -> None:
    composable = [(bordisms[2], bordisms[0]), (bordisms[1], bordisms[1])]
    for fft in (
        compare.build_fft_kg(MASS),
        compare.fft_from_aqft(compare.build_aqft_kg(MASS)),
    ):
        _all_pass(compare.check_fft_functoriality(fft, bordisms, composable))


def test_aqft_axioms_on_slabs_and_diamonds(
    cauchy_morphisms: list[LocMorphism],
) -> None:
    outer = slab(8, 0, 6)
    left = inclusion(diamond(8, 2, 0, 2), outer)
    right = inclusion(diamond(8, 2, 4, 6), outer)
    middle = slab(8, 1, 5)
    composable = [
        (inclusion(diamond(8, 2, 0, 2), middle), inclusion(middle, outer))
    ]
    results = compare.check_aqft_axioms(
        compare.build_aqft_kg(MASS),
        [*cauchy_morphisms, left, right],
        composable,
        [(left, right)],
    )

    _all_pass(results)
    assert {r.check for r in results} >= {
        "identity",
        "functoriality",
        "time-slice",
        "einstein-causality",
        "einstein-commutator",
    }


def test_scalar_comparison_is_natural(bordisms: list[Bordism]) -> None:
    results = compare.check_scalar_comparison(
        bordisms, MASS, random.Random(0), spot_checks=3
    )

    _all_pass(results)
    assert sum(r.check == "naturality-element" for r in results) == 3


def test_companion_of_rotation_is_the_rotation(obj: BordObject) -> None:
    germ = Germ(obj, obj, Translation(0, 1))
    a_kg = compare.build_aqft_kg(MASS)
    induced = compare.fft_from_aqft(a_kg).morphism(companion(germ))
    direct = a_kg.morphism(LocMorphism(obj.m, obj.m, Translation(0, 1)))

    assert induced.generator_map.matrix == direct.generator_map.matrix


def test_kg_fft_of_rotation_companion_permutes_data(obj: BordObject) -> None:
    germ = Germ(obj, obj, Translation(0, 1))
    value = compare.build_fft_kg(MASS).morphism(companion(germ))

    assert value.generator_map.matrix == RationalMatrix.permutation(
        [1, 2, 3, 0, 5, 6, 7, 4]
    )


def test_companion_of_capped_slab_inverts_its_collar() -> None:
    capped = BordObject.at(capped_slab(4), 0)
    germ = Germ(capped, capped, Translation(0, 1))
    hat = companion(germ)

    assert hat.v0 == capped.m.sites - {(2, 1)}
    _all_pass(
        compare.check_companion_values(compare.build_aqft_kg(MASS), [germ])
    )


def test_scalar_comparison_on_translation_companions() -> None:
    germs = translation_germs(4)
    hats = [companion(germ) for germ in germs]
    results = compare.check_scalar_comparison(
        hats, MASS, random.Random(1), spot_checks=2
    )

    _all_pass(results)
    assert sum(r.check == "naturality" for r in results) == len(hats)
    _all_pass(
        compare.check_companion_values(compare.build_aqft_kg(MASS), germs)
    )


def test_reconstruction_recovers_the_aqft(
    bordisms: list[Bordism], cauchy_morphisms: list[LocMorphism]
) -> None:
    a_kg = compare.build_aqft_kg(MASS)
    _all_pass(
        compare.check_reconstruction(
            compare.fft_from_aqft(a_kg), a_kg, cauchy_morphisms, bordisms
        )
    )
    _all_pass(
        compare.check_reconstruction(
            compare.build_fft_kg(MASS),
            None,
            cauchy_morphisms,
            bordisms,
            instance=":kg",
        )
    )


def test_reconstruction_is_undefined_off_cauchy_morphisms() -> None:
    reconstructed, _ = compare.reconstruct_aqft(compare.build_fft_kg(0))
    f = inclusion(diamond(8, 2, 0, 2), slab(8, 0, 6))

    with pytest.raises(NotCauchy):
        reconstructed.morphism(f)


def test_faithfulness_separates_identity_and_flip(
    bordisms: list[Bordism], cauchy_morphisms: list[LocMorphism]
) -> None:
    results = compare.check_faithfulness(
        compare.build_aqft_kg(MASS), cauchy_morphisms, bordisms
    )

    _all_pass(results)
    assert any(r.check == "faithful" for r in results)


def test_twist_only_changes_non_cauchy_morphisms(
    cauchy_morphisms: list[LocMorphism],
) -> None:
    base = compare.build_aqft_kg(0)
    twisted = compare.TwistedAqft(base)
    f = inclusion(diamond(8, 2, 0, 2), slab(8, 0, 6))

    assert twisted.name == "twisted(A_KG)"
    assert compare.TwistedAqft.sign(f) == -1
    for g in cauchy_morphisms:
        assert compare.TwistedAqft.sign(g) == 1
        assert twisted.morphism(g) == base.morphism(g)
    assert (
        twisted.morphism(f).generator_map.matrix
        == -base.morphism(f).generator_map.matrix
    )


def test_non_fullness_witness(bordisms: list[Bordism]) -> None:
    results = compare.non_fullness_witness(4, MASS, bordisms[:2])

    _all_pass(results)
    assert {r.check for r in results} == {
        "non-cauchy",
        "aqfts-differ",
        "fft-images-equal",
        "identity-not-in-image",
    }
    with pytest.raises(ValueError):
        compare.non_fullness_witness(0, MASS, bordisms)


class _Collapsing(compare.AqftInstance):
    """Sends every region to a plane and every morphism to zero."""

    name = "collapse"
    plane = PoissonSpace(("a", "b"), RationalMatrix.zeros(2, 2))

    def algebra(self, m: object) -> PoissonSpace:
        return self.plane

    def morphism(self, f: LocMorphism) -> CCRMorphism:
        return CCRMorphism(
            PoissonMap(self.plane, self.plane, RationalMatrix.zeros(2, 2))
        )


def test_singular_leg_is_a_time_slice_violation(
    bordisms: list[Bordism],
) -> None:
    induced = compare.fft_from_aqft(_Collapsing())

    assert induced.name == "F(collapse)"
    with pytest.raises(compare.TimeSliceViolation):
        induced.morphism(bordisms[1])
