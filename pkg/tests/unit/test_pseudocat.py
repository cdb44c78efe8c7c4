import random

import pytest

from lorentzian_fft.domain.lbord import BoundedInstance
from lorentzian_fft.domain.pseudocat import (
    FiniteCategory,
    StructureValidationError,
    arrow_category,
    check_adjunction,
    check_coherence,
    companion_identities_hold,
    count_functors,
    count_pseudofunctors_into_iota,
    cyclic_group_category,
    discrete_category,
    fiber_product,
    find_companion,
    function_category,
    homotopy_classes,
    identity_functor,
    iota,
    preorder_category,
    random_function_category,
    tau,
)


def test_preorder_category_closes_relations() -> None:
    chain = preorder_category(("a", "b", "c"), (("a", "b"), ("b", "c")))

    assert set(chain.morphisms) == {
        "a->a",
        "b->b",
        "c->c",
        "a->b",
        "b->c",
        "a->c",
    }
    assert chain.compose("b->c", "a->b") == "a->c"
    assert all(law.passed for law in chain.check_axioms())


def test_function_category_has_parallel_non_invertible_maps() -> None:
    c = function_category(
        {"a": 2}, [("a", "a", (0, 0)), ("a", "a", (1, 0))]
    )

    assert set(c.morphisms) == {"a->a:01", "a->a:00", "a->a:10", "a->a:11"}
    assert c.compose("a->a:10", "a->a:00") == "a->a:11"
    assert sorted(f for f in c.morphisms if not c.is_isomorphism(f)) == [
        "a->a:00",
        "a->a:11",
    ]
    assert all(law.passed for law in c.check_axioms())
    assert check_coherence(iota(c)).passed
    assert tau(iota(c)) == c
    report = check_adjunction(c, iota(c), arrow_category())
    assert report.passed, report.failures


def test_function_category_rejects_ill_typed_generators() -> None:
    with pytest.raises(StructureValidationError):
        function_category({"a": 2, "b": 1}, [("a", "b", (0, 1))])


@pytest.mark.parametrize("seed", range(8))
def test_random_function_categories_are_categories(seed: int) -> None:
    c = random_function_category(random.Random(seed))

    assert all(law.passed for law in c.check_axioms())
    assert tau(iota(c)) == c


def test_category_rejects_missing_identity() -> None:
    with pytest.raises(StructureValidationError):
        FiniteCategory(("a",), {"f": ("a", "a")}, {}, {})


def test_core_keeps_only_isomorphisms() -> None:
    iso = preorder_category(("a", "b"), (("a", "b"), ("b", "a")))
    arrow = arrow_category()

    assert set(iso.core().morphisms) == set(iso.morphisms)
    assert set(arrow.core().morphisms) == {"a->a", "b->b"}


@pytest.mark.parametrize(
    "category",
    [
        discrete_category(2),
        arrow_category(),
        cyclic_group_category(3),
        preorder_category(("a", "b", "c"), (("a", "b"), ("b", "c"))),
    ],
    ids=lambda c: c.name,
)
def test_iota_is_coherent_and_truncates_back(
    category: FiniteCategory,
) -> None:
    p = iota(category)

    report = check_coherence(p)
    assert report.passed, report.failures
    assert tau(p) == category


def test_iota_globular_cells_are_identities() -> None:
    p = iota(cyclic_group_category(2))

    globular = [alpha for alpha in p.c1.morphisms if p.is_globular(alpha)]
    assert all(
        p.c1.source(alpha) == p.c1.target(alpha) for alpha in globular
    )


def test_adjunction_on_arrow_with_hom_bijection() -> None:
    c = preorder_category(("a", "b"), (("a", "b"),), name="arrow")
    report = check_adjunction(c, iota(c), cyclic_group_category(2))

    assert report.passed, report.failures
    assert report.law("hom_bijection").passed


def test_hom_counts_agree_for_cyclic_group() -> None:
    z3 = cyclic_group_category(3)
    arrow = arrow_category()

    assert count_functors(z3, z3) == 3
    assert count_pseudofunctors_into_iota(iota(z3), z3) == 3
    assert count_functors(arrow, z3) == count_pseudofunctors_into_iota(
        iota(arrow), z3
    )


def test_companion_of_vertical_in_iota() -> None:
    p = iota(cyclic_group_category(2))

    found = find_companion(p, "g1")
    assert found.horizontal == "g1"


def test_identity_vertical_is_its_own_companion() -> None:
    p = iota(arrow_category())

    found = find_companion(p, "a->a")
    assert found.horizontal == "a->a"
    assert companion_identities_hold(
        p, "a->a", found.horizontal, found.cell_up, found.cell_down
    )


def test_bounded_instance_is_coherent(
    bounded_instance: BoundedInstance,
) -> None:
    p = bounded_instance.export()

    assert len(p.c1.objects) == 6
    assert len(p.c1.morphisms) == 108
    assert check_coherence(p).passed


def test_bounded_instance_homotopy_classes(
    bounded_instance: BoundedInstance,
) -> None:
    p = bounded_instance.export()
    classes = homotopy_classes(p)

    assert len(set(classes.values())) == len(bounded_instance.germs)
    assert all(law.passed for law in tau(p).check_axioms())


def test_tower_instance_is_coherent_and_fibrant(
    tower_instance: BoundedInstance,
) -> None:
    p = tower_instance.export()

    assert len(p.c0.objects) == 2
    assert check_coherence(p).passed
    for germ in tower_instance.germs:
        g = tower_instance.id_of(germ)
        found = find_companion(p, g)
        assert p.src.on_object(found.horizontal) == p.c0.source(g)
        assert p.tgt.on_object(found.horizontal) == p.c0.target(g)


def test_adjunction_on_tower_instance(
    tower_instance: BoundedInstance,
) -> None:
    report = check_adjunction(
        tower_instance.truncate(), tower_instance.export(), arrow_category()
    )

    assert report.passed


def test_fiber_product_over_identities_is_the_diagonal() -> None:
    z3 = cyclic_group_category(3).core()
    legs = (identity_functor(z3), identity_functor(z3))

    product = fiber_product(z3, z3, legs)

    assert product.groupoid.objects == (("*", "*"),)
    assert sorted(product.groupoid.morphisms) == [
        ("g0", "g0"),
        ("g1", "g1"),
        ("g2", "g2"),
    ]
    assert product.groupoid.compose(("g1", "g1"), ("g2", "g2")) == (
        "g0",
        "g0",
    )
    assert product.left.on_morphism(("g2", "g2")) == "g2"


def test_fiber_product_rejects_foreign_legs() -> None:
    z2 = cyclic_group_category(2).core()
    z3 = cyclic_group_category(3).core()

    with pytest.raises(StructureValidationError):
        fiber_product(z2, z3, (identity_functor(z3), identity_functor(z3)))
