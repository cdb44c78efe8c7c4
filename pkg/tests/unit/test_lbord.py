import pytest

from lorentzian_fft.domain.lattice import Translation, slab
from lorentzian_fft.domain.lbord import (
    BordObject,
    Bordism,
    BordismValidationError,
    BoundedInstance,
    CellMismatch,
    CollarTooSmall,
    Germ,
    InstanceNotClosed,
    ObjectMismatch,
    TwoCell,
    associator,
    bordism_from_dict,
    bordism_to_dict,
    canonical,
    cell_over,
    cell_source,
    cell_target,
    companion,
    companion_cells,
    hcompose,
    hcompose_cells,
    left_unitor,
    resize_collars,
    unit_cell,
    unit_bordism,
    vcompose,
    weak_inverse,
)


@pytest.fixture(scope="module")
def obj() -> BordObject:
    return BordObject.slab(4, 0, 2, 0)


def _bordism(obj: BordObject, duration: int, dx: int = 0) -> Bordism:
    return Bordism(
        obj,
        obj,
        slab(4, 0, duration + 2),
        Translation(),
        Translation(duration, dx),
    )


def test_germs_compose_and_invert(obj: BordObject) -> None:
    g = Germ(obj, obj, Translation(0, 3))
    h = Germ(obj, obj, Translation(0, 2))

    assert vcompose(h, g).g == Translation(0, 1)
    assert vcompose(g.inverse(), g) == Germ.identity(obj)


def test_germ_must_match_marked_rows(obj: BordObject) -> None:
    with pytest.raises(BordismValidationError):
        Germ(obj, obj, Translation(1, 0))


def test_bordism_normal_form_moves_source_row_to_origin(
    obj: BordObject,
) -> None:
    shifted = Bordism(
        obj,
        obj,
        slab(4, 5, 9),
        Translation(5, 1),
        Translation(7, 1),
    )

    assert shifted == _bordism(obj, 2)
    assert shifted.i0 == Translation()
    assert shifted.duration == 2


def test_target_row_must_lie_in_the_future(obj: BordObject) -> None:
    with pytest.raises(BordismValidationError):
        Bordism(
            obj,
            obj,
            slab(4, -2, 2),
            Translation(),
            Translation(-2, 0),
        )


def test_gluing_adds_durations(obj: BordObject) -> None:
    glued = hcompose(_bordism(obj, 2, 1), _bordism(obj, 1, 2))

    assert glued.duration == 3
    assert glued.i1 == Translation(3, 3)
    assert canonical(glued) == canonical(_bordism(obj, 3, 3))


def test_gluing_keeps_collars_of_equal_bordisms_apart(
    obj: BordObject,
) -> None:
    full = _bordism(obj, 2)
    small = Bordism(
        obj,
        obj,
        slab(4, 0, 4),
        Translation(),
        Translation(2, 0),
        v0=obj.marked,
        v1=obj.marked,
    )
    assert full == small

    assert hcompose(full, full).v0 == obj.m.sites
    glued = hcompose(small, small)

    assert glued.v0 == obj.marked
    assert glued.v1 == obj.marked
    assert not any(t == 2 for t, _ in glued.v0)


def test_gluing_needs_matching_objects(obj: BordObject) -> None:
    other = BordObject.slab(4, 0, 3, 0)
    b = Bordism(other, other, slab(4, 0, 3), Translation(), Translation())
    with pytest.raises(ObjectMismatch):
        hcompose(b, _bordism(obj, 1))


def test_unit_laws_hold_up_to_cells(obj: BordObject) -> None:
    b = _bordism(obj, 2, 1)
    unitor = left_unitor(b)

    assert cell_source(unitor) == Germ.identity(obj)
    assert cell_target(unitor) == Germ.identity(obj)
    assert canonical(hcompose(unit_bordism(obj), b)) == canonical(b)


def test_associator_is_globular(obj: BordObject) -> None:
    cell = associator(
        _bordism(obj, 1), _bordism(obj, 1, 1), _bordism(obj, 2, 3)
    )

    assert cell_source(cell) == Germ.identity(obj)
    assert cell_target(cell) == Germ.identity(obj)


def test_cells_need_matching_rows(obj: BordObject) -> None:
    with pytest.raises(CellMismatch):
        TwoCell(_bordism(obj, 1), _bordism(obj, 2))


def test_cell_over_germ(obj: BordObject) -> None:
    germ = Germ(obj, obj, Translation(0, 1))
    cell = cell_over(_bordism(obj, 1), _bordism(obj, 1), germ)

    assert cell_source(cell) == germ
    assert cell_target(cell) == germ


def test_resize_collars_rejects_cutting_the_core(obj: BordObject) -> None:
    b = _bordism(obj, 2)
    with pytest.raises(CollarTooSmall):
        resize_collars(b, obj.marked, obj.marked, b.incoming)


def test_canonical_is_idempotent(obj: BordObject) -> None:
    b = _bordism(obj, 2, 1)
    minimal = canonical(b)

    assert canonical(minimal) == minimal
    assert minimal.v0 == obj.marked
    assert minimal.n.sites == b.core | b.incoming | b.outgoing


def test_companion_and_weak_inverse(obj: BordObject) -> None:
    germ = Germ(obj, obj, Translation(0, 1))
    up, down = companion_cells(germ)

    assert up.src_bord == companion(germ)
    assert down.tgt_bord == companion(germ)
    round_trip = hcompose(weak_inverse(germ), companion(germ))
    assert canonical(round_trip) == canonical(unit_bordism(obj))


def test_literal_round_trip(obj: BordObject) -> None:
    b = _bordism(obj, 2, 1)
    payload = bordism_to_dict(b)

    assert payload["i1"] == {"dt": 2, "dx": 1}
    assert bordism_from_dict(payload) == b


def test_bounded_instance_sizes(bounded_instance: BoundedInstance) -> None:
    assert len(bounded_instance.germs) == 3
    assert len(bounded_instance.bordisms) == 6
    assert len(bounded_instance.cells) == 108
    assert bounded_instance.id_of(bounded_instance.obj) == "o0"
    assert bounded_instance.label("b0").startswith("b0:bordism")


def test_bounded_instance_rejects_foreign_items(
    bounded_instance: BoundedInstance, obj: BordObject
) -> None:
    with pytest.raises(InstanceNotClosed):
        bounded_instance.id_of(obj)
    with pytest.raises(BordismValidationError):
        BoundedInstance(3, padding=-1)
    with pytest.raises(BordismValidationError):
        BoundedInstance(3, heights=())


def test_bounded_truncation_is_rotation_group(
    bounded_instance: BoundedInstance,
) -> None:
    truncated = bounded_instance.truncate()

    assert len(truncated.objects) == 1
    assert len(truncated.morphisms) == 3
    assert all(
        truncated.is_isomorphism(f) for f in truncated.morphisms
    )


def test_tower_instance_sizes(tower_instance: BoundedInstance) -> None:
    low, high = tower_instance.objects

    assert low.m.t_max == 1
    assert high.m.t_max == 2
    assert len(tower_instance.germs) == 4
    assert len(tower_instance.bordisms) == 8
    assert len(tower_instance.cells) == 64
    assert tower_instance.name == "LBord(L=0, heights=0,1)"


def test_tower_instance_holds_companions_between_heights(
    tower_instance: BoundedInstance,
) -> None:
    low, high = tower_instance.objects
    germ = Germ(low, high)
    up, down = companion_cells(germ)

    for item in (
        companion(germ),
        weak_inverse(germ),
        hcompose(weak_inverse(germ), companion(germ)),
        unit_bordism(low),
        unit_bordism(high),
        up,
        down,
    ):
        assert tower_instance.id_of(item)
    assert companion(germ).tgt == high
    assert weak_inverse(germ).tgt == low


def test_tower_truncation_is_pair_groupoid(
    tower_instance: BoundedInstance,
) -> None:
    truncated = tower_instance.truncate()

    assert len(truncated.objects) == 2
    assert len(truncated.morphisms) == 4
    assert all(
        truncated.is_isomorphism(f) for f in truncated.morphisms
    )
    assert {truncated.source(f) for f in truncated.morphisms} == {
        "o0",
        "o1",
    }


def test_horizontal_composite_of_unit_cells(obj: BordObject) -> None:
    b0, b1 = _bordism(obj, 1), _bordism(obj, 0, 1)

    glued = hcompose_cells(unit_cell(b1), unit_cell(b0))

    assert glued.src_bord == glued.tgt_bord == hcompose(b1, b0)
    assert cell_source(glued) == Germ.identity(obj)
    assert cell_target(glued) == Germ.identity(obj)
