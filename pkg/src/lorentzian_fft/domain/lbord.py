"""Lattice Lorentzian bordisms between Cauchy-row objects.

All maps between lattice regions are translations, so germs, bordism
legs and 2-cells are stored as ``Translation`` values together with the
regions they act on. Bordisms are kept in a translation normal form in
which the source Cauchy row sits at ``t = 0`` with no spatial offset;
this makes pushouts, and therefore homotopy classes, decidable by
equality.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any

from networkx.utils import UnionFind

from .lattice import (
    CauchyRow,
    LatticeSpacetime,
    LiteralParseError,
    LocMorphism,
    MorphismValidationError,
    NotACauchyRow,
    Site,
    SiteNotInSpacetime,
    SpacetimeValidationError,
    Translation,
    causal_future,
    causal_past,
    is_cauchy_morphism,
    slab,
    spacetime_from_dict,
    spacetime_to_dict,
)
from .pseudocat import (
    FiniteCategory,
    FiniteGroupoid,
    PseudoCat,
    build_pseudocat,
    tau,
)

LOGGER = logging.getLogger(__name__)

_REGION_ERRORS = (
    SpacetimeValidationError,
    SiteNotInSpacetime,
    MorphismValidationError,
    NotACauchyRow,
)


class ObjectMismatch(ValueError):
    """Raised when germs or bordisms do not meet at a common object."""


class BordismValidationError(ValueError):
    """Raised when germ, bordism or cell data violates its invariants."""


class CellMismatch(ValueError):
    """Raised when 2-cells are not composable."""


class CollarTooSmall(ValueError):
    """Raised when resized collars lose a marked row or containment."""


class GluingOverlapInconsistent(RuntimeError):
    """Raised when collar identifications do not glue to a region."""


class InstanceNotClosed(RuntimeError):
    """Raised when a bounded instance is not closed under composition."""


@dataclass(frozen=True)
class BordObject:
    """A region ``m`` with a marked Cauchy row."""

    m: LatticeSpacetime
    sigma: CauchyRow

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        if self.sigma.parent != self.m:
            raise BordismValidationError(
                "Marked Cauchy row belongs to a different region"
            )

    @classmethod
    def at(cls, m: LatticeSpacetime, t0: int) -> BordObject:
        return cls(m, CauchyRow(m, t0))

    @classmethod
    def slab(
        cls, circumference: int, t_lo: int, t_hi: int, t0: int
    ) -> BordObject:
        return cls.at(slab(circumference, t_lo, t_hi), t0)

    @property
    def circumference(self) -> int:
        return self.m.circumference

    @property
    def marked(self) -> frozenset[Site]:
        return self.sigma.pair_sites

    def to_dict(self) -> dict[str, Any]:
        return {"m": spacetime_to_dict(self.m), "sigma": self.sigma.t0}


@dataclass(frozen=True)
class Germ:
    """Germ ``[W, g]`` stored on its minimal collar.

    The minimal collar is the marked row pair of the source, so two
    germs agree exactly when their translations do.
    """

    src: BordObject
    tgt: BordObject
    g: Translation = Translation()
    w: frozenset[Site] = field(default=frozenset(), repr=False)

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        circumference = self.src.circumference
        if circumference != self.tgt.circumference:
            raise ObjectMismatch("Germ ends live on different cylinders")
        object.__setattr__(self, "g", self.g.normalized(circumference))
        object.__setattr__(self, "w", self.src.marked)
        image = self.g.apply_all(self.w, circumference)
        if image != self.tgt.marked:
            raise BordismValidationError(
                f"Germ {self.g} does not carry the marked rows onto the "
                "target's"
            )

    @classmethod
    def identity(cls, obj: BordObject) -> Germ:
        return cls(obj, obj)

    def inverse(self) -> Germ:
        return Germ(self.tgt, self.src, -self.g)


def vcompose(g2: Germ, g1: Germ) -> Germ:
    """``g2 . g1`` in the groupoid of objects and germs."""

    if g1.tgt != g2.src:
        raise ObjectMismatch("Germs do not meet at a common object")
    return Germ(g1.src, g2.tgt, g1.g + g2.g)


@dataclass(frozen=True)
class Bordism:
    """``(N, i0, i1)`` from ``src`` to ``tgt`` with collars ``v0, v1``.

    Collars take no part in equality; ``resize_collars`` relates
    bordisms that differ only in their collars.
    """

    src: BordObject
    tgt: BordObject
    n: LatticeSpacetime
    i0: Translation
    i1: Translation
    v0: frozenset[Site] = field(default=frozenset(), compare=False)
    v1: frozenset[Site] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        circumference = self.n.circumference
        if not (
            self.src.circumference == self.tgt.circumference == circumference
        ):
            raise ObjectMismatch("Bordism data lives on different cylinders")
        shift = Translation(
            -(self.i0.dt + self.src.sigma.t0), -self.i0.dx
        ).normalized(circumference)
        if shift != Translation():
            object.__setattr__(self, "n", self.n.translated(shift))
        object.__setattr__(
            self, "i0", (self.i0 + shift).normalized(circumference)
        )
        object.__setattr__(
            self, "i1", (self.i1 + shift).normalized(circumference)
        )
        object.__setattr__(
            self, "v0", frozenset(self.v0) or self.src.m.sites
        )
        object.__setattr__(
            self, "v1", frozenset(self.v1) or self.tgt.m.sites
        )
        self._validate()

    def _validate(self) -> None:
        for label, obj, collar, leg in (
            ("source", self.src, self.v0, self.i0),
            ("target", self.tgt, self.v1, self.i1),
        ):
            if not obj.marked <= collar <= obj.m.sites:
                raise BordismValidationError(
                    f"The {label} collar must contain the marked rows and "
                    "lie in the object"
                )
            try:
                morphism = LocMorphism(obj.m.restrict(collar), self.n, leg)
            except _REGION_ERRORS as exc:
                raise BordismValidationError(
                    f"The {label} leg is not a Loc morphism: {exc}"
                ) from exc
            if not is_cauchy_morphism(morphism):
                raise BordismValidationError(
                    f"The {label} leg is not a Cauchy morphism"
                )
        circumference = self.n.circumference
        start = self.i0.apply_all(self.src.sigma.sites, circumference)
        end = self.i1.apply_all(self.tgt.sigma.sites, circumference)
        if not end <= causal_future(self.n, start):
            raise BordismValidationError(
                "The target row does not lie in the future of the source row"
            )

    @property
    def circumference(self) -> int:
        return self.n.circumference

    @property
    def duration(self) -> int:
        return self.i1.dt + self.tgt.sigma.t0 - self.i0.dt - self.src.sigma.t0

    @cached_property
    def incoming(self) -> frozenset[Site]:
        """``i0`` applied to the marked source rows."""

        return self.i0.apply_all(self.src.marked, self.circumference)

    @cached_property
    def outgoing(self) -> frozenset[Site]:
        return self.i1.apply_all(self.tgt.marked, self.circumference)

    @cached_property
    def core(self) -> frozenset[Site]:
        """``J+(i0 Sigma0) & J-(i1 Sigma1)``, the part every cell keeps."""

        return causal_future(self.n, self.incoming) & causal_past(
            self.n, self.outgoing
        )

    def leg(self, side: int) -> LocMorphism:
        if side == 0:
            return LocMorphism(self.src.m.restrict(self.v0), self.n, self.i0)
        return LocMorphism(self.tgt.m.restrict(self.v1), self.n, self.i1)

    def describe(self) -> str:
        return (
            f"bordism t=[{self.n.t_min},{self.n.t_max}] "
            f"i1=({self.i1.dt},{self.i1.dx})"
        )

    def key(self) -> str:
        """Stable report key; collars are not part of it."""

        def end(obj: BordObject) -> str:
            rows = f"[{obj.m.t_min},{obj.m.t_max}]"
            return f"{rows}:{len(obj.m.sites)}@{obj.sigma.t0}"

        return (
            f"L={self.circumference} {end(self.src)}->{end(self.tgt)} "
            f"N=[{self.n.t_min},{self.n.t_max}]x{self.n.width}"
            f":{len(self.n.sites)} "
            f"i1=({self.i1.dt},{self.i1.dx})"
        )


@dataclass(frozen=True)
class TwoCell:
    """Cell ``[Z, f]``; ``Z`` is the core of the source bordism."""

    src_bord: Bordism
    tgt_bord: Bordism
    f: Translation = Translation()

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        circumference = self.src_bord.circumference
        if circumference != self.tgt_bord.circumference:
            raise CellMismatch("Cell ends live on different cylinders")
        object.__setattr__(self, "f", self.f.normalized(circumference))
        source, target = self.src_bord, self.tgt_bord
        if self.f.apply_all(source.incoming, circumference) != (
            target.incoming
        ) or self.f.apply_all(source.outgoing, circumference) != (
            target.outgoing
        ):
            raise CellMismatch("Cell does not match the marked rows")
        try:
            LocMorphism(source.n.restrict(self.region), target.n, self.f)
        except _REGION_ERRORS as exc:
            raise CellMismatch(
                f"Cell map is not a Loc morphism: {exc}"
            ) from exc

    @property
    def region(self) -> frozenset[Site]:
        return self.src_bord.core


def cell_source(c: TwoCell) -> Germ:
    """Germ ``i0'^-1 f i0`` between the source objects."""

    return Germ(
        c.src_bord.src,
        c.tgt_bord.src,
        c.src_bord.i0 + c.f - c.tgt_bord.i0,
    )


def cell_target(c: TwoCell) -> Germ:
    return Germ(
        c.src_bord.tgt,
        c.tgt_bord.tgt,
        c.src_bord.i1 + c.f - c.tgt_bord.i1,
    )


def cell_over(src_bord: Bordism, tgt_bord: Bordism, germ: Germ) -> TwoCell:
    """The unique cell ``src_bord => tgt_bord`` with source germ ``germ``."""

    if germ.src != src_bord.src or germ.tgt != tgt_bord.src:
        raise CellMismatch("Germ does not join the source objects")
    return TwoCell(src_bord, tgt_bord, tgt_bord.i0 + germ.g - src_bord.i0)


def unit_cell(b: Bordism) -> TwoCell:
    return TwoCell(b, b)


def vertical_compose_cells(c2: TwoCell, c1: TwoCell) -> TwoCell:
    if c1.tgt_bord != c2.src_bord:
        raise CellMismatch("Cells are not vertically composable")
    return TwoCell(c1.src_bord, c2.tgt_bord, c1.f + c2.f)


def inverse_cell(c: TwoCell) -> TwoCell:
    return TwoCell(c.tgt_bord, c.src_bord, -c.f)


def unit_bordism(obj: BordObject) -> Bordism:
    """``(M, id, id)``."""

    return Bordism(obj, obj, obj.m, Translation(), Translation())


def germ_unit_cell(g: Germ) -> TwoCell:
    """``u(g) : u(src) => u(tgt)`` lying over ``g`` on both sides."""

    return cell_over(unit_bordism(g.src), unit_bordism(g.tgt), g)


def hcompose(b1: Bordism, b0: Bordism) -> Bordism:
    """Glue ``b0`` then ``b1`` along their shared collar.

    The past of the overlap in ``b0`` and its future in ``b1`` are glued
    by a union-find over tagged sites and realised on the cylinder.
    """

    # Bordism equality ignores collars, so they join the cache key.
    return _glue(b1, b0, b1.v0, b1.v1, b0.v0, b0.v1)


@lru_cache(maxsize=4096)
def _glue(
    b1: Bordism,
    b0: Bordism,
    *collars: frozenset[Site],
) -> Bordism:
    if b0.tgt != b1.src:
        raise ObjectMismatch("Bordisms do not meet at a common object")
    circumference = b0.circumference
    overlap = b0.v1 & b1.v0
    lower = causal_past(b0.n, b0.i1.apply_all(overlap, circumference))
    upper = causal_future(b1.n, b1.i0.apply_all(overlap, circumference))
    placement = (b0.i1 - b1.i0).normalized(circumference)
    classes = UnionFind()
    for site in overlap:
        classes.union(
            (0, b0.i1.apply(site, circumference)),
            (1, b1.i0.apply(site, circumference)),
        )
    for site in lower:
        classes.union((0, site))
    for site in upper:
        classes.union((1, site))
    located: set[Site] = set()
    for members in classes.to_sets():
        spots = {
            site if side == 0 else placement.apply(site, circumference)
            for side, site in members
        }
        if len(spots) != 1:
            raise GluingOverlapInconsistent(
                "Identified collar sites land on different cylinder sites"
            )
        spot = spots.pop()
        if spot in located:
            raise GluingOverlapInconsistent(
                f"Glued pieces collide at {spot}"
            )
        located.add(spot)
    try:
        glued = LatticeSpacetime(circumference, frozenset(located))
    except SpacetimeValidationError as exc:
        raise GluingOverlapInconsistent(
            f"Glued region is not a spacetime: {exc}"
        ) from exc
    v0 = frozenset(
        site
        for site in b0.v0
        if b0.i0.apply(site, circumference) in lower
    )
    v1 = frozenset(
        site
        for site in b1.v1
        if b1.i1.apply(site, circumference) in upper
    )
    composite = Bordism(
        b0.src, b1.tgt, glued, b0.i0, b1.i1 + placement, v0=v0, v1=v1
    )
    LOGGER.debug(
        "Glued %s after %s into %s",
        b1.describe(),
        b0.describe(),
        composite.describe(),
    )
    return composite


def hcompose_cells(c1: TwoCell, c0: TwoCell) -> TwoCell:
    """Horizontal composite; ``f0`` and ``f1`` must agree on the overlap."""

    if cell_target(c0) != cell_source(c1):
        raise CellMismatch("Cells do not meet over a common germ")
    glued = cell_over(
        hcompose(c1.src_bord, c0.src_bord),
        hcompose(c1.tgt_bord, c0.tgt_bord),
        cell_source(c0),
    )
    if cell_target(glued) != cell_target(c1):
        raise GluingOverlapInconsistent("Cell maps disagree on the overlap")
    return glued


def left_unitor(b: Bordism) -> TwoCell:
    """``u(tgt) . b => b``."""

    return TwoCell(hcompose(unit_bordism(b.tgt), b), b)


def right_unitor(b: Bordism) -> TwoCell:
    """``b . u(src) => b``."""

    return TwoCell(hcompose(b, unit_bordism(b.src)), b)


def associator(b2: Bordism, b1: Bordism, b0: Bordism) -> TwoCell:
    """``(b2 . b1) . b0 => b2 . (b1 . b0)``."""

    return TwoCell(
        hcompose(hcompose(b2, b1), b0), hcompose(b2, hcompose(b1, b0))
    )


def resize_collars(
    b: Bordism,
    new_v0: Iterable[Site],
    new_v1: Iterable[Site],
    new_n: Iterable[Site],
) -> tuple[Bordism, TwoCell]:
    """Shrink collars and ``N``; returns the cell back to ``b``.

    ``new_n`` is given in the coordinates of ``b.n``.
    """

    v0, v1, sites = frozenset(new_v0), frozenset(new_v1), frozenset(new_n)
    circumference = b.circumference
    if not (b.src.marked <= v0 <= b.v0 and b.tgt.marked <= v1 <= b.v1):
        raise CollarTooSmall("Collars must keep the marked rows")
    if not b.core <= sites <= b.n.sites:
        raise CollarTooSmall("Resized region must contain the core")
    if not (
        b.i0.apply_all(v0, circumference) <= sites
        and b.i1.apply_all(v1, circumference) <= sites
    ):
        raise CollarTooSmall("Collar images must lie in the resized region")
    try:
        resized = Bordism(
            b.src,
            b.tgt,
            b.n.restrict(sites),
            b.i0,
            b.i1,
            v0=v0,
            v1=v1,
        )
    except (BordismValidationError, *_REGION_ERRORS) as exc:
        raise CollarTooSmall(f"Resized data is not a bordism: {exc}") from exc
    return resized, TwoCell(resized, b)


def canonical(b: Bordism) -> Bordism:
    """Minimal-collar representative; equal exactly on homotopy classes."""

    sites = b.core | b.incoming | b.outgoing
    resized, _ = resize_collars(b, b.src.marked, b.tgt.marked, sites)
    LOGGER.debug(
        "Canonical form of %s has %d sites", b.describe(), len(sites)
    )
    return resized


def companion(germ: Germ) -> Bordism:
    """``(M', g, id)``."""

    return _germ_bordism(germ, forward=True)


def weak_inverse(germ: Germ) -> Bordism:
    """``(M', id, g)``, a weak inverse of the companion."""

    return _germ_bordism(germ, forward=False)


def _germ_bordism(germ: Germ, forward: bool) -> Bordism:
    circumference = germ.src.circumference
    collar = frozenset(
        site
        for site in germ.src.m.sites
        if germ.g.apply(site, circumference) in germ.tgt.m.sites
    )
    if forward:
        return Bordism(
            germ.src,
            germ.tgt,
            germ.tgt.m,
            germ.g,
            Translation(),
            v0=collar,
        )
    return Bordism(
        germ.tgt,
        germ.src,
        germ.tgt.m,
        Translation(),
        germ.g,
        v1=collar,
    )


def companion_cells(germ: Germ) -> tuple[TwoCell, TwoCell]:
    """``(cell_up, cell_down)`` exhibiting ``companion(germ)``."""

    hat = companion(germ)
    up = cell_over(hat, unit_bordism(germ.tgt), germ)
    down = cell_over(unit_bordism(germ.src), hat, Germ.identity(germ.src))
    return up, down


def object_from_dict(payload: Mapping[str, Any]) -> BordObject:
    try:
        return BordObject.at(
            spacetime_from_dict(payload["m"]), int(payload["sigma"])
        )
    except (KeyError, TypeError) as exc:
        raise LiteralParseError(f"Malformed object literal: {exc}") from exc


def _translation_from_dict(payload: Any) -> Translation:
    if not isinstance(payload, Mapping):
        raise LiteralParseError("Translations are written {dt, dx}")
    return Translation(int(payload.get("dt", 0)), int(payload.get("dx", 0)))


def _collar_from_dict(payload: Any, obj: BordObject) -> frozenset[Site]:
    if payload is None:
        return obj.m.sites
    return spacetime_from_dict(
        {"L": obj.circumference, "rows": payload}
    ).sites


def bordism_from_dict(payload: Mapping[str, Any]) -> Bordism:
    """Read ``{src, tgt, n, v0, v1, i0: {dt, dx}, i1: {dt, dx}}``.

    ``v0`` and ``v1`` are row tables in the coordinates of the objects
    and default to the whole object.
    """

    try:
        src = object_from_dict(payload["src"])
        tgt = object_from_dict(payload["tgt"])
        n = spacetime_from_dict(payload["n"])
        return Bordism(
            src,
            tgt,
            n,
            _translation_from_dict(payload["i0"]),
            _translation_from_dict(payload["i1"]),
            v0=_collar_from_dict(payload.get("v0"), src),
            v1=_collar_from_dict(payload.get("v1"), tgt),
        )
    except KeyError as exc:
        raise LiteralParseError(f"Bordism literal lacks {exc}") from exc


def bordism_to_dict(b: Bordism) -> dict[str, Any]:
    return {
        "src": b.src.to_dict(),
        "tgt": b.tgt.to_dict(),
        "n": spacetime_to_dict(b.n),
        "v0": spacetime_to_dict(b.src.m.restrict(b.v0))["rows"],
        "v1": spacetime_to_dict(b.tgt.m.restrict(b.v1))["rows"],
        "i0": b.i0.to_dict(),
        "i1": b.i1.to_dict(),
    }


class BoundedInstance:
    """Finite fragment of the bordism pseudo-category.

    One slab object per entry of ``heights``, each with its marked row at
    ``t = 0`` and that many rows above the marked pair. Duration-zero
    bordisms join every ordered pair of objects; they reach up to
    ``padding`` rows into the past, end at the top row of one of the
    objects and rotate by any element of ``Z_L``. Gluing keeps the lower
    bottom and one of the two tops, so this fragment is closed.
    """

    def __init__(
        self,
        circumference: int,
        padding: int = 1,
        heights: Iterable[int] = (1,),
    ) -> None:
        levels = tuple(sorted(set(heights)))
        if padding < 0 or not levels or levels[0] < 0:
            raise BordismValidationError(
                "Padding must be >= 0 and heights a non-empty set of "
                "values >= 0"
            )
        self.circumference = circumference
        self.padding = padding
        self.heights = levels
        LOGGER.debug(
            "Bounded instance on L=%d with padding %d and heights %s",
            circumference,
            padding,
            levels,
        )

    @cached_property
    def objects(self) -> tuple[BordObject, ...]:
        return tuple(
            BordObject.slab(self.circumference, 0, 1 + height, 0)
            for height in self.heights
        )

    @property
    def obj(self) -> BordObject:
        """The lowest object."""

        return self.objects[0]

    @cached_property
    def germs(self) -> tuple[Germ, ...]:
        return tuple(
            Germ(src, tgt, Translation(0, dx))
            for src, tgt in itertools.product(self.objects, repeat=2)
            for dx in src.m.spatial_sites
        )

    @cached_property
    def bordisms(self) -> tuple[Bordism, ...]:
        return tuple(
            Bordism(
                src,
                tgt,
                slab(self.circumference, -below, 1 + top),
                Translation(),
                Translation(0, rotation),
                v0=_rows_up_to(src, 1 + top),
                v1=_rows_up_to(tgt, 1 + top),
            )
            for src, tgt in itertools.product(self.objects, repeat=2)
            for top in self.heights
            for below in range(self.padding + 1)
            for rotation in src.m.spatial_sites
        )

    @property
    def name(self) -> str:
        if len(self.heights) == 1:
            return f"LBord(L={self.circumference})"
        levels = ",".join(map(str, self.heights))
        return f"LBord(L={self.circumference}, heights={levels})"

    @cached_property
    def cells(self) -> tuple[TwoCell, ...]:
        return tuple(
            cell_over(source, target, germ)
            for source, target in itertools.product(self.bordisms, repeat=2)
            for germ in self.germs
            if germ.src == source.src and germ.tgt == target.src
        )

    @cached_property
    def _ids(self) -> Mapping[Any, str]:
        ids: dict[Any, str] = {}
        for prefix, items in (
            ("o", self.objects),
            ("g", self.germs),
            ("b", self.bordisms),
            ("c", self.cells),
        ):
            for k, item in enumerate(items):
                ids[item] = f"{prefix}{k}"
        return ids

    @cached_property
    def _items(self) -> Mapping[str, Any]:
        return {key: item for item, key in self._ids.items()}

    def id_of(self, item: Any) -> str:
        try:
            return self._ids[item]
        except KeyError as exc:
            raise InstanceNotClosed(
                f"{type(item).__name__} is outside the bounded instance"
            ) from exc

    def item(self, key: str) -> Any:
        return self._items[key]

    def label(self, key: Any) -> str:
        item = self._items.get(key) if isinstance(key, str) else None
        if isinstance(item, Bordism):
            return f"{key}:{item.describe()}"
        return str(key)

    def export(self) -> PseudoCat:
        """The fragment as a ``PseudoCat`` over string ids."""

        return self._export

    @cached_property
    def _export(self) -> PseudoCat:
        key = self.id_of
        c0 = _groupoid(
            [key(obj) for obj in self.objects],
            {key(g): (key(g.src), key(g.tgt)) for g in self.germs},
            self.germs,
            vcompose,
            Germ.inverse,
            {key(obj): key(Germ.identity(obj)) for obj in self.objects},
            key,
        )
        c1 = _groupoid(
            [key(b) for b in self.bordisms],
            {
                key(c): (key(c.src_bord), key(c.tgt_bord))
                for c in self.cells
            },
            self.cells,
            vertical_compose_cells,
            inverse_cell,
            {key(b): key(unit_cell(b)) for b in self.bordisms},
            key,
        )
        hcomp_objects = {
            (key(b1), key(b0)): key(hcompose(b1, b0))
            for b0 in self.bordisms
            for b1 in self.bordisms
            if b0.tgt == b1.src
        }
        sources = {c: cell_source(c) for c in self.cells}
        targets = {c: cell_target(c) for c in self.cells}
        hcomp_cells = {
            (key(a1), key(a0)): key(hcompose_cells(a1, a0))
            for a0 in self.cells
            for a1 in self.cells
            if targets[a0] == sources[a1]
        }
        assoc = {
            (key(b2), key(b1), key(b0)): key(associator(b2, b1, b0))
            for b0, b1, b2 in itertools.product(self.bordisms, repeat=3)
            if b0.tgt == b1.src and b1.tgt == b2.src
        }
        pseudocat = build_pseudocat(
            c0,
            c1,
            src=(
                {key(b): key(b.src) for b in self.bordisms},
                {key(c): key(g) for c, g in sources.items()},
            ),
            tgt=(
                {key(b): key(b.tgt) for b in self.bordisms},
                {key(c): key(g) for c, g in targets.items()},
            ),
            hcomp_objects=hcomp_objects,
            hcomp_cells=hcomp_cells,
            hunit=(
                {key(obj): key(unit_bordism(obj)) for obj in self.objects},
                {key(g): key(germ_unit_cell(g)) for g in self.germs},
            ),
            assoc=assoc,
            lunit={key(b): key(left_unitor(b)) for b in self.bordisms},
            runit={key(b): key(right_unitor(b)) for b in self.bordisms},
            name=self.name,
        )
        LOGGER.info(
            "Exported bounded instance: %d germs, %d bordisms, %d cells",
            len(self.germs),
            len(self.bordisms),
            len(self.cells),
        )
        return pseudocat

    def truncate(self) -> FiniteCategory:
        """Homotopy category of the fragment."""

        return tau(self.export())


def _rows_up_to(obj: BordObject, top: int) -> frozenset[Site]:
    return frozenset(site for site in obj.m.sites if site[0] <= top)


def _groupoid(
    objects: list[str],
    morphisms: Mapping[str, tuple[str, str]],
    items: Iterable[Any],
    compose: Any,
    invert: Any,
    identities: Mapping[str, str],
    key: Any,
) -> FiniteGroupoid:
    by_source: dict[str, list[Any]] = {}
    elements = tuple(items)
    for item in elements:
        by_source.setdefault(morphisms[key(item)][0], []).append(item)
    composition = {
        (key(second), key(first)): key(compose(second, first))
        for first in elements
        for second in by_source.get(morphisms[key(first)][1], ())
    }
    return FiniteGroupoid(
        tuple(objects),
        dict(morphisms),
        composition,
        dict(identities),
        inverses={key(item): key(invert(item)) for item in elements},
    )


__all__ = [
    "BordObject",
    "Bordism",
    "BordismValidationError",
    "BoundedInstance",
    "CellMismatch",
    "CollarTooSmall",
    "Germ",
    "GluingOverlapInconsistent",
    "InstanceNotClosed",
    "ObjectMismatch",
    "TwoCell",
    "associator",
    "bordism_from_dict",
    "bordism_to_dict",
    "canonical",
    "cell_over",
    "cell_source",
    "cell_target",
    "companion",
    "companion_cells",
    "germ_unit_cell",
    "hcompose",
    "hcompose_cells",
    "inverse_cell",
    "left_unitor",
    "object_from_dict",
    "resize_collars",
    "right_unitor",
    "unit_bordism",
    "unit_cell",
    "vcompose",
    "vertical_compose_cells",
    "weak_inverse",
]
