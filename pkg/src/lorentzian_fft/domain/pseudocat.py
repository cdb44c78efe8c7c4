"""Finite groupoids, pseudo-categories and the tau / iota adjunction.

Everything is presented by explicit tables over hashable ids. Laws that
quantify over all objects or cells become exhaustive loops whose first
counterexample is reported as a witness.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import networkx as nx
from networkx.utils import UnionFind

LOGGER = logging.getLogger(__name__)

Id = Hashable
Label = Callable[[Any], str]


class StructureValidationError(ValueError):
    """Raised when categorical tables are malformed."""


class CompositionUndefined(ValueError):
    """Raised when composing morphisms whose ends do not match."""


class NoCompanion(RuntimeError):
    """Raised when exhaustive companion search fails."""


@dataclass(frozen=True)
class LawResult:
    """Outcome of one exhaustively checked law."""

    law: str
    passed: bool
    witness: tuple[Any, ...] | None = None

    def to_dict(self, label: Label = str) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "law": self.law,
            "status": "pass" if self.passed else "fail",
        }
        if self.witness is not None:
            payload["witness"] = [label(item) for item in self.witness]
        return payload


@dataclass(frozen=True)
class LawReport:
    laws: tuple[LawResult, ...]

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        object.__setattr__(self, "laws", tuple(self.laws))

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.laws)

    @property
    def failures(self) -> tuple[LawResult, ...]:
        return tuple(result for result in self.laws if not result.passed)

    def law(self, name: str) -> LawResult:
        for result in self.laws:
            if result.law == name:
                return result
        raise KeyError(name)

    def to_dict(self, label: Label = str) -> list[dict[str, Any]]:
        return [result.to_dict(label) for result in self.laws]


class CoherenceReport(LawReport):
    """Laws of a pseudo-category."""


class AdjunctionReport(LawReport):
    """Checks of the tau / iota adjunction on given instances."""


_CHECK_ERRORS = (
    KeyError,
    CompositionUndefined,
    StructureValidationError,
)


def _evaluate(law: str, failures: Iterator[tuple[Any, ...]]) -> LawResult:
    try:
        witness = next(failures, None)
    except _CHECK_ERRORS as exc:
        LOGGER.debug("Law %s raised %r", law, exc)
        return LawResult(law, False, ("error", str(exc)))
    if witness is not None:
        LOGGER.debug("Law %s failed at %s", law, witness)
    return LawResult(law, witness is None, witness)


def _merge(law: str, results: Iterable[LawResult]) -> LawResult:
    for result in results:
        if not result.passed:
            return LawResult(law, False, (result.law,) + tuple(
                result.witness or ()
            ))
    return LawResult(law, True)


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """Category presented by tables; ``composition[(g, f)] = g . f``."""

    objects: tuple[Id, ...]
    morphisms: Mapping[Id, tuple[Id, Id]]
    composition: Mapping[tuple[Id, Id], Id]
    identities: Mapping[Id, Id]
    name: str = ""

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        object.__setattr__(self, "objects", tuple(self.objects))
        known = set(self.objects)
        for morphism, (source, target) in self.morphisms.items():
            if source not in known or target not in known:
                raise StructureValidationError(
                    f"Morphism {morphism!r} has unknown endpoints"
                )
        for obj in self.objects:
            identity = self.identities.get(obj)
            if identity is None or self.morphisms.get(identity) != (
                obj,
                obj,
            ):
                raise StructureValidationError(
                    f"Object {obj!r} lacks a valid identity"
                )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and dict(self.morphisms) == dict(other.morphisms)
            and dict(self.composition) == dict(other.composition)
            and dict(self.identities) == dict(other.identities)
        )

    __hash__ = None  # type: ignore[assignment]

    def source(self, morphism: Id) -> Id:
        return self.morphisms[morphism][0]

    def target(self, morphism: Id) -> Id:
        return self.morphisms[morphism][1]

    def identity(self, obj: Id) -> Id:
        return self.identities[obj]

    def compose(self, g: Id, f: Id) -> Id:
        """``g . f`` (``f`` first)."""

        if self.target(f) != self.source(g):
            raise CompositionUndefined(f"Cannot compose {g!r} after {f!r}")
        try:
            return self.composition[(g, f)]
        except KeyError as exc:
            raise StructureValidationError(
                f"Composition table lacks ({g!r}, {f!r})"
            ) from exc

    @cached_property
    def _outgoing(self) -> Mapping[Id, tuple[Id, ...]]:
        index: dict[Id, list[Id]] = {obj: [] for obj in self.objects}
        for morphism, (source, _) in self.morphisms.items():
            index[source].append(morphism)
        return {obj: tuple(ms) for obj, ms in index.items()}

    @cached_property
    def _hom(self) -> Mapping[tuple[Id, Id], tuple[Id, ...]]:
        index: dict[tuple[Id, Id], list[Id]] = {}
        for morphism, ends in self.morphisms.items():
            index.setdefault(ends, []).append(morphism)
        return {ends: tuple(ms) for ends, ms in index.items()}

    def outgoing(self, obj: Id) -> tuple[Id, ...]:
        return self._outgoing.get(obj, ())

    def hom(self, source: Id, target: Id) -> tuple[Id, ...]:
        return self._hom.get((source, target), ())

    def composable_pairs(self) -> Iterator[tuple[Id, Id]]:
        for f, (_, middle) in self.morphisms.items():
            for g in self.outgoing(middle):
                yield g, f

    def inverse_of(self, f: Id) -> Id | None:
        """Two-sided inverse found by exhaustive search, if any."""

        source, target = self.morphisms[f]
        for g in self.hom(target, source):
            if self.compose(g, f) == self.identity(
                source
            ) and self.compose(f, g) == self.identity(target):
                return g
        return None

    def is_isomorphism(self, f: Id) -> bool:
        return self.inverse_of(f) is not None

    def core(self) -> FiniteGroupoid:
        """Maximal subgroupoid on all objects."""

        inverses = {}
        for f in self.morphisms:
            inverse = self.inverse_of(f)
            if inverse is not None:
                inverses[f] = inverse
        morphisms = {f: self.morphisms[f] for f in inverses}
        composition = {
            (g, f): self.composition[(g, f)]
            for f in morphisms
            for g in self.outgoing(self.target(f))
            if g in morphisms
        }
        return FiniteGroupoid(
            self.objects,
            morphisms,
            composition,
            dict(self.identities),
            inverses=inverses,
            name=f"core({self.name})",
        )

    def check_axioms(self) -> tuple[LawResult, ...]:
        return (
            _evaluate("closure", self._closure_failures()),
            _evaluate("unitality", self._unit_failures()),
            _evaluate("associativity", self._association_failures()),
        )

    def _closure_failures(self) -> Iterator[tuple[Any, ...]]:
        for g, f in self.composable_pairs():
            h = self.compose(g, f)
            if self.morphisms.get(h) != (self.source(f), self.target(g)):
                yield (g, f)
        for g, f in self.composition:
            if self.target(f) != self.source(g):
                yield (g, f)

    def _unit_failures(self) -> Iterator[tuple[Any, ...]]:
        for f, (source, target) in self.morphisms.items():
            if self.compose(f, self.identity(source)) != f:
                yield (f, self.identity(source))
            if self.compose(self.identity(target), f) != f:
                yield (self.identity(target), f)

    def _association_failures(self) -> Iterator[tuple[Any, ...]]:
        for g, f in self.composable_pairs():
            gf = self.compose(g, f)
            for h in self.outgoing(self.target(g)):
                if self.compose(h, gf) != self.compose(
                    self.compose(h, g), f
                ):
                    yield (h, g, f)

    def to_document(self, label: Label = str) -> dict[str, Any]:
        return {
            "objects": [label(obj) for obj in self.objects],
            "morphisms": [
                {"id": label(f), "src": label(s), "tgt": label(t)}
                for f, (s, t) in self.morphisms.items()
            ],
            "compose": [
                [label(g), label(f), label(self.compose(g, f))]
                for g, f in self.composable_pairs()
            ],
            "identities": {
                label(obj): label(self.identity(obj))
                for obj in self.objects
            },
        }

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> FiniteCategory:
        objects, morphisms, composition, identities = _read_tables(document)
        return cls(objects, morphisms, composition, identities)


def _read_tables(
    document: Mapping[str, Any],
) -> tuple[
    tuple[str, ...],
    dict[str, tuple[str, str]],
    dict[tuple[str, str], str],
    dict[str, str],
]:
    try:
        objects = tuple(str(obj) for obj in document["objects"])
        morphisms = {
            str(entry["id"]): (str(entry["src"]), str(entry["tgt"]))
            for entry in document["morphisms"]
        }
        composition = {
            (str(g), str(f)): str(h) for g, f, h in document["compose"]
        }
        identities = {
            str(obj): str(f) for obj, f in document["identities"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureValidationError(
            f"Malformed category document: {exc}"
        ) from exc
    return objects, morphisms, composition, identities


@dataclass(frozen=True, eq=False)
class FiniteGroupoid(FiniteCategory):
    """Finite category with a total inverse table."""

    inverses: Mapping[Id, Id] = field(default_factory=dict)

    def inverse(self, f: Id) -> Id:
        try:
            return self.inverses[f]
        except KeyError as exc:
            raise StructureValidationError(
                f"Morphism {f!r} has no inverse"
            ) from exc

    def check_axioms(self) -> tuple[LawResult, ...]:
        return super().check_axioms() + (
            _evaluate("inverses", self._inverse_failures()),
        )

    def _inverse_failures(self) -> Iterator[tuple[Any, ...]]:
        for f, (source, target) in self.morphisms.items():
            g = self.inverse(f)
            if self.compose(g, f) != self.identity(
                source
            ) or self.compose(f, g) != self.identity(target):
                yield (f, g)

    def to_document(self, label: Label = str) -> dict[str, Any]:
        document = super().to_document(label)
        document["inverse"] = [
            [label(f), label(self.inverse(f))] for f in self.morphisms
        ]
        return document

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> FiniteGroupoid:
        objects, morphisms, composition, identities = _read_tables(document)
        try:
            inverses = {str(f): str(g) for f, g in document["inverse"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureValidationError(
                f"Malformed inverse table: {exc}"
            ) from exc
        return cls(
            objects, morphisms, composition, identities, inverses=inverses
        )


class _ComponentwiseComposition(Mapping[tuple[Id, Id], Id]):
    """Composition table of a fiber product, computed on lookup."""

    def __init__(
        self,
        left: FiniteCategory,
        right: FiniteCategory,
        product: FiniteCategory,
    ) -> None:
        self._left = left
        self._right = right
        self._product = product

    def __getitem__(self, key: tuple[Id, Id]) -> Id:
        (g_left, g_right), (f_left, f_right) = key
        if (g_left, g_right) not in self._product.morphisms or (
            f_left,
            f_right,
        ) not in self._product.morphisms:
            raise KeyError(key)
        return (
            self._left.compose(g_left, f_left),
            self._right.compose(g_right, f_right),
        )

    def __iter__(self) -> Iterator[tuple[Id, Id]]:
        return self._product.composable_pairs()

    def __len__(self) -> int:
        return sum(1 for _ in self._product.composable_pairs())


@dataclass(frozen=True, eq=False)
class GroupoidFunctor:
    """Functor given by object and morphism tables."""

    source: FiniteCategory
    target: FiniteCategory
    object_map: Mapping[Id, Id]
    morphism_map: Mapping[Id, Id]

    def on_object(self, obj: Id) -> Id:
        return self.object_map[obj]

    def on_morphism(self, morphism: Id) -> Id:
        return self.morphism_map[morphism]

    def then(self, after: GroupoidFunctor) -> GroupoidFunctor:
        return GroupoidFunctor(
            self.source,
            after.target,
            {x: after.on_object(y) for x, y in self.object_map.items()},
            {f: after.on_morphism(g) for f, g in self.morphism_map.items()},
        )

    def check(self, name: str = "functor") -> LawResult:
        return _evaluate(name, self._failures())

    def _failures(self) -> Iterator[tuple[Any, ...]]:
        source, target = self.source, self.target
        for obj in source.objects:
            if self.on_object(obj) not in target.identities:
                yield ("object", obj)
            if self.on_morphism(source.identity(obj)) != target.identity(
                self.on_object(obj)
            ):
                yield ("identity", obj)
        for f, (a, b) in source.morphisms.items():
            image = self.on_morphism(f)
            if target.morphisms.get(image) != (
                self.on_object(a),
                self.on_object(b),
            ):
                yield ("typing", f)
        for g, f in source.composable_pairs():
            if self.on_morphism(source.compose(g, f)) != target.compose(
                self.on_morphism(g), self.on_morphism(f)
            ):
                yield ("composition", g, f)


def identity_functor(category: FiniteCategory) -> GroupoidFunctor:
    return GroupoidFunctor(
        category,
        category,
        {obj: obj for obj in category.objects},
        {f: f for f in category.morphisms},
    )


@dataclass(frozen=True, eq=False)
class FiberProduct:
    """Strict pullback ``A x_C B`` with its two projections."""

    groupoid: FiniteGroupoid
    left: GroupoidFunctor
    right: GroupoidFunctor


def fiber_product(
    a: FiniteGroupoid,
    b: FiniteGroupoid,
    over: tuple[GroupoidFunctor, GroupoidFunctor],
) -> FiberProduct:
    """Pairs ``(x, y)`` with ``F(x) = G(y)`` for the cospan ``(F, G)``."""

    leg_a, leg_b = over
    if leg_a.source is not a or leg_b.source is not b:
        raise StructureValidationError("Cospan legs do not start at a, b")
    if leg_a.target is not leg_b.target and leg_a.target != leg_b.target:
        raise StructureValidationError("Cospan legs have different targets")
    try:
        objects_by_image: dict[Id, list[Id]] = {}
        for y in b.objects:
            objects_by_image.setdefault(leg_b.on_object(y), []).append(y)
        objects = tuple(
            (x, y)
            for x in a.objects
            for y in objects_by_image.get(leg_a.on_object(x), ())
        )
        morphisms_by_image: dict[Id, list[Id]] = {}
        for g in b.morphisms:
            morphisms_by_image.setdefault(leg_b.on_morphism(g), []).append(g)
        morphisms: dict[Id, tuple[Id, Id]] = {}
        for f, (fa, fb) in a.morphisms.items():
            for g in morphisms_by_image.get(leg_a.on_morphism(f), ()):
                ga, gb = b.morphisms[g]
                morphisms[(f, g)] = ((fa, ga), (fb, gb))
    except KeyError as exc:
        raise StructureValidationError(
            f"Cospan functor table is not total: {exc}"
        ) from exc
    identities = {(x, y): (a.identity(x), b.identity(y)) for x, y in objects}
    inverses = {(f, g): (a.inverse(f), b.inverse(g)) for f, g in morphisms}
    groupoid = FiniteGroupoid(
        objects,
        morphisms,
        {},
        identities,
        inverses=inverses,
        name=f"{a.name} x {b.name}",
    )
    object.__setattr__(
        groupoid, "composition", _ComponentwiseComposition(a, b, groupoid)
    )
    left = GroupoidFunctor(
        groupoid,
        a,
        {obj: obj[0] for obj in objects},
        {f: f[0] for f in morphisms},
    )
    right = GroupoidFunctor(
        groupoid,
        b,
        {obj: obj[1] for obj in objects},
        {f: f[1] for f in morphisms},
    )
    LOGGER.debug(
        "Fiber product has %d objects and %d morphisms",
        len(objects),
        len(morphisms),
    )
    return FiberProduct(groupoid, left, right)


@dataclass(frozen=True, eq=False)
class PseudoCat:
    """Pseudo-category: groupoids ``c0, c1`` with weak horizontal laws.

    ``hcomp`` acts on the fiber product of pairs ``(x1, x0)`` with
    ``src(x1) = tgt(x0)``; ``assoc[(x2, x1, x0)]`` is a cell
    ``(x2 x1) x0 => x2 (x1 x0)``; ``lunit[x]`` is ``u(tgt x) x => x`` and
    ``runit[x]`` is ``x u(src x) => x``.
    """

    c0: FiniteGroupoid
    c1: FiniteGroupoid
    src: GroupoidFunctor
    tgt: GroupoidFunctor
    hcomp: GroupoidFunctor
    hunit: GroupoidFunctor
    assoc: Mapping[tuple[Id, Id, Id], Id]
    lunit: Mapping[Id, Id]
    runit: Mapping[Id, Id]
    name: str = ""

    @property
    def composable(self) -> FiniteCategory:
        return self.hcomp.source

    def hcompose(self, x1: Id, x0: Id) -> Id:
        return self.hcomp.on_object((x1, x0))

    def hcompose_cells(self, alpha1: Id, alpha0: Id) -> Id:
        return self.hcomp.on_morphism((alpha1, alpha0))

    def vcompose(self, beta: Id, alpha: Id) -> Id:
        return self.c1.compose(beta, alpha)

    def unit(self, obj: Id) -> Id:
        return self.hunit.on_object(obj)

    def unit_cell(self, vertical: Id) -> Id:
        return self.hunit.on_morphism(vertical)

    def cell_id(self, x: Id) -> Id:
        return self.c1.identity(x)

    def cell_source(self, alpha: Id) -> Id:
        return self.src.on_morphism(alpha)

    def cell_target(self, alpha: Id) -> Id:
        return self.tgt.on_morphism(alpha)

    def is_globular(self, alpha: Id) -> bool:
        source_vertical = self.src.on_morphism(alpha)
        target_vertical = self.tgt.on_morphism(alpha)
        return source_vertical == self.c0.identity(
            self.c0.source(source_vertical)
        ) and target_vertical == self.c0.identity(
            self.c0.source(target_vertical)
        )

    @cached_property
    def _horizontals_from(self) -> Mapping[Id, tuple[Id, ...]]:
        index: dict[Id, list[Id]] = {obj: [] for obj in self.c0.objects}
        for x in self.c1.objects:
            index[self.src.on_object(x)].append(x)
        return {obj: tuple(xs) for obj, xs in index.items()}

    @cached_property
    def _cells_over(self) -> Mapping[Id, tuple[Id, ...]]:
        index: dict[Id, list[Id]] = {g: [] for g in self.c0.morphisms}
        for alpha in self.c1.morphisms:
            index[self.src.on_morphism(alpha)].append(alpha)
        return {g: tuple(cells) for g, cells in index.items()}

    def horizontals_from(self, obj: Id) -> tuple[Id, ...]:
        return self._horizontals_from.get(obj, ())

    def cells_over(self, vertical: Id) -> tuple[Id, ...]:
        """2-cells whose source vertical morphism is ``vertical``."""

        return self._cells_over.get(vertical, ())

    def composable_triples(self) -> Iterator[tuple[Id, Id, Id]]:
        for x0 in self.c1.objects:
            for x1 in self.horizontals_from(self.tgt.on_object(x0)):
                for x2 in self.horizontals_from(self.tgt.on_object(x1)):
                    yield x2, x1, x0

    def to_document(self, label: Label = str) -> dict[str, Any]:
        def functor(f: GroupoidFunctor) -> dict[str, Any]:
            return {
                "objects": {
                    label(x): label(y) for x, y in f.object_map.items()
                },
                "morphisms": {
                    label(x): label(y) for x, y in f.morphism_map.items()
                },
            }

        return {
            "c0": self.c0.to_document(label),
            "c1": self.c1.to_document(label),
            "src": functor(self.src),
            "tgt": functor(self.tgt),
            "hcomp": {
                "objects": [
                    [label(x1), label(x0), label(x)]
                    for (x1, x0), x in self.hcomp.object_map.items()
                ],
                "morphisms": [
                    [label(a1), label(a0), label(a)]
                    for (a1, a0), a in self.hcomp.morphism_map.items()
                ],
            },
            "hunit": functor(self.hunit),
            "assoc": [
                [label(x2), label(x1), label(x0), label(a)]
                for (x2, x1, x0), a in self.assoc.items()
            ],
            "lunit": {label(x): label(a) for x, a in self.lunit.items()},
            "runit": {label(x): label(a) for x, a in self.runit.items()},
        }

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> PseudoCat:
        try:
            c0 = FiniteGroupoid.from_document(document["c0"])
            c1 = FiniteGroupoid.from_document(document["c1"])
            hcomp = document["hcomp"]
            return build_pseudocat(
                c0,
                c1,
                src=_functor_tables(document["src"]),
                tgt=_functor_tables(document["tgt"]),
                hcomp_objects={
                    (str(a), str(b)): str(c) for a, b, c in hcomp["objects"]
                },
                hcomp_cells={
                    (str(a), str(b)): str(c)
                    for a, b, c in hcomp["morphisms"]
                },
                hunit=_functor_tables(document["hunit"]),
                assoc={
                    (str(a), str(b), str(c)): str(d)
                    for a, b, c, d in document["assoc"]
                },
                lunit={str(k): str(v) for k, v in document["lunit"].items()},
                runit={str(k): str(v) for k, v in document["runit"].items()},
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, StructureValidationError):
                raise
            raise StructureValidationError(
                f"Malformed pseudo-category document: {exc}"
            ) from exc


def _functor_tables(
    document: Mapping[str, Any],
) -> tuple[dict[str, str], dict[str, str]]:
    return (
        {str(k): str(v) for k, v in document["objects"].items()},
        {str(k): str(v) for k, v in document["morphisms"].items()},
    )


def build_pseudocat(
    c0: FiniteGroupoid,
    c1: FiniteGroupoid,
    *,
    src: tuple[Mapping[Id, Id], Mapping[Id, Id]],
    tgt: tuple[Mapping[Id, Id], Mapping[Id, Id]],
    hcomp_objects: Mapping[tuple[Id, Id], Id],
    hcomp_cells: Mapping[tuple[Id, Id], Id],
    hunit: tuple[Mapping[Id, Id], Mapping[Id, Id]],
    assoc: Mapping[tuple[Id, Id, Id], Id],
    lunit: Mapping[Id, Id],
    runit: Mapping[Id, Id],
    name: str = "",
) -> PseudoCat:
    """Assemble a pseudo-category from plain tables."""

    src_functor = GroupoidFunctor(c1, c0, *src)
    tgt_functor = GroupoidFunctor(c1, c0, *tgt)
    composable = fiber_product(c1, c1, (src_functor, tgt_functor))
    missing = set(composable.groupoid.objects) - set(hcomp_objects)
    if missing:
        raise StructureValidationError(
            f"Horizontal composition undefined on {len(missing)} pairs"
        )
    return PseudoCat(
        c0=c0,
        c1=c1,
        src=src_functor,
        tgt=tgt_functor,
        hcomp=GroupoidFunctor(
            composable.groupoid, c1, hcomp_objects, hcomp_cells
        ),
        hunit=GroupoidFunctor(c0, c1, *hunit),
        assoc=assoc,
        lunit=lunit,
        runit=runit,
        name=name,
    )


def check_coherence(p: PseudoCat) -> CoherenceReport:
    """Exhaustively check every pseudo-category law of ``p``."""

    LOGGER.info(
        "Checking coherence of %s (%d horizontals, %d cells)",
        p.name or "pseudo-category",
        len(p.c1.objects),
        len(p.c1.morphisms),
    )
    laws = [
        _merge("c0_axioms", p.c0.check_axioms()),
        _merge("c1_axioms", p.c1.check_axioms()),
        p.src.check("functor_src"),
        p.tgt.check("functor_tgt"),
        p.hunit.check("functor_hunit"),
        _evaluate("span_src", _span_failures(p, source_side=True)),
        _evaluate("span_tgt", _span_failures(p, source_side=False)),
        _evaluate("unit_span", _unit_span_failures(p)),
        _evaluate("assoc_typing", _assoc_typing_failures(p)),
        _evaluate("unitor_typing", _unitor_typing_failures(p)),
        _evaluate("globular_assoc", _globular_failures(p, p.assoc)),
        _evaluate("globular_lunit", _globular_failures(p, p.lunit)),
        _evaluate("globular_runit", _globular_failures(p, p.runit)),
        _evaluate("natural_assoc", _assoc_naturality_failures(p)),
        _evaluate("natural_lunit", _unitor_naturality_failures(p, True)),
        _evaluate("natural_runit", _unitor_naturality_failures(p, False)),
        _evaluate("pentagon", _pentagon_failures(p)),
        _evaluate("unity_triangle", _triangle_failures(p)),
        _evaluate("unit_unitors", _unit_unitor_failures(p)),
        p.hcomp.check("interchange"),
    ]
    report = CoherenceReport(tuple(laws))
    LOGGER.info(
        "Coherence of %s: %d/%d laws pass",
        p.name or "pseudo-category",
        len(laws) - len(report.failures),
        len(laws),
    )
    return report


def _span_failures(
    p: PseudoCat, source_side: bool
) -> Iterator[tuple[Any, ...]]:
    """``src(x1 x0) = src(x0)`` or ``tgt(x1 x0) = tgt(x1)``, on cells too."""

    leg = p.src if source_side else p.tgt
    for x1, x0 in p.composable.objects:
        outer = x0 if source_side else x1
        if leg.on_object(p.hcompose(x1, x0)) != leg.on_object(outer):
            yield (x1, x0)
    for a1, a0 in p.composable.morphisms:
        outer = a0 if source_side else a1
        composite = p.hcompose_cells(a1, a0)
        if leg.on_morphism(composite) != leg.on_morphism(outer):
            yield (a1, a0)


def _unit_span_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    for obj in p.c0.objects:
        u = p.unit(obj)
        if p.src.on_object(u) != obj or p.tgt.on_object(u) != obj:
            yield (obj,)
    for g in p.c0.morphisms:
        cell = p.unit_cell(g)
        if p.cell_source(cell) != g or p.cell_target(cell) != g:
            yield (g,)


def _cell_between(p: PseudoCat, alpha: Id, source: Id, target: Id) -> bool:
    return p.c1.morphisms.get(alpha) == (source, target)


def _assoc_typing_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    for x2, x1, x0 in p.composable_triples():
        left = p.hcompose(p.hcompose(x2, x1), x0)
        right = p.hcompose(x2, p.hcompose(x1, x0))
        if not _cell_between(p, p.assoc[(x2, x1, x0)], left, right):
            yield (x2, x1, x0)


def _unitor_typing_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    for x in p.c1.objects:
        before = p.unit(p.tgt.on_object(x))
        after = p.unit(p.src.on_object(x))
        if not _cell_between(p, p.lunit[x], p.hcompose(before, x), x):
            yield ("lunit", x)
        if not _cell_between(p, p.runit[x], p.hcompose(x, after), x):
            yield ("runit", x)


def _globular_failures(
    p: PseudoCat, components: Mapping[Any, Id]
) -> Iterator[tuple[Any, ...]]:
    for key, alpha in components.items():
        if not p.is_globular(alpha):
            yield (key, alpha)


def _assoc_naturality_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    c1 = p.c1
    for a0 in c1.morphisms:
        for a1 in p.cells_over(p.cell_target(a0)):
            for a2 in p.cells_over(p.cell_target(a1)):
                x0, y0 = c1.morphisms[a0]
                x1, y1 = c1.morphisms[a1]
                x2, y2 = c1.morphisms[a2]
                left = c1.compose(
                    p.assoc[(y2, y1, y0)],
                    p.hcompose_cells(p.hcompose_cells(a2, a1), a0),
                )
                right = c1.compose(
                    p.hcompose_cells(a2, p.hcompose_cells(a1, a0)),
                    p.assoc[(x2, x1, x0)],
                )
                if left != right:
                    yield (a2, a1, a0)


def _unitor_naturality_failures(
    p: PseudoCat, left_unitor: bool
) -> Iterator[tuple[Any, ...]]:
    c1 = p.c1
    unitor = p.lunit if left_unitor else p.runit
    for alpha, (x, y) in c1.morphisms.items():
        if left_unitor:
            whiskered = p.hcompose_cells(
                p.unit_cell(p.cell_target(alpha)), alpha
            )
        else:
            whiskered = p.hcompose_cells(
                alpha, p.unit_cell(p.cell_source(alpha))
            )
        if c1.compose(unitor[y], whiskered) != c1.compose(alpha, unitor[x]):
            yield (alpha,)


def _pentagon_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    c1 = p.c1
    for x2, x1, x0 in p.composable_triples():
        for x3 in p.horizontals_from(p.tgt.on_object(x2)):
            left = c1.compose(
                p.assoc[(x3, x2, p.hcompose(x1, x0))],
                p.assoc[(p.hcompose(x3, x2), x1, x0)],
            )
            right = c1.compose(
                p.hcompose_cells(p.cell_id(x3), p.assoc[(x2, x1, x0)]),
                c1.compose(
                    p.assoc[(x3, p.hcompose(x2, x1), x0)],
                    p.hcompose_cells(p.assoc[(x3, x2, x1)], p.cell_id(x0)),
                ),
            )
            if left != right:
                yield (x3, x2, x1, x0)


def _triangle_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    c1 = p.c1
    for x0 in c1.objects:
        middle = p.tgt.on_object(x0)
        unit = p.unit(middle)
        for x1 in p.horizontals_from(middle):
            left = c1.compose(
                p.hcompose_cells(p.cell_id(x1), p.lunit[x0]),
                p.assoc[(x1, unit, x0)],
            )
            right = p.hcompose_cells(p.runit[x1], p.cell_id(x0))
            if left != right:
                yield (x1, x0)


def _unit_unitor_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    for obj in p.c0.objects:
        unit = p.unit(obj)
        if p.lunit[unit] != p.runit[unit]:
            yield (obj,)


def iota(c: FiniteCategory) -> PseudoCat:
    """Pseudo-category of commutative squares with invertible verticals."""

    core = c.core()
    squares: dict[Id, tuple[Id, Id]] = {}
    for f, (a, b) in c.morphisms.items():
        for f2, (a2, b2) in c.morphisms.items():
            for g0 in core.hom(a, a2):
                for g1 in core.hom(b, b2):
                    if c.compose(g1, f) == c.compose(f2, g0):
                        squares[(g0, f, f2, g1)] = (f, f2)
    composition: dict[tuple[Id, Id], Id] = {}
    by_source: dict[Id, list[Id]] = {}
    for square in squares:
        by_source.setdefault(square[1], []).append(square)
    for first in squares:
        g0, _, middle, g1 = first
        for second in by_source.get(middle, ()):
            h0, _, end, h1 = second
            composition[(second, first)] = (
                core.compose(h0, g0),
                first[1],
                end,
                core.compose(h1, g1),
            )
    identities = {
        f: (core.identity(a), f, f, core.identity(b))
        for f, (a, b) in c.morphisms.items()
    }
    inverses = {
        (g0, f, f2, g1): (core.inverse(g0), f2, f, core.inverse(g1))
        for g0, f, f2, g1 in squares
    }
    c1 = FiniteGroupoid(
        tuple(c.morphisms),
        squares,
        composition,
        identities,
        inverses=inverses,
        name=f"iota({c.name})_1",
    )
    hcomp_objects = {}
    hcomp_cells = {}
    for f0, (_, middle) in c.morphisms.items():
        for f1 in c.outgoing(middle):
            hcomp_objects[(f1, f0)] = c.compose(f1, f0)
    for alpha0 in squares:
        for alpha1 in squares:
            if alpha1[0] == alpha0[3]:
                hcomp_cells[(alpha1, alpha0)] = (
                    alpha0[0],
                    c.compose(alpha1[1], alpha0[1]),
                    c.compose(alpha1[2], alpha0[2]),
                    alpha1[3],
                )
    return build_pseudocat(
        core,
        c1,
        src=(
            {f: a for f, (a, _) in c.morphisms.items()},
            {sq: sq[0] for sq in squares},
        ),
        tgt=(
            {f: b for f, (_, b) in c.morphisms.items()},
            {sq: sq[3] for sq in squares},
        ),
        hcomp_objects=hcomp_objects,
        hcomp_cells=hcomp_cells,
        hunit=(
            {obj: c.identity(obj) for obj in c.objects},
            {
                g: (g, c.identity(a), c.identity(b), g)
                for g, (a, b) in core.morphisms.items()
            },
        ),
        assoc={
            (f2, f1, f0): identities[c.compose(c.compose(f2, f1), f0)]
            for f0 in c.morphisms
            for f1 in c.outgoing(c.target(f0))
            for f2 in c.outgoing(c.target(f1))
        },
        lunit={f: identities[f] for f in c.morphisms},
        runit={f: identities[f] for f in c.morphisms},
        name=f"iota({c.name})",
    )


def homotopy_classes(p: PseudoCat) -> dict[Id, Id]:
    """Map each horizontal to its globular-cell class representative.

    Classes are seeded by globular cells and closed under horizontal
    composition; the representative is the first member in ``c1`` order.
    """

    classes = UnionFind(p.c1.objects)
    for alpha, (x, y) in p.c1.morphisms.items():
        if p.is_globular(alpha):
            classes.union(x, y)
    pairs = tuple(p.composable.objects)
    changed = True
    while changed:
        changed = False
        by_class: dict[tuple[Id, Id], Id] = {}
        for x1, x0 in pairs:
            key = (classes[x1], classes[x0])
            composite = p.hcompose(x1, x0)
            seen = by_class.setdefault(key, composite)
            if classes[seen] != classes[composite]:
                classes.union(seen, composite)
                changed = True
    order = {x: k for k, x in enumerate(p.c1.objects)}
    representative: dict[Id, Id] = {}
    for members in classes.to_sets():
        least = min(members, key=order.__getitem__)
        for member in members:
            representative[member] = least
    return representative


def tau(p: PseudoCat) -> FiniteCategory:
    """Homotopy category: horizontals modulo globular 2-cells."""

    classes = homotopy_classes(p)
    representatives = sorted(
        set(classes.values()), key=list(p.c1.objects).index
    )
    morphisms = {
        x: (p.src.on_object(x), p.tgt.on_object(x)) for x in representatives
    }
    composition = {}
    for x1, x0 in p.composable.objects:
        if classes[x1] == x1 and classes[x0] == x0:
            composition[(x1, x0)] = classes[p.hcompose(x1, x0)]
    identities = {obj: classes[p.unit(obj)] for obj in p.c0.objects}
    LOGGER.debug(
        "tau(%s) has %d morphism classes", p.name, len(representatives)
    )
    return FiniteCategory(
        p.c0.objects,
        morphisms,
        composition,
        identities,
        name=f"tau({p.name})",
    )


@dataclass(frozen=True)
class Companion:
    """Companion ``horizontal`` of a vertical with its two cells.

    ``cell_up : horizontal => u(tgt)`` lies over ``(vertical, id)`` and
    ``cell_down : u(src) => horizontal`` over ``(id, vertical)``.
    """

    vertical: Id
    horizontal: Id
    cell_up: Id
    cell_down: Id


def companion_identities_hold(
    p: PseudoCat, g: Id, x: Id, up: Id, down: Id
) -> bool:
    c1 = p.c1
    if c1.compose(up, down) != p.unit_cell(g):
        return False
    glued = p.hcompose_cells(up, down)
    composite = c1.compose(
        p.lunit[x], c1.compose(glued, c1.inverse(p.runit[x]))
    )
    return bool(composite == p.cell_id(x))


def find_companion(p: PseudoCat, g: Id) -> Companion:
    """First companion of ``g`` in horizontal, then cell, order."""

    source, target = p.c0.morphisms[g]
    unit_source, unit_target = p.unit(source), p.unit(target)
    id_source, id_target = p.c0.identity(source), p.c0.identity(target)
    for x in p.horizontals_from(source):
        if p.tgt.on_object(x) != target:
            continue
        ups = [
            alpha
            for alpha in p.c1.hom(x, unit_target)
            if p.cell_source(alpha) == g
            and p.cell_target(alpha) == id_target
        ]
        downs = [
            beta
            for beta in p.c1.hom(unit_source, x)
            if p.cell_source(beta) == id_source
            and p.cell_target(beta) == g
        ]
        for up, down in itertools.product(ups, downs):
            if companion_identities_hold(p, g, x, up, down):
                return Companion(g, x, up, down)
    raise NoCompanion(f"No companion found for vertical {g!r}")


@dataclass(frozen=True, eq=False)
class PseudoFunctor:
    """``(F0, F1, F_comp, F_unit)`` between pseudo-categories."""

    source: PseudoCat
    target: PseudoCat
    f0: GroupoidFunctor
    f1: GroupoidFunctor
    comp_cell: Mapping[tuple[Id, Id], Id]
    unit_cell: Mapping[Id, Id]

    def check(self) -> tuple[LawResult, ...]:
        return (
            self.f0.check("functor_f0"),
            self.f1.check("functor_f1"),
            _evaluate("span_preserved", self._span_failures()),
            _evaluate("comparison_cells", self._comparison_failures()),
            _evaluate("comparison_natural", self._naturality_failures()),
            _evaluate("associativity", self._associativity_failures()),
            _evaluate("unit_coherence", self._unit_failures()),
        )

    def _span_failures(self) -> Iterator[tuple[Any, ...]]:
        c, d = self.source, self.target
        for x in c.c1.objects:
            fx = self.f1.on_object(x)
            if d.src.on_object(fx) != self.f0.on_object(c.src.on_object(x)):
                yield ("src", x)
            if d.tgt.on_object(fx) != self.f0.on_object(c.tgt.on_object(x)):
                yield ("tgt", x)
        for alpha in c.c1.morphisms:
            fa = self.f1.on_morphism(alpha)
            if d.cell_source(fa) != self.f0.on_morphism(c.cell_source(alpha)):
                yield ("src", alpha)
            if d.cell_target(fa) != self.f0.on_morphism(c.cell_target(alpha)):
                yield ("tgt", alpha)

    def _comparison_failures(self) -> Iterator[tuple[Any, ...]]:
        c, d = self.source, self.target
        for x1, x0 in c.composable.objects:
            cell = self.comp_cell[(x1, x0)]
            expected = (
                d.hcompose(self.f1.on_object(x1), self.f1.on_object(x0)),
                self.f1.on_object(c.hcompose(x1, x0)),
            )
            if d.c1.morphisms.get(cell) != expected or not d.is_globular(
                cell
            ):
                yield ("comp", x1, x0)
        for obj in c.c0.objects:
            cell = self.unit_cell[obj]
            expected = (
                d.unit(self.f0.on_object(obj)),
                self.f1.on_object(c.unit(obj)),
            )
            if d.c1.morphisms.get(cell) != expected or not d.is_globular(
                cell
            ):
                yield ("unit", obj)

    def _naturality_failures(self) -> Iterator[tuple[Any, ...]]:
        c, d = self.source, self.target
        for a1, a0 in c.composable.morphisms:
            x1, y1 = c.c1.morphisms[a1]
            x0, y0 = c.c1.morphisms[a0]
            left = d.vcompose(
                self.f1.on_morphism(c.hcompose_cells(a1, a0)),
                self.comp_cell[(x1, x0)],
            )
            right = d.vcompose(
                self.comp_cell[(y1, y0)],
                d.hcompose_cells(
                    self.f1.on_morphism(a1), self.f1.on_morphism(a0)
                ),
            )
            if left != right:
                yield ("comp", a1, a0)
        for g, (a, b) in c.c0.morphisms.items():
            left = d.vcompose(
                self.f1.on_morphism(c.unit_cell(g)), self.unit_cell[a]
            )
            right = d.vcompose(
                self.unit_cell[b], d.unit_cell(self.f0.on_morphism(g))
            )
            if left != right:
                yield ("unit", g)

    def _associativity_failures(self) -> Iterator[tuple[Any, ...]]:
        c, d = self.source, self.target
        f1 = self.f1
        for x2, x1, x0 in c.composable_triples():
            fx2, fx1, fx0 = (f1.on_object(x) for x in (x2, x1, x0))
            left = d.vcompose(
                f1.on_morphism(c.assoc[(x2, x1, x0)]),
                d.vcompose(
                    self.comp_cell[(c.hcompose(x2, x1), x0)],
                    d.hcompose_cells(
                        self.comp_cell[(x2, x1)], d.cell_id(fx0)
                    ),
                ),
            )
            right = d.vcompose(
                self.comp_cell[(x2, c.hcompose(x1, x0))],
                d.vcompose(
                    d.hcompose_cells(
                        d.cell_id(fx2), self.comp_cell[(x1, x0)]
                    ),
                    d.assoc[(fx2, fx1, fx0)],
                ),
            )
            if left != right:
                yield (x2, x1, x0)

    def _unit_failures(self) -> Iterator[tuple[Any, ...]]:
        c, d = self.source, self.target
        f1 = self.f1
        for x in c.c1.objects:
            fx = f1.on_object(x)
            before = c.tgt.on_object(x)
            after = c.src.on_object(x)
            left = d.vcompose(
                f1.on_morphism(c.lunit[x]),
                d.vcompose(
                    self.comp_cell[(c.unit(before), x)],
                    d.hcompose_cells(self.unit_cell[before], d.cell_id(fx)),
                ),
            )
            if left != d.lunit[fx]:
                yield ("left", x)
            right = d.vcompose(
                f1.on_morphism(c.runit[x]),
                d.vcompose(
                    self.comp_cell[(x, c.unit(after))],
                    d.hcompose_cells(d.cell_id(fx), self.unit_cell[after]),
                ),
            )
            if right != d.runit[fx]:
                yield ("right", x)


def identity_pseudofunctor(p: PseudoCat) -> PseudoFunctor:
    return PseudoFunctor(
        p,
        p,
        identity_functor(p.c0),
        identity_functor(p.c1),
        {
            (x1, x0): p.cell_id(p.hcompose(x1, x0))
            for x1, x0 in p.composable.objects
        },
        {obj: p.cell_id(p.unit(obj)) for obj in p.c0.objects},
    )


@dataclass(frozen=True, eq=False)
class Transformation:
    """Vertical transformation ``zeta : F => G``."""

    source: PseudoFunctor
    target: PseudoFunctor
    zeta0: Mapping[Id, Id]
    zeta1: Mapping[Id, Id]

    def check(self) -> tuple[LawResult, ...]:
        return (
            _evaluate("natural_zeta0", self._natural_failures(0)),
            _evaluate("natural_zeta1", self._natural_failures(1)),
            _evaluate("span_compatible", self._span_failures()),
            _evaluate("composition_compatible", self._comp_failures()),
            _evaluate("unit_compatible", self._unit_failures()),
        )

    def _natural_failures(self, level: int) -> Iterator[tuple[Any, ...]]:
        if level == 0:
            f_fun, g_fun = self.source.f0, self.target.f0
        else:
            f_fun, g_fun = self.source.f1, self.target.f1
        zeta = self.zeta0 if level == 0 else self.zeta1
        domain = f_fun.source
        codomain = f_fun.target
        for obj in domain.objects:
            if codomain.morphisms.get(zeta[obj]) != (
                f_fun.on_object(obj),
                g_fun.on_object(obj),
            ):
                yield ("typing", obj)
        for h, (a, b) in domain.morphisms.items():
            left = codomain.compose(g_fun.on_morphism(h), zeta[a])
            right = codomain.compose(zeta[b], f_fun.on_morphism(h))
            if left != right:
                yield ("square", h)

    def _span_failures(self) -> Iterator[tuple[Any, ...]]:
        c = self.source.source
        d = self.source.target
        for x in c.c1.objects:
            cell = self.zeta1[x]
            if d.cell_source(cell) != self.zeta0[c.src.on_object(x)]:
                yield ("src", x)
            if d.cell_target(cell) != self.zeta0[c.tgt.on_object(x)]:
                yield ("tgt", x)

    def _comp_failures(self) -> Iterator[tuple[Any, ...]]:
        c = self.source.source
        d = self.source.target
        for x1, x0 in c.composable.objects:
            left = d.vcompose(
                self.zeta1[c.hcompose(x1, x0)],
                self.source.comp_cell[(x1, x0)],
            )
            right = d.vcompose(
                self.target.comp_cell[(x1, x0)],
                d.hcompose_cells(self.zeta1[x1], self.zeta1[x0]),
            )
            if left != right:
                yield (x1, x0)

    def _unit_failures(self) -> Iterator[tuple[Any, ...]]:
        c = self.source.source
        d = self.source.target
        for obj in c.c0.objects:
            left = d.vcompose(
                self.zeta1[c.unit(obj)], self.source.unit_cell[obj]
            )
            right = d.vcompose(
                self.target.unit_cell[obj], d.unit_cell(self.zeta0[obj])
            )
            if left != right:
                yield (obj,)


def identity_transformation(f: PseudoFunctor) -> Transformation:
    d = f.target
    return Transformation(
        f,
        f,
        {
            obj: d.c0.identity(f.f0.on_object(obj))
            for obj in f.source.c0.objects
        },
        {x: d.cell_id(f.f1.on_object(x)) for x in f.source.c1.objects},
    )


def unit_of(p: PseudoCat) -> PseudoFunctor:
    """``eta_p : p -> iota(tau(p))`` built from companions."""

    classes = homotopy_classes(p)
    homotopy = tau(p)
    target = iota(homotopy)
    verticals = {
        g: classes[find_companion(p, g).horizontal] for g in p.c0.morphisms
    }
    f0 = GroupoidFunctor(
        p.c0,
        target.c0,
        {obj: obj for obj in p.c0.objects},
        verticals,
    )
    f1 = GroupoidFunctor(
        p.c1,
        target.c1,
        {x: classes[x] for x in p.c1.objects},
        {
            alpha: (
                verticals[p.cell_source(alpha)],
                classes[x],
                classes[y],
                verticals[p.cell_target(alpha)],
            )
            for alpha, (x, y) in p.c1.morphisms.items()
        },
    )
    return PseudoFunctor(
        p,
        target,
        f0,
        f1,
        {
            (x1, x0): target.cell_id(classes[p.hcompose(x1, x0)])
            for x1, x0 in p.composable.objects
        },
        {obj: target.cell_id(classes[p.unit(obj)]) for obj in p.c0.objects},
    )


def count_functors(a: FiniteCategory, b: FiniteCategory) -> int:
    """Number of functors ``a -> b`` by exhaustive enumeration."""

    total = 0
    for images in itertools.product(b.objects, repeat=len(a.objects)):
        object_map = dict(zip(a.objects, images))
        names = list(a.morphisms)
        choices = [
            b.hom(object_map[a.source(f)], object_map[a.target(f)])
            for f in names
        ]
        for assignment in itertools.product(*choices):
            morphism_map = dict(zip(names, assignment))
            functor = GroupoidFunctor(a, b, object_map, morphism_map)
            if functor.check().passed:
                total += 1
    return total


def count_pseudofunctors_into_iota(p: PseudoCat, d: FiniteCategory) -> int:
    """Number of pseudo-functors ``p -> iota(d)``.

    Globular cells of ``iota(d)`` are identities, so comparison cells are
    forced and a pseudo-functor is its object, vertical and horizontal
    assignment subject to commuting squares and strict preservation.
    """

    core = d.core()
    total = 0
    verticals = list(p.c0.morphisms)
    horizontals = list(p.c1.objects)
    for images in itertools.product(d.objects, repeat=len(p.c0.objects)):
        object_map = dict(zip(p.c0.objects, images))
        vertical_choices = [
            core.hom(object_map[p.c0.source(g)], object_map[p.c0.target(g)])
            for g in verticals
        ]
        horizontal_choices = [
            d.hom(
                object_map[p.src.on_object(x)],
                object_map[p.tgt.on_object(x)],
            )
            for x in horizontals
        ]
        for vertical_images in itertools.product(*vertical_choices):
            f0 = dict(zip(verticals, vertical_images))
            functor = GroupoidFunctor(p.c0, core, object_map, f0)
            if not functor.check().passed:
                continue
            for horizontal_images in itertools.product(*horizontal_choices):
                f1 = dict(zip(horizontals, horizontal_images))
                if _strict_into_iota(p, d, object_map, f0, f1):
                    total += 1
    return total


def _strict_into_iota(
    p: PseudoCat,
    d: FiniteCategory,
    object_map: Mapping[Id, Id],
    f0: Mapping[Id, Id],
    f1: Mapping[Id, Id],
) -> bool:
    for x1, x0 in p.composable.objects:
        if f1[p.hcompose(x1, x0)] != d.compose(f1[x1], f1[x0]):
            return False
    for obj in p.c0.objects:
        if f1[p.unit(obj)] != d.identity(object_map[obj]):
            return False
    for alpha, (x, y) in p.c1.morphisms.items():
        lower = f0[p.cell_source(alpha)]
        upper = f0[p.cell_target(alpha)]
        if d.compose(upper, f1[x]) != d.compose(f1[y], lower):
            return False
    return True


def check_adjunction(
    c: FiniteCategory,
    p: PseudoCat,
    d: FiniteCategory | None = None,
) -> AdjunctionReport:
    """Unit, counit and triangle identities of ``tau -| iota``."""

    laws = [
        LawResult("tau_iota_identity", tau(iota(c)) == c),
    ]
    try:
        eta = unit_of(p)
    except NoCompanion as exc:
        laws.append(LawResult("unit_pseudofunctor", False, (str(exc),)))
        return AdjunctionReport(tuple(laws))
    laws.append(_merge("unit_pseudofunctor", eta.check()))
    laws.append(_evaluate("unit_squares", _unit_square_failures(p)))
    laws.append(_evaluate("triangle_iota", _triangle_iota_failures(c)))
    laws.append(_evaluate("triangle_tau", _triangle_tau_failures(p, eta)))
    if d is not None:
        left = count_pseudofunctors_into_iota(p, d)
        right = count_functors(tau(p), d)
        laws.append(
            LawResult(
                "hom_bijection",
                left == right,
                None if left == right else (left, right),
            )
        )
    report = AdjunctionReport(tuple(laws))
    LOGGER.info(
        "Adjunction checks on %s: %s",
        p.name or "pseudo-category",
        "pass" if report.passed else "fail",
    )
    return report


def _unit_square_failures(p: PseudoCat) -> Iterator[tuple[Any, ...]]:
    classes = homotopy_classes(p)
    homotopy = tau(p)
    companions = {
        g: classes[find_companion(p, g).horizontal] for g in p.c0.morphisms
    }
    for g, vertical in companions.items():
        if not homotopy.is_isomorphism(vertical):
            yield ("vertical", g)
    for alpha, (x, y) in p.c1.morphisms.items():
        lower = companions[p.cell_source(alpha)]
        upper = companions[p.cell_target(alpha)]
        if homotopy.compose(upper, classes[x]) != homotopy.compose(
            classes[y], lower
        ):
            yield ("square", alpha)


def _triangle_iota_failures(c: FiniteCategory) -> Iterator[tuple[Any, ...]]:
    p = iota(c)
    eta = unit_of(p)
    for g in p.c0.morphisms:
        if eta.f0.on_morphism(g) != g:
            yield ("vertical", g)
    for x in p.c1.objects:
        if eta.f1.on_object(x) != x:
            yield ("horizontal", x)
    for alpha in p.c1.morphisms:
        if eta.f1.on_morphism(alpha) != alpha:
            yield ("cell", alpha)


def _triangle_tau_failures(
    p: PseudoCat, eta: PseudoFunctor
) -> Iterator[tuple[Any, ...]]:
    classes = homotopy_classes(p)
    target_classes = homotopy_classes(eta.target)
    for x in p.c1.objects:
        if target_classes[eta.f1.on_object(x)] != classes[x]:
            yield (x,)
    for obj in p.c0.objects:
        if eta.f0.on_object(obj) != obj:
            yield (obj,)


def discrete_category(n: int) -> FiniteCategory:
    objects = tuple(f"o{k}" for k in range(n))
    identities = {obj: f"id_{obj}" for obj in objects}
    return FiniteCategory(
        objects,
        {f: (obj, obj) for obj, f in identities.items()},
        {(f, f): f for f in identities.values()},
        identities,
        name=f"discrete{n}",
    )


def preorder_category(
    objects: Iterable[str],
    relations: Iterable[tuple[str, str]],
    name: str = "",
) -> FiniteCategory:
    """Thin category of the reflexive-transitive closure of ``relations``."""

    graph = nx.DiGraph()
    graph.add_nodes_from(objects)
    graph.add_edges_from(relations)
    closure = nx.transitive_closure(graph, reflexive=True)
    morphisms = {f"{a}->{b}": (a, b) for a, b in closure.edges}
    composition = {}
    for a, b in closure.edges:
        for c in closure.successors(b):
            composition[(f"{b}->{c}", f"{a}->{b}")] = f"{a}->{c}"
    return FiniteCategory(
        tuple(graph.nodes),
        morphisms,
        composition,
        {obj: f"{obj}->{obj}" for obj in graph.nodes},
        name=name or "preorder",
    )


def arrow_category() -> FiniteCategory:
    return preorder_category(("a", "b"), (("a", "b"),), name="arrow")


def cyclic_group_category(order: int) -> FiniteCategory:
    """One-object category of the cyclic group ``Z/order``."""

    elements = tuple(f"g{k}" for k in range(order))
    return FiniteCategory(
        ("*",),
        {g: ("*", "*") for g in elements},
        {
            (elements[j], elements[k]): elements[(j + k) % order]
            for j in range(order)
            for k in range(order)
        },
        {"*": elements[0]},
        name=f"Z{order}",
    )


def function_category(
    carriers: Mapping[str, int],
    generators: Iterable[tuple[str, str, tuple[int, ...]]],
    name: str = "",
) -> FiniteCategory:
    """Maps between the sets ``{0..n-1}`` generated by ``generators``.

    Each generator ``(a, b, values)`` sends ``i`` in the carrier of ``a``
    to ``values[i]`` in the carrier of ``b``.
    """

    arrows = {(obj, obj, tuple(range(n))) for obj, n in carriers.items()}
    for a, b, values in generators:
        if len(values) != carriers[a] or not all(
            0 <= v < carriers[b] for v in values
        ):
            raise StructureValidationError(
                f"Generator {values} is not a map {a} -> {b}"
            )
        arrows.add((a, b, tuple(values)))
    while True:
        composites = {
            (a, c, tuple(g[i] for i in f))
            for a, b, f in arrows
            for b2, c, g in arrows
            if b == b2
        }
        if composites <= arrows:
            break
        arrows |= composites

    def label(arrow: tuple[str, str, tuple[int, ...]]) -> str:
        a, b, values = arrow
        return f"{a}->{b}:" + "".join(map(str, values))

    ordered = sorted(arrows)
    composition = {
        (label((b, c, g)), label((a, b, f))): label(
            (a, c, tuple(g[i] for i in f))
        )
        for a, b, f in ordered
        for b2, c, g in ordered
        if b == b2
    }
    return FiniteCategory(
        tuple(carriers),
        {label(arrow): arrow[:2] for arrow in ordered},
        composition,
        {
            obj: label((obj, obj, tuple(range(n))))
            for obj, n in carriers.items()
        },
        name=name or "maps",
    )


def random_function_category(
    rng: random.Random, max_objects: int = 2, max_size: int = 2
) -> FiniteCategory:
    """Closure of a few random maps between small sets.

    Unlike preorders and groups these have parallel non-invertible arrows.
    """

    size = rng.randint(1, max_objects)
    carriers = {f"o{k}": rng.randint(1, max_size) for k in range(size)}
    objects = tuple(carriers)
    generators = []
    for _ in range(rng.randint(1, 2)):
        a, b = rng.choice(objects), rng.choice(objects)
        generators.append(
            (
                a,
                b,
                tuple(
                    rng.randrange(carriers[b]) for _ in range(carriers[a])
                ),
            )
        )
    return function_category(carriers, generators, name=f"maps{size}")


def random_finite_category(
    rng: random.Random, max_objects: int = 4
) -> FiniteCategory:
    """Random preorder, small cyclic group or category of maps."""

    roll = rng.random()
    if roll < 0.2:
        return cyclic_group_category(rng.randint(1, 3))
    if roll < 0.5:
        return random_function_category(rng)
    size = rng.randint(1, max_objects)
    objects = tuple(f"o{k}" for k in range(size))
    relations = [
        (a, b)
        for a in objects
        for b in objects
        if a != b and rng.random() < 0.35
    ]
    return preorder_category(objects, relations, name=f"random{size}")


__all__ = [
    "AdjunctionReport",
    "CoherenceReport",
    "Companion",
    "CompositionUndefined",
    "FiberProduct",
    "FiniteCategory",
    "FiniteGroupoid",
    "GroupoidFunctor",
    "LawReport",
    "LawResult",
    "NoCompanion",
    "PseudoCat",
    "PseudoFunctor",
    "StructureValidationError",
    "Transformation",
    "arrow_category",
    "build_pseudocat",
    "check_adjunction",
    "check_coherence",
    "companion_identities_hold",
    "count_functors",
    "count_pseudofunctors_into_iota",
    "cyclic_group_category",
    "discrete_category",
    "fiber_product",
    "find_companion",
    "function_category",
    "homotopy_classes",
    "identity_functor",
    "identity_pseudofunctor",
    "identity_transformation",
    "iota",
    "preorder_category",
    "random_finite_category",
    "random_function_category",
    "tau",
    "unit_of",
]
