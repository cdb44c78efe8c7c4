"""Bounded instance generation for the verification suites.

Everything here is deterministic given the ``random.Random`` passed in;
samples are drawn from sorted candidate lists so a seed pins the run.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TypeVar

from ..lattice import (
    LatticeSpacetime,
    LocMorphism,
    SpacetimeValidationError,
    Translation,
    causally_disjoint,
    diamond,
    inclusion,
    slab,
)
from ..lbord import BordObject, Bordism, Germ, companion
from ..pseudocat import (
    FiniteCategory,
    arrow_category,
    cyclic_group_category,
    discrete_category,
    preorder_category,
    random_finite_category,
)

LOGGER = logging.getLogger(__name__)

T = TypeVar("T")

DIAMOND_WIDTH = 3


def sample(items: Sequence[T], rng: random.Random, size: int) -> list[T]:
    """Seeded sample that keeps the original order."""

    if len(items) <= size:
        return list(items)
    chosen = sorted(rng.sample(range(len(items)), size))
    return [items[k] for k in chosen]


def sample_categories(
    rng: random.Random, count: int
) -> list[FiniteCategory]:
    """Named small categories followed by ``count`` random ones."""

    fixed = [
        discrete_category(1),
        discrete_category(2),
        arrow_category(),
        preorder_category(("a", "b", "c"), (("a", "b"), ("b", "c")), "chain3"),
        preorder_category(("a", "b"), (("a", "b"), ("b", "a")), "iso"),
        cyclic_group_category(2),
        cyclic_group_category(3),
    ]
    generated = [random_finite_category(rng) for _ in range(count)]
    return fixed + generated


def kg_regions(circumference: int, t_max: int) -> list[LatticeSpacetime]:
    """Slabs of three heights plus a diamond where it fits."""

    heights = sorted({2, max(2, t_max // 2), t_max})
    regions = [slab(circumference, 0, height) for height in heights]
    if circumference > DIAMOND_WIDTH:
        regions.append(diamond(circumference, 2, 0, DIAMOND_WIDTH - 1))
    return regions


def translation_targets(circumference: int) -> tuple[int, ...]:
    return (0, 1) if circumference else (0,)


def cauchy_morphisms(circumference: int, t_max: int) -> list[LocMorphism]:
    """Sub-slab inclusions and translated slabs inside ``[0, t_max]``."""

    outer = slab(circumference, 0, t_max)
    middle = slab(circumference, 1, t_max - 1)
    morphisms = [
        inclusion(outer, outer),
        inclusion(middle, outer),
        inclusion(slab(circumference, 1, 3), outer),
        inclusion(slab(circumference, 1, 3), middle),
    ]
    thin = slab(circumference, 0, 2)
    for dt in (1, t_max - 2):
        for dx in translation_targets(circumference):
            morphisms.append(LocMorphism(thin, outer, Translation(dt, dx)))
    return morphisms


def non_cauchy_morphisms(
    circumference: int, t_max: int
) -> list[LocMorphism]:
    """Diamond inclusions into the ambient slab."""

    if circumference <= DIAMOND_WIDTH:
        return []
    outer = slab(circumference, 0, t_max)
    return [
        inclusion(diamond(circumference, t, 0, DIAMOND_WIDTH - 1), outer)
        for t in (2, t_max // 2)
    ]


def composable_morphisms(
    circumference: int, t_max: int
) -> list[tuple[LocMorphism, LocMorphism]]:
    """Pairs ``(f, g)`` with ``g . f`` defined."""

    outer = slab(circumference, 0, t_max)
    middle = slab(circumference, 1, t_max - 1)
    inner = slab(circumference, 1, 3)
    pairs = [
        (inclusion(inner, middle), inclusion(middle, outer)),
        (inclusion(outer, outer), inclusion(outer, outer)),
    ]
    thin = slab(circumference, 0, 2)
    for dx in translation_targets(circumference):
        pairs.append(
            (
                LocMorphism(thin, middle, Translation(1, dx)),
                inclusion(middle, outer),
            )
        )
    if circumference > DIAMOND_WIDTH and t_max >= 6:
        core = diamond(circumference, 3, 0, DIAMOND_WIDTH - 1)
        pairs.append((inclusion(core, middle), inclusion(middle, outer)))
    return pairs


def disjoint_diamond_pairs(
    circumference: int,
    t_max: int,
    rng: random.Random,
    size: int,
) -> list[tuple[LocMorphism, LocMorphism]]:
    """Causally disjoint diamond pairs in ``slab(L, 0, t_max)``."""

    if circumference <= DIAMOND_WIDTH:
        return []
    outer = slab(circumference, 0, t_max)
    candidates = []
    for t in range(1, t_max - 2):
        diamonds = []
        for x in range(circumference):
            try:
                region = diamond(circumference, t, x, x + DIAMOND_WIDTH - 1)
            except SpacetimeValidationError:
                continue
            diamonds.append(inclusion(region, outer))
        for first in diamonds:
            for second in diamonds:
                if first is not second and causally_disjoint(first, second):
                    candidates.append((first, second))
    LOGGER.debug(
        "Found %d causally disjoint diamond pairs on L=%d",
        len(candidates),
        circumference,
    )
    return sample(candidates, rng, size)


def slab_object(circumference: int, height: int) -> BordObject:
    return BordObject.slab(circumference, 0, 1 + height, 0)


def all_bordism_classes(circumference: int, t_max: int) -> list[Bordism]:
    """Slab bordisms of every duration and rotation below ``t_max``.

    Odd entries carry minimal collars so both collar regimes are covered.
    """

    rotations = tuple(range(circumference)) or (0,)
    bordisms = []
    for h0 in (0, 1):
        for h1 in (0, 1):
            src, tgt = slab_object(circumference, h0), slab_object(
                circumference, h1
            )
            for duration in range(t_max - 1):
                top = max(1 + h0, duration + 1 + h1)
                n = slab(circumference, 0, top)
                for rotation in rotations:
                    minimal = len(bordisms) % 2 == 1
                    bordisms.append(
                        Bordism(
                            src,
                            tgt,
                            n,
                            Translation(),
                            Translation(duration, rotation),
                            v0=src.marked if minimal else frozenset(),
                            v1=tgt.marked if minimal else frozenset(),
                        )
                    )
    return bordisms


def capped_slab(circumference: int) -> LatticeSpacetime:
    """Rows ``0, 1`` in full with the two sites ``x = 0, 1`` on top."""

    return LatticeSpacetime(
        circumference,
        slab(circumference, 0, 1).sites | {(2, 0), (2, 1)},
    )


def translation_germs(circumference: int) -> list[Germ]:
    """Rotations between slab objects and one rotation of a capped slab.

    Rotating the capped slab pushes a cap site off the region, so its
    companion carries a collar smaller than the source object.
    """

    rotations = tuple(range(circumference)) or (0,)
    germs = [
        Germ(
            slab_object(circumference, h0),
            slab_object(circumference, h1),
            Translation(0, dx),
        )
        for h0 in (0, 1)
        for h1 in (0, 1)
        for dx in rotations
    ]
    if circumference >= 3:
        capped = BordObject.at(capped_slab(circumference), 0)
        germs.append(Germ(capped, capped, Translation(0, 1)))
    return germs


def bordism_classes(
    circumference: int, t_max: int, rng: random.Random, size: int
) -> list[Bordism]:
    bordisms = sample(all_bordism_classes(circumference, t_max), rng, size)
    LOGGER.info(
        "Sampled %d bordism classes on L=%d up to T=%d",
        len(bordisms),
        circumference,
        t_max,
    )
    return bordisms


def composable_bordisms(
    bordisms: Sequence[Bordism], rng: random.Random, size: int
) -> list[tuple[Bordism, Bordism]]:
    """Pairs ``(b1, b0)`` whose glued duration stays small."""

    candidates = [
        (b1, b0)
        for b0 in bordisms
        for b1 in bordisms
        if b0.tgt == b1.src and b0.duration + b1.duration <= 6
    ]
    return sample(candidates, rng, size)


@dataclass(frozen=True)
class CompareInstances:
    """Everything the comparison suite runs on for one circumference."""

    circumference: int
    cauchy: tuple[LocMorphism, ...]
    non_cauchy: tuple[LocMorphism, ...]
    composable: tuple[tuple[LocMorphism, LocMorphism], ...]
    disjoint: tuple[tuple[LocMorphism, LocMorphism], ...]
    bordisms: tuple[Bordism, ...]
    germs: tuple[Germ, ...]
    composable_bordisms: tuple[tuple[Bordism, Bordism], ...]

    @property
    def morphisms(self) -> tuple[LocMorphism, ...]:
        return self.cauchy + self.non_cauchy


def compare_instances(
    circumference: int,
    t_max: int,
    rng: random.Random,
    classes: int,
    samples: int,
) -> CompareInstances:
    germs = tuple(translation_germs(circumference))
    bordisms = bordism_classes(circumference, t_max, rng, classes) + [
        companion(germ) for germ in germs
    ]
    return CompareInstances(
        circumference=circumference,
        cauchy=tuple(cauchy_morphisms(circumference, t_max)),
        non_cauchy=tuple(non_cauchy_morphisms(circumference, t_max)),
        composable=tuple(composable_morphisms(circumference, t_max)),
        disjoint=tuple(
            disjoint_diamond_pairs(circumference, t_max, rng, samples)
        ),
        bordisms=tuple(bordisms),
        germs=germs,
        composable_bordisms=tuple(
            composable_bordisms(bordisms, rng, samples)
        ),
    )


__all__ = [
    "CompareInstances",
    "all_bordism_classes",
    "bordism_classes",
    "capped_slab",
    "cauchy_morphisms",
    "compare_instances",
    "composable_bordisms",
    "composable_morphisms",
    "disjoint_diamond_pairs",
    "kg_regions",
    "non_cauchy_morphisms",
    "sample",
    "sample_categories",
    "slab_object",
    "translation_germs",
]
