"""Finite causally convex regions of the integer Minkowski cylinder.

Sites are pairs ``(t, x)`` with ``x`` taken modulo the circumference
``L``. ``L = 0`` encodes the one-dimensional model with a single spatial
point. The causal step relation is ``(t, x) < (t + 1, x)`` and
``(t, x) < (t + 1, x +- 1)``.
"""

from __future__ import annotations

import json
import logging
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any

import networkx as nx

LOGGER = logging.getLogger(__name__)

Site = tuple[int, int]

_HEADER_PATTERN = re.compile(r"^L\s*=\s*(\d+)$")
_ROW_PATTERN = re.compile(r"^t\s*=\s*(-?\d+)\s*:\s*(.*)$")
_RANGE_PATTERN = re.compile(r"^(\d+)(?:\s*-\s*(\d+))?$")


class SpacetimeValidationError(ValueError):
    """Raised when a site-set is not an admissible lattice spacetime."""


class SiteNotInSpacetime(ValueError):
    """Raised when a query refers to sites outside the spacetime."""


class NotACauchyRow(ValueError):
    """Raised when a time row is not a Cauchy row of its region."""


class MorphismValidationError(ValueError):
    """Raised when a translation does not define a Loc morphism."""


class TargetMismatch(ValueError):
    """Raised when two morphisms are expected to share a target."""


class LiteralParseError(ValueError):
    """Raised when a spacetime literal is malformed."""


def wrap(x: int, circumference: int) -> int:
    return x % circumference if circumference else 0


def successors(site: Site, circumference: int) -> tuple[Site, ...]:
    t, x = site
    if circumference == 0:
        return ((t + 1, 0),)
    return tuple(
        (t + 1, wrap(x + dx, circumference)) for dx in (-1, 0, 1)
    )


def predecessors(site: Site, circumference: int) -> tuple[Site, ...]:
    t, x = site
    if circumference == 0:
        return ((t - 1, 0),)
    return tuple(
        (t - 1, wrap(x + dx, circumference)) for dx in (-1, 0, 1)
    )


def stencil(site: Site, circumference: int) -> tuple[Site, ...]:
    """Neighbours used by the discrete Klein-Gordon operator."""

    t, x = site
    return (
        (t + 1, x),
        (t - 1, x),
        (t, wrap(x + 1, circumference)),
        (t, wrap(x - 1, circumference)),
    )


@dataclass(frozen=True)
class Translation:
    """Time/space translation, the only isometries of the cylinder."""

    dt: int = 0
    dx: int = 0

    def __add__(self, other: Translation) -> Translation:
        return Translation(self.dt + other.dt, self.dx + other.dx)

    def __sub__(self, other: Translation) -> Translation:
        return Translation(self.dt - other.dt, self.dx - other.dx)

    def __neg__(self) -> Translation:
        return Translation(-self.dt, -self.dx)

    def normalized(self, circumference: int) -> Translation:
        return Translation(self.dt, wrap(self.dx, circumference))

    def apply(self, site: Site, circumference: int) -> Site:
        t, x = site
        return (t + self.dt, wrap(x + self.dx, circumference))

    def apply_all(
        self, sites: Iterable[Site], circumference: int
    ) -> frozenset[Site]:
        return frozenset(self.apply(site, circumference) for site in sites)

    def to_dict(self) -> dict[str, int]:
        return {"dt": self.dt, "dx": self.dx}


def _reach(
    graph: nx.DiGraph, seeds: Iterable[Site], forward: bool
) -> set[Site]:
    walk = nx.descendants if forward else nx.ancestors
    reached = set(seeds)
    covered: set[Site] = set()
    for seed in sorted(reached, reverse=not forward):
        if seed in covered:
            continue
        found = walk(graph, seed)
        covered |= found
        reached |= found
    return reached


@lru_cache(maxsize=64)
def _cylinder_window(
    circumference: int, t_lo: int, t_hi: int
) -> nx.DiGraph:
    """Step graph of the full cylinder between two times."""

    graph = nx.DiGraph()
    for t in range(t_lo, t_hi + 1):
        for x in range(circumference or 1):
            graph.add_node((t, x))
            if t < t_hi:
                graph.add_edges_from(
                    ((t, x), successor)
                    for successor in successors((t, x), circumference)
                )
    return graph


@dataclass(frozen=True)
class LatticeSpacetime:
    """A connected, causally convex region at least two rows thick."""

    circumference: int
    sites: frozenset[Site] = field(default_factory=frozenset)

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        if self.circumference < 0 or self.circumference in (1, 2):
            raise SpacetimeValidationError(
                f"Circumference must be 0 or at least 3, got "
                f"{self.circumference}"
            )
        object.__setattr__(
            self,
            "sites",
            frozenset(
                (int(t), wrap(int(x), self.circumference))
                for t, x in self.sites
            ),
        )
        self._validate()

    def _validate(self) -> None:
        if not self.sites:
            raise SpacetimeValidationError("Spacetime has no sites")
        times = {t for t, _ in self.sites}
        if not any(t + 1 in times for t in times):
            raise SpacetimeValidationError(
                "Spacetime needs two consecutive time rows"
            )
        if not nx.is_weakly_connected(self.step_graph):
            raise SpacetimeValidationError("Spacetime is not connected")
        t_lo, t_hi = min(times), max(times)
        window = _cylinder_window(self.circumference, t_lo, t_hi)
        future = _reach(window, self.sites, forward=True)
        past = _reach(window, self.sites, forward=False)
        outside = (future & past) - self.sites
        if outside:
            witness = min(outside)
            raise SpacetimeValidationError(
                f"Site set is not causally convex in the cylinder; "
                f"{witness} lies on a chain between sites"
            )

    @property
    def is_one_dimensional(self) -> bool:
        return self.circumference == 0

    @property
    def spatial_sites(self) -> tuple[int, ...]:
        return tuple(range(self.circumference)) or (0,)

    @cached_property
    def step_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.sites)
        graph.add_edges_from(
            (site, successor)
            for site in self.sites
            for successor in successors(site, self.circumference)
            if successor in self.sites
        )
        return graph

    @cached_property
    def rows(self) -> tuple[int, ...]:
        return tuple(sorted({t for t, _ in self.sites}))

    @cached_property
    def _rows_by_time(self) -> Mapping[int, frozenset[int]]:
        grouped: dict[int, set[int]] = {}
        for t, x in self.sites:
            grouped.setdefault(t, set()).add(x)
        return {t: frozenset(xs) for t, xs in grouped.items()}

    def row(self, t: int) -> frozenset[int]:
        return self._rows_by_time.get(t, frozenset())

    @property
    def t_min(self) -> int:
        return self.rows[0]

    @property
    def t_max(self) -> int:
        return self.rows[-1]

    @cached_property
    def width(self) -> int:
        return max(len(xs) for xs in self._rows_by_time.values())

    @cached_property
    def interior(self) -> frozenset[Site]:
        """Sites whose full Klein-Gordon stencil lies in the region."""

        return frozenset(
            site
            for site in self.sites
            if all(
                neighbour in self.sites
                for neighbour in stencil(site, self.circumference)
            )
        )

    @cached_property
    def cauchy_rows(self) -> tuple[CauchyRow, ...]:
        rows = []
        for t in self.rows:
            if _cauchy_defect(self, t) is None:
                rows.append(CauchyRow(self, t))
        return tuple(rows)

    def minimal_cauchy_row(self) -> CauchyRow:
        if not self.cauchy_rows:
            raise NotACauchyRow(f"{self.describe()} has no Cauchy row")
        return self.cauchy_rows[0]

    def contains(self, sites: Iterable[Site]) -> bool:
        return all(site in self.sites for site in sites)

    def restrict(self, sites: Iterable[Site]) -> LatticeSpacetime:
        subset = frozenset(sites)
        if not subset <= self.sites:
            raise SiteNotInSpacetime(
                f"Cannot restrict {self.describe()} to foreign sites"
            )
        return LatticeSpacetime(self.circumference, subset)

    def translated(self, translation: Translation) -> LatticeSpacetime:
        return LatticeSpacetime(
            self.circumference,
            translation.apply_all(self.sites, self.circumference),
        )

    def describe(self) -> str:
        return (
            f"L={self.circumference} t=[{self.t_min},{self.t_max}] "
            f"|sites|={len(self.sites)}"
        )


def slab(circumference: int, t_lo: int, t_hi: int) -> LatticeSpacetime:
    """Full rows ``t_lo..t_hi`` (inclusive) of the cylinder."""

    xs = tuple(range(circumference)) or (0,)
    return LatticeSpacetime(
        circumference,
        frozenset((t, x) for t in range(t_lo, t_hi + 1) for x in xs),
    )


def diamond(
    circumference: int, t: int, x_lo: int, x_hi: int
) -> LatticeSpacetime:
    """Causal diamond with core rows ``t, t+1`` spanning ``x_lo..x_hi``.

    Rows shrink by one site on each side per step away from the core.
    """

    width = x_hi - x_lo + 1
    if circumference == 0 or width < 1 or width > circumference - 1:
        raise SpacetimeValidationError(
            f"Diamond width {width} does not fit circumference "
            f"{circumference}"
        )
    sites: set[Site] = set()
    for k in range(width):
        lo, hi = x_lo + k, x_hi - k
        if lo > hi:
            break
        for x in range(lo, hi + 1):
            sites.add((t - k, x))
            sites.add((t + 1 + k, x))
    return LatticeSpacetime(circumference, frozenset(sites))


def causal_future(
    m: LatticeSpacetime, seeds: Iterable[Site]
) -> frozenset[Site]:
    """``J+_M(S)``: reflexive-transitive closure of the step relation."""

    return _closure(m, seeds, forward=True)


def causal_past(
    m: LatticeSpacetime, seeds: Iterable[Site]
) -> frozenset[Site]:
    return _closure(m, seeds, forward=False)


def causal_shadow(
    m: LatticeSpacetime, seeds: Iterable[Site]
) -> frozenset[Site]:
    """``J_M(S) = J+_M(S) | J-_M(S)``."""

    seeds = frozenset(seeds)
    return causal_future(m, seeds) | causal_past(m, seeds)


def _closure(
    m: LatticeSpacetime, seeds: Iterable[Site], forward: bool
) -> frozenset[Site]:
    seed_set = frozenset(seeds)
    missing = seed_set - m.sites
    if missing:
        raise SiteNotInSpacetime(
            f"Sites {sorted(missing)[:3]} are not in {m.describe()}"
        )
    return frozenset(_reach(m.step_graph, seed_set, forward))


def convexity_witness(
    m: LatticeSpacetime, sites: Iterable[Site]
) -> Site | None:
    """A site of ``J+(S) & J-(S)`` outside ``S``, or ``None``."""

    subset = frozenset(sites)
    outside = (causal_future(m, subset) & causal_past(m, subset)) - subset
    return min(outside) if outside else None


def is_causally_convex(m: LatticeSpacetime, sites: Iterable[Site]) -> bool:
    return convexity_witness(m, sites) is None


def _cauchy_defect(m: LatticeSpacetime, t0: int) -> str | None:
    row = m.row(t0)
    if not row:
        return f"row t={t0} is empty"
    if m.row(t0 + 1) != row:
        return f"rows t={t0} and t={t0 + 1} differ"
    graph = m.step_graph
    for site in m.sites:
        t, x = site
        if graph.out_degree(site) == 0 and t < t0:
            return f"chain ends at {site} before row t={t0}"
        if graph.in_degree(site) == 0 and t > t0:
            return f"chain starts at {site} after row t={t0}"
        if t > t0 + 1 and (t - 1, x) not in m.interior:
            return f"{site} is not determined by the rows at t={t0}"
        if t < t0 and (t + 1, x) not in m.interior:
            return f"{site} is not determined by the rows at t={t0}"
    return None


@dataclass(frozen=True)
class CauchyRow:
    """Row ``t0`` of ``parent`` together with its successor row."""

    parent: LatticeSpacetime
    t0: int

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        defect = _cauchy_defect(self.parent, self.t0)
        if defect is not None:
            raise NotACauchyRow(defect)

    @property
    def xs(self) -> tuple[int, ...]:
        return tuple(sorted(self.parent.row(self.t0)))

    @property
    def sites(self) -> frozenset[Site]:
        return frozenset((self.t0, x) for x in self.xs)

    @property
    def pair_sites(self) -> frozenset[Site]:
        return self.sites | frozenset((self.t0 + 1, x) for x in self.xs)


@dataclass(frozen=True)
class LocMorphism:
    """Translation embedding ``source -> target`` with convex image."""

    source: LatticeSpacetime
    target: LatticeSpacetime
    translation: Translation = Translation()

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        if self.source.circumference != self.target.circumference:
            raise MorphismValidationError(
                "Source and target circumferences differ"
            )
        object.__setattr__(
            self,
            "translation",
            self.translation.normalized(self.target.circumference),
        )
        if not self.image <= self.target.sites:
            raise MorphismValidationError(
                "Translated source does not lie in the target"
            )
        witness = convexity_witness(self.target, self.image)
        if witness is not None:
            raise MorphismValidationError(
                f"Image is not causally convex in the target (at {witness})"
            )

    @property
    def time_shift(self) -> int:
        return self.translation.dt

    @property
    def space_shift(self) -> int:
        return self.translation.dx

    @cached_property
    def image(self) -> frozenset[Site]:
        return self.translation.apply_all(
            self.source.sites, self.source.circumference
        )

    def apply(self, site: Site) -> Site:
        if site not in self.source.sites:
            raise SiteNotInSpacetime(f"{site} is not in the source")
        return self.translation.apply(site, self.source.circumference)

    def then(self, after: LocMorphism) -> LocMorphism:
        """The composite ``after . self``."""

        if after.source != self.target:
            raise TargetMismatch("Morphisms are not composable")
        return LocMorphism(
            self.source, after.target, self.translation + after.translation
        )

    def factorization(self) -> tuple[LocMorphism, LocMorphism]:
        """Translation isomorphism onto the image, then the inclusion."""

        image = self.target.restrict(self.image)
        return (
            LocMorphism(self.source, image, self.translation),
            inclusion(image, self.target),
        )


def identity(m: LatticeSpacetime) -> LocMorphism:
    return LocMorphism(m, m, Translation())


def inclusion(sub: LatticeSpacetime, m: LatticeSpacetime) -> LocMorphism:
    return LocMorphism(sub, m, Translation())


def is_cauchy_morphism(f: LocMorphism) -> bool:
    """True iff some Cauchy row pair of the target lies in the image."""

    return any(row.pair_sites <= f.image for row in f.target.cauchy_rows)


def causally_disjoint(f1: LocMorphism, f2: LocMorphism) -> bool:
    if f1.target != f2.target:
        raise TargetMismatch("Causal disjointness needs a common target")
    return not (causal_shadow(f1.target, f1.image) & f2.image)


def _parse_ranges(text: str) -> set[int]:
    values: set[int] = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = _RANGE_PATTERN.match(chunk)
        if match is None:
            raise LiteralParseError(f"Bad x-range {chunk!r}")
        start = int(match.group(1))
        end = int(match.group(2) or start)
        values.update(range(start, end + 1))
    return values


def _format_ranges(xs: Iterable[int]) -> str:
    ordered = sorted(xs)
    chunks: list[str] = []
    start = previous = ordered[0]
    for x in ordered[1:]:
        if x == previous + 1:
            previous = x
            continue
        chunks.append(_chunk(start, previous))
        start = previous = x
    chunks.append(_chunk(start, previous))
    return ",".join(chunks)


def _chunk(start: int, end: int) -> str:
    return str(start) if start == end else f"{start}-{end}"


def parse_spacetime(text: str) -> LatticeSpacetime:
    """Parse the text literal (``L=<int>`` then ``t=<int>: ranges``).

    Documents starting with ``{`` are read as the JSON equivalent.
    """

    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise LiteralParseError(f"Invalid JSON literal: {exc}") from exc
        return spacetime_from_dict(payload)
    circumference: int | None = None
    sites: set[Site] = set()
    for raw_line in stripped.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER_PATTERN.match(line)
        if header is not None:
            circumference = int(header.group(1))
            continue
        row = _ROW_PATTERN.match(line)
        if row is None:
            raise LiteralParseError(f"Unrecognised line {raw_line!r}")
        t = int(row.group(1))
        sites.update((t, x) for x in _parse_ranges(row.group(2)))
    if circumference is None:
        raise LiteralParseError("Missing 'L=<int>' header")
    return LatticeSpacetime(circumference, frozenset(sites))


def format_spacetime(m: LatticeSpacetime) -> str:
    lines = [f"L={m.circumference}"]
    lines.extend(f"t={t}: {_format_ranges(m.row(t))}" for t in m.rows)
    return "\n".join(lines) + "\n"


def spacetime_from_dict(payload: Mapping[str, Any]) -> LatticeSpacetime:
    if not isinstance(payload, Mapping) or "L" not in payload:
        raise LiteralParseError("Spacetime mapping needs an 'L' entry")
    rows = payload.get("rows")
    if not isinstance(rows, Mapping):
        raise LiteralParseError("Spacetime mapping needs a 'rows' table")
    sites: set[Site] = set()
    for key, value in rows.items():
        xs = (
            _parse_ranges(value)
            if isinstance(value, str)
            else {int(x) for x in value}
        )
        sites.update((int(key), x) for x in xs)
    return LatticeSpacetime(int(payload["L"]), frozenset(sites))


def spacetime_to_dict(m: LatticeSpacetime) -> dict[str, Any]:
    return {
        "L": m.circumference,
        "rows": {str(t): _format_ranges(m.row(t)) for t in m.rows},
    }


__all__ = [
    "CauchyRow",
    "LatticeSpacetime",
    "LiteralParseError",
    "LocMorphism",
    "MorphismValidationError",
    "NotACauchyRow",
    "Site",
    "SiteNotInSpacetime",
    "SpacetimeValidationError",
    "TargetMismatch",
    "Translation",
    "causal_future",
    "causal_past",
    "causal_shadow",
    "causally_disjoint",
    "convexity_witness",
    "diamond",
    "format_spacetime",
    "identity",
    "inclusion",
    "is_causally_convex",
    "is_cauchy_morphism",
    "parse_spacetime",
    "predecessors",
    "slab",
    "spacetime_from_dict",
    "spacetime_to_dict",
    "stencil",
    "successors",
    "wrap",
]
