"""Discrete free scalar field on lattice spacetimes.

The Klein-Gordon operator uses the unit leapfrog stencil
``(P phi)(t, x) = phi(t+1, x) + phi(t-1, x) - phi(t, x+1) - phi(t, x-1)
+ m0^2 phi(t, x)`` and is defined on stencil-interior sites. Green
operators are computed by exact recursion; the three Poisson vector
spaces (observables, solutions, initial data) and the maps between them
are exact rational matrices.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

from .lattice import (
    CauchyRow,
    LatticeSpacetime,
    LocMorphism,
    NotACauchyRow,
    Site,
    SiteNotInSpacetime,
    causal_future,
    causal_past,
    stencil,
    wrap,
)
from .linalg import RationalMatrix
from .scalars import ZERO, Rational, to_rational

LOGGER = logging.getLogger(__name__)

Values = Mapping[Site, Rational]


class SourceTouchesBoundary(ValueError):
    """Raised when a Green operator source leaves the stencil interior."""


class DegenerateRegion(ValueError):
    """Raised when a region has neither interior sites nor a Cauchy row."""


class NotCauchy(ValueError):
    """Raised when a map needs a Cauchy morphism and gets another one."""


class FormMismatch(ValueError):
    """Raised when a linear map does not preserve the Poisson forms."""


@dataclass(frozen=True)
class Field:
    """Rational function on the sites of a spacetime (zeros omitted)."""

    spacetime: LatticeSpacetime
    values: Values = field(default_factory=dict)

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        cleaned = {
            site: to_rational(value)
            for site, value in self.values.items()
            if value != 0
        }
        stray = set(cleaned) - self.spacetime.sites
        if stray:
            raise SiteNotInSpacetime(
                f"Field values at {sorted(stray)[:3]} lie outside "
                f"{self.spacetime.describe()}"
            )
        object.__setattr__(self, "values", cleaned)

    @classmethod
    def zero(cls, m: LatticeSpacetime) -> Field:
        return cls(m, {})

    @classmethod
    def delta(cls, m: LatticeSpacetime, site: Site) -> Field:
        return cls(m, {site: 1})

    def __getitem__(self, site: Site) -> Rational:
        return self.values.get(site, ZERO)

    @property
    def support(self) -> frozenset[Site]:
        return frozenset(self.values)

    def __add__(self, other: Field) -> Field:
        merged = dict(self.values)
        for site, value in other.values.items():
            merged[site] = merged.get(site, ZERO) + value
        return Field(self.spacetime, merged)

    def __sub__(self, other: Field) -> Field:
        return self + other.scaled(-1)

    def scaled(self, factor: Any) -> Field:
        factor = to_rational(factor)
        return Field(
            self.spacetime,
            {site: factor * value for site, value in self.values.items()},
        )

    def restricted(self, domain: Iterable[Site]) -> Field:
        keep = frozenset(domain)
        return Field(
            self.spacetime,
            {s: v for s, v in self.values.items() if s in keep},
        )

    def pairing(self, other: Field) -> Rational:
        """Counting-measure integral of the pointwise product."""

        return sum(
            (value * other[site] for site, value in self.values.items()),
            ZERO,
        )


@dataclass(frozen=True)
class PoissonSpace:
    """Finite-dimensional rational vector space with a skew form."""

    labels: tuple[str, ...]
    form: RationalMatrix

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        object.__setattr__(self, "labels", tuple(self.labels))
        size = len(self.labels)
        if self.form.shape != (size, size):
            raise FormMismatch(
                f"Form of shape {self.form.shape} does not fit {size} labels"
            )
        if self.form.transpose() != -self.form:
            raise FormMismatch("Poisson form is not antisymmetric")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def is_nondegenerate(self) -> bool:
        return self.form.rank() == self.dim

    def pair(
        self, left: Iterable[Rational], right: Iterable[Rational]
    ) -> Rational:
        row = RationalMatrix.from_rows([list(left)])
        column = RationalMatrix.from_columns([list(right)], self.dim)
        return (row @ self.form @ column).entry(0, 0)


@dataclass(frozen=True)
class PoissonMap:
    """Linear map (columns are images of source basis vectors)."""

    source: PoissonSpace
    target: PoissonSpace
    matrix: RationalMatrix

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        expected = (self.target.dim, self.source.dim)
        if self.matrix.shape != expected:
            raise FormMismatch(
                f"Matrix shape {self.matrix.shape} does not fit {expected}"
            )
        pulled_back = (
            self.matrix.transpose() @ self.target.form @ self.matrix
        )
        if pulled_back != self.source.form:
            raise FormMismatch("Linear map does not preserve Poisson forms")

    @classmethod
    def identity(cls, space: PoissonSpace) -> PoissonMap:
        return cls(space, space, RationalMatrix.identity(space.dim))

    def then(self, after: PoissonMap) -> PoissonMap:
        """The composite ``after . self``."""

        if after.source != self.target:
            raise FormMismatch("Poisson maps are not composable")
        return PoissonMap(
            self.source, after.target, after.matrix @ self.matrix
        )

    def inverse(self) -> PoissonMap:
        return PoissonMap(self.target, self.source, self.matrix.inverse())

    def is_isomorphism(self) -> bool:
        return self.matrix.is_invertible()


def apply_P(m: LatticeSpacetime, phi: Field, m0sq: Any) -> Field:
    """Klein-Gordon operator, evaluated on the stencil interior."""

    mass = to_rational(m0sq)
    values = phi.values
    result: dict[Site, Rational] = {}
    for site in m.interior:
        t, x = site
        result[site] = (
            values.get((t + 1, x), ZERO)
            + values.get((t - 1, x), ZERO)
            - values.get((t, wrap(x + 1, m.circumference)), ZERO)
            - values.get((t, wrap(x - 1, m.circumference)), ZERO)
            + mass * values.get(site, ZERO)
        )
    return Field(m, result)


def extend_P(m: LatticeSpacetime, psi: Field, m0sq: Any) -> Field:
    """``P`` of an interior-supported field, zero-extended to all of M."""

    stray = psi.support - m.interior
    if stray:
        raise SourceTouchesBoundary(
            f"Field is not supported in the interior (e.g. {min(stray)})"
        )
    mass = to_rational(m0sq)
    result: dict[Site, Rational] = {}
    for site, value in psi.values.items():
        for neighbour, weight in zip(
            stencil(site, m.circumference), (1, 1, -1, -1)
        ):
            result[neighbour] = result.get(neighbour, ZERO) + weight * value
        result[site] = result.get(site, ZERO) + mass * value
    return Field(m, result)


def second_interior(m: LatticeSpacetime) -> frozenset[Site]:
    """Sites whose stencil lies in the interior."""

    return frozenset(
        site
        for site in m.interior
        if all(n in m.interior for n in stencil(site, m.circumference))
    )


def _retarded(
    m: LatticeSpacetime, source: Values, mass: Rational
) -> dict[Site, Rational]:
    circumference = m.circumference
    psi: dict[Site, Rational] = {}
    for site in sorted(m.sites):
        t, x = site
        base = (t - 1, x)
        value = (
            source.get(base, ZERO)
            - psi.get((t - 2, x), ZERO)
            + psi.get((t - 1, wrap(x + 1, circumference)), ZERO)
            + psi.get((t - 1, wrap(x - 1, circumference)), ZERO)
            - mass * psi.get(base, ZERO)
        )
        if value != 0:
            psi[site] = value
    return psi


def _advanced(
    m: LatticeSpacetime, source: Values, mass: Rational
) -> dict[Site, Rational]:
    circumference = m.circumference
    psi: dict[Site, Rational] = {}
    for site in sorted(m.sites, reverse=True):
        t, x = site
        base = (t + 1, x)
        value = (
            source.get(base, ZERO)
            - psi.get((t + 2, x), ZERO)
            + psi.get((t + 1, wrap(x + 1, circumference)), ZERO)
            + psi.get((t + 1, wrap(x - 1, circumference)), ZERO)
            - mass * psi.get(base, ZERO)
        )
        if value != 0:
            psi[site] = value
    return psi


def _require_interior_source(m: LatticeSpacetime, src: Field) -> None:
    stray = src.support - m.interior
    if stray:
        raise SourceTouchesBoundary(
            f"Source touches the region boundary at {min(stray)}"
        )


def green_retarded(m: LatticeSpacetime, src: Field, m0sq: Any) -> Field:
    """``G+`` by forward recursion from vanishing past rows."""

    _require_interior_source(m, src)
    return Field(m, _retarded(m, src.values, to_rational(m0sq)))


def green_advanced(m: LatticeSpacetime, src: Field, m0sq: Any) -> Field:
    _require_interior_source(m, src)
    return Field(m, _advanced(m, src.values, to_rational(m0sq)))


def _propagate(
    m: LatticeSpacetime, source: Values, mass: Rational
) -> dict[Site, Rational]:
    values = _retarded(m, source, mass)
    for site, value in _advanced(m, source, mass).items():
        values[site] = values.get(site, ZERO) - value
    return {site: value for site, value in values.items() if value != 0}


def causal_propagator(m: LatticeSpacetime, src: Field, m0sq: Any) -> Field:
    """``G = G+ - G-``."""

    _require_interior_source(m, src)
    return Field(m, _propagate(m, src.values, to_rational(m0sq)))


def green_support_ok(m: LatticeSpacetime, src: Field, m0sq: Any) -> bool:
    """Support of ``G+-`` lies in ``J+-`` of the source support."""

    retarded = green_retarded(m, src, m0sq)
    advanced = green_advanced(m, src, m0sq)
    return retarded.support <= causal_future(
        m, src.support
    ) and advanced.support <= causal_past(m, src.support)


@dataclass(frozen=True)
class ObservableSpace:
    """``L(M) = C(M) / P C(M°)`` with basis the non-pivot sites."""

    region: LatticeSpacetime
    mass: Rational
    basis: tuple[Site, ...]
    space: PoissonSpace

    def reduce(self, phi: Field | Values) -> tuple[Rational, ...]:
        """Quotient map: coordinates of ``[phi]`` in the site basis."""

        values = dict(phi.values if isinstance(phi, Field) else phi)
        stray = set(values) - self.region.sites
        if stray:
            raise SiteNotInSpacetime(
                f"Cannot reduce values at {sorted(stray)[:3]}"
            )
        circumference = self.region.circumference
        interior = self.region.interior
        for site in sorted(self.region.sites, reverse=True):
            coefficient = values.get(site, ZERO)
            t, x = site
            anchor = (t - 1, x)
            if coefficient == 0 or anchor not in interior:
                continue
            for neighbour, weight in zip(
                stencil(anchor, circumference), (1, 1, -1, -1)
            ):
                values[neighbour] = (
                    values.get(neighbour, ZERO) - weight * coefficient
                )
            values[anchor] = (
                values.get(anchor, ZERO) - self.mass * coefficient
            )
        return tuple(values.get(site, ZERO) for site in self.basis)

    def class_of(self, site: Site) -> tuple[Rational, ...]:
        return self.reduce({site: 1})

    def representative(self, coordinates: Iterable[Rational]) -> Field:
        return Field(
            self.region,
            dict(zip(self.basis, coordinates)),
        )


def _basis_sites(m: LatticeSpacetime) -> tuple[Site, ...]:
    pivots = {(t + 1, x) for t, x in m.interior}
    return tuple(sorted(m.sites - pivots))


@lru_cache(maxsize=256)
def _observables(m: LatticeSpacetime, mass: Rational) -> ObservableSpace:
    if not m.interior and not m.cauchy_rows:
        raise DegenerateRegion(f"{m.describe()} has an empty interior")
    basis = _basis_sites(m)
    columns = []
    for site in basis:
        propagated = _propagate(m, {site: 1}, mass)
        columns.append([propagated.get(b, ZERO) for b in basis])
    form = RationalMatrix.from_columns(columns, len(basis))
    labels = tuple(f"d[{t},{x}]" for t, x in basis)
    LOGGER.debug(
        "Observable space of %s has dimension %d", m.describe(), len(basis)
    )
    return ObservableSpace(m, mass, basis, PoissonSpace(labels, form))


def observables_space(m: LatticeSpacetime, m0sq: Any) -> ObservableSpace:
    """``(L(M), tau_M)`` with ``tau_M([f1],[f2]) = sum f1 * G f2``."""

    return _observables(m, to_rational(m0sq))


def data_labels(row: CauchyRow) -> tuple[str, ...]:
    return tuple(f"phi[{x}]" for x in row.xs) + tuple(
        f"pi[{x}]" for x in row.xs
    )


@lru_cache(maxsize=256)
def _data_space(labels: tuple[str, ...], width: int) -> PoissonSpace:
    rows = [[0] * (2 * width) for _ in range(2 * width)]
    for k in range(width):
        rows[k][width + k] = -1
        rows[width + k][k] = 1
    return PoissonSpace(labels, RationalMatrix.from_rows(rows))


def data_space(sigma: CauchyRow) -> PoissonSpace:
    """``Data_c(Sigma)`` with ``tau((f1,p1),(f2,p2)) = sum p1 f2 - f1 p2``."""

    return _data_space(data_labels(sigma), len(sigma.xs))


def restrict_to_row(values: Values, row: CauchyRow) -> tuple[Rational, ...]:
    """Initial data ``(phi, pi)`` with ``pi`` the forward difference."""

    phi = [values.get((row.t0, x), ZERO) for x in row.xs]
    later = [values.get((row.t0 + 1, x), ZERO) for x in row.xs]
    return tuple(phi) + tuple(b - a for a, b in zip(phi, later))


def evolve(
    m: LatticeSpacetime,
    row: CauchyRow,
    data: Iterable[Any],
    m0sq: Any,
) -> Field:
    """Solve ``P Phi = 0`` in ``m`` from initial data on ``row``."""

    if row.parent != m:
        raise NotACauchyRow("Initial-data row belongs to another region")
    return Field(m, _evolve(m, row, tuple(data), to_rational(m0sq)))


def _evolve(
    m: LatticeSpacetime,
    row: CauchyRow,
    data: tuple[Any, ...],
    mass: Rational,
) -> dict[Site, Rational]:
    width = len(row.xs)
    if len(data) != 2 * width:
        raise FormMismatch(
            f"Expected {2 * width} data values, got {len(data)}"
        )
    circumference = m.circumference
    phi: dict[Site, Rational] = {}
    for k, x in enumerate(row.xs):
        phi[(row.t0, x)] = to_rational(data[k])
        phi[(row.t0 + 1, x)] = to_rational(data[k]) + to_rational(
            data[width + k]
        )
    for t in m.rows:
        if t <= row.t0 + 1:
            continue
        for x in m.row(t):
            phi[(t, x)] = (
                -phi.get((t - 2, x), ZERO)
                + phi.get((t - 1, wrap(x + 1, circumference)), ZERO)
                + phi.get((t - 1, wrap(x - 1, circumference)), ZERO)
                - mass * phi.get((t - 1, x), ZERO)
            )
    for t in reversed(m.rows):
        if t >= row.t0:
            continue
        for x in m.row(t):
            phi[(t, x)] = (
                -phi.get((t + 2, x), ZERO)
                + phi.get((t + 1, wrap(x + 1, circumference)), ZERO)
                + phi.get((t + 1, wrap(x - 1, circumference)), ZERO)
                - mass * phi.get((t + 1, x), ZERO)
            )
    return {site: value for site, value in phi.items() if value != 0}


def symplectic_current(
    m: LatticeSpacetime, phi1: Values, phi2: Values, t: int
) -> Rational:
    """``sum_x Phi1(t+1,x) Phi2(t,x) - Phi1(t,x) Phi2(t+1,x)``."""

    total = ZERO
    for x in m.row(t) & m.row(t + 1):
        total += phi1.get((t + 1, x), ZERO) * phi2.get((t, x), ZERO)
        total -= phi1.get((t, x), ZERO) * phi2.get((t + 1, x), ZERO)
    return total


@dataclass(frozen=True)
class SolutionSpace:
    """Solutions on ``M`` in coordinates of their data at a reference row."""

    region: LatticeSpacetime
    mass: Rational
    reference: CauchyRow
    space: PoissonSpace

    def field(self, coordinates: Iterable[Any]) -> Field:
        return evolve(self.region, self.reference, coordinates, self.mass)

    def coordinates(self, phi: Field | Values) -> tuple[Rational, ...]:
        values = phi.values if isinstance(phi, Field) else phi
        return restrict_to_row(values, self.reference)

    def basis_fields(self) -> tuple[Field, ...]:
        size = self.space.dim
        return tuple(
            self.field([1 if j == k else 0 for j in range(size)])
            for k in range(size)
        )

    def form_at(self, t: int) -> RationalMatrix:
        """``sigma_M`` evaluated with the current at rows ``t, t+1``."""

        fields = [phi.values for phi in self.basis_fields()]
        return RationalMatrix.from_rows(
            [
                [symplectic_current(self.region, a, b, t) for b in fields]
                for a in fields
            ]
        )


@lru_cache(maxsize=256)
def _solutions(m: LatticeSpacetime, mass: Rational) -> SolutionSpace:
    reference = m.minimal_cauchy_row()
    labels = tuple(f"sol:{label}" for label in data_labels(reference))
    provisional = SolutionSpace(
        m, mass, reference, data_space(reference)
    )
    form = provisional.form_at(reference.t0)
    return SolutionSpace(m, mass, reference, PoissonSpace(labels, form))


def solutions_space(m: LatticeSpacetime, m0sq: Any) -> SolutionSpace:
    """``(Sol_sc(M), sigma_M)`` on the region's minimal Cauchy row."""

    try:
        return _solutions(m, to_rational(m0sq))
    except NotACauchyRow as exc:
        raise NotCauchy(f"{m.describe()} has no Cauchy row") from exc


def green_map(m: LatticeSpacetime, m0sq: Any) -> PoissonMap:
    """``G_M : L(M) -> Sol_sc(M)``."""

    observables = observables_space(m, m0sq)
    solutions = solutions_space(m, m0sq)
    columns = [
        restrict_to_row(
            _propagate(m, {site: 1}, observables.mass), solutions.reference
        )
        for site in observables.basis
    ]
    matrix = RationalMatrix.from_columns(columns, solutions.space.dim)
    return PoissonMap(observables.space, solutions.space, matrix)


def res_map(m: LatticeSpacetime, sigma: CauchyRow, m0sq: Any) -> PoissonMap:
    """``res_(M,Sigma) : Sol_sc(M) -> Data_c(Sigma)``."""

    if sigma.parent != m:
        raise NotACauchyRow("Cauchy row belongs to another region")
    solutions = solutions_space(m, m0sq)
    columns = [
        restrict_to_row(phi.values, sigma)
        for phi in solutions.basis_fields()
    ]
    matrix = RationalMatrix.from_columns(columns, 2 * len(sigma.xs))
    return PoissonMap(solutions.space, data_space(sigma), matrix)


def iso_chain(
    m: LatticeSpacetime, sigma: CauchyRow, m0sq: Any
) -> tuple[PoissonMap, PoissonMap]:
    """``L(M) --G_M--> Sol_sc(M) --res--> Data_c(Sigma)``."""

    return green_map(m, m0sq), res_map(m, sigma, m0sq)


def observables_map(f: LocMorphism, m0sq: Any) -> PoissonMap:
    """``L(f)``: push-forward of site classes along ``f``."""

    source = observables_space(f.source, m0sq)
    target = observables_space(f.target, m0sq)
    columns = [target.class_of(f.apply(site)) for site in source.basis]
    matrix = RationalMatrix.from_columns(columns, target.space.dim)
    return PoissonMap(source.space, target.space, matrix)


def matching_rows(f: LocMorphism) -> tuple[CauchyRow, CauchyRow]:
    """A Cauchy row of the source whose image is a Cauchy row of the target."""

    target_rows = {row.t0: row for row in f.target.cauchy_rows}
    for row in f.source.cauchy_rows:
        image = target_rows.get(row.t0 + f.time_shift)
        if image is None:
            continue
        if f.translation.apply_all(
            row.pair_sites, f.source.circumference
        ) == image.pair_sites:
            return row, image
    raise NotCauchy(
        f"No Cauchy row of {f.source.describe()} maps onto a Cauchy row "
        f"of {f.target.describe()}"
    )


def data_map(f: LocMorphism, m0sq: Any) -> PoissonMap:
    """``Data_c(f|)``: relabel initial data along the translation."""

    row, image = matching_rows(f)
    positions = {x: k for k, x in enumerate(image.xs)}
    width = len(row.xs)
    mapping = [
        positions[wrap(x + f.space_shift, f.target.circumference)]
        for x in row.xs
    ]
    mapping += [width + k for k in mapping]
    matrix = RationalMatrix.permutation(mapping)
    return PoissonMap(data_space(row), data_space(image), matrix)


def solutions_map(f: LocMorphism, m0sq: Any) -> PoissonMap:
    """``Sol_sc(f)``: extend solutions along a Cauchy morphism."""

    source = solutions_space(f.source, m0sq)
    target = solutions_space(f.target, m0sq)
    _, image = matching_rows(f)
    columns = []
    for phi in source.basis_fields():
        pushed = {
            f.apply(site): value for site, value in phi.values.items()
        }
        extended = _evolve(
            f.target, image, restrict_to_row(pushed, image), target.mass
        )
        columns.append(target.coordinates(extended))
    matrix = RationalMatrix.from_columns(columns, target.space.dim)
    return PoissonMap(source.space, target.space, matrix)


@dataclass(frozen=True)
class FunctorialMaps:
    observables: PoissonMap
    solutions: PoissonMap
    data: PoissonMap
    source_row: CauchyRow
    target_row: CauchyRow


def functorial_maps(f: LocMorphism, m0sq: Any) -> FunctorialMaps:
    """``L(f)``, ``Sol_sc(f)`` and ``Data_c(f|)`` for a Cauchy morphism."""

    row, image = matching_rows(f)
    return FunctorialMaps(
        observables=observables_map(f, m0sq),
        solutions=solutions_map(f, m0sq),
        data=data_map(f, m0sq),
        source_row=row,
        target_row=image,
    )


__all__ = [
    "DegenerateRegion",
    "Field",
    "FormMismatch",
    "FunctorialMaps",
    "NotCauchy",
    "ObservableSpace",
    "PoissonMap",
    "PoissonSpace",
    "SolutionSpace",
    "SourceTouchesBoundary",
    "apply_P",
    "causal_propagator",
    "data_labels",
    "data_map",
    "data_space",
    "evolve",
    "extend_P",
    "functorial_maps",
    "green_advanced",
    "green_map",
    "green_retarded",
    "green_support_ok",
    "iso_chain",
    "matching_rows",
    "observables_map",
    "observables_space",
    "res_map",
    "restrict_to_row",
    "second_interior",
    "solutions_map",
    "solutions_space",
    "symplectic_current",
]
