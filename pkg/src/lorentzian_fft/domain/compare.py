"""Algebraic and functorial field theories of the lattice scalar field.

CCR algebras are presented by their generating Poisson spaces and algebra
maps by the Poisson maps they restrict to on generators, so equality of
algebra maps is decided on generators; random low-degree elements run the
full algebra maps as a cross-check.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .ccr import (
    CCRElement,
    CCRMorphism,
    ccr_map,
    commutator,
    multiply,
    random_element,
)
from .kleingordon import (
    NotCauchy,
    PoissonMap,
    PoissonSpace,
    data_space,
    evolve,
    green_map,
    matching_rows,
    observables_map,
    observables_space,
    res_map,
    restrict_to_row,
)
from .lattice import (
    CauchyRow,
    LatticeSpacetime,
    LocMorphism,
    NotACauchyRow,
    Translation,
    diamond,
    identity,
    inclusion,
    is_cauchy_morphism,
    slab,
)
from .lbord import (
    BordObject,
    Bordism,
    Germ,
    canonical,
    companion,
    hcompose,
    unit_bordism,
)
from .linalg import RationalMatrix, SingularMatrix
from .models import CheckResult
from .scalars import ZERO, Rational, render_rational, to_rational

LOGGER = logging.getLogger(__name__)

AQFT = "aqft"
FFT = "fft"
COMPARISON = "comparison"
RECONSTRUCTION = "reconstruction"
NON_FULLNESS = "non-fullness"


class TimeSliceViolation(ValueError):
    """Raised when a Cauchy morphism is not sent to an isomorphism."""


def _digest(matrix: RationalMatrix) -> str:
    rows, columns = matrix.shape
    payload = json.dumps(matrix.render(), separators=(",", ":"))
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
    return f"{rows}x{columns}:{digest}"


def _first_difference(
    lhs: RationalMatrix, rhs: RationalMatrix
) -> list[object] | None:
    if lhs.shape != rhs.shape:
        return ["shape", list(lhs.shape), list(rhs.shape)]
    for i, (left_row, right_row) in enumerate(zip(lhs.rows, rhs.rows)):
        for j, (a, b) in enumerate(zip(left_row, right_row)):
            if a != b:
                return [i, j, render_rational(a), render_rational(b)]
    return None


def matrices_agree(
    check: str,
    section: str,
    instance_key: str,
    lhs: RationalMatrix,
    rhs: RationalMatrix,
) -> CheckResult:
    """Exact matrix equality; full renderings only on failure."""

    witness = _first_difference(lhs, rhs)
    if witness is None:
        return CheckResult.of(
            check, section, instance_key, True, _digest(lhs), _digest(rhs)
        )
    return CheckResult.of(
        check,
        section,
        instance_key,
        False,
        lhs.render(),
        rhs.render(),
        witness,
    )


def _elements_agree(
    check: str,
    section: str,
    instance_key: str,
    lhs: CCRElement,
    rhs: CCRElement,
) -> CheckResult:
    holds = lhs.terms == rhs.terms
    return CheckResult.of(
        check,
        section,
        instance_key,
        holds,
        f"{len(lhs.terms)} terms" if holds else lhs.render(),
        f"{len(rhs.terms)} terms" if holds else rhs.render(),
    )


def _region_key(m: LatticeSpacetime) -> str:
    return m.describe()


def _morphism_key(f: LocMorphism) -> str:
    return (
        f"{f.source.describe()} -> {f.target.describe()} "
        f"by ({f.time_shift},{f.space_shift})"
    )


def _negated(f: CCRMorphism) -> CCRMorphism:
    return CCRMorphism(
        PoissonMap(f.source, f.target, -f.generator_map.matrix)
    )


def _inverse(f: CCRMorphism, what: str) -> CCRMorphism:
    try:
        return f.inverse()
    except SingularMatrix as exc:
        raise TimeSliceViolation(f"{what} is not invertible") from exc


class AqftInstance(ABC):
    """Covariant assignment of CCR algebras to regions."""

    name = "aqft"

    @abstractmethod
    def algebra(self, m: LatticeSpacetime) -> PoissonSpace:
        """Generators of the algebra assigned to ``m``."""

    @abstractmethod
    def morphism(self, f: LocMorphism) -> CCRMorphism:
        """Algebra map assigned to ``f``."""


class KleinGordonAqft(AqftInstance):
    """``A_KG(M) = CCR(L(M))`` and ``A_KG(f) = CCR(L(f))``."""

    name = "A_KG"

    def __init__(self, m0sq: object) -> None:
        self.mass: Rational = to_rational(m0sq)

    def algebra(self, m: LatticeSpacetime) -> PoissonSpace:
        return observables_space(m, self.mass).space

    def morphism(self, f: LocMorphism) -> CCRMorphism:
        return CCRMorphism(observables_map(f, self.mass))


class TwistedAqft(AqftInstance):
    """``A`` twisted by the sign ``(-1)^(w(target) - w(source))``.

    ``w`` is the widest row. Cauchy morphisms preserve it, so the twist
    only shows on non-Cauchy morphisms.
    """

    def __init__(self, base: AqftInstance) -> None:
        self.base = base
        self.name = f"twisted({base.name})"

    @staticmethod
    def sign(f: LocMorphism) -> int:
        return -1 if (f.target.width - f.source.width) % 2 else 1

    def algebra(self, m: LatticeSpacetime) -> PoissonSpace:
        return self.base.algebra(m)

    def morphism(self, f: LocMorphism) -> CCRMorphism:
        value = self.base.morphism(f)
        return value if self.sign(f) == 1 else _negated(value)


class FftInstance(ABC):
    """Functor on homotopy classes of bordisms."""

    name = "fft"

    @abstractmethod
    def algebra(self, obj: BordObject) -> PoissonSpace:
        """Generators of the algebra assigned to ``obj``."""

    @abstractmethod
    def morphism(self, b: Bordism) -> CCRMorphism:
        """Algebra map assigned to the class of ``b``."""


def evolution_map(b: Bordism, m0sq: object) -> PoissonMap:
    """Transport initial data from ``Sigma0`` through ``N`` to ``Sigma1``.

    Data is moved into ``N`` along ``i0``, solved through ``N``, read off
    at ``i1(Sigma1)`` and moved back along ``i1``.
    """

    mass = to_rational(m0sq)
    circumference = b.circumference
    sigma0, sigma1 = b.src.sigma, b.tgt.sigma
    try:
        start = CauchyRow(b.n, sigma0.t0 + b.i0.dt)
    except NotACauchyRow as exc:
        raise NotCauchy(
            f"The incoming row is not a Cauchy row of {b.n.describe()}"
        ) from exc
    if b.incoming != start.pair_sites:
        raise NotCauchy(
            "The incoming rows do not fill a Cauchy row pair of the bordism"
        )
    width = len(sigma0.xs)
    columns = []
    for k in range(2 * width):
        data = [1 if j == k else 0 for j in range(2 * width)]
        pushed = {}
        for j, x in enumerate(sigma0.xs):
            lower = b.i0.apply((sigma0.t0, x), circumference)
            upper = b.i0.apply((sigma0.t0 + 1, x), circumference)
            pushed[lower] = to_rational(data[j])
            pushed[upper] = to_rational(data[j] + data[width + j])
        solution = evolve(
            b.n, start, restrict_to_row(pushed, start), mass
        ).values
        phi = [
            solution.get(b.i1.apply((sigma1.t0, x), circumference), ZERO)
            for x in sigma1.xs
        ]
        later = [
            solution.get(
                b.i1.apply((sigma1.t0 + 1, x), circumference), ZERO
            )
            for x in sigma1.xs
        ]
        columns.append(phi + [q - p for p, q in zip(phi, later)])
    matrix = RationalMatrix.from_columns(columns, 2 * len(sigma1.xs))
    return PoissonMap(data_space(sigma0), data_space(sigma1), matrix)


class KleinGordonFft(FftInstance):
    """``F_KG(M, Sigma) = CCR(Data_c(Sigma))`` with time evolution."""

    name = "F_KG"

    def __init__(self, m0sq: object) -> None:
        self.mass: Rational = to_rational(m0sq)

    def algebra(self, obj: BordObject) -> PoissonSpace:
        return data_space(obj.sigma)

    def morphism(self, b: Bordism) -> CCRMorphism:
        return CCRMorphism(evolution_map(b, self.mass))


class ComparisonFft(FftInstance):
    """``F_A``: collar inclusions inverted, legs applied."""

    def __init__(self, aqft: AqftInstance) -> None:
        self.aqft = aqft
        self.name = f"F({aqft.name})"

    def algebra(self, obj: BordObject) -> PoissonSpace:
        return self.aqft.algebra(obj.m)

    def morphism(self, b: Bordism) -> CCRMorphism:
        a = self.aqft
        source_leg, target_leg = b.leg(0), b.leg(1)
        into_source = a.morphism(inclusion(source_leg.source, b.src.m))
        into_target = a.morphism(inclusion(target_leg.source, b.tgt.m))
        return (
            _inverse(into_source, "Source collar inclusion")
            .then(a.morphism(source_leg))
            .then(_inverse(a.morphism(target_leg), "Outgoing leg"))
            .then(into_target)
        )


def build_aqft_kg(m0sq: object) -> KleinGordonAqft:
    return KleinGordonAqft(m0sq)


def build_fft_kg(m0sq: object) -> KleinGordonFft:
    return KleinGordonFft(m0sq)


def fft_from_aqft(a: AqftInstance) -> ComparisonFft:
    return ComparisonFft(a)


def row_bordism(m: LatticeSpacetime, lower: int, upper: int) -> Bordism:
    """``[M, id, id] : (M, lower) -> (M, upper)``."""

    return Bordism(
        BordObject.at(m, lower),
        BordObject.at(m, upper),
        m,
        Translation(),
        Translation(),
    )


def bridge_bordism(
    f: LocMorphism, row: CauchyRow, image: CauchyRow
) -> Bordism:
    """``[M', f, id] : (M, row) -> (M', f(row))``."""

    return Bordism(
        BordObject(f.source, row),
        BordObject(f.target, image),
        f.target,
        f.translation,
        Translation(),
    )


class ReconstructedAqft(AqftInstance):
    """AQFT on Cauchy morphisms recovered from an FFT.

    The colimit over Cauchy rows of ``M`` is represented by the value on
    the earliest row; ``cocone(M, Sigma)`` is the canonical isomorphism
    from the value on ``Sigma``.
    """

    def __init__(self, fft: FftInstance) -> None:
        self.fft = fft
        self.name = f"A({fft.name})"

    def algebra(self, m: LatticeSpacetime) -> PoissonSpace:
        return self.fft.algebra(BordObject(m, m.minimal_cauchy_row()))

    def cocone(self, m: LatticeSpacetime, row: CauchyRow) -> CCRMorphism:
        earliest = m.minimal_cauchy_row()
        connecting = self.fft.morphism(row_bordism(m, earliest.t0, row.t0))
        return _inverse(connecting, "Connecting bordism")

    def morphism(
        self, f: LocMorphism, row: CauchyRow | None = None
    ) -> CCRMorphism:
        if not is_cauchy_morphism(f):
            raise NotCauchy(
                f"Reconstruction is only defined on Cauchy morphisms, "
                f"not {_morphism_key(f)}"
            )
        if row is None:
            row, image = matching_rows(f)
        else:
            image = CauchyRow(f.target, row.t0 + f.time_shift)
        return (
            self.cocone(f.source, row)
            .inverse()
            .then(self.fft.morphism(bridge_bordism(f, row, image)))
            .then(self.cocone(f.target, image))
        )

    def comparison(self, obj: BordObject) -> CCRMorphism:
        """``zeta_(M, Sigma) : F_A(M, Sigma) -> F(M, Sigma)``."""

        return self.cocone(obj.m, obj.sigma).inverse()


def reconstruct_aqft(
    fft: FftInstance,
) -> tuple[ReconstructedAqft, Callable[[BordObject], CCRMorphism]]:
    """The reconstructed AQFT and the components of ``fft ~ F_A``."""

    reconstructed = ReconstructedAqft(fft)
    return reconstructed, reconstructed.comparison


@dataclass(frozen=True)
class AqftTransformation:
    """Natural transformation given by its components."""

    source: AqftInstance
    target: AqftInstance
    component: Callable[[LatticeSpacetime], CCRMorphism]
    name: str

    def check_naturality(
        self, morphisms: Iterable[LocMorphism]
    ) -> list[CheckResult]:
        results = []
        for f in morphisms:
            lhs = self.source.morphism(f).then(self.component(f.target))
            rhs = self.component(f.source).then(self.target.morphism(f))
            results.append(
                matrices_agree(
                    f"natural:{self.name}",
                    RECONSTRUCTION,
                    _morphism_key(f),
                    lhs.generator_map.matrix,
                    rhs.generator_map.matrix,
                )
            )
        return results


@dataclass(frozen=True)
class FftTransformation:
    source: FftInstance
    target: FftInstance
    component: Callable[[BordObject], CCRMorphism]
    name: str

    def check_naturality(
        self, bordisms: Iterable[Bordism], section: str = FFT
    ) -> list[CheckResult]:
        results = []
        for b in bordisms:
            lhs = self.source.morphism(b).then(self.component(b.tgt))
            rhs = self.component(b.src).then(self.target.morphism(b))
            results.append(
                matrices_agree(
                    f"natural:{self.name}",
                    section,
                    b.key(),
                    lhs.generator_map.matrix,
                    rhs.generator_map.matrix,
                )
            )
        return results


def identity_transformation(a: AqftInstance) -> AqftTransformation:
    return AqftTransformation(
        a,
        a,
        lambda m: CCRMorphism.identity(a.algebra(m)),
        name="id",
    )


def sign_flip(a: AqftInstance) -> AqftTransformation:
    """The automorphism acting by ``-1`` on generators."""

    return AqftTransformation(
        a,
        a,
        lambda m: _negated(CCRMorphism.identity(a.algebra(m))),
        name="flip",
    )


def transformation_image(zeta: AqftTransformation) -> FftTransformation:
    """``F_zeta`` with components ``zeta_M`` at every ``(M, Sigma)``."""

    return FftTransformation(
        fft_from_aqft(zeta.source),
        fft_from_aqft(zeta.target),
        lambda obj: zeta.component(obj.m),
        name=f"F_{zeta.name}",
    )


def check_aqft_axioms(
    a: AqftInstance,
    morphisms: Sequence[LocMorphism],
    composable: Sequence[tuple[LocMorphism, LocMorphism]],
    disjoint_pairs: Sequence[tuple[LocMorphism, LocMorphism]],
    section: str = AQFT,
) -> list[CheckResult]:
    """Functoriality, time-slice and Einstein causality on samples."""

    results = []
    regions = {f.source for f in morphisms} | {f.target for f in morphisms}
    for m in sorted(regions, key=_region_key):
        value = a.morphism(identity(m)).generator_map.matrix
        results.append(
            matrices_agree(
                "identity",
                section,
                f"{a.name} {_region_key(m)}",
                value,
                RationalMatrix.identity(value.shape[0]),
            )
        )
    for f, g in composable:
        results.append(
            matrices_agree(
                "functoriality",
                section,
                f"{a.name} {_morphism_key(f)} ; {_morphism_key(g)}",
                a.morphism(f.then(g)).generator_map.matrix,
                a.morphism(f).then(a.morphism(g)).generator_map.matrix,
            )
        )
    for f in morphisms:
        if not is_cauchy_morphism(f):
            continue
        matrix = a.morphism(f).generator_map.matrix
        invertible = matrix.is_invertible()
        results.append(
            CheckResult.of(
                "time-slice",
                section,
                f"{a.name} {_morphism_key(f)}",
                invertible,
                f"{matrix.shape[0]}x{matrix.shape[1]}",
                "invertible",
            )
        )
    for f1, f2 in disjoint_pairs:
        results.extend(_einstein_causality(a, f1, f2, section))
    LOGGER.info(
        "%s: %d axiom checks over %d regions",
        a.name,
        len(results),
        len(regions),
    )
    return results


def _einstein_causality(
    a: AqftInstance, f1: LocMorphism, f2: LocMorphism, section: str
) -> list[CheckResult]:
    key = f"{a.name} {_morphism_key(f1)} | {_morphism_key(f2)}"
    first, second = a.morphism(f1), a.morphism(f2)
    ambient = a.algebra(f1.target)
    pairing = (
        first.generator_map.matrix.transpose()
        @ ambient.form
        @ second.generator_map.matrix
    )
    results = [
        matrices_agree(
            "einstein-causality",
            section,
            key,
            pairing,
            RationalMatrix.zeros(*pairing.shape),
        )
    ]
    bracket = commutator(
        first.image_of_generator(0), second.image_of_generator(0)
    )
    results.append(
        CheckResult.of(
            "einstein-commutator",
            section,
            key,
            bracket.is_zero(),
            bracket.render(),
            "0",
        )
    )
    return results


def check_fft_functoriality(
    fft: FftInstance,
    bordisms: Sequence[Bordism],
    composable: Sequence[tuple[Bordism, Bordism]],
    section: str = FFT,
) -> list[CheckResult]:
    """Units, composition, invertibility and class independence."""

    results = []
    objects = {b.src for b in bordisms} | {b.tgt for b in bordisms}
    for obj in sorted(objects, key=lambda o: unit_bordism(o).key()):
        value = fft.morphism(unit_bordism(obj)).generator_map.matrix
        results.append(
            matrices_agree(
                "identity",
                section,
                f"{fft.name} {unit_bordism(obj).key()}",
                value,
                RationalMatrix.identity(value.shape[0]),
            )
        )
    for b in bordisms:
        matrix = fft.morphism(b).generator_map.matrix
        results.append(
            CheckResult.of(
                "invertible",
                section,
                f"{fft.name} {b.key()}",
                matrix.is_invertible(),
                f"{matrix.shape[0]}x{matrix.shape[1]}",
                "invertible",
            )
        )
        results.append(
            matrices_agree(
                "class-independence",
                section,
                f"{fft.name} {b.key()}",
                fft.morphism(canonical(b)).generator_map.matrix,
                matrix,
            )
        )
    for b1, b0 in composable:
        results.append(
            matrices_agree(
                "composition",
                section,
                f"{fft.name} {b1.key()} . {b0.key()}",
                fft.morphism(hcompose(b1, b0)).generator_map.matrix,
                fft.morphism(b0).then(fft.morphism(b1)).generator_map.matrix,
            )
        )
    LOGGER.info("%s: %d functoriality checks", fft.name, len(results))
    return results


def check_companion_values(
    a: AqftInstance, germs: Sequence[Germ]
) -> list[CheckResult]:
    """``F_a`` of the companion of ``[W, g]`` against ``a(g : W -> M')``.

    ``W`` is the companion's source collar; its inclusion into the source
    object is inverted before ``a(g)`` is applied.
    """

    induced = fft_from_aqft(a)
    results = []
    for germ in germs:
        hat = companion(germ)
        collar = germ.src.m.restrict(hat.v0)
        expected = _inverse(
            a.morphism(inclusion(collar, germ.src.m)), "Collar inclusion"
        ).then(a.morphism(LocMorphism(collar, germ.tgt.m, germ.g)))
        results.append(
            matrices_agree(
                "companion-value",
                FFT,
                f"{induced.name} {hat.key()}",
                induced.morphism(hat).generator_map.matrix,
                expected.generator_map.matrix,
            )
        )
    LOGGER.info(
        "%s: %d companion values checked", induced.name, len(results)
    )
    return results


def scalar_component(obj: BordObject, m0sq: object) -> CCRMorphism:
    """``CCR(res . G_M) : F_(A_KG)(M, Sigma) -> F_KG(M, Sigma)``."""

    green, restriction = green_map(obj.m, m0sq), res_map(
        obj.m, obj.sigma, m0sq
    )
    return CCRMorphism(green.then(restriction))


def cubic_element(
    parent: PoissonSpace, rng: random.Random
) -> CCRElement:
    """A random element with a guaranteed cubic term."""

    cubic = CCRElement.unit(parent)
    for _ in range(3):
        cubic = multiply(
            cubic, CCRElement.generator(parent, rng.randrange(parent.dim))
        )
    return cubic + random_element(parent, rng, max_degree=3)


def check_scalar_comparison(
    bordisms: Sequence[Bordism],
    m0sq: object,
    rng: random.Random,
    spot_checks: int = 24,
) -> list[CheckResult]:
    """Naturality of ``CCR(res . G_M)`` between ``F_(A_KG)`` and ``F_KG``."""

    direct = build_fft_kg(m0sq)
    induced = fft_from_aqft(build_aqft_kg(m0sq))
    results = []
    objects = {b.src for b in bordisms} | {b.tgt for b in bordisms}
    for obj in sorted(objects, key=lambda o: unit_bordism(o).key()):
        matrix = scalar_component(obj, m0sq).generator_map.matrix
        results.append(
            CheckResult.of(
                "component-iso",
                COMPARISON,
                unit_bordism(obj).key(),
                matrix.is_invertible(),
                f"{matrix.shape[0]}x{matrix.shape[1]}",
                "invertible",
            )
        )
    squares = []
    for b in bordisms:
        lhs = scalar_component(b.src, m0sq).then(direct.morphism(b))
        rhs = induced.morphism(b).then(scalar_component(b.tgt, m0sq))
        squares.append((b, lhs, rhs))
        results.append(
            matrices_agree(
                "naturality",
                COMPARISON,
                b.key(),
                lhs.generator_map.matrix,
                rhs.generator_map.matrix,
            )
        )
    for k in range(spot_checks if squares else 0):
        b, lhs, rhs = squares[k % len(squares)]
        element = cubic_element(lhs.source, rng)
        results.append(
            _elements_agree(
                "naturality-element",
                COMPARISON,
                f"{b.key()} #{k}",
                ccr_map(lhs, element),
                ccr_map(rhs, element),
            )
        )
    LOGGER.info(
        "Scalar comparison: %d squares, %d elements", len(squares), spot_checks
    )
    return results


def check_reconstruction(
    fft: FftInstance,
    expected: AqftInstance | None,
    morphisms: Sequence[LocMorphism],
    bordisms: Sequence[Bordism],
    instance: str = "",
) -> list[CheckResult]:
    """Cocone isomorphisms, row independence and both comparisons."""

    reconstructed, comparison = reconstruct_aqft(fft)
    results = []
    regions = {f.source for f in morphisms} | {f.target for f in morphisms}
    for m in sorted(regions, key=_region_key):
        for row in m.cauchy_rows:
            matrix = reconstructed.cocone(m, row).generator_map.matrix
            results.append(
                CheckResult.of(
                    f"cocone-iso{instance}",
                    RECONSTRUCTION,
                    f"{_region_key(m)} row {row.t0}",
                    matrix.is_invertible(),
                )
            )
    for f in morphisms:
        if not is_cauchy_morphism(f):
            continue
        chosen = reconstructed.morphism(f).generator_map.matrix
        for row in f.source.cauchy_rows:
            try:
                image = CauchyRow(f.target, row.t0 + f.time_shift)
            except NotACauchyRow:
                continue
            if f.translation.apply_all(
                row.pair_sites, f.source.circumference
            ) != image.pair_sites:
                continue
            results.append(
                matrices_agree(
                    f"row-independence{instance}",
                    RECONSTRUCTION,
                    f"{_morphism_key(f)} row {row.t0}",
                    reconstructed.morphism(f, row).generator_map.matrix,
                    chosen,
                )
            )
        if expected is not None:
            results.append(
                matrices_agree(
                    f"componentwise{instance}",
                    RECONSTRUCTION,
                    _morphism_key(f),
                    chosen,
                    expected.morphism(f).generator_map.matrix,
                )
            )
    zeta = FftTransformation(
        fft_from_aqft(reconstructed), fft, comparison, name="iota^-1"
    )
    for result in zeta.check_naturality(bordisms, section=RECONSTRUCTION):
        results.append(
            CheckResult(
                result.check + instance,
                result.section,
                result.instance_key,
                result.status,
                result.lhs,
                result.rhs,
                result.witness,
            )
        )
    return results


def check_faithfulness(
    a: AqftInstance,
    morphisms: Sequence[LocMorphism],
    bordisms: Sequence[Bordism],
) -> list[CheckResult]:
    """Distinct natural isomorphisms have distinct images ``F_zeta``."""

    results = []
    transformations = (identity_transformation(a), sign_flip(a))
    images = [transformation_image(zeta) for zeta in transformations]
    for zeta, image in zip(transformations, images):
        results.extend(zeta.check_naturality(morphisms))
        results.extend(image.check_naturality(bordisms, section=FFT))
    objects = {b.src for b in bordisms}
    for obj in sorted(objects, key=lambda o: unit_bordism(o).key()):
        left = images[0].component(obj).generator_map.matrix
        right = images[1].component(obj).generator_map.matrix
        results.append(
            CheckResult.of(
                "faithful",
                FFT,
                unit_bordism(obj).key(),
                left != right,
                _digest(left),
                _digest(right),
            )
        )
    return results


def non_fullness_witness(
    circumference: int,
    m0sq: object,
    bordisms: Sequence[Bordism],
    t_max: int = 4,
) -> list[CheckResult]:
    """Two AQFTs with equal FFT images that are not naturally isomorphic
    through the identity components.
    """

    if circumference < 3:
        raise ValueError("The non-fullness witness needs L >= 3")
    base = build_aqft_kg(m0sq)
    twisted = TwistedAqft(base)
    width = circumference - 1
    ambient = slab(circumference, 0, max(t_max, 2 * width + 1))
    core = width
    region = diamond(circumference, core - 1, 0, width - 1)
    embedding = inclusion(region, ambient)
    key = _morphism_key(embedding)
    plain = base.morphism(embedding).generator_map.matrix
    signed = twisted.morphism(embedding).generator_map.matrix
    results = [
        CheckResult.of(
            "non-cauchy",
            NON_FULLNESS,
            key,
            not is_cauchy_morphism(embedding),
        ),
        CheckResult.of(
            "aqfts-differ",
            NON_FULLNESS,
            key,
            plain != signed,
            _digest(plain),
            _digest(signed),
        ),
    ]
    induced, twisted_induced = fft_from_aqft(base), fft_from_aqft(twisted)
    for b in bordisms:
        results.append(
            matrices_agree(
                "fft-images-equal",
                NON_FULLNESS,
                b.key(),
                induced.morphism(b).generator_map.matrix,
                twisted_induced.morphism(b).generator_map.matrix,
            )
        )
    identity_image = AqftTransformation(
        base,
        twisted,
        lambda m: CCRMorphism.identity(base.algebra(m)),
        name="id",
    )
    [square] = identity_image.check_naturality([embedding])
    results.append(
        CheckResult.of(
            "identity-not-in-image",
            NON_FULLNESS,
            key,
            not square.passed,
            square.lhs,
            square.rhs,
        )
    )
    LOGGER.info(
        "Non-fullness witness on L=%d uses a width-%d diamond",
        circumference,
        width,
    )
    return results


__all__ = [
    "AqftInstance",
    "AqftTransformation",
    "ComparisonFft",
    "FftInstance",
    "FftTransformation",
    "KleinGordonAqft",
    "KleinGordonFft",
    "ReconstructedAqft",
    "TimeSliceViolation",
    "TwistedAqft",
    "bridge_bordism",
    "build_aqft_kg",
    "build_fft_kg",
    "check_aqft_axioms",
    "check_companion_values",
    "check_faithfulness",
    "check_fft_functoriality",
    "check_reconstruction",
    "check_scalar_comparison",
    "cubic_element",
    "evolution_map",
    "fft_from_aqft",
    "identity_transformation",
    "matrices_agree",
    "non_fullness_witness",
    "reconstruct_aqft",
    "row_bordism",
    "scalar_component",
    "sign_flip",
    "transformation_image",
]
