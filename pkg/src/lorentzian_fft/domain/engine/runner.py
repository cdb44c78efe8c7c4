"""Verification suites behind the command-line driver."""

from __future__ import annotations

import logging
import random
from collections.abc import Callable, Iterable, Mapping, Sequence
from functools import cached_property
from typing import Any

from .. import compare
from ..kleingordon import (
    Field,
    FormMismatch,
    apply_P,
    causal_propagator,
    data_map,
    data_space,
    extend_P,
    green_advanced,
    green_map,
    green_retarded,
    green_support_ok,
    matching_rows,
    observables_map,
    observables_space,
    res_map,
    restrict_to_row,
    second_interior,
    solutions_map,
    solutions_space,
)
from ..lattice import LatticeSpacetime, LocMorphism, Site
from ..lbord import (
    BoundedInstance,
    Germ,
    canonical,
    cell_source,
    cell_target,
    companion,
    companion_cells,
    hcompose,
    resize_collars,
    unit_bordism,
    weak_inverse,
)
from ..models import CheckResult, SuiteReport, merge
from ..pseudocat import (
    LawResult,
    NoCompanion,
    arrow_category,
    check_adjunction,
    check_coherence,
    companion_identities_hold,
    find_companion,
    homotopy_classes,
    iota,
)
from ..scalars import parse_rational, render_rational
from . import instances
from .config import RunConfig

LOGGER = logging.getLogger(__name__)

COHERENCE = "coherence"
ADJUNCTION = "adjunction"
BORDISM = "bordism"
KG = "kg"


def law_checks(
    laws: Iterable[LawResult],
    section: str,
    instance_key: str,
    label: Callable[[Any], str] = str,
) -> list[CheckResult]:
    """Report entries for exhaustively checked laws."""

    return [
        CheckResult.of(
            law.law,
            section,
            instance_key,
            law.passed,
            witness=(
                None
                if law.witness is None
                else [label(item) for item in law.witness]
            ),
        )
        for law in laws
    ]


def _all_sites(
    check: str,
    instance_key: str,
    sites: Iterable[Site],
    holds: Callable[[Site], bool],
) -> CheckResult:
    total = 0
    for site in sorted(sites):
        total += 1
        if not holds(site):
            return CheckResult.of(
                check,
                KG,
                instance_key,
                False,
                f"{total} sites",
                witness=list(site),
            )
    return CheckResult.of(check, KG, instance_key, True, f"{total} sites")


def _nonzero(field: Field, domain: Iterable[Site]) -> dict[Site, Any]:
    values = field.values
    return {
        site: values[site]
        for site in domain
        if site in values and values[site] != 0
    }


class VerificationEngine:
    """Runs the verification suites for one configuration."""

    SUITES: Mapping[str, tuple[str, ...]] = {
        "coherence": (COHERENCE,),
        "adjunction": (ADJUNCTION,),
        "bordism": (BORDISM,),
        "kg": (KG,),
        "compare": ("compare",),
        "all": (COHERENCE, ADJUNCTION, BORDISM, KG, "compare"),
    }

    def __init__(self, config: RunConfig, digest: str | None = None) -> None:
        self.config = config
        self.digest = digest or config.digest()

    def run(self, suite: str | None = None) -> SuiteReport:
        selected = suite or self.config.suite
        if selected not in self.SUITES:
            raise KeyError(f"Unknown suite '{selected}'")
        LOGGER.info(
            "Running suite %s (seed=%d, config=%s)",
            selected,
            self.config.seed,
            self.digest[:12],
        )
        parts = [
            getattr(self, f"{part}_checks")()
            for part in self.SUITES[selected]
        ]
        report = merge(selected, self.digest, self.config.seed, parts)
        LOGGER.info(
            "Suite %s finished: %d checks, %d failures",
            selected,
            len(report.checks),
            len(report.failures),
        )
        return report

    def _rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.config.seed}:{suite}")

    @cached_property
    def bounded(self) -> tuple[BoundedInstance, ...]:
        """Rotating instance on ``instance_L`` and a tower of heights.

        The tower lives on the one-point circle, so each pair of objects
        carries a single germ and the exhaustive laws stay small.
        """

        config = self.config
        return (
            BoundedInstance(
                config.instance_L, padding=config.instance_padding
            ),
            BoundedInstance(0, padding=0, heights=config.instance_heights),
        )

    # Pseudo-category laws

    def coherence_checks(self) -> list[CheckResult]:
        rng = self._rng(COHERENCE)
        results = []
        categories = instances.sample_categories(rng, self.config.sample_size)
        for k, c in enumerate(categories):
            key = f"#{k:03d} {c.name}"
            results.extend(law_checks(c.check_axioms(), COHERENCE, key))
            results.extend(
                law_checks(check_coherence(iota(c)).laws, COHERENCE, key)
            )
        for instance in self.bounded:
            p = instance.export()
            results.extend(
                law_checks(
                    check_coherence(p).laws, COHERENCE, p.name, instance.label
                )
            )
        return results

    def adjunction_checks(self) -> list[CheckResult]:
        rng = self._rng(ADJUNCTION)
        results = []
        target = arrow_category()
        categories = instances.sample_categories(rng, self.config.sample_size)
        for k, c in enumerate(categories):
            report = check_adjunction(c, iota(c), target)
            results.extend(
                law_checks(report.laws, ADJUNCTION, f"#{k:03d} {c.name}")
            )
        for instance in self.bounded:
            p = instance.export()
            report = check_adjunction(instance.truncate(), p, target)
            results.extend(
                law_checks(report.laws, ADJUNCTION, p.name, instance.label)
            )
        return results

    # Bordisms

    def bordism_checks(self) -> list[CheckResult]:
        results = []
        for instance in self.bounded:
            results.extend(self._companion_checks(instance))
        results.extend(self._duration_checks())
        return results

    def _companion_checks(
        self, instance: BoundedInstance
    ) -> list[CheckResult]:
        p = instance.export()
        classes = homotopy_classes(p)
        results = []
        for germ in instance.germs:
            key = f"{p.name} {instance.id_of(germ)} dx={germ.g.dx}"
            g = instance.id_of(germ)
            try:
                found = find_companion(p, g)
                results.append(
                    CheckResult.of(
                        "companion-exists",
                        BORDISM,
                        key,
                        True,
                        found.horizontal,
                    )
                )
            except NoCompanion as exc:
                results.append(
                    CheckResult.of(
                        "companion-exists", BORDISM, key, False, str(exc)
                    )
                )
            up, down = companion_cells(germ)
            hat = instance.id_of(companion(germ))
            results.append(
                CheckResult.of(
                    "companion-identities",
                    BORDISM,
                    key,
                    companion_identities_hold(
                        p, g, hat, instance.id_of(up), instance.id_of(down)
                    ),
                    hat,
                )
            )
            inverse = weak_inverse(germ)
            for label, composite, unit in (
                (
                    "weak-inverse-left",
                    hcompose(inverse, companion(germ)),
                    unit_bordism(germ.src),
                ),
                (
                    "weak-inverse-right",
                    hcompose(companion(germ), inverse),
                    unit_bordism(germ.tgt),
                ),
            ):
                lhs = classes[instance.id_of(composite)]
                rhs = classes[instance.id_of(unit)]
                results.append(
                    CheckResult.of(label, BORDISM, key, lhs == rhs, lhs, rhs)
                )
        results.extend(self._class_checks(instance, classes))
        return results

    def _class_checks(
        self, instance: BoundedInstance, classes: Mapping[str, str]
    ) -> list[CheckResult]:
        results = []
        name = instance.name
        bordisms = instance.bordisms
        for b1 in bordisms:
            for b2 in bordisms:
                same_class = (
                    classes[instance.id_of(b1)] == classes[instance.id_of(b2)]
                )
                same_canonical = canonical(b1) == canonical(b2)
                results.append(
                    CheckResult.of(
                        "canonical-decides-class",
                        BORDISM,
                        f"{name} {instance.id_of(b1)} ~ {instance.id_of(b2)}",
                        same_class == same_canonical,
                        same_class,
                        same_canonical,
                    )
                )
        truncated = instance.truncate()
        results.extend(
            law_checks(
                truncated.check_axioms(), BORDISM, f"tau({truncated.name})"
            )
        )
        results.append(
            CheckResult.of(
                "truncate-size",
                BORDISM,
                f"tau({truncated.name})",
                len(truncated.morphisms) == len(instance.germs),
                len(truncated.morphisms),
                len(instance.germs),
            )
        )
        return results

    def _duration_checks(self) -> list[CheckResult]:
        rng = self._rng(BORDISM)
        config = self.config
        bordisms = instances.bordism_classes(
            config.instance_L, config.T_max, rng, config.sample_size
        )
        results = []
        for b in bordisms:
            key = b.key()
            minimal = canonical(b)
            results.append(
                CheckResult.of(
                    "canonical-idempotent",
                    BORDISM,
                    key,
                    canonical(minimal) == minimal,
                )
            )
            _, cell = resize_collars(
                b, b.src.marked, b.tgt.marked, minimal.n.sites
            )
            results.append(
                CheckResult.of(
                    "resize-globular",
                    BORDISM,
                    key,
                    cell_source(cell) == Germ.identity(b.src)
                    and cell_target(cell) == Germ.identity(b.tgt),
                    cell.f.to_dict(),
                )
            )
            unit = unit_bordism(b.tgt)
            results.append(
                CheckResult.of(
                    "unit-class",
                    BORDISM,
                    key,
                    canonical(hcompose(unit, b)) == minimal,
                )
            )
        for b1, b0 in instances.composable_bordisms(
            bordisms, rng, config.sample_size
        ):
            glued = hcompose(b1, b0)
            results.append(
                CheckResult.of(
                    "duration-additive",
                    BORDISM,
                    f"{b1.key()} . {b0.key()}",
                    glued.duration == b0.duration + b1.duration,
                    glued.duration,
                    b0.duration + b1.duration,
                )
            )
        return results

    # Klein-Gordon field

    def _masses(self) -> list[str]:
        config = self.config
        masses = list(config.masses)
        if config.mass_squared not in masses:
            masses.append(config.mass_squared)
        return masses

    def kg_checks(self) -> list[CheckResult]:
        config = self.config
        results = []
        circumferences = sorted({config.L, 0})
        for mass_text in self._masses():
            mass = parse_rational(mass_text)
            for circumference in circumferences:
                for m in instances.kg_regions(circumference, config.T_max):
                    results.extend(self._green_checks(m, mass))
                    results.extend(self._poisson_checks(m, mass))
                for f in instances.cauchy_morphisms(
                    circumference, config.T_max
                ):
                    results.extend(self._square_checks(f, mass))
        return results

    @staticmethod
    def _key(m: LatticeSpacetime, mass: Any) -> str:
        return f"{m.describe()} m0^2={render_rational(mass)}"

    def _green_checks(
        self, m: LatticeSpacetime, mass: Any
    ) -> list[CheckResult]:
        key = self._key(m, mass)
        interior = m.interior

        def right_inverse(green: Callable[..., Field]) -> Callable[..., bool]:
            def holds(site: Site) -> bool:
                psi = green(m, Field.delta(m, site), mass)
                return _nonzero(apply_P(m, psi, mass), interior) == {site: 1}

            return holds

        def left_inverse(green: Callable[..., Field]) -> Callable[..., bool]:
            def holds(site: Site) -> bool:
                source = extend_P(m, Field.delta(m, site), mass)
                return _nonzero(green(m, source, mass), m.sites) == {
                    site: 1
                }

            return holds

        def solves(site: Site) -> bool:
            propagated = causal_propagator(m, Field.delta(m, site), mass)
            return not _nonzero(apply_P(m, propagated, mass), interior)

        def supported(site: Site) -> bool:
            return green_support_ok(m, Field.delta(m, site), mass)

        inner = second_interior(m)
        return [
            _all_sites(
                "green-retarded-right",
                key,
                interior,
                right_inverse(green_retarded),
            ),
            _all_sites(
                "green-advanced-right",
                key,
                interior,
                right_inverse(green_advanced),
            ),
            _all_sites(
                "green-retarded-left", key, inner, left_inverse(green_retarded)
            ),
            _all_sites(
                "green-advanced-left", key, inner, left_inverse(green_advanced)
            ),
            _all_sites("green-support", key, interior, supported),
            _all_sites("propagator-solves", key, interior, solves),
        ]

    def _poisson_checks(
        self, m: LatticeSpacetime, mass: Any
    ) -> list[CheckResult]:
        key = self._key(m, mass)
        observables = observables_space(m, mass)
        rows = m.cauchy_rows
        width = len(rows[0].xs)
        results = [
            CheckResult.of(
                "observables-dim",
                KG,
                key,
                observables.space.dim == 2 * width,
                observables.space.dim,
                2 * width,
            ),
            _all_sites(
                "quotient-kernel",
                key,
                second_interior(m),
                lambda site: not any(
                    observables.reduce(extend_P(m, Field.delta(m, site), mass))
                ),
            ),
        ]
        solutions = solutions_space(m, mass)
        for row in rows:
            row_key = f"{key} row {row.t0}"
            results.append(
                compare.matrices_agree(
                    "sigma-row-independence",
                    KG,
                    row_key,
                    solutions.form_at(row.t0),
                    solutions.space.form,
                )
            )
            results.append(
                CheckResult.of(
                    "data-nondegenerate",
                    KG,
                    row_key,
                    data_space(row).is_nondegenerate(),
                )
            )
            try:
                green, restriction = green_map(m, mass), res_map(m, row, mass)
            except FormMismatch as exc:
                results.append(
                    CheckResult.of(
                        "poisson-chain", KG, row_key, False, str(exc)
                    )
                )
                continue
            chain = green.then(restriction)
            results.append(
                CheckResult.of(
                    "poisson-chain",
                    KG,
                    row_key,
                    green.is_isomorphism() and restriction.is_isomorphism(),
                )
            )
            results.append(
                _all_sites(
                    "chain-propagator-data",
                    row_key,
                    set(observables.basis) & m.interior,
                    lambda site: chain.matrix.column(
                        observables.basis.index(site)
                    )
                    == restrict_to_row(
                        causal_propagator(
                            m, Field.delta(m, site), mass
                        ).values,
                        row,
                    ),
                )
            )
        return results

    def _square_checks(self, f: LocMorphism, mass: Any) -> list[CheckResult]:
        key = (
            f"{f.source.describe()} -> {f.target.describe()} "
            f"by ({f.time_shift},{f.space_shift}) "
            f"m0^2={render_rational(mass)}"
        )
        row, image = matching_rows(f)
        observables = observables_map(f, mass)
        solutions = solutions_map(f, mass)
        data = data_map(f, mass)
        source_green = green_map(f.source, mass)
        target_green = green_map(f.target, mass)
        return [
            compare.matrices_agree(
                "green-square",
                KG,
                key,
                target_green.matrix @ observables.matrix,
                solutions.matrix @ source_green.matrix,
            ),
            compare.matrices_agree(
                "res-square",
                KG,
                key,
                res_map(f.target, image, mass).matrix @ solutions.matrix,
                data.matrix @ res_map(f.source, row, mass).matrix,
            ),
            CheckResult.of(
                "time-slice-seed",
                KG,
                key,
                observables.is_isomorphism()
                and solutions.is_isomorphism()
                and data.is_isomorphism(),
            ),
        ]

    # Comparison of the two axiomatisations

    def compare_checks(self) -> list[CheckResult]:
        config = self.config
        rng = self._rng("compare")
        mass = config.mass
        samples = config.sample_size
        data = instances.compare_instances(
            config.L, config.T_max, rng, config.bordism_classes, samples
        )
        few = data.bordisms[:samples]
        a_kg = compare.build_aqft_kg(mass)
        f_kg = compare.build_fft_kg(mass)
        f_a = compare.fft_from_aqft(a_kg)
        results = compare.check_aqft_axioms(
            a_kg, data.morphisms, data.composable, data.disjoint
        )
        for fft in (f_kg, f_a):
            results.extend(
                compare.check_fft_functoriality(
                    fft, data.bordisms, data.composable_bordisms
                )
            )
        results.extend(
            compare.check_faithfulness(a_kg, data.cauchy, few)
        )
        results.extend(compare.check_companion_values(a_kg, data.germs))
        results.extend(
            compare.check_scalar_comparison(
                data.bordisms, mass, rng, spot_checks=max(20, samples)
            )
        )
        results.extend(
            compare.check_reconstruction(f_a, a_kg, data.cauchy, few)
        )
        results.extend(
            compare.check_reconstruction(
                f_kg, None, data.cauchy, few, instance=":kg"
            )
        )
        results.extend(self._one_dimensional(mass, rng))
        if config.L >= 3:
            results.extend(self._non_fullness(data, mass, a_kg))
        else:
            LOGGER.info("Skipping the non-fullness witness on L=%d", config.L)
        return results

    def _one_dimensional(
        self, mass: Any, rng: random.Random
    ) -> list[CheckResult]:
        samples = self.config.sample_size
        data = instances.compare_instances(
            0, self.config.T_max, rng, samples, samples
        )
        a_kg = compare.build_aqft_kg(mass)
        return compare.check_reconstruction(
            compare.fft_from_aqft(a_kg),
            a_kg,
            data.cauchy,
            data.bordisms,
            instance=":1d",
        ) + compare.check_reconstruction(
            compare.build_fft_kg(mass),
            None,
            data.cauchy,
            data.bordisms,
            instance=":1d-kg",
        )

    def _non_fullness(
        self,
        data: instances.CompareInstances,
        mass: Any,
        a_kg: compare.AqftInstance,
    ) -> list[CheckResult]:
        few: Sequence[Any] = data.bordisms[: self.config.sample_size]
        results = compare.non_fullness_witness(
            data.circumference, mass, few, t_max=self.config.T_max
        )
        results.extend(
            compare.check_aqft_axioms(
                compare.TwistedAqft(a_kg),
                data.morphisms,
                data.composable,
                data.disjoint,
                section=compare.NON_FULLNESS,
            )
        )
        return results


__all__ = ["VerificationEngine", "law_checks"]
