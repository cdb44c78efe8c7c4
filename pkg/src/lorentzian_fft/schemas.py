"""JSON-ready report payloads."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any

from sympy.polys.domains import QQ

from .domain import models
from .domain.engine.config import RunConfig
from .domain.scalars import render_rational

SCHEMA_VERSION = "1"


def _json_ready(value: Any) -> Any:
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, Mapping):
        return {str(key): _json_ready(item) for key, item in value.items()}
    if isinstance(value, set | frozenset):
        return sorted((_json_ready(item) for item in value), key=repr)
    if isinstance(value, list | tuple):
        return [_json_ready(item) for item in value]
    if QQ.of_type(value):
        return render_rational(value)
    return str(value)


@dataclass(slots=True)
class CheckResultModel:
    check: str
    section: str
    instance_key: str
    status: str
    lhs: Any = None
    rhs: Any = None
    witness: Any = None

    @classmethod
    def from_domain(cls, result: models.CheckResult) -> CheckResultModel:
        return cls(
            check=result.check,
            section=result.section,
            instance_key=result.instance_key,
            status=result.status,
            lhs=_json_ready(result.lhs),
            rhs=_json_ready(result.rhs),
            witness=_json_ready(result.witness),
        )

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "check": self.check,
            "section": self.section,
            "instance_key": self.instance_key,
            "status": self.status,
        }
        for name in ("lhs", "rhs", "witness"):
            value = getattr(self, name)
            if value is not None:
                payload[name] = value
        return payload


@dataclass(slots=True)
class SectionSummaryModel:
    section: str
    passed: int
    total: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "section": self.section,
            "passed": self.passed,
            "failed": self.total - self.passed,
            "total": self.total,
        }


@dataclass(slots=True)
class ReportModel:
    suite: str
    status: str
    seed: int
    config_digest: str
    config: Mapping[str, Any]
    sections: tuple[SectionSummaryModel, ...]
    checks: tuple[CheckResultModel, ...]
    generated_at: datetime | None = None
    version: str = field(default=SCHEMA_VERSION)

    @classmethod
    def from_domain(
        cls, report: models.SuiteReport, config: RunConfig
    ) -> ReportModel:
        return cls(
            suite=report.suite,
            status=models.PASS if report.passed else models.FAIL,
            seed=report.seed,
            config_digest=report.config_digest,
            config=config.model_dump(
                mode="json", exclude={"output", "verbosity"}
            ),
            sections=tuple(
                SectionSummaryModel(name, passed, total)
                for name, (passed, total) in sorted(
                    report.sections().items()
                )
            ),
            checks=tuple(
                CheckResultModel.from_domain(check) for check in report.checks
            ),
            generated_at=report.generated_at,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "suite": self.suite,
            "status": self.status,
            "seed": self.seed,
            "config_digest": self.config_digest,
            "config": dict(self.config),
            "sections": [section.to_dict() for section in self.sections],
            "checks": [check.to_dict() for check in self.checks],
            "generated_at": (
                self.generated_at.isoformat() if self.generated_at else None
            ),
        }

    def dumps(self) -> str:
        """Sorted-key JSON; only ``generated_at`` varies between runs."""

        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


__all__ = [
    "CheckResultModel",
    "ReportModel",
    "SCHEMA_VERSION",
    "SectionSummaryModel",
]
