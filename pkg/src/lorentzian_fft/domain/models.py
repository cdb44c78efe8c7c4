"""Report models shared by the verification suites."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one exact check on one instance."""

    check: str
    section: str
    instance_key: str
    status: str
    lhs: Any = None
    rhs: Any = None
    witness: Any = None

    @classmethod
    def of(
        cls,
        check: str,
        section: str,
        instance_key: str,
        holds: bool,
        lhs: Any = None,
        rhs: Any = None,
        witness: Any = None,
    ) -> CheckResult:
        return cls(
            check,
            section,
            instance_key,
            PASS if holds else FAIL,
            lhs,
            rhs,
            witness,
        )

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.section, self.check, self.instance_key)


@dataclass(frozen=True)
class SuiteReport:
    """All checks of one suite run."""

    suite: str
    config_digest: str
    seed: int
    checks: tuple[CheckResult, ...]
    generated_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        object.__setattr__(
            self,
            "checks",
            tuple(sorted(self.checks, key=lambda check: check.sort_key)),
        )

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> tuple[CheckResult, ...]:
        return tuple(check for check in self.checks if not check.passed)

    def sections(self) -> dict[str, tuple[int, int]]:
        """``section -> (passed, total)``."""

        summary: dict[str, tuple[int, int]] = {}
        for check in self.checks:
            passed, total = summary.get(check.section, (0, 0))
            summary[check.section] = (passed + check.passed, total + 1)
        return summary


def merge(
    suite: str,
    config_digest: str,
    seed: int,
    parts: Iterable[Iterable[CheckResult]],
) -> SuiteReport:
    checks = [check for part in parts for check in part]
    return SuiteReport(suite, config_digest, seed, tuple(checks))


__all__ = ["FAIL", "PASS", "CheckResult", "SuiteReport", "merge"]
