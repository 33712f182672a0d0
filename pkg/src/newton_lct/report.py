from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Report:
    """Outcome of a property check; failures carry enough data to reproduce."""

    name: str
    passed: bool = True
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def record(self, ok: bool, **info) -> bool:
        self.checks += 1
        if not ok:
            self.passed = False
            self.failures.append(info)
        return ok

    def merge(self, other: "Report") -> None:
        self.checks += other.checks
        if not other.passed:
            self.passed = False
            self.failures.extend({"check": other.name, **f} for f in other.failures)

    def __bool__(self):
        return self.passed
