"""Small containers for verification results."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One verified claim. ``ok`` is ``None`` when the outcome is undetermined."""

    name: str
    ok: bool | None
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool | None, detail: str = "") -> bool | None:
        self.checks.append(Check(name, ok, detail))
        return ok

    def extend(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.ok is True for c in self.checks)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if c.ok is False]

    @property
    def undetermined(self) -> list[Check]:
        return [c for c in self.checks if c.ok is None]

    def to_dict(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "violations": [c.name for c in self.violations],
            "checks": [c.to_dict() for c in self.checks],
            **self.data,
        }

    def __str__(self):
        lines = [f"{self.title}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            mark = {True: "pass", False: "FAIL", None: "????"}[c.ok]
            lines.append(f"  [{mark}] {c.name}" + (f" ({c.detail})" if c.detail else ""))
        return "\n".join(lines)
