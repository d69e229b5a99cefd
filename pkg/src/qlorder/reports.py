"""Check reports shared by the verification modules and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of one bounded check.

    ``status`` is one of "pass", "fail", "insufficient" (nothing could be
    checked at this truncation) or "unsupported".
    """

    name: str
    status: str
    checked: int
    bounds: dict
    witness: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
            "bounds": dict(self.bounds),
            "witness": self.witness,
            "notes": dict(self.notes),
        }


def finish(name, failures, checked, bounds, notes=None) -> CheckReport:
    status = "fail" if failures else "pass"
    return CheckReport(name, status, checked, bounds, failures[0] if failures else None, notes or {})
