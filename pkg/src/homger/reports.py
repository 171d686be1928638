"""Verification reports shared by all checkers.

A report is a named list of checks; each failed check carries a witness
(the offending basis tuple plus both sides of the violated identity).
JSON and text renderings carry the same content and are byte-stable for
identical inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    check_id: str
    ok: bool
    witness: tuple[tuple[str, str], ...] = ()

    def witness_dict(self) -> dict:
        return dict(self.witness)


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    dimensions: dict[str, list[int]] = field(default_factory=dict)

    def add(self, check_id: str, ok: bool, witness: dict | None = None) -> bool:
        items = tuple(sorted((str(k), str(v)) for k, v in (witness or {}).items()))
        self.checks.append(Check(check_id, bool(ok), items if not ok else ()))
        return ok

    def record_failure_once(self, check_id: str, witness: dict) -> None:
        # Keeps only the first witness per failure class.
        for c in self.checks:
            if c.check_id == check_id and not c.ok:
                return
        self.add(check_id, False, witness)

    def mark_pass_if_unreported(self, check_id: str) -> None:
        if not any(c.check_id == check_id for c in self.checks):
            self.add(check_id, True)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.check_id, c.ok, c.witness))
        for k, v in other.dimensions.items():
            self.dimensions[prefix + k] = v

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {
            "structure": self.name,
            "valid": self.ok,
            "checks": [
                {"id": c.check_id, "status": "pass" if c.ok else "fail", "witness": c.witness_dict()}
                for c in self.checks
            ],
            "dimensions": {k: list(v) for k, v in sorted(self.dimensions.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def render_text(self, color: bool = False) -> str:
        def paint(s: str, code: str) -> str:
            return f"\x1b[{code}m{s}\x1b[0m" if color else s

        lines = [f"structure: {self.name}"]
        for c in self.checks:
            status = paint("pass", "32") if c.ok else paint("FAIL", "31")
            lines.append(f"  [{status}] {c.check_id}")
            for k, v in c.witness:
                lines.append(f"         {k} = {v}")
        for k, v in sorted(self.dimensions.items()):
            lines.append(f"  {k}: {list(v)}")
        lines.append(f"result: {'valid' if self.ok else 'INVALID'}")
        return "\n".join(lines)
