"""Diagnostic reports: the return value of every validator.

A report is a list of named checks. Each check records how many instances
qualified, how they were chosen (exhaustive or sampled), and up to
``WITNESS_LIMIT`` violating witnesses. Witnesses are dicts from role name to
arrow id, so they render with the names used in the input structures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"

WITNESS_LIMIT = 20


@dataclass
class Check:
    name: str
    instances: int = 0
    violation_count: int = 0
    violations: list[dict[str, Any]] = field(default_factory=list)
    sampling: dict[str, Any] | None = None
    note: str = ""

    def add(self, witness: dict[str, Any]) -> None:
        self.violation_count += 1
        if len(self.violations) < WITNESS_LIMIT:
            self.violations.append(witness)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    @property
    def vacuous(self) -> bool:
        return self.instances == 0 and self.violation_count == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "instances": self.instances,
            "sampling": self.sampling,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "note": self.note,
        }


@dataclass
class DiagnosticReport:
    title: str = ""
    checks: list[Check] = field(default_factory=list)

    def check(self, name: str, **kwargs) -> Check:
        c = Check(name, **kwargs)
        self.checks.append(c)
        return c

    def extend(self, other: "DiagnosticReport", prefix: str = "") -> None:
        for c in other.checks:
            if prefix:
                c = Check(f"{prefix}.{c.name}", c.instances, c.violation_count,
                          list(c.violations), c.sampling, c.note)
            self.checks.append(c)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    @property
    def violations(self) -> list[tuple[str, dict[str, Any]]]:
        return [(c.name, w) for c in self.checks for w in c.violations]

    @property
    def violation_count(self) -> int:
        return sum(c.violation_count for c in self.checks)

    @property
    def status(self) -> str:
        if self.violation_count:
            return FAIL
        if any(c.vacuous for c in self.checks):
            return VACUOUS
        return PASS

    @property
    def ok(self) -> bool:
        """True when nothing was violated (vacuous checks count as ok)."""
        return self.violation_count == 0

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "status": self.status,
            "violation_count": self.violation_count,
            "checks": [c.to_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def render(self, verbose: bool = False) -> str:
        lines = [f"{self.title or 'report'}: {self.status.upper()}"]
        # passing groups like "M.table", "M.identities" collapse to one line unless verbose
        groups: dict[str, list[Check]] = {}
        for c in self.checks:
            if "." in c.name:
                groups.setdefault(c.name.split(".", 1)[0], []).append(c)
        quiet = {g for g, cs in groups.items()
                 if not verbose and all(c.ok and not c.vacuous and not c.sampling for c in cs)}
        shown_groups: set[str] = set()
        for c in self.checks:
            prefix = c.name.split(".", 1)[0] if "." in c.name else None
            if prefix in quiet:
                if prefix not in shown_groups:
                    shown_groups.add(prefix)
                    cs = groups[prefix]
                    lines.append(f"  {prefix}.*: ok; {len(cs)} checks, {sum(x.instances for x in cs)} instances")
                continue
            if c.violation_count:
                mark = "FAIL"
            elif c.instances == 0:
                mark = "VACUOUS (0 instances checked)"
            else:
                mark = "ok"
            how = ""
            if c.sampling:
                s = c.sampling
                if s.get("mode") == "sampled":
                    how = f" [sampled {s['sample_size']} of {s['population']}, seed {s['seed']}]"
                else:
                    how = f" [exhaustive, {s.get('population', c.instances)}]"
            lines.append(f"  {c.name}: {mark}; {c.instances} checked{how}")
            if c.note and (verbose or c.violation_count):
                lines.append(f"    note: {c.note}")
            shown = c.violations if verbose else c.violations[:5]
            for w in shown:
                lines.append("    witness: " + ", ".join(f"{k}={v}" for k, v in w.items()))
            if c.violation_count > len(shown):
                lines.append(f"    ... {c.violation_count - len(shown)} more")
        return "\n".join(lines)
