"""Structured pass/fail results shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Entry:
    kind: str
    indices: tuple = ()
    expr: str = ""
    passed: bool = True

    def as_dict(self):
        return {"kind": self.kind, "indices": list(self.indices), "expr": self.expr, "pass": self.passed}


@dataclass
class Report:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def add(self, kind, indices=(), expr="", passed=True):
        self.entries.append(Entry(kind, tuple(indices), str(expr), bool(passed)))
        return self

    def extend(self, other: "Report"):
        self.entries.extend(other.entries)
        return self

    def failures(self):
        return [e for e in self.entries if not e.passed]

    def __bool__(self):
        return self.passed

    def __iter__(self):
        return iter(self.entries)
