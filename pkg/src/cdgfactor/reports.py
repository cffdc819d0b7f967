"""Check reports: failure is data, not an exception."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Entry:
    verdict: str  # "pass" or "fail"
    degree: int | None = None
    index: Any = None
    invariants: list | None = None
    cap_tainted: bool = False
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"verdict": self.verdict}
        if self.degree is not None:
            out["degree"] = self.degree
        if self.index is not None:
            out["index"] = self.index if isinstance(self.index, (str, int)) else list(self.index)
        if self.invariants is not None:
            out["invariants"] = list(self.invariants)
        out["cap_tainted"] = self.cap_tainted
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    check: str
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when every untainted entry passes."""
        return all(e.passed or e.cap_tainted for e in self.entries)

    @property
    def failures(self) -> list:
        return [e for e in self.entries if not e.passed and not e.cap_tainted]

    @property
    def tainted(self) -> list:
        return [e for e in self.entries if e.cap_tainted]

    def to_json(self) -> dict:
        return {"check": self.check, "ok": self.ok,
                "entries": [e.to_json() for e in self.entries]}

    def render(self) -> str:
        lines = [f"{self.check}: {'PASS' if self.ok else 'FAIL'}"]
        for e in self.entries:
            if e.passed and not e.detail and not e.cap_tainted:
                continue
            loc = []
            if e.degree is not None:
                loc.append(f"degree {e.degree}")
            if e.index is not None:
                loc.append(f"at {e.index}")
            tag = " [cap-tainted]" if e.cap_tainted else ""
            lines.append(f"  {e.verdict}{tag} {' '.join(loc)} {e.detail}".rstrip())
        return "\n".join(lines)


def merge(name: str, reports) -> Report:
    entries = []
    for r in reports:
        for e in r.entries:
            entries.append(Entry(e.verdict, e.degree, f"{r.check}:{e.index}" if e.index is not None else r.check,
                                 e.invariants, e.cap_tainted, e.detail))
    return Report(name, entries)
