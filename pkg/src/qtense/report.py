"""Verification reports shared by every checker in the package."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

VERDICTS = ("certified", "violated", "inapplicable", "partial")

# stable CLI contract
EXIT_CODES = {"certified": 0, "violated": 1, "inapplicable": 2, "partial": 2}
EXIT_USAGE = 3


def _plain(value: Any) -> Any:
    """Convert witnesses to JSON-friendly values (rationals as ``p/q``)."""
    from fractions import Fraction

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        seq = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in seq]
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


@dataclass
class Report:
    """Outcome of one verification.

    ``checks`` maps a check name to its boolean outcome; ``witnesses`` holds
    counterexamples in the order they were found. The verdict is
    ``violated`` as soon as one check fails, unless a status was forced via
    :meth:`inapplicable` or :meth:`partial`.
    """

    subject: str
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    elapsed: float | None = None
    status: str | None = None

    max_witnesses = 20

    def check(self, name: str, ok: bool, witness: dict[str, Any] | None = None) -> bool:
        ok = bool(ok)
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and witness is not None and len(self.witnesses) < self.max_witnesses:
            self.witnesses.append({"check": name, **witness})
        return ok

    def inapplicable(self, reason: str) -> "Report":
        self.status = "inapplicable"
        self.notes.append(reason)
        return self

    def partial(self, scope: str) -> "Report":
        self.status = "partial"
        self.notes.append(scope)
        return self

    @property
    def verdict(self) -> str:
        if self.status is not None:
            return self.status
        return "certified" if all(self.checks.values()) else "violated"

    @property
    def ok(self) -> bool:
        return self.verdict == "certified"

    def __bool__(self) -> bool:
        return self.ok

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "verdict": self.verdict,
            "checks": dict(self.checks),
            "witnesses": _plain(self.witnesses),
            "details": _plain(self.details),
            "notes": list(self.notes),
            "elapsed": self.elapsed,
        }

    def to_json(self, **kw: Any) -> str:
        return json.dumps(self.to_dict(), indent=2, **kw)

    def to_text(self) -> str:
        lines = [f"{self.subject}: {self.verdict}"]
        for name, ok in self.checks.items():
            lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
        for w in _plain(self.witnesses):
            lines.append("  witness: " + ", ".join(f"{k}={v}" for k, v in w.items()))
        for note in self.notes:
            lines.append(f"  note: {note}")
        for key, val in _plain(self.details).items():
            if isinstance(val, (list, dict)) and len(val) > 12:
                continue
            if isinstance(val, str) and "\n" in val:
                val = "\n    " + val.rstrip("\n").replace("\n", "\n    ")
            lines.append(f"  {key}: {val}")
        if self.elapsed is not None:
            lines.append(f"  time: {self.elapsed:.3f}s")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()
