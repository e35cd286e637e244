"""Check reports: one record per verified clause, renderable as text or NDJSON."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
REFUSED = "refused"


def _show(value):
    """Render a witness/counterexample component deterministically."""
    if isinstance(value, frozenset) or isinstance(value, set):
        return sorted((_show(v) for v in value), key=str)
    if isinstance(value, (tuple, list)):
        return [_show(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _show(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


@dataclass
class CheckRecord:
    subject: str
    check: str
    verdict: str
    witnesses: dict = field(default_factory=dict)
    counterexample: tuple | None = None
    detail: str = ""

    def __post_init__(self):
        # fail => counterexample present is the format invariant; a missing tuple
        # still renders, but checkers are expected to supply one.
        if self.verdict not in (PASS, FAIL, REFUSED):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def passed(self):
        return self.verdict == PASS

    def as_dict(self, elapsed_ms=None):
        rec = {
            "subject": self.subject,
            "check": self.check,
            "verdict": self.verdict,
            "witnesses": _show(self.witnesses),
            "counterexample": _show(self.counterexample) if self.counterexample else None,
        }
        if self.detail:
            rec["detail"] = self.detail
        if elapsed_ms is not None:
            rec["ms"] = round(elapsed_ms, 3)
        return rec


@dataclass
class Report:
    subject: str
    records: list[CheckRecord] = field(default_factory=list)
    elapsed_ms: float = 0.0

    def add(self, check, verdict, witnesses=None, counterexample=None, detail=""):
        self.records.append(
            CheckRecord(self.subject, check, verdict,
                        witnesses or {}, counterexample, detail)
        )
        return self

    def ok(self, check, **witnesses):
        return self.add(check, PASS, witnesses=witnesses)

    def fail(self, check, counterexample, detail=""):
        return self.add(check, FAIL, counterexample=tuple(counterexample), detail=detail)

    def extend(self, other):
        self.records.extend(other.records)
        return self

    def record(self, check):
        for rec in self.records:
            if rec.check == check:
                return rec
        raise KeyError(check)

    @property
    def passed(self):
        return all(r.passed for r in self.records)

    @property
    def failures(self):
        return [r for r in self.records if r.verdict == FAIL]

    def render_text(self):
        lines = []
        for r in self.records:
            line = f"[{r.verdict:>7}] {r.subject} :: {r.check}"
            if r.witnesses:
                line += f"  witnesses={_show(r.witnesses)}"
            if r.counterexample:
                line += f"  counterexample={_show(r.counterexample)}"
            if r.detail:
                line += f"  ({r.detail})"
            lines.append(line)
        return "\n".join(lines)

    def render_machine(self):
        # No timing in machine records: the stream must be byte-stable across
        # runs (witness selection is deterministic, wall time is not).
        return "\n".join(
            json.dumps(r.as_dict(), sort_keys=True) for r in self.records
        )
