"""Structured verdicts for symbolic checks.

A report is a list of condition records; each record carries the condition
id, the first index tuple it was observed at, the normalized residual, a
pass flag, side conditions used during normalization, and how many index
tuples produced this exact residual.  The overall verdict is the conjunction
of the per-record flags (an attached error always fails the report).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as E
from .expr import Expr, render


@dataclass(frozen=True)
class Condition:
    cid: str
    indices: tuple
    residual_text: str
    passed: bool
    side_conditions: tuple = ()
    multiplicity: int = 1

    def to_dict(self):
        return {
            "id": self.cid,
            "indices": [i + 1 for i in self.indices],
            "residual": self.residual_text,
            "pass": self.passed,
            "side_conditions": list(self.side_conditions),
            "multiplicity": self.multiplicity,
        }


@dataclass
class CheckReport:
    conditions: list = field(default_factory=list)
    error: str | None = None

    @property
    def verdict(self) -> bool:
        if self.error is not None:
            return False
        return all(c.passed for c in self.conditions)

    def failures(self):
        return [c for c in self.conditions if not c.passed]

    def merged(self, *others: "CheckReport") -> "CheckReport":
        out = CheckReport(list(self.conditions), self.error)
        for other in others:
            out.conditions.extend(other.conditions)
            if out.error is None and other.error is not None:
                out.error = other.error
        return out

    def to_dict(self):
        data = {
            "verdict": "pass" if self.verdict else "fail",
            "conditions": [c.to_dict() for c in self.conditions],
        }
        if self.error is not None:
            data["error"] = self.error
        return data

    def summary_lines(self):
        lines = []
        if self.error is not None:
            lines.append(f"error: {self.error}")
        for c in self.conditions:
            mark = "ok  " if c.passed else "FAIL"
            where = "" if not c.indices else " @" + ",".join(str(i + 1) for i in c.indices)
            extra = f" [x{c.multiplicity}]" if c.multiplicity > 1 else ""
            side = f" (assuming {'; '.join(c.side_conditions)} != 0)" if c.side_conditions else ""
            if c.passed:
                lines.append(f"  {mark} {c.cid}{extra}{side}")
            else:
                lines.append(f"  {mark} {c.cid}{where}{extra}: residual {c.residual_text}{side}")
        lines.append("verdict: " + ("pass" if self.verdict else "FAIL"))
        return lines

    def __str__(self):
        return "\n".join(self.summary_lines())


class ReportBuilder:
    """Collects residuals, deduplicating identical (id, residual) records.

    Index tuples are visited in lexicographic order; the first tuple showing
    a given residual is kept and later duplicates only bump the multiplicity,
    so reports stay readable while every distinct residual is witnessed.
    """

    def __init__(self, ctx):
        self.ctx = ctx
        self._records: dict = {}
        self._order: list = []

    def add(self, cid: str, indices: tuple, residual: Expr):
        if residual == E.ZERO:
            passed, text, used_conds = True, "0", ()
        elif E.zero_mode_active():
            used: set = set()
            passed = E.decide_zero(residual, self.ctx, used)
            text = "0" if passed else render(residual)
            used_conds = tuple(
                sorted(
                    render(r.side_condition)
                    for r in used
                    if r.side_condition is not None
                )
            )
        else:
            normal, used_conds = E.normalize_with_side_conditions(residual, self.ctx)
            passed = normal == E.ZERO
            text = render(normal)
        key = (cid, text)
        rec = self._records.get(key)
        if rec is None:
            self._records[key] = [cid, tuple(indices), text, passed, used_conds, 1]
            self._order.append(key)
        else:
            rec[5] += 1

    def build(self) -> CheckReport:
        conditions = [
            Condition(cid, idx, text, passed, conds, mult)
            for cid, idx, text, passed, conds, mult in (
                self._records[k] for k in self._order
            )
        ]
        return CheckReport(conditions)
