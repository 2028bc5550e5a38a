from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .fps import TruncatedSeries

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class Discrepancy:
    """First point of disagreement.  ``power`` is an exponent of q for series
    checks and an exponent triple (q, X, Y) for symbolic checks."""

    power: Any
    expected: int
    got: int

    def to_dict(self) -> dict:
        power = list(self.power) if isinstance(self.power, tuple) else self.power
        return {"power": power, "expected": self.expected, "got": self.got}


@dataclass(frozen=True)
class VerificationReport:
    subject: str
    status: str
    checked_order: int
    first_discrepancy: Discrepancy | None = None
    params: dict = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL):
            raise ValueError(f"bad status {self.status!r}")
        if (self.status == FAIL) != (self.first_discrepancy is not None):
            raise ValueError("a report fails exactly when it carries a discrepancy")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        d = {
            "subject": self.subject,
            "status": self.status,
            "checked_order": self.checked_order,
            "params": dict(self.params),
        }
        if self.first_discrepancy is not None:
            d["first_discrepancy"] = self.first_discrepancy.to_dict()
        if self.note:
            d["note"] = self.note
        return d


def render_plain(d: dict) -> str:
    """One line for a report dict (as produced by ``to_dict``)."""
    params = " ".join(f"{k}={v}" for k, v in d["params"].items())
    line = f"{d['status'].upper()} {d['subject']}"
    if params:
        line += f" [{params}]"
    line += f" order={d['checked_order']}"
    fd = d.get("first_discrepancy")
    if fd is not None:
        p = fd["power"]
        where = f"q^{p}" if isinstance(p, int) else "q^{}*X^{}*Y^{}".format(*p)
        line += f" first discrepancy at {where}: expected {fd['expected']}, got {fd['got']}"
    if d.get("note"):
        line += f" ({d['note']})"
    return line


def compare_series(
    subject: str, expected: TruncatedSeries, got: TruncatedSeries, **params
) -> VerificationReport:
    """Coefficientwise comparison at the common truncation order."""
    order = min(expected.order, got.order)
    for i in range(order):
        if expected.coeffs[i] != got.coeffs[i]:
            return VerificationReport(
                subject, FAIL, order, Discrepancy(i, expected.coeffs[i], got.coeffs[i]), params
            )
    return VerificationReport(subject, PASS, order, None, params)


def combine(subject: str, reports: Iterable[VerificationReport], **params) -> VerificationReport:
    """Fold sub-reports: fails with the first failing sub-report's discrepancy."""
    reports = list(reports)
    order = min((r.checked_order for r in reports), default=0)
    for r in reports:
        if not r.passed:
            merged = {**params, **r.params}
            return VerificationReport(
                subject, FAIL, r.checked_order, r.first_discrepancy, merged,
                note=r.note or r.subject,
            )
    return VerificationReport(subject, PASS, order, None, params)
