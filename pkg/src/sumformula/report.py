"""Verification entries and their text / JSON / CSV renderings."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .exact import IdentityCheckResult
from .series import NumericCheck

FORMATS = ("text", "json", "csv")
CSV_FIELDS = ("identity", "mode", "parameters", "lhs", "rhs", "residual", "tail_bound", "tolerance", "passed", "count", "items")


def fmt_value(x: Any) -> Any:
    """Lossless string forms: ``"p/q"`` for rationals, 17 significant digits for floats."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, complex):
        if x.imag == 0:
            return format(x.real, ".17g")
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, dict):
        return {str(k): fmt_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt_value(v) for v in x]
    return str(x)


def parse_value(s: str) -> Fraction | complex:
    """Inverse of :func:`fmt_value` for scalar strings."""
    if "/" in s:
        return Fraction(s)
    z = complex(s)
    return z


@dataclass
class VerificationReport:
    identity: str
    mode: str
    parameters: dict
    passed: bool
    lhs: Any = None
    rhs: Any = None
    residual: Any = None
    tail_bound: Any = None
    tolerance: Any = None
    items: list | None = None
    count: int | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_exact(cls, res: IdentityCheckResult) -> "VerificationReport":
        return cls(
            identity=res.identity_name,
            mode="exact",
            parameters=res.parameters,
            passed=res.passed,
            lhs=res.lhs,
            rhs=res.rhs,
            residual=res.residual,
        )

    @classmethod
    def from_numeric(cls, res: NumericCheck) -> "VerificationReport":
        extra = dict(res.extra)
        extra["tail_in_budget"] = res.use_tail
        return cls(
            identity=res.name,
            mode="numeric",
            parameters={**res.parameters, "cap": res.cap},
            passed=res.passed,
            lhs=res.lhs,
            rhs=res.rhs,
            residual=res.residual,
            tail_bound=res.tail_estimate,
            tolerance=res.tol,
            extra=extra,
        )

    def to_dict(self) -> dict:
        d = {
            "identity": self.identity,
            "mode": self.mode,
            "parameters": fmt_value(self.parameters),
            "passed": bool(self.passed),
            "lhs": fmt_value(self.lhs),
            "rhs": fmt_value(self.rhs),
            "residual": fmt_value(self.residual),
            "tail_bound": fmt_value(self.tail_bound),
            "tolerance": fmt_value(self.tolerance),
        }
        if self.items is not None:
            d["items"] = list(self.items)
            d["count"] = self.count
        if self.extra:
            d["extra"] = fmt_value(self.extra)
        return d


@dataclass
class Report:
    command: str
    config: dict
    entries: list[VerificationReport] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        passed = sum(1 for e in self.entries if e.passed)
        return {"total": len(self.entries), "passed": passed, "failed": len(self.entries) - passed}

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        return {
            "artifact_version": __version__,
            "command": self.command,
            "config": fmt_value(self.config),
            "entries": [e.to_dict() for e in self.entries],
            "summary": self.summary,
        }

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            return self._csv()
        if fmt == "text":
            return self._text()
        raise ValueError(f"unknown format {fmt!r}")

    def _csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for e in self.entries:
            d = e.to_dict()
            row = {key: d.get(key) for key in CSV_FIELDS}
            row["parameters"] = json.dumps(d["parameters"], sort_keys=True, separators=(",", ":"))
            row["passed"] = "true" if e.passed else "false"
            if e.items is not None:
                row["items"] = ";".join(e.items)
            writer.writerow({k: "" if v is None else v for k, v in row.items()})
        return buf.getvalue()

    def _text(self) -> str:
        lines = [f"sumformula {__version__} :: {self.command}"]
        for e in self.entries:
            d = e.to_dict()
            params = " ".join(f"{k}={v}" for k, v in d["parameters"].items())
            status = "PASS" if e.passed else "FAIL"
            if e.mode == "enumeration":
                lines.append(f"{status} {e.identity} {params} count={e.count} expected={e.extra.get('expected_count')}")
                lines.extend(f"  {item}" for item in e.items or [])
            elif e.mode == "exact":
                lines.append(f"{status} {e.identity} {params} lhs={d['lhs']} rhs={d['rhs']}")
            else:
                lines.append(
                    f"{status} {e.identity} {params} lhs={d['lhs']} rhs={d['rhs']} "
                    f"residual={d['residual']} tail<={d['tail_bound']} (heuristic) tol={d['tolerance']}"
                )
        s = self.summary
        lines.append(f"summary: {s['passed']}/{s['total']} passed, {s['failed']} failed")
        return "\n".join(lines) + "\n"
