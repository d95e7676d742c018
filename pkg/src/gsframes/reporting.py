"""
Verification reports for gsframes.

Every theorem check returns a VerificationReport. A failed identity is a
FAIL verdict with residuals and witnesses, never an exception. This module
also renders reports as line-oriented text or as a single JSON document and
reads the JSON form back.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Union

import numpy as np

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"

    @property
    def label(self) -> str:
        return {"pass": "PASS", "fail": "FAIL", "not-applicable": "N/A"}[self.value]


class ReportParseError(ValueError):
    """Raised when a machine-format document cannot be read back."""
    pass


@dataclass
class VerificationReport:
    """Represents the outcome of one executable check."""
    check: str
    verdict: Verdict = Verdict.PASS
    residuals: Dict[str, float] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)
    witnesses: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    @property
    def failed(self) -> bool:
        return self.verdict is Verdict.FAIL

    def record(self, name: str, residual: float, threshold: float,
               witness: Any = None) -> bool:
        """
        Record a residual against its threshold.

        A residual above the threshold (or NaN) turns the verdict to FAIL.
        The witness is stored only when the sub-check fails.

        Returns:
            True if the sub-check passed.
        """
        residual = float(residual)
        self.residuals[name] = residual
        self.thresholds[name] = float(threshold)
        ok = residual <= threshold
        if not ok:
            self.verdict = Verdict.FAIL
            if witness is not None:
                self.witnesses[name] = witness
        return ok

    def require(self, name: str, ok: bool, witness: Any = None) -> bool:
        """Record a boolean sub-check; a failure always leaves a witness."""
        self.details[name] = bool(ok)
        if not ok:
            self.verdict = Verdict.FAIL
            self.witnesses[name] = witness if witness is not None else "violated"
        return bool(ok)

    def absorb(self, other: "VerificationReport", prefix: str) -> None:
        """Fold a sub-report into this one under a name prefix."""
        for name, value in other.residuals.items():
            self.residuals[f"{prefix}.{name}"] = value
        for name, value in other.thresholds.items():
            self.thresholds[f"{prefix}.{name}"] = value
        for name, value in other.witnesses.items():
            self.witnesses[f"{prefix}.{name}"] = value
        for name, value in other.details.items():
            self.details[f"{prefix}.{name}"] = value
        if other.failed:
            self.verdict = Verdict.FAIL


def not_applicable(check: str, reason: str) -> VerificationReport:
    return VerificationReport(check=check, verdict=Verdict.NOT_APPLICABLE,
                              details={"reason": reason})


def all_passed(reports: Iterable[VerificationReport]) -> bool:
    """True when no report failed. NOT_APPLICABLE does not count as failure."""
    return not any(r.failed for r in reports)


def exit_status(reports: Iterable[VerificationReport]) -> int:
    return 0 if all_passed(reports) else 1


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def to_jsonable(value: Any) -> Any:
    """Convert numpy values and complex numbers into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Enum):
        return value.value
    return value


def _format_float(value: float, digits: int) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, f".{digits}g")


def _is_scalar(value: Any) -> bool:
    return not isinstance(value, (dict, list))


def _dump(value: Any, level: int, indent: int, digits: int) -> str:
    if isinstance(value, dict):
        if not value:
            return "{}"
        pad = " " * (indent * (level + 1))
        items = [f"{pad}{json.dumps(k)}: {_dump(v, level + 1, indent, digits)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * (indent * level) + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(_is_scalar(v) for v in value):
            return "[" + ", ".join(_dump(v, level, indent, digits) for v in value) + "]"
        if all(isinstance(v, list) and all(_is_scalar(w) for w in v) for v in value) \
                and sum(len(v) for v in value) <= 8:
            return "[" + ", ".join(_dump(v, level, indent, digits) for v in value) + "]"
        pad = " " * (indent * (level + 1))
        items = [pad + _dump(v, level + 1, indent, digits) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + " " * (indent * level) + "]"
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _format_float(value, digits)
    return json.dumps(str(value))


def _report_document(report: VerificationReport) -> Dict[str, Any]:
    return to_jsonable({
        "check": report.check,
        "verdict": report.verdict.value,
        "residuals": report.residuals,
        "thresholds": report.thresholds,
        "witnesses": report.witnesses,
        "details": report.details,
        "provenance": report.provenance,
    })


def emit_machine(reports: List[VerificationReport], digits: int = 17) -> str:
    document = {"reports": [_report_document(r) for r in reports]}
    return _dump(document, 0, 2, digits) + "\n"


def emit_text(reports: List[VerificationReport], digits: int = 17) -> str:
    blocks = []
    for report in reports:
        doc = _report_document(report)
        lines = [f"{report.verdict.label} {report.check}"]
        for section, prefix in [("residuals", "residual"), ("thresholds", "threshold"),
                                ("witnesses", "witness"), ("details", "detail"),
                                ("provenance", "provenance")]:
            for name, value in doc[section].items():
                rendered = _dump(value, 0, 0, digits).replace("\n", "")
                lines.append(f"{prefix}.{name}: {rendered}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def emit_report(reports: Union[VerificationReport, List[VerificationReport]],
                fmt: str = "text", digits: int = 17) -> str:
    """
    Render one or more reports.

    Args:
        reports: A report or a list of reports.
        fmt: "text" or "machine".
        digits: Significant digits for floating values.

    Returns:
        The rendered document, newline-terminated.

    Raises:
        ValueError: If fmt is not a known format.
    """
    if isinstance(reports, VerificationReport):
        reports = [reports]
    if fmt == "machine":
        return emit_machine(reports, digits)
    if fmt == "text":
        return emit_text(reports, digits)
    raise ValueError(f"Unknown output format: {fmt}. Must be 'text' or 'machine'")


def _read_float(value: Any) -> float:
    # "nan" and "inf" arrive as strings
    return float(value)


def parse_reports(text: str) -> List[VerificationReport]:
    """
    Read a machine-format document back into reports.

    Raises:
        ReportParseError: If the text is not a machine-format document.
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ReportParseError(f"Invalid report document: {e}")
    if not isinstance(document, dict) or not isinstance(document.get("reports"), list):
        raise ReportParseError("Report document must be an object with a 'reports' list")

    reports = []
    for item in document["reports"]:
        try:
            reports.append(VerificationReport(
                check=item["check"],
                verdict=Verdict(item["verdict"]),
                residuals={k: _read_float(v) for k, v in item.get("residuals", {}).items()},
                thresholds={k: _read_float(v) for k, v in item.get("thresholds", {}).items()},
                witnesses=dict(item.get("witnesses", {})),
                details=dict(item.get("details", {})),
                provenance=dict(item.get("provenance", {})),
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise ReportParseError(f"Malformed report entry: {e}")
    return reports
