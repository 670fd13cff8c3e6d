"""Structured verification records shared by every module and the CLI.

A report captures one check: what went in, the expected value with its
provenance, what came out, the tolerance, and pass/fail.  Serialized
reports omit wall time so identical configurations produce byte-identical
files; timing stays available on the in-memory object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA = "qcurv-report/1"


def jsonable(value: Any) -> Any:
    """Map exact and numpy values onto plain JSON types, deterministically."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        return value.item()
    return value


@dataclass
class VerificationReport:
    check_id: str
    inputs: dict
    expected: Any
    provenance: str
    computed: Any
    tolerance: Any  # float, or the string "exact"
    passed: bool
    wall_time_s: float = 0.0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "check": self.check_id,
            "inputs": jsonable(self.inputs),
            "expected": jsonable(self.expected),
            "provenance": self.provenance,
            "computed": jsonable(self.computed),
            "tolerance": jsonable(self.tolerance),
            "pass": self.passed,
        }
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out


def exact_check(check_id, inputs, expected, provenance, computed) -> VerificationReport:
    return VerificationReport(
        check_id=check_id,
        inputs=inputs,
        expected=expected,
        provenance=provenance,
        computed=computed,
        tolerance="exact",
        passed=(computed == expected),
    )


def close_check(check_id, inputs, expected, provenance, computed, rtol) -> VerificationReport:
    expected_f = float(expected)
    computed_f = float(computed)
    scale = max(abs(expected_f), 1e-300)
    passed = abs(computed_f - expected_f) <= rtol * scale
    return VerificationReport(
        check_id=check_id,
        inputs=inputs,
        expected=expected,
        provenance=provenance,
        computed=computed,
        tolerance=rtol,
        passed=passed,
    )


def dump_report(payload: dict, path: str | None = None) -> str:
    """Serialize a report envelope with sorted keys; optionally write it.

    Writing goes through a temp file and rename so partial output never
    lands at the target path.
    """
    doc = {"schema": SCHEMA}
    doc.update(payload)
    text = json.dumps(jsonable(doc), indent=2, sort_keys=True) + "\n"
    if path:
        import os
        import tempfile

        d = os.path.dirname(os.path.abspath(path)) or "."
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    return text
