"""Criterion reports and their JSON encoding.

Numbers are carried as decimal strings with an explicit digit count, never
as binary floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

__all__ = [
    "FORMAT_VERSION",
    "PASS",
    "FAIL",
    "INCONCLUSIVE",
    "Witness",
    "CriterionReport",
    "REPORT_SCHEMA",
    "decimal",
    "digits_for",
    "report_dict",
    "report_json",
    "overall_verdict",
]

FORMAT_VERSION = 1
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def digits_for(precision: int) -> int:
    """Significant decimal digits supported by ``precision`` mantissa bits."""
    return max(15, int(precision * 0.30103) - 2)


def decimal(x, digits: int = 30) -> str:
    """Decimal string for an mpmath real/complex, int or Fraction.

    Complex values with nonzero imaginary part are written ``a+bi``.
    """
    if isinstance(x, (int, str)):
        return str(x)
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not hasattr(x, "context"):
        return str(x)
    ctx = x.context
    if hasattr(x, "imag") and x.imag != 0:
        re, im = ctx.nstr(x.real, digits), ctx.nstr(abs(x.imag), digits)
        return f"{re}{'-' if x.imag < 0 else '+'}{im}i"
    return ctx.nstr(x.real if hasattr(x, "imag") else x, digits)


@dataclass(frozen=True)
class Witness:
    """An index tuple, the value found there and its margin past the threshold.

    ``margin`` is positive when the constraint is violated.
    """

    indices: tuple
    value: str
    margin: str
    extra: dict = field(default_factory=dict)


@dataclass
class CriterionReport:
    ring: str
    criterion: str
    verdict: str
    witnesses: list[Witness]
    precision_bits: int
    tolerance: str
    parameters: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    warnings: list[Witness] = field(default_factory=list)
    inconclusive: list[Witness] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INCONCLUSIVE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == PASS and self.witnesses:
            raise ValueError("a passing report cannot carry violation witnesses")
        if self.verdict == FAIL and not self.witnesses:
            raise ValueError("a failing report needs at least one witness")

    @classmethod
    def from_findings(cls, ring, criterion, witnesses, precision_bits, tolerance, **kw):
        """Verdict derived from the findings: any witness fails; otherwise any
        inconclusive entry makes the report inconclusive."""
        witnesses = list(witnesses)
        if witnesses:
            verdict = FAIL
        elif kw.get("inconclusive"):
            verdict = INCONCLUSIVE
        else:
            verdict = PASS
        return cls(ring, criterion, verdict, witnesses, precision_bits, tolerance, **kw)


def _witness_dict(w: Witness) -> dict[str, Any]:
    out = {"indices": list(w.indices), "value": w.value, "margin": w.margin}
    out.update(w.extra)
    return out


def report_dict(rep: CriterionReport) -> dict[str, Any]:
    return {
        "ring": rep.ring,
        "criterion": rep.criterion,
        "verdict": rep.verdict,
        "witnesses": [_witness_dict(w) for w in rep.witnesses],
        "precision_bits": rep.precision_bits,
        "tolerance": rep.tolerance,
        "parameters": {k: rep.parameters[k] for k in sorted(rep.parameters)},
        "notes": list(rep.notes),
        "warnings": [_witness_dict(w) for w in rep.warnings],
        "inconclusive": [_witness_dict(w) for w in rep.inconclusive],
    }


def report_json(*reports: CriterionReport) -> str:
    doc = {"format": FORMAT_VERSION, "reports": [report_dict(r) for r in reports]}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def overall_verdict(reports: Iterable[CriterionReport]) -> str:
    verdicts = [r.verdict for r in reports]
    if FAIL in verdicts:
        return FAIL
    if INCONCLUSIVE in verdicts:
        return INCONCLUSIVE
    return PASS


_WITNESS = {
    "type": "object",
    "required": ["indices", "value", "margin"],
    "properties": {
        "indices": {"type": "array", "items": {"type": ["integer", "string"]}},
        "value": {"type": "string"},
        "margin": {"type": "string"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "reports"],
    "properties": {
        "format": {"const": FORMAT_VERSION},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["ring", "criterion", "verdict", "witnesses", "precision_bits", "tolerance"],
                "properties": {
                    "ring": {"type": "string"},
                    "criterion": {"type": "string"},
                    "verdict": {"enum": [PASS, FAIL, INCONCLUSIVE]},
                    "witnesses": {"type": "array", "items": _WITNESS},
                    "precision_bits": {"type": "integer", "minimum": 1},
                    "tolerance": {"type": "string"},
                    "parameters": {"type": "object"},
                    "notes": {"type": "array", "items": {"type": "string"}},
                    "warnings": {"type": "array", "items": _WITNESS},
                    "inconclusive": {"type": "array", "items": _WITNESS},
                },
                "allOf": [
                    {
                        "if": {"properties": {"verdict": {"const": PASS}}},
                        "then": {"properties": {"witnesses": {"maxItems": 0}}},
                    },
                    {
                        "if": {"properties": {"verdict": {"const": FAIL}}},
                        "then": {"properties": {"witnesses": {"minItems": 1}}},
                    },
                ],
            },
        },
    },
}
