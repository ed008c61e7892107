"""Structured, reproducible results of verification suites.

A report serializes to a JSON tree with fixed field names
{suite, config, records[], pass}; each record carries
{name, target, estimate, stderr, band, pass, detail}.  The config echo holds
every input (seeds, sample sizes, levels, tolerances) needed to regenerate
the report byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    """One verified quantity: estimate vs target within a pre-registered band."""

    name: str
    target: float
    estimate: float
    stderr: float
    band: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "target": self.target,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "band": self.band,
            "pass": self.passed,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(
            name=d["name"],
            target=d["target"],
            estimate=d["estimate"],
            stderr=d["stderr"],
            band=d["band"],
            passed=d["pass"],
            detail=d.get("detail", {}),
        )


def band_record(name, target, estimate, stderr, width=4.0, detail=None):
    """Pass iff |estimate - target| <= width * stderr."""
    band = width * stderr
    return CheckRecord(
        name=name,
        target=float(target),
        estimate=float(estimate),
        stderr=float(stderr),
        band=float(band),
        passed=bool(abs(estimate - target) <= band),
        detail=detail or {},
    )


def upper_bound_record(name, bound, estimate, stderr=0.0, detail=None):
    """Pass iff estimate <= bound (one-sided); target/band echo the bound."""
    return CheckRecord(
        name=name,
        target=float(bound),
        estimate=float(estimate),
        stderr=float(stderr),
        band=float(bound),
        passed=bool(estimate <= bound),
        detail=detail or {},
    )


@dataclass
class StatReport:
    suite: str
    config: dict
    records: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "records": [r.to_dict() for r in self.records],
            "pass": self.passed,
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StatReport":
        d = json.loads(text)
        return cls(
            suite=d["suite"],
            config=d["config"],
            records=[CheckRecord.from_dict(r) for r in d["records"]],
        )
