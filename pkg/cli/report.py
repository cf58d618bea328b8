#!/usr/bin/env python3
"""
Run reports: the machine-readable record every subcommand produces
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import sympy
from tabulate import tabulate

logger = logging.getLogger(__name__)


def jsonable(value: Any) -> Any:
    """Convert numpy, sympy and fraction values into plain JSON types"""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.generic):
        return jsonable(value.item())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (Fraction, sympy.Basic)):
        return str(value)
    return str(value)


@dataclass
class Check:
    name: str
    expected: Any
    actual: Any
    passed: bool
    tolerance: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "expected": jsonable(self.expected), "actual": jsonable(self.actual),
                "pass": self.passed, "tolerance": self.tolerance}


def _matches(expected: Any, actual: Any, tolerance: Optional[float]) -> bool:
    if tolerance is None or isinstance(expected, (bool, str)) or isinstance(actual, (bool, str)):
        return expected == actual
    try:
        return abs(float(expected) - float(actual)) <= tolerance
    except (TypeError, ValueError):
        return False


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    elapsed_ms: int = 0

    def check(self, name: str, expected: Any, actual: Any, tolerance: Optional[float] = None) -> bool:
        """Record a check: numeric within tolerance, exact equality otherwise"""
        passed = _matches(expected, actual, tolerance)
        self.checks.append(Check(name, expected, actual, passed, tolerance))
        if not passed:
            logger.warning(f"Check failed: {name} expected {expected}, got {actual}")
        return passed

    def merge(self, other: "RunReport", prefix: Optional[str] = None) -> None:
        """Fold another report's results and checks in under a prefix"""
        prefix = prefix or other.command
        self.results[prefix] = other.results
        for c in other.checks:
            self.checks.append(Check(f"{prefix}.{c.name}", c.expected, c.actual, c.passed, c.tolerance))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed_checks(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "results": jsonable(self.results),
            "checks": [c.to_dict() for c in self.checks],
            "passed": self.passed,
            "elapsed_ms": int(self.elapsed_ms),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        checks = [Check(c["name"], c["expected"], c["actual"], c["pass"], c.get("tolerance"))
                  for c in data.get("checks", [])]
        return cls(data["command"], data.get("inputs", {}), data.get("results", {}), checks,
                   data.get("elapsed_ms", 0))

    def table(self) -> str:
        rows = [[c.name, jsonable(c.expected), jsonable(c.actual), "PASS" if c.passed else "FAIL"]
                for c in self.checks]
        summary = f"{self.command}: {'all checks passed' if self.passed else 'CHECKS FAILED'}"
        if not rows:
            return summary
        return tabulate(rows, headers=["check", "expected", "actual", "status"]) + "\n" + summary
