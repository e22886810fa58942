# apps/harness/report.py
# --------------------------------
# Experiment report: one record per acceptance test, provenance, summaries.
# Output is byte-stable for a given config and seed (sorted keys, no clocks).

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from apps.core.exceptions import InputError
from apps.harness.stats import FitResult

CODE_VERSION = "1.0.0"
CSV_HEADER = ("name", "statistic", "pvalue", "threshold", "pass")


@dataclass(frozen=True)
class TestRecord:
    """One acceptance test.

    Statistical tests carry a p-value and pass when it exceeds the threshold
    (the significance level); bound checks carry lhs as the statistic and
    rhs as the threshold.
    """

    __test__ = False  # not a pytest class

    name: str
    statistic: float
    threshold: float
    passed: bool
    pvalue: Optional[float] = None

    @classmethod
    def from_fit(cls, name: str, fit: FitResult, significance: float) -> "TestRecord":
        return cls(name, fit.statistic, significance, fit.pvalue > significance, fit.pvalue)

    @classmethod
    def from_certificate(cls, certificate) -> "TestRecord":
        return cls(certificate.instance, certificate.lhs, certificate.rhs, certificate.passed)

    @classmethod
    def from_bound(cls, name: str, value: float, bound: float) -> "TestRecord":
        """Passes when value <= bound."""
        return cls(name, value, bound, value <= bound)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "pvalue": self.pvalue,
            "threshold": self.threshold,
            "pass": self.passed,
        }


@dataclass
class Report:
    provenance: Dict[str, Any]
    tests: List[TestRecord] = field(default_factory=list)
    summaries: Dict[str, Any] = field(default_factory=dict)

    def add(self, record: TestRecord) -> None:
        if any(t.name == record.name for t in self.tests):
            raise InputError(f"test {record.name!r} is already in the report")
        self.tests.append(record)

    @property
    def all_passed(self) -> bool:
        return all(t.passed for t in self.tests)

    @property
    def failures(self) -> List[str]:
        return [t.name for t in self.tests if not t.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "provenance": {**self.provenance, "code_version": CODE_VERSION},
            "tests": [t.to_dict() for t in self.tests],
            "summaries": self.summaries,
            "all_passed": self.all_passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, directory: Union[str, Path], stem: str = "report") -> Path:
        """Write <stem>.json and <stem>.csv; returns the JSON path."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        json_path = directory / f"{stem}.json"
        json_path.write_text(self.to_json() + "\n", encoding="utf-8")
        with open(directory / f"{stem}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for t in self.tests:
                writer.writerow([t.name, repr(t.statistic), "" if t.pvalue is None else repr(t.pvalue), repr(t.threshold), t.passed])
        return json_path
