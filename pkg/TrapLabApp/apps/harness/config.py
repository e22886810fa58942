# apps/harness/config.py
# --------------------------------
# Experiment configuration: JSON file + command-line overrides, validated by
# ExperimentConfigSerializer and frozen into dataclasses.

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from apps.core.exceptions import InputError
from apps.harness.serializers import ExperimentConfigSerializer, validated

# Fields that change how a run executes, never what it reports
RUN_CONTROL_FIELDS = frozenset({"workers", "step_budget"})


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    n: Optional[int] = None
    N: Optional[int] = None
    d: Optional[int] = None
    lam: Optional[float] = None

    def label(self) -> str:
        parts = [f"{f.name}={getattr(self, f.name)}" for f in fields(self) if f.name != "kind" and getattr(self, f.name) is not None]
        return f"{self.kind}({', '.join(parts)})"


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSpec
    alpha: float
    ell: int
    seed: Optional[int] = None
    horizon: float = 1.0
    M: int = 5
    L: int = 8
    replicas: int = 100
    cycles: int = 50
    n_hit: int = 3
    significance: float = 0.01
    start_mode: str = "rank"
    start_rank: int = 1
    truncation: int = 64
    max_resamples: int = 100
    escape_samples: int = 10000
    tree_depth: int = 8
    k_paths: int = 20
    workers: int = 1
    step_budget: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["graph"] = {k: v for k, v in data["graph"].items() if v is not None}
        return data

    def provenance(self) -> Dict[str, Any]:
        """Config as recorded in reports: run-control fields left out."""
        return {k: v for k, v in self.to_dict().items() if k not in RUN_CONTROL_FIELDS}

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return from_dict({**self.to_dict(), "seed": seed})


def from_dict(data: Mapping[str, Any]) -> ExperimentConfig:
    clean = dict(validated(ExperimentConfigSerializer, dict(data)))
    clean["graph"] = GraphSpec(**dict(clean["graph"]))
    return ExperimentConfig(**clean)


def _set_path(data: Dict[str, Any], key: str, value: Any) -> None:
    """Set `key` or a dotted `graph.key` inside data."""
    if "." in key:
        head, tail = key.split(".", 1)
        if head != "graph":
            raise InputError(f"unknown override {key!r}")
        data.setdefault("graph", {})[tail] = value
    else:
        data[key] = value


def load_config(path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Read a JSON config file, then apply overrides (None values are skipped)."""
    data: Dict[str, Any] = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InputError(f"{path}: config must be a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            _set_path(data, key, value)
    return from_dict(data)
