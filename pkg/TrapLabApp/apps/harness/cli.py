# apps/harness/cli.py
# --------------------------------
# Argument groups and report handling shared by the management commands.

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict

from django.core.management.base import CommandError

from apps.core.conf import setting
from apps.harness.report import Report

# Flag -> config key; graph fields use dotted keys
CONFIG_FLAGS = {
    "kind": "graph.kind",
    "n": "graph.n",
    "N": "graph.N",
    "d": "graph.d",
    "lam": "graph.lam",
    "alpha": "alpha",
    "ell": "ell",
    "seed": "seed",
    "horizon": "horizon",
    "M": "M",
    "L": "L",
    "replicas": "replicas",
    "cycles": "cycles",
    "n_hit": "n_hit",
    "significance": "significance",
    "start_mode": "start_mode",
    "start_rank": "start_rank",
    "truncation": "truncation",
    "max_resamples": "max_resamples",
    "escape_samples": "escape_samples",
    "tree_depth": "tree_depth",
    "k_paths": "k_paths",
    "workers": "workers",
    "step_budget": "step_budget",
}

_TYPES = {
    "kind": str, "lam": float, "alpha": float, "horizon": float,
    "significance": float, "start_mode": str,
}


def add_config_arguments(parser, seed_required: bool = False) -> None:
    """--config plus one override flag per experiment field."""
    parser.add_argument("--config", help="JSON experiment config")
    for flag in CONFIG_FLAGS:
        if flag == "seed":
            parser.add_argument("--seed", type=int, required=seed_required, help="master seed")
            continue
        parser.add_argument(f"--{flag.replace('_', '-')}", dest=flag, type=_TYPES.get(flag, int))


def config_overrides(options: Dict[str, Any]) -> Dict[str, Any]:
    return {key: options.get(flag) for flag, key in CONFIG_FLAGS.items()}


def add_output_argument(parser) -> None:
    parser.add_argument("--out", help="output directory (default TRAPLAB_OUTPUT_DIR)")


def output_dir(options: Dict[str, Any]) -> Path:
    return Path(options.get("out") or setting("TRAPLAB_OUTPUT_DIR", "output"))


def finish(command, report: Report, directory: Path, stem: str) -> None:
    """Write the report; CommandError (exit 1) when any test failed."""
    path = report.write(directory, stem)
    if report.all_passed:
        command.stdout.write(command.style.SUCCESS(f"✅ {len(report.tests)} tests passed, report at {path}"))
        return
    for name in report.failures:
        command.stderr.write(command.style.ERROR(f"❌ {name}"))
    raise CommandError(f"{len(report.failures)} of {len(report.tests)} tests failed, report at {path}")
