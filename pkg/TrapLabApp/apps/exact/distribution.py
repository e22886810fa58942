# apps/exact/distribution.py
# --------------------------------
# Finite probability vectors keyed by vertex ids or K-process states.

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Sequence

import numpy as np

from apps.core.exceptions import InputError

MASS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector on a finite support of vertices (or states)."""

    support: tuple
    mass: np.ndarray

    def __post_init__(self):
        support = tuple(int(s) for s in self.support)
        mass = np.array(self.mass, dtype=float)
        mass.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)
        if len(set(support)) != len(support):
            raise InputError("distribution support has duplicates")
        if mass.shape != (len(support),):
            raise InputError("one mass per support point required")
        if np.any(mass < 0):
            raise InputError("masses must be nonnegative")
        if abs(math.fsum(mass.tolist()) - 1.0) > MASS_TOL:
            raise InputError(f"masses sum to {math.fsum(mass.tolist())!r}, not 1")

    @classmethod
    def from_weights(cls, support: Sequence[int], weights: Iterable[float]) -> "Distribution":
        """Normalize nonnegative weights (tiny negative round-off is clipped)."""
        w = np.clip(np.asarray(list(weights), dtype=float), 0.0, None)
        total = math.fsum(w.tolist())
        if total <= 0:
            raise InputError("weights have zero total mass")
        return cls(tuple(support), w / total)

    @classmethod
    def point_mass(cls, x: int) -> "Distribution":
        return cls((x,), np.ones(1))

    def __getitem__(self, x: int) -> float:
        try:
            return float(self.mass[self.support.index(int(x))])
        except ValueError:
            return 0.0

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(self.support, self.mass.tolist()))

    def aligned(self, order: Sequence[int]) -> np.ndarray:
        return np.asarray([self[x] for x in order])

    def total_variation(self, other: "Distribution") -> float:
        keys = sorted(set(self.support) | set(other.support))
        return 0.5 * math.fsum(abs(self[k] - other[k]) for k in keys)

    def l1(self, other: "Distribution") -> float:
        return 2.0 * self.total_variation(other)

    def __repr__(self) -> str:
        body = ", ".join(f"{s}: {m:.6g}" for s, m in zip(self.support, self.mass))
        return f"Distribution({{{body}}})"
