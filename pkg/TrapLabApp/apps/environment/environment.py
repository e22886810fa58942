# apps/environment/environment.py
# --------------------------------
# Trap environment: a graph with per-vertex mean waiting times W_x,
# their decreasing ranking x_1, x_2, ... and the rank map Psi.

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import InputError
from apps.graphs.graph import Graph


@dataclass(frozen=True, eq=False)
class Environment:
    graph: Graph
    depth_of: np.ndarray
    ranked_vertices: Tuple[int, ...]
    alpha: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        depths = np.array(self.depth_of, dtype=float)
        depths.setflags(write=False)
        object.__setattr__(self, "depth_of", depths)
        object.__setattr__(self, "ranked_vertices", tuple(int(x) for x in self.ranked_vertices))
        n = self.graph.n_vertices
        if depths.shape != (n,):
            raise InputError(f"need {n} depths, got {depths.size}")
        if not np.all(np.isfinite(depths)) or np.any(depths <= 0):
            raise InputError("trap depths must be finite and positive")
        if sorted(self.ranked_vertices) != list(range(n)):
            raise InputError("ranked_vertices must be a permutation of the vertex ids")
        ranked = depths[list(self.ranked_vertices)]
        if np.any(np.diff(ranked) > 0):
            raise InputError("ranked_vertices must list depths in non-increasing order")

    # ------------------------------------------------------------
    # Ranks
    # ------------------------------------------------------------
    @cached_property
    def psi(self) -> np.ndarray:
        """Rank of each vertex, 1-based: psi[x_j] = j."""
        ranks = np.empty(self.graph.n_vertices, dtype=np.int64)
        ranks[list(self.ranked_vertices)] = np.arange(1, self.graph.n_vertices + 1)
        ranks.setflags(write=False)
        return ranks

    def rank_of(self, x: int) -> int:
        return int(self.psi[x])

    def vertex_of_rank(self, j: int) -> int:
        return self.ranked_vertices[j - 1]

    def deep_traps(self, M: int) -> Tuple[int, ...]:
        """A = {x_1, ..., x_M}."""
        if not 1 <= M <= self.graph.n_vertices:
            raise InputError(f"M must be in 1..{self.graph.n_vertices}, got {M}")
        return self.ranked_vertices[:M]

    # ------------------------------------------------------------
    # Measures
    # ------------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return self.graph.n_vertices

    @cached_property
    def weights(self) -> np.ndarray:
        """deg(x) * W_x."""
        return self.graph.degrees * self.depth_of

    @cached_property
    def normalizer(self) -> float:
        """Z = sum_x deg(x) W_x."""
        return math.fsum(self.weights.tolist())

    def nu_mass(self, vertices: Iterable[int]) -> float:
        return math.fsum(self.weights[list(vertices)].tolist()) / self.normalizer

    def shallow_mass(self, A: Iterable[int]) -> float:
        """nu(V \\ A)."""
        inside = set(A)
        return self.nu_mass(x for x in range(self.n_vertices) if x not in inside)

    def with_ranking(self, ranked_vertices: Sequence[int], depths_ranked: Sequence[float]) -> "Environment":
        """Same graph, depth depths_ranked[j] placed on ranked_vertices[j]."""
        depths = np.empty(self.n_vertices)
        depths[list(ranked_vertices)] = depths_ranked
        return Environment(self.graph, depths, tuple(ranked_vertices), self.alpha, self.seed)

    @classmethod
    def from_depths(cls, graph: Graph, depths: Sequence[float], alpha: Optional[float] = None, seed: Optional[int] = None) -> "Environment":
        """Rank given per-vertex depths (ties broken by vertex id)."""
        depths = np.asarray(depths, dtype=float)
        order = sorted(range(graph.n_vertices), key=lambda x: (-depths[x], x))
        return cls(graph, depths, tuple(order), alpha, seed)

    # ------------------------------------------------------------
    # JSON file
    # ------------------------------------------------------------
    def to_dict(self) -> Dict:
        return {
            "alpha": self.alpha,
            "seed": self.seed,
            "depths": self.depth_of.tolist(),
            "ranked": list(self.ranked_vertices),
        }


def save_environment(env: Environment, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(env.to_dict(), fh, indent=2)


def load_environment(path: Union[str, Path], graph: Graph) -> Environment:
    """Read the JSON file and re-validate it against `graph`."""
    from apps.harness.serializers import EnvironmentFileSerializer, validated

    with open(path, encoding="utf-8") as fh:
        data = validated(EnvironmentFileSerializer, json.load(fh))
    return Environment(graph, data["depths"], tuple(data["ranked"]), data.get("alpha"), data.get("seed"))
