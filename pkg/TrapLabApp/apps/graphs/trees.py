# apps/graphs/trees.py
# --------------------------------
# Rooted trees and Poisson Galton-Watson sampling.

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import GraphValidationError, InputError, SizeError
from apps.core.random_source import RandomLike, as_generator
from apps.graphs.graph import Graph, GraphKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RootedTree:
    """Tree stored as parent links; vertices are numbered in BFS order, root 0."""

    parent: Tuple[Optional[int], ...]

    def __post_init__(self):
        if not self.parent or self.parent[0] is not None:
            raise GraphValidationError("vertex 0 must be the root and have no parent")
        for x, p in enumerate(self.parent[1:], start=1):
            # BFS numbering makes parent < child, which rules out cycles
            if p is None or not 0 <= p < x:
                raise GraphValidationError(f"vertex {x} has invalid parent {p}")

    @property
    def root(self) -> int:
        return 0

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in self.parent]
        for x, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(x)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depth_of(self) -> Tuple[int, ...]:
        depth = [0] * self.n_vertices
        for x in range(1, self.n_vertices):
            depth[x] = depth[self.parent[x]] + 1
        return tuple(depth)

    @property
    def height(self) -> int:
        return max(self.depth_of)

    def generation(self, ell: int) -> Tuple[int, ...]:
        """Delta_ell: vertices at depth exactly ell."""
        return tuple(x for x, d in enumerate(self.depth_of) if d == ell)

    def subtree(self, y: int) -> FrozenSet[int]:
        """T_y: y and all its descendants."""
        out, stack = [], [y]
        while stack:
            x = stack.pop()
            out.append(x)
            stack.extend(self.children[x])
        return frozenset(out)

    def truncated(self, depth: int) -> "RootedTree":
        """Tree cut at generation `depth` (BFS order keeps the prefix valid)."""
        keep = sum(1 for d in self.depth_of if d <= depth)
        return RootedTree(self.parent[:keep])

    def as_graph(self) -> Graph:
        if self.n_vertices < 2:
            raise GraphValidationError("a single-vertex tree has no edges")
        edges = [(p, x) for x, p in enumerate(self.parent) if p is not None]
        return Graph.from_edges(self.n_vertices, edges, GraphKind.TREE, {"root": 0, "height": self.height})


def regular_tree(d: int, depth: int) -> RootedTree:
    """Finite tree where every non-leaf vertex has degree d (root has d children)."""
    if d < 2:
        raise InputError(f"degree must be at least 2, got {d}")
    parent: List[Optional[int]] = [None]
    frontier = [0]
    for level in range(depth):
        nxt = []
        for x in frontier:
            for _ in range(d if level == 0 else d - 1):
                parent.append(x)
                nxt.append(len(parent) - 1)
        frontier = nxt
    return RootedTree(tuple(parent))


def galton_watson(lam: float, max_depth: int, rng: RandomLike, size_budget: Optional[int] = None) -> RootedTree:
    """Poisson(lam) Galton-Watson tree truncated at generation max_depth."""
    if lam <= 1:
        raise InputError(f"offspring mean must exceed 1 (supercritical), got {lam}")
    if max_depth < 0:
        raise InputError(f"max_depth must be nonnegative, got {max_depth}")
    budget = size_budget or setting("TRAPLAB_GW_SIZE_BUDGET")
    if lam**max_depth > budget:
        raise SizeError(f"expected generation size {lam}^{max_depth} exceeds budget {budget}")

    gen = as_generator(rng)
    parent: List[Optional[int]] = [None]
    frontier = np.array([0], dtype=np.int64)
    for _ in range(max_depth):
        if frontier.size == 0:
            break
        counts = gen.poisson(lam, size=frontier.size)
        total = int(counts.sum())
        if len(parent) + total > 10 * budget:
            raise SizeError(f"Galton-Watson tree grew past {10 * budget} vertices")
        start = len(parent)
        parent.extend(np.repeat(frontier, counts).tolist())
        frontier = np.arange(start, start + total, dtype=np.int64)
    return RootedTree(tuple(parent))
