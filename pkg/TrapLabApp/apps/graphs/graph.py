# apps/graphs/graph.py
# --------------------------------
# Immutable simple undirected connected graph, csgraph distance queries and edge-list IO.

from __future__ import annotations

import logging
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        def __str__(self) -> str:
            return str(self.value)

        def __format__(self, format_spec: str) -> str:
            return str.__format__(str(self.value), format_spec)
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from apps.core.exceptions import GraphValidationError, InputError, PreconditionError
from apps.core.random_source import RandomLike, as_generator

logger = logging.getLogger(__name__)


class GraphKind(StrEnum):
    HYPERCUBE = "hypercube"
    TORUS = "torus"
    REGULAR = "regular"
    ER_GIANT = "er_giant"
    TREE = "tree"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Graph:
    """Adjacency-list graph. Vertex ids are 0..n-1, neighbour lists sorted.

    Construction checks symmetry, simplicity, positive degrees and
    connectivity; afterwards the object is read-only and safe to share
    between replicas.
    """

    adjacency: Tuple[Tuple[int, ...], ...]
    kind: GraphKind = GraphKind.CUSTOM
    provenance: Mapping = field(default_factory=dict)

    def __post_init__(self):
        adjacency = tuple(tuple(sorted(int(y) for y in nbrs)) for nbrs in self.adjacency)
        object.__setattr__(self, "adjacency", adjacency)
        object.__setattr__(self, "kind", GraphKind(self.kind))
        self._validate()

    def _validate(self) -> None:
        n = len(self.adjacency)
        if n < 1:
            raise GraphValidationError("graph needs at least one vertex")
        for x, nbrs in enumerate(self.adjacency):
            if not nbrs:
                raise GraphValidationError(f"vertex {x} has degree 0")
            for i, y in enumerate(nbrs):
                if not 0 <= y < n:
                    raise GraphValidationError(f"vertex {x} lists unknown neighbour {y}")
                if y == x:
                    raise GraphValidationError(f"self-loop at vertex {x}")
                if i and nbrs[i - 1] == y:
                    raise GraphValidationError(f"duplicate edge {x}-{y}")
        for x, nbrs in enumerate(self.adjacency):
            for y in nbrs:
                if x not in self._neighbor_sets[y]:
                    raise GraphValidationError(f"edge {x}-{y} is not symmetric")
        n_components, _ = csgraph.connected_components(self.adjacency_matrix, directed=False)
        if n_components != 1:
            raise GraphValidationError(f"graph is not connected ({n_components} components)")

    # ------------------------------------------------------------
    # Basic structure
    # ------------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.adjacency)

    @cached_property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    @cached_property
    def _neighbor_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.fromiter((len(nbrs) for nbrs in self.adjacency), dtype=np.int64, count=self.n_vertices)
        deg.setflags(write=False)
        return deg

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def neighbors(self, x: int) -> Tuple[int, ...]:
        return self.adjacency[x]

    def has_edge(self, x: int, y: int) -> bool:
        return y in self._neighbor_sets[x]

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Each edge once, as (u, v) with u < v, in lexicographic order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    @cached_property
    def csr(self) -> Tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the adjacency in CSR layout."""
        indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=indptr[1:])
        indices = np.fromiter(
            (y for nbrs in self.adjacency for y in nbrs), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @cached_property
    def adjacency_matrix(self) -> sparse.csr_matrix:
        indptr, indices = self.csr
        data = np.ones(indices.size)
        return sparse.csr_matrix((data, indices, indptr), shape=(self.n_vertices, self.n_vertices))

    # ------------------------------------------------------------
    # Distance queries (scipy.sparse.csgraph on the adjacency matrix)
    # ------------------------------------------------------------
    def _sources(self, sources: Union[int, Iterable[int]]) -> List[int]:
        starts = [int(sources)] if isinstance(sources, (int, np.integer)) else [int(s) for s in sources]
        for s in starts:
            self._check_vertex(s)
        return starts

    def distance_array(self, sources: Union[int, Iterable[int]], cutoff: Optional[int] = None) -> np.ndarray:
        """Graph distance to the nearest source per vertex; inf beyond `cutoff`."""
        starts = self._sources(sources)
        if not starts:
            return np.full(self.n_vertices, np.inf)
        return csgraph.dijkstra(
            self.adjacency_matrix,
            directed=False,
            indices=starts,
            unweighted=True,
            min_only=True,
            limit=np.inf if cutoff is None else float(cutoff),
        )

    def distances_from(self, sources: Union[int, Iterable[int]], cutoff: Optional[int] = None) -> Dict[int, int]:
        """Distances from a vertex or a set, keyed by the vertices within `cutoff`."""
        dist = self.distance_array(sources, cutoff)
        reached = np.flatnonzero(np.isfinite(dist))
        return {int(x): int(dist[x]) for x in reached}

    def ball(self, center: Union[int, Iterable[int]], ell: int) -> FrozenSet[int]:
        """B(C, ell): vertices within distance ell of a vertex or set."""
        if ell < 0:
            raise InputError(f"radius must be nonnegative, got {ell}")
        return frozenset(np.flatnonzero(np.isfinite(self.distance_array(center, ell))).tolist())

    def exterior(self, center: Union[int, Iterable[int]], ell: int) -> FrozenSet[int]:
        """R(C, ell): vertices at distance greater than ell."""
        if ell < 0:
            raise InputError(f"radius must be nonnegative, got {ell}")
        return frozenset(np.flatnonzero(np.isinf(self.distance_array(center, ell))).tolist())

    def distance(self, x: int, y: int) -> int:
        self._check_vertex(y)
        d = self.distance_array(x)[int(y)]
        if not np.isfinite(d):
            raise GraphValidationError("graph is not connected")
        return int(d)

    def ball_cycle_count(self, x: int, r: int) -> int:
        """Cyclomatic number of the subgraph induced by B(x, r); 0 means a tree."""
        inside = sorted(self.ball(x, r))
        edges = self.adjacency_matrix[inside][:, inside].nnz // 2
        return edges - len(inside) + 1

    def _check_vertex(self, x: int) -> None:
        if not 0 <= int(x) < self.n_vertices:
            raise InputError(f"vertex {x} not in 0..{self.n_vertices - 1}")

    # ------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------
    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[Tuple[int, int]],
        kind: GraphKind = GraphKind.CUSTOM,
        provenance: Optional[Mapping] = None,
    ) -> "Graph":
        adjacency: List[List[int]] = [[] for _ in range(n_vertices)]
        for u, v in edges:
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphValidationError(f"edge {u}-{v} out of range for {n_vertices} vertices")
            adjacency[u].append(v)
            adjacency[v].append(u)
        return cls(tuple(tuple(a) for a in adjacency), kind, dict(provenance or {}))

    def __repr__(self) -> str:
        return f"Graph(kind={self.kind.value}, n={self.n_vertices}, m={self.n_edges})"


def ball(g: Graph, x: int, ell: int) -> FrozenSet[int]:
    return g.ball(x, ell)


def graph_distance(g: Graph, x: int, y: int) -> int:
    return g.distance(x, y)


def fraction_tree_like(g: Graph, r: int, n_samples: int, rng: RandomLike) -> float:
    """Share of randomly chosen vertices whose radius-r ball is a tree."""
    picks = as_generator(rng).integers(0, g.n_vertices, size=n_samples)
    return float(np.mean([g.ball_cycle_count(int(x), r) == 0 for x in picks]))


# ============================================================
# Edge-list text format
# ============================================================
def write_edge_list(g: Graph, path: Union[str, Path]) -> None:
    """First line 'n m', then 'u v' per edge with u < v."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n_vertices} {g.n_edges}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path: Union[str, Path], kind: GraphKind = GraphKind.CUSTOM) -> Graph:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise InputError(f"{path}: first line must be 'n_vertices m_edges'")
        n, m = int(header[0]), int(header[1])
        edges: List[Tuple[int, int]] = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise InputError(f"{path}:{lineno}: expected 'u v'")
            u, v = int(parts[0]), int(parts[1])
            if u >= v:
                raise InputError(f"{path}:{lineno}: edges must be written with u < v")
            edges.append((u, v))
    if len(edges) != m:
        raise InputError(f"{path}: header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges, kind, {"source": str(path)})


def separation_violation(g: Graph, A: Iterable[int], ell: int) -> Optional[Tuple[int, int]]:
    """First pair of A at distance <= 2*ell + 1, or None when A is separated."""
    members = [int(a) for a in A]
    targets = set(members)
    for a in members:
        near = g.distance_array(a, cutoff=2 * ell + 1)
        for b in members:
            if b != a and np.isfinite(near[b]):
                return (a, b) if a < b else (b, a)
    if len(targets) != len(members):
        raise InputError("trap set lists a vertex twice")
    return None


def check_separation(g: Graph, A: Iterable[int], ell: int) -> None:
    pair = separation_violation(g, A, ell)
    if pair is not None:
        raise PreconditionError(
            f"vertices {pair[0]} and {pair[1]} are within distance {2 * ell + 1}; the traps must be separated",
            pair=pair,
        )
