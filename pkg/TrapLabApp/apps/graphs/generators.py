# apps/graphs/generators.py
# --------------------------------
# Graph families: hypercube, discrete torus, random d-regular (configuration
# model with rejection) and the Erdos-Renyi giant component (SIR exploration).

from __future__ import annotations

import logging
import math
from collections import deque
from typing import List, Optional, Tuple

import numpy as np

from apps.core.conf import setting
from apps.core.exceptions import DegenerateSampleError, GraphValidationError, InputError, SamplingError, SizeError
from apps.core.random_source import RandomLike, as_generator
from apps.graphs.graph import Graph, GraphKind

logger = logging.getLogger(__name__)

MAX_HYPERCUBE_DIM = 30
MAX_TORUS_DIM = 4
MAX_TORUS_VERTICES = 10**7


# ============================================================
# Deterministic families
# ============================================================
def hypercube(n: int) -> Graph:
    """{0,1}^n with edges between patterns at Hamming distance 1."""
    if not 1 <= n <= MAX_HYPERCUBE_DIM:
        raise SizeError(f"hypercube dimension must be in 1..{MAX_HYPERCUBE_DIM}, got {n}")
    bits = [1 << i for i in range(n)]
    adjacency = tuple(tuple(x ^ b for b in bits) for x in range(1 << n))
    return Graph(adjacency, GraphKind.HYPERCUBE, {"n": n})


def torus_coordinates(x: int, N: int, d: int) -> Tuple[int, ...]:
    """Mixed-radix digits of vertex id x, least significant coordinate first."""
    coords = []
    for _ in range(d):
        x, c = divmod(x, N)
        coords.append(c)
    return tuple(coords)


def torus_vertex(coords, N: int) -> int:
    return sum((int(c) % N) * N**i for i, c in enumerate(coords))


def torus(N: int, d: int) -> Graph:
    """Discrete torus (Z/NZ)^d with nearest-neighbour edges."""
    if N < 3:
        raise SizeError(f"torus side must be at least 3, got {N}")
    if not 1 <= d <= MAX_TORUS_DIM:
        raise SizeError(f"torus dimension must be in 1..{MAX_TORUS_DIM}, got {d}")
    if N**d > MAX_TORUS_VERTICES:
        raise SizeError(f"torus with {N}^{d} vertices exceeds {MAX_TORUS_VERTICES}")

    ids = np.arange(N**d, dtype=np.int64)
    columns = []
    for i in range(d):
        stride = N**i
        coord = (ids // stride) % N
        columns.append(ids + (((coord + 1) % N) - coord) * stride)
        columns.append(ids + (((coord - 1) % N) - coord) * stride)
    nbrs = np.stack(columns, axis=1)
    # N >= 3 keeps the +1 and -1 neighbours distinct
    adjacency = tuple(tuple(row) for row in nbrs.tolist())
    return Graph(adjacency, GraphKind.TORUS, {"N": N, "d": d})


# ============================================================
# Random d-regular graphs
# ============================================================
def random_regular(N: int, d: int, rng: RandomLike, retry_budget: Optional[int] = None) -> Graph:
    """Configuration model conditioned on a simple connected outcome.

    Each attempt pairs the N*d half-edges uniformly; outcomes with a
    self-loop, a repeated edge or more than one component are rejected.
    """
    if d < 3:
        raise InputError(f"degree must be at least 3, got {d}")
    if N <= d:
        raise InputError(f"need N > d, got N={N}, d={d}")
    if (N * d) % 2:
        raise InputError(f"N*d must be even, got N={N}, d={d}")
    budget = retry_budget or setting("TRAPLAB_RETRY_BUDGET")
    gen = as_generator(rng)
    stubs = np.repeat(np.arange(N, dtype=np.int64), d)

    for attempt in range(1, budget + 1):
        pairs = gen.permutation(stubs).reshape(-1, 2)
        u, v = pairs[:, 0], pairs[:, 1]
        if np.any(u == v):
            continue
        keys = np.minimum(u, v) * N + np.maximum(u, v)
        if np.unique(keys).size != keys.size:
            continue
        try:
            graph = Graph.from_edges(N, zip(u.tolist(), v.tolist()), GraphKind.REGULAR, {"N": N, "d": d, "attempts": attempt})
        except GraphValidationError:
            continue
        logger.debug(f"[random_regular] N={N} d={d} accepted after {attempt} attempts")
        return graph

    raise SamplingError(f"no simple connected {d}-regular graph on {N} vertices after {budget} attempts")


# ============================================================
# Erdos-Renyi giant component
# ============================================================
def giant_fraction(lam: float, tol: float = 1e-14) -> float:
    """Root in (0, 1] of v = 1 - exp(-lam * v); 0 when lam <= 1."""
    if lam <= 1:
        return 0.0
    lo, hi = 1e-12, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if 1.0 - math.exp(-lam * mid) > mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class _IndexedPool:
    """Vertex pool with O(1) removal and uniform subset draws."""

    def __init__(self, items=()):
        self.items: List[int] = list(items)
        self.pos = {x: i for i, x in enumerate(self.items)}

    def __len__(self) -> int:
        return len(self.items)

    def add(self, x: int) -> None:
        self.pos[x] = len(self.items)
        self.items.append(x)

    def remove(self, x: int) -> None:
        i = self.pos.pop(x)
        last = self.items.pop()
        if last != x:
            self.items[i] = last
            self.pos[last] = i

    def take(self, k: int, gen: np.random.Generator) -> List[int]:
        """Remove and return k members chosen uniformly without replacement."""
        if k == 0:
            return []
        chosen = [self.items[i] for i in gen.choice(len(self.items), size=k, replace=False)]
        for x in chosen:
            self.remove(x)
        return chosen

    def sample(self, k: int, gen: np.random.Generator) -> List[int]:
        if k == 0:
            return []
        return [self.items[i] for i in gen.choice(len(self.items), size=k, replace=False)]


def _explore_components(N: int, p: float, gen: np.random.Generator):
    """All components of G(N, p) by susceptible/infected/removed exploration.

    Processing an infected vertex x examines every pair {x, y} not yet
    examined: y susceptible (Binomial(|S|, p) new infections) or y infected
    and unprocessed (Binomial(|I| - 1, p) extra edges). Each pair is
    examined exactly once, so the edge law is that of G(N, p).
    """
    susceptible = _IndexedPool(range(N))
    components = []
    while len(susceptible):
        root = susceptible.items[0]
        susceptible.remove(root)
        infected = _IndexedPool([root])
        queue = deque([root])
        vertices, edges = [root], []
        while queue:
            x = queue.popleft()
            infected.remove(x)
            others = infected.sample(int(gen.binomial(len(infected), p)), gen) if len(infected) else []
            edges.extend((x, y) for y in others)
            fresh = susceptible.take(int(gen.binomial(len(susceptible), p)), gen) if len(susceptible) else []
            for y in fresh:
                edges.append((x, y))
                infected.add(y)
                queue.append(y)
                vertices.append(y)
        components.append((vertices, edges))
    return components


def erdos_renyi_giant(N: int, lam: float, rng: RandomLike) -> Tuple[Graph, List[int]]:
    """Largest component of G(N, lam/N), re-indexed, with the map back to 0..N-1."""
    if lam <= 1:
        raise InputError(f"lambda must exceed 1, got {lam}")
    if N < 10:
        raise InputError(f"N must be at least 10, got {N}")
    gen = as_generator(rng)
    components = _explore_components(N, lam / N, gen)
    sizes = sorted((len(c[0]) for c in components), reverse=True)
    largest = max(components, key=lambda c: len(c[0]))
    if sizes[0] < 3:
        raise DegenerateSampleError(f"largest component has {sizes[0]} vertices; resample")
    if len(sizes) > 1 and sizes[1] == sizes[0]:
        raise DegenerateSampleError(f"two components of maximal size {sizes[0]}; resample")

    original_ids = sorted(largest[0])
    new_id = {x: i for i, x in enumerate(original_ids)}
    edges = [(new_id[u], new_id[v]) for u, v in largest[1]]
    provenance = {
        "N": N,
        "lambda": lam,
        "giant_size": sizes[0],
        "second_size": sizes[1] if len(sizes) > 1 else 0,
        "n_components": len(sizes),
    }
    logger.debug(f"[erdos_renyi_giant] N={N} lambda={lam}: |C_max|={sizes[0]}, second={provenance['second_size']}")
    return Graph.from_edges(len(original_ids), edges, GraphKind.ER_GIANT, provenance), original_ids
