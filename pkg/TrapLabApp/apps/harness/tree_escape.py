# apps/harness/tree_escape.py
# --------------------------------
# (D, E) samples for random-graph K-process parameters: root degree and
# truncated escape probability of Poisson Galton-Watson trees conditioned to
# reach the truncation depth.

from __future__ import annotations

import logging
from typing import List, Optional, Tuple

from apps.core.conf import setting
from apps.core.exceptions import InputError, SamplingError
from apps.core.random_source import RandomLike, as_generator
from apps.exact.hitting import tree_escape_probability
from apps.graphs.trees import galton_watson

logger = logging.getLogger(__name__)


def estimate_tree_escape(
    lam: float,
    depth: int,
    n_samples: int,
    rng: RandomLike,
    retry_budget: Optional[int] = None,
) -> List[Tuple[int, float]]:
    """n_samples pairs (root degree, P_root[reach generation depth before return])."""
    if depth < 3:
        raise InputError(f"depth must be at least 3, got {depth}")
    if n_samples < 1:
        raise InputError(f"need at least one sample, got {n_samples}")
    budget = retry_budget or setting("TRAPLAB_RETRY_BUDGET")
    gen = as_generator(rng)

    pairs: List[Tuple[int, float]] = []
    rejected = 0
    while len(pairs) < n_samples:
        tree = galton_watson(lam, depth, gen)
        if tree.height < depth:
            rejected += 1
            if rejected > budget * n_samples:
                raise SamplingError(
                    f"only {len(pairs)} of {n_samples} trees with lam={lam} survived to depth {depth} "
                    f"after {rejected} rejections"
                )
            continue
        pairs.append((len(tree.children[0]), tree_escape_probability(tree, depth)))

    logger.debug(f"[estimate_tree_escape] lam={lam} depth={depth}: {n_samples} kept, {rejected} rejected")
    return pairs
