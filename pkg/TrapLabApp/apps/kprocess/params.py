# apps/kprocess/params.py
# --------------------------------
# K-process parameters (Z_k, u_k), k = 1..K, with a tail estimate of
# sum_{k>K} Z_k u_k. State labels are 1..K; INFINITY (0) marks the state at
# infinity, so embed_state(k) = 1/k and embed_state(INFINITY) = 0 coincide
# with the real embedding used for metric comparisons.

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from apps.core.exceptions import InputError

INFINITY = 0


def embed_state(k: int) -> float:
    """k -> 1/k, infinity -> 0."""
    return 0.0 if k == INFINITY else 1.0 / k


@dataclass(frozen=True, eq=False)
class KParams:
    Z: np.ndarray
    u: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        Z = np.array(self.Z, dtype=float)
        u = np.array(self.u, dtype=float)
        Z.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "u", u)
        if Z.ndim != 1 or Z.shape != u.shape or Z.size == 0:
            raise InputError(f"Z and u must be nonempty and equally long, got {Z.size} and {u.size}")
        if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(u))):
            raise InputError("Z and u must be finite")
        if np.any(Z <= 0) or np.any(u <= 0):
            raise InputError("Z and u must be positive")
        if not self.tail_bound >= 0:
            raise InputError(f"tail_bound must be nonnegative, got {self.tail_bound}")

    @property
    def k_max(self) -> int:
        return int(self.Z.size)

    @property
    def states(self) -> Tuple[int, ...]:
        return tuple(range(1, self.k_max + 1))

    @property
    def total_rate(self) -> float:
        return math.fsum(self.u.tolist())

    @property
    def mass(self) -> float:
        """sum_{k <= K} Z_k u_k."""
        return math.fsum((self.Z * self.u).tolist())

    def Z_of(self, k: int) -> float:
        return 0.0 if k == INFINITY else float(self.Z[k - 1])

    def truncated(self, K: int) -> "KParams":
        """First K clocks; dropped mass joins the tail estimate."""
        if not 1 <= K <= self.k_max:
            raise InputError(f"K must be in 1..{self.k_max}, got {K}")
        dropped = math.fsum((self.Z[K:] * self.u[K:]).tolist())
        return KParams(self.Z[:K], self.u[:K], self.tail_bound + dropped)

    # ------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------
    @classmethod
    def from_limit_weights(cls, limit, u: Optional[Sequence[float]] = None) -> "KParams":
        """Z = w, u = 1 unless given; the tail is the weights' own tail estimate."""
        w = limit.as_array()
        rates = np.ones_like(w) if u is None else np.asarray(u, dtype=float)
        return cls(w, rates, limit.tail_bound if u is None else 0.0)

    @classmethod
    def from_tree_escape(cls, limit, pairs: Sequence[Tuple[int, float]]) -> "KParams":
        """Random-graph parameters Z_k = w_k / E_k, u_k = D_k E_k from (D, E) samples."""
        if len(pairs) < limit.truncation:
            raise InputError(f"need {limit.truncation} (D, E) pairs, got {len(pairs)}")
        D = np.asarray([p[0] for p in pairs[: limit.truncation]], dtype=float)
        E = np.asarray([p[1] for p in pairs[: limit.truncation]], dtype=float)
        return cls(limit.as_array() / E, D * E, 0.0)

    # ------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------
    def to_dict(self) -> Dict:
        return {"Z": self.Z.tolist(), "u": self.u.tolist(), "tail_bound": self.tail_bound}

    @classmethod
    def from_dict(cls, data: Dict) -> "KParams":
        from apps.harness.serializers import KParamsSerializer, validated

        clean = validated(KParamsSerializer, data)
        return cls(clean["Z"], clean["u"], clean.get("tail_bound", 0.0))


def save_kparams(p: KParams, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(p.to_dict(), fh, indent=2)


def load_kparams(path: Union[str, Path]) -> KParams:
    with open(path, encoding="utf-8") as fh:
        return KParams.from_dict(json.load(fh))
