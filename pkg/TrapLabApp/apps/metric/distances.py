# apps/metric/distances.py
# --------------------------------
# Distances between real-valued step functions on [0, T]:
#   canonical  minimal representative (equal neighbours merged)
#   d_T        inf_A { sup_{A^c} |f - g| + Leb(A) }
#   d_T2       Hausdorff distance between completed graphs
#   modulus    Leb of the delta-neighbourhood of the jump set

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from apps.core.exceptions import InputError
from apps.core.trajectory import Trajectory

# Breakpoints closer than this multiple of T are treated as equal
BREAK_TOL = 1e-12

# (x0, x1, y0, y1), axis-aligned
Piece = Tuple[float, float, float, float]


def _real(f: Trajectory) -> Trajectory:
    if f.states.dtype.kind not in "biuf":
        raise InputError(f"step function needs real values, got dtype {f.states.dtype}")
    return f


def _check_horizons(f: Trajectory, g: Trajectory) -> float:
    if not math.isclose(f.horizon, g.horizon, rel_tol=BREAK_TOL, abs_tol=0.0):
        raise InputError(f"horizons differ: {f.horizon} vs {g.horizon}")
    return f.horizon


# ============================================================
# Canonical representative
# ============================================================
def canonical(f: Trajectory) -> Trajectory:
    """Minimal-jump representative; jump-point values are kept as metadata."""
    _real(f)
    tol = BREAK_TOL * f.horizon
    segments = [(start, end, float(state)) for start, end, state in f.segments()]
    merged = Trajectory.from_segments(segments, tol=tol)
    values = merged.states.astype(float)
    jump_values = tuple(((values[:-1] + values[1:]) / 2.0).tolist())
    return Trajectory(merged.horizon, merged.jump_times, values, jump_values=jump_values)


def _common_grid(f: Trajectory, g: Trajectory) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Elementary intervals of the union of breakpoints: (lengths, f values, g values)."""
    T = _check_horizons(f, g)
    grid = np.unique(np.concatenate(([0.0, T], f.jump_times, g.jump_times)))
    keep = np.concatenate(([True], np.diff(grid) > BREAK_TOL * T))
    grid = grid[keep]
    grid[-1] = T
    mids = (grid[:-1] + grid[1:]) / 2.0
    fv = f.states.astype(float)[np.searchsorted(f.jump_times, mids, side="right")]
    gv = g.states.astype(float)[np.searchsorted(g.jump_times, mids, side="right")]
    return np.diff(grid), fv, gv


# ============================================================
# d_T
# ============================================================
def d_T(f: Trajectory, g: Trajectory) -> float:
    """Exact d_T by superlevel sets of |f - g|.

    min over c in {0} u values(|f - g|) of c + Leb(|f - g| > c).
    """
    lengths, fv, gv = _common_grid(_real(f), _real(g))
    diff = np.abs(fv - gv)
    order = np.argsort(diff, kind="stable")
    sorted_diff = diff[order]
    prefix = np.concatenate(([0.0], np.cumsum(lengths[order])))
    total = prefix[-1]
    candidates = np.unique(np.concatenate(([0.0], sorted_diff)))
    below = np.searchsorted(sorted_diff, candidates, side="right")
    costs = candidates + (total - prefix[below])
    return float(max(np.min(costs), 0.0))


# ============================================================
# d_T2
# ============================================================
def completed_graph(f: Trajectory) -> List[Piece]:
    """Horizontal pieces of the canonical representative plus vertical jump pieces."""
    h = canonical(f)
    bp = h.breakpoints
    values = h.states.astype(float)
    pieces: List[Piece] = []
    for i, v in enumerate(values.tolist()):
        pieces.append((float(bp[i]), float(bp[i + 1]), v, v))
        if i:
            lo, hi = sorted((values[i - 1], v))
            pieces.append((float(bp[i]), float(bp[i]), float(lo), float(hi)))
    return pieces


def _relative(source: Piece, targets: np.ndarray) -> Tuple[float, float, np.ndarray, np.ndarray, np.ndarray]:
    """Squared distances from a point moving along `source` to each target piece,
    written as dist(s, [c, d])^2 + K in the source's running coordinate s in [a, b]."""
    x0, x1, y0, y1 = source
    if y0 == y1 and x1 > x0:
        a, b, fixed = x0, x1, y0
        c, d = targets[:, 0], targets[:, 1]
        lo, hi = targets[:, 2], targets[:, 3]
    else:
        a, b, fixed = y0, y1, x0
        c, d = targets[:, 2], targets[:, 3]
        lo, hi = targets[:, 0], targets[:, 1]
    gap = np.maximum(np.maximum(lo - fixed, fixed - hi), 0.0)
    return a, b, c, d, gap * gap


def _envelope(s: np.ndarray, c: np.ndarray, d: np.ndarray, K: np.ndarray) -> np.ndarray:
    """min_i dist(s, [c_i, d_i])^2 + K_i for each s."""
    gap = np.maximum(np.maximum(c[None, :] - s[:, None], s[:, None] - d[None, :]), 0.0)
    return np.min(gap * gap + K[None, :], axis=1)


def _crossings(c: np.ndarray, d: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Every s where two of the piecewise-quadratic distances can agree."""
    with np.errstate(divide="ignore", invalid="ignore"):
        out = [c, d]
        # left-left, right-right and left-right: the s^2 terms cancel
        for p, q in ((c, c), (d, d), (c, d)):
            num = q[None, :] ** 2 - p[:, None] ** 2 + K[None, :] - K[:, None]
            den = 2.0 * (q[None, :] - p[:, None])
            out.append((num / den).ravel())
        # quadratic arm against a flat middle
        rise = np.sqrt(K[None, :] - K[:, None])
        out.append((c[:, None] - rise).ravel())
        out.append((d[:, None] + rise).ravel())
    s = np.concatenate(out)
    return s[np.isfinite(s)]


def _directed(source_pieces: List[Piece], target_pieces: List[Piece]) -> float:
    """sup over the source graph of the distance to the target graph."""
    targets = np.asarray(target_pieces, dtype=float)
    worst = 0.0
    for piece in source_pieces:
        a, b, c, d, K = _relative(piece, targets)
        s = _crossings(c, d, K)
        s = np.concatenate(([a, b], s[(s >= a) & (s <= b)]))
        worst = max(worst, float(np.max(_envelope(s, c, d, K))))
    return math.sqrt(worst)


def d_T2(f: Trajectory, g: Trajectory) -> float:
    """Hausdorff distance between the completed graphs of f and g.

    Along each source piece the squared distance to the target graph is the
    lower envelope of convex functions, so its maximum sits at an endpoint or
    where two of them cross; those points are enumerated exactly.
    """
    _check_horizons(_real(f), _real(g))
    gf, gg = completed_graph(f), completed_graph(g)
    return max(_directed(gf, gg), _directed(gg, gf))


# ============================================================
# Modulus
# ============================================================
def modulus(f: Trajectory, delta: float) -> float:
    """Leb(B(D(f~), delta) intersected with [0, T])."""
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta}")
    h = canonical(f)
    T = h.horizon
    total, end = 0.0, 0.0
    for t in np.sort(h.jump_times).tolist():
        lo, hi = max(t - delta, 0.0, end), min(t + delta, T)
        if hi > lo:
            total += hi - lo
        end = max(end, hi)
    return total
