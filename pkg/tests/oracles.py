"""Brute-force reference computations shared by unit and acceptance tests."""

from itertools import combinations

import numpy as np

from qmetric.ddf import DistanceDistribution

# breakpoints live on the 1/8 grid, so x = k/64 + 1/256 never meets a sum of two
# breakpoints and u = m/512 steps past each breakpoint before v crosses the next
X_GRID = np.arange(0, 6 * 64) / 64 + 1 / 256
U_GRID = np.arange(0, 6 * 512 + 1) / 512


def evaluate(F, ts: np.ndarray) -> np.ndarray:
    """Vectorised ``F(t)``: the value of the last breakpoint strictly below ``t``."""
    vals = np.concatenate([[0.0], np.asarray(F.values, dtype=float)])
    return vals[np.searchsorted(np.asarray(F.breakpoints, dtype=float), ts, side="left")]


def boxplus_on_grid(F, G, xs=X_GRID, us=U_GRID):
    """``sup_{u+v<=x} F(u) + G(v) - 1`` (clamped at 0) by exhaustive grid search."""
    V = xs[:, None] - us[None, :]
    total = evaluate(F, us)[None, :] + evaluate(G, V) - 1.0
    total[V < 0] = 0.0
    return np.maximum(total.max(axis=1), 0.0)


def random_step(rng, max_steps: int = 3) -> DistanceDistribution:
    k = int(rng.integers(1, max_steps + 1))
    bps = sorted(rng.choice(20, size=k, replace=False) / 8.0)
    vals = sorted((rng.choice(16, size=k, replace=False) + 1) / 16.0)
    return DistanceDistribution.from_steps(zip(bps, vals))


def codirected_way_above(lat) -> np.ndarray:
    """``wa[a, b]``: every codirected subset with meet <= b has a member <= a.

    Subsets are enumerated outright; a finite subset is codirected exactly
    when each pair has a lower bound inside it.
    """
    n = len(lat)
    L = lat._leq
    families = []
    for k in range(1, n + 1):
        for S in combinations(range(n), k):
            if all(any(L[z, x] and L[z, y] for z in S) for x, y in combinations(S, 2)):
                families.append(S)
    wa = np.ones((n, n), dtype=bool)
    for S in families:
        m = lat._meet_many(S)
        below_b = L[m, :]  # b with meet(S) <= b
        has_member_below = np.array([any(L[s, a] for s in S) for a in range(n)])
        wa[np.ix_(~has_member_below, below_b)] = False
    return wa
