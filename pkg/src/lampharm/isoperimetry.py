"""Edge boundaries, isoperimetric ratio measurement, and volume-growth
exponent estimation.

IS_d measurements are witness-based: the reported value is the maximum of
|F|^((d-1)/d) / |boundary F| over a finite family of sets, which lower
bounds every valid isoperimetric constant but certifies nothing globally.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graphs import FiniteGraph, GraphOracle, ball


@dataclass
class IsoProfilePoint:
    """One witness set: size, cut size, dimension parameter, and ratio."""

    set_size: int
    boundary_size: int
    d: float
    ratio: float


def edge_boundary(g, F):
    """Number of edges with exactly one endpoint in F.

    For a GraphOracle, F is a collection of vertex keys and all oracle
    edges at F count. For a FiniteGraph, F is a collection of vertex
    indices and only materialized edges count (cut edges leaving the
    materialized region are not represented there).
    """
    Fset = set(F)
    count = 0
    if isinstance(g, GraphOracle):
        for v in Fset:
            for w in g.neighbors(v):
                if w not in Fset:
                    count += 1
        return count
    if isinstance(g, FiniteGraph):
        for v in Fset:
            for w in g.adj[v]:
                if w not in Fset:
                    count += 1
        return count
    raise TypeError(f"expected GraphOracle or FiniteGraph, got {type(g)!r}")


def iso_ratio(set_size, boundary_size, d):
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if boundary_size <= 0:
        raise ValueError("boundary_size must be positive")
    return set_size ** ((d - 1.0) / d) / boundary_size


def is_d_kappa(G, d, family):
    """Max of |F|^((d-1)/d)/|bd F| over the family: a lower bound on any
    constant kappa for which the IS_d inequality could hold on G."""
    family = list(family)
    if not family:
        raise ValueError("witness family is empty")
    best = 0.0
    for F in family:
        F = list(F)
        if not F:
            raise ValueError("witness family contains an empty set")
        b = edge_boundary(G, F)
        best = max(best, iso_ratio(len(F), b, d))
    return best


def iso_profile(G, d, family):
    """IsoProfilePoint per witness set, in family order."""
    points = []
    for F in family:
        F = list(F)
        b = edge_boundary(G, F)
        points.append(IsoProfilePoint(len(F), b, d, iso_ratio(len(F), b, d)))
    return points


def _bfs_grown_set(G, seed_key, target_size, rng):
    # connected witness: BFS from the seed with randomized frontier order
    seen = {seed_key}
    frontier = [seed_key]
    while len(seen) < target_size and frontier:
        v = frontier.pop(rng.randrange(len(frontier)))
        for w in G.neighbors(v):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
                if len(seen) >= target_size:
                    break
    return list(seen)


def default_family(G, Rmax, seed=0, n_random=12, budget=None):
    """Balls B_1..B_Rmax around the origin plus random connected
    BFS-grown sets seeded inside B_{Rmax/2} with log-spaced sizes."""
    rng = random.Random(seed)
    family = []
    for R in range(1, Rmax + 1):
        family.append(list(ball(G, G.origin, R, budget=budget).verts))
    largest = family[-1]
    half = ball(G, G.origin, max(1, Rmax // 2), budget=budget).verts
    max_size = max(4, len(largest) // 2)
    for i in range(n_random):
        t = i / max(1, n_random - 1)
        size = max(2, int(round(4 * (max_size / 4) ** t)))
        seed_key = half[rng.randrange(len(half))]
        family.append(_bfs_grown_set(G, seed_key, size, rng))
    return family


@dataclass
class GrowthEstimate:
    """Log-log growth fit over the tail window of ball radii."""

    exponent: float
    ci_low: float
    ci_high: float
    superpolynomial: bool
    radii: list
    sizes: list

    def __float__(self):
        return self.exponent


def _ols(x, y):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = len(x)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    resid = y - (ym + slope * (x - xm))
    ssr = float(np.sum(resid**2))
    if n > 2 and sxx > 0:
        se = math.sqrt(ssr / (n - 2) / sxx)
    else:
        se = 0.0
    return slope, se, ssr


def growth_exponent(G, Rmax, budget=None):
    """Polynomial growth degree from |B_R|, with a superpolynomial flag.

    Fits log|B_R| against log R by least squares over the tail window
    R in {max(2, Rmax//2), ..., Rmax}, where the slope has shed most of
    the small-R transient. The flag is set when a linear fit of log|B_R|
    against R (exponential growth) beats the polynomial fit, residual
    ratio below 0.5.
    """
    if Rmax < 3:
        raise ValueError(f"Rmax must be >= 3, got {Rmax}")
    radii = list(range(1, Rmax + 1))
    sizes = [ball(G, G.origin, R, budget=budget).n for R in radii]
    lo = max(2, Rmax // 2)
    tail_R = np.array([R for R in radii if R >= lo], float)
    tail_S = np.array([sizes[int(R) - 1] for R in tail_R], float)
    logS = np.log(tail_S)
    slope, se, ssr_poly = _ols(np.log(tail_R), logS)
    _, _, ssr_exp = _ols(tail_R, logS)
    superpoly = ssr_exp < 0.5 * ssr_poly
    return GrowthEstimate(
        exponent=slope,
        ci_low=slope - 2 * se,
        ci_high=slope + 2 * se,
        superpolynomial=superpoly,
        radii=[int(r) for r in tail_R],
        sizes=[int(s) for s in tail_S],
    )
