"""Lazy simple random walks on graph oracles and total-variation
contrast between walks from nearby starts.

Walks step on the oracle directly with only current positions held in
memory, so trajectories through enormous implicit graphs stay cheap.
Checkpoint histograms for large runs are keyed by canonical key hash
(collision odds are negligible at desk scale and the TV value only
depends on count multisets); the plain simulate_walks API returns
histograms over the vertex keys themselves.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .graphs import DEFAULT_VERTEX_BUDGET, BudgetExceededError

DEFAULT_SEED = 42
BATCH_TRIALS = 20_000


@dataclass
class WalkConfig:
    """Parameters of one paired-walk experiment. laziness is the
    probability of staying put each step; steps=0 is allowed and yields
    point masses at the starts."""

    steps: int
    trials: int
    laziness: float = 0.5
    seed: int = DEFAULT_SEED
    start_a: object = None
    start_b: object = None

    def __post_init__(self):
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 <= self.laziness < 1.0:
            raise ValueError(
                f"laziness must be in [0, 1), got {self.laziness}"
            )


def _resolve_starts(G, cfg):
    a = cfg.start_a if cfg.start_a is not None else G.origin
    if cfg.start_b is not None:
        b = cfg.start_b
    else:
        nbrs = G.neighbors(a)
        if not nbrs:
            raise ValueError(f"start {a!r} has no neighbors")
        b = nbrs[0]
    return a, b


NEIGHBOR_CACHE_CAP = 100_000


def _run_walk(G, start, cfg, checkpoints, rng, as_keys):
    """Endpoint histograms of `trials` independent walks at each
    checkpoint, plus first-half/second-half sub-histograms for the
    split-half baseline. Histogram keys are vertex keys (as_keys) or
    canonical hashes."""
    marks = sorted(set(checkpoints))
    hists = {t: Counter() for t in marks}
    halves = {t: (Counter(), Counter()) for t in marks}
    half_cut = cfg.trials // 2
    step = G.step_fn
    rdeg = G.regular_degree
    fast = step is not None and rdeg is not None
    # slow path only: revisit-heavy walks (recurrent base graphs) hit
    # this cache hard; transient walks mostly miss far out, harmlessly
    cache = {}
    neighbors = G.neighbors

    def neigh(k):
        r = cache.get(k)
        if r is None:
            r = neighbors(k)
            if len(cache) < NEIGHBOR_CACHE_CAP:
                cache[k] = r
        return r

    done = 0
    while done < cfg.trials:
        bs = min(BATCH_TRIALS, cfg.trials - done)
        keys = [start] * bs
        mark_i = 0
        for t in range(0, cfg.steps + 1):
            while mark_i < len(marks) and marks[mark_i] == t:
                _record(hists[t], halves[t], keys, done, half_cut, as_keys)
                mark_i += 1
            if t == cfg.steps:
                break
            if cfg.laziness > 0.0:
                movers = np.flatnonzero(
                    rng.random(bs) >= cfg.laziness
                ).tolist()
            else:
                movers = range(bs)
            pick = rng.random(len(movers)).tolist()
            if fast:
                for i, u in zip(movers, pick):
                    keys[i] = step(keys[i], int(u * rdeg))
            else:
                for i, u in zip(movers, pick):
                    nb = neigh(keys[i])
                    keys[i] = nb[int(u * len(nb))]
        done += bs
    return hists, halves


def _record(hist, half_pair, keys, offset, half_cut, as_keys):
    lo, hi = half_pair
    for i, k in enumerate(keys):
        label = k if as_keys else hash(k.canon)
        hist[label] += 1
        if offset + i < half_cut:
            lo[label] += 1
        else:
            hi[label] += 1


def simulate_walks(G, cfg, budget=None):
    """Histograms over vertex keys of walk endpoints at time cfg.steps,
    one per start; deterministic given cfg.seed.

    The budget caps trials (each trial holds at least one materialized
    key and one histogram entry).
    """
    cap = DEFAULT_VERTEX_BUDGET if budget is None else budget
    if cfg.trials > cap:
        raise BudgetExceededError(cfg.trials, cap)
    a, b = _resolve_starts(G, cfg)
    rng = np.random.default_rng(cfg.seed)
    ha, _ = _run_walk(G, a, cfg, [cfg.steps], rng, as_keys=True)
    hb, _ = _run_walk(G, b, cfg, [cfg.steps], rng, as_keys=True)
    return ha[cfg.steps], hb[cfg.steps]


def tv_distance(hist_a, hist_b):
    """Total variation between two empirical distributions given as
    count mappings over a common key space: half the L1 gap of the
    normalized histograms. Always in [0, 1]."""
    na = sum(hist_a.values())
    nb = sum(hist_b.values())
    if na == 0 or nb == 0:
        raise ValueError("empty histogram")
    total = 0.0
    for k in set(hist_a) | set(hist_b):
        total += abs(hist_a.get(k, 0) / na - hist_b.get(k, 0) / nb)
    return 0.5 * total


@dataclass
class WalkSeries:
    """TV-vs-steps measurements for one graph: at each checkpoint, the
    TV between the two starts' endpoint histograms and a same-
    distribution split-half baseline exposing estimator bias."""

    graph: str
    checkpoints: list
    tv: list
    baseline: list


def walk_series(G, cfg, checkpoints=None, budget=None):
    """TV and split-half baseline at each checkpoint, from one paired
    simulation run to max(checkpoints) steps."""
    cap = DEFAULT_VERTEX_BUDGET if budget is None else budget
    if cfg.trials > cap:
        raise BudgetExceededError(cfg.trials, cap)
    if checkpoints is None:
        checkpoints = [cfg.steps]
    marks = sorted(set(int(t) for t in checkpoints))
    if not marks:
        raise ValueError("no checkpoints")
    if marks[0] < 0 or marks[-1] > cfg.steps:
        raise ValueError(f"checkpoints outside [0, {cfg.steps}]")
    a, b = _resolve_starts(G, cfg)
    rng = np.random.default_rng(cfg.seed)
    ha, halves_a = _run_walk(G, a, cfg, marks, rng, as_keys=False)
    hb, _ = _run_walk(G, b, cfg, marks, rng, as_keys=False)
    tv = [tv_distance(ha[t], hb[t]) for t in marks]
    base = []
    for t in marks:
        lo, hi = halves_a[t]
        base.append(tv_distance(lo, hi) if lo and hi else 0.0)
    return WalkSeries(G.name, marks, tv, base)


@dataclass
class ContrastReport:
    """Paired TV series: decay toward the baseline on the graph expected
    to have only constant bounded harmonic functions, a strictly
    positive plateau on the contrast graph."""

    liouville: WalkSeries
    nonliouville: WalkSeries


def liouville_contrast(G_liouville, G_nonliouville, cfg, checkpoints=None,
                       budget=None):
    """Run the same paired-walk experiment on both graphs.

    Starts default to (origin, first neighbor of origin) in each graph,
    satisfying the adjacent-starts precondition even when the two graphs
    have different key types.
    """
    if checkpoints is None:
        qs = {max(1, cfg.steps // 4), max(1, cfg.steps // 2), cfg.steps}
        checkpoints = sorted(qs)
    s1 = walk_series(G_liouville, cfg, checkpoints, budget=budget)
    s2 = walk_series(G_nonliouville, cfg, checkpoints, budget=budget)
    return ContrastReport(s1, s2)


def chi_square_uniform(counts):
    """Chi-square statistic of observed counts against the uniform law
    over the same bins."""
    counts = np.asarray(list(counts), dtype=float)
    if counts.sum() <= 0 or len(counts) < 2:
        raise ValueError("need at least two bins with observations")
    expect = counts.sum() / len(counts)
    return float(np.sum((counts - expect) ** 2 / expect))
