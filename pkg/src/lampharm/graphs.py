"""Graph oracles, standard families, and finite ball materialization.

Infinite graphs are never materialized globally. A GraphOracle is a neighbor
function plus a distinguished origin; every computation either queries the
oracle directly or extracts a finite ball as a FiniteGraph. Neighbor lists
are always sorted and duplicate-free, so repeated materializations of the
same ball are identical.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .keys import (
    IntPoint,
    LampKey,
    PairKey,
    VertexKey,
    WordKey,
    _raw_lamp,
    _raw_word,
    format_key,
)

DEFAULT_VERTEX_BUDGET = 200_000


class InvalidVertexError(ValueError):
    """A key handed to an oracle does not denote a vertex of that graph."""


class BudgetExceededError(RuntimeError):
    """Ball materialization outgrew the configured vertex budget."""

    def __init__(self, partial_count, budget):
        self.partial_count = partial_count
        self.budget = budget
        super().__init__(
            f"ball exceeded vertex budget {budget} "
            f"(materialized {partial_count} vertices so far)"
        )


@dataclass(frozen=True)
class GraphOracle:
    """Neighbor-function view of a locally finite graph.

    neighbors(v) returns a sorted, duplicate-free, finite list of keys;
    the relation is symmetric and has no self-loops.

    Regular families may additionally provide a single-neighbor fast
    path: `regular_degree` asserts every vertex has exactly that degree,
    and `step_fn(v, i)` for i in range(regular_degree) enumerates the
    neighbors of v in some fixed family-specific order (not necessarily
    sorted). Long random walks use it to avoid materializing full
    neighbor lists; as a set, step_fn(v, .) must agree with neighbors(v).
    """

    neighbors: Callable[[VertexKey], list]
    origin: VertexKey
    degree_bound: Optional[int] = None
    name: str = "graph"
    regular_degree: Optional[int] = None
    step_fn: Optional[Callable[[VertexKey, int], VertexKey]] = None


# ---------------------------------------------------------------------------
# standard families


def line_graph():
    """The two-way infinite line on IntPoint((n,))."""

    def nbrs(v):
        if not isinstance(v, IntPoint) or len(v.coords) != 1:
            raise InvalidVertexError(f"not a line vertex: {v!r}")
        (x,) = v.coords
        return [IntPoint((x - 1,)), IntPoint((x + 1,))]

    def step(v, i):
        return IntPoint((v.coords[0] + (1 if i else -1),))

    return GraphOracle(
        nbrs, IntPoint((0,)), degree_bound=2, name="line",
        regular_degree=2, step_fn=step,
    )


def cycle_graph(n):
    """Cycle on n >= 3 vertices 0..n-1."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")

    def nbrs(v):
        if not isinstance(v, IntPoint) or len(v.coords) != 1:
            raise InvalidVertexError(f"not a cycle vertex: {v!r}")
        (x,) = v.coords
        if not 0 <= x < n:
            raise InvalidVertexError(f"cycle({n}) has no vertex {x}")
        return sorted({IntPoint(((x - 1) % n,)), IntPoint(((x + 1) % n,))})

    def step(v, i):
        return IntPoint(((v.coords[0] + (1 if i else -1)) % n,))

    return GraphOracle(
        nbrs, IntPoint((0,)), degree_bound=2, name=f"cycle({n})",
        regular_degree=2, step_fn=step,
    )


def path_graph(n):
    """Path on n >= 1 vertices 0..n-1."""
    if n < 1:
        raise ValueError(f"path needs n >= 1, got {n}")

    def nbrs(v):
        if not isinstance(v, IntPoint) or len(v.coords) != 1:
            raise InvalidVertexError(f"not a path vertex: {v!r}")
        (x,) = v.coords
        if not 0 <= x < n:
            raise InvalidVertexError(f"path({n}) has no vertex {x}")
        out = []
        if x > 0:
            out.append(IntPoint((x - 1,)))
        if x < n - 1:
            out.append(IntPoint((x + 1,)))
        return out

    bound = 2 if n >= 3 else (1 if n == 2 else 0)
    if n == 2:
        # the one regular path: each endpoint's sole neighbor is the other
        return GraphOracle(
            nbrs, IntPoint((0,)), degree_bound=1, name="path(2)",
            regular_degree=1,
            step_fn=lambda v, i: IntPoint((1 - v.coords[0],)),
        )
    return GraphOracle(nbrs, IntPoint((0,)), degree_bound=bound, name=f"path({n})")


def grid_graph(d):
    """The integer lattice of dimension d >= 1."""
    if d < 1:
        raise ValueError(f"grid needs d >= 1, got {d}")

    def nbrs(v):
        if not isinstance(v, IntPoint) or len(v.coords) != d:
            raise InvalidVertexError(f"not a {d}-dim grid vertex: {v!r}")
        out = []
        for i in range(d):
            for s in (-1, 1):
                c = list(v.coords)
                c[i] += s
                out.append(IntPoint(c))
        return sorted(out)

    def step(v, i):
        axis, s = divmod(i, 2)
        c = list(v.coords)
        c[axis] += 1 if s else -1
        return IntPoint(c)

    return GraphOracle(
        nbrs, IntPoint((0,) * d), degree_bound=2 * d, name=f"grid({d})",
        regular_degree=2 * d, step_fn=step,
    )


def caterpillar_graph():
    """Two-way infinite spine with one leaf per spine vertex.

    Spine vertex n is IntPoint((n, 0)), its leaf IntPoint((n, 1)).
    """

    def nbrs(v):
        if not isinstance(v, IntPoint) or len(v.coords) != 2:
            raise InvalidVertexError(f"not a caterpillar vertex: {v!r}")
        n, t = v.coords
        if t == 0:
            return sorted(
                [IntPoint((n - 1, 0)), IntPoint((n + 1, 0)), IntPoint((n, 1))]
            )
        if t == 1:
            return [IntPoint((n, 0))]
        raise InvalidVertexError(f"not a caterpillar vertex: {v!r}")

    return GraphOracle(
        nbrs, IntPoint((0, 0)), degree_bound=3, name="caterpillar"
    )


def free_group_graph(rank):
    """Cayley graph of the free group of the given rank (a 2*rank-regular
    tree) on reduced words."""
    if rank < 1:
        raise ValueError(f"free group needs rank >= 1, got {rank}")
    letters = [j for r in range(1, rank + 1) for j in (r, -r)]

    def nbrs(v):
        if not isinstance(v, WordKey):
            raise InvalidVertexError(f"not a free-group vertex: {v!r}")
        if any(abs(a) > rank for a in v.letters):
            raise InvalidVertexError(f"letter out of range for rank {rank}")
        return sorted(v.append(a) for a in letters)

    def step(v, i):
        a = letters[i]
        w = v.letters
        if w and w[-1] == -a:
            return _raw_word(w[:-1])
        return _raw_word(w + (a,))

    return GraphOracle(
        nbrs, WordKey(()), degree_bound=2 * rank, name=f"free({rank})",
        regular_degree=2 * rank, step_fn=step,
    )


def cayley_graph(generators, origin, name="cayley", degree_bound=None):
    """Oracle from a list of group-element actions (key -> key).

    The generator set must be closed under inverses for the oracle to be
    symmetric; that is the caller's responsibility. Actions fixing a vertex
    are dropped at that vertex (no self-loops).
    """
    if not generators:
        raise ValueError("empty generator set")
    gens = list(generators)

    def nbrs(v):
        out = {g(v) for g in gens}
        out.discard(v)
        return sorted(out)

    if degree_bound is None:
        degree_bound = len(gens)
    return GraphOracle(nbrs, origin, degree_bound=degree_bound, name=name)


# ---------------------------------------------------------------------------
# combinators


def lamplighter(L, H, root_o):
    """Lamplighter graph over space graph H with lamp graph L rooted at
    root_o.

    Vertices are LampKeys (position in H, finitely supported lamp
    configuration). Moves either step the position in H with lamps fixed,
    or step the lamp at the current position inside L. The degree of (x, f)
    is deg_H(x) + deg_L(f(x)).
    """
    try:
        root_nbrs = L.neighbors(root_o)
    except Exception as e:
        raise InvalidVertexError(f"root {root_o!r} is not a vertex of L: {e}")
    if not root_nbrs:
        raise InvalidVertexError(
            f"lamp graph has no edge at root {root_o!r}"
        )

    def nbrs(v):
        if not isinstance(v, LampKey):
            raise InvalidVertexError(f"not a lamplighter vertex: {v!r}")
        out = []
        for x2 in H.neighbors(v.base):
            out.append(LampKey(x2, v.lamps))
        cur = v.lamp_at(v.base, root_o)
        for l2 in L.neighbors(cur):
            out.append(v.with_lamp(v.base, l2, root_o))
        return sorted(out)

    bound = None
    if L.degree_bound is not None and H.degree_bound is not None:
        bound = L.degree_bound + H.degree_bound

    rdeg = None
    step = None
    if L.regular_degree is not None and H.regular_degree is not None:
        hr, lr = H.regular_degree, L.regular_degree
        h_step = H.step_fn or (lambda x, i: H.neighbors(x)[i])
        l_step = L.step_fn or (lambda l, i: L.neighbors(l)[i])
        rdeg = hr + lr

        def step(v, i):
            if i < hr:
                return _raw_lamp(h_step(v.base, i), v.lamps, v.canon[2])
            cur = v.lamp_at(v.base, root_o)
            return v.with_lamp(v.base, l_step(cur, i - hr), root_o)

    return GraphOracle(
        nbrs,
        LampKey(H.origin, ()),
        degree_bound=bound,
        name=f"lamplighter({L.name},{H.name})",
        regular_degree=rdeg,
        step_fn=step,
    )


def direct_product(H1, H2):
    """Direct product: (x1, x2) ~ (x1', x2') iff exactly one coordinate
    moves along an edge of its factor."""

    def nbrs(v):
        if not isinstance(v, PairKey):
            raise InvalidVertexError(f"not a product vertex: {v!r}")
        out = [PairKey(a, v.right) for a in H1.neighbors(v.left)]
        out += [PairKey(v.left, b) for b in H2.neighbors(v.right)]
        return sorted(out)

    bound = None
    if H1.degree_bound is not None and H2.degree_bound is not None:
        bound = H1.degree_bound + H2.degree_bound

    rdeg = None
    step = None
    if (
        H1.regular_degree is not None
        and H2.regular_degree is not None
        and H1.step_fn is not None
        and H2.step_fn is not None
    ):
        r1 = H1.regular_degree
        s1, s2 = H1.step_fn, H2.step_fn
        rdeg = r1 + H2.regular_degree

        def step(v, i):
            if i < r1:
                return PairKey(s1(v.left, i), v.right)
            return PairKey(v.left, s2(v.right, i - r1))

    return GraphOracle(
        nbrs,
        PairKey(H1.origin, H2.origin),
        degree_bound=bound,
        name=f"product({H1.name},{H2.name})",
        regular_degree=rdeg,
        step_fn=step,
    )


def k_fuzz(G, k):
    """Graph on the same vertices with edges between vertices at distance
    <= k in G; neighbors found by truncated BFS from the query vertex."""
    if k < 1:
        raise ValueError(f"fuzz parameter must be >= 1, got {k}")

    def nbrs(v):
        seen = {v}
        frontier = [v]
        out = []
        for _ in range(k):
            nxt = []
            for u in frontier:
                for w in G.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                        out.append(w)
            frontier = nxt
        return sorted(out)

    bound = None
    D = G.degree_bound
    if D is not None:
        if D <= 1:
            bound = D
        elif D == 2:
            bound = 2 * k
        else:
            bound = D * ((D - 1) ** k - 1) // (D - 2)
    return GraphOracle(nbrs, G.origin, degree_bound=bound, name=f"{G.name}^[{k}]")


# ---------------------------------------------------------------------------
# finite materialization


@dataclass
class FiniteGraph:
    """Materialized induced subgraph with boundary marking.

    Vertices carry a stable index; `adj` holds per-vertex sorted index
    lists. Boundary vertices are those at distance exactly `radius` from
    the center or with an oracle-neighbor outside `verts`; interior
    vertices therefore have their full degree represented.
    """

    verts: list
    adj: list
    boundary_mask: np.ndarray
    radius: int
    oracle_id: str = "graph"
    _edges: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def n(self):
        return len(self.verts)

    def degree(self, i):
        return len(self.adj[i])

    def edges(self):
        """(m, 2) int array of unordered edges, u < v, lexicographic.
        This fixed enumeration is the EdgeFunction index space."""
        if self._edges is None:
            pairs = [
                (u, v) for u in range(self.n) for v in self.adj[u] if u < v
            ]
            self._edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
        return self._edges

    def n_edges(self):
        return len(self.edges())

    @classmethod
    def from_edges(cls, n, edges, boundary=(), verts=None, oracle_id="custom"):
        """Build directly from an undirected edge list (test/CLI input).
        Self-loops are rejected; duplicates collapse."""
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            adj[u].add(v)
            adj[v].add(u)
        mask = np.zeros(n, dtype=bool)
        for b in boundary:
            mask[b] = True
        if verts is None:
            verts = [IntPoint((i,)) for i in range(n)]
        return cls(
            verts=list(verts),
            adj=[sorted(s) for s in adj],
            boundary_mask=mask,
            radius=-1,
            oracle_id=oracle_id,
        )


def ball(G, center, R, budget=None):
    """Induced subgraph on {v : d(center, v) <= R}; vertex 0 is the center.

    BFS expands neighbor lists in sorted order, so the vertex indexing is
    canonical. Raises BudgetExceededError once more than `budget` vertices
    are discovered (default DEFAULT_VERTEX_BUDGET).
    """
    if R < 0:
        raise ValueError(f"radius must be >= 0, got {R}")
    if budget is None:
        budget = DEFAULT_VERTEX_BUDGET
    index = {center: 0}
    verts = [center]
    dist = [0]
    q = deque([center])
    while q:
        v = q.popleft()
        dv = dist[index[v]]
        if dv == R:
            continue
        for w in G.neighbors(v):
            if w not in index:
                if len(verts) >= budget:
                    raise BudgetExceededError(len(verts), budget)
                index[w] = len(verts)
                verts.append(w)
                dist.append(dv + 1)
                q.append(w)

    n = len(verts)
    adj = []
    mask = np.zeros(n, dtype=bool)
    for i, v in enumerate(verts):
        row = []
        outside = False
        for w in G.neighbors(v):
            j = index.get(w)
            if j is None:
                outside = True
            else:
                row.append(j)
        adj.append(sorted(row))
        mask[i] = outside or dist[i] == R
    return FiniteGraph(
        verts=verts,
        adj=adj,
        boundary_mask=mask,
        radius=R,
        oracle_id=G.name,
    )


def induced_on(G, verts):
    """Induced FiniteGraph on an explicit vertex list of oracle G.
    Boundary = vertices with an oracle-neighbor outside the list."""
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = []
    mask = np.zeros(n, dtype=bool)
    for i, v in enumerate(verts):
        row = []
        outside = False
        for w in G.neighbors(v):
            j = index.get(w)
            if j is None:
                outside = True
            else:
                row.append(j)
        adj.append(sorted(row))
        mask[i] = outside
    return FiniteGraph(
        verts=list(verts),
        adj=adj,
        boundary_mask=mask,
        radius=-1,
        oracle_id=G.name,
    )


def graph_distances(g, source=0):
    """BFS distances from a vertex index; unreachable vertices get -1."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def pairwise_distance(g, u, v, cutoff=None):
    """BFS distance between two indices of a FiniteGraph; -1 if separated
    (or farther than `cutoff`)."""
    if u == v:
        return 0
    dist = {u: 0}
    q = deque([u])
    while q:
        a = q.popleft()
        da = dist[a]
        if cutoff is not None and da >= cutoff:
            continue
        for w in g.adj[a]:
            if w not in dist:
                if w == v:
                    return da + 1
                dist[w] = da + 1
                q.append(w)
    return -1


def end_estimate(G, r, R, budget=None):
    """Finite-scale proxy for the number of ends: connected components of
    B_R minus B_r that contain a vertex at distance exactly R.

    A heuristic, not the end definition itself: it stabilizes to the end
    count as r and R grow for the shipped families, and exceeding 2 at
    moderate scale flags infinitely many ends. Components that do not reach
    the outer sphere are bounded pockets and are discarded.
    """
    if not 0 <= r < R:
        raise ValueError(f"need 0 <= r < R, got r={r}, R={R}")
    g = ball(G, G.origin, R, budget=budget)
    dist = graph_distances(g, 0)
    in_shell = dist > r
    comp = np.full(g.n, -1, dtype=np.int64)
    n_comp = 0
    touching = 0
    for s in range(g.n):
        if not in_shell[s] or comp[s] >= 0:
            continue
        comp[s] = n_comp
        q = deque([s])
        reaches = dist[s] == R
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if in_shell[w] and comp[w] < 0:
                    comp[w] = n_comp
                    if dist[w] == R:
                        reaches = True
                    q.append(w)
        if reaches or dist[s] == R:
            touching += 1
        n_comp += 1
    return touching


# ---------------------------------------------------------------------------
# exports


def edge_list_text(g):
    """Edge-list export, one 'u v' per line (fixed enumeration order)."""
    return "\n".join(f"{u} {v}" for u, v in g.edges()) + "\n"


def vertex_table_text(g):
    """Vertex table export: 'index<TAB>printed key' per line."""
    return "\n".join(f"{i}\t{format_key(v)}" for i, v in enumerate(g.verts)) + "\n"
