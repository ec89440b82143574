import random

import numpy as np
import pytest

from lampharm.descriptors import DescriptorError, parse_descriptor
from lampharm.graphs import (
    BudgetExceededError,
    FiniteGraph,
    InvalidVertexError,
    ball,
    caterpillar_graph,
    cycle_graph,
    direct_product,
    end_estimate,
    free_group_graph,
    graph_distances,
    grid_graph,
    induced_on,
    k_fuzz,
    lamplighter,
    line_graph,
    pairwise_distance,
    path_graph,
)
from lampharm.keys import IntPoint, LampKey, PairKey, WordKey, format_key


def test_line_neighbors():
    G = line_graph()
    assert G.neighbors(IntPoint((3,))) == [IntPoint((2,)), IntPoint((4,))]
    assert G.degree_bound == 2


def test_cycle_neighbors_wrap():
    G = cycle_graph(5)
    assert set(G.neighbors(IntPoint((0,)))) == {IntPoint((1,)), IntPoint((4,))}
    with pytest.raises(ValueError):
        cycle_graph(2)


def test_path_endpoints():
    G = path_graph(4)
    assert G.neighbors(IntPoint((0,))) == [IntPoint((1,))]
    assert G.neighbors(IntPoint((3,))) == [IntPoint((2,))]
    with pytest.raises(InvalidVertexError):
        G.neighbors(IntPoint((4,)))


def test_grid_neighbors():
    G = grid_graph(2)
    nbrs = G.neighbors(IntPoint((0, 0)))
    assert len(nbrs) == 4
    assert IntPoint((1, 0)) in nbrs and IntPoint((0, -1)) in nbrs


def test_free_group_neighbors():
    G = free_group_graph(2)
    nbrs = G.neighbors(WordKey((1,)))
    # stepping back to the identity plus three forward moves
    assert WordKey(()) in nbrs
    assert len(nbrs) == 4
    assert len(set(nbrs)) == 4


def test_caterpillar_structure():
    G = caterpillar_graph()
    spine = G.neighbors(IntPoint((0, 0)))
    assert set(spine) == {IntPoint((-1, 0)), IntPoint((1, 0)), IntPoint((0, 1))}
    leaf = G.neighbors(IntPoint((0, 1)))
    assert leaf == [IntPoint((0, 0))]


def test_lamplighter_origin_neighbors():
    # two base moves keeping lamps, one lamp toggle at the current position
    L = path_graph(2)
    H = line_graph()
    G = lamplighter(L, H, IntPoint((0,)))
    nbrs = G.neighbors(G.origin)
    printed = sorted(format_key(k) for k in nbrs)
    assert printed == ["[(-1)|]", "[(0)|(0):(1)]", "[(1)|]"]


def test_lamplighter_degree_identity():
    L = path_graph(2)
    H = grid_graph(2)
    G = lamplighter(L, H, IntPoint((0,)))
    rng = random.Random(7)
    g = ball(G, G.origin, 3)
    for i in rng.sample(range(g.n), 20):
        key = g.verts[i]
        base_deg = len(H.neighbors(key.base))
        lamp_deg = len(L.neighbors(key.lamp_at(key.base, IntPoint((0,)))))
        assert len(G.neighbors(key)) == base_deg + lamp_deg


def test_lamplighter_rejects_bad_root():
    L = path_graph(2)
    with pytest.raises(InvalidVertexError):
        lamplighter(L, line_graph(), IntPoint((9,)))


def test_product_moves_one_factor():
    G = direct_product(line_graph(), line_graph())
    nbrs = G.neighbors(PairKey(IntPoint((0,)), IntPoint((0,))))
    assert len(nbrs) == 4
    for k in nbrs:
        moved_left = k.left != IntPoint((0,))
        moved_right = k.right != IntPoint((0,))
        assert moved_left != moved_right


def test_k_fuzz_line_degree():
    G3 = k_fuzz(line_graph(), 3)
    nbrs = G3.neighbors(IntPoint((0,)))
    assert len(nbrs) == 6
    assert IntPoint((3,)) in nbrs and IntPoint((-3,)) in nbrs


def test_k_fuzz_contains_original_edges():
    G = k_fuzz(grid_graph(2), 2)
    nbrs = set(G.neighbors(IntPoint((0, 0))))
    for k in grid_graph(2).neighbors(IntPoint((0, 0))):
        assert k in nbrs


def test_k_fuzz_one_is_identity():
    G = k_fuzz(free_group_graph(2), 1)
    w = WordKey((1, 2))
    assert set(G.neighbors(w)) == set(free_group_graph(2).neighbors(w))


def test_ball_line():
    g = ball(line_graph(), IntPoint((0,)), 3)
    assert g.n == 7
    assert g.n_edges() == 6
    assert int(g.boundary_mask.sum()) == 2
    assert g.verts[0] == IntPoint((0,))


def test_ball_canonical_order_is_deterministic():
    L = path_graph(2)
    G = lamplighter(L, line_graph(), IntPoint((0,)))
    g1 = ball(G, G.origin, 4)
    g2 = ball(G, G.origin, 4)
    assert g1.verts == g2.verts
    assert g1.adj == g2.adj


def test_ball_nesting():
    G = grid_graph(2)
    small = ball(G, IntPoint((0, 0)), 3)
    big = ball(G, IntPoint((0, 0)), 5)
    inner = set(small.verts)
    assert inner <= set(big.verts)


def test_ball_boundary_is_sphere_or_cut():
    G = grid_graph(2)
    g = ball(G, IntPoint((0, 0)), 4)
    dist = graph_distances(g, 0)
    for i in range(g.n):
        if g.boundary_mask[i]:
            full_deg = len(G.neighbors(g.verts[i]))
            assert dist[i] == 4 or len(g.adj[i]) < full_deg
        else:
            assert dist[i] < 4


def test_lamplighter_ball_sizes_frozen():
    L = path_graph(2)
    G = lamplighter(L, line_graph(), IntPoint((0,)))
    sizes = [ball(G, G.origin, R).n for R in range(1, 9)]
    assert sizes == [4, 10, 22, 44, 84, 155, 278, 490]


def test_ball_budget_enforced():
    with pytest.raises(BudgetExceededError) as e:
        ball(grid_graph(2), IntPoint((0, 0)), 10, budget=30)
    assert e.value.partial_count >= 30


def test_oracle_symmetry_sampled():
    L = path_graph(2)
    for G in (grid_graph(2), free_group_graph(2),
              lamplighter(L, line_graph(), IntPoint((0,)))):
        g = ball(G, G.origin, 4)
        rng = random.Random(11)
        for i in rng.sample(range(g.n), min(25, g.n)):
            for w in G.neighbors(g.verts[i]):
                assert g.verts[i] in G.neighbors(w)


def test_graph_distances_and_pairwise():
    g = ball(line_graph(), IntPoint((0,)), 5)
    dist = graph_distances(g, 0)
    assert dist[0] == 0
    assert sorted(dist.tolist()) == [0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]
    i = g.verts.index(IntPoint((-5,)))
    j = g.verts.index(IntPoint((5,)))
    assert pairwise_distance(g, i, j) == 10
    assert pairwise_distance(g, i, j, cutoff=4) == -1


def test_induced_on_boundary_flags():
    G = grid_graph(2)
    g = ball(G, IntPoint((0, 0)), 3)
    dist = graph_distances(g, 0)
    keep = [g.verts[i] for i in range(g.n) if dist[i] <= 2]
    sub = induced_on(G, keep)
    assert sub.n == len(keep)
    sdist = graph_distances(sub, sub.verts.index(IntPoint((0, 0))))
    for i in range(sub.n):
        assert sub.boundary_mask[i] == (sdist[i] == 2)


def test_end_estimate_frozen_examples():
    assert end_estimate(line_graph(), 2, 6) == 2
    assert end_estimate(grid_graph(2), 2, 8) == 1
    assert end_estimate(free_group_graph(2), 1, 5) == 12


def test_from_edges_rejects_self_loop():
    with pytest.raises(ValueError):
        FiniteGraph.from_edges(2, [(0, 0)], boundary=[])


def test_edges_sorted_unique():
    g = ball(grid_graph(2), IntPoint((0, 0)), 3)
    e = g.edges()
    assert np.all(e[:, 0] < e[:, 1])
    rows = [tuple(r) for r in e.tolist()]
    assert rows == sorted(rows)
    assert len(rows) == len(set(rows))


def test_descriptor_parsing_nested():
    G = parse_descriptor(
        {
            "family": "lamplighter",
            "lamp": {"family": "path", "n": 2},
            "space": {"family": "line"},
            "root": 0,
        }
    )
    assert len(G.neighbors(G.origin)) == 3
    P = parse_descriptor(
        '{"family": "product", "left": {"family": "line"}, '
        '"right": {"family": "cycle", "n": 4}}'
    )
    assert len(P.neighbors(P.origin)) == 4


def test_descriptor_errors():
    with pytest.raises(DescriptorError):
        parse_descriptor({"family": "moebius"})
    with pytest.raises(DescriptorError):
        parse_descriptor({"family": "cycle"})
    with pytest.raises(DescriptorError):
        parse_descriptor({"family": "cycle", "n": "five"})


def test_regular_step_function_enumerates_exactly_the_neighbors():
    """Families advertising a constant degree and a single-neighbor step
    function must enumerate, as a set, exactly the sorted neighbor list,
    at vertices sampled by random walking away from the origin."""
    rnd = random.Random(77)
    fams = [
        line_graph(),
        cycle_graph(6),
        grid_graph(2),
        grid_graph(3),
        path_graph(2),
        free_group_graph(2),
        lamplighter(path_graph(2), line_graph(), IntPoint((0,))),
        direct_product(line_graph(), grid_graph(2)),
    ]
    for G in fams:
        assert G.regular_degree is not None
        assert G.step_fn is not None
        v = G.origin
        for _ in range(120):
            nbrs = G.neighbors(v)
            assert len(nbrs) == G.regular_degree
            stepped = sorted(G.step_fn(v, i) for i in range(G.regular_degree))
            assert stepped == nbrs
            v = nbrs[rnd.randrange(len(nbrs))]


def test_irregular_families_do_not_advertise_a_step_function():
    assert path_graph(5).regular_degree is None
    assert caterpillar_graph().regular_degree is None
    assert lamplighter(
        path_graph(3), line_graph(), IntPoint((0,))
    ).regular_degree is None
