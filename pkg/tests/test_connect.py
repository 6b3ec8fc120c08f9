from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roadnet.errors import OutOfBounds
from roadnet.extract.connect import (
    AdjacencyGraph,
    ConnectParams,
    Kind,
    classify_points,
    connect_points,
    prune_redundant,
    reconstruct,
    segment_gain,
)
from roadnet.extract.mask import BinaryMask
from roadnet.extract.raster import stroke_indices
from roadnet.network import PlanarPoint as P


def _sse(mask, canvas):
    return int(np.sum((mask.data.astype(int) - canvas.astype(int)) ** 2))


def test_gain_examples():
    blank = BinaryMask.zeros(20, 20)
    full = BinaryMask(np.ones((20, 20), dtype=np.uint8))
    canvas = np.zeros((20, 20), dtype=np.uint8)
    stroke = len(stroke_indices((2, 10), (17, 10), 1, (20, 20)))
    assert segment_gain(blank, canvas, P(2, 10), P(17, 10)) == stroke
    assert segment_gain(full, canvas, P(2, 10), P(17, 10)) == -stroke
    single = np.zeros((20, 20), dtype=np.uint8)
    single[5, 5] = 1
    assert segment_gain(BinaryMask(single), canvas, P(5, 5), P(5, 5), thickness=0) == -1
    # pixels already drawn do not count twice
    canvas[:] = 1
    assert segment_gain(full, canvas, P(2, 10), P(17, 10)) == 0


def test_gain_rejects_outside_points():
    with pytest.raises(OutOfBounds):
        segment_gain(BinaryMask.zeros(10, 10), np.zeros((10, 10), np.uint8), P(0, 0), P(10, 3))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 23), st.integers(0, 23), st.integers(0, 23),
       st.integers(0, 23), st.integers(0, 2))
def test_gain_equals_sse_difference(seed, x0, y0, x1, y1, t):
    rng = np.random.default_rng(seed)
    mask = BinaryMask(rng.random((24, 24)) < 0.5)
    canvas = (rng.random((24, 24)) < 0.3).astype(np.uint8)
    before = _sse(mask, canvas)
    after = canvas.copy()
    for flat in stroke_indices((x0, y0), (x1, y1), t, (24, 24)):
        after.flat[flat] = 1
    assert segment_gain(mask, canvas, P(x0, y0), P(x1, y1), t) == _sse(mask, after) - before


def _road(h, w, segments):
    m = np.zeros((h, w), dtype=np.uint8)
    for p, q in segments:
        m.flat[stroke_indices(p, q, 1, (h, w))] = 1
    return BinaryMask(m)


def test_collinear_chain_connects_neighbours_only():
    mask = _road(40, 100, [((10, 20), (90, 20))])
    adj = connect_points(mask, [P(10, 20), P(50, 20), P(90, 20)])
    assert adj.edges == {(0, 1), (1, 2)}


def test_no_edge_across_background():
    mask = _road(60, 60, [((5, 5), (55, 5)), ((5, 50), (55, 50))])
    adj = connect_points(mask, [P(5, 5), P(55, 5), P(5, 50), P(55, 50)])
    assert adj.edges == {(0, 1), (2, 3)}


def test_connect_trivial_and_distance_limit():
    mask = _road(20, 80, [((5, 10), (75, 10))])
    assert connect_points(mask, [P(5, 10)]).edges == frozenset()
    limited = connect_points(mask, [P(5, 10), P(75, 10)], ConnectParams(max_pair_distance=50))
    assert limited.edges == frozenset()


def test_reconstruct_draws_edges():
    adj = AdjacencyGraph((P(2, 2), P(8, 2)), frozenset({(1, 0)}))
    canvas = reconstruct(adj, (5, 12), thickness=0)
    assert canvas[2, 2:9].all() and canvas.sum() == 7


def test_adjacency_normalises_and_validates():
    adj = AdjacencyGraph([P(0, 0), P(1, 0)], frozenset({(1, 0)}))
    assert adj.edges == {(0, 1)}
    with pytest.raises(ValueError):
        AdjacencyGraph([P(0, 0)], frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        AdjacencyGraph([P(0, 0)], frozenset({(0, 3)}))


def _path(points):
    return AdjacencyGraph(tuple(points), frozenset((i, i + 1) for i in range(len(points) - 1)))


def test_classify():
    adj = AdjacencyGraph(
        (P(0, 0), P(10, 0), P(20, 0), P(10, 10), P(30, 0)),
        frozenset({(0, 1), (1, 2), (1, 3), (2, 4)}),
    )
    kinds = [c.kind for c in classify_points(adj)]
    degrees = [c.degree for c in classify_points(adj)]
    assert degrees == [1, 3, 2, 1, 1]
    assert kinds == [Kind.IMPORTANT, Kind.IMPORTANT, Kind.NON_IMPORTANT, Kind.IMPORTANT, Kind.IMPORTANT]


def test_prune_collinear_and_keep_bend():
    straight = _path([P(0, 0), P(10, 0.5), P(20, 0)])
    pruned = prune_redundant(straight, classify_points(straight), eps=2.0)
    assert pruned.points == (P(0, 0), P(20, 0)) and pruned.edges == {(0, 1)}
    bend = _path([P(0, 0), P(10, 10), P(20, 0)])
    assert prune_redundant(bend, classify_points(bend), eps=2.0) == bend
    with pytest.raises(ValueError):
        prune_redundant(bend, [], eps=2.0)


def test_prune_long_chain():
    chain = _path([P(float(x), 0.0) for x in range(0, 60, 10)])
    pruned = prune_redundant(chain, classify_points(chain))
    assert pruned.points == (P(0, 0), P(50, 0)) and pruned.edges == {(0, 1)}


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 9))
    pts = draw(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=n, max_size=n, unique=True))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=2 * n))
    return AdjacencyGraph(tuple(P(float(x), float(y)) for x, y in pts), frozenset(edges))


@settings(max_examples=80, deadline=None)
@given(graphs(), st.floats(0.1, 5.0))
def test_prune_properties(adj, eps):
    classes = classify_points(adj)
    pruned = prune_redundant(adj, classes, eps)
    important = {c.point for c in classes if c.kind is Kind.IMPORTANT}
    assert important <= set(pruned.points)
    assert set(pruned.points) <= set(adj.points)
    assert len(pruned.edges) <= len(adj.edges)

    def components(g):
        nb = g.neighbors()
        seen, comps = set(), []
        for s in range(len(g.points)):
            if s in seen:
                continue
            stack, comp = [s], set()
            while stack:
                v = stack.pop()
                if v not in comp:
                    comp.add(v)
                    stack.extend(nb[v])
            seen |= comp
            comps.append(frozenset(g.points[v] for v in comp))
        return comps

    # surviving points keep their connectivity
    before = components(adj)
    for comp in components(pruned):
        assert any(comp <= c for c in before)
    keep = set(pruned.points)
    assert len([c for c in before if c & keep]) == len(components(pruned))
    # only degree-2 points are ever removed
    for i, p in enumerate(adj.points):
        if p not in keep:
            assert classes[i].degree == 2


def test_prune_excess_threshold():
    exact = _path([P(0, 0), P(5, 0), P(10, 0)])
    assert prune_redundant(exact, classify_points(exact), eps=2.0).points == (P(0, 0), P(10, 0))
    # excess 2*sqrt(34) - 10 ~ 1.66
    raised = _path([P(0, 0), P(5, 3), P(10, 0)])
    assert prune_redundant(raised, classify_points(raised), eps=1.0) == raised
    assert len(prune_redundant(raised, classify_points(raised), eps=1.7).points) == 2
