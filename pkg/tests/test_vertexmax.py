"""Vertex-weighted searches against the enumeration oracles."""
import itertools
import math

import numpy as np
import pytest

from hsub.graphs import Graph, generate_random_graph
from hsub.oracle import (enumerate_triangles, oracle_all_pairs_clique,
                         oracle_all_pairs_pattern, oracle_edge_cover_number,
                         oracle_k2k, oracle_max_clique)
from hsub.vertexmax import (adjacency_system, all_pairs_max_clique,
                            all_pairs_max_pattern, edge_cover_number,
                            heaviest_k2k, heaviest_triangle_det,
                            heaviest_triangle_monotone, heaviest_triangle_rand,
                            heaviest_triangle_sparse, sample_triangle,
                            triangle_threshold_edge)


def graphs(count, n_max, p=0.5, start=0):
    for seed in range(start, start + count):
        n = 4 + seed % (n_max - 3)
        yield generate_random_graph(n, p, weight_mode="vertex", seed=seed)


def triangle_max(g):
    best = None
    for vs in enumerate_triangles(g):
        w = g.vertex_set_weight(vs)
        if best is None or w > best:
            best = w
    return best


@pytest.mark.parametrize("p", [0.3, 0.7])
def test_triangle_modes_match_enumeration(p):
    for g in graphs(25, 14, p=p):
        expect = triangle_max(g)
        for res in (heaviest_triangle_det(g),
                    heaviest_triangle_rand(g, seed=1),
                    heaviest_triangle_sparse(g)):
            if expect is None:
                assert res is None
            else:
                assert res is not None and res.weight == expect
                assert g.is_clique(res.vertices)


def test_triangle_rejects_unweighted():
    g = Graph.build(3, [(1, 2), (1, 3), (2, 3)])
    with pytest.raises(ValueError):
        heaviest_triangle_det(g)


def test_threshold_edge():
    g = generate_random_graph(12, 0.6, weight_mode="vertex", seed=5)
    weights = sorted(g.vertex_set_weight(t) for t in enumerate_triangles(g))
    assert weights
    top = weights[-1]
    edge = triangle_threshold_edge(g, top)
    assert edge is not None
    u, v = edge
    third = max((g.vertex_weight[x] for x in g.neighbors(u) & g.neighbors(v)),
                default=None)
    assert third is not None
    assert g.vertex_weight[u] + g.vertex_weight[v] + third >= top
    assert triangle_threshold_edge(g, top + 1e-6) is None


def test_sampling_stays_in_window():
    g = generate_random_graph(10, 0.8, weight_mode="vertex", seed=2)
    weights = sorted(g.vertex_set_weight(t) for t in enumerate_triangles(g))
    lo, hi = weights[len(weights) // 3], weights[2 * len(weights) // 3]
    for seed in range(40):
        res = sample_triangle(g, lo, hi, seed=seed)
        assert res is not None
        assert lo <= res.weight <= hi
    # deterministic for a fixed seed
    assert sample_triangle(g, lo, hi, seed=7) == sample_triangle(g, lo, hi,
                                                                 seed=7)
    top = weights[-1]
    assert sample_triangle(g, top + 1.0, top + 2.0, seed=0) is None


def test_monotone_objective():
    # maximize the minimum vertex weight: symmetric and monotone
    f = lambda a, b, c: min(a, b, c)
    for g in graphs(10, 12, start=100):
        tris = list(enumerate_triangles(g))
        res = heaviest_triangle_monotone(g, f)
        if not tris:
            assert res is None
            continue
        expect = max(min(g.vertex_weight[v] for v in t) for t in tris)
        assert res is not None
        assert min(g.vertex_weight[v] for v in res.vertices) == expect


@pytest.mark.parametrize("h", [3, 4, 5])
def test_all_pairs_clique_matches_oracle(h):
    for g in graphs(8, 11, start=h * 37):
        got = all_pairs_max_clique(g, h)
        expect = oracle_all_pairs_clique(g, h)
        assert set(got.table) == set(expect)
        for pair, res in expect.items():
            mine = got.table[pair]
            assert mine.weight == res.weight, (pair, h)
            assert g.is_clique(mine.vertices)
            assert pair[0] in mine.vertices and pair[1] in mine.vertices
        glob = got.global_best()
        ref = oracle_max_clique(g, h)
        assert (glob is None) == (ref is None)
        if ref is not None:
            assert glob.weight == ref.weight


def test_all_pairs_best_accessor():
    g = generate_random_graph(9, 0.8, weight_mode="vertex", seed=9)
    got = all_pairs_max_clique(g, 3)
    for (u, v), res in got.table.items():
        assert got.best(u, v) == res
        assert got.best(v, u) == res


def pattern_path3():
    return Graph.build(3, [(1, 2), (2, 3)])


def pattern_c4():
    return Graph.build(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.mark.parametrize("pattern", [pattern_path3(), pattern_c4()])
def test_all_pairs_pattern_matches_oracle(pattern):
    for g in graphs(6, 9, start=500):
        got = all_pairs_max_pattern(g, pattern)
        expect = oracle_all_pairs_pattern(g, pattern)
        assert set(got.table) == set(expect)
        for pair, res in expect.items():
            assert got.table[pair].weight == res.weight, pair


def test_k2k_matches_oracle():
    for k in (2, 3):
        for g in graphs(10, 11, p=0.7, start=900 + k):
            got = heaviest_k2k(g, k)
            expect = oracle_k2k(g, k)
            assert (got is None) == (expect is None)
            if expect is not None:
                assert got.weight == expect.weight


def test_edge_cover_number_matches_oracle():
    for g in graphs(12, 11, p=0.6, start=1200):
        for k in (3, 4):
            assert edge_cover_number(g, k) == oracle_edge_cover_number(g, k)
    empty = Graph.build(6, [(1, 2)])
    assert edge_cover_number(empty, 3) == 0


def test_adjacency_system_entries():
    g = generate_random_graph(8, 0.6, weight_mode="vertex", seed=11)
    sys = adjacency_system(g, 1, 2)
    dense = sys.matrix.dense()
    for i, row_set in enumerate(sys.row_index):
        for j, col_set in enumerate(sys.col_index):
            union = set(row_set) | set(col_set)
            want = len(union) == 3 and g.is_clique(union)
            assert bool(dense[i, j]) == want
    # column order is ascending by subset weight
    col_w = [g.vertex_set_weight(s) for s in sys.col_index]
    assert col_w == sorted(col_w)
