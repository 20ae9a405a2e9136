"""Brute-force reference implementations.

Everything here enumerates directly from definitions.  These functions share
no code with the fast paths beyond Graph accessors and the canonical weight
helpers, so agreement between the two routes is meaningful evidence.

Enumeration refuses graphs above a documented cap (default 32 vertices).
"""
from __future__ import annotations

import itertools

import numpy as np

from .graphs import (Graph, SubgraphResult, VertexColoring, better_result,
                     canonical_cycle, clique_result, cycle_result)

ENUMERATION_CAP = 32


class CapExceeded(ValueError):
    pass


def _check_cap(g: Graph, max_n: int | None):
    cap = ENUMERATION_CAP if max_n is None else max_n
    if g.n > cap:
        raise CapExceeded(f"{g.n} vertices exceeds the enumeration cap {cap}")


def enumerate_cliques(g: Graph, h: int, max_n: int | None = None):
    """Yield all h-cliques as sorted tuples."""
    _check_cap(g, max_n)
    for vs in itertools.combinations(range(1, g.n + 1), h):
        if g.is_clique(vs):
            yield vs


def oracle_max_clique(g: Graph, h: int,
                      max_n: int | None = None) -> SubgraphResult | None:
    best = None
    for vs in enumerate_cliques(g, h, max_n):
        best = better_result(best, clique_result(g, vs))
    return best


def oracle_all_pairs_clique(g: Graph, h: int, max_n: int | None = None
                            ) -> dict[tuple[int, int], SubgraphResult]:
    out: dict[tuple[int, int], SubgraphResult] = {}
    for vs in enumerate_cliques(g, h, max_n):
        res = clique_result(g, vs)
        for u, v in itertools.combinations(vs, 2):
            out[(u, v)] = better_result(out.get((u, v)), res)
    return out


def _tuple_matches_pattern(g: Graph, pattern: Graph, tup: tuple[int, ...]) -> bool:
    for i, j in itertools.combinations(range(len(tup)), 2):
        if g.adjacent(tup[i], tup[j]) != pattern.adjacent(i + 1, j + 1):
            return False
    return True


def oracle_all_pairs_pattern(g: Graph, pattern: Graph, max_n: int | None = None
                             ) -> dict[tuple[int, int], SubgraphResult]:
    """Per vertex pair, the heaviest induced copy of `pattern` covering it."""
    _check_cap(g, max_n)
    h = pattern.n
    out: dict[tuple[int, int], SubgraphResult] = {}
    for tup in itertools.permutations(range(1, g.n + 1), h):
        if not _tuple_matches_pattern(g, pattern, tup):
            continue
        res = clique_result(g, tup, kind="pattern")
        for u, v in itertools.combinations(sorted(tup), 2):
            out[(u, v)] = better_result(out.get((u, v)), res)
    return out


def _cycle_orders(k: int) -> list[tuple[int, ...]]:
    # circular orders of range(k) starting at 0, reflection-reduced
    orders = []
    for perm in itertools.permutations(range(1, k)):
        if perm[0] < perm[-1]:
            orders.append((0,) + perm)
    return orders


def enumerate_k_cycles(g: Graph, k: int, max_n: int | None = None
                       ) -> list[SubgraphResult]:
    """All simple k-cycles, one canonical result each."""
    _check_cap(g, max_n)
    if k < 3:
        raise ValueError("cycles need at least 3 vertices")
    out = []
    orders = _cycle_orders(k)
    for vs in itertools.combinations(range(1, g.n + 1), k):
        for order in orders:
            cyc = tuple(vs[i] for i in order)
            ok = all(g.adjacent(cyc[i], cyc[(i + 1) % k]) for i in range(k))
            if ok:
                out.append(cycle_result(g, cyc))
    return out


def oracle_k_cycle(g: Graph, k: int,
                   max_n: int | None = None) -> SubgraphResult | None:
    best = None
    for res in enumerate_k_cycles(g, k, max_n):
        best = better_result(best, res)
    return best


def oracle_dominance(p, q, strict: bool = False) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if strict:
        return (p[:, None, :] < q[None, :, :]).sum(axis=2, dtype=np.int64)
    return (p[:, None, :] <= q[None, :, :]).sum(axis=2, dtype=np.int64)


def oracle_weighted_dominance(p, q, values, strict: bool = False) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    n1, n2 = p.shape[0], q.shape[0]
    out = np.zeros((n1, n2))
    for i in range(n1):
        for j in range(n2):
            rel = p[i] < q[j] if strict else p[i] <= q[j]
            total = 0.0
            for c in np.flatnonzero(rel):
                total += values[i, c]
            out[i, j] = total
    return out


def _trop_add(x: float, y: float) -> float:
    # absorbing (min,+) convention: +inf wins over -inf
    if np.isposinf(x) or np.isposinf(y):
        return np.inf
    if np.isneginf(x) or np.isneginf(y):
        return -np.inf
    return x + y


def oracle_min_plus(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = a.shape
    n3 = b.shape[1]
    out = np.full((n1, n3), np.inf)
    for i in range(n1):
        for j in range(n3):
            best = np.inf
            for t in range(n2):
                s = _trop_add(a[i, t], b[t, j])
                if s < best:
                    best = s
            out[i, j] = best
    return out


def oracle_max_plus(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n1, n2 = a.shape
    n3 = b.shape[1]
    out = np.full((n1, n3), -np.inf)
    for i in range(n1):
        for j in range(n3):
            best = -np.inf
            for t in range(n2):
                if np.isneginf(a[i, t]) or np.isneginf(b[t, j]):
                    continue
                s = a[i, t] + b[t, j]
                if s > best:
                    best = s
            out[i, j] = best
    return out


def oracle_max_witness(a, b) -> np.ndarray:
    """Largest common index per pair, by weighting indices and maximizing."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    t = a[:, :, None] & b[None, :, :]
    idx = np.arange(1, a.shape[1] + 1, dtype=np.int64)
    return (t * idx[None, :, None]).max(axis=1, initial=0)


def oracle_top_k_witnesses(a, b, k: int) -> list[list[list[int]]]:
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    out = []
    for i in range(a.shape[0]):
        row = []
        for j in range(b.shape[1]):
            ks = [t + 1 for t in range(a.shape[1]) if a[i, t] and b[t, j]]
            row.append(sorted(ks, reverse=True)[:k])
        out.append(row)
    return out


def oracle_interval_witness(a, b, weights, interval) -> np.ndarray:
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    weights = np.asarray(weights, dtype=np.float64)
    n1, n3 = a.shape[0], b.shape[1]
    lo = np.broadcast_to(np.asarray(interval[0], dtype=np.float64), (n1, n3))
    hi = np.broadcast_to(np.asarray(interval[1], dtype=np.float64), (n1, n3))
    out = np.zeros((n1, n3), dtype=bool)
    for i in range(n1):
        for j in range(n3):
            out[i, j] = any(a[i, t] and b[t, j]
                            and lo[i, j] <= weights[t] <= hi[i, j]
                            for t in range(a.shape[1]))
    return out


def enumerate_triangles(g: Graph, max_n: int | None = None
                        ) -> list[tuple[int, int, int]]:
    return list(enumerate_cliques(g, 3, max_n))


def oracle_k2k(g: Graph, k: int,
               max_n: int | None = None) -> SubgraphResult | None:
    """Heaviest complete bipartite {i,j} x k common neighbors."""
    _check_cap(g, max_n)
    best = None
    for i, j in itertools.combinations(range(1, g.n + 1), 2):
        common = sorted(g.neighbors(i) & g.neighbors(j))
        if len(common) < k:
            continue
        for side in itertools.combinations(common, k):
            res = clique_result(g, (i, j) + side, kind="k2k")
            best = better_result(best, res)
    return best


def oracle_edge_cover_number(g: Graph, k: int, max_n: int | None = None) -> int:
    """max over k-cliques of |edges touching the clique|; 0 if none."""
    _check_cap(g, max_n)
    best = 0
    for vs in enumerate_cliques(g, k, max_n):
        sv = set(vs)
        cnt = sum(1 for u, v in g.edges if u in sv or v in sv)
        best = max(best, cnt)
    return best


def oracle_densest_k(g: Graph, k: int,
                     max_n: int | None = None) -> SubgraphResult | None:
    _check_cap(g, max_n)
    best = None
    for vs in itertools.combinations(range(1, g.n + 1), k):
        res = clique_result(g, vs, kind="dense-set", weight_from="edges")
        best = better_result(best, res)
    return best


def oracle_heaviest_clique_edges(g: Graph, h: int,
                                 max_n: int | None = None) -> SubgraphResult | None:
    """Heaviest K_h by total induced edge weight."""
    best = None
    for vs in enumerate_cliques(g, h, max_n):
        best = better_result(best,
                             clique_result(g, vs, weight_from="edges"))
    return best


def _colorful(coloring: VertexColoring, vs) -> bool:
    cs = [coloring.color(v) for v in vs]
    return len(set(cs)) == len(cs)


def oracle_colorful_k_cycle(g: Graph, coloring: VertexColoring, k: int,
                            max_n: int | None = None) -> SubgraphResult | None:
    best = None
    for res in enumerate_k_cycles(g, k, max_n):
        if _colorful(coloring, res.vertices):
            best = better_result(best, res)
    return best


def oracle_colorful_cycle_through(g: Graph, coloring: VertexColoring,
                                  u: int, k: int,
                                  max_n: int | None = None) -> SubgraphResult | None:
    best = None
    for res in enumerate_k_cycles(g, k, max_n):
        if u in res.vertices and _colorful(coloring, res.vertices):
            best = better_result(best, res)
    return best


def oracle_colorful_paths(g: Graph, coloring: VertexColoring, k: int,
                          max_n: int | None = None) -> dict:
    """Per ordered pair (u, v), heaviest simple colorful path on k vertices."""
    _check_cap(g, max_n)
    best: dict[tuple[int, int], float] = {}

    def extend(path, weight):
        if len(path) == k:
            key = (path[0], path[-1])
            if key not in best or weight > best[key]:
                best[key] = weight
            return
        for nxt in sorted(g.neighbors(path[-1])):
            if nxt in path:
                continue
            if any(coloring.color(nxt) == coloring.color(p) for p in path):
                continue
            w = g.edge_weight[(min(path[-1], nxt), max(path[-1], nxt))]
            extend(path + (nxt,), weight + w)

    for v in range(1, g.n + 1):
        extend((v,), 0.0)
    return best


def oracle_rainbow_clique(g: Graph, h: int,
                          max_n: int | None = None) -> SubgraphResult | None:
    """First h-clique whose edge colors are pairwise distinct."""
    _check_cap(g, max_n)
    if g.edge_color is None:
        raise ValueError("graph has no edge colors")
    for vs in enumerate_cliques(g, h, max_n):
        cols = [g.edge_color[e] for e in itertools.combinations(vs, 2)]
        if len(set(cols)) == len(cols):
            weight = 0.0 if g.edge_weight is None else g.induced_edge_weight(vs)
            return SubgraphResult(tuple(vs), weight, "clique")
    return None


def oracle_mono_clique(g: Graph, h: int,
                       max_n: int | None = None) -> SubgraphResult | None:
    """First h-clique with all edges the same color."""
    _check_cap(g, max_n)
    if g.edge_color is None:
        raise ValueError("graph has no edge colors")
    for vs in enumerate_cliques(g, h, max_n):
        cols = {g.edge_color[e] for e in itertools.combinations(vs, 2)}
        if len(cols) == 1:
            weight = 0.0 if g.edge_weight is None else g.induced_edge_weight(vs)
            return SubgraphResult(tuple(vs), weight, "clique")
    return None


def oracle_transaction_matrices(inst) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(C, P, R) straight from the definition."""
    n = len(inst.buyers)
    c = np.zeros((n, n), dtype=np.int64)
    p = np.zeros((n, n))
    r = np.zeros((n, n))
    for i, buyer in enumerate(inst.buyers):
        for j, seller in enumerate(inst.sellers):
            for item in sorted(set(buyer.items) & set(seller.items)):
                if buyer.items[item] >= seller.items[item]:
                    c[i, j] += 1
                    p[i, j] += buyer.items[item]
                    r[i, j] += seller.items[item]
    return c, p, r


def oracle_stable_matching(inst, prefs) -> dict[int, int]:
    """Deferred acceptance over explicitly materialized preference lists."""
    c, p, r = oracle_transaction_matrices(inst)
    n = len(inst.buyers)
    buyer_lists = []
    for i in range(n):
        scored = [(-prefs.buyer_value(i + 1, p[i, j], r[i, j], int(c[i, j])), j)
                  for j in range(n)]
        buyer_lists.append([j for _, j in sorted(scored)])
    seller_rank = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        scored = [(-prefs.seller_value(j + 1, p[i, j], r[i, j], int(c[i, j])), i)
                  for i in range(n)]
        for rank, (_, i) in enumerate(sorted(scored)):
            seller_rank[j, i] = rank
    next_prop = [0] * n
    holds: dict[int, int] = {}
    free = list(range(n - 1, -1, -1))
    while free:
        i = free.pop()
        j = buyer_lists[i][next_prop[i]]
        next_prop[i] += 1
        if j not in holds:
            holds[j] = i
        elif seller_rank[j, i] < seller_rank[j, holds[j]]:
            free.append(holds[j])
            holds[j] = i
        else:
            free.append(i)
    return {i + 1: j + 1 for j, i in holds.items()}
