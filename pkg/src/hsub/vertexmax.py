"""Search routines for real vertex-weighted graphs.

Covers all-pairs heaviest clique and pattern completion, four strategies for
the heaviest triangle (threshold search, randomized descent, degree split,
and the all-pairs reduction), uniform triangle sampling from a weight window,
heaviest K(2,k), and the clique edge-cover score.

Weight-window tests compare rounded linear forms (w[i] - K against
-w[j] - w[k]); with weights differing by more than a few ulps, as in any
sampled instance, these agree with the canonical recomputed sums.  Returned
results always carry canonically recomputed weights.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dominance import DominanceParams, dominance_matrix
from .graphs import Graph, SubgraphResult, better_result, clique_result
from .matrices import BoolMatrix, count_product
from .witness import PlanParameters, max_witness_product, plan_parameters, top_k_witnesses

ALL_PAIRS_H_CAP = 6


def _vertex_result(g: Graph, vs, kind: str) -> SubgraphResult:
    vs = tuple(sorted(vs))
    return SubgraphResult(vs, g.vertex_set_weight(vs), kind)


# -- adjacency systems -------------------------------------------------------

@dataclass(frozen=True)
class AdjacencySystem:
    """0-1 matrix over weight-sorted vertex subsets.

    Entry [U, U'] is 1 exactly when U and U' are disjoint, both induce
    cliques, and every cross pair is an edge, i.e. their union induces a
    complete subgraph on a+b vertices.
    """

    a: int
    b: int
    row_index: tuple[tuple[int, ...], ...]
    col_index: tuple[tuple[int, ...], ...]
    matrix: BoolMatrix


class _SubsetTable:
    """All x-subsets sorted by total weight, with bitmask accelerators."""

    def __init__(self, g: Graph, x: int):
        nbr_mask = [0] * (g.n + 1)
        for u, v in g.edges:
            nbr_mask[u] |= 1 << v
            nbr_mask[v] |= 1 << u
        subs = sorted(itertools.combinations(range(1, g.n + 1), x),
                      key=lambda s: (g.vertex_set_weight(s), s))
        self.subsets = tuple(subs)
        self.mask = []
        self.common = []
        self.clique = []
        for s in subs:
            m = 0
            c = -1
            for v in s:
                m |= 1 << v
                c &= nbr_mask[v]
            self.mask.append(m)
            self.common.append(c)
            self.clique.append(all(m & ~nbr_mask[v] & ~(1 << v) == 0
                                   for v in s))

    def completes(self, i: int, other: "_SubsetTable", j: int) -> bool:
        """Union of subset i with other's subset j induces a clique."""
        return (self.clique[i] and other.clique[j]
                and other.mask[j] & ~self.common[i] == 0)


def _pair_matrix(rows: _SubsetTable, cols: _SubsetTable) -> np.ndarray:
    dense = np.zeros((len(rows.subsets), len(cols.subsets)), dtype=bool)
    for i in range(len(rows.subsets)):
        for j in range(len(cols.subsets)):
            dense[i, j] = rows.completes(i, cols, j)
    return dense


def adjacency_system(g: Graph, a: int, b: int) -> AdjacencySystem:
    rows = _SubsetTable(g, a)
    cols = _SubsetTable(g, b)
    return AdjacencySystem(a, b, rows.subsets, cols.subsets,
                           BoolMatrix.from_dense(_pair_matrix(rows, cols)))


# -- all-pairs heaviest clique ----------------------------------------------

@dataclass(frozen=True)
class AllPairsBest:
    """Per vertex pair, the heaviest found subgraph covering the pair."""

    n: int
    h: int
    table: dict[tuple[int, int], SubgraphResult]

    def best(self, u: int, v: int) -> SubgraphResult | None:
        return self.table.get((min(u, v), max(u, v)))

    def global_best(self) -> SubgraphResult | None:
        out = None
        for res in self.table.values():
            out = better_result(out, res)
        return out


def all_pairs_max_clique(g: Graph, h: int,
                         plan: PlanParameters | None = None,
                         omega: float = 3.0,
                         h_cap: int = ALL_PAIRS_H_CAP) -> AllPairsBest:
    """For every vertex pair, a heaviest complete h-vertex subgraph
    containing both, found through a maximum-witness product of two
    adjacency systems."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    if not 3 <= h <= h_cap:
        raise ValueError(f"h must lie in [3, {h_cap}]")
    if plan is None:
        plan = plan_parameters(omega, h)
    a, b, c = plan.abc
    ta = _SubsetTable(g, a)
    tb = _SubsetTable(g, b)
    tc = ta if c == a else _SubsetTable(g, c)
    width = plan.bucket_width(g.n, len(tb.subsets))
    wit = max_witness_product(_pair_matrix(ta, tb), _pair_matrix(tb, tc),
                              width)
    table: dict[tuple[int, int], SubgraphResult] = {}
    for i, j in np.argwhere(wit.indices > 0):
        if not ta.completes(i, tc, j):
            continue
        outer = ta.subsets[i] + tc.subsets[j]
        res = clique_result(g, outer + tb.subsets[wit.indices[i, j] - 1])
        for u, v in itertools.combinations(sorted(outer), 2):
            key = (u, v)
            table[key] = better_result(table.get(key), res)
    return AllPairsBest(g.n, h, table)


# -- all-pairs heaviest pattern ----------------------------------------------

class _TupleTable:
    """Ordered vertex tuples matching a block of pattern labels."""

    def __init__(self, g: Graph, pattern: Graph, labels: range):
        self.labels = tuple(labels)
        tups = [t for t in itertools.permutations(range(1, g.n + 1),
                                                  len(self.labels))
                if self._internal_ok(g, pattern, t)]
        tups.sort(key=lambda t: (g.vertex_set_weight(t), t))
        self.tuples = tuple(tups)

    def _internal_ok(self, g: Graph, pattern: Graph, t) -> bool:
        lab = self.labels
        return all(g.adjacent(t[x], t[y]) == pattern.adjacent(lab[x], lab[y])
                   for x, y in itertools.combinations(range(len(t)), 2))


def _cross_ok(g: Graph, pattern: Graph, t1, lab1, t2, lab2) -> bool:
    if set(t1) & set(t2):
        return False
    for x, vx in zip(lab1, t1):
        for y, vy in zip(lab2, t2):
            if g.adjacent(vx, vy) != pattern.adjacent(x, y):
                return False
    return True


def _pattern_pass(g: Graph, pattern: Graph, perm: tuple[int, ...],
                  plan: PlanParameters,
                  table: dict[tuple[int, int], SubgraphResult]) -> None:
    # perm maps block position -> original pattern label
    h = pattern.n
    a, b, c = plan.abc
    relabeled = Graph.build(
        h,
        [(x, y) for x, y in itertools.combinations(range(1, h + 1), 2)
         if pattern.adjacent(perm[x - 1], perm[y - 1])])
    ra = _TupleTable(g, relabeled, range(1, a + 1))
    rb = _TupleTable(g, relabeled, range(a + 1, a + b + 1))
    rc = _TupleTable(g, relabeled, range(a + b + 1, h + 1))
    if not (ra.tuples and rb.tuples and rc.tuples):
        return
    left = np.zeros((len(ra.tuples), len(rb.tuples)), dtype=bool)
    for i, t1 in enumerate(ra.tuples):
        for j, t2 in enumerate(rb.tuples):
            left[i, j] = _cross_ok(g, relabeled, t1, ra.labels, t2, rb.labels)
    right = np.zeros((len(rb.tuples), len(rc.tuples)), dtype=bool)
    for i, t1 in enumerate(rb.tuples):
        for j, t2 in enumerate(rc.tuples):
            right[i, j] = _cross_ok(g, relabeled, t1, rb.labels, t2, rc.labels)
    width = plan.bucket_width(g.n, len(rb.tuples))
    wit = max_witness_product(left, right, width)
    for i, j in np.argwhere(wit.indices > 0):
        t1, t3 = ra.tuples[i], rc.tuples[j]
        if not _cross_ok(g, relabeled, t1, ra.labels, t3, rc.labels):
            continue
        t2 = rb.tuples[wit.indices[i, j] - 1]
        res = _vertex_result(g, t1 + t2 + t3, "pattern")
        for u, v in itertools.combinations(sorted(t1 + t3), 2):
            table[(u, v)] = better_result(table.get((u, v)), res)


def all_pairs_max_pattern(g: Graph, pattern: Graph,
                          plan: PlanParameters | None = None,
                          omega: float = 3.0,
                          h_cap: int = ALL_PAIRS_H_CAP) -> AllPairsBest:
    """All-pairs heaviest induced copy of an arbitrary labeled pattern.

    One witness pass fixes which labels sit in the outer index blocks, so
    the pass is repeated under relabelings that bring every label pair into
    the outer blocks at least once.
    """
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    h = pattern.n
    if not 3 <= h <= h_cap:
        raise ValueError(f"pattern order must lie in [3, {h_cap}]")
    if plan is None:
        plan = plan_parameters(omega, h)
    table: dict[tuple[int, int], SubgraphResult] = {}
    for i, j in itertools.combinations(range(1, h + 1), 2):
        rest = [x for x in range(1, h + 1) if x not in (i, j)]
        perm = (i, *rest, j)  # i -> block position 1, j -> position h
        _pattern_pass(g, pattern, perm, plan, table)
    return AllPairsBest(g.n, h, table)


# -- triangle weight-window counting -----------------------------------------

class _TriangleCounts:
    """Per ordered vertex pair, counts of completing third vertices by
    weight window, computed through dominance products."""

    def __init__(self, g: Graph, weights: np.ndarray | None = None,
                 params: DominanceParams | None = None):
        self.g = g
        self.adj = g.adjacency_matrix()[1:, 1:]
        self.w = (g.weight_vector() if weights is None else weights)[1:]
        self.params = params
        self.pair_total = count_product(self.adj, self.adj)

    def le_count(self, k: float, strict: bool = False) -> np.ndarray:
        """[i,j] -> number of common neighbors t with w^T(i,j,t) <= k."""
        if np.isposinf(k):
            return self.pair_total.copy()
        if np.isneginf(k):
            return np.zeros_like(self.pair_total)
        left = np.where(self.adj, self.w[:, None] - k, np.inf)
        right = np.where(self.adj, -self.w[:, None] - self.w[None, :],
                         -np.inf)
        return dominance_matrix(left, right, self.params, strict=strict)

    def window(self, w1: float, w2: float) -> np.ndarray:
        """Counts for the closed weight window [w1, w2], edges only."""
        f = self.le_count(w2) - self.le_count(w1, strict=True)
        return np.where(self.adj, f, 0)

    def above(self, k: float) -> np.ndarray:
        """Strictly-above-k counts, edges only."""
        f = self.pair_total - self.le_count(k)
        return np.where(self.adj, f, 0)

    def in_window(self, i: int, j: int, t: int, w1: float, w2: float,
                  lo_strict: bool = False) -> bool:
        # the exact float predicates the dominance products evaluate
        w = self.w
        rhs = -w[j] - w[t]
        if np.isneginf(w1):
            lo_ok = True
        elif lo_strict:
            lo_ok = not (w[i] - w1 <= rhs)
        else:
            lo_ok = not (w[i] - w1 < rhs)
        hi_ok = np.isposinf(w2) or (w[i] - w2 <= rhs)
        return lo_ok and hi_ok

    def completions(self, i: int, j: int, w1: float, w2: float,
                    lo_strict: bool = False) -> list[int]:
        adj = self.adj
        return [t for t in range(len(self.w))
                if adj[i, t] and adj[j, t]
                and self.in_window(i, j, t, w1, w2, lo_strict)]

    def best_through(self, i: int, j: int) -> int:
        """Heaviest completing vertex for the edge (i, j); -1 if none."""
        adj = self.adj
        cand = np.flatnonzero(adj[i] & adj[j])
        if cand.size == 0:
            return -1
        return int(cand[np.argmax(self.w[cand])])


def triangle_threshold_edge(g: Graph, k: float,
                            params: DominanceParams | None = None
                            ) -> tuple[int, int] | None:
    """Some edge lying on a triangle of total vertex weight at least k."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    if not np.isfinite(k):
        raise ValueError("threshold must be finite")
    adj = g.adjacency_matrix()[1:, 1:]
    w = g.weight_vector()[1:]
    left = np.where(adj, k - w[:, None], np.inf)
    right = np.where(adj, w[:, None] + w[None, :], -np.inf)
    dom = dominance_matrix(left, right, params)
    hits = np.argwhere((dom > 0) & adj)
    if hits.size == 0:
        return None
    i, j = hits[0]
    return (int(i) + 1, int(j) + 1)


# -- heaviest triangle, four ways --------------------------------------------

def heaviest_triangle_det(g: Graph,
                          params: DominanceParams | None = None
                          ) -> SubgraphResult | None:
    """Deterministic heaviest triangle.

    Shifts weights to be at least 1, grows a power-of-two ceiling, then
    alternates probe steps (best triangle through a witnessed edge) with
    counting bisection until no triangle beats the probe.
    """
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    w_orig = g.weight_vector()
    shift = max(0.0, 1.0 - min(w_orig[1:], default=1.0)) if g.n else 0.0
    tc = _TriangleCounts(g, weights=w_orig + shift, params=params)
    if not ((tc.pair_total > 0) & tc.adj).any():
        return None

    hi = 1.0
    while np.where(tc.adj, tc.pair_total - tc.le_count(hi, strict=True),
                   0).sum() > 0:
        hi *= 2.0
    # no triangle weighs >= hi now; probe downward from an actual triangle
    edges = np.argwhere(tc.adj & (tc.pair_total > 0))
    i, j = (int(x) for x in edges[0])
    t = tc.best_through(i, j)
    best = _vertex_result(g, (i + 1, j + 1, t + 1), "triangle")
    w0 = tc.w[i] + tc.w[j] + tc.w[t]
    while True:
        above = tc.above(w0)
        if above.sum() == 0:
            return best
        mid = (w0 + hi) / 2.0
        if w0 < mid < hi:
            ge_mid = np.where(tc.adj,
                              tc.pair_total - tc.le_count(mid, strict=True),
                              0)
            if ge_mid.sum() == 0:
                hi = mid
                continue
            above = ge_mid
        progressed = False
        for i, j in np.argwhere(above > 0):
            t = tc.best_through(int(i), int(j))
            cand = _vertex_result(g, (int(i) + 1, int(j) + 1, t + 1),
                                  "triangle")
            if cand.weight > best.weight:
                best, progressed = cand, True
                w0 = tc.w[int(i)] + tc.w[int(j)] + tc.w[t]
                break
        if not progressed:
            # counts and canonical sums disagree within an ulp; the probe
            # already holds the canonical maximum of every flagged edge
            return best


def _sample_from_counts(tc: _TriangleCounts, counts: np.ndarray,
                        rng: np.random.Generator, w1: float, w2: float,
                        lo_strict: bool = False
                        ) -> tuple[int, int, int] | None:
    total = int(counts.sum())
    if total == 0:
        return None
    flat = np.flatnonzero(counts)
    pick = flat[rng.choice(flat.size, p=counts.ravel()[flat] / total)]
    i, j = divmod(int(pick), counts.shape[1])
    options = tc.completions(i, j, w1, w2, lo_strict)
    t = options[int(rng.integers(len(options)))]
    return i, j, t


def sample_triangle(g: Graph, w1: float, w2: float, seed: int = 0,
                    params: DominanceParams | None = None
                    ) -> SubgraphResult | None:
    """Uniform draw from the triangles whose weight lies in [w1, w2].

    Picks an ordered edge with probability proportional to its count of
    in-window completions, then one completion uniformly.
    """
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    if not w1 <= w2:
        raise ValueError("empty weight window")
    tc = _TriangleCounts(g, params=params)
    rng = np.random.Generator(np.random.PCG64(seed))
    hit = _sample_from_counts(tc, tc.window(w1, w2), rng, w1, w2)
    if hit is None:
        return None
    i, j, t = hit
    return _vertex_result(g, (i + 1, j + 1, t + 1), "triangle")


def heaviest_triangle_rand(g: Graph, seed: int = 0,
                           params: DominanceParams | None = None,
                           with_stats: bool = False):
    """Randomized heaviest triangle: start from a uniform triangle, then
    repeatedly resample uniformly among strictly heavier ones."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    tc = _TriangleCounts(g, params=params)
    rng = np.random.Generator(np.random.PCG64(seed))
    ninf = -np.inf
    hit = _sample_from_counts(tc, np.where(tc.adj, tc.pair_total, 0), rng,
                              ninf, np.inf)
    if hit is None:
        return (None, {"iterations": 0}) if with_stats else None
    i, j, t = hit
    best = _vertex_result(g, (i + 1, j + 1, t + 1), "triangle")
    w0 = tc.w[i] + tc.w[j] + tc.w[t]
    iterations = 0
    stalls = 0
    while True:
        above = tc.above(w0)
        if above.sum() == 0:
            break
        if stalls >= 3:
            # counts and canonical sums disagree within an ulp; fall back
            # to scanning the flagged edges exactly
            improved = False
            for ii, jj in np.argwhere(above > 0):
                t = tc.best_through(int(ii), int(jj))
                cand = _vertex_result(g, (int(ii) + 1, int(jj) + 1, t + 1),
                                      "triangle")
                if cand.weight > best.weight:
                    best, improved = cand, True
                    w0 = tc.w[int(ii)] + tc.w[int(jj)] + tc.w[t]
                    break
            if not improved:
                break
            stalls = 0
            continue
        iterations += 1
        i, j, t = _sample_from_counts(tc, above, rng, w0, np.inf,
                                      lo_strict=True)
        cand = _vertex_result(g, (i + 1, j + 1, t + 1), "triangle")
        stalls = stalls + 1 if cand.weight <= best.weight else 0
        best = better_result(best, cand)
        w0 = tc.w[i] + tc.w[j] + tc.w[t]
    if with_stats:
        return best, {"iterations": iterations}
    return best


def heaviest_triangle_sparse(g: Graph, omega_hint: float = 3.0
                             ) -> SubgraphResult | None:
    """Heaviest triangle via a degree split: pairs around low-degree
    vertices are scanned directly, the high-degree core goes through the
    all-pairs machinery."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    m = len(g.edges)
    if m == 0:
        return None
    delta = m ** ((5.0 - omega_hint) / (13.0 - 3.0 * omega_hint))
    best = None
    core = []
    for v in range(1, g.n + 1):
        if g.degree(v) <= delta:
            for x, y in itertools.combinations(sorted(g.neighbors(v)), 2):
                if g.adjacent(x, y):
                    best = better_result(
                        best, _vertex_result(g, (v, x, y), "triangle"))
        else:
            core.append(v)
    if len(core) >= 3:
        sub, back = g.induced(core)
        found = all_pairs_max_clique(sub, 3, omega=omega_hint).global_best()
        if found is not None:
            mapped = _vertex_result(g, (back[v] for v in found.vertices),
                                    "triangle")
            best = better_result(best, mapped)
    return best


def heaviest_triangle_monotone(g: Graph, f, omega: float = 3.0
                               ) -> SubgraphResult | None:
    """Triangle maximizing a symmetric, coordinatewise-monotone function of
    the three vertex weights.  Result weight is the f-value; f is evaluated
    with weights in ascending vertex order."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    plan = plan_parameters(omega, 3)
    system = adjacency_system(g, 1, 1)
    width = plan.bucket_width(g.n, len(system.col_index))
    wit = max_witness_product(system.matrix, system.matrix, width)
    order = [u for (u,) in system.col_index]
    w = g.vertex_weight
    best = None
    for i, j in np.argwhere(wit.indices > 0):
        u, v = order[i], order[j]
        if not g.adjacent(u, v):
            continue
        t = order[wit.indices[i, j] - 1]
        vs = tuple(sorted((u, v, t)))
        val = float(f(w[vs[0]], w[vs[1]], w[vs[2]]))
        best = better_result(best, SubgraphResult(vs, val, "triangle"))
    return best


# -- heaviest complete bipartite pair-to-k -----------------------------------

def heaviest_k2k(g: Graph, k: int) -> SubgraphResult | None:
    """Heaviest K(2,k): two centers plus their k heaviest common neighbors.
    Not-necessarily-induced; centers may or may not be adjacent."""
    if g.vertex_weight is None:
        raise ValueError("graph has no vertex weights")
    if k < 1:
        raise ValueError("k must be positive")
    order = sorted(range(1, g.n + 1),
                   key=lambda v: (g.vertex_weight[v], v))
    adj = g.adjacency_matrix()[1:, 1:]
    idx = np.array(order) - 1
    sorted_adj = adj[np.ix_(idx, idx)]
    tops = top_k_witnesses(sorted_adj, sorted_adj, k)
    best = None
    for x in range(g.n):
        for y in range(x + 1, g.n):
            hits = tops[x][y]
            if len(hits) < k:
                continue
            side = tuple(order[t - 1] for t in hits)
            res = _vertex_result(g, (order[x], order[y]) + side, "k2k")
            best = better_result(best, res)
    return best


# -- clique edge-cover score --------------------------------------------------

def edge_cover_number(g: Graph, k: int, omega: float = 3.0) -> int:
    """Maximum number of edges meeting a complete k-vertex subgraph; 0 when
    the graph has none.  Found by weighting each vertex with its degree."""
    if k < 3:
        raise ValueError("k must be at least 3")
    weighted = Graph.build(
        g.n, list(g.edges),
        vertex_weight={v: float(g.degree(v)) for v in range(1, g.n + 1)})
    found = all_pairs_max_clique(weighted, k, omega=omega).global_best()
    if found is None:
        return 0
    return int(round(found.weight)) - k * (k - 1) // 2
