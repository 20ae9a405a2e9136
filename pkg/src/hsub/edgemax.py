"""Search routines for real edge-weighted graphs.

Heaviest k-cycles by color-coded trials (a degree-split scheme for sparse
graphs and a recursive color-split path table for dense ones), the heaviest
complete h-subgraph through a max-plus product of subset matrices, and the
densest k-subgraph as its filter-free variant.

Randomized completeness: each trial colors vertices independently and
uniformly, so a fixed optimal cycle becomes colorful with probability
k!/k^k > e^-k; auto plans take ceil(e^k ln(1/delta)) trials to push the
miss probability below delta.  Soundness never depends on the coloring:
every returned cycle is validated and canonically re-summed.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .graphs import (Graph, SubgraphResult, VertexColoring, better_result,
                     clique_result, cycle_result, random_vertex_coloring)
from .matrices import max_plus_product


def _require_edge_weights(g: Graph) -> None:
    if g.edge_weight is None:
        raise ValueError("graph has no edge weights")


def _ew(g: Graph, u: int, v: int) -> float:
    return g.edge_weight[(u, v) if u < v else (v, u)]


# -- trial plans --------------------------------------------------------------

@dataclass(frozen=True)
class ColorTrialPlan:
    """How many independent coloring trials to run and how to seed them."""

    k: int
    trials: int
    failure_bound: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0.0 < self.failure_bound < 1.0:
            raise ValueError("failure bound must lie in (0, 1)")

    @classmethod
    def auto(cls, k: int, failure_bound: float = 0.01,
             seed: int = 0) -> "ColorTrialPlan":
        trials = math.ceil(math.exp(k) * math.log(1.0 / failure_bound))
        return cls(k, trials, failure_bound, seed)

    def colorings(self, n: int) -> list[VertexColoring]:
        """Per-trial colorings from seeds split off the master seed."""
        children = np.random.SeedSequence(self.seed).spawn(self.trials)
        return [random_vertex_coloring(n, self.k, seed=c) for c in children]


# -- single-source colorful cycle ---------------------------------------------

def colorful_cycle_through(g: Graph, coloring: VertexColoring,
                           u: int) -> SubgraphResult | None:
    """Heaviest cycle through u whose k vertices carry k distinct colors.

    Runs one layered pass per permutation of the remaining colors, keeping
    per vertex the heaviest path from u consistent with the color sequence,
    then closes back to u over the final layer.
    """
    _require_edge_weights(g)
    k = coloring.k
    if k < 3 or not 1 <= u <= g.n:
        return None
    cu = coloring.color(u)
    rest = [c for c in range(1, k + 1) if c != cu]
    best = None
    for perm in itertools.permutations(rest):
        layer = {u: (0.0, (u,))}
        for col in perm:
            nxt: dict[int, tuple[float, tuple[int, ...]]] = {}
            for v, (wv, path) in layer.items():
                for x in g.neighbors(v):
                    if coloring.color(x) != col:
                        continue
                    cand = wv + _ew(g, v, x)
                    if x not in nxt or cand > nxt[x][0]:
                        nxt[x] = (cand, path + (x,))
            layer = nxt
            if not layer:
                break
        for v, (_, path) in layer.items():
            if g.adjacent(v, u):
                best = better_result(best, cycle_result(g, path))
    return best


# -- batched layered products -------------------------------------------------

def _batch_max_plus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # a: (t, r, n); b: (n, n) shared or (t, n, n) per trial
    t, r, n = a.shape
    out = np.full((t, r, b.shape[-1]), -np.inf)
    for x in range(n):
        left = a[:, :, x][:, :, None]
        right = b[None, None, x, :] if b.ndim == 2 else b[:, None, x, :]
        np.maximum(out, left + right, out=out)
    return out


def _color_masked(w: np.ndarray, colors: np.ndarray, col: int) -> np.ndarray:
    # zero out (to -inf) columns whose per-trial color differs from col
    return np.where((colors == col)[:, None, :], w[None, :, :], -np.inf)


def _note_candidates(vals: np.ndarray, state: dict, tag) -> None:
    """Fold per-(trial, slot) values into the running argmax candidate set."""
    top = vals.max() if vals.size else -np.inf
    if not np.isfinite(top) or top < state["value"]:
        return
    if top > state["value"]:
        state["value"] = top
        state["cands"] = set()
    for t, slot in np.argwhere(vals == top):
        state["cands"].add((int(t), tag, int(slot)))


# -- sparse heaviest k-cycle --------------------------------------------------

def heaviest_k_cycle_sparse(g: Graph, k: int,
                            plan: ColorTrialPlan | None = None
                            ) -> SubgraphResult | None:
    """Heaviest cycle on k vertices via degree-split color trials.

    Per trial: every cycle through a vertex of degree >= m^(2/k) is caught
    by the single-source pass; cycles confined to low-degree vertices are
    assembled from two color-consecutive half paths joined at both ends.
    """
    _require_edge_weights(g)
    if k < 3:
        raise ValueError("k must be at least 3")
    m = len(g.edges)
    if m == 0 or g.n < k:
        return None
    if plan is None:
        plan = ColorTrialPlan.auto(k)
    if plan.k != k:
        raise ValueError("plan was built for a different k")

    colorings = plan.colorings(g.n)
    trials = len(colorings)
    colors = np.array([c.colors for c in colorings])
    w = g.edge_weight_matrix()
    delta = m ** (2.0 / k)
    high = [v for v in range(1, g.n + 1) if g.degree(v) >= delta]
    low = [v for v in range(1, g.n + 1) if g.degree(v) < delta]
    state = {"value": -np.inf, "cands": set()}

    if high:
        # w_back[i, v] closes a path ending at v to the i-th anchor
        w_back = w[:, high].T
        for c in range(1, k + 1):
            starts = np.full((trials, len(high), g.n + 1), -np.inf)
            for i, u in enumerate(high):
                hit = colors[:, u] == c
                starts[hit, i, u] = 0.0
            for rest in itertools.permutations(
                    [x for x in range(1, k + 1) if x != c]):
                layers = starts
                for col in rest:
                    layers = _batch_max_plus(layers,
                                             _color_masked(w, colors, col))
                close = (layers + w_back[None, :, :]).max(axis=2)
                _note_candidates(close, state, "full")

    sub = back = None
    if len(low) >= k:
        sub, back = g.induced(low)
        if sub.edges:
            ws = sub.edge_weight_matrix()
            order = np.array([0] + [back[i] for i in range(1, sub.n + 1)])
            subcol = colors[:, order]
            subcol[:, 0] = 0
            half = (k + 1) // 2

            def diag_of(col: int) -> np.ndarray:
                d = np.full((trials, sub.n + 1, sub.n + 1), -np.inf)
                for t, v in np.argwhere(subcol == col):
                    d[t, v, v] = 0.0
                return d

            eye = diag_of(1)
            for rest in itertools.permutations(range(2, k + 1)):
                seq = (1,) + rest
                f1 = eye
                for col in seq[1:half + 1]:
                    f1 = _batch_max_plus(f1, _color_masked(ws, subcol, col))
                f2 = diag_of(seq[half])  # junction color back to color 1
                for col in (*seq[half + 1:], 1):
                    f2 = _batch_max_plus(f2, _color_masked(ws, subcol, col))
                # f1[t,u,v] tracks u->v; f2[t,v,u] tracks v->u; join both
                joined = f1 + np.swapaxes(f2, 1, 2)
                _note_candidates(joined.max(axis=2), state, "low")

    if not state["cands"]:
        return None
    best = None
    for t, tag, slot in sorted(state["cands"]):
        if tag == "full":
            found = colorful_cycle_through(g, colorings[t], high[slot])
        else:
            found = colorful_cycle_through(
                sub, VertexColoring(k, tuple(int(x) for x in subcol[t])),
                slot)
            if found is not None:
                found = cycle_result(g, tuple(back[v]
                                              for v in found.vertices))
        best = better_result(best, found)
    return best


# -- recursive color-split path tables ----------------------------------------

def _splits(colors: frozenset[int]) -> list[tuple[frozenset, frozenset]]:
    take = (len(colors) + 1) // 2
    out = []
    for left in itertools.combinations(sorted(colors), take):
        out.append((frozenset(left), colors - frozenset(left)))
    return out


class PathTable:
    """Heaviest colorful k-vertex path weights for every ordered pair.

    ``entry(u, v)`` is the best weight (``-inf`` when no such path exists);
    ``reconstruct(u, v)`` rebuilds one maximum path by walking the split
    recursion back down through the stored per-color-set tables.
    """

    def __init__(self, g: Graph, coloring: VertexColoring, k: int,
                 memo: dict[frozenset, np.ndarray], w: np.ndarray):
        self.g = g
        self.coloring = coloring
        self.k = k
        self._memo = memo
        self._w = w
        self.weights = memo[frozenset(range(1, k + 1))]

    def entry(self, u: int, v: int) -> float:
        return float(self.weights[u, v])

    def reconstruct(self, u: int, v: int) -> tuple[int, ...] | None:
        full = frozenset(range(1, self.k + 1))
        if not np.isfinite(self.weights[u, v]):
            return None
        return self._walk(full, u, v)

    def _walk(self, colors: frozenset, u: int, v: int) -> tuple[int, ...]:
        memo, w = self._memo, self._w
        target = memo[colors][u, v]
        if len(colors) == 1:
            return (u,)
        n = self.g.n
        for left, right in _splits(colors):
            t1, t2 = memo[left], memo[right]
            for x in range(1, n + 1):
                if not np.isfinite(t1[u, x]):
                    continue
                for y in range(1, n + 1):
                    # same association the product kernels used
                    if (t1[u, x] + w[x, y]) + t2[y, v] == target:
                        return self._walk(left, u, x) + self._walk(right,
                                                                   y, v)
        raise AssertionError("table entry lost its witness")


def all_pairs_heaviest_k_path(g: Graph, coloring: VertexColoring,
                              k: int) -> PathTable:
    """Table of heaviest colorful paths on exactly k vertices.

    Recursively halves the active color set; child tables combine through
    two max-plus products with the edge-weight matrix.
    """
    _require_edge_weights(g)
    if k < 1:
        raise ValueError("k must be positive")
    if coloring.k != k:
        raise ValueError("coloring does not use exactly k colors")
    w = g.edge_weight_matrix()
    memo: dict[frozenset, np.ndarray] = {}

    def table(colors: frozenset) -> np.ndarray:
        if colors in memo:
            return memo[colors]
        if len(colors) == 1:
            (c,) = colors
            t = np.full((g.n + 1, g.n + 1), -np.inf)
            for v in range(1, g.n + 1):
                if coloring.color(v) == c:
                    t[v, v] = 0.0
        else:
            t = np.full((g.n + 1, g.n + 1), -np.inf)
            for left, right in _splits(colors):
                step = max_plus_product(max_plus_product(table(left), w),
                                        table(right))
                np.maximum(t, step, out=t)
        memo[colors] = t
        return t

    table(frozenset(range(1, k + 1)))
    return PathTable(g, coloring, k, memo, w)


def heaviest_k_cycle_dense(g: Graph, k: int,
                           plan: ColorTrialPlan | None = None
                           ) -> SubgraphResult | None:
    """Heaviest cycle on k vertices: per trial, close the all-pairs colorful
    path table over the edges; exact soundness, completeness >= 1 - delta."""
    _require_edge_weights(g)
    if k < 3:
        raise ValueError("k must be at least 3")
    if g.n < k or not g.edges:
        return None
    if plan is None:
        plan = ColorTrialPlan.auto(k)
    if plan.k != k:
        raise ValueError("plan was built for a different k")

    colorings = plan.colorings(g.n)
    trials = len(colorings)
    colors = np.array([c.colors for c in colorings])
    w = g.edge_weight_matrix()
    n1 = g.n + 1
    memo: dict[frozenset, np.ndarray] = {}

    def table(cset: frozenset) -> np.ndarray:
        if cset in memo:
            return memo[cset]
        if len(cset) == 1:
            (c,) = cset
            t = np.full((trials, n1, n1), -np.inf)
            for ti, v in np.argwhere(colors == c):
                if v > 0:
                    t[ti, v, v] = 0.0
        else:
            t = np.full((trials, n1, n1), -np.inf)
            for left, right in _splits(cset):
                step = _batch_max_plus(_batch_max_plus(table(left), w),
                                       table(right))
                np.maximum(t, step, out=t)
        memo[cset] = t
        return t

    closed = table(frozenset(range(1, k + 1))) + w.T[None, :, :]
    per_trial = closed.reshape(trials, -1).max(axis=1)
    top = per_trial.max()
    if not np.isfinite(top):
        return None
    best = None
    for t in np.flatnonzero(per_trial == top):
        pt = all_pairs_heaviest_k_path(g, colorings[t], k)
        hits = pt.weights + w.T
        for u, v in np.argwhere(hits == top):
            path = pt.reconstruct(int(u), int(v))
            best = better_result(best, cycle_result(g, path))
    return best


# -- heaviest complete h-subgraph by edge weight ------------------------------

def _subsets(g: Graph, size: int, cliques_only: bool) -> list[tuple[int, ...]]:
    subs = itertools.combinations(range(1, g.n + 1), size)
    if cliques_only:
        return [s for s in subs if g.is_clique(s)]
    return list(subs)


def _cross_edges(g: Graph, us, vs, present_only: bool) -> list | None:
    out = []
    for x in us:
        for y in vs:
            if g.adjacent(x, y):
                out.append((x, y))
            elif not present_only:
                return None
    return out


def _distance_product_best(g: Graph, sizes: tuple[int, int, int],
                           cliques_only: bool, kind: str
                           ) -> SubgraphResult | None:
    a, b, c = sizes
    sa = _subsets(g, a, cliques_only)
    sb = _subsets(g, b, cliques_only)
    sc = sa if c == a else _subsets(g, c, cliques_only)
    if not (sa and sb and sc):
        return None

    left = np.full((len(sa), len(sb)), -np.inf)
    for i, us in enumerate(sa):
        for j, vs in enumerate(sb):
            if set(us) & set(vs):
                continue
            cross = _cross_edges(g, us, vs, not cliques_only)
            if cross is None:
                continue
            left[i, j] = g.induced_edge_weight(us + vs)
    # right entries count only edges with an endpoint in the third block
    right = np.full((len(sb), len(sc)), -np.inf)
    for j, vs in enumerate(sb):
        for l, ts in enumerate(sc):
            if set(vs) & set(ts):
                continue
            cross = _cross_edges(g, vs, ts, not cliques_only)
            if cross is None:
                continue
            inner = [(x, y) for x, y in itertools.combinations(sorted(ts), 2)
                     if g.adjacent(x, y)]
            right[j, l] = g.edge_set_weight(cross + inner)
    through = max_plus_product(left, right)

    best = None
    top = -np.inf
    hits: list[tuple[int, int, float]] = []
    for i, us in enumerate(sa):
        for l, ts in enumerate(sc):
            if not np.isfinite(through[i, l]) or set(us) & set(ts):
                continue
            cross = _cross_edges(g, us, ts, not cliques_only)
            if cross is None:
                continue
            total = g.edge_set_weight(cross) + through[i, l]
            if total > top:
                top, hits = total, [(i, l, through[i, l])]
            elif total == top:
                hits.append((i, l, through[i, l]))
    for i, l, mid_val in hits:
        for j, vs in enumerate(sb):
            if left[i, j] + right[j, l] == mid_val:
                res = clique_result(g, sa[i] + vs + sc[l], kind=kind,
                                    weight_from="edges")
                best = better_result(best, res)
                break
    return best


def heaviest_subgraph_distance_product(g: Graph, h: int,
                                       split: tuple[int, int, int] | None
                                       = None) -> SubgraphResult | None:
    """Heaviest complete h-vertex subgraph by total edge weight.

    Subsets of the split sizes index two matrices: one carrying the full
    induced weight of its pair, the other only the edges touching the third
    block; their max-plus product plus the remaining cross weight covers
    each K_h edge exactly once.
    """
    _require_edge_weights(g)
    if h < 3:
        raise ValueError("h must be at least 3")
    if split is None:
        split = (1, h - 2, 1)
    a, b, c = split
    if min(a, b, c) < 1 or a + b + c != h:
        raise ValueError(f"invalid split {split} for h={h}")
    return _distance_product_best(g, split, cliques_only=True, kind="clique")


def densest_k_subgraph(g: Graph, k: int) -> SubgraphResult:
    """k vertices maximizing total induced edge weight (absent edges add
    nothing); the clique pipeline with the completeness tests removed."""
    _require_edge_weights(g)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > g.n:
        raise ValueError(f"k={k} exceeds the vertex count {g.n}")
    if k == 2:
        best = None
        for u, v in itertools.combinations(range(1, g.n + 1), 2):
            best = better_result(best, clique_result(
                g, (u, v), kind="dense-set", weight_from="edges"))
        return best
    found = _distance_product_best(g, (1, k - 2, 1), cliques_only=False,
                                   kind="dense-set")
    assert found is not None
    return found
