"""Rainbow and monochromatic clique detection in edge-colored graphs.

Rainbow search first funnels the palette down to t = C(h,2) colors (a
rainbow copy survives a random reduction with probability t!/t^t), then
splits the t target colors over the six edge classes of a three-block
clique decomposition and closes each split with one Boolean product.
Monochromatic search is fully deterministic.

Every returned subgraph is re-verified against the original coloring, so
soundness never depends on the reduction or the partition bookkeeping.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .graphs import Graph, SubgraphResult
from .matrices import count_product

RAINBOW_H_CAP = 4
MONO_H_CAP = 6
DEFAULT_FAILURE_BOUND = 0.01


def _require_colors(g: Graph) -> None:
    if g.edge_color is None:
        raise ValueError("graph has no edge colors")


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _result(g: Graph, vs) -> SubgraphResult:
    vs = tuple(sorted(vs))
    weight = 0.0 if g.edge_weight is None else g.induced_edge_weight(vs)
    return SubgraphResult(vs, weight, "clique")


def _is_rainbow(g: Graph, vs) -> bool:
    cols = [g.edge_color[e] for e in itertools.combinations(sorted(vs), 2)]
    return len(set(cols)) == len(cols)


def _is_mono(g: Graph, vs) -> bool:
    cols = {g.edge_color[e] for e in itertools.combinations(sorted(vs), 2)}
    return len(cols) == 1


# -- color reductions ----------------------------------------------------------

@dataclass(frozen=True)
class ColorReduction:
    """Map from the palette actually used down to {1..t}."""

    t: int
    mapping: Mapping[int, int]
    trials: int = 1

    def __post_init__(self):
        for c in self.mapping.values():
            if not 1 <= c <= self.t:
                raise ValueError(f"reduced color {c} outside 1..{self.t}")

    def apply(self, color: int) -> int:
        return self.mapping[color]

    @classmethod
    def identity(cls, colors, t: int) -> "ColorReduction":
        ordered = sorted(colors)
        if len(ordered) != t:
            raise ValueError("identity reduction needs exactly t colors")
        return cls(t, {c: i + 1 for i, c in enumerate(ordered)})

    @classmethod
    def random(cls, colors, t: int, rng: np.random.Generator,
               trials: int = 1) -> "ColorReduction":
        draw = rng.integers(1, t + 1, len(colors))
        return cls(t, {c: int(x) for c, x in zip(sorted(colors), draw)},
                   trials)


# -- six-class partitions ------------------------------------------------------

def _block_sizes(k: int, j: int) -> tuple[int, ...]:
    return (math.comb(k, 2), math.comb(k, 2), math.comb(k + j, 2),
            k * k, k * (k + j), k * (k + j))


@dataclass(frozen=True)
class ColorPartition:
    """Disjoint classes C1..C6 of {1..t}, one per edge class of the
    three-block decomposition K_h = K_k + K_k + K_{k+j}."""

    k: int
    j: int
    classes: tuple[frozenset, ...]

    def __post_init__(self):
        sizes = _block_sizes(self.k, self.j)
        if len(self.classes) != 6:
            raise ValueError("expected six classes")
        if tuple(len(c) for c in self.classes) != sizes:
            raise ValueError(f"class sizes must be {sizes}")
        t = sum(sizes)
        union = frozenset().union(*self.classes)
        if len(union) != t or union != frozenset(range(1, t + 1)):
            raise ValueError("classes must partition {1..t}")


def _assignments(pool: frozenset, sizes: tuple[int, ...]):
    if not sizes:
        yield ()
        return
    head, *tail = sizes
    for chosen in itertools.combinations(sorted(pool), head):
        left = frozenset(chosen)
        for rest in _assignments(pool - left, tuple(tail)):
            yield (left,) + rest


def enumerate_partitions(h: int) -> list[ColorPartition]:
    k, j = h // 3, h % 3
    t = math.comb(h, 2)
    sizes = _block_sizes(k, j)
    return [ColorPartition(k, j, classes)
            for classes in _assignments(frozenset(range(1, t + 1)), sizes)]


# -- rainbow K_h ---------------------------------------------------------------

def _exact_subsets(g: Graph, size: int, want: frozenset,
                   rcol: Mapping) -> list[tuple[int, ...]]:
    """Cliques on `size` vertices whose internal reduced colors consume
    `want` exactly."""
    out = []
    for vs in itertools.combinations(range(1, g.n + 1), size):
        if not g.is_clique(vs):
            continue
        cols = [rcol[e] for e in itertools.combinations(vs, 2)]
        if len(set(cols)) == len(cols) and set(cols) == want:
            out.append(vs)
    return out


def _cross_exact(g: Graph, us, vs, want: frozenset, rcol: Mapping) -> bool:
    if set(us) & set(vs):
        return False
    cols = []
    for x in us:
        for y in vs:
            if not g.adjacent(x, y):
                return False
            cols.append(rcol[_edge_key(x, y)])
    return len(set(cols)) == len(cols) and set(cols) == want


def _rainbow_pass(g: Graph, rcol: Mapping,
                  part: ColorPartition) -> tuple[int, ...] | None:
    c1, c2, c3, c4, c5, c6 = part.classes
    k, j = part.k, part.j
    sx = _exact_subsets(g, k, c1, rcol)
    sy = sx if c2 == c1 else _exact_subsets(g, k, c2, rcol)
    sz = _exact_subsets(g, k + j, c3, rcol)
    if not (sx and sy and sz):
        return None
    a = np.zeros((len(sx), len(sy)), dtype=bool)
    for i, us in enumerate(sx):
        for m, vs in enumerate(sy):
            a[i, m] = _cross_exact(g, us, vs, c4, rcol)
    b = np.zeros((len(sy), len(sz)), dtype=bool)
    for m, vs in enumerate(sy):
        for l, ts in enumerate(sz):
            b[m, l] = _cross_exact(g, vs, ts, c5, rcol)
    through = count_product(a, b)
    for i, l in np.argwhere(through > 0):
        us, ts = sx[i], sz[l]
        if not _cross_exact(g, us, ts, c6, rcol):
            continue
        for m, vs in enumerate(sy):
            if a[i, m] and b[m, l]:
                return us + vs + ts
    return None


def rainbow_clique(g: Graph, h: int, trials: int | None = None,
                   seed: int = 0, h_cap: int = RAINBOW_H_CAP
                   ) -> SubgraphResult | None:
    """Some h-clique whose C(h,2) edges carry pairwise distinct colors.

    With at most t = C(h,2) colors in use the search is deterministic and
    exhaustive; with more, each trial reduces the palette randomly and a
    rainbow copy survives with probability at least e^-t.
    """
    _require_colors(g)
    if h < 3:
        raise ValueError("h must be at least 3")
    if h > h_cap:
        raise ValueError(f"h={h} above the cap {h_cap}; raise h_cap to force")
    t = math.comb(h, 2)
    used = {c for c in g.edge_color.values()}
    if len(used) < t:
        return None
    parts = enumerate_partitions(h)

    def search(reduction: ColorReduction) -> SubgraphResult | None:
        rcol = {e: reduction.apply(c) for e, c in g.edge_color.items()}
        for part in parts:
            vs = _rainbow_pass(g, rcol, part)
            if vs is not None and _is_rainbow(g, vs):
                return _result(g, vs)
        return None

    if len(used) == t:
        return search(ColorReduction.identity(used, t))
    if trials is None:
        trials = math.ceil(math.exp(t) * math.log(1.0 / DEFAULT_FAILURE_BOUND))
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.Generator(np.random.PCG64(child))
        found = search(ColorReduction.random(used, t, rng, trials))
        if found is not None:
            return found
    return None


# -- monochromatic K_h ---------------------------------------------------------

def _mono_subsets(g: Graph, size: int) -> list[tuple[int, ...]]:
    out = []
    for vs in itertools.combinations(range(1, g.n + 1), size):
        if g.is_clique(vs) and (size < 2 or _is_mono(g, vs)):
            out.append(vs)
    return out


def _mono_cross(g: Graph, us, vs) -> bool:
    """Union induces a complete block carrying one color overall."""
    if set(us) & set(vs):
        return False
    both = tuple(us) + tuple(vs)
    return g.is_clique(both) and _is_mono(g, both)


def mono_triangle(g: Graph, omega_hint: float = 3.0) -> SubgraphResult | None:
    """Triangle with all three edges one color.

    Color classes with at least n^((omega+1)/2) edges go through the dense
    counting product; the rest are scanned edge by edge.
    """
    _require_colors(g)
    by_color: dict[int, list[tuple[int, int]]] = {}
    for e, c in g.edge_color.items():
        by_color.setdefault(c, []).append(e)
    heavy_at = g.n ** ((omega_hint + 1.0) / 2.0)
    for color in sorted(by_color):
        edges = sorted(by_color[color])
        if len(edges) >= heavy_at:
            adj = np.zeros((g.n + 1, g.n + 1), dtype=bool)
            for u, v in edges:
                adj[u, v] = True
                adj[v, u] = True
            pair = count_product(adj, adj)
            for u, v in np.argwhere((pair > 0) & adj):
                if u >= v:
                    continue
                w = int(np.flatnonzero(adj[u] & adj[v])[0])
                if _is_mono(g, (int(u), int(v), w)):
                    return _result(g, (int(u), int(v), w))
        else:
            nbr: dict[int, set[int]] = {}
            for u, v in edges:
                nbr.setdefault(u, set()).add(v)
                nbr.setdefault(v, set()).add(u)
            for u, v in edges:
                shared = nbr.get(u, set()) & nbr.get(v, set())
                if shared:
                    w = min(shared)
                    if _is_mono(g, (u, v, w)):
                        return _result(g, (u, v, w))
    return None


def mono_k4(g: Graph) -> SubgraphResult | None:
    """K_4 with all six edges one color: per vertex, bucket the neighbors
    by the color of their shared edge and look for a same-colored triangle
    inside each bucket."""
    _require_colors(g)
    for v in range(1, g.n + 1):
        buckets: dict[int, list[int]] = {}
        for x in sorted(g.neighbors(v)):
            buckets.setdefault(g.edge_color[_edge_key(v, x)], []).append(x)
        for color in sorted(buckets):
            members = buckets[color]
            if len(members) < 3:
                continue
            adj = np.zeros((g.n + 1, g.n + 1), dtype=bool)
            for x, y in itertools.combinations(members, 2):
                if g.adjacent(x, y) and g.edge_color[_edge_key(x, y)] == color:
                    adj[x, y] = True
                    adj[y, x] = True
            pair = count_product(adj, adj)
            for x, y in np.argwhere((pair > 0) & adj):
                if x >= y:
                    continue
                z = int(np.flatnonzero(adj[x] & adj[y])[0])
                quad = (v, int(x), int(y), z)
                if _is_mono(g, quad):
                    return _result(g, quad)
    return None


def mono_clique(g: Graph, h: int,
                h_cap: int = MONO_H_CAP) -> SubgraphResult | None:
    """h-clique with every edge the same color; deterministic and exact.

    For h of 5 or 6 the clique splits into blocks of sizes (2, 2, h-4);
    the first two blocks each contain an internal edge, which forces one
    shared color across all three pairwise block checks.
    """
    _require_colors(g)
    if h < 3:
        raise ValueError("h must be at least 3")
    if h > h_cap:
        raise ValueError(f"h={h} above the cap {h_cap}; raise h_cap to force")
    if h == 3:
        return mono_triangle(g)
    if h == 4:
        return mono_k4(g)
    p1, p2, p3 = 2, 2, h - 4
    s1 = _mono_subsets(g, p1)
    s2 = s1
    s3 = s1 if p3 == p1 else _mono_subsets(g, p3)
    if not (s1 and s3):
        return None
    a = np.zeros((len(s1), len(s2)), dtype=bool)
    for i, us in enumerate(s1):
        for m, vs in enumerate(s2):
            a[i, m] = _mono_cross(g, us, vs)
    b = np.zeros((len(s2), len(s3)), dtype=bool)
    for m, vs in enumerate(s2):
        for l, ts in enumerate(s3):
            b[m, l] = _mono_cross(g, vs, ts)
    through = count_product(a, b)
    for i, l in np.argwhere(through > 0):
        if not _mono_cross(g, s1[i], s3[l]):
            continue
        for m in range(len(s2)):
            if a[i, m] and b[m, l]:
                found = s1[i] + s2[m] + s3[l]
                if _is_mono(g, found):
                    return _result(g, found)
    return None
