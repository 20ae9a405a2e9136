"""Graph container, text format, and random instance generators.

Vertices are numbered 1..n throughout the package; index 0 is reserved to
mean "no vertex" wherever a single index doubles as an optional value.

Text format, one record per line, '#' starts a comment:

    g <n>                          header, must come first
    vw <v> <real>                  vertex weight
    e <u> <v> [<real>] [c<int>]    edge, optional weight, optional color

A bare fourth token on an edge line is also accepted as a color, so both
``e 1 2 0.5 3`` and ``e 1 2 0.5 c3`` denote edge {1,2} with weight 0.5 and
color 3.  Serialization always emits the ``c``-prefixed form and orders
vertex lines ascending and edge lines lexicographically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping

import numpy as np

ADJACENCY_TABLE_LIMIT = 4096


class GraphFormatError(ValueError):
    """Raised on malformed graph/market text, with a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected graph, optionally vertex-weighted, edge-weighted, edge-colored.

    ``edges`` is lexicographically sorted with u < v in every pair.  Weight
    and color maps, when present, are total over their domain.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    vertex_weight: Mapping[int, float] | None = None
    edge_weight: Mapping[tuple[int, int], float] | None = None
    edge_color: Mapping[tuple[int, int], int] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                raise ValueError(f"edge ({u},{v}) not normalized")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise ValueError("edges not in lexicographic order")
        for name, m, domain in (
            ("vertex_weight", self.vertex_weight, range(1, self.n + 1)),
            ("edge_weight", self.edge_weight, self.edges),
            ("edge_color", self.edge_color, self.edges),
        ):
            if m is None:
                continue
            if set(m.keys()) != set(domain):
                raise ValueError(f"{name} map must be total over its domain")
            for val in m.values():
                if isinstance(val, float) and not np.isfinite(val):
                    raise ValueError(f"{name} values must be finite")

    @staticmethod
    def build(
        n: int,
        edges: Iterable[tuple[int, int]],
        vertex_weight: Mapping[int, float] | None = None,
        edge_weight: Mapping[tuple[int, int], float] | None = None,
        edge_color: Mapping[tuple[int, int], int] | None = None,
    ) -> "Graph":
        """Normalize edge keys (sort endpoints, sort list) and construct."""
        norm = sorted(_edge_key(u, v) for u, v in edges)
        def fix(m):
            return None if m is None else {_edge_key(*k): m[k] for k in m}
        return Graph(n, tuple(norm), vertex_weight,
                     fix(edge_weight), fix(edge_color))

    # -- adjacency ---------------------------------------------------------

    @cached_property
    def _adj(self) -> np.ndarray:
        # (n+1)x(n+1) bool table; row/col 0 unused.  Kept dense up to the
        # documented limit; beyond it adjacency falls back to the sets below.
        if self.n > ADJACENCY_TABLE_LIMIT:
            return None  # type: ignore[return-value]
        a = np.zeros((self.n + 1, self.n + 1), dtype=bool)
        for u, v in self.edges:
            a[u, v] = True
            a[v, u] = True
        return a

    @cached_property
    def _nbr(self) -> tuple[frozenset, ...]:
        sets: list[set] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            sets[u].add(v)
            sets[v].add(u)
        return tuple(frozenset(s) for s in sets)

    def adjacent(self, u: int, v: int) -> bool:
        if self._adj is not None:
            return bool(self._adj[u, v])
        return v in self._nbr[u]

    def neighbors(self, v: int) -> frozenset:
        return self._nbr[v]

    def degree(self, v: int) -> int:
        return len(self._nbr[v])

    def adjacency_matrix(self) -> np.ndarray:
        """Bool (n+1)x(n+1) adjacency with row/column 0 unused."""
        if self._adj is None:
            raise ValueError("graph too large for a dense adjacency table")
        return self._adj

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = tuple(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    # -- canonical weight recomputation ------------------------------------
    # Every algorithm and every oracle reports weights through these three
    # helpers so that equal answers are bit-equal floats (same addends in
    # the same left-to-right order).

    def vertex_set_weight(self, vs: Iterable[int]) -> float:
        w = self.vertex_weight
        if w is None:
            raise ValueError("graph has no vertex weights")
        total = 0.0
        for v in sorted(vs):
            total += w[v]
        return total

    def edge_set_weight(self, edges: Iterable[tuple[int, int]]) -> float:
        w = self.edge_weight
        if w is None:
            raise ValueError("graph has no edge weights")
        total = 0.0
        for e in sorted(_edge_key(*e) for e in edges):
            total += w[e]
        return total

    def induced_edge_weight(self, vs: Iterable[int]) -> float:
        """Sum of weights of present edges inside the vertex set."""
        vs = sorted(vs)
        present = [(a, b) for a, b in itertools.combinations(vs, 2)
                   if self.adjacent(a, b)]
        return self.edge_set_weight(present)

    def weight_vector(self) -> np.ndarray:
        """Vertex weights as a float array indexed 1..n (slot 0 is NaN)."""
        if self.vertex_weight is None:
            raise ValueError("graph has no vertex weights")
        vec = np.full(self.n + 1, np.nan)
        for v in range(1, self.n + 1):
            vec[v] = self.vertex_weight[v]
        return vec

    def edge_weight_matrix(self, missing: float = -np.inf) -> np.ndarray:
        """(n+1)x(n+1) float matrix of edge weights, `missing` off-edges."""
        m = np.full((self.n + 1, self.n + 1), missing)
        ew = self.edge_weight
        for u, v in self.edges:
            w = 1.0 if ew is None else ew[(u, v)]
            m[u, v] = w
            m[v, u] = w
        return m

    def induced(self, vs: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Subgraph induced by `vs`; returns (graph, new->old vertex map)."""
        old = sorted(set(vs))
        back = {i + 1: v for i, v in enumerate(old)}
        fwd = {v: i + 1 for i, v in enumerate(old)}
        edges = [(fwd[u], fwd[v]) for u, v in self.edges
                 if u in fwd and v in fwd]
        def sub(m, keys):
            return None if m is None else {k: m[orig] for k, orig in keys}
        vw = None
        if self.vertex_weight is not None:
            vw = {fwd[v]: self.vertex_weight[v] for v in old}
        ekeys = [((fwd[u], fwd[v]), (u, v)) for u, v in self.edges
                 if u in fwd and v in fwd]
        ew = sub(self.edge_weight, ekeys)
        ec = sub(self.edge_color, ekeys)
        return Graph.build(len(old), edges, vw, ew, ec), back


@dataclass(frozen=True)
class VertexColoring:
    """Assignment of colors 1..k to vertices 1..n; colors[0] is unused."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one color")
        for c in self.colors[1:]:
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} out of range 1..{self.k}")

    def color(self, v: int) -> int:
        return self.colors[v]

    def classes(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {c: [] for c in range(1, self.k + 1)}
        for v, c in enumerate(self.colors):
            if v > 0:
                out[c].append(v)
        return out


@dataclass(frozen=True)
class SubgraphResult:
    """A found subgraph: vertex tuple, recomputed weight, and a kind tag."""

    vertices: tuple[int, ...]
    weight: float
    kind: str

    def key(self) -> tuple[float, tuple[int, ...]]:
        # Merge order: larger weight wins, then lexicographically smaller
        # vertex tuple.  Negate the tuple comparison by using it directly:
        # callers compare (weight, neg-lex) via better_result().
        return (self.weight, self.vertices)


def better_result(a: SubgraphResult | None,
                  b: SubgraphResult | None) -> SubgraphResult | None:
    """Deterministic merge: max weight, ties to the lex-smaller tuple."""
    if a is None:
        return b
    if b is None:
        return a
    if b.weight > a.weight:
        return b
    if b.weight < a.weight:
        return a
    return b if b.vertices < a.vertices else a


def clique_result(g: Graph, vs: Iterable[int], kind: str = "clique",
                  weight_from: str = "vertices") -> SubgraphResult:
    vs = tuple(sorted(vs))
    if weight_from == "vertices":
        w = g.vertex_set_weight(vs)
    elif weight_from == "edges":
        w = g.induced_edge_weight(vs)
    elif weight_from == "none":
        w = 0.0
    else:
        raise ValueError(f"unknown weight_from {weight_from!r}")
    return SubgraphResult(vs, w, kind)


def canonical_cycle(vs: tuple[int, ...]) -> tuple[int, ...]:
    """Rotate/reflect a cycle tuple: smallest vertex first, smaller neighbor
    second."""
    i = vs.index(min(vs))
    fwd = vs[i:] + vs[:i]
    rev = (fwd[0],) + tuple(reversed(fwd[1:]))
    return min(fwd, rev)


def cycle_result(g: Graph, vs: tuple[int, ...]) -> SubgraphResult:
    vs = canonical_cycle(tuple(vs))
    k = len(vs)
    edges = [(vs[i], vs[(i + 1) % k]) for i in range(k)]
    for u, v in edges:
        if not g.adjacent(u, v):
            raise ValueError(f"({u},{v}) is not an edge; not a cycle")
    if len(set(vs)) != k:
        raise ValueError("cycle revisits a vertex")
    return SubgraphResult(vs, g.edge_set_weight(edges), "cycle")


# -- text format -----------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the graph text format; raises GraphFormatError with a line number."""
    n = None
    edges: list[tuple[int, int]] = []
    edge_set: set[tuple[int, int]] = set()
    vweights: dict[int, float] = {}
    eweights: dict[tuple[int, int], float] = {}
    ecolors: dict[tuple[int, int], int] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "g" or len(tok) != 2:
                raise GraphFormatError(ln, "expected header 'g <n>'")
            try:
                n = int(tok[1])
            except ValueError:
                raise GraphFormatError(ln, f"bad vertex count {tok[1]!r}") from None
            if n < 0:
                raise GraphFormatError(ln, "vertex count must be nonnegative")
            continue
        if tok[0] == "vw":
            if len(tok) != 3:
                raise GraphFormatError(ln, "expected 'vw <v> <weight>'")
            try:
                v, w = int(tok[1]), float(tok[2])
            except ValueError:
                raise GraphFormatError(ln, "bad vertex weight record") from None
            if not 1 <= v <= n:
                raise GraphFormatError(ln, f"vertex {v} out of range")
            if v in vweights:
                raise GraphFormatError(ln, f"duplicate weight for vertex {v}")
            vweights[v] = w
            continue
        if tok[0] == "e":
            if len(tok) < 3 or len(tok) > 5:
                raise GraphFormatError(ln, "expected 'e <u> <v> [w] [c<color>]'")
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise GraphFormatError(ln, "bad edge endpoints") from None
            if u == v:
                raise GraphFormatError(ln, f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(ln, f"edge ({u},{v}) out of range")
            key = _edge_key(u, v)
            if key in edge_set:
                raise GraphFormatError(ln, f"duplicate edge ({u},{v})")
            edge_set.add(key)
            weight = None
            color = None
            for extra in tok[3:]:
                if extra.startswith("c") and extra != "c":
                    if color is not None:
                        raise GraphFormatError(ln, "two colors on one edge")
                    try:
                        color = int(extra[1:])
                    except ValueError:
                        raise GraphFormatError(ln, f"bad color {extra!r}") from None
                elif weight is None:
                    try:
                        weight = float(extra)
                    except ValueError:
                        raise GraphFormatError(ln, f"bad weight {extra!r}") from None
                else:
                    # weight already set: a bare trailing integer is a color
                    if color is not None:
                        raise GraphFormatError(ln, "two colors on one edge")
                    try:
                        color = int(extra)
                    except ValueError:
                        raise GraphFormatError(ln, f"bad color {extra!r}") from None
            edges.append(key)
            if weight is not None:
                eweights[key] = weight
            if color is not None:
                ecolors[key] = color
            continue
        raise GraphFormatError(ln, f"unknown record {tok[0]!r}")
    if n is None:
        raise GraphFormatError(1, "missing 'g <n>' header")
    # Partial maps are rejected by the Graph invariant; make absence explicit.
    if vweights and len(vweights) != n:
        missing = next(v for v in range(1, n + 1) if v not in vweights)
        raise GraphFormatError(1, f"vertex {missing} has no weight record")
    if eweights and len(eweights) != len(edges):
        raise GraphFormatError(1, "some edges have weights and some do not")
    if ecolors and len(ecolors) != len(edges):
        raise GraphFormatError(1, "some edges have colors and some do not")
    return Graph.build(n, edges,
                       vweights or None, eweights or None, ecolors or None)


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize_graph(g: Graph) -> str:
    """Canonical text: header, ascending vw lines, lexicographic e lines."""
    out = [f"g {g.n}"]
    if g.vertex_weight is not None:
        for v in range(1, g.n + 1):
            out.append(f"vw {v} {_fmt(g.vertex_weight[v])}")
    for u, v in g.edges:
        line = f"e {u} {v}"
        if g.edge_weight is not None:
            line += f" {_fmt(g.edge_weight[(u, v)])}"
        if g.edge_color is not None:
            line += f" c{g.edge_color[(u, v)]}"
        out.append(line)
    return "\n".join(out) + "\n"


# -- generators ------------------------------------------------------------

def generate_random_graph(
    n: int,
    p: float,
    weight_mode: str = "none",
    color_count: int | None = None,
    seed: int = 0,
) -> Graph:
    """G(n,p) with optional uniform[-1,1] weights and uniform edge colors.

    weight_mode: one of "none", "vertex", "edge", "both".  Draw order is
    fixed (edge indicators, vertex weights, edge weights, colors) so a seed
    pins the instance exactly.
    """
    if weight_mode not in ("none", "vertex", "edge", "both"):
        raise ValueError(f"unknown weight_mode {weight_mode!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must lie in [0,1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    draws = rng.random(len(pairs))
    edges = [pq for pq, d in zip(pairs, draws) if d < p]
    vw = None
    if weight_mode in ("vertex", "both"):
        vals = rng.uniform(-1.0, 1.0, n)
        vw = {v: float(vals[v - 1]) for v in range(1, n + 1)}
    ew = None
    if weight_mode in ("edge", "both"):
        vals = rng.uniform(-1.0, 1.0, len(edges))
        ew = {e: float(x) for e, x in zip(edges, vals)}
    ec = None
    if color_count is not None:
        if color_count < 1:
            raise ValueError("color_count must be positive")
        vals = rng.integers(1, color_count + 1, len(edges))
        ec = {e: int(c) for e, c in zip(edges, vals)}
    return Graph.build(n, edges, vw, ew, ec)


def random_vertex_coloring(n: int, k: int, seed: int = 0) -> VertexColoring:
    rng = np.random.Generator(np.random.PCG64(seed))
    cols = rng.integers(1, k + 1, n)
    return VertexColoring(k, (0,) + tuple(int(c) for c in cols))
