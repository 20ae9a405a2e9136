"""Dominance counting on real point sets, and the machinery built on it.

``dominance_matrix(P, Q)[i, j]`` counts coordinates where P_i <= Q_j (or
strictly less, with ``strict=True``).  It works by per-coordinate ranking:
ranks are cut into buckets of size s, cross-bucket coordinates are counted
with Boolean counting products, and same-bucket coordinates are patched in
by walking each coordinate's sorted order.  Ties between equal values are
broken so that the P point sorts first exactly when the non-strict relation
should count the pair, then by point index.

Thresholded distance products follow: C(K)[i,j] = 1 iff
min_k A[i,k]+B[k,j] >= K, computed as a dominance between rows of A shifted
by K and negated columns of B.  Infinite entries follow the absorbing
convention of (min,+): a +inf addend makes the pair +inf regardless of the
other addend, and -inf makes it -inf otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matrices import count_product


@dataclass(frozen=True)
class PointSet:
    """n points in d real coordinates; +-inf allowed, NaN rejected."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64)
        if c.ndim != 2:
            raise ValueError("coords must be (n, d)")
        if np.isnan(c).any():
            raise ValueError("coords contain NaN")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class DominanceParams:
    """Bucket size s for the rank decomposition.

    s = None derives round(N**((omega_hint-1)/2)) from the combined point
    count N; the default hint 3 collapses everything into one bucket, which
    matches the cubic counting kernels.
    """

    bucket_size: int | None = None
    omega_hint: float = 3.0

    def resolve(self, total_points: int) -> int:
        if self.bucket_size is not None:
            s = self.bucket_size
        else:
            s = int(round(total_points ** ((self.omega_hint - 1.0) / 2.0)))
        return max(1, min(s, max(total_points, 1)))


def _coerce(ps) -> np.ndarray:
    if isinstance(ps, PointSet):
        return ps.coords
    return PointSet(np.asarray(ps, dtype=np.float64)).coords


def _column_ranks(p: np.ndarray, q: np.ndarray,
                  strict: bool) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate ranks of the stacked points, (n1+n2, d).

    Equal values order P first for the non-strict relation and Q first for
    the strict one, so `rank(P_i) < rank(Q_j)` is exactly the relation.
    """
    n1, n2 = p.shape[0], q.shape[0]
    vals = np.concatenate([p, q], axis=0)
    big_n, d = vals.shape
    tag = np.concatenate([np.full(n1, 1 if strict else 0),
                          np.full(n2, 0 if strict else 1)])
    idx = np.concatenate([np.arange(n1), np.arange(n2)])
    order = np.lexsort((np.broadcast_to(idx[:, None], (big_n, d)),
                        np.broadcast_to(tag[:, None], (big_n, d)),
                        vals), axis=0)
    ranks = np.empty((big_n, d), dtype=np.int64)
    np.put_along_axis(ranks, order,
                      np.broadcast_to(np.arange(big_n)[:, None], (big_n, d)),
                      axis=0)
    return ranks, order


def _bucketed(p, q, values, params, strict):
    """Shared core: counts (values None) or value sums (values given)."""
    p, q = _coerce(p), _coerce(q)
    if p.shape[1] != q.shape[1]:
        raise ValueError("point sets must share a dimension")
    n1, n2 = p.shape[0], q.shape[0]
    d = p.shape[1]
    weighted = values is not None
    if weighted:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != p.shape:
            raise ValueError("values must align with the first point set")
        if not np.isfinite(values).all():
            raise ValueError("values must be finite")
    out = np.zeros((n1, n2), dtype=np.float64 if weighted else np.int64)
    if n1 == 0 or n2 == 0 or d == 0:
        return out
    params = params or DominanceParams()
    big_n = n1 + n2
    s = params.resolve(big_n)
    ranks, order = _column_ranks(p, q, strict)
    rank_p, rank_q = ranks[:n1], ranks[n1:]
    buckets = (big_n + s - 1) // s

    # Cross-bucket coordinates: bucket(P) < bucket(Q).
    bucket_p = rank_p // s
    for k in range(buckets):
        a_k = bucket_p == k
        if not a_k.any():
            continue
        b_k = rank_q >= (k + 1) * s
        if not b_k.any():
            continue
        if weighted:
            out += np.where(a_k, values, 0.0) @ b_k.T.astype(np.float64)
        else:
            out += count_product(a_k, b_k.T)

    # Same-bucket coordinates: walk each sorted column, bucket slice by
    # bucket slice; earlier P points count against every later Q point.
    for c in range(d):
        col = order[:, c]
        for k in range(buckets):
            ids = col[k * s:(k + 1) * s]
            is_p = ids < n1
            if not is_p.any() or is_p.all():
                continue
            pos = np.arange(ids.size)
            ip = ids[is_p]
            iq = ids[~is_p] - n1
            mask = pos[is_p][:, None] < pos[~is_p][None, :]
            if weighted:
                out[np.ix_(ip, iq)] += mask * values[ip, c][:, None]
            else:
                out[np.ix_(ip, iq)] += mask
    return out


def dominance_matrix(p, q, params: DominanceParams | None = None,
                     strict: bool = False) -> np.ndarray:
    """D[i,j] = |{c : P_i[c] <= Q_j[c]}| (or < with strict=True), int64."""
    return _bucketed(p, q, None, params, strict)


def weighted_dominance(p, q, values, params: DominanceParams | None = None,
                       strict: bool = False) -> np.ndarray:
    """S[i,j] = sum of values[i,c] over coordinates where P_i[c] <= Q_j[c]."""
    return _bucketed(p, q, values, params, strict)


def naive_dominance(p, q, strict: bool = False) -> np.ndarray:
    """Direct O(n^2 d) counter; the reference the decomposition must equal."""
    p, q = _coerce(p), _coerce(q)
    if strict:
        return (p[:, None, :] < q[None, :, :]).sum(axis=2, dtype=np.int64)
    return (p[:, None, :] <= q[None, :, :]).sum(axis=2, dtype=np.int64)


# -- thresholded distance products ------------------------------------------

def _check_tropical(m, name):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-d")
    if np.isnan(m).any():
        raise ValueError(f"{name} contains NaN")
    return m


def distance_threshold(a, b, k: float, strict: bool = False,
                       params: DominanceParams | None = None) -> np.ndarray:
    """Bool C[i,j] = [min_t A[i,t]+B[t,j] >= K] (or > K with strict).

    Pair sums use the absorbing (min,+) convention for infinities.
    """
    a = _check_tropical(a, "A")
    b = _check_tropical(b, "B")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dims differ: {a.shape} x {b.shape}")
    if not math.isfinite(k):
        raise ValueError("threshold K must be finite")
    d = a.shape[1]
    if d == 0:
        return np.ones((a.shape[0], b.shape[1]), dtype=bool)
    left = a - k            # row points u_i
    right = (-b).T          # column points v_j
    # min >= K  <=>  v_j <= u_i on every coordinate; min > K uses strict <.
    # With strict=True, coordinates where u and v are both infinite of the
    # same sign (an opposite-signed infinity pair in A and B) block the
    # entry; such inputs fall outside the strict variant's domain.
    dom = dominance_matrix(right, left, params, strict=strict)
    return dom.T == d


class MsbResult(NamedTuple):
    """Top-bit prefixes of a (min,+) product and the power-of-two scale."""

    bits: np.ndarray   # int64, each entry in [0, 2**k_bits)
    scale: int         # W, smallest power of two above max(A)+max(B)


def msb_distance_product(a, b, k_bits: int, budget: int = 4096,
                         params: DominanceParams | None = None) -> MsbResult:
    """Most significant k_bits of every entry of the (min,+) product.

    Entry values are read against the fixed scale W: an entry x in [0, W)
    has prefix floor(x * 2**k_bits / W).  Entries outside [0, W) (possible
    only through infinite inputs) come back as all-zero bits.  Raises if
    2**k_bits threshold evaluations would exceed the budget.
    """
    a = _check_tropical(a, "A")
    b = _check_tropical(b, "B")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dims differ: {a.shape} x {b.shape}")
    if k_bits < 1:
        raise ValueError("k_bits must be positive")
    if 2 ** k_bits > budget:
        raise ValueError(
            f"2**{k_bits} threshold evaluations exceed the budget of {budget}")
    fin_a = a[np.isfinite(a)]
    fin_b = b[np.isfinite(b)]
    top = 0.0
    if fin_a.size and fin_b.size:
        top = float(fin_a.max()) + float(fin_b.max())
    w = 1
    while w <= top:
        w *= 2

    denom = 1 << k_bits
    cache: dict[int, np.ndarray] = {}

    def threshold(r: int) -> np.ndarray:
        if r not in cache:
            kval = w - (w * r) / denom
            cache[r] = distance_threshold(a, b, kval, params=params)
        return cache[r]

    shape = (a.shape[0], b.shape[1])
    prefix = np.zeros(shape, dtype=np.int64)
    for level in range(1, k_bits + 1):
        bit = np.zeros(shape, dtype=bool)
        step = 1 << (k_bits - level)
        for s in range(1 << (level - 1)):
            hi_r = 2 * s * step
            lo_r = hi_r + step
            bit |= ~threshold(hi_r) & threshold(lo_r)
        prefix |= bit.astype(np.int64) << (k_bits - level)
    return MsbResult(prefix, w)
