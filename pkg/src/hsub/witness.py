"""Split planning and maximum-witness Boolean products.

``plan_parameters`` evaluates the exponent recurrence that balances a
three-way split (a, b, c) of a size-h subgraph search against a matrix
multiplication exponent omega, returning the minimizing split and the
bucket exponent mu.

``max_witness_product`` finds, for every (i, j) with a nonzero Boolean
product entry, the largest inner index k with A[i,k] = B[k,j] = 1.  The
inner dimension is cut into consecutive buckets; counting products locate
the last nonempty bucket and a backward scan inside it pins the witness.
Bucket width never changes the answer, only the work distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrices import BoolMatrix, count_product, _as_dense_bool


@dataclass(frozen=True)
class PlanParameters:
    """Minimizing split for a size-h search at exponent omega."""

    omega: float
    h: int
    a: int
    b: int
    c: int
    mu: float
    b1: int
    s1: float
    s2: float
    t: float

    @property
    def abc(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def bucket_width(self, n: int, columns: int) -> int:
        """Concrete witness bucket width ceil(n**mu), clamped to the columns."""
        w = int(math.ceil(n ** self.mu)) if n > 0 else 1
        return max(1, min(w, max(columns, 1)))


def plan_parameters(omega: float, h: int) -> PlanParameters:
    """Exact evaluation of the split recurrence for 2 <= omega < 3, h >= 3."""
    if h < 3:
        raise ValueError("h must be at least 3")
    if not 2.0 <= omega <= 3.0:
        raise ValueError("omega must lie in [2, 3]")
    rest = 4.0 - omega

    b1 = 0
    for b in range(1, h - 1):
        if b / rest <= (h - b) // 2:
            b1 = b
    if b1 == 0:
        raise ValueError(f"no feasible middle part for h={h}")
    s1 = h - b1 + b1 / rest

    def s2_of(b: int) -> float:
        half = (h - b) // 2
        return max(h - b + half, h - (3.0 - omega) * half)

    candidates = [b for b in range(1, h - 1) if (h - b) // 2 <= b <= h - 2]
    if not candidates:
        raise ValueError(f"no feasible balanced part for h={h}")
    s2 = min(s2_of(b) for b in candidates)
    b2 = min(b for b in candidates if s2_of(b) == s2)

    if s1 <= s2:
        b = b1
        a = (h - b) // 2
        c = h - b - a
        mu = b / rest
        t = s1
    else:
        b = b2
        a = (h - b) // 2
        c = h - b - a
        mu = float(a)
        t = s2
    return PlanParameters(omega, h, a, b, c, mu, b1, s1, s2, min(s1, s2))


@dataclass(frozen=True)
class WitnessMatrix:
    """Per-pair witness indices, 1-based into the inner dimension; 0 = none."""

    indices: np.ndarray  # int64 (n1, n3)

    def found(self) -> np.ndarray:
        return self.indices > 0


def _pair_inputs(a, b) -> tuple[np.ndarray, np.ndarray]:
    da, db = _as_dense_bool(a), _as_dense_bool(b)
    if da.shape[1] != db.shape[0]:
        raise ValueError(f"inner dims differ: {da.shape} x {db.shape}")
    return da, db


def max_witness_product(a, b, bucket_width: int) -> WitnessMatrix:
    """Largest witness per pair; exhaustively equal for every bucket width."""
    da, db = _pair_inputs(a, b)
    if bucket_width < 1:
        raise ValueError("bucket width must be positive")
    n1, n2 = da.shape
    n3 = db.shape[1]
    out = np.zeros((n1, n3), dtype=np.int64)
    if n1 == 0 or n2 == 0 or n3 == 0:
        return WitnessMatrix(out)
    buckets = (n2 + bucket_width - 1) // bucket_width
    counts = np.empty((buckets, n1, n3), dtype=np.int64)
    for r in range(buckets):
        lo, hi = r * bucket_width, min((r + 1) * bucket_width, n2)
        counts[r] = count_product(da[:, lo:hi], db[lo:hi, :])
    nz = counts > 0
    has = nz.any(axis=0)
    last = buckets - 1 - np.argmax(nz[::-1], axis=0)
    for r in range(buckets):
        need = has & (last == r)
        if not need.any():
            continue
        lo, hi = r * bucket_width, min((r + 1) * bucket_width, n2)
        both = da[:, lo:hi, None] & db[None, lo:hi, :]
        width = hi - lo
        local_last = width - 1 - np.argmax(both[:, ::-1, :], axis=1)
        out[need] = lo + local_last[need] + 1
    return WitnessMatrix(out)


def top_k_witnesses(a, b, k: int) -> list[list[list[int]]]:
    """Per pair, up to k largest witnesses in descending order (1-based)."""
    if k < 1:
        raise ValueError("k must be positive")
    da, db = _pair_inputs(a, b)
    n1, n3 = da.shape[0], db.shape[1]
    result: list[list[list[int]]] = []
    both = da[:, :, None] & db[None, :, :]
    for i in range(n1):
        row = []
        for j in range(n3):
            ks = np.flatnonzero(both[i, :, j])
            row.append([int(x) + 1 for x in ks[-k:][::-1]])
        result.append(row)
    return result


def interval_witness(a, b, weights, interval,
                     bucket_width: int | None = None) -> np.ndarray:
    """Bool W[i,j] = [some witness k has weights[k] in the closed interval].

    `weights` must be ascending over the inner dimension.  `interval` is a
    (lo, hi) pair, either scalars or per-pair (n1, n3) arrays.  Existence is
    read off prefix counts per bucket plus a masked popcount inside the
    boundary buckets.
    """
    da, db = _pair_inputs(a, b)
    weights = np.asarray(weights, dtype=np.float64)
    n1, n2 = da.shape
    n3 = db.shape[1]
    if weights.shape != (n2,):
        raise ValueError("weights must match the inner dimension")
    if np.any(np.diff(weights) < 0):
        raise ValueError("weights must be sorted ascending")
    lo, hi = interval
    lo = np.broadcast_to(np.asarray(lo, dtype=np.float64), (n1, n3))
    hi = np.broadcast_to(np.asarray(hi, dtype=np.float64), (n1, n3))
    out = np.zeros((n1, n3), dtype=bool)
    if n1 == 0 or n2 == 0 or n3 == 0:
        return out
    width = bucket_width or max(1, int(round(math.sqrt(n2))))
    buckets = (n2 + width - 1) // width
    counts = np.empty((buckets, n1, n3), dtype=np.int64)
    for r in range(buckets):
        blo, bhi = r * width, min((r + 1) * width, n2)
        counts[r] = count_product(da[:, blo:bhi], db[blo:bhi, :])
    prefix = np.concatenate([np.zeros((1, n1, n3), dtype=np.int64),
                             np.cumsum(counts, axis=0)])

    both = da[:, :, None] & db[None, :, :]

    def leq_count(i: int, j: int, upto: int) -> int:
        # witnesses with 0-based index < upto
        if upto <= 0:
            return 0
        if upto >= n2:
            return int(prefix[buckets, i, j])
        r = upto // width
        full = int(prefix[r, i, j])
        return full + int(both[i, r * width:upto, j].sum())

    k_lo = np.searchsorted(weights, lo.ravel(), side="left").reshape(n1, n3)
    k_hi = np.searchsorted(weights, hi.ravel(), side="right").reshape(n1, n3)
    for i in range(n1):
        for j in range(n3):
            if k_lo[i, j] >= k_hi[i, j]:
                continue
            out[i, j] = (leq_count(i, j, int(k_hi[i, j]))
                         - leq_count(i, j, int(k_lo[i, j]))) > 0
    return out
