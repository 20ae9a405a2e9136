"""Matrix kernels over the Boolean, counting, and (min,+)/(max,+) structures.

Boolean matrices are packed 64 bits per word; Boolean and counting products
run on AND + population count over the packed words.  (min,+) and (max,+)
products are cache-blocked; blocking never changes results bit-for-bit
because min/max are exact regardless of grouping.

Counting matrices are plain int64 arrays.  Extended matrices are float64
arrays where +inf is allowed only as the (min,+) identity and -inf only as
the (max,+) identity; NaN is always rejected.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

_DEFAULT_BLOCK = 64
_threads = 1


def set_threads(n: int) -> None:
    """Set the worker count used to split row bands across products.

    Outputs are identical for every value: bands are disjoint rows.
    """
    global _threads
    if n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def get_threads() -> int:
    return _threads


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a bool (r, c) array into (r, ceil(c/64)) uint64 words."""
    if dense.size == 0:
        return np.zeros((dense.shape[0], 0), dtype=np.uint64)
    b = np.packbits(dense, axis=1)
    pad = (-b.shape[1]) % 8
    if pad:
        b = np.pad(b, ((0, 0), (0, pad)))
    return np.ascontiguousarray(b).view(np.uint64)


@dataclass(frozen=True, eq=False)
class BoolMatrix:
    """Bit-packed Boolean matrix; padding bits beyond `cols` are zero."""

    rows: int
    cols: int
    words: np.ndarray  # (rows, ceil(cols/64)) uint64

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "BoolMatrix":
        dense = np.asarray(dense, dtype=bool)
        if dense.ndim != 2:
            raise ValueError("need a 2-d array")
        return cls(dense.shape[0], dense.shape[1], _pack_rows(dense))

    @cached_property
    def _dense(self) -> np.ndarray:
        if self.words.size == 0:
            return np.zeros((self.rows, self.cols), dtype=bool)
        bytes_ = self.words.view(np.uint8)
        bits = np.unpackbits(bytes_, axis=1)[:, : self.cols]
        return bits.astype(bool)

    def dense(self) -> np.ndarray:
        return self._dense

    def __eq__(self, other) -> bool:
        return (isinstance(other, BoolMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and np.array_equal(self.words, other.words))


def _as_dense_bool(m) -> np.ndarray:
    if isinstance(m, BoolMatrix):
        return m.dense()
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise ValueError("need a 2-d array")
    return arr.astype(bool)


def _run_banded(n_rows: int, work, threads: int | None):
    threads = _threads if threads is None else threads
    if threads <= 1 or n_rows < 2:
        work(0, n_rows)
        return
    band = (n_rows + threads - 1) // threads
    spans = [(i, min(i + band, n_rows)) for i in range(0, n_rows, band)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for f in [pool.submit(work, lo, hi) for lo, hi in spans]:
            f.result()


def count_product(a, b, threads: int | None = None) -> np.ndarray:
    """C[i,j] = |{k : A[i,k] and B[k,j]}| via packed AND + popcount."""
    da, db = _as_dense_bool(a), _as_dense_bool(b)
    if da.shape[1] != db.shape[0]:
        raise ValueError(f"inner dims differ: {da.shape} x {db.shape}")
    pa = _pack_rows(da)
    pbt = _pack_rows(db.T)
    n1, n3 = da.shape[0], db.shape[1]
    out = np.zeros((n1, n3), dtype=np.int64)
    if pa.shape[1] == 0 or n3 == 0:
        return out

    def work(lo: int, hi: int) -> None:
        for i0 in range(lo, hi, _DEFAULT_BLOCK):
            i1 = min(i0 + _DEFAULT_BLOCK, hi)
            t = pa[i0:i1, None, :] & pbt[None, :, :]
            out[i0:i1] = np.bitwise_count(t).sum(axis=2, dtype=np.int64)

    _run_banded(n1, work, threads)
    return out


def bool_product(a, b, threads: int | None = None) -> BoolMatrix:
    """C[i,j] = OR_k (A[i,k] and B[k,j]) on packed words."""
    da, db = _as_dense_bool(a), _as_dense_bool(b)
    if da.shape[1] != db.shape[0]:
        raise ValueError(f"inner dims differ: {da.shape} x {db.shape}")
    pa = _pack_rows(da)
    pbt = _pack_rows(db.T)
    n1, n3 = da.shape[0], db.shape[1]
    dense = np.zeros((n1, n3), dtype=bool)
    if pa.shape[1] and n3:
        def work(lo: int, hi: int) -> None:
            for i0 in range(lo, hi, _DEFAULT_BLOCK):
                i1 = min(i0 + _DEFAULT_BLOCK, hi)
                t = pa[i0:i1, None, :] & pbt[None, :, :]
                dense[i0:i1] = np.bitwise_or.reduce(t, axis=2) != 0

        _run_banded(n1, work, threads)
    return BoolMatrix.from_dense(dense)


def naive_bool_product(a, b) -> np.ndarray:
    """Byte-wise triple-loop reference; the benchmark baseline.

    One byte per element, accumulated through the compiled generic matmul
    loop nest (integer matmul never dispatches to BLAS), so the work is the
    classical n1*n2*n3 byte reads and adds."""
    da, db = _as_dense_bool(a), _as_dense_bool(b)
    return (da.astype(np.uint8) @ db.astype(np.int32)) != 0


def _check_ext(m: np.ndarray, name: str, forbid: float) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-d")
    if np.isnan(m).any():
        raise ValueError(f"{name} contains NaN")
    if np.any(m == forbid):
        raise ValueError(f"{name} contains {forbid}, the wrong-signed infinity")
    return m


def min_plus_product(a, b, block: int = _DEFAULT_BLOCK,
                     threads: int | None = None) -> np.ndarray:
    """C[i,j] = min_k A[i,k]+B[k,j]; entries real or +inf."""
    a = _check_ext(a, "A", -np.inf)
    b = _check_ext(b, "B", -np.inf)
    return _semiring(a, b, block, threads, np.inf, np.minimum, np.min)


def max_plus_product(a, b, block: int = _DEFAULT_BLOCK,
                     threads: int | None = None) -> np.ndarray:
    """C[i,j] = max_k A[i,k]+B[k,j]; entries real or -inf."""
    a = _check_ext(a, "A", np.inf)
    b = _check_ext(b, "B", np.inf)
    return _semiring(a, b, block, threads, -np.inf, np.maximum, np.max)


def _semiring(a, b, block, threads, identity, combine2, reduce1):
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dims differ: {a.shape} x {b.shape}")
    if block < 1:
        raise ValueError("block must be positive")
    n1, n2 = a.shape
    n3 = b.shape[1]
    out = np.full((n1, n3), identity)
    if n2 == 0:
        return out

    def work(lo: int, hi: int) -> None:
        for i0 in range(lo, hi, block):
            i1 = min(i0 + block, hi)
            acc = np.full((i1 - i0, n3), identity)
            for k0 in range(0, n2, block):
                k1 = min(k0 + block, n2)
                t = a[i0:i1, k0:k1, None] + b[None, k0:k1, :]
                combine2(acc, reduce1(t, axis=1), out=acc)
            out[i0:i1] = acc

    _run_banded(n1, work, threads)
    return out


# -- text format -----------------------------------------------------------

def parse_matrix(text: str) -> np.ndarray:
    """Parse 'm <rows> <cols>' followed by row-major float entries."""
    tok = text.split()
    if len(tok) < 3 or tok[0] != "m":
        raise ValueError("expected header 'm <rows> <cols>'")
    try:
        r, c = int(tok[1]), int(tok[2])
    except ValueError:
        raise ValueError("bad matrix dimensions") from None
    if r < 0 or c < 0:
        raise ValueError("matrix dimensions must be nonnegative")
    body = tok[3:]
    if len(body) != r * c:
        raise ValueError(f"expected {r * c} entries, found {len(body)}")
    try:
        vals = [float(t) for t in body]
    except ValueError as exc:
        raise ValueError(f"bad matrix entry: {exc}") from None
    arr = np.array(vals, dtype=np.float64).reshape(r, c)
    if np.isnan(arr).any():
        raise ValueError("matrix contains NaN")
    return arr


def serialize_matrix(arr: np.ndarray) -> str:
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("need a 2-d array")
    lines = [f"m {arr.shape[0]} {arr.shape[1]}"]
    for row in arr:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"
