"""Batch kernels over packed transitions and teams.

A team over a model with ``N`` assignments is an ``int64`` bitmask; a
transition is a row of ``N`` such masks where entry ``s`` is the image of
assignment ``s`` (``0`` when ``s`` is outside the precondition). With this
encoding the union of transitions is an element-wise OR.

Every kernel has a numba implementation and a pure-numpy one. The numba
path is used when numba imports and ``TRANSLOG_NUMBA`` is not ``0``;
:func:`use_backend` switches at runtime.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

MAX_ASSIGNMENTS = 62

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy implementations


def _compose_np(A, B):
    n, N = A.shape
    m = B.shape[0]
    out = np.zeros((n, m, N), dtype=np.int64)
    used = int(np.bitwise_or.reduce(A, axis=None)) if A.size else 0
    for t in range(N):
        if not (used >> t) & 1:
            continue
        bit = (A >> t) & 1
        out |= bit[:, None, :] * B[None, :, t, None]
    return out.reshape(n * m, N)


def _union_np(A, B):
    n, N = A.shape
    m = B.shape[0]
    return (A[:, None, :] | B[None, :, :]).reshape(n * m, N)


def _parallel_np(A, B, merge):
    n, N = A.shape
    m = B.shape[0]
    out = np.zeros((n, m, N), dtype=np.int64)
    for s in range(N):
        a = A[:, s]
        b = B[:, s]
        ua = int(np.bitwise_or.reduce(a)) if n else 0
        ub = int(np.bitwise_or.reduce(b)) if m else 0
        for s0 in range(N):
            if not (ua >> s0) & 1:
                continue
            b0 = (a >> s0) & 1
            for s1 in range(N):
                if not (ub >> s1) & 1:
                    continue
                b1 = (b >> s1) & 1
                out[:, :, s] |= (b0[:, None] & b1[None, :]) << merge[s, s0, s1]
    return out.reshape(n * m, N)


def _independent_np(A, pairs):
    if pairs.shape[0] == 0:
        return np.ones(A.shape[0], dtype=np.bool_)
    return np.all(A[:, pairs[:, 0]] == A[:, pairs[:, 1]], axis=1)


def _or_product_np(a, b):
    return np.unique((a[:, None] | b[None, :]).ravel())


def _product_rows_np(cols, options, counts, N):
    # cols: positions; options: (len(cols), maxopt) padded; counts: per column
    total = int(np.prod(counts)) if len(counts) else 1
    out = np.zeros((total, N), dtype=np.int64)
    reps = total
    tile = 1
    for k, c in enumerate(cols):
        cnt = counts[k]
        reps //= cnt
        out[:, c] = np.tile(np.repeat(options[k, :cnt], reps), tile)
        tile *= cnt
    return out


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _compose_nb(A, B):
        n, N = A.shape
        m = B.shape[0]
        out = np.zeros((n * m, N), dtype=np.int64)
        for i in range(n):
            for j in range(m):
                r = i * m + j
                for s in range(N):
                    img = A[i, s]
                    acc = 0
                    t = 0
                    while img:
                        if img & 1:
                            acc |= B[j, t]
                        img >>= 1
                        t += 1
                    out[r, s] = acc
        return out

    @njit(cache=True)
    def _union_nb(A, B):
        n, N = A.shape
        m = B.shape[0]
        out = np.empty((n * m, N), dtype=np.int64)
        for i in range(n):
            for j in range(m):
                for s in range(N):
                    out[i * m + j, s] = A[i, s] | B[j, s]
        return out

    @njit(cache=True)
    def _parallel_nb(A, B, merge):
        n, N = A.shape
        m = B.shape[0]
        out = np.zeros((n * m, N), dtype=np.int64)
        for i in range(n):
            for j in range(m):
                r = i * m + j
                for s in range(N):
                    a = A[i, s]
                    b = B[j, s]
                    if a == 0 or b == 0:
                        continue
                    acc = 0
                    for s0 in range(N):
                        if not (a >> s0) & 1:
                            continue
                        for s1 in range(N):
                            if (b >> s1) & 1:
                                acc |= np.int64(1) << merge[s, s0, s1]
                    out[r, s] = acc
        return out

    @njit(cache=True)
    def _independent_nb(A, pairs):
        n = A.shape[0]
        out = np.ones(n, dtype=np.bool_)
        for i in range(n):
            for k in range(pairs.shape[0]):
                if A[i, pairs[k, 0]] != A[i, pairs[k, 1]]:
                    out[i] = False
                    break
        return out

    @njit(cache=True)
    def _or_product_nb(a, b):
        out = np.empty(a.shape[0] * b.shape[0], dtype=np.int64)
        k = 0
        for i in range(a.shape[0]):
            for j in range(b.shape[0]):
                out[k] = a[i] | b[j]
                k += 1
        return out

    @njit(cache=True)
    def _product_rows_nb(cols, options, counts, N):
        total = 1
        for c in counts:
            total *= c
        out = np.zeros((total, N), dtype=np.int64)
        idx = np.zeros(len(cols), dtype=np.int64)
        for r in range(total):
            for k in range(len(cols)):
                out[r, cols[k]] = options[k, idx[k]]
            # odometer, last column fastest
            k = len(cols) - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < counts[k]:
                    break
                idx[k] = 0
                k -= 1
        return out


_NUMPY = {
    "compose": _compose_np,
    "union": _union_np,
    "parallel": _parallel_np,
    "independent": _independent_np,
    "or_product": _or_product_np,
    "product_rows": _product_rows_np,
}
_NUMBA = (
    {
        "compose": _compose_nb,
        "union": _union_nb,
        "parallel": _parallel_nb,
        "independent": _independent_nb,
        "or_product": _or_product_nb,
        "product_rows": _product_rows_nb,
    }
    if HAVE_NUMBA
    else None
)


def _default_backend() -> str:
    if HAVE_NUMBA and os.environ.get("TRANSLOG_NUMBA", "1") != "0":
        return "numba"
    return "numpy"


_active = {"name": _default_backend()}


def backend() -> str:
    return _active["name"]


def set_backend(name: str) -> None:
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _active["name"] = name


@contextlib.contextmanager
def use_backend(name: str):
    prev = backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def _impl(name):
    return (_NUMBA if _active["name"] == "numba" else _NUMPY)[name]


# ---------------------------------------------------------------------------
# public kernels


def _rows(A, N):
    A = np.asarray(A, dtype=np.int64)
    return A.reshape(-1, N) if A.size else np.zeros((0, N), dtype=np.int64)


def compose_all(A, B) -> np.ndarray:
    """Every ``A[i] o B[j]``, row ``i * len(B) + j``.

    Rows of ``B`` must be defined on every assignment reached by ``A``.
    """
    N = A.shape[1]
    A, B = _rows(A, N), _rows(B, N)
    if not len(A) or not len(B):
        return np.zeros((0, N), dtype=np.int64)
    return _impl("compose")(np.ascontiguousarray(A), np.ascontiguousarray(B))


def union_all(A, B) -> np.ndarray:
    N = A.shape[1]
    A, B = _rows(A, N), _rows(B, N)
    if not len(A) or not len(B):
        return np.zeros((0, N), dtype=np.int64)
    return _impl("union")(np.ascontiguousarray(A), np.ascontiguousarray(B))


def parallel_all(A, B, merge) -> np.ndarray:
    """Every parallel composition of ``A[i]`` with ``B[j]``.

    ``merge[s, s0, s1]`` is the index of the assignment that takes the first
    branch's variables from ``s0``, the second's from ``s1`` and the rest
    from ``s``.
    """
    N = A.shape[1]
    A, B = _rows(A, N), _rows(B, N)
    if not len(A) or not len(B):
        return np.zeros((0, N), dtype=np.int64)
    return _impl("parallel")(
        np.ascontiguousarray(A), np.ascontiguousarray(B), np.ascontiguousarray(merge, dtype=np.int64)
    )


def independent_mask(A, pairs) -> np.ndarray:
    """Rows whose images agree on every index pair in ``pairs``."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if not len(A):
        return np.zeros(0, dtype=np.bool_)
    return _impl("independent")(np.ascontiguousarray(A), pairs)


def or_product(a, b) -> np.ndarray:
    """Sorted unique ``{x | y : x in a, y in b}`` over 1-d mask arrays."""
    a = np.asarray(a, dtype=np.int64).ravel()
    b = np.asarray(b, dtype=np.int64).ravel()
    if not len(a) or not len(b):
        return np.zeros(0, dtype=np.int64)
    out = _impl("or_product")(a, b)
    # numba's unique sorts slowly; deduplicate in numpy for both backends
    return out if _active["name"] == "numpy" else np.unique(out)


def product_rows(cols, option_lists, N) -> np.ndarray:
    """Cartesian product: one row per choice of ``option_lists[k]`` at ``cols[k]``."""
    cols = np.asarray(cols, dtype=np.int64)
    counts = np.array([len(o) for o in option_lists], dtype=np.int64)
    if len(cols) == 0:
        return np.zeros((1, N), dtype=np.int64)
    if (counts == 0).any():
        return np.zeros((0, N), dtype=np.int64)
    width = int(counts.max())
    options = np.zeros((len(cols), width), dtype=np.int64)
    for k, opts in enumerate(option_lists):
        options[k, : len(opts)] = opts
    return _impl("product_rows")(cols, options, counts, N)


def unique_rows(A) -> np.ndarray:
    """Distinct rows in lexicographic order."""
    if len(A) <= 1:
        return np.asarray(A, dtype=np.int64)
    N = A.shape[1]
    if N * N <= 63:
        # every entry fits in N bits: pack a row into one key, first column most significant
        keys = (A << _SHIFTS[N]).sum(axis=1)
        _, first = np.unique(keys, return_index=True)
        return A[first]
    return np.unique(A, axis=0)


_SHIFTS = {n: np.array([n * (n - 1 - s) for s in range(n)], dtype=np.int64) for n in range(1, 8)}


def posts(A) -> np.ndarray:
    if not len(A):
        return np.zeros(0, dtype=np.int64)
    return np.bitwise_or.reduce(A, axis=1)


def mask_bits(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def submasks(mask: int):
    """Every submask of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def nonempty_submasks(mask: int) -> list:
    return [m for m in submasks(mask) if m]
