"""Matrix-algebraic building blocks for level-synchronous graph traversal.

Sparse vectors carry a vertex subset with integer payloads, dense vectors
carry one integer per vertex. ``spmspv`` multiplies a pattern matrix by a
sparse vector over a user-supplied semiring; with ``SELECT2ND_MIN`` every
reached vertex receives the smallest payload among its frontier neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sparse import INDEX, SparsePatternCSC, SparseVec


@dataclass(frozen=True)
class Semiring:
    """A (multiply, add) pair over integers.

    ``multiply(matrix_entry, vector_value)`` and ``add(a, b)`` must accept
    numpy arrays elementwise. Supplying ``add_ufunc`` and ``zero`` (its
    identity) enables the scatter-accumulate fast path.
    """

    name: str
    multiply: Callable
    add: Callable
    add_ufunc: np.ufunc | None = None
    zero: int | None = None


def select2nd(a, b):
    return b


SELECT2ND_MIN = Semiring(
    "select2nd.min",
    multiply=select2nd,
    add=np.minimum,
    add_ufunc=np.minimum,
    zero=int(np.iinfo(INDEX).max),
)


def _check_len(x: SparseVec, n: int) -> None:
    if x.length != n:
        raise ValueError(f"length mismatch: sparse vector has {x.length}, expected {n}")


def ind(x: SparseVec) -> list[int]:
    return x.indices.tolist()


def select(x: SparseVec, y: np.ndarray, pred: Callable) -> SparseVec:
    """Keep entries ``x[i]`` whose dense counterpart satisfies ``pred(y[i])``."""
    _check_len(x, len(y))
    probe = y[x.indices]
    try:
        keep = np.asarray(pred(probe))
    except (TypeError, ValueError):
        keep = None
    if keep is None or keep.shape != probe.shape or keep.dtype != bool:
        keep = np.fromiter((bool(pred(int(v))) for v in probe), dtype=bool, count=probe.size)
    return SparseVec._trusted(x.length, x.indices[keep], x.values[keep])


def assign(y: np.ndarray, x: SparseVec, inplace: bool = False) -> np.ndarray:
    """Write the entries of ``x`` into ``y``.

    Returns a fresh copy unless ``inplace`` is set, in which case ``y`` itself
    is updated and returned.
    """
    _check_len(x, len(y))
    out = y if inplace else y.copy()
    out[x.indices] = x.values
    return out


def gather(x: SparseVec, y: np.ndarray) -> SparseVec:
    """Replace the values of ``x`` with ``y`` at the same indices."""
    _check_len(x, len(y))
    return SparseVec._trusted(x.length, x.indices, y[x.indices].astype(INDEX, copy=True))


def reduce_argmin(x: SparseVec, y: np.ndarray) -> int:
    """Index in ind(x) with the smallest ``y``; ties go to the smaller index."""
    _check_len(x, len(y))
    if x.nnz == 0:
        raise ValueError("reduce_argmin of an empty sparse vector")
    # indices are sorted, so argmin's first-occurrence rule is the index tie-break
    return int(x.indices[np.argmin(y[x.indices])])


def sort_perm(x: SparseVec, y: np.ndarray) -> SparseVec:
    """Rank each entry by the tuple ``(x[i], y[i], i)``, ascending, from 0."""
    _check_len(x, len(y))
    order = np.lexsort((x.indices, y[x.indices], x.values))
    ranks = np.empty(x.nnz, dtype=INDEX)
    ranks[order] = np.arange(x.nnz, dtype=INDEX)
    return SparseVec._trusted(x.length, x.indices, ranks)


def _expand_columns(col_ptr, row_idx, cols_local, cols_global, values):
    """Flatten the selected columns into (row, source column, value) triples."""
    if cols_local.size == 1:
        c = int(cols_local[0])
        rows = row_idx[col_ptr[c]:col_ptr[c + 1]]
        return rows, np.broadcast_to(cols_global, rows.shape), np.broadcast_to(values, rows.shape)
    starts = col_ptr[cols_local]
    counts = col_ptr[cols_local + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=INDEX)
        return empty, empty, empty
    run_start = np.cumsum(counts) - counts
    pos = np.arange(total, dtype=INDEX) + np.repeat(starts - run_start, counts)
    return row_idx[pos], np.repeat(cols_global, counts), np.repeat(values, counts)


def accumulate(
    col_ptr: np.ndarray,
    row_idx: np.ndarray,
    col_offset: int,
    x_idx: np.ndarray,
    x_val: np.ndarray,
    sr: Semiring,
    workspace: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Column-driven SpMSpV kernel on a (possibly off-diagonal) CSC block.

    ``col_ptr`` indexes block-local columns ``x_idx - col_offset``; rows in
    ``row_idx`` and indices in ``x_idx`` are global vertex ids, which is what
    lets self-loops be skipped inside any block. Returns sorted output rows,
    their accumulated values and the number of multiplications performed.

    ``workspace``, if given, must be a dense array filled with ``sr.zero`` and
    indexable by every row; it is restored before returning.
    """
    if x_idx.size == 0:
        empty = np.empty(0, dtype=INDEX)
        return empty, empty, 0
    rows, src, vals = _expand_columns(col_ptr, row_idx, x_idx - col_offset, x_idx, x_val)
    keep = rows != src
    rows, vals = rows[keep], vals[keep]
    flops = int(rows.size)
    if flops == 0:
        empty = np.empty(0, dtype=INDEX)
        return empty, empty, 0
    if sr.multiply is select2nd:
        products = vals
    else:
        products = np.asarray(sr.multiply(np.ones_like(vals), vals), dtype=INDEX)

    if sr.add_ufunc is not None and workspace is None:
        order = np.argsort(rows, kind="stable")
        rows, products = rows[order], products[order]
        heads = np.flatnonzero(np.concatenate([[True], rows[1:] != rows[:-1]]))
        return rows[heads], sr.add_ufunc.reduceat(products, heads), flops

    if sr.add_ufunc is not None and sr.zero is not None:
        touched = np.unique(rows)
        sr.add_ufunc.at(workspace, rows, products)
        out = workspace[touched].copy()
        workspace[touched] = sr.zero
        return touched, out, flops

    acc: dict[int, int] = {}
    for r, p in zip(rows.tolist(), products.tolist()):
        acc[r] = sr.add(acc[r], p) if r in acc else p
    touched = np.array(sorted(acc), dtype=INDEX)
    return touched, np.array([acc[r] for r in touched.tolist()], dtype=INDEX), flops


def spmspv_flops(A: SparsePatternCSC, x: SparseVec) -> int:
    """Multiplications performed by ``spmspv(A, x)`` (self-loops excluded)."""
    return accumulate(A.col_ptr, A.row_idx, 0, x.indices, x.values, SELECT2ND_MIN)[2]


def spmspv(
    A: SparsePatternCSC,
    x: SparseVec,
    sr: Semiring = SELECT2ND_MIN,
    workspace: np.ndarray | None = None,
) -> SparseVec:
    """Return ``A @ x`` over ``sr``, skipping diagonal entries.

    A row appears in the result iff it is adjacent to some index of ``x``.
    """
    _check_len(x, A.n)
    rows, vals, _ = accumulate(A.col_ptr, A.row_idx, 0, x.indices, x.values, sr, workspace)
    return SparseVec._trusted(A.n, rows, vals)
