"""Symmetric sparsity patterns, sparse/dense vectors and Matrix Market I/O.

Everything here is pattern-only: numeric values are dropped on ingestion.
Indices are 0-based internally and 1-based only inside .mtx files.
"""

from __future__ import annotations

import io
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

INDEX = np.int64


class MatrixMarketError(ValueError):
    """Base class for Matrix Market parse failures."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MatrixMarketHeaderError(MatrixMarketError):
    pass


class NonSquareMatrixError(MatrixMarketError):
    pass


class IndexOutOfRangeError(MatrixMarketError):
    pass


class AsymmetricPatternWarning(UserWarning):
    pass


def _as_index_array(a) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=INDEX))


@dataclass(frozen=True, eq=False)
class SparsePatternCSC:
    """Structure of a symmetric sparse matrix in compressed-column form.

    ``row_idx[col_ptr[j]:col_ptr[j+1]]`` lists the rows of column ``j`` in
    increasing order. Both triangles are stored; self-loops are allowed but
    never reported as neighbors.
    """

    n: int
    col_ptr: np.ndarray
    row_idx: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "col_ptr", _as_index_array(self.col_ptr))
        object.__setattr__(self, "row_idx", _as_index_array(self.row_idx))
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.col_ptr.shape != (self.n + 1,):
            raise ValueError(f"col_ptr must have length n+1={self.n + 1}")
        if self.col_ptr[0] != 0 or self.col_ptr[-1] != self.row_idx.size:
            raise ValueError("col_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.col_ptr) < 0):
            raise ValueError("col_ptr must be nondecreasing")

    @property
    def m(self) -> int:
        """Number of stored entries (both triangles, diagonal included)."""
        return int(self.row_idx.size)

    @classmethod
    def from_coo(cls, n: int, rows, cols, symmetrize: bool = True) -> "SparsePatternCSC":
        """Build a pattern from coordinate lists, coalescing duplicates.

        With ``symmetrize`` the result is pattern(A) | pattern(A^T).
        """
        rows = _as_index_array(rows).ravel()
        cols = _as_index_array(cols).ravel()
        if rows.shape != cols.shape:
            raise ValueError("rows and cols differ in length")
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
            raise ValueError("coordinate out of range")
        if symmetrize:
            rows, cols = np.concatenate([rows, cols]), np.concatenate([cols, rows])
        key = np.unique(cols * max(n, 1) + rows)
        cols_u, rows_u = np.divmod(key, max(n, 1))
        col_ptr = np.zeros(n + 1, dtype=INDEX)
        np.cumsum(np.bincount(cols_u, minlength=n), out=col_ptr[1:])
        return cls(n, col_ptr, rows_u)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SparsePatternCSC":
        pairs = np.array(list(edges), dtype=INDEX).reshape(-1, 2)
        return cls.from_coo(n, pairs[:, 0], pairs[:, 1])

    def column(self, j: int) -> np.ndarray:
        return self.row_idx[self.col_ptr[j]:self.col_ptr[j + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        col = self.column(v)
        return col[col != v]

    def coo(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (rows, cols) of every stored entry, column-major."""
        cols = np.repeat(np.arange(self.n, dtype=INDEX), np.diff(self.col_ptr))
        return self.row_idx.copy(), cols

    def is_symmetric(self) -> bool:
        rows, cols = self.coo()
        n = max(self.n, 1)
        return np.array_equal(np.sort(rows * n + cols), np.sort(cols * n + rows))

    def validate(self) -> None:
        """Check every structural invariant; raises ValueError on violation."""
        if self.m and (self.row_idx.min() < 0 or self.row_idx.max() >= self.n):
            raise ValueError("row index out of range")
        for j in range(self.n):
            if np.any(np.diff(self.column(j)) <= 0):
                raise ValueError(f"column {j} rows not strictly increasing")
        if not self.is_symmetric():
            raise ValueError("pattern is not structurally symmetric")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePatternCSC):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.col_ptr, other.col_ptr)
            and np.array_equal(self.row_idx, other.row_idx)
        )

    def __repr__(self) -> str:
        return f"SparsePatternCSC(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class SparseVec:
    """Sparse integer vector: sorted unique ``indices`` with ``values``."""

    length: int
    indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=INDEX))
    values: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=INDEX))

    def __post_init__(self):
        idx = _as_index_array(self.indices).ravel()
        val = _as_index_array(self.values).ravel()
        if idx.shape != val.shape:
            raise ValueError("indices and values differ in length")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.length:
                raise ValueError("index out of range")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be sorted and unique")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @classmethod
    def _trusted(cls, length: int, indices: np.ndarray, values: np.ndarray) -> "SparseVec":
        # skips validation; callers guarantee sorted unique int64 indices
        obj = object.__new__(cls)
        object.__setattr__(obj, "length", length)
        object.__setattr__(obj, "indices", indices)
        object.__setattr__(obj, "values", values)
        return obj

    @classmethod
    def from_pairs(cls, length: int, pairs: Iterable[tuple[int, int]]) -> "SparseVec":
        pairs = sorted(dict(pairs).items())
        if not pairs:
            return cls(length)
        idx, val = zip(*pairs)
        return cls(length, idx, val)

    @classmethod
    def empty(cls, length: int) -> "SparseVec":
        return cls(length)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def entries(self) -> list[tuple[int, int]]:
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dict(self) -> dict[int, int]:
        return dict(self.entries())

    def __len__(self) -> int:
        return self.nnz

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVec):
            return NotImplemented
        return (
            self.length == other.length
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"SparseVec(length={self.length}, entries={self.entries()})"


def dense_vec(n: int, fill: int = -1) -> np.ndarray:
    """Full-length integer vector; -1 conventionally marks "unset"."""
    return np.full(n, fill, dtype=INDEX)


@dataclass(frozen=True, eq=False)
class Permutation:
    """Bijection on range(n); ``new_label[v]`` is v's position after reordering."""

    new_label: np.ndarray

    def __post_init__(self):
        labels = _as_index_array(self.new_label).ravel()
        n = labels.size
        if n and (labels.min() < 0 or labels.max() >= n or np.unique(labels).size != n):
            raise ValueError("new_label is not a bijection onto range(n)")
        object.__setattr__(self, "new_label", labels)

    @property
    def n(self) -> int:
        return int(self.new_label.size)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=INDEX))

    @classmethod
    def from_order(cls, order) -> "Permutation":
        """Build from the vertex sequence: ``order[k]`` receives label k."""
        order = _as_index_array(order)
        labels = np.empty_like(order)
        labels[order] = np.arange(order.size, dtype=INDEX)
        return cls(labels)

    @property
    def order(self) -> np.ndarray:
        out = np.empty_like(self.new_label)
        out[self.new_label] = np.arange(self.n, dtype=INDEX)
        return out

    def inverse(self) -> "Permutation":
        return Permutation(self.order)

    def then(self, other: "Permutation") -> "Permutation":
        """Apply self first, then other."""
        if other.n != self.n:
            raise ValueError("permutation sizes differ")
        return Permutation(other.new_label[self.new_label])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.new_label, other.new_label)

    def __repr__(self) -> str:
        return f"Permutation({self.new_label.tolist()})"


def degrees(A: SparsePatternCSC) -> np.ndarray:
    """Number of neighbors per vertex; self-loops do not count."""
    rows, cols = A.coo()
    return np.bincount(cols[rows != cols], minlength=A.n).astype(INDEX)


def permute_symmetric(A: SparsePatternCSC, P: Permutation) -> SparsePatternCSC:
    """Pattern of P A P^T: entry (i, j) moves to (new_label[i], new_label[j])."""
    if P.n != A.n:
        raise ValueError(f"permutation has size {P.n}, matrix has n={A.n}")
    rows, cols = A.coo()
    return SparsePatternCSC.from_coo(
        A.n, P.new_label[rows], P.new_label[cols], symmetrize=False
    )


# ---------------------------------------------------------------------------
# Matrix Market
# ---------------------------------------------------------------------------

_FIELDS = {"pattern": 2, "real": 3, "integer": 3, "double": 3}
_SYMMETRIES = {"general", "symmetric", "skew-symmetric", "hermitian"}


def _parse_header(line: str) -> tuple[str, str]:
    parts = line.split()
    if len(parts) != 5 or parts[0].lower() != "%%matrixmarket":
        raise MatrixMarketHeaderError("expected '%%MatrixMarket matrix coordinate <field> <symmetry>'", 1)
    obj, fmt, fld, sym = (p.lower() for p in parts[1:])
    if obj != "matrix":
        raise MatrixMarketHeaderError(f"unsupported object '{obj}'", 1)
    if fmt != "coordinate":
        raise MatrixMarketHeaderError(f"unsupported format '{fmt}' (only coordinate)", 1)
    if fld not in _FIELDS:
        raise MatrixMarketHeaderError(f"unsupported field '{fld}'", 1)
    if sym not in _SYMMETRIES:
        raise MatrixMarketHeaderError(f"unsupported symmetry '{sym}'", 1)
    return fld, sym


def load_matrix_market(stream: TextIO | str | os.PathLike) -> SparsePatternCSC:
    """Read a coordinate Matrix Market file into a symmetric pattern.

    ``stream`` is an open text stream, a path object, or the file contents
    as a ``str``.

    ``general`` matrices are symmetrized as pattern(A) | pattern(A^T); an
    :class:`AsymmetricPatternWarning` is issued when that adds entries.
    Values are discarded and duplicate coordinates coalesced.
    """
    if isinstance(stream, os.PathLike):
        with open(stream) as fh:
            return load_matrix_market(fh)
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    first = stream.readline()
    if not first:
        raise MatrixMarketHeaderError("empty file", 1)
    fld, sym = _parse_header(first)
    ntok = _FIELDS[fld]

    lineno = 1
    size_line = None
    for raw in stream:
        lineno += 1
        s = raw.strip()
        if s and not s.startswith("%"):
            size_line = s
            break
    if size_line is None:
        raise MatrixMarketHeaderError("missing size line", lineno)
    try:
        nrows, ncols, nnz = (int(t) for t in size_line.split())
    except ValueError:
        raise MatrixMarketHeaderError(f"malformed size line '{size_line}'", lineno) from None
    if nrows != ncols:
        raise NonSquareMatrixError(f"matrix is {nrows}x{ncols}, must be square", lineno)
    if nrows < 0 or nnz < 0:
        raise MatrixMarketHeaderError("negative dimension", lineno)
    n = nrows
    size_lineno = lineno

    body = stream.read()
    clean = body
    if "%" in body:
        clean = "\n".join(l for l in body.splitlines() if not l.lstrip().startswith("%"))
    tokens = clean.split()
    if len(tokens) != nnz * ntok:
        _locate_body_error(body, size_lineno, ntok, nnz)
    try:
        arr = np.array(tokens[0::ntok] + tokens[1::ntok], dtype=INDEX)
    except ValueError:
        _locate_body_error(body, size_lineno, ntok, nnz)
        raise
    rows, cols = arr[:nnz] - 1, arr[nnz:] - 1
    bad = (rows < 0) | (rows >= n) | (cols < 0) | (cols >= n)
    if bad.any():
        k = int(np.argmax(bad))
        line = _entry_line(body, size_lineno, k)
        raise IndexOutOfRangeError(
            f"entry ({rows[k] + 1}, {cols[k] + 1}) outside 1..{n}", line
        )

    A = SparsePatternCSC.from_coo(n, rows, cols, symmetrize=True)
    if sym == "general":
        direct = SparsePatternCSC.from_coo(n, rows, cols, symmetrize=False)
        if direct.m != A.m:
            warnings.warn(
                f"general matrix was not structurally symmetric; added {A.m - direct.m} "
                "mirrored entries",
                AsymmetricPatternWarning,
                stacklevel=2,
            )
    return A


def _entry_line(body: str, size_lineno: int, k: int) -> int:
    seen = 0
    for offset, raw in enumerate(body.splitlines(), start=1):
        s = raw.strip()
        if s and not s.startswith("%"):
            if seen == k:
                return size_lineno + offset
            seen += 1
    return size_lineno + offset


def _locate_body_error(body: str, size_lineno: int, ntok: int, nnz: int):
    seen = 0
    lineno = size_lineno
    for lineno, raw in enumerate(body.splitlines(), start=size_lineno + 1):
        s = raw.strip()
        if not s or s.startswith("%"):
            continue
        parts = s.split()
        if len(parts) != ntok:
            raise MatrixMarketError(f"expected {ntok} fields, got {len(parts)}", lineno)
        try:
            int(parts[0]), int(parts[1])
            for p in parts[2:]:
                float(p)
        except ValueError:
            raise MatrixMarketError(f"malformed entry '{s}'", lineno) from None
        seen += 1
    if seen != nnz:
        raise MatrixMarketError(f"size line declares {nnz} entries, found {seen}", lineno)


def write_matrix_market(A: SparsePatternCSC, stream: TextIO) -> None:
    """Write the lower triangle as a symmetric pattern coordinate file."""
    rows, cols = A.coo()
    keep = rows >= cols
    stream.write("%%MatrixMarket matrix coordinate pattern symmetric\n")
    stream.write(f"{A.n} {A.n} {int(keep.sum())}\n")
    if keep.any():
        np.savetxt(stream, np.column_stack([rows[keep] + 1, cols[keep] + 1]), fmt="%d")


def dumps_matrix_market(A: SparsePatternCSC) -> str:
    buf = io.StringIO()
    write_matrix_market(A, buf)
    return buf.getvalue()
