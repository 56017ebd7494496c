"""Bandwidth and envelope (profile) of symmetric sparsity patterns."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .sparse import INDEX, Permutation, SparsePatternCSC, permute_symmetric


def column_bandwidths(A: SparsePatternCSC) -> np.ndarray:
    """beta_i = i - (first row index in column i), clipped at 0.

    A column whose first entry is on or below the diagonal contributes 0.
    """
    idx = np.arange(A.n, dtype=INDEX)
    nonempty = np.diff(A.col_ptr) > 0
    first = idx.copy()
    first[nonempty] = A.row_idx[A.col_ptr[:-1][nonempty]]
    return np.maximum(idx - first, 0)


def bandwidth(A: SparsePatternCSC) -> int:
    """max |i - j| over stored entries; 0 for an empty or diagonal pattern."""
    if A.m == 0:
        return 0
    rows, cols = A.coo()
    return int(np.abs(rows - cols).max())


def bandwidth_by_columns(A: SparsePatternCSC) -> int:
    """Bandwidth as max_i beta_i, the first-nonzero-per-column formulation."""
    return int(column_bandwidths(A).max(initial=0))


def envelope_size(A: SparsePatternCSC) -> int:
    """Profile: sum of the column bandwidths."""
    return int(column_bandwidths(A).sum())


@dataclass
class OrderingReport:
    n: int
    m: int
    bandwidth_before: int
    bandwidth_after: int
    envelope_before: int
    envelope_after: int
    pseudo_diameter: int
    components: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def report(A: SparsePatternCSC, P: Permutation, ecc: int, components: int = 1) -> OrderingReport:
    """Quality summary of ordering ``P`` applied to ``A``."""
    if P.n != A.n:
        raise ValueError(f"permutation has size {P.n}, matrix has n={A.n}")
    B = permute_symmetric(A, P)
    return OrderingReport(
        n=A.n,
        m=A.m,
        bandwidth_before=bandwidth(A),
        bandwidth_after=bandwidth(B),
        envelope_before=envelope_size(A),
        envelope_after=envelope_size(B),
        pseudo_diameter=int(ecc),
        components=int(components),
    )
