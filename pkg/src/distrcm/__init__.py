"""Reverse Cuthill-McKee ordering from matrix-algebraic primitives, with a 2D process-grid simulator."""

from .metrics import OrderingReport, bandwidth, envelope_size, report
from .rcm import bfs_levels, pseudo_peripheral, rcm, rcm_with_info
from .sparse import (
    Permutation,
    SparsePatternCSC,
    SparseVec,
    degrees,
    load_matrix_market,
    permute_symmetric,
    write_matrix_market,
)

__all__ = [
    "OrderingReport",
    "Permutation",
    "SparsePatternCSC",
    "SparseVec",
    "bandwidth",
    "bfs_levels",
    "degrees",
    "envelope_size",
    "load_matrix_market",
    "permute_symmetric",
    "pseudo_peripheral",
    "rcm",
    "rcm_with_info",
    "report",
    "write_matrix_market",
]
