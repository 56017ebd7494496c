import json

import numpy as np
import pytest
from conftest import patterns
from hypothesis import given
from oracles import brute_bandwidth, brute_envelope

from distrcm import generators as gen
from distrcm.metrics import (
    OrderingReport,
    bandwidth,
    bandwidth_by_columns,
    column_bandwidths,
    envelope_size,
    report,
)
from distrcm.rcm import rcm, rcm_with_info
from distrcm.sparse import Permutation, SparsePatternCSC, permute_symmetric


@pytest.mark.parametrize(
    "A, bw, env",
    [
        (gen.diagonal(5), 0, 0),
        (gen.tridiagonal(5), 1, 4),
        (gen.arrow(5), 4, 10),
        (SparsePatternCSC.from_coo(0, [], []), 0, 0),
        (SparsePatternCSC.from_coo(3, [], []), 0, 0),
    ],
)
def test_small_cases(A, bw, env):
    assert bandwidth(A) == bw
    assert bandwidth_by_columns(A) == bw
    assert envelope_size(A) == env


def test_column_bandwidths_of_arrow():
    assert column_bandwidths(gen.arrow(5)).tolist() == [0, 1, 2, 3, 4]


def test_no_diagonal_column():
    # column 0 only has an entry below the diagonal
    A = SparsePatternCSC.from_edges(3, [(0, 2)])
    assert column_bandwidths(A).tolist() == [0, 0, 2]


@given(patterns())
def test_formulations_agree(A):
    assert bandwidth(A) == bandwidth_by_columns(A) == brute_bandwidth(A)
    assert envelope_size(A) == brute_envelope(A)


@given(patterns())
def test_bounds(A):
    n = A.n
    assert 0 <= bandwidth(A) <= max(n - 1, 0)
    assert envelope_size(A) <= n * (n - 1) // 2
    rows, cols = A.coo()
    if n >= 2 and (rows != cols).any():
        assert envelope_size(A) >= bandwidth(A)


@given(patterns())
def test_transpose_invariant(A):
    rows, cols = A.coo()
    T = SparsePatternCSC.from_coo(A.n, cols, rows, symmetrize=False)
    assert bandwidth(T) == bandwidth(A)
    assert envelope_size(T) == envelope_size(A)


class TestReport:
    def test_tridiagonal(self):
        A = gen.tridiagonal(5)
        info = rcm_with_info(A)
        r = report(A, info.permutation, info.pseudo_diameter)
        assert (r.bandwidth_before, r.envelope_before) == (1, 4)
        assert (r.bandwidth_after, r.envelope_after) == (1, 4)
        assert r.pseudo_diameter == 4 and r.n == 5 and r.m == 13

    def test_scrambled_path(self):
        A = gen.scramble(gen.path(8), np.random.default_rng(7))
        r = report(A, rcm(A), 7)
        assert r.bandwidth_after == 1 and r.envelope_after == 7

    def test_json_keys(self):
        A = gen.path(3)
        r = report(A, Permutation.identity(3), 2)
        d = json.loads(r.to_json())
        assert set(d) == {f for f in OrderingReport.__dataclass_fields__}
        assert all(isinstance(v, int) for v in d.values())

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            report(gen.path(3), Permutation.identity(4), 0)

    def test_after_matches_permuted(self):
        A = gen.erdos_renyi(30, 0.1, np.random.default_rng(3))
        P = rcm(A)
        r = report(A, P, 0)
        assert r.bandwidth_after == bandwidth(permute_symmetric(A, P))
