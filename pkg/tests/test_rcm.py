import numpy as np
import pytest
from conftest import patterns
from hypothesis import given
from hypothesis import strategies as st
from oracles import components, dense_adjacency, eccentricity, floyd_warshall

from distrcm import generators as gen
from distrcm.metrics import bandwidth
from distrcm.rcm import (
    bfs_levels,
    pseudo_peripheral,
    rcm,
    rcm_order_algebraic,
    rcm_with_info,
    reference_pseudo_peripheral,
    reference_rcm,
)
from distrcm.sparse import SparsePatternCSC, degrees, dense_vec, permute_symmetric


@st.composite
def pattern_and_vertex(draw, max_n=64):
    A = draw(patterns(max_n=max_n))
    return A, draw(st.integers(0, A.n - 1))


class TestBfsLevels:
    def test_path(self):
        ls = bfs_levels(gen.path(4), 0)
        assert [lv.tolist() for lv in ls.levels] == [[0], [1], [2], [3]]
        assert ls.eccentricity == 3

    def test_star_center(self):
        ls = bfs_levels(gen.star(5), 0)
        assert [lv.tolist() for lv in ls.levels] == [[0], [1, 2, 3, 4]]
        assert ls.eccentricity == 1 and ls.width == 4

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            bfs_levels(gen.path(3), 3)

    @given(pattern_and_vertex())
    def test_levels_are_distances(self, Av):
        A, root = Av
        dist = floyd_warshall(A)
        level = bfs_levels(A, root).level_of(A.n)
        assert level.tolist() == dist[root].tolist()

    @given(pattern_and_vertex(max_n=40))
    def test_structure_invariants(self, Av):
        A, root = Av
        ls = bfs_levels(A, root)
        M = dense_adjacency(A)
        assert ls.levels[0].tolist() == [root]
        comp = next(c for c in components(A) if root in c)
        assert ls.vertices().tolist() == comp
        for i in range(1, len(ls.levels)):
            for v in ls.levels[i]:
                assert M[v, ls.levels[i - 1]].any()
                for k in range(i - 1):
                    assert not M[v, ls.levels[k]].any()


class TestPseudoPeripheral:
    def test_path_from_interior(self):
        A = gen.path(4)
        trace = []
        root, ecc = pseudo_peripheral(A, degrees(A), 1, trace=trace)
        assert root in (0, 3) and ecc == 3
        # BFS from 1 has depth 2, shrink picks 3 (depth 3), then 0 (depth 3) and stops
        assert trace == [(1, 2), (3, 3), (0, 3)]
        assert root == 0

    def test_complete_graph(self):
        A = gen.complete(4)
        for s in range(4):
            assert pseudo_peripheral(A, degrees(A), s)[1] == 1

    def test_single_vertex(self):
        A = SparsePatternCSC.from_coo(1, [], [])
        assert pseudo_peripheral(A, degrees(A), 0) == (0, 0)

    def test_out_of_range(self):
        A = gen.path(3)
        with pytest.raises(IndexError):
            pseudo_peripheral(A, degrees(A), -1)

    @given(pattern_and_vertex())
    def test_never_worse_than_start(self, Av):
        A, s = Av
        dist = floyd_warshall(A)
        root, ecc = pseudo_peripheral(A, degrees(A), s)
        assert ecc == eccentricity(dist, root)
        assert ecc >= eccentricity(dist, s)
        assert dist[s, root] >= 0

    @given(pattern_and_vertex())
    def test_trace_strictly_increases(self, Av):
        A, s = Av
        trace = []
        pseudo_peripheral(A, degrees(A), s, trace=trace)
        eccs = [e for _, e in trace]
        assert all(a < b for a, b in zip(eccs[:-2], eccs[1:-1]))
        if len(eccs) >= 2:
            assert eccs[-1] == eccs[-2]
        assert len(trace) <= A.n + 1

    @given(pattern_and_vertex())
    def test_matches_queue_version(self, Av):
        A, s = Av
        D = degrees(A)
        t1, t2 = [], []
        assert pseudo_peripheral(A, D, s, trace=t1) == reference_pseudo_peripheral(A, D, s, trace=t2)
        assert t1 == t2


class TestOrderAlgebraic:
    def test_path_from_endpoint(self):
        A = gen.path(4)
        labels, count = rcm_order_algebraic(A, degrees(A), 0)
        assert labels.entries() == [(0, 0), (1, 1), (2, 2), (3, 3)] and count == 4

    def test_star_from_leaf(self):
        A = gen.star(5)
        labels, count = rcm_order_algebraic(A, degrees(A), 1)
        assert labels.to_dict() == {1: 0, 0: 1, 2: 2, 3: 3, 4: 4}
        assert reference_rcm(A, degrees(A), 1)[0] == labels

    def test_base_label_and_component_only(self):
        A = gen.disjoint_union(gen.path(3), gen.path(3))
        R = dense_vec(6)
        labels, count = rcm_order_algebraic(A, degrees(A), 3, base_label=10, labels=R)
        assert labels.entries() == [(3, 10), (4, 11), (5, 12)] and count == 3
        assert R.tolist() == [-1, -1, -1, 10, 11, 12]

    def test_out_of_range(self):
        A = gen.path(3)
        with pytest.raises(IndexError):
            rcm_order_algebraic(A, degrees(A), 5)
        with pytest.raises(IndexError):
            reference_rcm(A, degrees(A), 5)

    @given(pattern_and_vertex())
    def test_equals_reference(self, Av):
        A, r = Av
        D = degrees(A)
        assert rcm_order_algebraic(A, D, r) == reference_rcm(A, D, r)

    @given(pattern_and_vertex())
    def test_levels_and_parent_order(self, Av):
        A, r = Av
        D = degrees(A)
        labels, count = rcm_order_algebraic(A, D, r)
        cm = labels.to_dict()
        ls = bfs_levels(A, r)
        M = dense_adjacency(A)
        assert sorted(cm.values()) == list(range(count))
        start = 0
        for t, lv in enumerate(ls.levels):
            # vertices labeled in step t are exactly level t
            got = sorted(v for v, lab in cm.items() if start <= lab < start + len(lv))
            assert got == lv.tolist()
            if t:
                parent = {v: min(cm[u] for u in ls.levels[t - 1] if M[v, u]) for v in lv.tolist()}
                by_label = sorted(lv.tolist(), key=lambda v: cm[v])
                assert by_label == sorted(lv.tolist(), key=lambda v: (parent[v], D[v], v))
                assert all(cm[v] > parent[v] for v in lv.tolist())
            start += len(lv)


class TestRcm:
    def test_tridiagonal(self):
        A = gen.tridiagonal(10)
        assert bandwidth(permute_symmetric(A, rcm(A))) == 1

    def test_scrambled_path(self, rng):
        A = gen.scramble(gen.path(6), rng)
        assert bandwidth(A) > 1
        assert bandwidth(permute_symmetric(A, rcm(A))) == 1

    def test_two_paths_contiguous(self):
        A = gen.disjoint_union(gen.path(3), gen.path(3))
        P = rcm(A)
        assert sorted(P.new_label.tolist()) == list(range(6))
        for comp in ([0, 1, 2], [3, 4, 5]):
            labs = sorted(P.new_label[comp].tolist())
            assert labs == list(range(labs[0], labs[0] + 3))

    def test_empty(self):
        assert rcm(SparsePatternCSC.from_coo(0, [], [])).n == 0

    def test_isolated_vertices(self):
        A = gen.diagonal(4)
        info = rcm_with_info(A)
        assert info.components == 4 and info.pseudo_diameter == 0
        assert info.permutation.new_label.tolist() == [3, 2, 1, 0]

    def test_start_override(self):
        A = gen.path(5)
        trace_root = rcm_with_info(A, start=2).roots
        assert trace_root[0] in (0, 4)
        with pytest.raises(IndexError):
            rcm(A, start=9)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            rcm(gen.path(2), method="sloan")

    @given(patterns())
    def test_reversal_and_bijection(self, A):
        info = rcm_with_info(A)
        assert (info.permutation.new_label == A.n - 1 - info.cm_labels).all()
        B = permute_symmetric(A, info.permutation)
        assert B.m == A.m
        assert bandwidth(B) <= max(A.n - 1, 0)

    @given(patterns())
    def test_component_blocks_contiguous(self, A):
        P = rcm(A)
        for comp in components(A):
            labs = sorted(P.new_label[comp].tolist())
            assert labs[-1] - labs[0] == len(comp) - 1

    @given(patterns(), st.data())
    def test_methods_agree_with_start(self, A, data):
        s = data.draw(st.integers(0, A.n - 1))
        assert rcm(A, start=s) == rcm(A, method="reference", start=s)

    def test_grid_graph_bound(self):
        k = 12
        A = gen.scramble(gen.grid2d(k), np.random.default_rng(4))
        assert bandwidth(permute_symmetric(A, rcm(A))) <= k + 1
