"""Reverse Cuthill-McKee ordering.

Two independent routes produce the same permutation:

* the algebraic route expresses BFS, pseudo-peripheral search and level
  labeling with the primitives in :mod:`distrcm.primitives` (SpMSpV over
  the (select2nd, min) semiring, Select, Set, SortPerm, Reduce);
* the reference route is the textbook queue-based procedure.

Ties are always broken by the smaller vertex index, which is what makes
the two routes agree exactly. The algebraic functions accept an ``engine``
object supplying the primitives, so :mod:`distrcm.grid_sim` can run the
very same code on a simulated process grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import primitives as prim
from .sparse import INDEX, Permutation, SparsePatternCSC, SparseVec, degrees, dense_vec


def _unset(v):
    return v == -1


class SerialEngine:
    """Primitive provider for a single address space."""

    def __init__(self, A: SparsePatternCSC):
        self.A = A
        self.n = A.n
        self.bfs_count = 0
        self._ws = np.full(A.n, prim.SELECT2ND_MIN.zero, dtype=INDEX)

    def begin_bfs(self) -> None:
        self.bfs_count += 1

    def spmspv(self, x: SparseVec) -> SparseVec:
        return prim.spmspv(self.A, x, prim.SELECT2ND_MIN, self._ws)

    def select_unset(self, x: SparseVec, y: np.ndarray) -> SparseVec:
        return prim.select(x, y, _unset)

    def assign(self, y: np.ndarray, x: SparseVec) -> np.ndarray:
        return prim.assign(y, x, inplace=True)

    def gather(self, x: SparseVec, y: np.ndarray) -> SparseVec:
        return prim.gather(x, y)

    def sort_perm(self, x: SparseVec, y: np.ndarray, label_range: tuple[int, int]) -> SparseVec:
        return prim.sort_perm(x, y)

    def reduce_argmin(self, x: SparseVec, y: np.ndarray) -> int:
        return prim.reduce_argmin(x, y)

    def nnz(self, x: SparseVec) -> int:
        return x.nnz

    def first_unset(self, y: np.ndarray, start: int) -> int:
        """Smallest index >= start with y == -1, or -1 if none."""
        hits = np.flatnonzero(y[start:] == -1)
        return int(hits[0]) + start if hits.size else -1


# ---------------------------------------------------------------------------
# level structures
# ---------------------------------------------------------------------------


@dataclass
class LevelStructure:
    """BFS levels L_0 = {root}, L_1, ... of the root's component."""

    root: int
    levels: list[np.ndarray]

    @property
    def eccentricity(self) -> int:
        return len(self.levels) - 1

    @property
    def width(self) -> int:
        return max(len(lv) for lv in self.levels)

    def vertices(self) -> np.ndarray:
        return np.sort(np.concatenate(self.levels))

    def level_of(self, n: int) -> np.ndarray:
        """Dense vector of level indices, -1 outside the component."""
        out = dense_vec(n)
        for k, lv in enumerate(self.levels):
            out[lv] = k
        return out


def bfs_levels(A: SparsePatternCSC, root: int) -> LevelStructure:
    """Rooted level structure by plain queue BFS."""
    if not 0 <= root < A.n:
        raise IndexError(f"root {root} outside 0..{A.n - 1}")
    col_ptr = A.col_ptr.tolist()
    row_idx = A.row_idx.tolist()
    seen = {root}
    levels = [[root]]
    while True:
        nxt = []
        for v in levels[-1]:
            for w in row_idx[col_ptr[v]:col_ptr[v + 1]]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        levels.append(nxt)
    return LevelStructure(root, [np.array(sorted(lv), dtype=INDEX) for lv in levels])


def _algebraic_bfs(engine, root: int, level: np.ndarray):
    """Level-synchronous BFS from ``root`` built from the primitives.

    ``level`` is a scratch dense vector that must be all -1 on entry; on
    return it holds the level of each reached vertex. Returns the last
    non-empty frontier, the eccentricity and the list of frontiers.
    """
    engine.begin_bfs()
    n = engine.n
    cur = SparseVec._trusted(n, np.array([root], dtype=INDEX), np.array([0], dtype=INDEX))
    engine.assign(level, cur)
    frontiers = [cur]
    ecc = 0
    while True:
        cur = engine.gather(cur, level)
        nxt = engine.spmspv(cur)
        nxt = engine.select_unset(nxt, level)
        if engine.nnz(nxt) == 0:
            break
        ecc += 1
        nxt = SparseVec._trusted(n, nxt.indices, np.full(nxt.nnz, ecc, dtype=INDEX))
        engine.assign(level, nxt)
        frontiers.append(nxt)
        cur = nxt
    return cur, ecc, frontiers


def _reset(level: np.ndarray, frontiers) -> None:
    for f in frontiers:
        level[f.indices] = -1


def pseudo_peripheral(
    A: SparsePatternCSC,
    D: np.ndarray,
    start: int,
    engine=None,
    trace: list | None = None,
) -> tuple[int, int]:
    """Find a vertex of large eccentricity by repeated BFS, algebraically.

    From the current root, the minimum-degree vertex of the last level
    (ties: smallest index) is tried as the next root; it is kept while its
    level structure is strictly deeper. The root of the last BFS run is
    returned with its eccentricity. ``trace`` collects ``(root, ecc)`` for
    every BFS performed.
    """
    if not 0 <= start < A.n:
        raise IndexError(f"start {start} outside 0..{A.n - 1}")
    engine = engine or SerialEngine(A)
    level = dense_vec(A.n)

    root = start
    last, ecc, frontiers = _algebraic_bfs(engine, root, level)
    _reset(level, frontiers)
    if trace is not None:
        trace.append((root, ecc))
    while True:
        cand = engine.reduce_argmin(last, D)
        if cand == root:
            break
        cand_last, cand_ecc, frontiers = _algebraic_bfs(engine, cand, level)
        _reset(level, frontiers)
        if trace is not None:
            trace.append((cand, cand_ecc))
        improved = cand_ecc > ecc
        root, last, ecc = cand, cand_last, cand_ecc
        if not improved:
            break
    return root, ecc


def reference_pseudo_peripheral(
    A: SparsePatternCSC, D: np.ndarray, start: int, trace: list | None = None
) -> tuple[int, int]:
    """Same contract as :func:`pseudo_peripheral`, via queue BFS."""
    ls = bfs_levels(A, start)
    if trace is not None:
        trace.append((start, ls.eccentricity))
    while True:
        last = ls.levels[-1].tolist()
        cand = min(last, key=lambda v: (D[v], v))
        if cand == ls.root:
            break
        nxt = bfs_levels(A, cand)
        if trace is not None:
            trace.append((cand, nxt.eccentricity))
        improved = nxt.eccentricity > ls.eccentricity
        ls = nxt
        if not improved:
            break
    return ls.root, ls.eccentricity


# ---------------------------------------------------------------------------
# Cuthill-McKee labeling of one component
# ---------------------------------------------------------------------------


def rcm_order_algebraic(
    A: SparsePatternCSC,
    D: np.ndarray,
    r: int,
    base_label: int = 0,
    labels: np.ndarray | None = None,
    engine=None,
) -> tuple[SparseVec, int]:
    """Cuthill-McKee labels for the component of ``r``, starting at ``base_label``.

    Each step expands the frontier with SpMSpV over (select2nd, min), so a
    child adopts its smallest-labeled parent, drops visited vertices, and
    ranks the survivors by (parent label, degree, index).

    ``labels`` is an optional shared dense vector (-1 = unlabeled) updated
    in place; vertices outside this component must already be labeled or
    unreachable. Labels are not reversed here.
    """
    if not 0 <= r < A.n:
        raise IndexError(f"root {r} outside 0..{A.n - 1}")
    engine = engine or SerialEngine(A)
    n = A.n
    R = labels if labels is not None else dense_vec(n)

    cur = SparseVec._trusted(n, np.array([r], dtype=INDEX), np.array([base_label], dtype=INDEX))
    engine.begin_bfs()
    engine.assign(R, cur)
    level_start, nv = base_label, base_label + 1
    members = [cur.indices]
    while engine.nnz(cur):
        cur = engine.gather(cur, R)
        nxt = engine.spmspv(cur)
        nxt = engine.select_unset(nxt, R)
        ranks = engine.sort_perm(nxt, D, (level_start, nv))
        count = engine.nnz(ranks)
        ranks = SparseVec._trusted(n, ranks.indices, ranks.values + nv)
        engine.assign(R, ranks)
        level_start, nv = nv, nv + count
        members.append(nxt.indices)
        cur = nxt
    idx = np.sort(np.concatenate(members))
    return SparseVec._trusted(n, idx, R[idx].copy()), nv - base_label


def reference_rcm(
    A: SparsePatternCSC,
    D: np.ndarray,
    r: int,
    base_label: int = 0,
    labels: np.ndarray | None = None,
) -> tuple[SparseVec, int]:
    """Queue-based Cuthill-McKee labeling with the same contract as the algebraic one."""
    if not 0 <= r < A.n:
        raise IndexError(f"root {r} outside 0..{A.n - 1}")
    col_ptr = A.col_ptr.tolist()
    row_idx = A.row_idx.tolist()
    deg = D.tolist()
    R = labels if labels is not None else dense_vec(A.n)
    order = [r]
    R[r] = base_label
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        fresh = {w for w in row_idx[col_ptr[v]:col_ptr[v + 1]] if R[w] == -1 and w != v}
        for w in sorted(fresh, key=lambda w: (deg[w], w)):
            R[w] = base_label + len(order)
            order.append(w)
    idx = np.array(sorted(order), dtype=INDEX)
    return SparseVec(A.n, idx, R[idx]), len(order)


# ---------------------------------------------------------------------------
# whole-matrix driver
# ---------------------------------------------------------------------------


@dataclass
class RCMResult:
    permutation: Permutation
    cm_labels: np.ndarray
    roots: list[int] = field(default_factory=list)
    eccentricities: list[int] = field(default_factory=list)

    @property
    def components(self) -> int:
        return len(self.roots)

    @property
    def pseudo_diameter(self) -> int:
        return max(self.eccentricities, default=0)


def _component_seed_algebraic(engine, D, v, start, level):
    _, _, frontiers = _algebraic_bfs(engine, v, level)
    _reset(level, frontiers)
    idx = np.sort(np.concatenate([f.indices for f in frontiers]))
    comp = SparseVec._trusted(engine.n, idx, np.zeros(idx.size, dtype=INDEX))
    if start is not None and start in set(idx.tolist()):
        return start
    return engine.reduce_argmin(comp, D)


def rcm_with_info(
    A: SparsePatternCSC,
    method: str = "algebraic",
    start: int | None = None,
    engine=None,
) -> RCMResult:
    """RCM ordering plus per-component roots and eccentricities.

    Components are visited in order of their smallest vertex. Each one is
    seeded at its minimum-degree vertex (or at ``start`` if it belongs to
    that component), refined by the pseudo-peripheral search and labeled.
    Cuthill-McKee labels are consecutive across components and reversed
    once globally.
    """
    if method not in ("algebraic", "reference"):
        raise ValueError(f"unknown method {method!r}")
    n = A.n
    if start is not None and not 0 <= start < n:
        raise IndexError(f"start {start} outside 0..{n - 1}")
    D = degrees(A)
    R = dense_vec(n)
    roots, eccs = [], []
    nv = 0

    if method == "algebraic":
        engine = engine or SerialEngine(A)
        level = dense_vec(n)
        v = engine.first_unset(R, 0) if n else -1
        while v != -1:
            seed = _component_seed_algebraic(engine, D, v, start, level)
            root, ecc = pseudo_peripheral(A, D, seed, engine=engine)
            _, count = rcm_order_algebraic(A, D, root, nv, labels=R, engine=engine)
            roots.append(root)
            eccs.append(ecc)
            nv += count
            v = engine.first_unset(R, v)
    else:
        deg = D.tolist()
        for v in range(n):
            if R[v] != -1:
                continue
            comp = bfs_levels(A, v).vertices().tolist()
            seed = start if start is not None and start in comp else min(comp, key=lambda u: (deg[u], u))
            root, ecc = reference_pseudo_peripheral(A, D, seed)
            _, count = reference_rcm(A, D, root, nv, labels=R)
            roots.append(root)
            eccs.append(ecc)
            nv += count

    assert nv == n
    return RCMResult(Permutation(n - 1 - R), R, roots, eccs)


def rcm(A: SparsePatternCSC, method: str = "algebraic", start: int | None = None) -> Permutation:
    """Reverse Cuthill-McKee permutation of ``A`` (``new_label[v]`` per vertex)."""
    return rcm_with_info(A, method=method, start=start).permutation
