"""Deterministic simulation of RCM on a logical p_r x p_c worker grid.

Worker (i, j) owns the matrix block with rows in row block i and columns in
column block j; blocks are ceil(n/p_r) x ceil(n/p_c) with a short tail.
Length-n vectors are split into p contiguous pieces in row-major worker
order, row block i being shared by the p_c workers of grid row i.

Each distributed primitive runs in bulk-synchronous rounds: every worker
computes locally, then a collective moves data. Collectives are accounted
with a fixed pairwise convention:

* AllGather / AllToAll over a group of g workers: g*(g-1) messages;
* AllReduce / scan over all p workers: 2p messages;
* point-to-point redistribution: one message per non-empty (src, dst) pair;
* groups of a single worker cost nothing.

A word is one integer; an (index, value) pair costs 2, a triple 3. Flops
count the multiplications of the local SpMSpV kernels, the comparisons of
reductions, n log n for the bucket sorts, and one per entry touched by
Select/Set.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import TextIO

import numpy as np

from . import primitives as prim
from .rcm import RCMResult, rcm_with_info
from .sparse import INDEX, Permutation, SparsePatternCSC, SparseVec, permute_symmetric

PRIMITIVES = ("spmspv", "sortperm", "reduce", "other")


class GridSizeWarning(UserWarning):
    pass


@dataclass
class Counts:
    messages: int = 0
    words: int = 0
    flops: int = 0


@dataclass
class CommStats:
    """Flop, message and word totals with a per-primitive breakdown."""

    messages: int = 0
    words: int = 0
    flops: int = 0
    iters: int = 0
    by_primitive: dict[str, Counts] = field(
        default_factory=lambda: {k: Counts() for k in PRIMITIVES}
    )

    def add(self, primitive: str, messages: int = 0, words: int = 0, flops: int = 0) -> None:
        if min(messages, words, flops) < 0:
            raise ValueError("counters only grow")
        c = self.by_primitive[primitive]
        c.messages += messages
        c.words += words
        c.flops += flops
        self.messages += messages
        self.words += words
        self.flops += flops

    def modeled_time(self, alpha: float, beta_inv: float) -> float:
        """T = F + alpha*S + beta_inv*W, in units of one arithmetic operation."""
        return self.flops + alpha * self.messages + beta_inv * self.words

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class TraceEvent:
    step: int
    primitive: str
    collective: str
    scope: str
    messages: int
    words: int
    entries_in: int
    entries_out: int
    max_received: int = 0


def write_trace_csv(trace: list[TraceEvent], stream: TextIO) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["step", "primitive", "scope", "messages", "words"])
    for ev in trace:
        w.writerow([ev.step, ev.primitive, ev.scope, ev.messages, ev.words])


@dataclass
class Block:
    """Local CSC block: block-local columns, global row ids."""

    col_lo: int
    col_ptr: np.ndarray
    row_idx: np.ndarray

    @property
    def nnz(self) -> int:
        return int(self.row_idx.size)


def _bounds(length: int, parts: int, offset: int = 0) -> np.ndarray:
    size = -(-length // parts) if length else 0
    return offset + np.minimum(np.arange(parts + 1, dtype=INDEX) * size, length)


@dataclass
class DistSparseVec:
    """A sparse vector in the row-aligned layout.

    Entries are kept as one index-sorted stream; worker r owns the slice
    with ``bounds[r] <= index < bounds[r + 1]``.
    """

    length: int
    indices: np.ndarray
    values: np.ndarray
    bounds: np.ndarray

    @property
    def pieces(self) -> list[tuple[np.ndarray, np.ndarray]]:
        cuts = np.searchsorted(self.indices, self.bounds)
        return [(self.indices[a:b], self.values[a:b]) for a, b in zip(cuts[:-1].tolist(), cuts[1:].tolist())]

    def gather(self) -> SparseVec:
        return SparseVec._trusted(self.length, self.indices, self.values)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)


class GridContext:
    """A pattern distributed over a p_r x p_c grid, plus its accounting state."""

    def __init__(
        self,
        A: SparsePatternCSC,
        p_r: int,
        p_c: int,
        relabel: Permutation | None = None,
        schedule_seed: int | None = None,
    ):
        if p_r < 1 or p_c < 1:
            raise ValueError("grid dimensions must be positive")
        if p_r > max(A.n, 1) or p_c > max(A.n, 1):
            warnings.warn(
                f"{p_r}x{p_c} grid exceeds n={A.n}; some workers own nothing",
                GridSizeWarning,
                stacklevel=3,
            )
        self.A = A
        self.n = A.n
        self.p_r, self.p_c = p_r, p_c
        self.p = p_r * p_c
        self.relabel = relabel
        self.row_bounds = _bounds(A.n, p_r)
        self.col_bounds = _bounds(A.n, p_c)

        # vector ownership: row block i split among the p_c workers of grid row i
        self.vec_bounds = np.concatenate(
            [_bounds(int(self.row_bounds[i + 1] - self.row_bounds[i]), p_c, int(self.row_bounds[i]))[:-1]
             for i in range(p_r)] + [np.array([A.n], dtype=INDEX)]
        )
        # gather layout: column block j split among the p_r workers of grid column j
        starts, ranks = [], []
        for j in range(p_c):
            lo, hi = int(self.col_bounds[j]), int(self.col_bounds[j + 1])
            b = _bounds(hi - lo, p_r, lo)
            for i in range(p_r):
                starts.append(b[i])
                ranks.append(i * p_c + j)
        self.colpiece_bounds = np.array(starts + [A.n], dtype=INDEX)
        self.colpiece_rank = np.array(ranks, dtype=INDEX)

        self.blocks = self._build_blocks()
        self.schedule = list(range(self.p))
        self._group_cache: dict[str, list[list[int]]] = {}
        self._group_of: dict[str, np.ndarray] = {}
        if schedule_seed is not None:
            np.random.default_rng(schedule_seed).shuffle(self.schedule)
        self.reset_stats()

    def _build_blocks(self) -> dict[tuple[int, int], Block]:
        rows, cols = self.A.coo()
        bi = np.searchsorted(self.row_bounds, rows, side="right") - 1
        bj = np.searchsorted(self.col_bounds, cols, side="right") - 1
        key = bi * self.p_c + bj
        order = np.argsort(key, kind="stable")  # keeps column-major, row-sorted order
        splits = np.searchsorted(key[order], np.arange(self.p + 1))
        blocks = {}
        for i in range(self.p_r):
            for j in range(self.p_c):
                sel = order[splits[i * self.p_c + j]:splits[i * self.p_c + j + 1]]
                lo, hi = int(self.col_bounds[j]), int(self.col_bounds[j + 1])
                col_ptr = np.zeros(hi - lo + 1, dtype=INDEX)
                np.cumsum(np.bincount(cols[sel] - lo, minlength=hi - lo), out=col_ptr[1:])
                blocks[i, j] = Block(lo, col_ptr, rows[sel])
        return blocks

    def rank(self, i: int, j: int) -> int:
        return i * self.p_c + j

    def coords(self, rank: int) -> tuple[int, int]:
        return divmod(rank, self.p_c)

    def owner(self, v) -> np.ndarray:
        """Rank owning vector entry v (row-aligned layout)."""
        return np.searchsorted(self.vec_bounds, v, side="right") - 1

    def column_piece_owner(self, v) -> np.ndarray:
        """Rank holding v in the column-aligned layout used before AllGather."""
        return self.colpiece_rank[np.searchsorted(self.colpiece_bounds, v, side="right") - 1]

    def reset_stats(self) -> None:
        self.stats = CommStats()
        self.trace: list[TraceEvent] = []

    def scatter(self, x: SparseVec) -> DistSparseVec:
        if x.length != self.n:
            raise ValueError(f"vector length {x.length} != n={self.n}")
        return DistSparseVec(self.n, x.indices, x.values, self.vec_bounds)

    # -- collectives --------------------------------------------------------

    def _log(self, primitive, collective, scope, messages, words, entries_in, entries_out, max_received=0):
        self.stats.add(primitive, messages=messages, words=words)
        self.trace.append(
            TraceEvent(
                len(self.trace), primitive, collective, scope, messages, words,
                entries_in, entries_out, max_received,
            )
        )

    def _groups(self, scope: str) -> list[list[int]]:
        if scope not in self._group_cache:
            if scope == "grid-row":
                g = [[self.rank(i, j) for j in range(self.p_c)] for i in range(self.p_r)]
            elif scope == "grid-column":
                g = [[self.rank(i, j) for i in range(self.p_r)] for j in range(self.p_c)]
            else:
                g = [list(range(self.p))]
            self._group_cache[scope] = g
            of = np.empty(self.p, dtype=INDEX)
            for k, members in enumerate(g):
                of[members] = k
            self._group_of[scope] = of
        return self._group_cache[scope]

    # Collectives take one flat entry list with per-entry source and
    # destination ranks. Receiver r's buffer is the entries with dst == r in
    # source-rank order; callers read it straight from the sorted stream
    # instead of copying it into per-pair buffers.

    def _delivered(self, dst: np.ndarray) -> tuple[int, int]:
        if dst.size == 0:
            return 0, 0
        per_dst = np.bincount(dst, minlength=self.p)
        return int(per_dst.sum()), int(per_dst.max())

    def alltoall(self, primitive: str, scope: str, src: np.ndarray, dst: np.ndarray, words_per_entry: int) -> None:
        """Personalized exchange inside each group of ``scope``."""
        groups = self._groups(scope)
        of = self._group_of[scope]
        if src.size and (of[src] != of[dst]).any():
            k = int(np.flatnonzero(of[src] != of[dst])[0])
            raise RuntimeError(f"{int(src[k])}->{int(dst[k])} crosses {scope} groups")
        words = int(np.count_nonzero(src != dst)) * words_per_entry
        received, peak = self._delivered(dst)
        messages = sum(len(g) * (len(g) - 1) for g in groups)
        self._log(primitive, "alltoall", scope, messages, words, int(src.size), received, peak)

    def allgather(self, primitive: str, scope: str, sizes: np.ndarray, words_per_entry: int) -> None:
        """Every member of a group receives every member's piece; ``sizes`` is per rank."""
        messages = words = total = 0
        for members in self._groups(scope):
            g = len(members)
            entries = int(sizes[members].sum())
            total += entries
            messages += g * (g - 1)
            words += entries * words_per_entry * (g - 1)
        self._log(primitive, "allgather", scope, messages, words, total, total)

    def allreduce(self, primitive: str, words_per_worker: int, collective: str = "allreduce") -> None:
        p = self.p
        messages = 2 * p if p > 1 else 0
        words = 2 * (p - 1) * words_per_worker
        self._log(primitive, collective, "all", messages, words, p * words_per_worker, p * words_per_worker)

    def exchange(self, primitive: str, src: np.ndarray, dst: np.ndarray, words_per_entry: int) -> None:
        """Point-to-point redistribution across the whole grid."""
        off = src != dst
        pairs = np.bincount(src[off] * self.p + dst[off], minlength=self.p * self.p) if off.any() else ()
        messages = int(np.count_nonzero(pairs))
        words = int(np.count_nonzero(off)) * words_per_entry
        received, peak = self._delivered(dst)
        self._log(primitive, "p2p", "all", messages, words, int(src.size), received, peak)


def distribute(
    A: SparsePatternCSC,
    p_r: int,
    p_c: int | None = None,
    seed: int = 0,
    randomize: bool = False,
    schedule_seed: int | None = None,
) -> GridContext:
    """Tile ``A`` over a p_r x p_c grid (square if ``p_c`` is omitted).

    With ``randomize`` the vertices are first relabeled by a permutation
    drawn from ``seed``; :func:`dist_rcm` maps its output back.
    """
    p_c = p_r if p_c is None else p_c
    relabel = None
    if randomize:
        relabel = Permutation(np.random.default_rng(seed).permutation(A.n))
        A = permute_symmetric(A, relabel)
    return GridContext(A, p_r, p_c, relabel=relabel, schedule_seed=schedule_seed)


def _combine(rows: np.ndarray, vals: np.ndarray, sr: prim.Semiring):
    """Fold values of equal rows with sr.add in stream order; returns sorted unique rows."""
    if rows.size == 0:
        return rows, vals
    order = np.argsort(rows, kind="stable")
    rows, vals = rows[order], vals[order]
    heads = np.concatenate([[True], rows[1:] != rows[:-1]])
    if sr.add_ufunc is not None:
        return rows[heads], sr.add_ufunc.reduceat(vals, np.flatnonzero(heads))
    acc: dict[int, int] = {}
    for r, v in zip(rows.tolist(), vals.tolist()):
        acc[r] = sr.add(acc[r], v) if r in acc else v
    keys = np.array(sorted(acc), dtype=INDEX)
    return keys, np.array([acc[k] for k in keys.tolist()], dtype=INDEX)


def _check_layout(ctx: GridContext, x: DistSparseVec) -> None:
    if x.length != ctx.n or (x.bounds is not ctx.vec_bounds and not np.array_equal(x.bounds, ctx.vec_bounds)):
        raise ValueError("distributed vector does not match the grid")


def dist_spmspv(ctx: GridContext, x: DistSparseVec, sr: prim.Semiring = prim.SELECT2ND_MIN) -> DistSparseVec:
    """2D SpMSpV: redistribute, AllGather along columns, multiply, AllToAll along rows.

    The column-aligned redistribution step moves each frontier entry from its
    row-aligned owner to the worker that contributes it to the column-wide
    AllGather (a transpose-like exchange on square grids).
    """
    _check_layout(ctx, x)
    idx, val = x.indices, x.values
    empty = np.empty(0, dtype=INDEX)

    # phase 0: row-aligned owners -> column-aligned holders
    holder = ctx.column_piece_owner(idx)
    ctx.exchange("spmspv", ctx.owner(idx), holder, words_per_entry=2)

    # phase 1: AllGather of the column block's frontier segment. Holders of
    # column block j own consecutive index ranges, so the gathered segment is
    # the slice of the sorted frontier falling in that block.
    ctx.allgather("spmspv", "grid-column", np.bincount(holder, minlength=ctx.p), words_per_entry=2)
    cuts = np.searchsorted(idx, ctx.col_bounds).tolist()

    # phase 2: local multiply on block (i, j)
    partial = {}
    flops = 0
    for r in ctx.schedule:
        i, j = ctx.coords(r)
        blk = ctx.blocks[i, j]
        if cuts[j] == cuts[j + 1] or blk.row_idx.size == 0:
            continue
        xi, xv = idx[cuts[j]:cuts[j + 1]], val[cuts[j]:cuts[j + 1]]
        rows, vals, f = prim.accumulate(blk.col_ptr, blk.row_idx, blk.col_lo, xi, xv, sr)
        flops += f
        if rows.size:
            partial[r] = (rows, vals)
    ctx.stats.add("spmspv", flops=flops)

    # phase 3: AllToAll along grid rows, merging at the row-aligned owners
    senders = sorted(partial)
    if senders:
        rows = np.concatenate([partial[r][0] for r in senders])
        vals = np.concatenate([partial[r][1] for r in senders])
        src = np.repeat(np.array(senders, dtype=INDEX), [partial[r][0].size for r in senders])
    else:
        rows = vals = src = empty
    ctx.alltoall("spmspv", "grid-row", src, ctx.owner(rows), words_per_entry=2)
    out_idx, out_val = _combine(rows, vals, sr)
    return DistSparseVec(ctx.n, out_idx, out_val, ctx.vec_bounds)


def dist_sort_perm(
    ctx: GridContext,
    x: DistSparseVec,
    y: np.ndarray,
    label_range: tuple[int, int] | None = None,
) -> DistSparseVec:
    """Distributed bucket sort of (x[i], y[i], i) tuples; returns 0-based ranks.

    Worker b sorts the tuples whose label falls in the b-th of p equal
    slices of ``label_range`` (half-open; default ``[0, max+1)``). Bucket
    sizes are prefix-summed to turn local positions into global ranks,
    which a second AllToAll returns to the vertex owners.
    """
    _check_layout(ctx, x)
    if len(y) != ctx.n:
        raise ValueError("length mismatch")
    p = ctx.p
    idx, lab = x.indices, x.values
    if label_range is None:
        ctx.allreduce("sortperm", 1)
        hi = int(lab.max()) + 1 if lab.size else 0
        label_range = (0, max(hi, 1))
    lo, hi = label_range
    span = hi - lo
    if lab.size and (lab.min() < lo or lab.max() >= hi):
        raise ValueError(f"labels outside [{lo}, {hi})")

    bucket = ((lab - lo) * p) // max(span, 1)
    ctx.alltoall("sortperm", "all", ctx.owner(idx), bucket, words_per_entry=3)

    # buckets are label slices, so the global lexicographic order visits
    # bucket 0's local sort, then bucket 1's, and so on
    order = np.lexsort((idx, y[idx], lab))
    sizes = np.bincount(bucket, minlength=p).tolist() if idx.size else [0] * p
    ctx.stats.add("sortperm", flops=sum(k * max(1, (k - 1).bit_length()) for k in sizes if k))

    ctx.allreduce("sortperm", 1, collective="scan")
    # bucket offset + local position is the position in the global order
    ranks = np.empty(idx.size, dtype=INDEX)
    ranks[order] = np.arange(idx.size, dtype=INDEX)

    ctx.alltoall("sortperm", "all", bucket[order], ctx.owner(idx[order]), words_per_entry=2)
    return DistSparseVec(ctx.n, idx, ranks, ctx.vec_bounds)


def dist_reduce_argmin(ctx: GridContext, x: DistSparseVec, y: np.ndarray) -> int:
    """Global argmin of y over ind(x) via local scans and an AllReduce of (value, index)."""
    _check_layout(ctx, x)
    best = None
    for idx, _ in x.pieces:
        if idx.size:
            k = int(np.argmin(y[idx]))
            cand = (int(y[idx[k]]), int(idx[k]))
            best = cand if best is None or cand < best else best
    ctx.stats.add("reduce", flops=x.nnz)
    ctx.allreduce("reduce", 2)
    if best is None:
        raise ValueError("reduce_argmin of an empty sparse vector")
    return best[1]


class GridEngine:
    """Primitive provider that routes every call through the grid simulation."""

    def __init__(self, ctx: GridContext, sr: prim.Semiring = prim.SELECT2ND_MIN):
        self.ctx = ctx
        self.n = ctx.n
        self.sr = sr

    def begin_bfs(self) -> None:
        self.ctx.stats.iters += 1

    def spmspv(self, x: SparseVec) -> SparseVec:
        return dist_spmspv(self.ctx, self.ctx.scatter(x), self.sr).gather()

    def sort_perm(self, x: SparseVec, y: np.ndarray, label_range) -> SparseVec:
        return dist_sort_perm(self.ctx, self.ctx.scatter(x), y, label_range).gather()

    def reduce_argmin(self, x: SparseVec, y: np.ndarray) -> int:
        return dist_reduce_argmin(self.ctx, self.ctx.scatter(x), y)

    # owner-local operations: sparse and dense pieces are co-located
    def select_unset(self, x: SparseVec, y: np.ndarray) -> SparseVec:
        self.ctx.stats.add("other", flops=x.nnz)
        return prim.select(x, y, lambda v: v == -1)

    def assign(self, y: np.ndarray, x: SparseVec) -> np.ndarray:
        self.ctx.stats.add("other", flops=x.nnz)
        return prim.assign(y, x, inplace=True)

    def gather(self, x: SparseVec, y: np.ndarray) -> SparseVec:
        self.ctx.stats.add("other", flops=x.nnz)
        return prim.gather(x, y)

    def nnz(self, x: SparseVec) -> int:
        self.ctx.allreduce("other", 1)
        return x.nnz

    def first_unset(self, y: np.ndarray, start: int) -> int:
        self.ctx.allreduce("other", 1)
        hits = np.flatnonzero(y[start:] == -1)
        return int(hits[0]) + start if hits.size else -1


@dataclass
class DistRCMResult:
    permutation: Permutation
    stats: CommStats
    trace: list[TraceEvent]
    detail: RCMResult


def dist_rcm_with_info(ctx: GridContext, start: int | None = None) -> DistRCMResult:
    ctx.reset_stats()
    if start is not None and ctx.relabel is not None:
        start = int(ctx.relabel.new_label[start])
    res = rcm_with_info(ctx.A, method="algebraic", start=start, engine=GridEngine(ctx))
    perm = res.permutation
    if ctx.relabel is not None:
        perm = ctx.relabel.then(perm)
    return DistRCMResult(perm, ctx.stats, list(ctx.trace), res)


def dist_rcm(ctx: GridContext, start: int | None = None) -> tuple[Permutation, CommStats]:
    """RCM through the simulated grid; statistics are reset at the start."""
    res = dist_rcm_with_info(ctx, start=start)
    return res.permutation, res.stats
