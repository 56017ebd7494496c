"""Small synthetic graphs for tests and experiments."""

from __future__ import annotations

import numpy as np

from .sparse import INDEX, Permutation, SparsePatternCSC, permute_symmetric


def path(n: int) -> SparsePatternCSC:
    i = np.arange(max(n - 1, 0))
    return SparsePatternCSC.from_coo(n, i, i + 1)


def tridiagonal(n: int) -> SparsePatternCSC:
    """Path plus a full diagonal."""
    i = np.arange(max(n - 1, 0))
    d = np.arange(n)
    return SparsePatternCSC.from_coo(n, np.concatenate([i, d]), np.concatenate([i + 1, d]))


def diagonal(n: int) -> SparsePatternCSC:
    d = np.arange(n)
    return SparsePatternCSC.from_coo(n, d, d)


def star(n: int, center: int = 0) -> SparsePatternCSC:
    leaves = np.array([v for v in range(n) if v != center], dtype=INDEX)
    return SparsePatternCSC.from_coo(n, np.full(leaves.size, center), leaves)


def arrow(n: int) -> SparsePatternCSC:
    """Dense first row/column plus the diagonal."""
    d = np.arange(n)
    return SparsePatternCSC.from_coo(n, np.concatenate([np.zeros(n, dtype=INDEX), d]), np.concatenate([d, d]))


def complete(n: int) -> SparsePatternCSC:
    r, c = np.triu_indices(n, 1)
    return SparsePatternCSC.from_coo(n, r, c)


def grid2d(k: int, ell: int | None = None) -> SparsePatternCSC:
    """5-point stencil graph on a k x ell mesh, row-major numbering."""
    ell = k if ell is None else ell
    ids = np.arange(k * ell).reshape(k, ell)
    horiz = (ids[:, :-1].ravel(), ids[:, 1:].ravel())
    vert = (ids[:-1, :].ravel(), ids[1:, :].ravel())
    return SparsePatternCSC.from_coo(
        k * ell, np.concatenate([horiz[0], vert[0]]), np.concatenate([horiz[1], vert[1]])
    )


def erdos_renyi(n: int, p: float, rng: np.random.Generator) -> SparsePatternCSC:
    r, c = np.triu_indices(n, 1)
    keep = rng.random(r.size) < p
    return SparsePatternCSC.from_coo(n, r[keep], c[keep])


def random_tree(n: int, rng: np.random.Generator) -> SparsePatternCSC:
    """Uniform random recursive tree on a shuffled vertex set."""
    if n <= 1:
        return SparsePatternCSC.from_coo(n, [], [])
    child = np.arange(1, n)
    parent = np.array([rng.integers(0, v) for v in child], dtype=INDEX)
    T = SparsePatternCSC.from_coo(n, parent, child)
    return scramble(T, rng)


def disjoint_union(*graphs: SparsePatternCSC) -> SparsePatternCSC:
    rows, cols, off = [], [], 0
    for G in graphs:
        r, c = G.coo()
        rows.append(r + off)
        cols.append(c + off)
        off += G.n
    if not rows:
        return SparsePatternCSC.from_coo(0, [], [])
    return SparsePatternCSC.from_coo(off, np.concatenate(rows), np.concatenate(cols), symmetrize=False)


def random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    return Permutation(rng.permutation(n))


def scramble(A: SparsePatternCSC, rng: np.random.Generator) -> SparsePatternCSC:
    return permute_symmetric(A, random_permutation(A.n, rng))


def with_self_loops(A: SparsePatternCSC, vertices) -> SparsePatternCSC:
    rows, cols = A.coo()
    v = np.asarray(list(vertices), dtype=INDEX)
    return SparsePatternCSC.from_coo(A.n, np.concatenate([rows, v]), np.concatenate([cols, v]))


def random_suite(count: int, seed: int = 0, max_n: int = 64) -> list[tuple[str, SparsePatternCSC]]:
    """Seed-deterministic mix of ER graphs, trees and forests with n <= max_n.

    Roughly a third of the ER graphs are sparse enough to fall apart into
    several components; forests and tree+ER unions are disconnected unless one part is empty.
    """
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        kind = k % 4
        n = int(rng.integers(1, max_n + 1))
        if kind == 0:
            p = float(rng.uniform(0.5, 4.0)) / max(n, 1)
            G = erdos_renyi(n, p, rng)
            name = f"er{k}"
        elif kind == 1:
            G = random_tree(n, rng)
            name = f"tree{k}"
        elif kind == 2:
            a = int(rng.integers(0, n + 1))
            G = scramble(disjoint_union(random_tree(a, rng), random_tree(n - a, rng)), rng)
            name = f"forest{k}"
        else:
            a = int(rng.integers(0, n + 1))
            p = float(rng.uniform(1.0, 3.0)) / max(n - a, 1)
            G = disjoint_union(random_tree(a, rng), erdos_renyi(n - a, p, rng))
            if rng.random() < 0.3:
                G = with_self_loops(G, rng.choice(n, size=min(n, 3), replace=False))
            G = scramble(G, rng)
            name = f"mixed{k}"
        out.append((name, G))
    return out
