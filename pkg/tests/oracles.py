"""Brute-force reference computations, deliberately naive and independent of distrcm internals."""

import numpy as np


def dense_adjacency(A):
    """Boolean n x n adjacency without self-loops, built entry by entry."""
    M = np.zeros((A.n, A.n), dtype=bool)
    for j in range(A.n):
        for k in range(A.col_ptr[j], A.col_ptr[j + 1]):
            i = int(A.row_idx[k])
            if i != j:
                M[i, j] = True
    return M


def entry_set(A):
    out = set()
    for j in range(A.n):
        for k in range(A.col_ptr[j], A.col_ptr[j + 1]):
            out.add((int(A.row_idx[k]), j))
    return out


def brute_spmspv_min(A, x_pairs):
    """out[j] = min x[k] over frontier k adjacent to j (k != j)."""
    M = dense_adjacency(A)
    out = {}
    for j in range(A.n):
        vals = [v for k, v in x_pairs if M[j, k]]
        if vals:
            out[j] = min(vals)
    return out


def floyd_warshall(A):
    n = A.n
    INF = n + 1
    d = np.full((n, n), INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    d[dense_adjacency(A)] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    d[d >= INF] = -1
    return d


def eccentricity(dist, v):
    row = dist[v]
    return int(row[row >= 0].max())


def brute_bandwidth(A):
    return max((abs(i - j) for i, j in entry_set(A)), default=0)


def brute_envelope(A):
    """Count pairs {i, j}, i < j, lying inside the column profile."""
    ents = entry_set(A)
    total = 0
    for j in range(A.n):
        rows = [i for i, c in ents if c == j]
        first = min(rows) if rows else j
        total += max(0, j - first)
    return total


def brute_sort_ranks(x_pairs, y):
    tuples = sorted((v, int(y[i]), i) for i, v in x_pairs)
    return {t[2]: r for r, t in enumerate(tuples)}


def components(A):
    M = dense_adjacency(A)
    seen = [-1] * A.n
    comps = []
    for s in range(A.n):
        if seen[s] != -1:
            continue
        stack, comp = [s], []
        seen[s] = len(comps)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in np.flatnonzero(M[:, v]).tolist():
                if seen[w] == -1:
                    seen[w] = len(comps)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps
