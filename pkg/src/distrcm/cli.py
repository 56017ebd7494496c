"""Command-line front end: ``distrcm {reorder,stats,bench}``.

Reports go to stdout as JSON (CSV for bench), diagnostics to stderr.
Permutation files hold n lines; line v is the 0-based new label of vertex v.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid_sim import dist_rcm_with_info, distribute, write_trace_csv
from .metrics import bandwidth, envelope_size, report
from .rcm import rcm_with_info
from .sparse import (
    MatrixMarketError,
    Permutation,
    SparsePatternCSC,
    load_matrix_market,
    permute_symmetric,
    write_matrix_market,
)

log = logging.getLogger("distrcm")

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class CliError(Exception):
    pass


def parse_grid(spec: str) -> tuple[int, int]:
    """``"4"`` -> (4, 4); ``"2x3"`` -> (2, 3)."""
    parts = spec.lower().split("x")
    try:
        dims = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid spec {spec!r}") from None
    if len(dims) == 1:
        dims = dims * 2
    if len(dims) != 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"bad grid spec {spec!r}")
    return dims[0], dims[1]


def parse_grid_list(spec: str) -> list[tuple[int, int]]:
    return [parse_grid(s) for s in spec.split(",") if s.strip()]


@dataclass
class CliConfig:
    subcommand: str
    input: Path
    output: Path | None = None
    permuted_matrix: Path | None = None
    perm: Path | None = None
    grids: list[tuple[int, int]] = field(default_factory=list)
    seed: int = 0
    randomize: bool = False
    start: int | None = None
    alpha: float = 100.0
    beta: float = 1.0
    csv: Path | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "CliConfig":
        grid = getattr(ns, "grid", None)
        grids = grid if isinstance(grid, list) else ([grid] if grid else [])
        return cls(
            subcommand=ns.command,
            input=Path(ns.input),
            output=_path(getattr(ns, "output", None)),
            permuted_matrix=_path(getattr(ns, "permuted_matrix", None)),
            perm=_path(getattr(ns, "perm", None)),
            grids=grids,
            seed=getattr(ns, "seed", 0),
            randomize=getattr(ns, "randomize", False),
            start=getattr(ns, "start", None),
            alpha=getattr(ns, "alpha", 100.0),
            beta=getattr(ns, "beta", 1.0),
            csv=_path(getattr(ns, "csv", None)),
        )


def _path(p):
    return Path(p) if p is not None else None


def read_matrix(path: Path) -> SparsePatternCSC:
    try:
        with open(path) as f:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                A = load_matrix_market(f)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from e
    except MatrixMarketError as e:
        raise CliError(f"{path}: {e}") from e
    for w in caught:
        log.warning("%s: %s", path, w.message)
    return A


def read_permutation(path: Path, n: int) -> Permutation:
    try:
        labels = np.loadtxt(path, dtype=np.int64, ndmin=1)
    except (OSError, ValueError) as e:
        raise CliError(f"cannot read permutation {path}: {e}") from e
    if labels.size != n:
        raise CliError(f"permutation {path} has {labels.size} entries, matrix has n={n}")
    try:
        return Permutation(labels)
    except ValueError as e:
        raise CliError(f"permutation {path}: {e}") from e


def write_permutation(P: Permutation, path: Path) -> None:
    with open(path, "w") as f:
        for v in P.new_label.tolist():
            f.write(f"{v}\n")


def perm_hash(P: Permutation) -> str:
    return hashlib.sha256(P.new_label.astype("<i8").tobytes()).hexdigest()[:16]


def _check_start(cfg: CliConfig, n: int) -> None:
    if cfg.start is not None and not 0 <= cfg.start < n:
        raise CliError(f"--start {cfg.start} outside 0..{n - 1}")


def cmd_reorder(cfg: CliConfig) -> int:
    A = read_matrix(cfg.input)
    _check_start(cfg, A.n)
    if cfg.grids or cfg.randomize:
        p_r, p_c = cfg.grids[0] if cfg.grids else (1, 1)
        ctx = distribute(A, p_r, p_c, seed=cfg.seed, randomize=cfg.randomize)
        res = dist_rcm_with_info(ctx, start=cfg.start)
        P, detail = res.permutation, res.detail
        log.info("grid %dx%d: S=%d W=%d F=%d", p_r, p_c, res.stats.messages, res.stats.words, res.stats.flops)
        if cfg.csv:
            with open(cfg.csv, "w") as f:
                write_trace_csv(res.trace, f)
    else:
        detail = rcm_with_info(A, start=cfg.start)
        P = detail.permutation

    if cfg.output:
        write_permutation(P, cfg.output)
    if cfg.permuted_matrix:
        with open(cfg.permuted_matrix, "w") as f:
            write_matrix_market(permute_symmetric(A, P), f)
    rep = report(A, P, detail.pseudo_diameter, detail.components)
    print(rep.to_json())
    return EXIT_OK


def cmd_stats(cfg: CliConfig) -> int:
    A = read_matrix(cfg.input)
    out = {"n": A.n, "m": A.m, "bandwidth": bandwidth(A), "envelope": envelope_size(A)}
    if cfg.perm:
        B = permute_symmetric(A, read_permutation(cfg.perm, A.n))
        out["bandwidth_after"] = bandwidth(B)
        out["envelope_after"] = envelope_size(B)
    print(json.dumps(out))
    return EXIT_OK


BENCH_COLUMNS = [
    "grid", "p", "flops", "messages", "words", "modeled_time", "iters", "perm_hash",
] + [f"{prim}_{k}" for prim in ("spmspv", "sortperm", "reduce", "other") for k in ("flops", "messages", "words")]


def cmd_bench(cfg: CliConfig) -> int:
    A = read_matrix(cfg.input)
    _check_start(cfg, A.n)
    grids = cfg.grids or [(1, 1)]
    serial = rcm_with_info(A, start=cfg.start).permutation
    rows = []
    ok = True
    for p_r, p_c in grids:
        ctx = distribute(A, p_r, p_c, seed=cfg.seed)
        res = dist_rcm_with_info(ctx, start=cfg.start)
        if res.permutation != serial:
            log.error("grid %dx%d permutation differs from the serial ordering", p_r, p_c)
            ok = False
        s = res.stats
        row = {
            "grid": f"{p_r}x{p_c}",
            "p": p_r * p_c,
            "flops": s.flops,
            "messages": s.messages,
            "words": s.words,
            "modeled_time": s.modeled_time(cfg.alpha, cfg.beta),
            "iters": s.iters,
            "perm_hash": perm_hash(res.permutation),
        }
        for prim, c in s.by_primitive.items():
            row[f"{prim}_flops"] = c.flops
            row[f"{prim}_messages"] = c.messages
            row[f"{prim}_words"] = c.words
        rows.append(row)

    text = ",".join(BENCH_COLUMNS) + "\n" + "".join(
        ",".join(str(r[k]) for k in BENCH_COLUMNS) + "\n" for r in rows
    )
    if cfg.csv:
        cfg.csv.write_text(text)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="distrcm",
        description="Reverse Cuthill-McKee reordering with a simulated 2D process grid.",
        epilog="Permutation files: line v holds the 0-based new label of vertex v.",
    )
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reorder", help="compute an RCM ordering and report its quality")
    r.add_argument("--input", required=True, help="Matrix Market file")
    r.add_argument("--output", help="write the permutation here (line v = new label of v)")
    r.add_argument("--permuted-matrix", help="write P A P^T as a symmetric Matrix Market file")
    r.add_argument("--grid", type=parse_grid, help="run on a simulated R[xC] grid")
    r.add_argument("--seed", type=int, default=0, help="seed for --randomize")
    r.add_argument("--randomize", action="store_true", help="randomly relabel before distributing")
    r.add_argument("--start", type=int, help="seed the pseudo-peripheral search of its component here")
    r.add_argument("--csv", help="write the collective trace (grid runs only)")

    s = sub.add_parser("stats", help="bandwidth and envelope of a matrix (and after a permutation)")
    s.add_argument("--input", required=True)
    s.add_argument("--perm", help="permutation file to evaluate")

    b = sub.add_parser("bench", help="sweep grid sizes and tabulate the communication model")
    b.add_argument("--input", required=True)
    b.add_argument("--grid", type=parse_grid_list, default=None, help="comma-separated R[xC] list, e.g. 1,2,4,2x3")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--start", type=int)
    b.add_argument("--alpha", type=float, default=100.0, help="per-message latency in flop units")
    b.add_argument("--beta", type=float, default=1.0, help="per-word inverse bandwidth in flop units")
    b.add_argument("--csv", help="also write the table here")
    return ap


COMMANDS = {"reorder": cmd_reorder, "stats": cmd_stats, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = CliConfig.from_args(ns)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except CliError as e:
        print(f"distrcm: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"distrcm: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
