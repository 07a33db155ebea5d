"""Benchmark harness, theoretical savings bounds and eigencurve export."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import hull as _hull
from .decomp import DecompositionSettings, decompose
from .fov import DEFAULT_GRID, FovResult, assemble_fov, baseline_fov
from .matflow import InputError, as_matrix, hermitize, split_hermitian
from .svg import eigencurves_svg
from .znn import ZnnConfig


def speedup_bounds(alpha: float) -> tuple[float, float]:
    """Cost of blockwise eigensolves as a fraction of one n x n solve.

    ``alpha`` = m/n is the relative size of the largest block.  The best case
    is one m-block with 1x1 blocks elsewhere (alpha^3).  The worst case packs
    the rest into blocks as large as allowed: alpha^2 for alpha <= 1/2 (about
    1/alpha blocks of size m), else one m-block plus one (n-m)-block.
    """
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise InputError("alpha must lie in (0, 1]")
    best = alpha ** 3
    worst = alpha ** 2 if alpha <= 0.5 else alpha ** 3 + (1 - alpha) ** 3
    return best, worst


@dataclass
class BenchReport:
    n: int
    block_sizes: list[int]
    normal_blocks: list[int]
    fallback_blocks: list[int]
    znn_timings: dict[str, float]
    baseline_seconds: float
    znn_seconds: float
    point_counts: tuple[int, int]
    baseline_counts: tuple[int, int]
    hausdorff: float
    frob_norm: float
    repeats: int = 1
    samples: dict[str, list[float]] = field(default_factory=dict)

    @property
    def speedup(self) -> float:
        return self.baseline_seconds / self.znn_seconds if self.znn_seconds > 0 else float("inf")

    @property
    def relative_hausdorff(self) -> float:
        return self.hausdorff / self.frob_norm if self.frob_norm > 0 else self.hausdorff

    @property
    def all_normal(self) -> bool:
        return len(self.normal_blocks) == len(self.block_sizes)

    def lines(self) -> list[str]:
        t = self.znn_timings
        return [
            f"n = {self.n}, blocks = {len(self.block_sizes)} (max {max(self.block_sizes)}), "
            f"normal = {len(self.normal_blocks)}, fallback = {len(self.fallback_blocks)}",
            f"znn pipeline: {self.znn_seconds:.3f} s (decompose {t.get('decompose', 0):.3f}, "
            f"blocks {t.get('blocks', 0):.3f}, hull {t.get('hull', 0):.3f}); "
            f"points {self.point_counts[0]}, on hull {self.point_counts[1]}",
            f"baseline: {self.baseline_seconds:.3f} s; points {self.baseline_counts[0]}, "
            f"on hull {self.baseline_counts[1]}",
            f"hausdorff = {self.hausdorff:.3e} ({self.relative_hausdorff:.3e} relative)",
            f"speedup = {self.speedup:.2f}x (median of {self.repeats})",
        ]


def _total(timings):
    return sum(timings.values())


def bench(A, cfg: ZnnConfig | None = None, grid_count: int = DEFAULT_GRID,
          dcfg: DecompositionSettings | None = None, repeats: int = 1,
          parallel: int = 0) -> BenchReport:
    """Time the ZNN pipeline against the grid baseline on the same matrix."""
    A = as_matrix(A)
    if repeats < 1:
        raise InputError("repeats must be positive")
    cfg = cfg or ZnnConfig()
    znn_t, base_t = [], []
    res: FovResult | None = None
    base: FovResult | None = None
    for _ in range(repeats):
        res = assemble_fov(A, cfg, dcfg, parallel=parallel)
        znn_t.append(_total(res.timings))
        base = baseline_fov(A, grid_count)
        base_t.append(_total(base.timings))
    dec = res.decomposition
    return BenchReport(
        n=A.shape[0],
        block_sizes=list(dec.block_sizes),
        normal_blocks=res.normal_blocks,
        fallback_blocks=res.fallback_blocks,
        znn_timings=res.timings,
        baseline_seconds=statistics.median(base_t),
        znn_seconds=statistics.median(znn_t),
        point_counts=res.point_counts,
        baseline_counts=base.point_counts,
        hausdorff=_hull.hausdorff(res.hull.z, base.hull.z),
        frob_norm=float(np.linalg.norm(A)),
        repeats=repeats,
        samples={"znn": znn_t, "baseline": base_t},
    )


def eigencurve_grid(A, grid_count: int):
    """Angles and ascending eigenvalues of F(t_i), shape (grid_count, n)."""
    if grid_count < 8:
        raise InputError("grid_count must be at least 8")
    flow = split_hermitian(as_matrix(A))
    H, K = hermitize(flow.H), hermitize(flow.K)
    t = 2 * np.pi * np.arange(grid_count) / grid_count
    F = np.cos(t)[:, None, None] * H + np.sin(t)[:, None, None] * K
    return t, np.linalg.eigvalsh(F)


def blocked_eigencurves(A, grid_count: int, dcfg: DecompositionSettings | None = None):
    """Eigencurves sorted within each diagonal block, with the block id per curve."""
    dcfg = dcfg or DecompositionSettings()
    dec = decompose(A, dcfg.t_a, dcfg.t_b, dcfg.tol_pattern, dcfg.tol_verify, dcfg.retry_seed)
    cols, labels = [], []
    t = None
    for bid, Aj in enumerate(dec.blocks):
        t, lam = eigencurve_grid(Aj, grid_count)
        cols.append(lam)
        labels += [bid] * lam.shape[1]
    return t, np.hstack(cols), np.array(labels), dec


def crossings(a, b) -> int:
    """Sign changes of a(t) - b(t) along the grid, ignoring exact ties."""
    d = np.sign(np.asarray(a) - np.asarray(b))
    d = d[d != 0]
    return int(np.count_nonzero(d[1:] != d[:-1]))


def eigencurves(A, grid_count: int, path, dcfg: DecompositionSettings | None = None):
    """CSV of t and the ascending eigenvalues; SVG of the block-coloured curves.

    Returns (csv path, svg path, t, block-sorted curves, block labels).
    """
    A = as_matrix(A)
    path = Path(path)
    t, lam = eigencurve_grid(A, grid_count)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"lambda{j + 1}" for j in range(lam.shape[1])])
        for ti, row in zip(t, lam):
            w.writerow([format(ti, ".17g")] + [format(v, ".17g") for v in row])
    tb, curves, labels, _ = blocked_eigencurves(A, grid_count, dcfg)
    svg_path = path.with_suffix(".svg")
    svg_path.write_text(eigencurves_svg(tb, curves, labels))
    return path, svg_path, tb, curves, labels
