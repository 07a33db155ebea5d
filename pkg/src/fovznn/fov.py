"""Field-of-values boundary assembly.

Each diagonal block of the unitary decomposition contributes boundary
points: its eigenvalues if it is normal, otherwise the quadratic forms
x(t)*A_j x(t) along the ZNN-tracked largest eigencurve of its flow.  The
convex hull of the pooled points (the depository) is the boundary of F(A).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import hull as _hull
from .decomp import Decomposition, DecompositionSettings, decompose
from .matflow import as_matrix, hermitize, is_normal, split_hermitian
from .znn import ZnnConfig, track_batch

DEFAULT_GRID = 2048


class BoundaryPoint(NamedTuple):
    re: float
    im: float
    t: float | None
    block_id: int


@dataclass
class BoundaryPoints:
    """Struct-of-arrays point list; ``t`` is nan for eigenvalue points."""

    z: np.ndarray
    t: np.ndarray
    block_id: np.ndarray

    @classmethod
    def empty(cls):
        return cls(np.empty(0, complex), np.empty(0), np.empty(0, int))

    @classmethod
    def concat(cls, parts):
        parts = list(parts)
        if not parts:
            return cls.empty()
        return cls(np.concatenate([p.z for p in parts]),
                   np.concatenate([p.t for p in parts]),
                   np.concatenate([p.block_id for p in parts]))

    def __len__(self):
        return self.z.size

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            t = self.t[i]
            return BoundaryPoint(float(self.z[i].real), float(self.z[i].imag),
                                 None if np.isnan(t) else float(t), int(self.block_id[i]))
        return BoundaryPoints(self.z[i], self.t[i], self.block_id[i])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@dataclass
class FovResult:
    hull: BoundaryPoints
    per_block: dict[int, BoundaryPoints]
    numerical_radius: float
    crawford_number: float
    point_counts: tuple[int, int]
    timings: dict[str, float] = field(default_factory=dict)
    decomposition: Decomposition | None = None
    normal_blocks: list[int] = field(default_factory=list)
    fallback_blocks: list[int] = field(default_factory=list)

    @property
    def depository(self) -> BoundaryPoints:
        return BoundaryPoints.concat(self.per_block[b] for b in sorted(self.per_block))


def _eigen_points(Aj, block_id):
    w = np.linalg.eigvals(Aj)
    return BoundaryPoints(w.astype(complex), np.full(w.size, np.nan),
                          np.full(w.size, block_id, dtype=int))


def _curve_points(z, t, block_id):
    return BoundaryPoints(np.asarray(z, complex), np.asarray(t, float),
                          np.full(len(z), block_id, dtype=int))


def _hermitized_parts(Aj):
    flow = split_hermitian(Aj)
    return hermitize(flow.H), hermitize(flow.K)


def johnson_boundary_points(A, grid_count: int = DEFAULT_GRID, block_id: int = 0,
                            chunk: int = 64) -> BoundaryPoints:
    """Grid baseline: extreme eigenvectors of F(t_i) by full eigendecomposition.

    Emits the max- and min-eigenvector quadratic forms at t_i = 2 pi i / grid_count.
    """
    A = as_matrix(A)
    if grid_count < 3:
        raise ValueError("grid_count must be at least 3")
    H, K = _hermitized_parts(A)
    ts = 2 * np.pi * np.arange(grid_count) / grid_count
    zmax = np.empty(grid_count, complex)
    zmin = np.empty(grid_count, complex)
    for i in range(0, grid_count, chunk):
        tt = ts[i:i + chunk]
        F = np.cos(tt)[:, None, None] * H + np.sin(tt)[:, None, None] * K
        _, V = np.linalg.eigh(F)
        for out, col in ((zmax, -1), (zmin, 0)):
            x = V[:, :, col]
            out[i:i + chunk] = np.einsum("bi,ij,bj->b", x.conj(), A, x)
    z = np.concatenate([zmax, zmin])
    return _curve_points(z, np.concatenate([ts, ts]), block_id)


def block_boundary_points(Aj, cfg: ZnnConfig | None = None, block_id: int = 0):
    """Boundary points of one indecomposable block (eigenvalues if normal).

    Returns (points, kind) with kind in {"normal", "znn", "fallback"}.
    """
    Aj = as_matrix(Aj)
    if cfg is None:
        cfg = ZnnConfig()
    if Aj.shape[0] == 1 or is_normal(Aj):
        return _eigen_points(Aj, block_id), "normal"
    [(pts, kind)] = _track_blocks([Aj], cfg, [block_id])
    return pts, kind


def _track_blocks(blocks, cfg, ids, fallback_grid=DEFAULT_GRID):
    """ZNN-track equal-size blocks together; failed ones fall back to the grid."""
    parts = [_hermitized_parts(Aj) for Aj in blocks]
    res = track_batch([p[0] for p in parts], [p[1] for p in parts], cfg,
                      quads=np.array(blocks))
    out = []
    for b, (Aj, bid) in enumerate(zip(blocks, ids)):
        if res.failed_at[b] is None:
            out.append((_curve_points(res.points[b], res.t, bid), "znn"))
        else:
            out.append((johnson_boundary_points(Aj, fallback_grid, bid), "fallback"))
    return out


def _track_task(args):
    blocks, cfg, ids = args
    return _track_blocks(blocks, cfg, ids)


def _hull_result(per_block, timings, dec=None, normal=(), fallback=()):
    t0 = time.perf_counter()
    pool = BoundaryPoints.concat(per_block[b] for b in sorted(per_block))
    idx = _hull.convex_hull_indices(pool.z)
    hull = pool[idx]
    timings["hull"] = time.perf_counter() - t0
    return FovResult(
        hull=hull,
        per_block=per_block,
        numerical_radius=numerical_radius(hull.z),
        crawford_number=crawford_number(hull.z),
        point_counts=(len(pool), len(hull)),
        timings=timings,
        decomposition=dec,
        normal_blocks=list(normal),
        fallback_blocks=list(fallback),
    )


def assemble_fov(A, cfg: ZnnConfig | None = None,
                 dcfg: DecompositionSettings | None = None, parallel: int = 0) -> FovResult:
    """Field of values boundary of ``A`` via decomposition and per-block ZNN.

    With ``parallel`` > 1 the per-block tracks are spread over that many
    worker processes; the result does not depend on the worker count.
    """
    A = as_matrix(A)
    cfg = cfg or ZnnConfig()
    dcfg = dcfg or DecompositionSettings()
    timings = {}
    t0 = time.perf_counter()
    dec = decompose(A, dcfg.t_a, dcfg.t_b, dcfg.tol_pattern, dcfg.tol_verify, dcfg.retry_seed)
    timings["decompose"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    per_block = {}
    normal = []
    pending = {}
    for bid, Aj in enumerate(dec.blocks):
        if Aj.shape[0] == 1 or is_normal(Aj):
            per_block[bid] = _eigen_points(Aj, bid)
            normal.append(bid)
        else:
            pending.setdefault(Aj.shape[0], []).append(bid)

    tasks = []
    for m in sorted(pending):
        ids = pending[m]
        n_chunks = max(1, min(parallel, len(ids))) if parallel > 1 else 1
        for chunk in np.array_split(np.array(ids), n_chunks):
            ids_c = [int(i) for i in chunk]
            tasks.append(([dec.blocks[i] for i in ids_c], cfg, ids_c))
    if parallel > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            results = list(ex.map(_track_task, tasks))
    else:
        results = [_track_task(task) for task in tasks]

    fallback = []
    for (_, _, ids_c), res in zip(tasks, results):
        for bid, (pts, kind) in zip(ids_c, res):
            per_block[bid] = pts
            if kind == "fallback":
                fallback.append(bid)
    timings["blocks"] = time.perf_counter() - t0
    per_block = {b: per_block[b] for b in sorted(per_block)}
    return _hull_result(per_block, timings, dec, normal, sorted(fallback))


def baseline_fov(A, grid_count: int = DEFAULT_GRID) -> FovResult:
    """Grid-baseline FoV of the whole matrix, packaged like assemble_fov output."""
    A = as_matrix(A)
    t0 = time.perf_counter()
    pts = johnson_boundary_points(A, grid_count)
    timings = {"grid": time.perf_counter() - t0}
    return _hull_result({0: pts}, timings)


def numerical_radius(result) -> float:
    """max |z| over the hull vertices (accepts a FovResult or vertex array)."""
    z = result.hull.z if isinstance(result, FovResult) else np.asarray(result, complex)
    return float(np.abs(z).max())


def crawford_number(result) -> float:
    """Distance from the origin to the hull region (0 if the origin is inside)."""
    z = result.hull.z if isinstance(result, FovResult) else np.asarray(result, complex)
    return float(_hull.point_polygon_distance(0j, z)[0])


def eigenvalue_hull(A) -> np.ndarray:
    return _hull.convex_hull(np.linalg.eigvals(as_matrix(A)))

