"""ZNN path following of the largest eigenpair of F(t) = cos(t) H + sin(t) K.

The eigen-error E = F x - lambda x and the normalization error x*x - 1 are
made to decay like exp(-eta t).  Differentiating gives one bordered linear
system per step for (xdot, lambdadot),

    [F - lambda I   -x] [xdot      ]   [-Fdot x - eta E        ]
    [x*              0] [lambdadot ] = [-eta (x*x - 1) / 2     ]

whose solution drives a look-ahead formula that predicts (x, lambda) one
step ahead.  The bordered matrix is singular exactly when lambda is a
multiple eigenvalue, so a large condition number signals coalescing
eigencurves and aborts the track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .formulas import FormulaCoeffs, derive_lookahead_formula
from .matflow import EPS, HermitianFlow, InputError, NumericalError, hermitize

COND_LIMIT = 1e-3 / EPS


class ZnnStepError(NumericalError):
    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class ZnnConfig:
    tau: float = 2e-4
    eta: float = 100.0
    k: int = 4
    s: int = 5
    formula: FormulaCoeffs | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.tau > 0 or not self.eta > 0:
            raise InputError("tau and eta must be positive")
        if self.formula is None:
            object.__setattr__(self, "formula", derive_lookahead_formula(self.k, self.s))

    @property
    def startup_count(self) -> int:
        return self.k + self.s


@dataclass(frozen=True)
class EigenPathState:
    """Current (t, lambda, x) plus the stacked (x, lambda) history, oldest first."""

    t: float
    lam: float
    x: np.ndarray
    history: tuple[np.ndarray, ...]


@dataclass
class EigenCurve:
    t: np.ndarray
    lam: np.ndarray
    x: np.ndarray | None = None

    def __len__(self):
        return len(self.t)


def znn_system(F, Fdot, x, lam, eta):
    """Bordered ZNN matrix and right-hand side for the unknowns (xdot, lambdadot)."""
    F = np.asarray(F, dtype=complex)
    x = np.asarray(x, dtype=complex)
    M, r = _systems(F[None], np.asarray(Fdot, dtype=complex)[None], x[None],
                    np.array([float(np.real(lam))]), eta)
    return M[0], r[0]


def _systems(F, Fd, X, lam, eta):
    B, n, _ = F.shape
    M = np.zeros((B, n + 1, n + 1), dtype=complex)
    M[:, :n, :n] = F
    idx = np.arange(n)
    M[:, idx, idx] -= lam[:, None]
    M[:, :n, n] = -X
    M[:, n, :n] = X.conj()
    FX = np.matmul(F, X[..., None])[..., 0]
    FdX = np.matmul(Fd, X[..., None])[..., 0]
    r = np.empty((B, n + 1), dtype=complex)
    r[:, :n] = -FdX - eta * (FX - lam[:, None] * X)
    r[:, n] = -eta * (np.einsum("bi,bi->b", X.conj(), X) - 1) / 2
    return M, r


def _norm1(M):
    return np.abs(M).sum(axis=-2).max(axis=-1)


def _solve_batch(M, r):
    """Solve each bordered system; returns solutions and 1-norm condition numbers."""
    try:
        Minv = np.linalg.inv(M)
    except np.linalg.LinAlgError:
        Minv = np.empty_like(M)
        for b in range(M.shape[0]):
            try:
                Minv[b] = np.linalg.inv(M[b])
            except np.linalg.LinAlgError:
                Minv[b] = np.inf
    with np.errstate(invalid="ignore", over="ignore"):
        cond = _norm1(M) * _norm1(Minv)
        z = np.matmul(Minv, r[..., None])[..., 0]
    cond[~np.isfinite(cond)] = np.inf
    return z, cond


def solve_znn_system(M, r, t=None):
    z, cond = _solve_batch(M[None], r[None])
    if not cond[0] < COND_LIMIT or not np.all(np.isfinite(z)):
        raise ZnnStepError(f"near-singular ZNN system (cond {cond[0]:.3g}) at t = {t}", t)
    return z[0]


def _largest_eigpair(F):
    w, V = np.linalg.eigh(hermitize(F))
    return w[-1], V[:, -1]


def _fix_phase(x):
    i = np.argmax(np.abs(x))
    return x * (abs(x[i]) / x[i])


def _align(x, prev):
    ov = np.vdot(x, prev)
    return x * (ov / abs(ov)) if abs(ov) > 0 else x


def _startup(H, K, tau, count):
    """Eigendata at t = 0, tau, ..., (count-1) tau, phase-aligned along the path."""
    Hh, Kh = hermitize(H), hermitize(K)
    lams, xs = [], []
    prev = None
    for j in range(count):
        t = j * tau
        lam, x = _largest_eigpair(np.cos(t) * Hh + np.sin(t) * Kh)
        x = _fix_phase(x) if prev is None else _align(x, prev)
        prev = x
        lams.append(lam)
        xs.append(x)
    return np.array(lams), np.array(xs)


def step_count(t_end: float, tau: float) -> int:
    return max(1, math.ceil(t_end / tau - 1e-9))


def startup_eigendata(flow: HermitianFlow, cfg: ZnnConfig) -> list[EigenPathState]:
    """Largest eigenpairs at the first k+s sample angles, as path states."""
    lams, xs = _startup(flow.H, flow.K, cfg.tau, cfg.startup_count)
    ys = [np.concatenate([x, [lam]]) for lam, x in zip(lams, xs)]
    return [
        EigenPathState(j * cfg.tau, float(lams[j]), xs[j], tuple(ys[: j + 1]))
        for j in range(len(ys))
    ]


def znn_step(state: EigenPathState, flow: HermitianFlow, cfg: ZnnConfig) -> EigenPathState:
    """Advance one sampling gap with one linear solve and the look-ahead formula."""
    f = cfg.formula
    if len(state.history) < f.steps:
        raise InputError(f"ZNN step needs {f.steps} history entries")
    t = state.t
    F = np.cos(t) * flow.H + np.sin(t) * flow.K
    Fd = -np.sin(t) * flow.H + np.cos(t) * flow.K
    M, r = znn_system(F, Fd, state.x, state.lam, cfg.eta)
    z = solve_znn_system(M, r, t)
    hist = state.history[-f.steps:]
    y = f.derivative_weight * cfg.tau * z
    for w, old in zip(f.state_weights, reversed(hist)):
        y = y + w * old
    x = y[:-1] / np.linalg.norm(y[:-1])
    lam = float(y[-1].real)
    y = np.concatenate([x, [lam]])
    return EigenPathState(t + cfg.tau, lam, x, tuple(hist[1:]) + (y,))


@dataclass
class BatchTrack:
    t: np.ndarray
    lam: np.ndarray
    points: np.ndarray | None
    x: np.ndarray | None
    failed_at: list


COMPILED_MAX_DIM = 24


def track_batch(Hs, Ks, cfg: ZnnConfig, t_end: float = 2 * np.pi, quads=None,
                keep_vectors: bool = False, engine: str = "auto") -> BatchTrack:
    """Track the largest eigencurve of several equal-size flows in lockstep.

    ``quads`` optionally holds the block matrices whose quadratic forms at
    the tracked eigenvectors are returned as ``points``.  A member whose
    bordered system becomes near-singular is frozen and its failure angle
    recorded in ``failed_at`` (None for members that finished).

    ``engine`` selects the compiled per-member loop ("compiled"), the numpy
    batch loop ("numpy"), or picks by block size ("auto").
    """
    Hs = np.asarray(Hs, dtype=complex)
    Ks = np.asarray(Ks, dtype=complex)
    B, n, _ = Hs.shape
    f = cfg.formula
    S = f.steps
    N = step_count(t_end, cfg.tau)
    tau = t_end / N
    if N + 1 < S:
        raise InputError("t_end is shorter than the start-up phase")
    ts = np.arange(N + 1) * tau

    lam_out = np.empty((B, N + 1))
    X_out = np.empty((B, N + 1, n), dtype=complex) if keep_vectors else None
    pts = np.empty((B, N + 1), dtype=complex) if quads is not None else None
    A = np.asarray(quads, dtype=complex) if quads is not None else None

    Y = np.empty((S, B, n + 1), dtype=complex)
    for b in range(B):
        lams, xs = _startup(Hs[b], Ks[b], tau, S)
        Y[:, b, :n] = xs
        Y[:, b, n] = lams

    weights = np.array(f.state_weights[::-1])
    cz = f.derivative_weight * tau
    Hh = np.array([hermitize(h) for h in Hs])
    Kh = np.array([hermitize(k) for k in Ks])

    if engine == "auto":
        engine = "compiled" if n <= COMPILED_MAX_DIM else "numpy"
    if engine == "compiled":
        from ._kernels import track_member

        failed = []
        for b in range(B):
            quad = A[b] if A is not None else Hh[b]
            lam_b, pts_b, X_b, fail_t = track_member(
                Hh[b], Kh[b], quad, np.ascontiguousarray(Y[:, b]), weights, cz,
                float(cfg.eta), ts, keep_vectors, COND_LIMIT)
            lam_out[b] = lam_b
            if pts is not None:
                pts[b] = pts_b
            if keep_vectors:
                X_out[b] = X_b
            failed.append(None if np.isnan(fail_t) else float(fail_t))
        return BatchTrack(ts, lam_out, pts, X_out, failed)
    if engine != "numpy":
        raise InputError(f"unknown engine {engine!r}")

    def record(j, Yj):
        x = Yj[:, :n]
        lam_out[:, j] = Yj[:, n].real
        if keep_vectors:
            X_out[:, j] = x
        if pts is not None:
            pts[:, j] = np.einsum("bi,bij,bj->b", x.conj(), A, x)

    for j in range(S):
        record(j, Y[j])

    failed = [None] * B
    alive = np.ones(B, dtype=bool)
    eye = np.eye(n + 1)

    for j in range(S - 1, N):
        t = ts[j]
        c, s = np.cos(t), np.sin(t)
        F = c * Hh + s * Kh
        Fd = -s * Hh + c * Kh
        cur = Y[-1]
        X = cur[:, :n]
        lam = cur[:, n].real
        M, r = _systems(F, Fd, X, lam, cfg.eta)
        if not alive.all():
            M[~alive] = eye
            r[~alive] = 0
        z, cond = _solve_batch(M, r)
        bad = alive & ~((cond < COND_LIMIT) & np.isfinite(z).all(axis=1))
        if bad.any():
            for b in np.flatnonzero(bad):
                failed[b] = float(t)
            alive &= ~bad
            z[~alive] = 0
        new = np.tensordot(weights, Y, axes=1) + cz * z
        new[:, n] = new[:, n].real
        new[:, :n] /= np.linalg.norm(new[:, :n], axis=1)[:, None]
        if not alive.all():
            new[~alive] = cur[~alive]
        Y[:-1] = Y[1:]
        Y[-1] = new
        record(j + 1, new)
    return BatchTrack(ts, lam_out, pts, X_out, failed)


def track_extreme_eigencurve(flow: HermitianFlow, cfg: ZnnConfig,
                             t_end: float = 2 * np.pi, keep_vectors: bool = True) -> EigenCurve:
    """Largest eigencurve of an indecomposable flow on [0, t_end].

    The sampling gap is shrunk slightly, if needed, so that t_end is hit
    exactly.  Raises ZnnStepError when the track runs into a near-multiple
    eigenvalue.
    """
    res = track_batch(flow.H[None], flow.K[None], cfg, t_end, keep_vectors=keep_vectors)
    if res.failed_at[0] is not None:
        raise ZnnStepError(f"eigencurve coalescence near t = {res.failed_at[0]:.6f}",
                           res.failed_at[0])
    return EigenCurve(res.t, res.lam[0], res.x[0] if keep_vectors else None)
