"""Compiled ZNN stepping loop for small blocks.

For blocks of a few dozen rows the numpy batch path is dominated by call
overhead; this loop does the same arithmetic per member in one compiled
function.  Both paths are checked against each other in the tests.
"""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _lu_inplace(M, piv):
    n = M.shape[0]
    for k in range(n):
        p = k
        best = abs(M[k, k])
        for i in range(k + 1, n):
            v = abs(M[i, k])
            if v > best:
                best = v
                p = i
        piv[k] = p
        if best == 0.0:
            return False
        if p != k:
            for j in range(n):
                tmp = M[k, j]
                M[k, j] = M[p, j]
                M[p, j] = tmp
        inv = 1.0 / M[k, k]
        for i in range(k + 1, n):
            M[i, k] *= inv
            f = M[i, k]
            if f != 0:
                for j in range(k + 1, n):
                    M[i, j] -= f * M[k, j]
    return True


@numba.njit(cache=True)
def _lu_solve(LU, piv, b):
    n = LU.shape[0]
    x = b.copy()
    for k in range(n):
        p = piv[k]
        if p != k:
            tmp = x[k]
            x[k] = x[p]
            x[p] = tmp
    for i in range(n):
        acc = x[i]
        for j in range(i):
            acc -= LU[i, j] * x[j]
        x[i] = acc
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for j in range(i + 1, n):
            acc -= LU[i, j] * x[j]
        x[i] = acc / LU[i, i]
    return x


@numba.njit(cache=True)
def _norm1(M):
    n = M.shape[0]
    best = 0.0
    for j in range(n):
        s = 0.0
        for i in range(n):
            s += abs(M[i, j])
        if s > best:
            best = s
    return best


@numba.njit(cache=True)
def track_member(H, K, A, Y0, weights, cz, eta, ts, keep_x, cond_limit):
    """Run one member from its start-up history to the last sample angle.

    ``weights`` multiply the history oldest first.  Returns the eigenvalue
    track, the quadratic-form points, the vectors (empty unless ``keep_x``)
    and the failure angle (nan if the track completed).
    """
    S, n1 = Y0.shape
    n = n1 - 1
    N1 = ts.shape[0]
    lam_out = np.empty(N1)
    pts = np.empty(N1, dtype=np.complex128)
    X = np.empty((N1 if keep_x else 0, n), dtype=np.complex128)
    Y = Y0.copy()
    M = np.empty((n1, n1), dtype=np.complex128)
    r = np.empty(n1, dtype=np.complex128)
    e = np.zeros(n1, dtype=np.complex128)
    piv = np.empty(n1, dtype=np.int64)
    fail_t = np.nan

    for j in range(N1):
        if j < S:
            y = Y[j]
        else:
            y = Y[S - 1]
        lam_out[j] = y[n].real
        acc = 0j
        for a in range(n):
            row = 0j
            for b in range(n):
                row += A[a, b] * y[b]
            acc += np.conj(y[a]) * row
        pts[j] = acc
        if keep_x:
            for a in range(n):
                X[j, a] = y[a]
        if j < S - 1:
            continue
        if j == N1 - 1:
            break
        if not np.isnan(fail_t):
            # frozen after a failure; repeat the last state
            continue

        t = ts[j]
        c = np.cos(t)
        s = np.sin(t)
        cur = Y[S - 1]
        lam = cur[n].real
        xx = 0j
        for a in range(n):
            xx += np.conj(cur[a]) * cur[a]
        for a in range(n):
            fx = 0j
            fdx = 0j
            for b in range(n):
                f = c * H[a, b] + s * K[a, b]
                fd = -s * H[a, b] + c * K[a, b]
                M[a, b] = f
                fx += f * cur[b]
                fdx += fd * cur[b]
            M[a, a] -= lam
            M[a, n] = -cur[a]
            M[n, a] = np.conj(cur[a])
            r[a] = -fdx - eta * (fx - lam * cur[a])
        M[n, n] = 0.0
        r[n] = -eta * (xx - 1.0) / 2.0

        anorm = _norm1(M)
        ok = _lu_inplace(M, piv)
        cond = np.inf
        if ok:
            inv_norm = 0.0
            for col in range(n1):
                e[:] = 0.0
                e[col] = 1.0
                v = _lu_solve(M, piv, e)
                ssum = 0.0
                for a in range(n1):
                    ssum += abs(v[a])
                if ssum > inv_norm:
                    inv_norm = ssum
            cond = anorm * inv_norm
        if not (cond < cond_limit):
            fail_t = t
            continue
        z = _lu_solve(M, piv, r)
        finite = True
        for a in range(n1):
            if not (np.isfinite(z[a].real) and np.isfinite(z[a].imag)):
                finite = False
        if not finite:
            fail_t = t
            continue

        new = np.empty(n1, dtype=np.complex128)
        for a in range(n1):
            v = cz * z[a]
            for i in range(S):
                v += weights[i] * Y[i, a]
            new[a] = v
        new[n] = new[n].real
        nrm = 0.0
        for a in range(n):
            nrm += new[a].real ** 2 + new[a].imag ** 2
        nrm = np.sqrt(nrm)
        for a in range(n):
            new[a] /= nrm
        for i in range(S - 1):
            for a in range(n1):
                Y[i, a] = Y[i + 1, a]
        for a in range(n1):
            Y[S - 1, a] = new[a]
    return lam_out, pts, X, fail_t
