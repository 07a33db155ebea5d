"""Planar convex hulls of complex point sets and distances between them."""

from __future__ import annotations

import numpy as np

DUPLICATE_TOL = 1e-14


def _cross(o, a, b):
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def _prefilter(z):
    """Indices of points not strictly inside the octagon of extreme points.

    Interior points of the octagon can never be hull vertices; dropping them
    first keeps the sequential chain scan short for large depositories.
    """
    if z.size < 64:
        return np.arange(z.size)
    x, y = z.real, z.imag
    keys = [x, x + y, y, y - x, -x, -x - y, -y, x - y]
    ext = [int(np.argmax(k)) for k in keys]
    poly = []
    for i in ext:
        if not poly or poly[-1] != i:
            poly.append(i)
    if len(poly) > 1 and poly[0] == poly[-1]:
        poly.pop()
    if len(poly) < 3:
        return np.arange(z.size)
    inside = np.ones(z.size, dtype=bool)
    for a, b in zip(poly, poly[1:] + poly[:1]):
        # strictly left of every CCW octagon edge, with a safety margin
        c = _cross(z[a], z[b], z)
        scale = abs(z[b] - z[a]) * (np.abs(z - z[a]) + 1.0)
        inside &= c > 1e-9 * scale
    return np.flatnonzero(~inside)


def convex_hull_indices(z) -> np.ndarray:
    """Andrew's monotone chain; indices of the CCW hull vertices of ``z``.

    Collinear points are dropped, points closer than 1e-14 (or a few ulps of
    the largest coordinate, if that is bigger) merged, and the sequence starts
    at the lowest (then leftmost) vertex.  A single distinct point gives one
    index, a collinear set its two endpoints.
    """
    z = np.asarray(z, dtype=complex).ravel()
    if z.size == 0:
        raise ValueError("convex hull of an empty point set")
    tol = max(DUPLICATE_TOL, 16 * np.finfo(float).eps * float(np.abs(z).max()))
    cand = _prefilter(z)
    order = cand[np.lexsort((z[cand].imag, z[cand].real))]
    pts = z[order].tolist()
    idx = order.tolist()

    def chain(seq):
        out = []
        for i in seq:
            p = pts[i]
            # a near-duplicate would leave a zero-length edge of random direction
            if out and abs(p - pts[out[-1]]) <= tol:
                continue
            while len(out) >= 2:
                o, a = pts[out[-2]], pts[out[-1]]
                if ((a.real - o.real) * (p.imag - o.imag)
                        - (a.imag - o.imag) * (p.real - o.real)) <= 0:
                    out.pop()
                else:
                    break
            out.append(i)
        return out

    ks = range(len(pts))
    lower = chain(ks)
    upper = chain(reversed(ks))
    ring = lower[:-1] + upper[:-1]
    if not ring:
        ring = [0]
    # merge near-duplicates that survived the orientation test
    merged = []
    for i in ring:
        if merged and abs(pts[i] - pts[merged[-1]]) <= tol:
            continue
        merged.append(i)
    while len(merged) > 1 and abs(pts[merged[0]] - pts[merged[-1]]) <= tol:
        merged.pop()
    hull = np.array([idx[i] for i in merged])
    hz = z[hull]
    start = np.lexsort((hz.real, hz.imag))[0]
    return np.roll(hull, -start)


def convex_hull(z) -> np.ndarray:
    """CCW hull vertices of a complex point array."""
    z = np.asarray(z, dtype=complex).ravel()
    return z[convex_hull_indices(z)]


def convexity_defect(hull) -> float:
    """Most negative turn cross product along a CCW vertex ring (0 if convex)."""
    h = np.asarray(hull, dtype=complex)
    if h.size < 3:
        return 0.0
    c = _cross(h, np.roll(h, -1), np.roll(h, -2))
    return float(min(0.0, c.min()))


def _normal_angles(h):
    """Outward normal angle of each CCW edge h[i] -> h[i+1], unwrapped to increase."""
    d = np.roll(h, -1) - h
    ang = np.angle(d) - np.pi / 2
    return ang


def support(h, theta) -> np.ndarray:
    """Support function max_v Re(exp(-i theta) v) of the vertex set ``h``."""
    h = np.asarray(h, dtype=complex)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.empty(theta.shape)
    for i in range(0, theta.size, 4096):
        e = np.exp(-1j * theta[i:i + 4096])
        out[i:i + 4096] = (e[:, None] * h[None, :]).real.max(axis=1)
    return out


def _active(h, theta):
    """Index of the vertex of CCW polygon ``h`` that supports direction ``theta``."""
    if h.size == 1:
        return np.zeros(theta.shape, dtype=int)
    ang = np.mod(_normal_angles(h), 2 * np.pi)
    start = int(np.argmin(ang))
    ang = np.roll(ang, -start)
    # vertex i+1 is supported between the normals of edges i and i+1
    k = np.searchsorted(ang, np.mod(theta, 2 * np.pi), side="right")
    return (k + start) % h.size


def _support_gaps(P, Q):
    """(max, min) over directions of the support function gap h_P - h_Q.

    Between consecutive breakpoints of both normal fans the supporting
    vertices are fixed, so the gap is a single sinusoid whose extremes are
    taken in closed form.
    """
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    br = [np.zeros(1)]
    for h in (P, Q):
        if h.size > 1:
            br.append(np.mod(_normal_angles(h), 2 * np.pi))
    br = np.unique(np.concatenate(br))
    lo = br
    hi = np.append(br[1:], br[0] + 2 * np.pi)
    mid = (lo + hi) / 2
    d = P[_active(P, mid)] - Q[_active(Q, mid)]
    # gap(theta) = Re(exp(-i theta) d) = |d| cos(theta - arg d) on [lo, hi]
    g_lo = (np.exp(-1j * lo) * d).real
    g_hi = (np.exp(-1j * hi) * d).real
    width = hi - lo
    phase = np.angle(d)
    top = np.where(np.mod(phase - lo, 2 * np.pi) <= width, np.abs(d), np.maximum(g_lo, g_hi))
    bottom = np.where(np.mod(phase + np.pi - lo, 2 * np.pi) <= width, -np.abs(d),
                      np.minimum(g_lo, g_hi))
    return float(top.max()), float(bottom.min())


def excess(P, Q) -> float:
    """One-sided distance: how far the hull of ``P`` reaches outside that of ``Q``."""
    top, _ = _support_gaps(P, Q)
    return max(0.0, top)


def hausdorff(P, Q) -> float:
    """Hausdorff distance between the convex hulls of two CCW vertex rings.

    For convex sets this is the largest vertex-to-polygon distance in either
    direction, and also the largest support function gap over directions;
    the latter is evaluated here.
    """
    top, bottom = _support_gaps(P, Q)
    return max(0.0, top, -bottom)


def point_polygon_distance(p, h) -> np.ndarray:
    """Distance from points ``p`` to the convex polygon ``h`` (0 inside)."""
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    h = np.asarray(h, dtype=complex)
    if h.size == 1:
        return np.abs(p - h[0])
    a = h
    b = np.roll(h, -1)
    ab = b - a
    L2 = np.abs(ab) ** 2
    out = np.empty(p.shape)
    for i in range(0, p.size, 2048):
        q = p[i:i + 2048, None]
        s = np.clip(((q - a) * ab.conj()).real / np.where(L2 > 0, L2, 1), 0, 1)
        dist = np.abs(q - (a + s * ab)).min(axis=1)
        if h.size >= 3:
            inside = (_cross(a, b, q) >= 0).all(axis=1)
            dist[inside] = 0.0
        out[i:i + 2048] = dist
    return out
