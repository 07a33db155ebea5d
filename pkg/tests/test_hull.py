import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fovznn.hull import (
    convex_hull,
    convex_hull_indices,
    convexity_defect,
    excess,
    hausdorff,
    point_polygon_distance,
    support,
)


def jarvis(z):
    """Gift-wrapping oracle: CCW hull vertices, collinear points dropped."""
    z = np.unique(np.asarray(z, complex))
    start = int(np.lexsort((z.real, z.imag))[0])
    out = [start]
    cur = start
    while True:
        cand = (cur + 1) % z.size
        for j in range(z.size):
            a, b = z[cand] - z[cur], z[j] - z[cur]
            cr = a.real * b.imag - a.imag * b.real
            if cr < 0 or (cr == 0 and abs(b) > abs(a)):
                cand = j
        cur = cand
        if cur == start:
            break
        out.append(cur)
    return z[out]


def test_square_with_center():
    z = np.array([0, 1, 1 + 1j, 1j, 0.5 + 0.5j])
    assert np.array_equal(convex_hull(z), [0, 1, 1 + 1j, 1j])


def test_identical_points():
    assert np.array_equal(convex_hull(np.full(5, 2 - 1j)), [2 - 1j])
    assert convex_hull(np.array([1 + 1j, 1 + 1j + 1e-16])).size == 1


def test_collinear_points_give_endpoints():
    h = convex_hull(np.array([3, 5, 4, 3.5]) + 0j)
    assert sorted(h.real) == [3, 5]


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        convex_hull(np.array([]))


def test_disk_against_oracle():
    rng = np.random.default_rng(0)
    r = np.sqrt(rng.random(100_000))
    z = r * np.exp(2j * np.pi * rng.random(100_000))
    sub = z[:1000]
    assert np.array_equal(convex_hull(sub), jarvis(sub))
    h = convex_hull(z)
    assert point_polygon_distance(z[::10], h).max() == 0
    assert convexity_defect(h) >= 0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 300))
def test_hull_matches_oracle(seed, n):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if seed % 3 == 0:
        z = np.round(z, 1)   # duplicates and collinear runs
    h = convex_hull(z)
    ref = jarvis(z)
    if ref.size <= 2:
        assert set(np.round(h, 12)) <= set(np.round(ref, 12))
    else:
        assert np.array_equal(h, ref)
        assert convexity_defect(h) >= 0


def test_hull_indices_start_lowest_then_leftmost():
    z = np.array([2 + 0j, 0j, 1 + 1j, -1 + 2j])
    idx = convex_hull_indices(z)
    assert idx[0] == 1


def test_support_and_distances():
    sq = convex_hull(np.array([0, 1, 1 + 1j, 1j]))
    assert support(sq, 0.0)[0] == 1
    assert point_polygon_distance(np.array([0.5 + 0.5j, 2 + 0.5j, -1 - 1j]), sq) == pytest.approx(
        [0, 1, np.sqrt(2)])
    big = 2 * sq - (0.5 + 0.5j)
    assert hausdorff(sq, big) == pytest.approx(np.sqrt(2) / 2)
    assert excess(sq, big) == 0
    assert excess(big, sq) == pytest.approx(np.sqrt(2) / 2)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_hausdorff_matches_vertex_distances(seed):
    rng = np.random.default_rng(seed)

    def cloud(k):
        return rng.standard_normal(k) + 1j * rng.standard_normal(k)

    P = convex_hull(cloud(rng.integers(1, 40)))
    Q = convex_hull(cloud(rng.integers(1, 40)) + 0.5)
    pq = point_polygon_distance(P, Q).max()
    qp = point_polygon_distance(Q, P).max()
    assert excess(P, Q) == pytest.approx(pq, abs=1e-12)
    assert hausdorff(P, Q) == pytest.approx(max(pq, qp), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), scale=st.sampled_from([1e-3, 1.0, 1e3]))
def test_near_duplicates_do_not_break_convexity(seed, scale):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.random(400)) * 2 * np.pi
    z = scale * (np.cos(t) + 0.3j * np.sin(t + 0.4))
    # the same boundary points again, off by a few ulps
    jitter = z * (1 + 4e-16 * (rng.random(z.size) - 0.5)) + scale * 1e-16j
    pool = np.concatenate([z, jitter])
    h = convex_hull(pool)
    assert convexity_defect(h) >= 0
    assert point_polygon_distance(pool, h).max() <= 1e-13 * scale
    assert h.size <= z.size
