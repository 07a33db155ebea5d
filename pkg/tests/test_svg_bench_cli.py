import re

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import fovznn.cli as cli
from fovznn.bench import bench, blocked_eigencurves, crossings, eigencurve_grid, eigencurves, speedup_bounds
from fovznn.fov import assemble_fov
from fovznn.io import read_manifest
from fovznn.matflow import InputError, NumericalError
from fovznn.svg import fov_svg, write_svg
from fovznn.znn import ZnnConfig

from conftest import demo_matrix, normal_matrix, random_hermitian


def _hull_path_coords(svg):
    d = re.search(r'<path id="hull"[^>]* d="([^"]*)"', svg).group(1)
    nums = [float(v) for v in re.findall(r"-?[\d.]+(?:e[-+]?\d+)?", d)]
    return np.array(nums[0::2]), np.array(nums[1::2])


@pytest.fixture(scope="module")
def jordan_result():
    return assemble_fov(np.array([[0, 1], [0, 0]], dtype=complex), ZnnConfig())


def test_svg_single_point():
    res = assemble_fov(np.array([[1 + 1j]]), ZnnConfig())
    svg = fov_svg(res)
    assert svg.count('class="eig"') == 1
    x, y = _hull_path_coords(svg)
    assert x.tolist() == [1.0] and y.tolist() == [1.0]


def test_svg_jordan_circle(jordan_result):
    x, y = _hull_path_coords(fov_svg(jordan_result))
    assert x.max() - x.min() == pytest.approx(1.0, abs=1e-6)
    assert y.max() - y.min() == pytest.approx(1.0, abs=1e-6)


def test_svg_is_deterministic(tmp_path, jordan_result):
    write_svg(jordan_result, tmp_path / "a.svg")
    write_svg(jordan_result, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    text = (tmp_path / "a.svg").read_text()
    assert text.startswith("<svg") and "<text" in text


def test_speedup_bounds_examples():
    assert speedup_bounds(1) == (1, 1)
    assert speedup_bounds(0.5) == (0.125, 0.25)
    best, worst = speedup_bounds(10 / 15)
    assert 1 - worst == pytest.approx(0.67, abs=0.01)
    for bad in (0, -0.1, 1.5):
        with pytest.raises(InputError):
            speedup_bounds(bad)


@given(a=st.floats(1e-6, 1.0), b=st.floats(1e-6, 1.0))
def test_speedup_bounds_monotone(a, b):
    lo, hi = sorted((a, b))
    assert all(x <= y for x, y in zip(speedup_bounds(lo), speedup_bounds(hi)))


def test_bench_normal_matrix():
    A = normal_matrix(10, 2)
    rep = bench(A, ZnnConfig(), grid_count=256)
    assert rep.all_normal
    assert rep.point_counts[0] == 10
    assert rep.baseline_counts[0] == 512
    assert rep.hausdorff >= 0 and rep.speedup > 0
    assert len(rep.lines()) == 5


def test_bench_repeats_median():
    rep = bench(normal_matrix(5, 1), ZnnConfig(), grid_count=64, repeats=3)
    assert len(rep.samples["znn"]) == 3
    assert rep.znn_seconds == sorted(rep.samples["znn"])[1]


def test_eigencurves_hermitian_and_identity():
    H = random_hermitian(5, 3)
    t, lam = eigencurve_grid(H, 64)
    ev = np.linalg.eigvalsh(H)
    expect = np.sort(np.cos(t)[:, None] * ev[None, :], axis=1)
    assert np.abs(lam - expect).max() < 1e-13
    t, lam = eigencurve_grid(np.eye(4), 32)
    assert np.abs(lam - np.cos(t)[:, None]).max() < 1e-15
    with pytest.raises(InputError):
        eigencurve_grid(H, 7)


def test_demo_eigencurves_blocked(tmp_path):
    A = demo_matrix()
    csv_path, svg_path, t, curves, labels = eigencurves(A, 720, tmp_path / "c.csv")
    assert sorted(np.bincount(labels).tolist()) == [5, 10]
    assert svg_path.exists()
    header = csv_path.read_text().splitlines()[0].split(",")
    assert header[0] == "t" and len(header) == 16
    within, across = 0, 0
    for i in range(curves.shape[1]):
        for j in range(i + 1, curves.shape[1]):
            c = crossings(curves[:, i], curves[:, j])
            if labels[i] == labels[j]:
                within += c
            else:
                across += c
    assert within == 0 and across > 0
    t2, curves2, _, _ = blocked_eigencurves(A, 720)
    full = np.sort(curves2, axis=1)
    assert np.abs(full - eigencurve_grid(A, 720)[1]).max() < 1e-12


def test_cli_bounds(capsys):
    assert cli.main(["bounds", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "87.50%" in out and "75.00%" in out
    assert cli.main(["bounds", "2"]) == cli.EXIT_INPUT


def test_cli_missing_input(tmp_path):
    assert cli.main(["fov", str(tmp_path / "missing.mtx")]) == cli.EXIT_INPUT
    assert cli.main(["fov"]) == cli.EXIT_INPUT


def test_cli_numerical_failure(monkeypatch):
    def boom(*a, **k):
        raise NumericalError("eigensolver failed")

    monkeypatch.setattr(cli, "decompose", boom)
    assert cli.main(["decompose", "--family", "jordan", "--n", "3"]) == cli.EXIT_NUMERICAL


def test_cli_gallery_and_decompose(tmp_path, capsys):
    m = tmp_path / "a.mtx"
    assert cli.main(["gallery", "--family", "block-random", "--sizes", "4,3", "--seed", "2",
                     "--out", str(m)]) == 0
    assert cli.main(["decompose", str(m), "--out", str(tmp_path / "u.mtx")]) == 0
    out = capsys.readouterr().out
    assert "block sizes: [4, 3]" in out
    assert (tmp_path / "u.mtx").exists()


def test_cli_fov_outputs_and_replay(tmp_path, capsys):
    out = tmp_path / "b.csv"
    svg = tmp_path / "b.svg"
    argv = ["fov", "--family", "block-random", "--sizes", "3,2", "--seed", "4",
            "--out", str(out), "--svg", str(svg)]
    assert cli.main(argv) == 0
    m = read_manifest(f"{out}.manifest")
    assert m["command"] == "fov" and m["seed"] == "4" and m["ks"] == "4,5"
    assert int(m["points"]) > 0
    first = [p.read_bytes() for p in (out, tmp_path / "b.csv.hull.csv", svg)]
    assert cli.replay(f"{out}.manifest") == 0
    again = [p.read_bytes() for p in (out, tmp_path / "b.csv.hull.csv", svg)]
    assert first == again


def test_cli_eigencurves_and_bench(tmp_path, capsys):
    assert cli.main(["eigencurves", "--family", "jordan", "--n", "3", "--grid", "16",
                     "--out", str(tmp_path / "e.csv")]) == 0
    assert (tmp_path / "e.svg").exists()
    rep = tmp_path / "bench.txt"
    assert cli.main(["bench", "--family", "hanowa-like", "--n", "8", "--grid", "64",
                     "--out", str(rep)]) == 0
    m = read_manifest(rep)
    assert float(m["speedup"]) > 0
    assert "normal = 8" in capsys.readouterr().out
