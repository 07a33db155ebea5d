"""Matrix files, boundary-point CSVs and run manifests."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .matflow import InputError


class MatrixParseError(InputError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _content_lines(path):
    """(line number, stripped text) of non-empty lines."""
    with open(path) as fh:
        for no, raw in enumerate(fh, 1):
            text = raw.strip()
            if text:
                yield no, text


def _read_mm(path, lines):
    no, header = lines[0]
    parts = header.lower().split()
    if len(parts) != 5 or parts[0] != "%%matrixmarket" or parts[1] != "matrix":
        raise MatrixParseError(path, no, f"bad Matrix Market header {header!r}")
    fmt, field_, sym = parts[2:]
    if fmt != "array":
        raise MatrixParseError(path, no, f"only the array format is supported, got {fmt!r}")
    if field_ not in ("complex", "real", "integer"):
        raise MatrixParseError(path, no, f"unsupported field {field_!r}")
    if sym != "general":
        raise MatrixParseError(path, no, f"only general symmetry is supported, got {sym!r}")
    body = [(n, t) for n, t in lines[1:] if not t.startswith("%")]
    if not body:
        raise MatrixParseError(path, no, "missing size line")
    no, size = body[0]
    try:
        rows, cols = (int(v) for v in size.split())
    except ValueError:
        raise MatrixParseError(path, no, f"bad size line {size!r}") from None
    if rows != cols:
        raise MatrixParseError(path, no, f"matrix is not square ({rows} x {cols})")
    width = 2 if field_ == "complex" else 1
    entries = body[1:]
    if len(entries) != rows * cols:
        where = entries[-1][0] if entries else no
        raise MatrixParseError(path, where, f"expected {rows * cols} entries, found {len(entries)}")
    vals = np.empty(rows * cols, dtype=complex)
    for k, (no, text) in enumerate(entries):
        tok = text.split()
        if len(tok) != width:
            raise MatrixParseError(path, no, f"expected {width} value(s), got {text!r}")
        try:
            vals[k] = complex(float(tok[0]), float(tok[1]) if width == 2 else 0.0)
        except ValueError:
            raise MatrixParseError(path, no, f"bad number in {text!r}") from None
    # array format is column-major
    return vals.reshape(cols, rows).T.copy()


def _read_csv(path, lines):
    no, header = lines[0]
    key, _, val = header.replace(" ", "").partition("=")
    if key.lower() != "n" or not val.isdigit():
        raise MatrixParseError(path, no, f"expected header 'n=<dim>', got {header!r}")
    n = int(val)
    rows = lines[1:]
    if len(rows) != n:
        where = rows[-1][0] if rows else no
        raise MatrixParseError(path, where, f"expected {n} rows, found {len(rows)}")
    A = np.empty((n, n), dtype=complex)
    for i, (no, text) in enumerate(rows):
        tok = [t.strip() for t in text.split(",")]
        if len(tok) != 2 * n:
            raise MatrixParseError(path, no, f"expected {2 * n} values (re,im pairs), got {len(tok)}")
        try:
            v = np.array([float(t) for t in tok])
        except ValueError:
            raise MatrixParseError(path, no, "bad number") from None
        A[i] = v[0::2] + 1j * v[1::2]
    return A


def read_matrix(path) -> np.ndarray:
    """Read a square matrix from Matrix Market array or ``n=<dim>`` CSV format."""
    path = Path(path)
    lines = list(_content_lines(path))
    if not lines:
        raise MatrixParseError(path, 1, "empty file")
    if lines[0][1].startswith("%%"):
        A = _read_mm(path, lines)
    else:
        A = _read_csv(path, lines)
    if not np.all(np.isfinite(A)):
        raise MatrixParseError(path, lines[0][0], "non-finite entries")
    return A


def write_matrix(A, path, fmt: str | None = None) -> None:
    """Write ``A`` as Matrix Market (default, complex general) or CSV (.csv suffix)."""
    A = np.asarray(A, dtype=complex)
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "mm")
    n = A.shape[0]
    with open(path, "w") as fh:
        if fmt == "csv":
            fh.write(f"n={n}\n")
            for row in A:
                fh.write(",".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in row) + "\n")
        else:
            fh.write("%%MatrixMarket matrix array complex general\n")
            fh.write(f"{n} {A.shape[1]}\n")
            for z in A.T.ravel():
                fh.write(f"{_fmt(z.real)} {_fmt(z.imag)}\n")


def hull_path(path) -> Path:
    return Path(f"{path}.hull.csv")


def write_boundary_csv(result, path) -> tuple[Path, Path]:
    """Depository rows ordered by block then t, plus the CCW hull companion file."""
    path = Path(path)
    pts = result.depository
    on_hull = np.zeros(len(pts), dtype=bool)
    hull_keys = {(z.real, z.imag) for z in result.hull.z}
    for i, z in enumerate(pts.z):
        on_hull[i] = (z.real, z.imag) in hull_keys
    # eigenvalue points (t = nan) go first within their block
    tkey = np.where(np.isnan(pts.t), -np.inf, pts.t)
    order = np.lexsort((tkey, pts.block_id))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["block_id", "t", "re", "im", "on_hull"])
        for i in order:
            t = pts.t[i]
            w.writerow([int(pts.block_id[i]), "" if np.isnan(t) else _fmt(t),
                        _fmt(pts.z[i].real), _fmt(pts.z[i].imag), int(on_hull[i])])
    hpath = hull_path(path)
    with open(hpath, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["block_id", "t", "re", "im"])
        for p in result.hull:
            w.writerow([p.block_id, "" if p.t is None else _fmt(p.t), _fmt(p.re), _fmt(p.im)])
    return path, hpath


def read_hull_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return np.array([complex(float(r["re"]), float(r["im"])) for r in rows], dtype=complex)


def read_boundary_csv(path):
    """(z, t, block_id, on_hull) arrays from a boundary CSV."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    z = np.array([complex(float(r["re"]), float(r["im"])) for r in rows], dtype=complex)
    t = np.array([float(r["t"]) if r["t"] else np.nan for r in rows])
    b = np.array([int(r["block_id"]) for r in rows], dtype=int)
    h = np.array([r["on_hull"] == "1" for r in rows], dtype=bool)
    return z, t, b, h


def write_manifest(path, entries: dict) -> Path:
    """Flat ``key=value`` text file; keys are written in insertion order."""
    path = Path(path)
    with open(path, "w") as fh:
        for k, v in entries.items():
            if isinstance(v, float):
                v = _fmt(v)
            elif isinstance(v, (list, tuple)):
                v = ",".join(str(x) for x in v)
            fh.write(f"{k}={v}\n")
    return path


def read_manifest(path) -> dict:
    out = {}
    for no, text in _content_lines(path):
        if text.startswith("#"):
            continue
        key, sep, val = text.partition("=")
        if not sep:
            raise MatrixParseError(path, no, f"expected key=value, got {text!r}")
        out[key.strip()] = val.strip()
    return out
