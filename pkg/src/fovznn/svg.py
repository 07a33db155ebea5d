"""Static SVG plots of field-of-values results and eigencurves.

Drawing coordinates are data coordinates inside a transformed group, so
path geometry can be read back exactly; strokes do not scale.  Output is a
pure function of the input (no timestamps, fixed formatting and palette).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22")
WIDTH, HEIGHT, MARGIN = 640, 640, 60


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _ticks(lo, hi, count=5):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / count
    step = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * step >= raw:
            step *= m
            break
    first = math.ceil(lo / step) * step
    n = int(math.floor((hi - first) / step + 1e-9)) + 1
    return [first + i * step for i in range(max(n, 0))]


def _limits(x, y, equal):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    x0, x1, y0, y1 = x.min(), x.max(), y.min(), y.max()
    scale = max(abs(x0), abs(x1), abs(y0), abs(y1), 1e-300)
    pad = 1e-3 * scale
    if x1 - x0 < pad:
        x0, x1 = x0 - pad, x1 + pad
    if y1 - y0 < pad:
        y0, y1 = y0 - pad, y1 + pad
    if equal:
        c = ((x0 + x1) / 2, (y0 + y1) / 2)
        h = max(x1 - x0, y1 - y0) / 2
        x0, x1, y0, y1 = c[0] - h, c[0] + h, c[1] - h, c[1] + h
    dx, dy = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    return x0 - dx, x1 + dx, y0 - dy, y1 + dy


class _Canvas:
    def __init__(self, x, y, equal=True, xlabel="Re", ylabel="Im", title=""):
        self.x0, self.x1, self.y0, self.y1 = _limits(x, y, equal)
        self.sx = (WIDTH - 2 * MARGIN) / (self.x1 - self.x0)
        self.sy = (HEIGHT - 2 * MARGIN) / (self.y1 - self.y0)
        self.parts = []
        self.xlabel, self.ylabel, self.title = xlabel, ylabel, title

    def px(self, x):
        return MARGIN + (x - self.x0) * self.sx

    def py(self, y):
        return HEIGHT - MARGIN - (y - self.y0) * self.sy

    def transform(self):
        tx = MARGIN - self.x0 * self.sx
        ty = HEIGHT - MARGIN + self.y0 * self.sy
        return f"matrix({_num(self.sx)} 0 0 {_num(-self.sy)} {_num(tx)} {_num(ty)})"

    def axes(self):
        out = []
        L, R, B, T = MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN
        out.append(f'<rect x="{L}" y="{T}" width="{R - L}" height="{B - T}" '
                   'fill="none" stroke="#000" stroke-width="1"/>')
        for v in _ticks(self.x0, self.x1):
            p = self.px(v)
            out.append(f'<line x1="{p:.3f}" y1="{B}" x2="{p:.3f}" y2="{B + 5}" stroke="#000"/>')
            out.append(f'<text x="{p:.3f}" y="{B + 18}" font-size="11" '
                       f'text-anchor="middle">{v:.4g}</text>')
        for v in _ticks(self.y0, self.y1):
            p = self.py(v)
            out.append(f'<line x1="{L - 5}" y1="{p:.3f}" x2="{L}" y2="{p:.3f}" stroke="#000"/>')
            out.append(f'<text x="{L - 8}" y="{p + 4:.3f}" font-size="11" '
                       f'text-anchor="end">{v:.4g}</text>')
        out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" font-size="13" '
                   f'text-anchor="middle">{self.xlabel}</text>')
        out.append(f'<text x="15" y="{HEIGHT / 2}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 15 {HEIGHT / 2})">{self.ylabel}</text>')
        if self.title:
            out.append(f'<text x="{WIDTH / 2}" y="25" font-size="14" '
                       f'text-anchor="middle">{self.title}</text>')
        return out

    def render(self, body):
        head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}">',
                '<rect width="100%" height="100%" fill="#fff"/>']
        group = [f'<g id="data" transform="{self.transform()}">'] + body + ["</g>"]
        return "\n".join(head + self.axes() + group + ["</svg>"]) + "\n"


def _coords(x, y):
    return " ".join(f"{_num(a)},{_num(b)}" for a, b in zip(x, y))


def _thin(z, max_points):
    if max_points and z.size > max_points:
        idx = np.unique(np.linspace(0, z.size - 1, max_points).round().astype(int))
        return z[idx]
    return z


def fov_svg(result, show_blocks: bool = True, max_points_per_block: int = 4000,
            title: str = "") -> str:
    """SVG text for a FovResult: block polylines, hull path, eigenvalue markers."""
    hull = result.hull.z
    allz = np.concatenate([hull] + [p.z for p in result.per_block.values()])
    cv = _Canvas(allz.real, allz.imag, equal=True, title=title)
    r = 3.0 / cv.sx
    body = []
    if show_blocks:
        for bid in sorted(result.per_block):
            pts = result.per_block[bid]
            color = PALETTE[bid % len(PALETTE)]
            curve = ~np.isnan(pts.t)
            if curve.any():
                z = _thin(pts.z[curve], max_points_per_block)
                body.append(f'<polyline class="block" data-block="{bid}" fill="none" '
                            f'stroke="{color}" stroke-width="1" '
                            f'vector-effect="non-scaling-stroke" points="{_coords(z.real, z.imag)}"/>')
    if hull.size > 1:
        d = "M " + " L ".join(f"{_num(z.real)} {_num(z.imag)}" for z in hull) + " Z"
    else:
        d = f"M {_num(hull[0].real)} {_num(hull[0].imag)} Z"
    body.append(f'<path id="hull" fill="none" stroke="#000" stroke-width="1.5" '
                f'vector-effect="non-scaling-stroke" d="{d}"/>')
    for bid in sorted(result.per_block):
        pts = result.per_block[bid]
        for z in pts.z[np.isnan(pts.t)]:
            body.append(f'<circle class="eig" data-block="{bid}" cx="{_num(z.real)}" '
                        f'cy="{_num(z.imag)}" r="{_num(r)}" fill="{PALETTE[bid % len(PALETTE)]}"/>')
    return cv.render(body)


def write_svg(result, path, show_blocks: bool = True, show_eigencurves: bool = False,
              eig_grid=None, title: str = "") -> Path:
    """Write the FoV plot; with ``show_eigencurves`` also write ``<stem>.curves.svg``."""
    path = Path(path)
    path.write_text(fov_svg(result, show_blocks, title=title))
    if show_eigencurves and eig_grid is not None:
        t, lam, labels = eig_grid
        path.with_suffix(".curves.svg").write_text(eigencurves_svg(t, lam, labels))
    return path


def eigencurves_svg(t, lam, labels=None, title: str = "") -> str:
    """Eigencurves lam[:, j] over t, coloured by ``labels[j]`` (block id)."""
    t = np.asarray(t, float)
    lam = np.asarray(lam, float)
    n = lam.shape[1]
    labels = np.zeros(n, dtype=int) if labels is None else np.asarray(labels, int)
    cv = _Canvas(np.r_[t.min(), t.max()], np.r_[lam.min(), lam.max()], equal=False,
                 xlabel="t", ylabel="eigenvalues of F(t)", title=title)
    body = []
    for j in range(n):
        color = PALETTE[labels[j] % len(PALETTE)]
        body.append(f'<polyline class="curve" data-block="{labels[j]}" fill="none" '
                    f'stroke="{color}" stroke-width="1" vector-effect="non-scaling-stroke" '
                    f'points="{_coords(t, lam[:, j])}"/>')
    return cv.render(body)
