"""Test-matrix generators.

Every family builds a block-diagonal matrix B and returns Q* B Q for a
seeded random unitary Q, unless ``bare`` is requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .matflow import EPS, InputError, random_unitary

FAMILIES = ("block-random", "jordan", "clement-like", "hanowa-like", "paper-52")

# block-size presets for block-random
PRESETS = {
    "demo": [10, 5],
    "n250-m10": [10] * 15 + [8] * 10 + [4] * 5,
    "n250-m100": [100, 80, 30, 30, 8, 2],
    "n1000": [400, 320, 120, 120, 32, 8],
}


@dataclass
class GallerySpec:
    family: str
    n: int | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)


def jordan_block(n: int, eig: complex = 0.0) -> np.ndarray:
    if n < 1:
        raise InputError("Jordan block size must be positive")
    return eig * np.eye(n, dtype=complex) + np.eye(n, k=1, dtype=complex)


def forsythe(n: int, alpha: float = np.sqrt(EPS), eig: complex = 0.0) -> np.ndarray:
    """Jordan block perturbed by ``alpha`` in the bottom-left corner."""
    A = jordan_block(n, eig)
    A[n - 1, 0] = alpha
    return A


def clement_like(n: int) -> np.ndarray:
    """Tridiagonal, zero diagonal, superdiagonal 1..n-1, subdiagonal n-1..1."""
    if n < 2:
        raise InputError("clement-like needs n >= 2")
    j = np.arange(1, n, dtype=float)
    return (np.diag(j, 1) + np.diag(j[::-1], -1)).astype(complex)


def hanowa_like(m: int, alpha: float = -1.0) -> np.ndarray:
    """Normal 2m x 2m matrix [[aI, -D], [D, aI]], D = diag(1..m); eigenvalues a +- ik."""
    if m < 1:
        raise InputError("hanowa-like needs m >= 1")
    D = np.diag(np.arange(1, m + 1, dtype=float))
    I = alpha * np.eye(m)
    return np.block([[I, -D], [D, I]]).astype(complex)


def wilkinson(n: int) -> np.ndarray:
    """Symmetric tridiagonal with diagonal |-(n-1)/2 .. (n-1)/2| and unit off-diagonals."""
    d = np.abs(np.arange(n) - (n - 1) / 2)
    return (np.diag(d) + np.eye(n, k=1) + np.eye(n, k=-1)).astype(complex)


def hilbert(n: int) -> np.ndarray:
    return scipy.linalg.hilbert(n).astype(complex)


def composite52_blocks() -> list[np.ndarray]:
    """Diagonal blocks of the 52 x 52 composite (3 indecomposable blocks of size > 1)."""
    return [
        -2 * np.eye(2, dtype=complex),
        forsythe(6),
        jordan_block(8, 1 - 1j),
        np.zeros((3, 3), dtype=complex),
        hanowa_like(4, -1.0),
        wilkinson(12),
        hilbert(9),
        jordan_block(4, 1 + 1j).conj().T,
    ]


def random_blocks(sizes, seed: int = 0, scales=None, shifts=None, real: bool = False):
    """Seeded Gaussian blocks ``scale * G + shift * I`` in the order of ``sizes``."""
    sizes = [int(m) for m in sizes]
    if not sizes or any(m < 1 for m in sizes):
        raise InputError(f"block sizes must be positive, got {sizes}")
    scales = [1.0] * len(sizes) if scales is None else list(scales)
    shifts = [0.0] * len(sizes) if shifts is None else list(shifts)
    if len(scales) != len(sizes) or len(shifts) != len(sizes):
        raise InputError("scales and shifts must match the number of blocks")
    rng = np.random.default_rng(seed)
    out = []
    for m, c, d in zip(sizes, scales, shifts):
        G = rng.standard_normal((m, m))
        if not real:
            G = (G + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
        out.append(c * G + d * np.eye(m))
    return out


def _block_random(spec):
    p = spec.params
    recipe = p.get("recipe")
    if recipe == "demo":
        blocks = random_blocks([10, 5], spec.seed, scales=[1j, -1], shifts=[0, -(3 - 2j)],
                               real=True)
        return blocks
    sizes = p.get("sizes")
    if sizes is None:
        sizes = PRESETS.get(recipe) if recipe else None
    if sizes is None:
        raise InputError("block-random needs 'sizes' or a known 'recipe'")
    return random_blocks(sizes, spec.seed, p.get("scales"), p.get("shifts"),
                         bool(p.get("real", False)))


def _blocks_for(spec: GallerySpec) -> list[np.ndarray]:
    fam = spec.family
    p = spec.params
    if fam == "block-random":
        return _block_random(spec)
    if fam == "paper-52":
        return composite52_blocks()
    if spec.n is None and fam != "hanowa-like":
        raise InputError(f"family {fam} needs a dimension n")
    if fam == "jordan":
        return [jordan_block(spec.n, complex(p.get("eig", 0.0)))]
    if fam == "clement-like":
        return [clement_like(spec.n)]
    if fam == "hanowa-like":
        m = p.get("m")
        if m is None:
            if spec.n is None or spec.n % 2:
                raise InputError("hanowa-like needs an even n or m")
            m = spec.n // 2
        return [hanowa_like(int(m), float(p.get("alpha", -1.0)))]
    raise InputError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")


def gallery(spec: GallerySpec) -> np.ndarray:
    """Matrix for ``spec``, conjugated by a seeded random unitary unless bare."""
    blocks = _blocks_for(spec)
    B = scipy.linalg.block_diag(*blocks).astype(complex)
    n = B.shape[0]
    if spec.n is not None and spec.n != n:
        raise InputError(f"block sizes sum to {n}, requested n = {spec.n}")
    if spec.params.get("bare", False):
        return B
    Q = random_unitary(n, spec.seed + 1, real=bool(spec.params.get("real_q", False)))
    return Q.conj().T @ B @ Q
