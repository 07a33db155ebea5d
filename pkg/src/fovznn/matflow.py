"""Dense complex matrices, the hermitean split A = H + iK and its angle flow."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = np.finfo(float).eps


class InputError(ValueError):
    """Malformed user input (shape, range, file contents)."""


class DimensionError(InputError):
    pass


class NumericalError(RuntimeError):
    """A numerical step failed (eigensolver, derivation, path tracking)."""


def as_matrix(A) -> np.ndarray:
    """Validate and return ``A`` as a square complex128 array."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def hermitize(M) -> np.ndarray:
    """Return (M + M*)/2, stored exactly hermitean with a real diagonal."""
    M = np.asarray(M, dtype=complex)
    S = (M + M.conj().T) / 2
    # mirror the upper triangle so that S - S* is exactly zero
    upper = np.triu(S, 1)
    S = upper + upper.conj().T + np.diag(S.diagonal().real).astype(complex)
    return S


@dataclass(frozen=True)
class HermitianFlow:
    """The pair (H, K) with F(t) = cos(t) H + sin(t) K."""

    H: np.ndarray
    K: np.ndarray

    @property
    def n(self) -> int:
        return self.H.shape[0]


def split_hermitian(A) -> HermitianFlow:
    A = as_matrix(A)
    H = hermitize(A)
    K = hermitize((A - A.conj().T) / 2j)
    return HermitianFlow(H, K)


def flow_eval(flow: HermitianFlow, t: float) -> np.ndarray:
    # a real linear combination of mirrored matrices stays mirrored
    return np.cos(t) * flow.H + np.sin(t) * flow.K


def flow_derivative(flow: HermitianFlow, t: float) -> np.ndarray:
    return -np.sin(t) * flow.H + np.cos(t) * flow.K


def normality_defect(A) -> float:
    """Relative commutator size ||AA* - A*A||_F / ||A||_F^2 (0 for A = 0)."""
    A = as_matrix(A)
    scale = np.linalg.norm(A) ** 2
    if scale == 0:
        return 0.0
    Ah = A.conj().T
    return float(np.linalg.norm(A @ Ah - Ah @ A) / scale)


def is_normal(A, tol: float | None = None) -> bool:
    A = as_matrix(A)
    if tol is None:
        tol = 100 * A.shape[0] * EPS
    if tol < 0:
        raise InputError("tol must be nonnegative")
    return normality_defect(A) <= tol


def quadratic_form(A, x) -> complex:
    """x*Ax for a unit vector x."""
    A = np.asarray(A, dtype=complex)
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.shape[0] != A.shape[0]:
        raise DimensionError(f"vector of length {x.shape} does not match {A.shape}")
    if abs(np.linalg.norm(x) - 1) > 1e-12:
        raise InputError("x must have unit norm")
    return complex(np.vdot(x, A @ x))


def random_unitary(n: int, seed: int, real: bool = False) -> np.ndarray:
    """Haar-distributed unitary (or orthogonal, ``real=True``) from a seeded QR.

    The columns are rescaled by the phases of diag(R) so that the factor is
    unique and the result does not depend on LAPACK sign conventions.
    """
    if n < 1:
        raise InputError("n must be positive")
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n))
    if not real:
        Z = (Z + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = R.diagonal()
    phases = d / np.abs(d)
    return (Q * phases).astype(complex)
