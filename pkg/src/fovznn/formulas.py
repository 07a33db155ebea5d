"""Convergent look-ahead finite difference formulas of type k_s.

A formula of type k_s predicts the next state from the k+s most recent
states and the current derivative,

    x[j+1] = sum_i w[i] * x[j-i] + c * tau * xdot[j],   i = 0 .. k+s-1,

with the weights chosen so that the Taylor expansions agree through order
k+1 (local truncation error O(tau^(k+2))).  The s-1 remaining degrees of
freedom are spent on stability: the characteristic polynomial must satisfy
the root condition, and since the formula is driven by the ZNN error
feedback xdot = ... - eta*E, it must also stay stable once that feedback
(h = eta*tau) is folded into the polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.optimize

from .matflow import NumericalError

ROOT_MARGIN = 1e-8
# ZNN feedback levels h = eta * tau the formula must tolerate; the defaults
# tau = 2e-4, eta in [50, 240] give h in [0.01, 0.048].
FEEDBACK_LEVELS = (0.01, 0.02, 0.04, 0.06)


class DerivationError(NumericalError):
    pass


@dataclass(frozen=True)
class FormulaCoeffs:
    k: int
    s: int
    state_weights: tuple[float, ...]
    derivative_weight: float
    truncation_order: int

    @property
    def steps(self) -> int:
        return len(self.state_weights)

    def taylor_residuals(self, order: int | None = None) -> np.ndarray:
        """Residuals of the Taylor conditions 0 .. order-1 (default k+2 of them)."""
        if order is None:
            order = self.truncation_order
        A, rhs = taylor_system(self.steps, order)
        x = np.array(self.state_weights + (self.derivative_weight,))
        return A @ x - rhs

    def characteristic_roots(self, h: float = 0.0) -> np.ndarray:
        """Roots of z^m - sum w_i z^(m-1-i), with ZNN feedback h folded in."""
        return _roots(np.array(self.state_weights), self.derivative_weight, h)

    def spurious_radius(self) -> float:
        return _spurious_radius(np.array(self.state_weights))

    def root_margin(self) -> float:
        return 1.0 - self.spurious_radius()

    def feedback_radius(self, h: float) -> float:
        return float(np.abs(self.characteristic_roots(h)).max())


def taylor_system(steps: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows q = 0..order-1 of the Taylor matching system, scaled by 1/q!.

    Unknowns are (w_0, ..., w_{steps-1}, c).  Row q states
    sum_i w_i (-i)^q / q! + c [q == 1] = 1 / q!.
    """
    rows = np.zeros((order, steps + 1))
    rhs = np.zeros(order)
    lags = -np.arange(steps, dtype=float)
    for q in range(order):
        f = math.factorial(q)
        rows[q, :steps] = lags ** q / f
        rows[q, steps] = 1.0 if q == 1 else 0.0
        rhs[q] = 1.0 / f
    return rows, rhs


def _roots(w, c, h):
    poly = np.concatenate([[1.0], -w])
    poly[1] += c * h
    return np.roots(poly)


def _spurious_radius(w) -> float:
    r = _roots(w, 0.0, 0.0)
    r = np.delete(r, np.argmin(np.abs(r - 1)))
    return float(np.abs(r).max()) if r.size else 0.0


def _objective(x, feedback):
    w, c = x[:-1], x[-1]
    worst = _spurious_radius(w)
    for h in feedback:
        worst = max(worst, float(np.abs(_roots(w, c, h)).max()))
    return worst


def _search(order, steps, feedback, seed):
    A, rhs = taylor_system(steps, order)
    base = np.linalg.lstsq(A, rhs, rcond=None)[0]
    N = scipy.linalg.null_space(A)
    if N.shape[1] == 0:
        return base
    f = lambda c: _objective(base + N @ c, feedback)  # noqa: E731
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(4000):
        c0 = rng.standard_normal(N.shape[1]) * rng.choice([0.1, 1.0, 10.0])
        trials.append((f(c0), c0))
    trials.sort(key=lambda p: p[0])
    best = None
    for _, c0 in trials[:10]:
        res = scipy.optimize.minimize(
            f, c0, method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 20000, "maxfev": 40000},
        )
        if best is None or res.fun < best.fun:
            best = res
    x = base + N @ best.x
    # one Newton-type projection back onto the Taylor conditions
    x = x - np.linalg.lstsq(A, A @ x - rhs, rcond=None)[0]
    # snap negligible weights to exact zeros and re-solve for the rest
    keep = np.abs(x) > 1e-8
    if not keep.all():
        y = np.zeros_like(x)
        y[keep] = np.linalg.lstsq(A[:, keep], rhs, rcond=None)[0]
        if np.abs(A @ y - rhs).max() < 1e-14:
            x = y
    return x


def _coeffs(k, s, x, order):
    return FormulaCoeffs(k, s, tuple(float(v) for v in x[:-1]), float(x[-1]), order)


@lru_cache(maxsize=None)
def derive_lookahead_formula(k: int, s: int, seed: int = 0) -> FormulaCoeffs:
    """Derive a convergent k_s formula with truncation error O(tau^(k+2)).

    If the family has no free parameter and its single member violates the
    root condition, the matching order is lowered by one and the member with
    the smallest spurious roots is returned; for (1, 1) this is forward Euler.
    """
    if k < 1 or s < 1:
        raise DerivationError("k and s must be positive")
    steps = k + s
    order = k + 2
    x = _search(order, steps, FEEDBACK_LEVELS, seed)
    coeffs = _coeffs(k, s, x, order)
    if coeffs.root_margin() >= ROOT_MARGIN:
        return coeffs
    if s == 1:
        x = _search(order - 1, steps, (), seed)
        coeffs = _coeffs(k, s, x, order - 1)
        if coeffs.root_margin() >= ROOT_MARGIN:
            return coeffs
    raise DerivationError(f"no convergent look-ahead formula of type {k}_{s}")
