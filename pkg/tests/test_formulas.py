import numpy as np
import pytest

from fovznn.formulas import (
    ROOT_MARGIN,
    DerivationError,
    FormulaCoeffs,
    derive_lookahead_formula,
    taylor_system,
)


@pytest.fixture(scope="module")
def f45():
    return derive_lookahead_formula(4, 5)


def test_45_taylor_conditions(f45):
    assert f45.truncation_order == 6
    assert len(f45.state_weights) == 9
    assert np.abs(f45.taylor_residuals()).max() <= 1e-12


def test_45_root_condition(f45):
    roots = f45.characteristic_roots()
    # exactly one root at 1, all others strictly inside by the margin
    assert np.min(np.abs(roots - 1)) < 1e-10
    assert f45.root_margin() >= ROOT_MARGIN
    assert np.abs(roots).max() <= 1 + 1e-10


def test_45_stable_under_znn_feedback(f45):
    for h in (0.01, 0.02, 0.05):
        assert f45.feedback_radius(h) < 1


def test_taylor_rows_written_out():
    # lags 0, -1, -2 and the derivative column, rows q = 0, 1, 2
    A, rhs = taylor_system(3, 3)
    assert np.allclose(A, [[1, 1, 1, 0], [0, -1, -2, 1], [0, 0.5, 2, 0]])
    assert np.allclose(rhs, [1, 1, 0.5])


def test_45_order_on_exponential(f45):
    w = np.array(f45.state_weights)
    c = f45.derivative_weight
    errs = []
    for tau in (0.04, 0.02, 0.01):
        hist = np.exp(1.0 - tau * np.arange(9))
        errs.append(abs(w @ hist + c * tau * np.e - np.exp(1.0 + tau)))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(ratios > 50)
    assert np.all(ratios < 80)


def test_11_is_forward_euler():
    f = derive_lookahead_formula(1, 1)
    assert f.state_weights[0] == 1.0
    assert f.state_weights[1] == 0.0
    assert f.derivative_weight == 1.0
    assert f.truncation_order == 2


@pytest.mark.parametrize("k,s", [(2, 2), (3, 3)])
def test_smaller_formulas_are_convergent(k, s):
    f = derive_lookahead_formula(k, s)
    assert np.abs(f.taylor_residuals()).max() <= 1e-12
    assert f.root_margin() >= ROOT_MARGIN


def test_derivation_rejects_bad_types():
    with pytest.raises(DerivationError):
        derive_lookahead_formula(0, 2)


def test_coeffs_are_deterministic(f45):
    assert derive_lookahead_formula(4, 5) is f45
    assert isinstance(f45, FormulaCoeffs)
