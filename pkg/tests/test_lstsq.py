"""QR least-squares solver contract."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edmlab.errors import InsufficientDataError, RankDeficientError
from edmlab.lstsq import solve_least_squares


def test_identity_design():
    beta = solve_least_squares(np.eye(3), [1, 2, 3])
    np.testing.assert_allclose(beta, [1, 2, 3], atol=1e-14)


def test_constant_fit():
    beta = solve_least_squares(np.ones((3, 1)), [2, 2, 2])
    assert beta[0] == pytest.approx(2.0, abs=1e-14)


def test_exact_line():
    x = np.array([0.0, 1.0, 2.0])
    design = np.column_stack([np.ones_like(x), x])
    beta = solve_least_squares(design, [1, 3, 5])
    np.testing.assert_allclose(beta, [1.0, 2.0], atol=1e-13)


def test_rank_deficiency_names_column():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    design = np.column_stack([np.ones_like(x), x, 2 * x])
    with pytest.raises(RankDeficientError) as err:
        solve_least_squares(design, x, column_names=["const", "x", "2x"])
    assert err.value.column == 2
    assert "2x" in str(err.value)


def test_zero_column_rejected():
    design = np.column_stack([np.ones(3), np.zeros(3)])
    with pytest.raises(RankDeficientError):
        solve_least_squares(design, np.zeros(3))


def test_underdetermined_rejected():
    with pytest.raises(InsufficientDataError):
        solve_least_squares(np.ones((2, 3)), [1, 2])


@given(st.integers(0, 100_000), st.integers(2, 6), st.integers(7, 25))
@settings(max_examples=100, deadline=None)
def test_residual_orthogonality(seed, p, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, p))
    y = rng.normal(size=n)
    beta = solve_least_squares(a, y)
    residual = y - a @ beta
    y_norm = np.linalg.norm(y)
    for j in range(p):
        col = a[:, j]
        assert abs(col @ residual) <= 1e-8 * max(y_norm, 1e-12) * np.linalg.norm(col)
