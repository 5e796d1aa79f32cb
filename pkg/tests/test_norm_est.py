import math

import numpy as np
import pytest

from fracops.grid import make_uniform_grid
from fracops.norm_est import (NonConvergenceError, brute_force_norm, build_operator_matrix,
                              estimate_norm, matrix_p_norm, richardson, singular_spectrum, tol_disc)


def test_endpoint_methods(rng):
    K = rng.random((6, 6))
    assert matrix_p_norm(K, 1.0).value == pytest.approx(np.abs(K).sum(axis=0).max())
    assert matrix_p_norm(K, math.inf).value == pytest.approx(np.abs(K).sum(axis=1).max())
    assert matrix_p_norm(K, 2.0).value == pytest.approx(np.linalg.norm(K, 2))
    assert matrix_p_norm(K, 2.0, method="power2").value == pytest.approx(np.linalg.norm(K, 2), rel=1e-10)


@pytest.mark.parametrize("p", [1.5, 3.0, 4.0])
def test_boyd_agrees_with_brute_force(p):
    K = build_operator_matrix(make_uniform_grid((0, 1), 5), 0.7).entries
    assert matrix_p_norm(K, p).value == pytest.approx(brute_force_norm(K, p), rel=1e-8)


def test_boyd_p2_matches_svd(rng):
    K = np.abs(rng.standard_normal((20, 20)))
    assert matrix_p_norm(K, 2.0, method="boyd").value == pytest.approx(np.linalg.norm(K, 2), rel=1e-10)


def test_norm_reproducible_with_seed():
    K = build_operator_matrix(make_uniform_grid((0, 1), 64), 0.5).entries
    a = matrix_p_norm(K, 3.0, seed=7).value
    b = matrix_p_norm(K, 3.0, seed=7).value
    assert a == b


def test_nonconvergence_reported():
    K = build_operator_matrix(make_uniform_grid((0, 1), 128), 0.5).entries
    with pytest.raises(NonConvergenceError) as info:
        matrix_p_norm(K, 1.2, method="boyd", max_iter=1, restarts=1, tol=1e-16)
    assert info.value.best is not None


def test_estimate_and_maximizer():
    est = estimate_norm(build_operator_matrix(make_uniform_grid((0, 1), 128), 1.0), 2)
    assert est.value == pytest.approx(2 / math.pi, abs=5e-3)
    assert np.max(np.abs(est.maximizer.values)) == pytest.approx(1.0)
    d = est.to_dict()
    assert d["p"] == 2.0 and d["n"] == 128


def test_richardson_and_tolerance():
    assert richardson(1.1, 1.05) == pytest.approx(1.0)
    assert tol_disc(100) == 0.05 and tol_disc(10 ** 6) == 1e-3


def test_spectrum_alpha_one():
    s = singular_spectrum(build_operator_matrix(make_uniform_grid((0, 1), 1024), 1.0), 3)
    # continuous Volterra operator: 2 / ((2k-1) pi)
    np.testing.assert_allclose(s, [2 / math.pi, 2 / (3 * math.pi), 2 / (5 * math.pi)], rtol=2e-3)
