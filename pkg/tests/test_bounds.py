import math

import numpy as np
import pytest
from scipy import optimize

from fracops.bounds import (best_lower_bound, compile_report, eta, eval_eta_theta,
                            exact_norm_endpoint, generic_upper_bound, refined_upper_bounds, theta,
                            threshold_exponents, zeta_lower_bound)
from fracops.grid import Interval

UNIT = Interval(0, 1)


def _eta_naive(p):
    return (p - 1) / (p - ((p - 1) / p) ** (p - 1))


def _theta_naive(p):
    return 1 / (1 - (p - 1) * (p ** (-1 / (p - 1)) - 1))


def test_generic_and_endpoint():
    assert generic_upper_bound(1.0, UNIT) == 1.0
    assert generic_upper_bound(0.5, Interval(0, 4)) == pytest.approx(2 / math.gamma(1.5))
    assert exact_norm_endpoint(1.0, math.inf, Interval(0, 2)) == pytest.approx(2.0)


def test_refined_bound_values():
    i, ii, best, strict = refined_upper_bounds(1.0, 1.5, UNIT)
    assert i == pytest.approx(0.6933613, abs=1e-6)
    assert ii == pytest.approx(0.7631428, abs=1e-6)
    assert best == i and strict
    i, ii, _, _ = refined_upper_bounds(1.0, 2.0, UNIT)
    assert abs(i - ii) < 1e-12 and i == pytest.approx(math.sqrt(0.5))
    assert refined_upper_bounds(0.25, 2.0, UNIT)[:2] == (None, None)


def test_eta_theta_exact_values():
    assert eta(2.0) == pytest.approx(2 / 3, abs=1e-12)
    assert theta(2.0) == pytest.approx(2 / 3, abs=1e-12)
    assert eta(3.0) == pytest.approx(18 / 23, rel=1e-13)
    assert theta(3.0) == pytest.approx(math.sqrt(3) / (3 * math.sqrt(3) - 2), rel=1e-13)
    assert eval_eta_theta(2.5) == (eta(2.5), theta(2.5))


@pytest.mark.parametrize("p", [1.01, 1.3, 2.0, 4.0, 20.0])
def test_against_naive_formulas(p):
    # direct evaluation is accurate away from p = 1 and p = inf
    assert eta(p) == pytest.approx(_eta_naive(p), rel=1e-12)
    assert theta(p) == pytest.approx(_theta_naive(p), rel=1e-12)


def test_eta_theta_ranges_and_limits():
    ps = np.geomspace(1 + 1e-6, 1e6, 200)
    for p in ps:
        e, t = eval_eta_theta(p)
        assert 0 < e < 1 and 0 < t < 1
    # eta -> 0 as p -> 1 (like 1/|ln(p-1)|), eta -> 1 as p -> inf
    assert eta(1 + 1e-12) < 0.04
    assert eta(1e8) > 0.99


def test_threshold_exponents():
    p1, p2 = threshold_exponents(2 / 3)
    assert p1 == pytest.approx(2.0, abs=1e-8) and p2 == pytest.approx(2.0, abs=1e-8)
    for a in np.arange(1, 10) / 10:
        p1, p2 = threshold_exponents(a)
        assert abs(eta(p1) - a) <= 1e-10
        assert abs(theta(p2) - a) <= 1e-10


def test_threshold_against_brentq():
    a = 0.45
    ref = optimize.brentq(lambda p: eta(p) - a, 1 + 1e-12, 1e6, xtol=1e-14)
    assert threshold_exponents(a)[0] == pytest.approx(ref, rel=1e-9)


def test_lower_bound_below_upper():
    for a, p in [(0.5, 1.5), (1.0, 2.0), (2.0, 3.0)]:
        beta, lo = best_lower_bound(a, p, UNIT)
        assert 0 <= beta < 1 / p
        assert lo >= zeta_lower_bound(a, p, 0.0, UNIT) - 1e-12
        assert lo < generic_upper_bound(a, UNIT)
    assert zeta_lower_bound(1.0, 2.0, 0.0, UNIT) == pytest.approx(1 / math.sqrt(3))


def test_report():
    rep = compile_report(1.0, 2.0, UNIT)
    assert rep.lower == pytest.approx(0.5773503, abs=1e-7)
    assert rep.best_upper == pytest.approx(0.7071068, abs=1e-7)
    assert rep.generic_upper == 1.0 and rep.strict_flag
    assert list(rep.to_dict()) == ["alpha", "p", "t0", "t1", "generic_upper", "upper_i", "upper_ii",
                                   "best_upper", "lower", "p1_alpha", "p2_alpha", "strict_flag"]
    end = compile_report(0.5, 1.0, UNIT)
    assert end.lower == end.best_upper and not end.strict_flag
    with pytest.raises(ValueError):
        compile_report(-1.0, 2.0, UNIT)
