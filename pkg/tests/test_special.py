import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fracops.special import (EULER_GAMMA, PositiveReal, digamma_fn, gamma_fn, gamma_ratio,
                             harmonic_number, log_gamma)

mpmath.mp.dps = 30


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.5, 7.25, 50.0, 170.5])
def test_gamma_against_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-14)


def test_gamma_known_values():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma_fn(5.0) == 24.0


def test_gamma_overflow_and_domain():
    with pytest.raises(OverflowError):
        gamma_fn(172.0)
    with pytest.raises(ValueError):
        gamma_fn(0.0)
    with pytest.raises(ValueError):
        PositiveReal(-1.0)


@given(st.floats(min_value=0.05, max_value=160.0))
@settings(max_examples=60, deadline=None)
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-13)


@pytest.mark.parametrize("a,b", [(0.5, 1.5), (2.0, 3.3), (180.0, 179.5), (300.0, 301.0)])
def test_gamma_ratio(a, b):
    ref = float(mpmath.gamma(a) / mpmath.gamma(b))
    assert gamma_ratio(a, b) == pytest.approx(ref, rel=1e-12)


def test_log_gamma():
    assert log_gamma(400.0) == pytest.approx(float(mpmath.loggamma(400)), rel=1e-14)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.0, 5.5, 17.0])
def test_digamma_against_mpmath(x):
    assert digamma_fn(x) == pytest.approx(float(mpmath.digamma(x)), rel=1e-13, abs=1e-15)


def test_digamma_harmonic_identity():
    assert digamma_fn(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-15)
    for n in range(1, 12):
        assert digamma_fn(n + 1.0) == pytest.approx(harmonic_number(n) - EULER_GAMMA, rel=1e-14)
    assert harmonic_number(0) == 0.0
