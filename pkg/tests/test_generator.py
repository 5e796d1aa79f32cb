import math

import mpmath
import numpy as np
import pytest

from fracops.generator import (difference_quotient_defect, differentiate, generator_apply,
                               generator_power_closed_form, interior_l2, digamma_power_identity,
                               log_kernel_convolve, unboundedness_ratio)
from fracops.grid import Family, Interval, SampledFunction, make_uniform_grid, sample_family
from fracops.special import EULER_GAMMA


def test_log_convolution_of_one():
    g = make_uniform_grid((0, 1), 257)
    out = log_kernel_convolve(sample_family(Family.constant(), g)).output
    # int_0^t ln(t - s) ds = t ln t - t
    t = g.nodes[1:]
    np.testing.assert_allclose(out.values[1:, 0], t * np.log(t) - t, atol=1e-12)


def test_log_convolution_against_quadrature():
    g = make_uniform_grid((0, 1), 513)
    out = log_kernel_convolve(SampledFunction(g, np.cos(3 * g.nodes)[:, None])).output
    t = g.nodes[400]
    ref = float(mpmath.quad(lambda s: mpmath.log(t - s) * mpmath.cos(3 * s), [0, t]))
    assert out.values[400, 0] == pytest.approx(ref, abs=1e-5)


def test_differentiate_orders():
    h = 1e-2
    x = np.arange(101) * h
    for order in (2, 4):
        np.testing.assert_allclose(differentiate(np.sin(x), h, order), np.cos(x), atol=1e-3)
    err4 = np.max(np.abs(differentiate(np.sin(x), h, 4) - np.cos(x)))
    err2 = np.max(np.abs(differentiate(np.sin(x), h, 2) - np.cos(x)))
    assert err4 < err2


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_generator_matches_closed_form(n):
    g = make_uniform_grid((0, 1), 2048)
    fam = Family.monomial(n) if n else Family.constant()
    num = generator_apply(sample_family(fam, g))
    exact = generator_power_closed_form(n, g)
    assert interior_l2(num, exact) < 5e-4


def test_closed_form_values():
    g = make_uniform_grid((0, 1), 5)
    cf = generator_power_closed_form(0, g)
    assert cf.values[-1, 0] == pytest.approx(EULER_GAMMA)


@pytest.mark.parametrize("n", range(1, 7))
def test_digamma_power_identity(n):
    for t in (0.3, 1.0, 2.5):
        lhs, rhs = digamma_power_identity(n, t)
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_difference_quotient():
    g = make_uniform_grid((0, 1), 2048)
    f2 = sample_family(Family.monomial(2), g)
    d = [difference_quotient_defect(f2, a, 2) for a in (0.1, 0.05, 0.02)]
    assert d[0] > d[1] > d[2]
    zero = SampledFunction(g, np.zeros((2048, 1)))
    assert difference_quotient_defect(zero, 0.1, 2) == 0.0
    with pytest.raises(ValueError):
        difference_quotient_defect(sample_family(Family.constant(), g), 0.1, math.inf)


def test_unboundedness_closed_form_vs_quadrature():
    for n in (1, 3, 6):
        r2, b2 = unboundedness_ratio(n, 2, Interval(0, 1))
        r3, _ = unboundedness_ratio(n, 2.0000001, Interval(0, 1))
        assert r2 == pytest.approx(r3, rel=1e-5)
        assert r2 >= b2
