import io
import math

import numpy as np
import pytest

from fracops.grid import (Family, Interval, LebesgueExponent, SampledFunction, as_exponent, lp_norm,
                          make_uniform_grid, read_table_csv, sample_family, write_table_csv)


def test_interval_and_grid():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    g = make_uniform_grid((0, 2), 5)
    assert g.h == 0.5
    assert g.nodes[-1] == 2.0
    np.testing.assert_allclose(g.nodes, [0, 0.5, 1, 1.5, 2])
    with pytest.raises(ValueError):
        make_uniform_grid((0, 1), 1)


def test_exponent():
    assert as_exponent("inf").is_infinite
    assert LebesgueExponent(1.5).conjugate == pytest.approx(3.0)
    assert LebesgueExponent(1.0).conjugate == math.inf
    with pytest.raises(ValueError):
        LebesgueExponent(0.5)


def test_lp_norm_of_monomial():
    g = make_uniform_grid((0, 1), 2049)
    f = sample_family(Family.monomial(2), g)
    # ||t^2||_p = (2p+1)^(-1/p)
    for p in (1.0, 2.0, 3.0):
        assert lp_norm(f, p) == pytest.approx((2 * p + 1) ** (-1 / p), rel=1e-5)
    assert lp_norm(f, math.inf) == 1.0


def test_singular_power_is_flagged():
    g = make_uniform_grid((0, 1), 65)
    f = sample_family(Family.power(-0.3), g)
    assert f.singular_at_t0
    assert f.values[0, 0] == 0.0
    with pytest.raises(ValueError):
        Family.power(-1.0)


def test_sigma_p_family():
    g = make_uniform_grid((0, 4), 9)
    f = sample_family(Family.sigma_p(0.5, 2.0), g)
    s = g.nodes
    expected = np.where(s <= 1, 0.0, np.maximum(s, 1) ** -1.0)
    np.testing.assert_allclose(f.values[:, 0], expected)


def test_vector_valued_and_arithmetic():
    g = make_uniform_grid((0, 1), 11)
    f = sample_family(Family.constant(), g, d=3)
    assert f.values.shape == (11, 3)
    assert not f.values.flags.writeable
    h = (f + f) * 0.5 - f
    assert np.all(h.values == 0)


def test_table_csv_roundtrip():
    g = make_uniform_grid((0.5, 1.5), 17)
    vals = np.column_stack([np.sin(g.nodes), np.cos(g.nodes)])
    f = SampledFunction(g, vals)
    text = write_table_csv(f)
    assert text.splitlines()[0] == "t,v1,v2"
    back = read_table_csv(io.StringIO(text))
    assert np.array_equal(back.values, f.values)
    assert write_table_csv(back) == text


def test_table_rejects_nonuniform():
    with pytest.raises(ValueError):
        read_table_csv(io.StringIO("t,v1\n0,1\n0.3,1\n1,1\n"))
