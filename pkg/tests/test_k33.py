import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frh.errors import DomainError, NotConverged, OutsideRadius
from frh.k33 import (
    SQRT_3_2,
    c3_closed_form,
    k33_c_sequence,
    k33_eval,
    k33_gamma_radius,
    k33_oracle_iterate,
    k33_partial_amplitude,
    k33_series,
    k33_short_asymp,
    oracle_c_values,
)


@pytest.fixture(scope="module")
def seq03():
    return k33_c_sequence(0.3, 400)


class TestSequence:
    def test_beta_one(self):
        s = k33_c_sequence(1.0, 60)
        np.testing.assert_allclose([s.c(n) for n in range(61)], 1.0, rtol=1e-10)

    @pytest.mark.parametrize("b", [0.1, 0.3, 0.5, 0.9])
    def test_low_order(self, b):
        s = k33_c_sequence(b, 20)
        np.testing.assert_allclose([s.c(0), s.c(1), s.c(2)], 1.0, rtol=1e-14)
        assert s.c(3) == pytest.approx(c3_closed_form(b), rel=1e-12)

    def test_c3_example(self):
        assert c3_closed_form(0.5) == pytest.approx(3 - 4 / math.pi)

    @given(st.floats(0.05, 1.0))
    @settings(max_examples=15)
    def test_oracle_agrees(self, b):
        ref = oracle_c_values(k33_oracle_iterate(b, 25), b)
        s = k33_c_sequence(b, 25, check=False)
        np.testing.assert_allclose([s.c(n) for n in range(26)], ref, rtol=1e-10)

    def test_oracle_support(self):
        Q = k33_oracle_iterate(0.6, 30)
        for n, q in enumerate(Q):
            assert set(q.support(1e-300)) <= {Fraction(1, 3)}
            assert abs(q.mean()) < 1e-14

    def test_double_matches_extended_low_beta(self):
        e = k33_c_sequence(0.3, 200)
        d = k33_c_sequence(0.3, 200, precision="double")
        np.testing.assert_allclose(d.log_e[1:], e.log_e[1:], rtol=1e-8)
        np.testing.assert_array_equal(d.sign, e.sign)

    def test_double_loses_digits_near_one(self):
        e = k33_c_sequence(1.0, 120)
        d = k33_c_sequence(1.0, 120, precision="double", check=False)
        err_e = np.max(np.abs(np.expm1(e.log_e + np.log(np.array([math.gamma(1 + n) for n in range(121)], float)) + np.arange(121) * math.log(3))))
        assert err_e < 1e-12
        assert not np.allclose(d.log_e, e.log_e, rtol=1e-6)

    @pytest.mark.parametrize("kw", [dict(beta=0.0), dict(beta=1.1), dict(beta=0.5, n_max=601), dict(beta=0.5, precision="quad")])
    def test_domain(self, kw):
        with pytest.raises(DomainError):
            k33_c_sequence(**kw)


class TestRadius:
    def test_root_example(self):
        g, R = k33_gamma_radius(k33_c_sequence(0.3, 201), method="root", index=201)
        assert g == pytest.approx(1.833, abs=1e-3)
        assert R == pytest.approx(5.1655, rel=1e-4)

    def test_methods(self, seq03):
        R = {m: k33_gamma_radius(seq03, m, index=400)[1] for m in ("richardson", "tail-mean", "last", "root")}
        assert R["last"] == R["root"]
        assert R["richardson"] < R["last"] < R["tail-mean"]
        assert R["richardson"] == pytest.approx(4.8871, rel=1e-3)

    def test_radius_formula(self, seq03):
        g, R = k33_gamma_radius(seq03)
        assert R == pytest.approx((3 / g) ** (1 / 0.3))

    def test_errors(self, seq03):
        with pytest.raises(DomainError):
            k33_gamma_radius(seq03, "root")
        with pytest.raises(DomainError):
            k33_gamma_radius(seq03, "secant")
        with pytest.raises(NotConverged):
            k33_gamma_radius(k33_c_sequence(0.3, 8))


@pytest.fixture(scope="module")
def series():
    return k33_series(0.5, 200)


class TestEvaluation:
    def test_initial(self, series):
        u, A, phi = k33_eval(series, 0.0, 0.0)
        assert u == pytest.approx(SQRT_3_2)
        assert A == pytest.approx(SQRT_3_2) and phi == 0.0

    def test_outside_radius(self, series):
        with pytest.raises(OutsideRadius):
            k33_eval(series, 0.0, series.radius)
        with pytest.raises(DomainError):
            k33_eval(series, 0.0, -1.0)

    def test_beta_one_travelling_wave(self):
        s = k33_series(1.0, 120)
        assert s.radius == math.inf
        x = np.linspace(-9, 9, 19)
        for t in (0.5, 3.0, 10.0):
            u, A, phi = k33_eval(s, x, t)
            np.testing.assert_allclose(u, SQRT_3_2 * np.cos((x - t) / 3), atol=1e-10)
            assert phi == pytest.approx(t, abs=1e-9)

    def test_short_time(self, series):
        for t in (1e-3, 1e-2):
            _, A, phi = k33_eval(series, 0.0, t)
            A0, p0 = k33_short_asymp(0.5, t)
            assert abs(A - A0) < 5 * t ** 1.5
            assert phi == pytest.approx(p0, rel=0.05)

    def test_period(self, series):
        x = np.linspace(0, 5, 11)
        assert np.allclose(k33_eval(series, x, 1.0)[0], k33_eval(series, x + 6 * math.pi, 1.0)[0])

    def test_partial_amplitude_is_sup(self, series):
        x = np.linspace(0, 6 * math.pi, 20001)
        from frh.k33 import k33_partial_sum

        a = k33_partial_amplitude(series, 2.0, 15)
        assert np.max(np.abs(k33_partial_sum(series, x, 2.0, 15))) == pytest.approx(a, rel=1e-6)
