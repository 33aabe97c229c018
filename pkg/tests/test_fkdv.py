import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frh.errors import AliasingWarning, DomainError
from frh.fkdv import (
    SpatialGrid,
    cheb_sup,
    fkdv_closed_u123,
    fkdv_divergence_report,
    fkdv_iterate,
    fkdv_ratio,
    fkdv_ratio_table,
    fkdv_resum_beta1,
    spectral_dx,
)
from frh.reference import ratio_reference

GRID = SpatialGrid()


@pytest.fixture(scope="module")
def s05():
    return fkdv_iterate(GRID, 0.5, 9)


class TestGrid:
    def test_defaults(self):
        assert GRID.points == 8192 and GRID.half_length == 60
        assert GRID.dx == pytest.approx(120 / 8192)

    @pytest.mark.parametrize("n", [0, 6000, 8191])
    def test_power_of_two(self, n):
        with pytest.raises(DomainError):
            SpatialGrid(60, n)

    def test_boundary_decay(self):
        g0 = 3 / np.cosh(GRID.x[0] / 2) ** 2
        assert 1e-26 < g0 < 1e-24

    def test_spectral_derivative(self):
        x = GRID.x
        f = 3 / np.cosh(x / 2) ** 2
        exact = -3 * np.tanh(x / 2) / np.cosh(x / 2) ** 2
        assert np.max(np.abs(spectral_dx(GRID, f) - exact)) < 1e-10


class TestTerms:
    def test_first_term_example(self, s05):
        assert s05.evaluate(1, 1.0) == pytest.approx(3 * math.tanh(0.5) / math.cosh(0.5) ** 2 / math.gamma(1.5), rel=1e-13)

    def test_sup_example(self, s05):
        assert s05.sup(1) == pytest.approx(2 / math.sqrt(3) / math.gamma(1.5), rel=1e-10)

    @pytest.mark.parametrize("beta", [0.2, 0.5, 0.8, 1.0])
    def test_closed_forms(self, beta):
        s = fkdv_iterate(GRID, beta, 3)
        x = np.linspace(-30, 30, 601)
        for n, u in enumerate(fkdv_closed_u123(beta, x, 1.0), start=1):
            assert np.max(np.abs(s.evaluate(n, x) - u)) <= 1e-12 * max(1.0, np.max(np.abs(u)))

    def test_parity_and_mean(self, s05):
        x = GRID.x[1:]
        for n in range(10):
            g = s05.evaluate(n, x)
            sign = -1 if n % 2 else 1
            assert np.max(np.abs(g - sign * s05.evaluate(n, -x))) <= 1e-10 * s05.sup(n)
            if n:
                assert abs(np.sum(s05.g[n]) * GRID.dx) <= 1e-10 * s05.sup(n)

    def test_grid_sup_close_to_exact(self, s05):
        for n in range(10):
            assert s05.sup(n, "grid") <= s05.sup(n) * (1 + 1e-12)
            assert s05.sup(n, "grid") == pytest.approx(s05.sup(n), rel=1e-3)

    def test_double_precision_fine_below_one(self):
        e = fkdv_iterate(GRID, 0.5, 9)
        d = fkdv_iterate(GRID, 0.5, 9, precision="double")
        for n in range(10):
            assert d.sup(n) == pytest.approx(e.sup(n), rel=1e-8)

    def test_spectral_cross_check(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AliasingWarning)
            sp = fkdv_iterate(GRID, 0.5, 3, method="spectral")
        ch = fkdv_iterate(GRID, 0.5, 3)
        for n in range(4):
            assert sp.sup(n, "grid") == pytest.approx(ch.sup(n, "grid"), rel=1e-5)

    @pytest.mark.parametrize("kw", [dict(beta=0.0), dict(beta=1.5), dict(N_terms=31), dict(method="fd")])
    def test_domain(self, kw):
        with pytest.raises(DomainError):
            fkdv_iterate(GRID, **kw)

    @given(st.floats(0.05, 1.0), st.floats(0.01, 2.0), st.floats(0.01, 2.0))
    @settings(max_examples=20)
    def test_time_scaling(self, beta, t1, t2):
        s = fkdv_iterate(GRID, beta, 4)
        for n in range(1, 5):
            r = (s.sup(n) * t2 ** (beta * n)) / (s.sup(n) * t1 ** (beta * n))
            assert r == pytest.approx((t2 / t1) ** (beta * n), rel=1e-12)


class TestChebSup:
    def test_known(self):
        assert cheb_sup([0, 0, 1]) == pytest.approx(1.0)
        assert cheb_sup([]) == 0.0
        assert cheb_sup([0.5, 0.5]) == pytest.approx(1.0)

    @given(st.lists(st.floats(-5, 5), min_size=1, max_size=12))
    def test_bounds_dense_sampling(self, c):
        T = np.linspace(-1, 1, 5001)
        dense = np.max(np.abs(np.polynomial.chebyshev.chebval(T, c)))
        assert cheb_sup(c) >= dense - 1e-9 * max(1, dense)


class TestRatios:
    @pytest.mark.parametrize("beta,t,pair", [(0.2, 0.01, (6, 5)), (0.4, 0.41, (7, 6)), (0.6, 0.81, (9, 8)), (0.8, 0.21, (8, 7))])
    def test_cells(self, beta, t, pair):
        s = fkdv_iterate(GRID, beta, 9)
        assert fkdv_ratio(s, t, pair[1]) == pytest.approx(ratio_reference(beta, t, pair), rel=0.01)

    def test_table_shape(self):
        rows = fkdv_ratio_table([0.4], [0.21, 0.61], [(6, 5), (7, 6)], GRID)
        assert [r["pair"] for r in rows] == ["6/5", "6/5", "7/6", "7/6"]
        assert rows[1]["ratio"] > rows[0]["ratio"]

    def test_bad_pair(self):
        with pytest.raises(DomainError):
            fkdv_ratio_table([0.4], [0.2], [(7, 5)], GRID)


class TestResummation:
    def test_converges(self):
        assert fkdv_resum_beta1(GRID, 20, 0.5) <= 1e-6

    def test_improves_with_terms(self):
        assert fkdv_resum_beta1(GRID, 20, 0.5) < fkdv_resum_beta1(GRID, 5, 0.5)

    def test_zero_time(self):
        assert fkdv_resum_beta1(GRID, 5, 0.0) == 0.0


class TestDivergence:
    def test_report(self):
        rep = fkdv_divergence_report(0.2, [0.21, 1.0])
        assert all(r["increasing"] for r in rep["rows"])
        assert len(rep["rows"][0]["ratios"]) == 9
        assert rep["partial_sum_sup_N9_t1"] > 1e10

    def test_domain(self):
        with pytest.raises(DomainError):
            fkdv_divergence_report(1.0, [0.5])
