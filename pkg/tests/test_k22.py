import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frh.errors import DomainError, NoLocalMinimum
from frh.k22 import (
    K22Params,
    k22_amplitude,
    k22_amplitude_phase,
    k22_asymp_amplitude,
    k22_asymp_phase,
    k22_branch_index,
    k22_coefficient,
    k22_find_t_beta,
    k22_has_local_min,
    k22_normalize_time,
    k22_oracle_iterate,
    k22_partial_sum,
    k22_phase_critical_points,
    k22_solution,
    short_time_coefficient,
)
from frh.specfun import erfi_eval, gamma_rec


class TestParams:
    def test_gamma_factor(self):
        assert K22Params(2.0).gamma_factor == 0.5
        assert K22Params(1.0).gamma_factor == pytest.approx(1 / 3)
        assert K22Params(1e-8).gamma_factor < 1e-8

    @given(st.floats(1e-6, 2.0))
    def test_gamma_factor_range(self, a):
        assert 0 < K22Params(a).gamma_factor <= 0.5

    @pytest.mark.parametrize("kw", [dict(alpha=0), dict(alpha=2.5), dict(beta=0), dict(beta=1.2), dict(c=0)])
    def test_validation(self, kw):
        with pytest.raises(DomainError):
            K22Params(**kw)


class TestClosedForm:
    def test_examples(self):
        p = K22Params(2.0, 0.5, 1.0)
        assert k22_coefficient(0, p, 0.0, 0.0) == pytest.approx(4 / 3)
        assert k22_coefficient(1, p, math.pi, 1.0) == pytest.approx(1 / (3 * math.gamma(1.5)), rel=1e-14)
        for a in (0.5, 1.5, 2.0):
            assert abs(k22_coefficient(2, K22Params(a, 0.7), math.pi, 2.3)) < 1e-16

    def test_travelling_wave(self):
        p = K22Params(2.0, 1.0, 1.0)
        for x in (0, 1, 2):
            for t in (0, 1, 5):
                assert k22_solution(p, x, t) == pytest.approx(4 / 3 * math.cos((x - t) / 4) ** 2, abs=1e-10)

    @given(st.floats(0.1, 2), st.floats(0.05, 1), st.floats(0.2, 2), st.floats(-10, 10))
    def test_initial_profile(self, a, b, c, x):
        assert k22_solution(K22Params(a, b, c), x, 0.0) == pytest.approx(4 * c / 3 * math.cos(x / 4) ** 2, abs=1e-14)

    def test_stationary_limit(self):
        p = K22Params(1e-8, 0.6, 1.0)
        x = np.linspace(-6, 6, 13)
        for t in (0.2, 0.5, 1.0):
            assert np.max(np.abs(k22_solution(p, x, t) - k22_solution(p, x, 0.0))) <= 1e-6

    def test_partial_sums_converge(self):
        p = K22Params(2.0, 0.7, 1.0)
        x = np.linspace(0, 4 * np.pi, 21)
        assert np.max(np.abs(k22_partial_sum(p, x, 2.0, 40) - k22_solution(p, x, 2.0))) < 1e-13

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            k22_solution(K22Params(), 0.0, 1.0, tol=1e-14)


class TestOracle:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
    @pytest.mark.parametrize("c", [0.5, 1.0])
    def test_equivalence(self, alpha, c):
        p = K22Params(alpha, 0.6, c)
        P = k22_oracle_iterate(p, 30)
        x = np.linspace(-7, 7, 23)
        for n, q in enumerate(P):
            closed = k22_coefficient(n, p, x, 1.0) / gamma_rec(1 + p.beta * n)
            assert np.max(np.abs(q(x) - closed)) <= 1e-11 * np.max(np.abs(closed))

    def test_harmonic_structure(self):
        P = k22_oracle_iterate(K22Params(2.0, 0.5, 1.0), 12)
        assert P[1].coefficient(1) == (0.0, 0.0)
        for q in P[1:]:
            assert abs(q.mean()) < 1e-15
            assert set(q.support(1e-300)) <= {0.5}

    def test_size_limit(self):
        with pytest.raises(DomainError):
            k22_oracle_iterate(K22Params(), 61)


class TestAmplitudePhase:
    def test_classical(self):
        t = np.linspace(0, 20, 201)
        s = k22_amplitude_phase(K22Params(2.0, 1.0, 1.0), t)
        assert max(abs(q.A - 1) for q in s) <= 1e-9
        assert max(abs(q.phi - q.t) for q in s) <= 1e-9

    @given(st.floats(0.05, 1.0))
    def test_start(self, b):
        q = k22_amplitude_phase(K22Params(2.0, b, 1.0), [0.0, 0.5])[0]
        assert (q.A, q.phi, q.branch) == (1.0, 0.0, 0)

    def test_erfi_identity(self):
        t = np.linspace(0, 40, 400)
        A = k22_amplitude(0.5, t)
        ref = np.sqrt(np.exp(-t / 2) * (1 + np.array([erfi_eval(math.sqrt(s) / 2) for s in t]) ** 2))
        np.testing.assert_allclose(A, ref, rtol=1e-8)

    @pytest.mark.parametrize("b", [0.2, 0.45, 0.5])
    def test_phase_monotone_below_half(self, b):
        s = k22_amplitude_phase(K22Params(2.0, b, 1.0), np.linspace(0, 80, 801))
        assert np.all(np.diff([q.phi for q in s]) >= 0)

    @pytest.mark.parametrize("b", [0.3, 0.6, 0.8, 0.95])
    def test_range_and_continuity(self, b):
        s = k22_amplitude_phase(K22Params(2.0, b, 1.0), np.linspace(0, 100, 501))
        A = np.array([q.A for q in s])
        phi = np.array([q.phi for q in s])
        assert np.all((A >= 0) & (A <= 1 + 1e-12))
        assert np.max(np.abs(np.diff(phi))) < 2 * math.pi

    def test_branch_tracks_phase(self):
        s = k22_amplitude_phase(K22Params(2.0, 0.8, 1.0), np.linspace(0, 2000, 4001))
        assert s[-1].branch == 3
        assert s[-1].phi / math.pi == pytest.approx(5, abs=0.01)

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            k22_amplitude_phase(K22Params(), [0.5, 1.0])


class TestAsymptotics:
    def test_short_classical(self):
        assert k22_asymp_amplitude(1.0, 0.3) == 1.0
        assert short_time_coefficient(1.0) == 0.0

    def test_long_classical_is_zero(self):
        assert k22_asymp_amplitude(1.0, 123.0, "long") == 0.0

    def test_long_time_amplitude(self):
        t = 1e4
        ref = 2 * t**-0.3 / math.gamma(0.7)
        assert k22_asymp_amplitude(0.3, t, "long") == pytest.approx(ref)
        assert k22_amplitude(0.3, [t])[0] == pytest.approx(ref, rel=0.02)

    @pytest.mark.parametrize("b", [0.3, 0.5, 0.7])
    def test_short_time_exponent(self, b):
        t = np.logspace(-4, -2, 50)
        slope, icpt = np.polyfit(np.log(t), np.log(1 - k22_amplitude(b, t)), 1)
        assert slope == pytest.approx(2 * b, rel=0.02)
        assert icpt == pytest.approx(math.log(short_time_coefficient(b)), rel=0.01)

    def test_phase_sub_half(self):
        t = 1e4
        lead = (math.pi - k22_asymp_phase(0.3, t)) * t**0.3
        assert lead == pytest.approx(4 * math.gamma(0.7) / math.gamma(0.4))
        phi = k22_amplitude_phase(K22Params(2.0, 0.3, 1.0), np.linspace(0, t, 2001))[-1].phi
        assert (math.pi - phi) * t**0.3 == pytest.approx(lead, rel=0.02)

    def test_phase_half(self):
        t = 40.0
        r = (math.pi - k22_asymp_phase(0.5, t)) / (math.sqrt(math.pi) * math.exp(-10) * math.sqrt(40))
        assert r == pytest.approx(1, abs=1e-3)

    def test_phase_overshoot(self):
        v = k22_asymp_phase(0.8, 1e4)
        assert v > 5 * math.pi and v - 5 * math.pi < 0.5


class TestDiagnostics:
    def test_predicate(self):
        assert not k22_has_local_min(0.3)
        assert k22_has_local_min(0.8)

    @pytest.mark.parametrize("b,published", [(0.80, 14.60), (0.90, 40.71), (0.98, 356.19)])
    def test_t_beta(self, b, published):
        assert k22_find_t_beta(b) == pytest.approx(published, rel=0.02)

    def test_no_local_min(self):
        with pytest.raises(NoLocalMinimum):
            k22_find_t_beta(0.6, t_max=500)

    def test_critical_points(self):
        assert k22_phase_critical_points(0.8, 60) == pytest.approx([25.53, 31.21, 39.91, 48.24, 55.06], abs=0.05)
        assert k22_phase_critical_points(0.6, 60) == pytest.approx([13.87], abs=0.05)
        assert k22_phase_critical_points(0.4, 60) == []

    @pytest.mark.parametrize("b,k", [(0.8, 3), (0.6, 1), (0.4, 1), (0.5, 1)])
    def test_branch_index(self, b, k):
        assert k22_branch_index(b) == k

    def test_branch_index_domain(self):
        with pytest.raises(DomainError):
            k22_branch_index(1.0)


class TestNormalization:
    def test_identity(self):
        assert k22_normalize_time(K22Params(2.0, 0.4, 1.0), 3.0) == pytest.approx(3.0)

    def test_alpha_one(self):
        p = K22Params(1.0, 0.5, 1.0)
        ref = K22Params(2.0, 0.5, 1.0)
        x = np.linspace(-5, 5, 7)
        for t in (0.5, 2.0, 7.0):
            T = float(k22_normalize_time(p, t))
            assert T == pytest.approx(4 * t / 9)
            np.testing.assert_allclose(k22_solution(p, x, t), k22_solution(ref, x, T), atol=1e-10)

    def test_speed_two(self):
        p = K22Params(2.0, 1.0, 2.0)
        x = np.linspace(-5, 5, 7)
        assert float(k22_normalize_time(p, 1.5)) == pytest.approx(3.0)
        np.testing.assert_allclose(k22_solution(p, x, 1.5), 2 * k22_solution(K22Params(), x, 3.0), atol=1e-12)
