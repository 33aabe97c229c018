"""Fractional K(2,2) equation with Riesz dispersion.

The series solution started from ``u_0 = (4c/3) cos^2(x/4)`` resums to

    u = (2c/3) [1 + cos(x/2) E_{2b}(-z^2) + sin(x/2) z E_{2b,1+b}(-z^2)],

``z = gamma c t^beta``, ``gamma = 2^(1-alpha) (2^alpha - 1)/3``.  Writing
``D = E_{2b}(-z^2)`` and ``N = z E_{2b,1+b}(-z^2)`` gives
``u = (2c/3)(1 + A cos((x - phi)/2))`` with ``A = |(D, N)|`` and
``phi/2`` the continuous angle of ``(D, N)``.

The dynamics diagnostics (threshold, first minimum, critical points, branch
index) fix ``alpha = 2`` and ``c = 1``; other parameters reduce to that case
through :func:`k22_normalize_time`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULTS
from .errors import (
    DomainError,
    NoLocalMinimum,
    PredicateNotBracketed,
    UnwrapAmbiguity,
)
from .specfun import (
    RootBracket,
    diff_central,
    gamma_rec,
    mittag_leffler,
    ml_eval_many,
    ml_zeros,
    refine_root,
)
from .trigpoly import TrigPoly


@dataclass(frozen=True)
class K22Params:
    alpha: float = 2.0
    beta: float = 1.0
    c: float = 1.0
    gamma_factor: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise DomainError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise DomainError(f"beta must lie in (0, 1], got {self.beta}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c}")
        g = 2.0 ** (1 - self.alpha) * (2.0**self.alpha - 1) / 3
        object.__setattr__(self, "gamma_factor", g)


@dataclass(frozen=True)
class AmplitudePhaseSample:
    t: float
    A: float
    phi: float
    branch: int


# ------------------------------------------------------------ closed forms


def k22_coefficient(n: int, p: K22Params, x, t):
    """Closed-form series term ``u_n(x, t)``."""
    if n < 0:
        raise DomainError("n must be non-negative")
    x = np.asarray(x, float)
    if n == 0:
        out = 4 * p.c / 3 * np.cos(x / 4) ** 2
    else:
        a = p.alpha
        sign = -1.0 if (n // 2) % 2 else 1.0
        logmag = (
            (n + 1 - n * a) * math.log(2)
            + n * math.log(2**a - 1)
            + (n + 1) * math.log(p.c)
            - (n + 1) * math.log(3)
        )
        tb = t ** (p.beta * n) if t > 0 else 0.0
        psi = np.cos(x / 2) if n % 2 == 0 else np.sin(x / 2)
        out = sign * math.exp(logmag) * tb * gamma_rec(1 + p.beta * n) * psi
    return float(out) if out.ndim == 0 else out


def _z(p: K22Params, t):
    return p.gamma_factor * p.c * np.asarray(t, float) ** p.beta


def _dn(p: K22Params, t):
    """The pair ``(D, N)`` at times ``t`` (vectorized)."""
    t = np.atleast_1d(np.asarray(t, float))
    z = _z(p, t)
    arg = -(z * z)
    D = mittag_leffler(2 * p.beta, 1.0, arg)
    N = z * mittag_leffler(2 * p.beta, 1.0 + p.beta, arg)
    return D, N


def k22_solution(p: K22Params, x, t, tol: float = 1e-12):
    """Resummed solution ``u(x, t)``; ``x`` may be an array, ``t`` a scalar."""
    if tol < 1e-12:
        raise DomainError("tol must be at least 1e-12")
    D, N = _dn(p, [t])
    x = np.asarray(x, float)
    u = 2 * p.c / 3 * (1 + np.cos(x / 2) * D[0] + np.sin(x / 2) * N[0])
    return float(u) if u.ndim == 0 else u


def k22_partial_sum(p: K22Params, x, t, N: int):
    """``sum_{n<=N} u_n(x, t)`` from the closed-form coefficients."""
    return sum(k22_coefficient(n, p, x, t) for n in range(N + 1))


def k22_normalize_time(p: K22Params, t):
    """Time ``T`` with ``u_{alpha,c}(x, t) = c u_{2,1}(x, T)``.

    ``T = (2 gamma c)^(1/beta) t``, which maps ``z = gamma c t^beta`` onto
    the ``alpha = 2, c = 1`` value ``T^beta / 2``.
    """
    return (2 * p.gamma_factor * p.c) ** (1 / p.beta) * np.asarray(t, float)


# ------------------------------------------------------------ oracle


def k22_oracle_iterate(p: K22Params, N: int) -> list[TrigPoly]:
    """Spatial parts ``P_n`` of the series terms by direct iteration.

    ``u_n = P_n(x) t^(beta n) / Gamma(1 + beta n)``.  The recurrence
    ``D_t^beta u_{n+1} = L w_n`` with ``w_n = sum_k u_k u_{n-k}`` and ``L``
    acting on ``e^{ikx}`` as ``i k (|k|^alpha - 1)`` becomes

        P_{n+1} = Gamma(1 + beta n) L[sum_k P_k P_{n-k} / (G_k G_{n-k})],

    ``G_k = Gamma(1 + beta k)``, in exact harmonic algebra.
    """
    if N > 60:
        raise DomainError("oracle iteration is limited to N <= 60")
    a, b = p.alpha, p.beta

    def m(k):
        kf = float(k)
        return kf * (abs(kf) ** a - 1.0)

    P = [TrigPoly({0: (2 * p.c / 3, 0.0), Fraction(1, 2): (2 * p.c / 3, 0.0)})]
    rg = [gamma_rec(1 + b * k) for k in range(N + 1)]
    for n in range(N):
        w = TrigPoly()
        for k in range(n + 1):
            w = w + (P[k] * P[n - k]).scale(rg[k] * rg[n - k])
        P.append(w.apply_odd(m).scale(math.gamma(1 + b * n)))
    return P


# ------------------------------------------------------------ amplitude/phase


def _angle_refined(p, t):
    """Return ``theta`` at ``t`` unwrapped through adaptive bisection."""
    t = np.asarray(t, float)
    D, N = _dn(p, t)
    th = np.arctan2(N, D)
    out = [th[0]]
    cur = th[0]
    min_step = DEFAULTS.k22_unwrap_min_step
    for i in range(1, t.size):
        # refine this interval until every wrapped increment is < pi/4
        stack = [(t[i - 1], th[i - 1], t[i], th[i])]
        seq = []
        while stack:
            t0, a0, t1, a1 = stack.pop()
            d = (a1 - a0 + math.pi) % (2 * math.pi) - math.pi
            if abs(d) < math.pi / 4:
                seq.append((t0, d))
                continue
            if t1 - t0 < min_step:
                raise UnwrapAmbiguity(f"phase jump unresolved near t={t0:.9g}")
            tm = 0.5 * (t0 + t1)
            Dm, Nm = _dn(p, [tm])
            am = math.atan2(Nm[0], Dm[0])
            stack.append((tm, am, t1, a1))
            stack.append((t0, a0, tm, am))
        seq.sort()
        cur = cur + math.fsum(d for _, d in seq)
        out.append(cur)
    return D, N, np.array(out)


def k22_amplitude_phase(p: K22Params, t_grid) -> list[AmplitudePhaseSample]:
    """Amplitude and continuously unwrapped phase along ``t_grid``.

    The angle of ``(D, N)`` is followed with ``atan2``; each grid interval is
    bisected until consecutive phase samples differ by less than ``pi/2``.
    ``branch`` is the index ``j`` with ``phi/2`` in ``[(j - 1/2) pi,
    (j + 1/2) pi)``, i.e. the signed number of zeros of ``D`` crossed so
    far.
    """
    t = np.asarray(t_grid, float)
    if t.ndim != 1 or t.size == 0 or t[0] != 0 or np.any(np.diff(t) <= 0):
        raise DomainError("t_grid must be increasing and start at 0")
    D, N, th = _angle_refined(p, t)
    A = np.hypot(D, N)
    phi = 2 * th
    br = np.floor(th / math.pi + 0.5).astype(int)
    return [AmplitudePhaseSample(float(t[i]), float(A[i]), float(phi[i]), int(br[i])) for i in range(t.size)]


def k22_amplitude(beta: float, t):
    """``A(t)`` at ``alpha = 2, c = 1`` (vectorized)."""
    D, N = _dn(K22Params(2.0, beta, 1.0), t)
    return np.hypot(D, N)


def k22_asymp_amplitude(beta: float, t, regime: str = "short"):
    """Leading-order amplitude for ``t -> 0`` or ``t -> infinity``."""
    t = np.asarray(t, float)
    if regime == "short":
        coef = (2 * gamma_rec(1 + 2 * beta) - gamma_rec(1 + beta) ** 2) / 8
        return 1 - coef * t ** (2 * beta)
    if regime == "long":
        return 2 * gamma_rec(1 - beta) * t ** (-beta)
    raise DomainError(f"unknown regime {regime!r}")


def short_time_coefficient(beta: float) -> float:
    """``(1/8)(2/Gamma(1+2b) - 1/Gamma(1+b)^2)``, the ``t^(2b)`` coefficient of ``1 - A``."""
    return (2 * gamma_rec(1 + 2 * beta) - gamma_rec(1 + beta) ** 2) / 8


# ------------------------------------------------------------ scans


def _dA(beta, t):
    t = np.asarray(t, float)
    h = DEFAULTS.k22_rel_step * np.maximum(1.0, t)
    return diff_central(lambda s: k22_amplitude(beta, s), t, h)


def _scan_first_min(beta, t_max, step=None, chunk=20000):
    """Index-free scan for the first sample-level local minimum of ``A``.

    Returns the bracketing times ``(t_left, t_right)`` or ``None``.
    """
    step = DEFAULTS.k22_scan_step if step is None else step
    t0 = DEFAULTS.k22_scan_t_min
    n_total = int(math.floor((t_max - t0) / step)) + 1
    start = 0
    while start < n_total - 2:
        stop = min(n_total, start + chunk)
        ts = t0 + step * np.arange(start, stop)
        A = k22_amplitude(beta, ts)
        dA = np.diff(A)
        up = np.nonzero((dA[:-1] < 0) & (dA[1:] >= 0))[0]
        if up.size:
            i = up[0] + 1
            return float(ts[i - 1]), float(ts[i + 1])
        start = stop - 2
    return None


def _confirm_min(beta, br, widen=10):
    """Widen ``br`` until ``A'`` goes from negative to positive across it."""
    lo, hi = br
    step = DEFAULTS.k22_scan_step
    for _ in range(widen):
        flo, fhi = _dA(beta, np.array([lo, hi]))
        if flo < 0 < fhi:
            return RootBracket(lo, hi, float(flo), float(fhi))
        lo, hi = max(lo - step, DEFAULTS.k22_scan_t_min / 2), hi + step
    return None


def k22_has_local_min(beta: float, t_max: float | None = None) -> bool:
    """Whether ``A'`` changes sign from negative to positive on ``(t_min, t_max]``."""
    t_max = DEFAULTS.k22_beta_c_t_max if t_max is None else t_max
    br = _scan_first_min(beta, t_max)
    return br is not None and _confirm_min(beta, br) is not None


def k22_find_beta_c(tol_beta: float = 1e-3, t_max: float | None = None) -> float:
    """Threshold between monotone and oscillatory decay of ``A``.

    Bisection on ``beta`` over ``[0.5, 0.9]`` of the predicate
    :func:`k22_has_local_min`.
    """
    if tol_beta < 1e-4:
        raise DomainError("tol_beta must be at least 1e-4")
    t_max = DEFAULTS.k22_beta_c_t_max if t_max is None else t_max
    lo, hi = DEFAULTS.k22_beta_c_lo, DEFAULTS.k22_beta_c_hi
    p_lo, p_hi = k22_has_local_min(lo, t_max), k22_has_local_min(hi, t_max)
    if p_lo == p_hi:
        raise PredicateNotBracketed(f"predicate is {p_lo} at both ends of [{lo}, {hi}]")
    while hi - lo > tol_beta:
        mid = 0.5 * (lo + hi)
        if k22_has_local_min(mid, t_max) == p_hi:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def k22_find_t_beta(beta: float, t_max: float | None = None) -> float:
    """Time of the first local minimum of ``A``.

    Dense scan at step 0.01, then :func:`refine_root` on ``A'``.
    """
    t_max = DEFAULTS.k22_t_beta_t_max if t_max is None else t_max
    br = _scan_first_min(beta, t_max)
    if br is None:
        raise NoLocalMinimum(f"A has no local minimum up to t={t_max:g} at beta={beta}")
    bracket = _confirm_min(beta, br)
    if bracket is None:
        raise NoLocalMinimum(f"could not bracket A' near t={br[0]:.6g}")
    f = lambda s: float(_dA(beta, np.array([s]))[0])  # noqa: E731
    return refine_root(f, bracket, DEFAULTS.k22_phase_root_tol)


def _wronskian(beta, t):
    """``D N' - N D'``, which carries the sign of ``phi'``."""
    p = K22Params(2.0, beta, 1.0)
    t = np.asarray(t, float)
    h = DEFAULTS.k22_rel_step * np.maximum(1.0, t)
    D, N = _dn(p, t)
    dD = diff_central(lambda s: _dn(p, s)[0], t, h)
    dN = diff_central(lambda s: _dn(p, s)[1], t, h)
    return D * dN - N * dD


def k22_phase_critical_points(beta: float, t_max: float = 60.0) -> list[float]:
    """Roots of ``phi'(t)`` on ``(0, t_max]``.

    ``phi' = 2 (D N' - N D') / (D^2 + N^2)``; sign changes of the numerator
    on a 0.01 grid are refined with :func:`refine_root`.
    """
    step = DEFAULTS.k22_scan_step
    t0 = DEFAULTS.k22_scan_t_min
    ts = t0 + step * np.arange(int(math.floor((t_max - t0) / step)) + 1)
    W = _wronskian(beta, ts)
    idx = np.nonzero(np.sign(W[:-1]) * np.sign(W[1:]) < 0)[0]
    f = lambda s: float(_wronskian(beta, np.array([s]))[0])  # noqa: E731
    return [
        refine_root(f, RootBracket(ts[i], ts[i + 1], W[i], W[i + 1]), DEFAULTS.k22_phase_root_tol)
        for i in idx
    ]


def k22_branch_index(beta: float) -> int:
    """Index ``k`` of the limit ``phi -> (2k - 1) pi``.

    For ``beta <= 1/2`` the denominator ``D`` never vanishes and ``k = 1``.
    Otherwise each sign-changing zero of ``D`` moves ``phi/2`` by one
    half-turn, up when ``D`` falls through zero while ``N > 0`` (or rises
    while ``N < 0``) and down otherwise; ``k`` is the net count.  Zeros come
    from :func:`ml_zeros` on ``E_{2 beta}(-x)`` with certified completeness.
    """
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1)")
    if beta <= 0.5:
        return 1
    a = 2 * beta
    x_max = 50.0
    while True:
        zeros, complete, brackets = ml_zeros(a, x_max, full_output=True)
        if complete:
            break
        x_max *= 2
        if x_max > 1e6:
            raise DomainError("could not certify the zero set of E_{2 beta}")
    k = 0
    for xz, br in zip(zeros, brackets):
        n_sign = math.copysign(1.0, ml_eval_many(a, 1 + beta, [-xz])[0][0])
        d_sign = math.copysign(1.0, br.f_hi)  # sign of dD/dt after the zero
        k += int(-d_sign * n_sign)
    return k


def k22_asymp_phase(beta: float, t, k: int | None = None):
    """Leading-order phase for ``t -> infinity``.

    ``beta < 1/2``: ``pi - 4 Gamma(1-b)/Gamma(1-2b) t^-b``;
    ``beta = 1/2``: ``pi - sqrt(pi) e^{-t/4} t^(1/2)``;
    ``1/2 < beta < 1``: ``(2k - 1) pi - 4 Gamma(1-b)/Gamma(1-2b) t^-b``
    with ``k`` from :func:`k22_branch_index`.
    """
    t = np.asarray(t, float)
    if beta == 1:
        return t
    coef = 4 * math.gamma(1 - beta) * gamma_rec(1 - 2 * beta)
    if beta == 0.5:
        return math.pi - math.sqrt(math.pi) * np.exp(-t / 4) * np.sqrt(t)
    if beta < 0.5:
        return math.pi - coef * t ** (-beta)
    if k is None:
        k = k22_branch_index(beta)
    return (2 * k - 1) * math.pi - coef * t ** (-beta)
