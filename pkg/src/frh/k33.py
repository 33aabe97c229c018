"""Fractional K(3,3) equation (``alpha = 2``, ``c = 1``).

Starting from ``u_0 = sqrt(3/2) cos(x/3)`` every series term stays on the
single harmonic ``1/3`` because ``A = d/dx + d^3/dx^3`` annihilates harmonic
1.  Writing

    u_n = sqrt(3/2) s_n t^(beta n) psi_n(x/3),   psi = cos (n even), sin (n odd),

with ``s_n = (-1)^floor(n/2) e_n`` and ``e_n = c_n / (Gamma(1 + beta n) 3^n)``
gives ``c_n(1) = 1`` for all ``n`` and the solution
``u = E_c(t) cos(x/3) + E_s(t) sin(x/3)``.

The scaled coefficients obey

    e_{n+1} = (-1)^floor(n/2) Gamma(1+beta n)/Gamma(1+beta(n+1)) / 3
              * sum_{n1+n2+n3=n} 3^-sigma s_{n1} s_{n2} s_{n3},

``sigma = 0`` when the three indices share a parity and 1 otherwise.  The
sum cancels heavily (by ``3^n`` at ``beta = 1``: the cube leaks into
harmonic 1 and the harmonic-1/3 projection is small), so by default the
sequence is built in extended precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import _core
from .config import DEFAULTS
from .errors import DomainError, NotConverged, OracleMismatch, OutsideRadius, TruncationWarning
from .trigpoly import TrigPoly

SQRT_3_2 = math.sqrt(1.5)
H13 = Fraction(1, 3)


def working_dps(n_max: int) -> int:
    """Decimal digits that absorb the worst-case (beta = 1) cancellation."""
    return 40 + math.ceil(1.4 * math.log10(3) * n_max)


def _ctx(n_max):
    ctx = mpmath.MPContext()
    ctx.dps = working_dps(n_max)
    return ctx


def _check_n(n_max):
    if not 0 <= n_max <= 600:
        raise DomainError("n_max must lie in [0, 600]")


# ------------------------------------------------------------ oracle


def k33_oracle_iterate(beta: float, n_max: int, ctx=None) -> list[TrigPoly]:
    """Spatial parts ``Q_n`` with ``u_n = Q_n(x) t^(beta n)``.

    Direct iteration of ``D_t^beta u_{n+1} = -A w_n``,
    ``w_n = sum_{n1+n2+n3=n} u_{n1} u_{n2} u_{n3}``, in harmonic algebra
    with extended-precision coefficients (``mpmath`` numbers of ``ctx``).
    """
    _check_n(n_max)
    ctx = ctx or _ctx(n_max)
    b = ctx.mpf(beta)

    def m(k):
        kk = ctx.mpf(k.numerator) / k.denominator
        return kk * (1 - kk * kk)

    Q = [TrigPoly({H13: (ctx.sqrt(ctx.mpf(3) / 2), ctx.mpf(0))})]
    sq = []
    lg_prev = ctx.loggamma(1)
    for n in range(n_max):
        s = TrigPoly()
        for k in range(n + 1):
            s = s + Q[k] * Q[n - k]
        sq.append(s)
        w = TrigPoly()
        for k in range(n + 1):
            w = w + Q[k] * sq[n - k]
        lg = ctx.loggamma(1 + b * (n + 1))
        ratio = ctx.exp(lg_prev - lg)
        lg_prev = lg
        Q.append(w.apply_odd(m).scale(-ratio))
    return Q


def oracle_c_values(Q, beta: float) -> list[float]:
    """Reconstruct ``c_n`` from oracle terms."""
    out = []
    for n, q in enumerate(Q):
        c, s = q.coefficient(H13)
        kappa = c if n % 2 == 0 else s
        sign = -1 if (n // 2) % 2 else 1
        log_abs = (
            mpmath.log(abs(kappa)) + math.lgamma(1 + beta * n) + n * math.log(3) - math.log(SQRT_3_2)
            if kappa != 0
            else -math.inf
        )
        out.append(sign * math.copysign(1.0, float(kappa)) * math.exp(float(log_abs)))
    return out


# ------------------------------------------------------------ recurrence


@dataclass(frozen=True)
class CoeffSeq:
    """Scaled coefficients ``e_n`` stored as sign and ``log|e_n|``.

    ``gamma_n = 3 |e_n|^(1/n) = (c_n / Gamma(1 + beta n))^(1/n)``.
    """

    beta: float
    n_max: int
    sign: np.ndarray
    log_e: np.ndarray
    precision: str = "extended"
    gamma_n: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = np.arange(self.n_max + 1)
        g = np.full(self.n_max + 1, np.nan)
        g[1:] = 3.0 * np.exp(self.log_e[1:] / n[1:])
        object.__setattr__(self, "gamma_n", g)

    def c(self, n: int) -> float:
        """Reconstructed ``c_n`` (may overflow to ``inf`` for large ``n``)."""
        lc = self.log_e[n] + math.lgamma(1 + self.beta * n) + n * math.log(3)
        return float(self.sign[n]) * (math.exp(lc) if lc < 709 else math.inf)

    def log_c(self, n: int) -> float:
        return float(self.log_e[n] + math.lgamma(1 + self.beta * n) + n * math.log(3))

    def s(self):
        """Signed scaled coefficients ``s_n`` as ``(sign, log|s_n|)``."""
        flip = np.where((np.arange(self.n_max + 1) // 2) % 2 == 1, -1, 1)
        return self.sign * flip, self.log_e

    def tail(self, fraction: float | None = None):
        fraction = DEFAULTS.k33_tail_fraction if fraction is None else fraction
        n0 = max(1, int(math.floor(self.n_max * (1 - fraction))))
        n = np.arange(n0, self.n_max + 1)
        return n, self.gamma_n[n0:]

    def tail_rel_var(self, fraction: float | None = None) -> float:
        _, g = self.tail(fraction)
        m = np.mean(g)
        return float(np.var(g, ddof=1) / (m * m)) if g.size > 1 and m != 0 else math.inf


def _extended_sequence(beta, n_max, ctx):
    """Incremental parity-split cube convolution in extended precision."""
    b = ctx.mpf(beta)
    zero, one = ctx.mpf(0), ctx.mpf(1)
    full = [one] + [zero] * n_max
    ev = [one] + [zero] * n_max
    od = [zero] * (n_max + 1)
    sqF, sqE, sqO = [zero] * (n_max + 1), [zero] * (n_max + 1), [zero] * (n_max + 1)
    e = [one]
    dot = ctx.fdot
    lg_prev = ctx.loggamma(1)
    for n in range(n_max):
        sqF[n] = dot(full[: n + 1], full[n::-1])
        sqE[n] = dot(ev[: n + 1], ev[n::-1])
        sqO[n] = dot(od[: n + 1], od[n::-1])
        cF = dot(full[: n + 1], sqF[n::-1])
        cE = dot(ev[: n + 1], sqE[n::-1])
        cO = dot(od[: n + 1], sqO[n::-1])
        S = cE + cO + (cF - cE - cO) / 3
        lg = ctx.loggamma(1 + b * (n + 1))
        val = ctx.exp(lg_prev - lg) * S / 3
        lg_prev = lg
        if (n // 2) % 2:
            val = -val
        m = n + 1
        e.append(val)
        st = -val if (m // 2) % 2 else val
        full[m] = st
        if m % 2:
            od[m] = st
        else:
            ev[m] = st
    sign = np.array([int(ctx.sign(v)) for v in e], dtype=np.int8)
    log_e = np.array([float(ctx.log(abs(v))) if v != 0 else -np.inf for v in e])
    return sign, log_e


def _double_sequence(beta, n_max):
    gr = np.exp([math.lgamma(1 + beta * k) - math.lgamma(1 + beta * (k + 1)) for k in range(n_max)])
    f, log_mu = _core.k33_scaled(gr, n_max)
    with np.errstate(divide="ignore"):
        log_e = np.log(np.abs(f)) - np.arange(n_max + 1) * log_mu
    return np.sign(f).astype(np.int8), log_e


def k33_c_sequence(beta: float, n_max: int | None = None, precision: str = "extended", check: bool = True) -> CoeffSeq:
    """Coefficient sequence from the recurrence, checked against the oracle.

    Parameters
    ----------
    beta : float
    n_max : int, optional
    precision : {"extended", "double"}
        ``"double"`` runs the compiled (or numpy) triple-sum kernel; it is
        fast but loses about ``log10`` of the cancellation factor in
        digits, which is harmless for ``beta <= 0.7`` and severe near 1.
    check : bool
        Compare with :func:`k33_oracle_iterate` for ``n <= 40``.

    Raises
    ------
    OracleMismatch
        If the recurrence and the oracle disagree beyond ``1e-10``.
    """
    n_max = DEFAULTS.k33_n_max if n_max is None else n_max
    _check_n(n_max)
    if not 0 < beta <= 1:
        raise DomainError("beta must lie in (0, 1]")
    if precision == "extended":
        sign, log_e = _extended_sequence(beta, n_max, _ctx(n_max))
    elif precision == "double":
        sign, log_e = _double_sequence(beta, n_max)
    else:
        raise DomainError(f"unknown precision {precision!r}")
    seq = CoeffSeq(beta, n_max, sign, log_e, precision)
    if check:
        n_chk = min(n_max, DEFAULTS.k33_oracle_check_n)
        ref = oracle_c_values(k33_oracle_iterate(beta, n_chk), beta)
        for n in range(n_chk + 1):
            c = seq.c(n)
            if abs(c - ref[n]) > DEFAULTS.k33_oracle_rtol * abs(ref[n]):
                raise OracleMismatch(f"c_{n}({beta}): recurrence {c!r} vs oracle {ref[n]!r}")
    return seq


def c3_closed_form(beta: float) -> float:
    return 3 - math.gamma(1 + 2 * beta) / math.gamma(1 + beta) ** 2


# ------------------------------------------------------------ radius


RADIUS_METHODS = ("richardson", "tail-mean", "last", "root")


def k33_gamma_radius(seq: CoeffSeq, method: str = "richardson", index: int | None = None):
    """Growth constant ``gamma`` and radius ``R = (3/gamma)^(1/beta)``.

    Methods
    -------
    richardson
        least-squares fit ``gamma_n = gamma + a/n`` over the last 20 % of
        indices (the default);
    tail-mean
        plain mean of the same tail;
    last
        ``gamma_{n_max}``;
    root
        ``gamma_index``, the root test at one index.

    Raises
    ------
    NotConverged
        If the relative tail variance of ``gamma_n`` exceeds the threshold.
    """
    if method not in RADIUS_METHODS:
        raise DomainError(f"unknown method {method!r}")
    if seq.n_max < 10:
        raise NotConverged("need at least 10 coefficients")
    rv = seq.tail_rel_var()
    if rv > DEFAULTS.k33_tail_rel_var:
        raise NotConverged(f"tail relative variance {rv:.3g} above threshold")
    n, g = seq.tail()
    if method == "richardson":
        X = np.column_stack([np.ones(n.size), 1.0 / n])
        coef, *_ = np.linalg.lstsq(X, g, rcond=None)
        gamma = float(coef[0])
    elif method == "tail-mean":
        gamma = float(np.mean(g))
    elif method == "last":
        gamma = float(seq.gamma_n[seq.n_max])
    else:
        if index is None or not 1 <= index <= seq.n_max:
            raise DomainError("root method needs 1 <= index <= n_max")
        gamma = float(seq.gamma_n[index])
    R = (3.0 / gamma) ** (1.0 / seq.beta) if gamma > 0 else math.inf
    return gamma, R


# ------------------------------------------------------------ evaluation


@dataclass(frozen=True)
class K33Series:
    beta: float
    N: int
    radius: float
    seq: CoeffSeq = field(repr=False)
    margin: float = 0.05

    def terms(self, t, N: int | None = None):
        """Term magnitudes ``sqrt(3/2) s_n t^(beta n)`` as a signed array."""
        N = self.N if N is None else N
        sg, le = self.seq.s()
        n = np.arange(N + 1)
        if t == 0:
            out = np.zeros(N + 1)
            out[0] = SQRT_3_2
            return out
        with np.errstate(over="ignore"):
            return SQRT_3_2 * sg[: N + 1] * np.exp(le[: N + 1] + self.beta * n * math.log(t))

    def partial(self, t, N: int | None = None):
        """``(E_c, E_s)`` summed up to ``N``."""
        tr = self.terms(t, N)
        return math.fsum(tr[0::2]), math.fsum(tr[1::2])

    def E_c(self, t, N=None):
        return self.partial(t, N)[0]

    def E_s(self, t, N=None):
        return self.partial(t, N)[1]


def k33_series(beta: float, n_max: int | None = None, margin: float | None = None, seq: CoeffSeq | None = None) -> K33Series:
    """Build a :class:`K33Series` with its radius (``inf`` at ``beta = 1``)."""
    n_max = DEFAULTS.k33_n_max if n_max is None else n_max
    margin = DEFAULTS.k33_margin if margin is None else margin
    seq = seq or k33_c_sequence(beta, n_max)
    if beta == 1:
        R = math.inf
    else:
        R = k33_gamma_radius(seq)[1]
    return K33Series(beta, seq.n_max, R, seq, margin)


def _truncation(series: K33Series, t: float) -> int:
    tr = series.terms(t)
    run = np.cumsum(tr[0::2]), np.cumsum(tr[1::2])
    rtol = DEFAULTS.k33_term_rtol
    for n in range(2, series.N + 1):
        ec = run[0][min(n // 2, run[0].size - 1)]
        es = run[1][min((n - 1) // 2, run[1].size - 1)]
        scale = math.hypot(ec, es)
        if abs(tr[n]) < rtol * scale and abs(tr[n - 1]) < rtol * scale:
            return n
    warnings.warn(
        f"series at t={t:g} not converged to {rtol:g} within {series.N} terms",
        TruncationWarning,
        stacklevel=3,
    )
    return series.N


def _angle_path(series, t, N):
    """``theta = angle(E_c, E_s)`` unwrapped along ``[0, t]``."""
    m = 64
    while True:
        ts = np.linspace(0.0, t, m + 1)
        th = np.array([math.atan2(*series.partial(s, N)[::-1]) for s in ts])
        d = np.diff(th)
        d = (d + math.pi) % (2 * math.pi) - math.pi
        if np.all(np.abs(d) < math.pi / 4) or m > 1 << 16:
            return th[0] + math.fsum(d)
        m *= 4


def k33_eval(series: K33Series, x, t: float):
    """``(u, A, phi)`` at ``(x, t)``; ``u = A cos((x - phi)/3)``.

    Raises
    ------
    OutsideRadius
        If ``t >= R (1 - margin)``.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    if t >= series.radius * (1 - series.margin):
        raise OutsideRadius(t, series.radius, series.margin)
    N = _truncation(series, t) if t > 0 else 0
    Ec, Es = series.partial(t, N)
    x = np.asarray(x, float)
    u = Ec * np.cos(x / 3) + Es * np.sin(x / 3)
    A = math.hypot(Ec, Es)
    phi = 3 * _angle_path(series, t, N) if t > 0 else 0.0
    return (float(u) if u.ndim == 0 else u), A, phi


def k33_partial_sum(series: K33Series, x, t: float, N: int):
    """Unguarded partial sum ``sum_{n<=N} u_n(x, t)``."""
    Ec, Es = series.partial(t, N)
    x = np.asarray(x, float)
    return Ec * np.cos(x / 3) + Es * np.sin(x / 3)


def k33_partial_amplitude(series: K33Series, t: float, N: int) -> float:
    """``sup_x |sum_{n<=N} u_n(x, t)|``, which equals ``hypot(E_c, E_s)``."""
    Ec, Es = series.partial(t, N)
    return math.hypot(Ec, Es)


def k33_short_asymp(beta: float, t: float):
    """Leading small-``t`` amplitude and phase."""
    coef = (1 / math.gamma(1 + 2 * beta) - 1 / (2 * math.gamma(1 + beta) ** 2)) / (3 * math.sqrt(6))
    A = SQRT_3_2 - coef * t ** (2 * beta)
    phi = t**beta / math.gamma(1 + beta)
    return A, phi
