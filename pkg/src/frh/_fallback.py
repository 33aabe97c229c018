"""Pure numpy implementations of the hot kernels.

These mirror :mod:`frh._kernels` argument for argument and are used when the
compiled extension is unavailable or ``FRH_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math

import numpy as np


def contour_sum(a, b, x, c, h, K, chunk=4096):
    """Trapezoidal sum of the Mittag-Leffler inversion integral.

    For each point ``x[i]`` evaluates

        (h/pi) Re sum_{k=-K..K} w g(w),   w = c + i h k,
        g(w) = exp(w^2) w^(2(a-b)) / (w^(2a) + x)

    exploiting conjugate symmetry, so only ``k >= 0`` is summed.  Returns the
    sum together with ``(h/pi) sum |w g(w)|`` for rounding estimates.
    """
    x = np.asarray(x, float)
    c = np.asarray(c, float)
    h = np.asarray(h, float)
    K = np.asarray(K, np.int64)
    out = np.empty(x.shape)
    mag = np.empty(x.shape)
    for s in range(0, x.size, chunk):
        sl = slice(s, s + chunk)
        xs, cs, hs, Ks = x[sl], c[sl], h[sl], K[sl]
        k = np.arange(int(Ks.max()) + 1)
        w = cs[:, None] + 1j * (hs[:, None] * k[None, :])
        ls = 2.0 * np.log(w)
        g = w * np.exp(w * w + (a - b) * ls) / (np.exp(a * ls) + xs[:, None])
        wt = np.where(k[None, :] <= Ks[:, None], 2.0, 0.0)
        wt[:, 0] = 1.0
        out[sl] = hs / math.pi * np.real(np.sum(wt * g, axis=1))
        mag[sl] = hs / math.pi * np.sum(wt * np.abs(g), axis=1)
    return out, mag


def k33_scaled(gratio, n_max, lo=1e-30, hi=1e30):
    """Scaled K(3,3) coefficients by the parity-weighted cubic convolution.

    Parameters
    ----------
    gratio : ndarray
        ``gratio[n] = Gamma(1+beta n)/Gamma(1+beta(n+1))`` for ``n < n_max``.
    n_max : int

    Returns
    -------
    f : ndarray
        Rescaled coefficients with ``e_n = f_n * exp(-n * log_mu)``.
    log_mu : float
        Accumulated log scale.  Scaled values obey the same recurrence
        with one extra factor ``mu = exp(log_mu)`` per step.

    Notes
    -----
    With ``s_n = (-1)^{floor(n/2)} e_n`` the recurrence reads

        e_{n+1} = (-1)^{floor(n/2)} gratio[n] / 3 *
                  sum_{n1+n2+n3=n} 3^{-sigma} s_{n1} s_{n2} s_{n3},

    where ``sigma`` is 0 when all three indices share a parity and 1
    otherwise.  Mixed-parity triples are obtained here as the full cube minus
    the pure even and pure odd cubes, each built from a running square so a
    step costs O(n).
    """
    f = np.zeros(n_max + 1)
    # rows: full, even-index and odd-index parts of s; sq holds their
    # self-convolutions, which are final at index k once s_k is known
    v = np.zeros((3, n_max + 1))
    sq = np.zeros((3, n_max + 1))
    f[0] = 1.0
    v[0, 0] = v[1, 0] = 1.0
    log_mu = 0.0
    mu = 1.0
    for n in range(n_max):
        head = v[:, : n + 1]
        sq[:, n] = np.einsum("ij,ij->i", head, head[:, ::-1])
        c_all, c_ev, c_od = np.einsum("ij,ij->i", head, sq[:, n::-1])
        S = c_ev + c_od + (c_all - c_ev - c_od) / 3.0
        m = n + 1
        sgn_n = -1.0 if (n // 2) % 2 else 1.0
        val = sgn_n * gratio[n] * S / 3.0 * mu
        f[m] = val
        st = (-1.0 if (m // 2) % 2 else 1.0) * val
        v[0, m] = st
        v[2 if m % 2 else 1, m] = st
        av = abs(val)
        if av != 0.0 and (av < lo or av > hi):
            lam = -math.log(av) / m
            scale = np.exp(lam * np.arange(m + 1))
            f[: m + 1] *= scale
            v[:, : m + 1] *= scale
            sq[:, : m + 1] *= scale
            log_mu += lam
            mu = math.exp(log_mu)
    return f, log_mu
