# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see :mod:`frh._fallback` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, exp, log, atan2, cos, sin, hypot, M_PI

cnp.import_array()


cdef inline double complex _cexp(double complex z) noexcept nogil:
    cdef double r = exp(z.real)
    return r * cos(z.imag) + 1j * (r * sin(z.imag))


cdef inline double complex _clog(double complex z) noexcept nogil:
    return log(hypot(z.real, z.imag)) + 1j * atan2(z.imag, z.real)


def contour_sum(double a, double b, x, c, h, K, chunk=4096):
    cdef cnp.float64_t[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.float64_t[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef cnp.float64_t[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef cnp.int64_t[::1] kv = np.ascontiguousarray(K, dtype=np.int64)
    cdef Py_ssize_t n = xv.shape[0], i, k
    out = np.empty(n)
    mag = np.empty(n)
    cdef cnp.float64_t[::1] ov = out
    cdef cnp.float64_t[::1] mv = mag
    cdef double complex w, ls, g
    cdef double acc, accm, wt
    with nogil:
        for i in range(n):
            acc = 0.0
            accm = 0.0
            for k in range(kv[i] + 1):
                w = cv[i] + 1j * (hv[i] * k)
                ls = 2.0 * _clog(w)
                g = w * _cexp(w * w + (a - b) * ls) / (_cexp(a * ls) + xv[i])
                wt = 1.0 if k == 0 else 2.0
                acc += wt * g.real
                accm += wt * hypot(g.real, g.imag)
            ov[i] = hv[i] / M_PI * acc
            mv[i] = hv[i] / M_PI * accm
    return out, mag


def k33_scaled(gratio, Py_ssize_t n_max, double lo=1e-30, double hi=1e30):
    cdef cnp.float64_t[::1] gr = np.ascontiguousarray(gratio, dtype=np.float64)
    f_arr = np.zeros(n_max + 1)
    v_arr = np.zeros((3, n_max + 1))
    q_arr = np.zeros((3, n_max + 1))
    cdef cnp.float64_t[::1] f = f_arr
    cdef cnp.float64_t[:, ::1] v = v_arr
    cdef cnp.float64_t[:, ::1] sq = q_arr
    cdef Py_ssize_t n, j, r, m, k
    cdef double S, val, av, lam, log_mu = 0.0, mu = 1.0, sc, acc
    cdef double cube[3]
    f[0] = 1.0
    v[0, 0] = 1.0
    v[1, 0] = 1.0
    with nogil:
        for n in range(n_max):
            for r in range(3):
                acc = 0.0
                for j in range(n + 1):
                    acc += v[r, j] * v[r, n - j]
                sq[r, n] = acc
                acc = 0.0
                for j in range(n + 1):
                    acc += v[r, j] * sq[r, n - j]
                cube[r] = acc
            S = cube[1] + cube[2] + (cube[0] - cube[1] - cube[2]) / 3.0
            m = n + 1
            val = gr[n] * S / 3.0 * mu
            if (n // 2) & 1:
                val = -val
            f[m] = val
            v[0, m] = -val if (m // 2) & 1 else val
            v[2 if m & 1 else 1, m] = v[0, m]
            av = fabs(val)
            if av != 0.0 and (av < lo or av > hi):
                lam = -log(av) / m
                for k in range(m + 1):
                    sc = exp(lam * k)
                    f[k] *= sc
                    for r in range(3):
                        v[r, k] *= sc
                        sq[r, k] *= sc
                log_mu += lam
                mu = exp(log_mu)
    return f_arr, log_mu
