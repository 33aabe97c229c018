"""Finite trigonometric polynomials with rational wavenumbers.

``p(x) = sum_k C_k cos(k x) + S_k sin(k x)`` with ``k >= 0`` held as
:class:`fractions.Fraction`.  Coefficients may be floats or any type that
supports ``+ - *`` with itself and with Python numbers (``mpmath.mpf``
included), so the same algebra serves as a double-precision or an
extended-precision oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

import numpy as np


def _frac(k) -> Fraction:
    return k if isinstance(k, Fraction) else Fraction(k).limit_denominator(10**6)


class TrigPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[Fraction, tuple] = {}
        for k, (c, s) in (terms or {}).items():
            k = _frac(k)
            if k < 0:
                k, s = -k, -s
            self._acc(k, c, s)

    @classmethod
    def cos(cls, k, coef=1.0):
        return cls({k: (coef, 0 * coef)})

    @classmethod
    def sin(cls, k, coef=1.0):
        return cls({k: (0 * coef, coef)})

    @classmethod
    def const(cls, value):
        return cls({0: (value, 0 * value)})

    def _acc(self, k, c, s):
        if k == 0:
            s = 0 * s  # sin(0) vanishes
        if k in self.terms:
            c0, s0 = self.terms[k]
            self.terms[k] = (c0 + c, s0 + s)
        else:
            self.terms[k] = (c, s)

    def copy(self):
        out = TrigPoly()
        out.terms = dict(self.terms)
        return out

    def coefficient(self, k):
        """``(cos, sin)`` coefficient pair of harmonic ``k`` (zeros if absent)."""
        return self.terms.get(_frac(k), (0.0, 0.0))

    def harmonics(self):
        return sorted(self.terms)

    def support(self, tol=0.0):
        return [k for k in self.harmonics() if abs(self.terms[k][0]) > tol or abs(self.terms[k][1]) > tol]

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.const(other)
        out = self.copy()
        for k, (c, s) in other.terms.items():
            out._acc(k, c, s)
        return out

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly({k: (-c, -s) for k, (c, s) in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        return TrigPoly({k: (a * c, a * s) for k, (c, s) in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TrigPoly):
            return self.scale(other)
        out = TrigPoly()
        for k1, (c1, s1) in self.terms.items():
            for k2, (c2, s2) in other.terms.items():
                # cos a cos b = (cos(a-b) + cos(a+b))/2, etc.
                hp, hm = k1 + k2, k1 - k2
                cc, ss, cs, sc = c1 * c2, s1 * s2, c1 * s2, s1 * c2
                out._acc(hp, (cc - ss) / 2, (cs + sc) / 2)
                if hm >= 0:
                    out._acc(hm, (cc + ss) / 2, (sc - cs) / 2)
                else:
                    out._acc(-hm, (cc + ss) / 2, (cs - sc) / 2)
        return out

    __rmul__ = __mul__

    def apply_odd(self, m: Callable[[Fraction], float]):
        """Apply the operator acting on ``e^{ikx}`` as ``i m(k)`` (``m`` real).

        ``cos(kx) -> -m(k) sin(kx)`` and ``sin(kx) -> m(k) cos(kx)``.
        Harmonics with ``m(k) == 0`` are dropped.
        """
        out = TrigPoly()
        for k, (c, s) in self.terms.items():
            mk = m(k)
            if mk == 0:
                continue
            out._acc(k, mk * s, -mk * c)
        return out

    def derivative(self):
        return self.apply_odd(lambda k: float(k))

    def mean(self):
        return self.coefficient(0)[0]

    def __call__(self, x):
        x = np.asarray(x, float)
        out = np.zeros(x.shape)
        for k, (c, s) in self.terms.items():
            kx = float(k) * x
            out = out + float(c) * np.cos(kx) + float(s) * np.sin(kx)
        return out

    def __repr__(self):
        body = ", ".join(f"{k}: ({float(c):.6g}, {float(s):.6g})" for k, (c, s) in sorted(self.terms.items()))
        return f"TrigPoly({{{body}}})"
