import math
import os
import subprocess
import sys

import numpy as np
import pytest

from frh import _core
from frh._fallback import contour_sum as py_contour, k33_scaled as py_k33

compiled = _core.backends().get("compiled")
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _gratio(beta, n):
    n = np.arange(n)
    return np.exp([math.lgamma(1 + beta * k) - math.lgamma(1 + beta * (k + 1)) for k in n])


def test_backend_name():
    assert _core.BACKEND in ("compiled", "python")
    assert "python" in _core.backends()


@needs_compiled
@pytest.mark.parametrize("a,b", [(0.5, 1.0), (0.8, 0.8), (1.5, 1.0)])
def test_contour_sum_agree(a, b):
    x = np.linspace(-30, -0.5, 37)
    c = np.full(x.size, 1.2)
    h = np.full(x.size, 0.05)
    K = np.full(x.size, 300, np.int64)
    K[::3] = 150
    v1, m1 = py_contour(a, b, x, c, h, K)
    v2, m2 = compiled.contour_sum(a, b, x, c, h, K)
    np.testing.assert_allclose(v2, v1, rtol=0, atol=1e-13 * np.max(m1))
    np.testing.assert_allclose(m2, m1, rtol=1e-12)


@needs_compiled
@pytest.mark.parametrize("beta", [0.2, 0.5, 0.7])
def test_k33_scaled_agree(beta):
    gr = _gratio(beta, 300)
    f1, l1 = py_k33(gr, 300)
    f2, l2 = compiled.k33_scaled(gr, 300)
    n = np.arange(301)
    e1 = np.log(np.abs(f1)) - n * l1
    e2 = np.log(np.abs(f2)) - n * l2
    np.testing.assert_allclose(e2, e1, rtol=1e-9, atol=1e-9)
    np.testing.assert_array_equal(np.sign(f1), np.sign(f2))


def test_pure_python_switch():
    env = dict(os.environ, FRH_PURE_PYTHON="1")
    code = "from frh import _core; from frh.specfun import MLQuery, ml_eval; print(_core.BACKEND, ml_eval(MLQuery(0.5, 1.0, -3.0), strategy='contour-quadrature').value)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out[0] == "python"
    assert float(out[1]) == pytest.approx(math.exp(9) * math.erfc(3), rel=1e-12)
