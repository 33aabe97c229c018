"""Backend selection for the hot kernels.

The compiled extension is preferred; setting ``FRH_PURE_PYTHON=1`` or a
failed import selects the numpy fallback.  :data:`BACKEND` names the choice.
"""

from __future__ import annotations

import os

from . import _fallback

_force_pure = os.environ.get("FRH_PURE_PYTHON", "").strip() not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _impl

    BACKEND = "compiled"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

contour_sum = _impl.contour_sum
k33_scaled = _impl.k33_scaled


def backends():
    """Return ``{name: module}`` for every importable backend."""
    out = {"python": _fallback}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
