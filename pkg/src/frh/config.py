"""Numeric defaults for every engine, collected in one frozen record.

Functions across the package take ``None`` for tunables and resolve them
against :data:`DEFAULTS`; the CLI echoes the same record into its output
metadata so a table can always be traced back to the values that made it.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Defaults:
    # -- Mittag-Leffler evaluation
    ml_target_rel_err: float = 1e-13
    #: absolute floor under the relative target; errors are judged against
    #: ``target * max(|E|, ml_abs_floor)`` so tiny values are not over-demanded
    ml_abs_floor: float = 1.0
    ml_series_x_lo: float = 5.0
    #: series is only used when |x|**(1/a) stays below this (bounds cancellation)
    ml_series_radius: float = 2.0
    ml_series_max_terms: int = 400
    ml_asymptotic_x_hi: float = 40.0
    ml_asymptotic_max_terms: int = 40
    ml_overlap_tol: float = 1e-9
    ml_contour_c_max: float = 1.5
    ml_contour_tol: float = 1e-16
    ml_contour_max_nodes: int = 20000
    ml_chunk: int = 4096

    # -- roots, zeros and differentiation
    root_tol: float = 1e-10
    zero_scan_step_max: float = 0.25
    zero_scan_divisions: int = 4000
    zero_scan_max_halvings: int = 6
    zero_dip_tol: float = 1e-9
    diff_step_underflow: float = 1e3

    # -- K(2,2) dynamics
    k22_rel_step: float = 1e-4
    k22_scan_step: float = 0.01
    k22_scan_t_min: float = 0.05
    k22_beta_c_lo: float = 0.5
    k22_beta_c_hi: float = 0.9
    k22_beta_c_t_max: float = 1000.0
    k22_t_beta_t_max: float = 500.0
    k22_phase_root_tol: float = 1e-6
    k22_unwrap_min_step: float = 1e-9

    # -- K(3,3)
    k33_n_max: int = 400
    k33_oracle_check_n: int = 40
    k33_oracle_rtol: float = 1e-10
    k33_tail_fraction: float = 0.2
    k33_tail_rel_var: float = 1e-4
    k33_margin: float = 0.05
    k33_term_rtol: float = 1e-12

    # -- fKdV
    fkdv_half_length: float = 60.0
    fkdv_points: int = 8192
    fkdv_max_terms: int = 30
    fkdv_alias_tol: float = 1e-10
    fkdv_spectral_k_cut: float = 12.0

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULTS = Defaults()


def parse_override(text: str) -> tuple[str, object]:
    """Parse ``key=value`` into a typed pair for :func:`override`."""
    key, sep, raw = text.partition("=")
    types = {f.name: f.type for f in fields(Defaults)}
    if not sep or key not in types:
        raise ValueError(f"unknown default {key!r}")
    return key, (int(raw) if types[key] in ("int", int) else float(raw))


@contextmanager
def override(**values):
    """Temporarily replace fields of :data:`DEFAULTS` in place.

    Values already bound as argument defaults at import time (the
    :class:`~frh.fkdv.SpatialGrid` size) are not affected.
    """
    known = {f.name for f in fields(Defaults)}
    bad = set(values) - known
    if bad:
        raise ValueError(f"unknown defaults {sorted(bad)}")
    saved = {k: getattr(DEFAULTS, k) for k in values}
    try:
        for k, v in values.items():
            object.__setattr__(DEFAULTS, k, v)
        yield DEFAULTS
    finally:
        for k, v in saved.items():
            object.__setattr__(DEFAULTS, k, v)
