"""``frh <module> <action> [--flags]``: tables and plot data on stdout or a file.

Exit status: 0 success, 1 acceptance failure, 2 usage error, 3 numeric
domain error.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .config import DEFAULTS, override, parse_override
from .errors import NumericDomainError, FRHError
from .io import FORMATS, write_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

GRAMMAR = """\
frh ml eval|zeros
frh k22 solution|amp-phase|beta-c|t-beta|phase-crit|branch|asymp
frh k33 coeffs|radius|field
frh fkdv ratios|field|resum
frh report [--suite all|specfun|k22|k33|fkdv] [--fast]"""


# ------------------------------------------------------------ handlers


def _ml_eval(a):
    from .specfun import MLQuery, ml_eval

    rows = []
    for x in a.x:
        r = ml_eval(MLQuery(a.a, a.b, x))
        rows.append({"a": a.a, "b": a.b, "x": x, "value": r.value, "est_abs_error": r.est_abs_error, "strategy": r.strategy})
    return rows


def _ml_zeros(a):
    from .specfun import ml_zeros

    zs, complete = ml_zeros(a.a, a.x_max)
    return [{"a": a.a, "index": i + 1, "x": z, "complete": complete} for i, z in enumerate(zs)]


def _k22_solution(a):
    from .k22 import K22Params, k22_solution

    x = np.linspace(0, 4 * np.pi, a.x_samples)
    rows = []
    for b in a.beta:
        p = K22Params(a.alpha, b, a.c)
        for t in a.t:
            u = k22_solution(p, x, t)
            rows += [{"beta": b, "t": t, "x": xi, "u": ui} for xi, ui in zip(x, u)]
    return rows


def _times(a):
    return np.linspace(0, a.t_max, a.t_samples)


def _k22_amp_phase(a):
    from .k22 import K22Params, k22_amplitude_phase

    rows = []
    for b in a.beta:
        for s in k22_amplitude_phase(K22Params(a.alpha, b, a.c), _times(a)):
            rows.append({"beta": b, "t": s.t, "A": s.A, "phi": s.phi, "branch": s.branch})
    return rows


def _k22_beta_c(a):
    from .k22 import k22_find_beta_c

    return [{"beta_c": k22_find_beta_c(a.tol_beta)}]


def _k22_t_beta(a):
    from .k22 import k22_find_t_beta

    return [{"beta": b, "t_beta": k22_find_t_beta(b)} for b in a.beta]


def _k22_phase_crit(a):
    from .k22 import k22_phase_critical_points

    t_max = 60.0 if a.t_max is None else a.t_max
    return [{"beta": b, "index": i + 1, "t": t} for b in a.beta for i, t in enumerate(k22_phase_critical_points(b, t_max))]


def _k22_branch(a):
    from .k22 import k22_branch_index

    rows = []
    for b in a.beta:
        k = k22_branch_index(b)
        rows.append({"beta": b, "k": k, "limit_over_pi": 2 * k - 1})
    return rows


def _k22_asymp(a):
    from .k22 import K22Params, k22_amplitude, k22_amplitude_phase, k22_asymp_amplitude, k22_asymp_phase

    t = _times(a)[1:]
    rows = []
    for b in a.beta:
        if a.regime == "phase":
            s = k22_amplitude_phase(K22Params(2.0, b, 1.0), np.concatenate([[0.0], t]))[1:]
            asym = k22_asymp_phase(b, t)
            rows += [{"beta": b, "t": q.t, "phi": q.phi, "asymptotic": float(v)} for q, v in zip(s, asym)]
        else:
            A = k22_amplitude(b, t)
            asym = k22_asymp_amplitude(b, t, a.regime)
            rows += [{"beta": b, "t": ti, "A": Ai, "asymptotic": float(v)} for ti, Ai, v in zip(t, A, asym)]
    return rows


def _k33_coeffs(a):
    from .k33 import k33_c_sequence

    rows = []
    for b in a.beta:
        s = k33_c_sequence(b, a.n_max, precision=a.precision)
        for n in range(s.n_max + 1):
            rows.append({"beta": b, "n": n, "c_n": s.c(n), "gamma_n": float(s.gamma_n[n]) if n else None})
    return rows


def _k33_radius(a):
    from .k33 import k33_c_sequence, k33_gamma_radius

    rows = []
    for b in a.beta:
        s = k33_c_sequence(b, a.n_max, precision=a.precision)
        g, R = k33_gamma_radius(s, a.method, a.index)
        rows.append({"beta": b, "n_max": s.n_max, "method": a.method, "gamma_est": g, "R": R, "tail_rel_var": s.tail_rel_var()})
    return rows


def _k33_field(a):
    from .k33 import k33_eval, k33_series

    x = np.linspace(0, 6 * np.pi, a.x_samples)
    rows = []
    for b in a.beta:
        s = k33_series(b, a.n_max)
        for t in a.t:
            u, A, phi = k33_eval(s, x, t)
            rows += [{"beta": b, "t": t, "x": xi, "u": ui, "A": A, "phi": phi} for xi, ui in zip(x, u)]
    return rows


def _fkdv_ratios(a):
    from . import reference as ref
    from .fkdv import SpatialGrid, fkdv_ratio_table

    betas = ref.RATIO_BETAS if a.beta_given is None else a.beta
    ts = ref.RATIO_TS if a.t_given is None else a.t
    pairs = list(ref.RATIOS) if a.pairs is None else [tuple(int(v) for v in p.split("/")) for p in a.pairs]
    grid = SpatialGrid(points=DEFAULTS.fkdv_points // (2 if a.fast else 1))
    return fkdv_ratio_table(betas, ts, pairs, grid)


def _fkdv_field(a):
    from .fkdv import SpatialGrid, fkdv_iterate

    grid = SpatialGrid()
    x = np.linspace(-20, 20, a.x_samples)
    rows = []
    for b in a.beta:
        s = fkdv_iterate(grid, b, a.n_terms)
        for t in a.t:
            terms = [s.evaluate(n, x) * (t ** (b * n) if n else 1.0) for n in range(a.n_terms + 1)]
            total = np.sum(terms, axis=0)
            rows += [{"beta": b, "t": t, "x": xi, "u_partial": ui} for xi, ui in zip(x, total)]
    return rows


def _fkdv_resum(a):
    from .fkdv import SpatialGrid, fkdv_resum_beta1

    return [{"n_terms": a.n_terms, "t": t, "sup_error": fkdv_resum_beta1(SpatialGrid(), a.n_terms, t)} for t in a.t]


def _report(a):
    from .acceptance import acceptance_report

    entries = acceptance_report(a.suite, fast=a.fast)
    return [e.row(a.timings) for e in entries]


# ------------------------------------------------------------ parser


def _common(p, *, beta=None, t=None, t_max=None, t_samples=401, n_max=None):
    p.add_argument("--beta", type=float, nargs="+", default=beta, help="one or more orders")
    p.add_argument("--alpha", type=float, default=2.0, help="Riesz order (k22 only)")
    p.add_argument("--c", type=float, default=1.0, help="wave speed parameter")
    p.add_argument("--t", type=float, nargs="+", default=t)
    p.add_argument("--t-max", type=float, default=t_max)
    p.add_argument("--t-samples", type=int, default=t_samples)
    p.add_argument("--n-max", type=int, default=n_max)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--fast", action="store_true", help="halve grid densities")
    p.add_argument("--timings", action="store_true", help="include wall-clock columns")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", type=parse_override,
                   help="override a numeric default for this run (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frh", description="Fractional wave-equation series laboratory.", epilog=GRAMMAR,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"frh {__version__}")
    mods = ap.add_subparsers(dest="module", required=True, metavar="module")

    ml = mods.add_parser("ml", help="Mittag-Leffler function").add_subparsers(dest="action", required=True, metavar="action")
    p = ml.add_parser("eval")
    _common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.set_defaults(fn=_ml_eval)
    p = ml.add_parser("zeros")
    _common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--x-max", type=float, default=100.0)
    p.set_defaults(fn=_ml_zeros)

    k22 = mods.add_parser("k22", help="fractional K(2,2)").add_subparsers(dest="action", required=True, metavar="action")
    p = k22.add_parser("solution")
    _common(p, beta=[0.8], t=[1.0])
    p.add_argument("--x-samples", type=int, default=129)
    p.set_defaults(fn=_k22_solution)
    p = k22.add_parser("amp-phase")
    _common(p, beta=[0.8], t_max=60.0, t_samples=601)
    p.set_defaults(fn=_k22_amp_phase)
    p = k22.add_parser("beta-c")
    _common(p)
    p.add_argument("--tol-beta", type=float, default=1e-3)
    p.set_defaults(fn=_k22_beta_c)
    p = k22.add_parser("t-beta")
    _common(p, beta=[0.9])
    p.set_defaults(fn=_k22_t_beta)
    p = k22.add_parser("phase-crit")
    _common(p, beta=[0.8], t_max=60.0)
    p.set_defaults(fn=_k22_phase_crit)
    p = k22.add_parser("branch")
    _common(p, beta=[0.8])
    p.set_defaults(fn=_k22_branch)
    p = k22.add_parser("asymp")
    _common(p, beta=[0.3], t_max=10.0)
    p.add_argument("--regime", choices=("short", "long", "phase"), default="short")
    p.set_defaults(fn=_k22_asymp)

    k33 = mods.add_parser("k33", help="fractional K(3,3)").add_subparsers(dest="action", required=True, metavar="action")
    for name, fn, extra in (("coeffs", _k33_coeffs, False), ("radius", _k33_radius, True), ("field", _k33_field, False)):
        p = k33.add_parser(name)
        _common(p, beta=[0.5], t=[1.0], n_max=DEFAULTS.k33_n_max)
        p.add_argument("--precision", choices=("extended", "double"), default="extended")
        if extra:
            from .k33 import RADIUS_METHODS

            p.add_argument("--method", choices=RADIUS_METHODS, default="richardson")
            p.add_argument("--index", type=int, default=None, help="coefficient index for --method root")
        if name == "field":
            p.add_argument("--x-samples", type=int, default=97)
        p.set_defaults(fn=fn)

    fk = mods.add_parser("fkdv", help="time-fractional KdV").add_subparsers(dest="action", required=True, metavar="action")
    p = fk.add_parser("ratios")
    _common(p)
    p.add_argument("--pairs", nargs="+", default=None, help="pairs like 6/5 7/6")
    p.set_defaults(fn=_fkdv_ratios)
    p = fk.add_parser("field")
    _common(p, beta=[0.5], t=[0.5])
    p.add_argument("--n-terms", type=int, default=9)
    p.add_argument("--x-samples", type=int, default=161)
    p.set_defaults(fn=_fkdv_field)
    p = fk.add_parser("resum")
    _common(p, t=[0.5])
    p.add_argument("--n-terms", type=int, default=20)
    p.set_defaults(fn=_fkdv_resum)

    p = mods.add_parser("report", help="acceptance report")
    _common(p)
    p.add_argument("--suite", choices=("all", "specfun", "k22", "k33", "fkdv"), default="all")
    p.set_defaults(fn=_report, action=None)
    return ap


def _normalize(argv):
    argv = list(argv)
    # ``frh ml --a ...`` is shorthand for ``frh ml eval --a ...``
    if argv and argv[0] == "ml" and (len(argv) == 1 or argv[1].startswith("-")) and "-h" not in argv and "--help" not in argv:
        argv.insert(1, "eval")
    return argv


def _config(a) -> dict:
    skip = {"fn", "out", "format", "beta_given", "t_given", "set"}
    return {k: v for k, v in sorted(vars(a).items()) if k not in skip}


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    argv = _normalize(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return EXIT_OK
        print(GRAMMAR, file=sys.stderr)
        return EXIT_USAGE
    a.beta_given, a.t_given = a.beta, a.t
    command = a.module + (f" {a.action}" if a.action else "")
    try:
        with warnings.catch_warnings(), override(**dict(a.set)):
            warnings.simplefilter("ignore")
            rows = a.fn(a)
            effective = DEFAULTS.as_dict()
    except (NumericDomainError, FRHError, ValueError) as exc:
        print(f"frh: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    meta = {"command": command, "config": _config(a), "defaults": effective}
    text = write_table(rows, meta, a.format, a.out)
    if a.out is None:
        stdout.write(text)
    if a.module == "report":
        bad = [r["id"] for r in rows if not r["passed"]]
        for r in rows:
            print(f"{'PASS' if r['passed'] else 'FAIL'} {r['id']}", file=sys.stderr)
        return EXIT_FAIL if bad else EXIT_OK
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
