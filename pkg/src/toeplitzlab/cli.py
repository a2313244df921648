"""Command-line front end: symbol parsing, computation dispatch, exact-versus-
asymptotic comparison sweeps, and machine-readable (JSON-lines / CSV) output.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .asympt import bt_predict, szego_fh_predict
from .exactdet import toeplitz_det
from .linalg import DOUBLE, EXTENDED, NumericalBackendError
from .symbols import CircleSymbol, SymbolError, builtin, parse_complex, parse_symbol_text

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

_PARAM_ALIASES = {
    "k_ons": "--k-ons", "t": "--t", "mu": "--mu", "alpha": "--alpha",
    "beta": "--beta", "theta": "--theta", "gamma1": "--gamma1",
    "gamma2": "--gamma2", "theta1": "--theta1", "theta2": "--theta2",
    "gamma": "--gamma", "a": "--a", "lam": "--lam",
}


def _add_symbol_args(p: argparse.ArgumentParser):
    p.add_argument("--symbol", required=True,
                   help="builtin symbol name, or @path to a key=value symbol file")
    for name, flag in _PARAM_ALIASES.items():
        p.add_argument(flag, dest=f"sym_{name}", default=None,
                       help=f"symbol parameter {name}")
    p.add_argument("--param", action="append", default=[],
                   metavar="KEY=VALUE", help="generic symbol parameter")


def _symbol_spec(args) -> tuple:
    name = args.symbol
    params = {}
    for key, _flag in _PARAM_ALIASES.items():
        val = getattr(args, f"sym_{key}", None)
        if val is not None:
            params[key] = val
    for item in args.param:
        if "=" not in item:
            raise SymbolError(f"bad --param {item!r}")
        k, _, v = item.partition("=")
        params[k.strip()] = v.strip()
    parsed = {}
    for k, v in params.items():
        try:
            parsed[k] = float(v)
        except ValueError:
            parsed[k] = parse_complex(v)
    return name, parsed


def build_symbol(name: str, params: dict) -> CircleSymbol:
    if name.startswith("@"):
        with open(name[1:], "r", encoding="utf-8") as fh:
            return parse_symbol_text(fh.read())
    return builtin(name, **params)


def _sweep_values(args):
    if args.n is not None:
        return [args.n]
    if args.n_from is None or args.n_to is None:
        raise SymbolError("give --n, or both --n-from and --n-to")
    step = args.step or "1"
    ns = range(args.n_from, args.n_to + 1)
    if step == "even":
        return [n for n in ns if n % 2 == 0]
    if step == "odd":
        return [n for n in ns if n % 2 == 1]
    return list(ns)[:: int(step)]


def _det_task(payload):
    name, params, n, precision = payload
    sym = build_symbol(name, params)
    t0 = time.perf_counter()
    ld = toeplitz_det(sym, n, backend=precision)
    ms = (time.perf_counter() - t0) * 1e3
    return n, ld, ms


def _run_sweep(args, ns, payload_fn, worker):
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(worker, [payload_fn(n) for n in ns]))
    else:
        results = [worker(payload_fn(n)) for n in ns]
    return sorted(results, key=lambda r: r[0])


def _prediction_terms(pred):
    return [{"a": _cstr(a), "p": _cstr(p), "c": _cstr(c)} for (a, p, c) in pred.terms]


def _cstr(z) -> str:
    z = complex(z)
    return f"{z.real:.16g}{z.imag:+.16g}i"


def _record(task, params, n=None, exact=None, predicted=None, extra=None,
            wall_ms=None):
    rec = {"task": task, "params": {k: str(v) for k, v in params.items()}}
    if n is not None:
        rec["n"] = n
    if exact is not None and not exact.exact_zero:
        rec["exact"] = {"logmod": exact.log_modulus, "phase": exact.phase}
    elif exact is not None:
        rec["exact"] = {"logmod": None, "phase": None, "zero": True}
    if predicted is not None:
        rec["predicted"] = predicted
    if extra:
        rec.update(extra)
    if wall_ms is not None:
        rec["wall_time_ms"] = round(wall_ms, 3)
    return rec


def _errors(exact, pred, n):
    try:
        val = pred.value_at(n)
    except (ValueError, OverflowError):
        return {}
    out = {}
    if exact.exact_zero:
        out["abs_err"] = abs(val)
        return out
    lv = cmath.log(val) if val != 0 else None
    if lv is not None:
        dlog = complex(exact.log_modulus - lv.real,
                       (exact.phase - lv.imag + math.pi) % (2 * math.pi) - math.pi)
        try:
            out["rel_err"] = abs(cmath.exp(dlog) - 1.0)
        except OverflowError:
            pass
    if abs(exact.log_modulus) < 700:
        out["abs_err"] = abs(exact.value - val)
    return out


class _Emitter:
    def __init__(self, args):
        self.mode = "csv" if args.csv else ("plot" if args.plot_data else "jsonl")
        self.header_done = False

    def emit(self, rec: dict):
        if self.mode == "jsonl":
            print(json.dumps(rec, sort_keys=True))
            return
        if self.mode == "plot":
            n = rec.get("n", "")
            exact = rec.get("exact") or {}
            val = exact.get("logmod", "")
            print(f"{n} {val}")
            return
        cols = ["task", "params", "n", "exact_logmod", "exact_phase",
                "predicted", "abs_err", "rel_err", "wall_time_ms"]
        if not self.header_done:
            print(",".join(cols))
            self.header_done = True
        exact = rec.get("exact") or {}
        row = [rec.get("task", ""), json.dumps(rec.get("params", {}), sort_keys=True),
               rec.get("n", ""), exact.get("logmod", ""), exact.get("phase", ""),
               json.dumps(rec.get("predicted", [])), rec.get("abs_err", ""),
               rec.get("rel_err", ""), rec.get("wall_time_ms", "")]
        print(",".join('"' + str(x).replace('"', '""') + '"' if "," in str(x) else str(x)
                       for x in row))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_det(args, emit):
    name, params = _symbol_spec(args)
    build_symbol(name, params)  # validate early for a clean input error
    ns = _sweep_values(args)
    rows = _run_sweep(args, ns, lambda n: (name, params, n, args.precision), _det_task)
    for n, ld, ms in rows:
        emit.emit(_record("det", dict(params, symbol=name), n=n, exact=ld, wall_ms=ms))


def _cmd_predict(args, emit):
    name, params = _symbol_spec(args)
    sym = build_symbol(name, params)
    pred = bt_predict(sym) if args.bt else szego_fh_predict(sym)
    emit.emit(_record("predict", dict(params, symbol=name),
                      predicted=_prediction_terms(pred),
                      extra={"error_order": pred.error_order}))


def _cmd_compare(args, emit):
    name, params = _symbol_spec(args)
    sym = build_symbol(name, params)
    pred = bt_predict(sym)
    ns = _sweep_values(args)
    rows = _run_sweep(args, ns, lambda n: (name, params, n, args.precision), _det_task)
    for n, ld, ms in rows:
        emit.emit(_record("compare", dict(params, symbol=name), n=n, exact=ld,
                          predicted=_prediction_terms(pred),
                          extra=_errors(ld, pred, n), wall_ms=ms))


def _cmd_ising(args, emit):
    from .ising import correlation, free_energy, ising_params, magnetization
    pars = ising_params(args.chi1, args.chi2 if args.chi2 is not None else args.chi1)
    extra = {"regime": pars.regime, "k_ons": pars.k_ons, "gamma1": pars.gamma1,
             "gamma2": pars.gamma2, "magnetization": magnetization(pars)}
    if abs(pars.chi1 - pars.chi2) < 1e-12:
        extra["free_energy"] = free_energy(pars)
    params = {"chi1": args.chi1, "chi2": args.chi2 or args.chi1, "kind": args.kind}
    if args.n is None and args.n_from is None:
        emit.emit(_record("ising", params, extra=extra))
        return
    for n in _sweep_values(args):
        t0 = time.perf_counter()
        corr = correlation(pars, args.kind, n)
        ms = (time.perf_counter() - t0) * 1e3
        emit.emit(_record("ising", params, n=n, exact=corr.logdet,
                          extra={"value": corr.value, **extra}, wall_ms=ms))


def _cmd_eigen(args, emit):
    from .eigen import bulk_prediction, toeplitz_eigenvalues
    name, params = _symbol_spec(args)
    sym = build_symbol(name, params)
    for n in _sweep_values(args):
        t0 = time.perf_counter()
        rep = toeplitz_eigenvalues(sym, n)
        extra = {"lambda_min": float(rep.eigenvalues[0]),
                 "lambda_max": float(rep.eigenvalues[-1]),
                 "trace": float(np.sum(rep.eigenvalues))}
        if args.x is not None:
            bp = bulk_prediction(sym, args.x, n)
            k = max(1, min(n, round(args.x * (n + 1))))
            extra.update({"x": args.x, "lambda_x": bp.lambda_x,
                          "spacing": bp.spacing,
                          "lambda_k": float(rep.eigenvalues[k - 1])})
        ms = (time.perf_counter() - t0) * 1e3
        emit.emit(_record("eigen", dict(params, symbol=name), n=n, extra=extra,
                          wall_ms=ms))


def _cmd_scale(args, emit):
    from .scaling import dyson_asymptote, p3_scaling, p5_g_minus, p5_sigma, \
        sine_gap, widom_charint_constant
    t0 = time.perf_counter()
    if args.task == "sine-gap":
        gap = sine_gap(args.s, nodes=args.nodes)
        extra = {"s": args.s, "log_p_s": gap.p_s.log_modulus,
                 "log_d_plus": gap.d_plus.log_modulus,
                 "log_d_minus": gap.d_minus.log_modulus, "nodes": gap.nodes}
    elif args.task == "dyson":
        grid = [float(x) for x in args.s_grid.split(",")]
        out = dyson_asymptote(grid)
        extra = {"a0_estimate": out["a0_estimate"], "c0": out["c0"],
                 "difference": out["a0_estimate"] - out["c0"]}
    elif args.task == "p3":
        out = p3_scaling(args.r, args.lam, "minus")
        outp = p3_scaling(args.r, args.lam, "plus")
        extra = {"r": args.r, "lam": args.lam, "eta": out["eta_at_half_r"],
                 "G_minus": out["G"], "G_plus": outp["G"]}
    elif args.task == "p5":
        extra = {"x": args.x, "sigma": p5_sigma(args.x)}
        if args.r is not None:
            extra["G_minus_p5"] = p5_g_minus(args.r)
    elif args.task == "widom":
        val = widom_charint_constant(args.mu, args.n)
        from .constants import WIDOM_C0
        extra = {"mu": args.mu, "n": args.n, "constant": val, "c0": WIDOM_C0}
    else:
        raise SymbolError(f"unknown scale task {args.task!r}")
    ms = (time.perf_counter() - t0) * 1e3
    emit.emit(_record("scale", {"task": args.task}, extra=extra, wall_ms=ms))


def _cmd_gap(args, emit):
    from .eigen import gap_spectrum_stats
    for n in _sweep_values(args):
        t0 = time.perf_counter()
        out = gap_spectrum_stats(args.theta1, args.theta2, args.gamma, n,
                                 args.epsilon)
        ms = (time.perf_counter() - t0) * 1e3
        emit.emit(_record("gap", {"theta1": args.theta1, "theta2": args.theta2,
                                  "gamma": args.gamma}, n=n, extra=out, wall_ms=ms))


def _cmd_boson(args, emit):
    from .applications import boson_density, condensate_fraction
    t0 = time.perf_counter()
    if args.condensate:
        est = condensate_fraction(args.N)
        extra = {"N": args.N, "condensate_fraction": est.value,
                 "error_bar": est.error_bar}
    else:
        grid = [float(x) for x in args.t_grid.split(",")]
        curve = boson_density(args.N, grid)
        extra = {"N": args.N, "samples": [[t, r] for t, r in curve.samples]}
    ms = (time.perf_counter() - t0) * 1e3
    emit.emit(_record("boson", {"N": args.N}, extra=extra, wall_ms=ms))


def _cmd_lis(args, emit):
    from .applications import lis_check
    t0 = time.perf_counter()
    out = lis_check(args.n, args.lam_poisson, args.n_max)
    ms = (time.perf_counter() - t0) * 1e3
    emit.emit(_record("lis", {"lambda": args.lam_poisson, "N_max": args.n_max},
                      n=args.n, extra=out, wall_ms=ms))


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def _int_or_none(v):
    return None if v is None else int(v)


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="toeplitzlab",
                                  description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    top.add_argument("--config", default=None,
                     help="key=value file of default flags (flags override)")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, symbol=True, sweep=True):
        if symbol:
            _add_symbol_args(p)
        if sweep:
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--n-from", type=int, default=None)
            p.add_argument("--n-to", type=int, default=None)
            p.add_argument("--step", default=None,
                           help="sweep step: integer, 'even', or 'odd'")
        p.add_argument("--precision", choices=[DOUBLE, EXTENDED], default=DOUBLE,
                       help="arithmetic backend (extended needed for the "
                            "characteristic-interval n^2 sweeps)")
        p.add_argument("--jobs", type=int, default=1,
                       help="parallel workers for sweeps (results stay ordered)")
        p.add_argument("--csv", action="store_true")
        p.add_argument("--plot-data", action="store_true")

    p = sub.add_parser("det", help="exact log-determinant (single n or sweep)")
    common(p)
    p.set_defaults(fn=_cmd_det)

    p = sub.add_parser("predict", help="asymptotic prediction terms")
    common(p, sweep=False)
    p.add_argument("--bt", action="store_true",
                   help="use the multi-representation Basor-Tracy sum")
    p.set_defaults(fn=_cmd_predict)

    p = sub.add_parser("compare", help="exact vs predicted over a sweep")
    common(p)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("ising", help="Ising quantities and correlation sweeps")
    common(p, symbol=False)
    p.add_argument("--chi1", type=float, required=True)
    p.add_argument("--chi2", type=float, default=None)
    p.add_argument("--kind", choices=["row", "diag"], default="diag")
    p.set_defaults(fn=_cmd_ising)

    p = sub.add_parser("eigen", help="Toeplitz spectra and bulk predictions")
    common(p)
    p.add_argument("--x", type=float, default=None,
                   help="bulk position in (0,1) for the individual-eigenvalue law")
    p.set_defaults(fn=_cmd_eigen)

    p = sub.add_parser("scale", help="double-scaling objects")
    common(p, symbol=False, sweep=False)
    p.add_argument("--task", required=True,
                   choices=["sine-gap", "dyson", "p3", "p5", "widom"])
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--nodes", type=int, default=80)
    p.add_argument("--s-grid", default="6,8,10,12")
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--lam", type=float, default=1.0 / math.pi)
    p.add_argument("--x", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.6)
    p.add_argument("--n", type=int, default=96)
    p.set_defaults(fn=_cmd_scale)

    p = sub.add_parser("gap", help="piecewise-constant symbol gap statistics")
    common(p, symbol=False)
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(fn=_cmd_gap)

    p = sub.add_parser("boson", help="impenetrable-boson density and condensate")
    common(p, symbol=False, sweep=False)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--t-grid", default="0.5,1.0,2.0,3.0")
    p.add_argument("--condensate", action="store_true")
    p.set_defaults(fn=_cmd_boson)

    p = sub.add_parser("lis", help="Poissonized LIS identity check")
    common(p, symbol=False, sweep=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lam-poisson", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=7)
    p.set_defaults(fn=_cmd_lis)

    return top


def _apply_config(argv):
    """Insert config-file values ahead of explicit flags so flags override."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise OSError("--config needs a path")
    path = argv[i + 1]
    extra = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            extra += [f"--{key.strip()}", value.strip()]
    remaining = argv[:i] + argv[i + 2:]
    head = remaining[:1] if remaining and not remaining[0].startswith("-") else []
    rest = remaining[len(head):]
    return head + extra + rest


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
        args = build_parser().parse_args(argv)
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit = _Emitter(args)
    try:
        args.fn(args, emit)
    except (SymbolError, ValueError, OSError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalBackendError, ArithmeticError, RuntimeError, AssertionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
