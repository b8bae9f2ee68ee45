"""Command-line interface: solve, spectrum, verify, oracle, bound.

Output is one JSON record per line (default) or CSV. Exit codes: 0 success,
2 invalid input, 3 numerical failure, 4 a check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError, GroundFieldError, InvalidInput, NumericalFailure, UnsupportedFamily
from .fields import (ComponentField, GradientField, RadialPowerField, as_radial_power, field_to_spec,
                     potential_from_expr, schrodinger_potential)
from .grids import Grid
from .harmonics import (coulomb_spectrum, coulomb_states, oscillator_spectrum, oscillator_states,
                        schrodinger_residual)
from .oracle import default_tolerance, discretize, radial_ground_energy, smallest_eigenpair
from .states import gaussian_state, random_gaussian_trial, solve_ground_state
from .verify import (DEFAULT_TOL, SUITES, check_hardy_family, check_peq1_trials, check_prop4_bounds,
                     hardy_sweep, hersch_bound, run_suite)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4
TOL_ENV = "GROUNDFIELD_TOL"


# -- output -------------------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def render_records(records, fmt):
    records = [_plain(r) for r in records]
    if fmt == "jsonl":
        return "".join(json.dumps(r) + "\n" for r in records)
    buf = io.StringIO()
    columns = []
    for r in records:
        for key in r:
            if key not in columns:
                columns.append(key)
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    return buf.getvalue()


def emit(records, args):
    text = render_records(records, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- field and potential specs ---------------------------------------------------------

def build_field(args):
    kind = args.field
    if kind in ("radial", "radial-power"):
        if args.alpha is None or args.p is None:
            raise InvalidInput("--field radial needs --alpha and --p")
        return RadialPowerField(args.alpha, args.p, args.n)
    if kind == "gradient":
        if args.u is None:
            if args.alpha is not None and args.p is not None:
                return RadialPowerField(args.alpha, args.p, args.n)
            raise InvalidInput("--field gradient needs --u")
        return GradientField.from_text(args.u, args.n)
    if kind == "components":
        if not args.components:
            raise InvalidInput("--field components needs --components")
        return ComponentField.from_text(list(args.components), args.n)
    if kind == "zero":
        return RadialPowerField(0.0, 0.0, args.n)
    raise InvalidInput(f"unknown field kind {kind!r}")


def known_family(X):
    """(name, potential description, E0) for the closed-form families."""
    rp = as_radial_power(X)
    if rp is None or rp.alpha <= 0:
        return None
    a, n = rp.alpha, rp.n
    if rp.p == 0:
        return "oscillator", f"{a * a!r}*|x|^2", a * n, a * n
    if rp.p == 1 and n >= 2:
        return "coulomb", f"-{a * (n - 1)!r}/|x|", -a * a, -a * a
    return None


def _tol(args, fallback):
    if args.tol is not None:
        return args.tol
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise InvalidInput(f"{TOL_ENV}={env!r} is not a number") from None
    return fallback


# -- commands -----------------------------------------------------------------------

def cmd_solve(args):
    X = build_field(args)
    phi = solve_ground_state(X)
    family = known_family(X) if phi.admissible else None
    rec = {"command": "solve", "field": field_to_spec(X), "state": phi.to_record()}
    if family:
        name, potential, E0, shift = family
        rec.update({"family": name, "potential": potential, "lambdaShift": shift, "E0": E0})
    elif phi.admissible:
        rec.update({"family": None, "potential": "|X|^2 - div X", "lambdaShift": 0.0, "E0": 0.0})
    else:
        rec.update({"family": None, "E0": None})
    emit([rec], args)
    return EXIT_OK


def _spectrum_family(args):
    if args.family:
        return args.family
    if args.field:
        X = build_field(args)
        fam = known_family(X)
        if fam:
            return fam[0]
    raise UnsupportedFamily("spectra are available for the oscillator (p=0) and Coulomb (p=1) families")


def cmd_spectrum(args):
    family = _spectrum_family(args)
    n, alpha = args.n, args.alpha if args.alpha is not None else 1.0
    rng = np.random.default_rng(args.seed)
    if family == "oscillator":
        entries = oscillator_spectrum(n, alpha, args.kmax)
        states = oscillator_states
        V = lambda x: alpha * alpha * np.sum(x * x, axis=-1)  # noqa: E731
        points = lambda: 1.5 * rng.normal(size=(200, n))  # noqa: E731
    elif family == "coulomb":
        entries = coulomb_spectrum(n, alpha, args.kmax)
        states = coulomb_states
        V = lambda x: -alpha * (n - 1) / np.linalg.norm(x, axis=-1)  # noqa: E731

        def points():
            d = rng.normal(size=(200, n))
            return d / np.linalg.norm(d, axis=1)[:, None] * rng.uniform(0.1, 20.0, size=(200, 1))
    else:
        raise UnsupportedFamily(f"unknown family {family!r}")
    records = []
    for e in entries:
        sample = states(n, alpha, e.k)[0]
        res, mag = schrodinger_residual(sample, V, e.E, points())
        rec = {"family": family, "n": n, "alpha": alpha}
        rec.update(e.as_dict())
        rec["residual"] = float(np.max(res / (1 + mag)))
        records.append(rec)
    emit(records, args)
    return EXIT_OK


def cmd_verify(args):
    seed = args.seed
    if args.check:
        name = args.check
        if name == "peq1":
            reports = check_peq1_trials(args.trials or 25, seed)
        elif name == "hardy" and args.eps is not None:
            n = args.n or 3
            rep = check_hardy_family(n, args.eps, check_id=f"hardy.n{n}.family")
            rep.details["sweep"] = hardy_sweep(n, sorted({1e-1, 1e-2, args.eps}, reverse=True))
            reports = [rep]
        elif name in SUITES:
            reports = run_suite(name, seed)
        else:
            raise InvalidInput(f"unknown check {name!r}; choose from {', '.join(sorted(SUITES))}")
    else:
        reports = run_suite(args.suite, seed)
    tol = _tol(args, None)
    if tol is not None:
        for r in reports:
            if r.tolerance == DEFAULT_TOL:
                r.tolerance = tol
    reports = sorted(reports, key=lambda r: r.check_id)
    emit([r.to_record() for r in reports], args)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def _potential(args):
    if args.potential:
        return potential_from_expr(args.potential, args.n)
    if args.field:
        return schrodinger_potential(build_field(args), args.shift)
    raise InvalidInput("give --potential or a field spec")


def cmd_oracle(args):
    V = _potential(args)
    tol = _tol(args, default_tolerance(V.radial_profile()))
    method = args.method
    if method == "auto":
        method = "radial" if V.radial_profile() is not None else "grid"
    records = []
    if method == "radial":
        profile = V.radial_profile()
        if profile is None:
            raise InvalidInput("radial oracle needs a radial potential (an expression in r only)")
        res = radial_ground_energy(profile, args.n, tol, R=args.R, m=args.cells)
        for h in res.history:
            records.append({"kind": "refinement", **h})
        records.append({"kind": "result", "method": "radial", "n": args.n, "potential": V.description,
                        "E0": res.E, "error": res.error, "R": res.R, "m": res.m})
    else:
        m = args.m + (args.m % 2)
        E = None
        for mm in (m // 2 + (m // 2) % 2, m):
            E, psi = smallest_eigenpair(discretize(V, Grid(args.n, args.L, mm)), tol=max(tol, 1e-10))
            records.append({"kind": "refinement", "L": args.L, "m": mm, "h": 2 * args.L / (mm + 1), "E": E})
        records.append({"kind": "result", "method": "grid", "n": args.n, "potential": V.description,
                        "E0": E, "error": abs(records[-1]["E"] - records[-2]["E"]), "L": args.L, "m": m})
    emit(records, args)
    return EXIT_OK


def cmd_bound(args):
    X = build_field(args)
    V = potential_from_expr(args.potential, args.n) if args.potential else schrodinger_potential(X, args.shift)
    tol = _tol(args, default_tolerance(V.radial_profile()))
    rng = np.random.default_rng(args.seed)
    state = None
    if V.radial_profile() is not None:
        fam = known_family(X)
        if fam:
            state = solve_ground_state(as_radial_power(X))
    hersch = hersch_bound(V, X, rng=rng, oracle_tol=tol, state=state, check_id="bound.hersch")
    trials = [gaussian_state(args.n, w) for w in (0.3, 0.5, 1.0)]
    trials += [random_gaussian_trial(rng, args.n) for _ in range(args.trials or 0)]
    lower, upper = check_prop4_bounds(V, X, trials, rng=rng, oracle_tol=tol, state=state,
                                      check_id="bound.prop4")
    reports = [hersch, lower, upper]
    emit([r.to_record() for r in reports], args)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


# -- parser -------------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", help="JSON file with option values (flags override it)")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--tol", type=float, default=None,
                   help=f"tolerance (default from ${TOL_ENV}, else per command)")
    p.add_argument("--seed", type=int, default=42)


def _field_args(p, n_default=3):
    p.add_argument("--field", choices=["radial", "radial-power", "gradient", "components", "zero"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--u", help="scalar potential u with X = grad u, e.g. '0.5*r^2'")
    p.add_argument("--components", nargs="+", help="componentwise field expressions")
    p.add_argument("--n", type=int, default=n_default)


def build_parser():
    parser = argparse.ArgumentParser(prog="groundfield", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="closed-form ground state of a field")
    _common(p)
    _field_args(p)
    p.set_defaults(func=cmd_solve, field="radial")

    p = sub.add_parser("spectrum", help="oscillator or Coulomb ladder with residuals")
    _common(p)
    _field_args(p)
    p.add_argument("--family", choices=["oscillator", "coulomb"])
    p.add_argument("--kmax", type=int, default=3)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run verification checks")
    _common(p)
    p.add_argument("--suite", default="all", help="suite name or 'all'")
    p.add_argument("--check", help="single check family, e.g. peq1 or hardy")
    p.add_argument("--trials", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="finite-difference ground state energy")
    _common(p)
    _field_args(p)
    p.add_argument("--potential", help="V as an expression in x1..xn and r")
    p.add_argument("--shift", type=float, default=0.0, help="lambda in |X|^2 - div X + lambda")
    p.add_argument("--method", choices=["auto", "radial", "grid"], default="auto")
    p.add_argument("--R", type=float, help="fixed ball radius for the radial solver")
    p.add_argument("--cells", type=int, default=4000, help="coarse radial cell count")
    p.add_argument("--L", type=float, default=8.0, help="box half-width for the grid solver")
    p.add_argument("--m", type=int, default=200, help="interior points per axis for the grid solver")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bound", help="Hersch and Lambda(X) + B bounds against the oracle")
    _common(p)
    _field_args(p)
    p.add_argument("--potential", help="V as an expression; default |X|^2 - div X + shift")
    p.add_argument("--shift", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=0, help="extra seeded Gaussian trials")
    p.set_defaults(func=cmd_bound, field="radial")
    return parser


EXPR_FLAGS = ("--potential", "--u")


def _protect_expressions(argv):
    """Attach expression values to their flag so a leading minus is not read as an option."""
    out = []
    i = 0
    in_components = False
    while i < len(argv):
        tok = argv[i]
        if tok in EXPR_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            in_components = False
            continue
        if tok == "--components":
            in_components = True
            out.append(tok)
        elif in_components and tok.startswith("-") and not tok.startswith("--"):
            out.append(f"({tok})")
        else:
            in_components = in_components and not tok.startswith("--")
            out.append(tok)
        i += 1
    return out


def parse_args(argv=None):
    parser = build_parser()
    argv = _protect_expressions(list(sys.argv[1:] if argv is None else argv))
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as err:
            parser.error(f"cannot read config {args.config}: {err}")
        if not isinstance(config, dict):
            parser.error("config file must hold a JSON object")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(config) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        for action in sub._actions:
            if action.dest in config and action.type is not None and config[action.dest] is not None:
                value = config[action.dest]
                try:
                    config[action.dest] = ([action.type(v) for v in value] if isinstance(value, list)
                                           else action.type(value))
                except (TypeError, ValueError):
                    parser.error(f"config key {action.dest!r} has an invalid value {value!r}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def main(argv=None):
    args = parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, DomainError) as err:
        print(f"numerical failure: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except GroundFieldError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
