"""Command-line front end.

    hopfred table --n 8
    hopfred verify all --trials 1000
    hopfred project --u 1,0,0,0,0,1,0,0
    hopfred lift --x 0,0,0,0,1 --g 0,0,0,1
    hopfred field --x 0.3,0.1,-0.2,0.5,0.4 --reduce
    hopfred simulate --n 8 --mode free-pullback --steps 10000 --out run.csv
    hopfred report run.csv

Exit status: 0 when every requested check passes, 1 on a failed check (a JSON
failure manifest goes to stdout), 2 on usage errors.
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
from . import algebra as alg
from . import dynamics as dyn
from . import mechanics as mech
from . import verification as ver
from .clifford import build_rep
from .errors import HopfError
from .gauge import potential, reduce_potential
from .hopf import DEFAULT_SEED, BundlePoint, lift, project

SCHEMA = 1
SUITE_NAMES = ("algebra", "clifford", "hopf", "gauge", "mechanics", "all")


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return np.array([float(t) for t in text.split(",") if t.strip()])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _seed(text):
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from exc
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{text} must be positive")
        return value

    return parse


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("HOPF_SEED")
    if env:
        try:
            return _seed(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"HOPF_SEED: {exc}") from exc
    return DEFAULT_SEED


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    for k, v in cfg.items():
        if isinstance(v, np.ndarray):
            cfg[k] = v.tolist()
    return cfg


def _envelope(args, body):
    return {"schema": SCHEMA, "version": __version__, "config": _config(args), **body}


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(payload, out=None):
    text = json.dumps(_to_jsonable(payload), indent=2, sort_keys=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------

def cmd_table(args):
    table = alg.structure_table(args.n)
    if args.format == "json":
        _emit(_envelope(args, {
            "generating_triples": [list(t) for t in table.generating_triples()],
            "nonzero": [list(e) for e in table.nonzero_entries()],
        }))
    else:
        for a, b, c in table.generating_triples():
            sys.stdout.write(f"C_{a}{b}{c} = 1\n")
    return 0


def cmd_verify(args):
    kw = {}
    if args.suite in ("mechanics", "all"):
        kw = {"steps": args.steps, "dt": args.dt, "seeds": args.seeds}
    names = list(ver.SUITES) if args.suite == "all" else [args.suite]
    results = {}
    for name in names:
        if name == "algebra" and args.n is not None:
            checks = ver.algebra_suite(args.trials, args.seed, dims=(alg.check_dimension(args.n),))
        else:
            checks = ver.SUITES[name](args.trials, args.seed, **kw)
            if args.n is not None:
                checks = [c for c in checks if "[n=" not in c.name or f"n={args.n}]" in c.name]
        results[name] = checks
    failures = [c.to_dict() | {"suite": k} for k, cs in results.items() for c in cs if not c.passed]
    body = {
        "status": "pass" if not failures else "fail",
        "suites": {k: [c.to_dict() for c in cs] for k, cs in results.items()},
    }
    if failures:
        body = {"status": "fail", "failures": failures, **{k: v for k, v in body.items() if k != "status"}}
    _emit(_envelope(args, body), args.out)
    return 0 if not failures else 1


def cmd_project(args):
    u = args.u
    if u.size % 2 or u.size // 2 not in (2, 4, 8):
        raise UsageError("--u needs 4, 8 or 16 numbers (u1 then u2)")
    base = project(BundlePoint.from_vector(u))
    _emit(_envelope(args, {"x": base.x, "r": base.r}))
    return 0


def cmd_lift(args):
    n = args.x.size - 1
    if n not in (2, 4, 8):
        raise UsageError("--x needs 3, 5 or 9 numbers")
    g = args.g if args.g is not None else alg.one(n)
    u = lift(args.x, g)
    _emit(_envelope(args, {"u1": u.u1, "u2": u.u2, "x_check": project(u).x}))
    return 0


def cmd_field(args):
    n = args.x.size - 1
    if n not in (2, 4, 8):
        raise UsageError("--x needs 3, 5 or 9 numbers")
    A = potential(build_rep(n), args.x)
    body = {"n": n, "coeffs": A.coeffs}
    if args.xdot is not None:
        if args.xdot.size != n + 1:
            raise UsageError("--xdot must match --x in length")
        body["A"] = A.contract(args.xdot)
    if args.reduce:
        red = reduce_potential(n, A)
        body["reduced"] = {"components": red.components, "residual": red.residual}
    _emit(_envelope(args, body))
    return 0


def _simulate(args):
    params = mech.LagrangianParams(g0=args.g0, s=args.s, dt=args.dt, steps=args.steps)
    if args.mode == "free-pullback":
        return dyn.free_pullback_trajectory(args.n, params, args.seed, args.fd_step, args.record_every)
    if args.n not in (2, 4):
        raise UsageError("reduced mode needs --n 2 or --n 4")
    rng = np.random.default_rng(args.seed)
    state0, _ = mech.reduced_initial_state(args.n, args.s, rng, params)
    return dyn.integrate_reduced(state0, params, args.n, form=args.form, record_every=args.record_every)


def _columns(traj):
    cols = {"t": traj.t}
    for name, arr in (("x", traj.x), ("xdot", traj.xdot), ("y", traj.y), ("p", traj.p)):
        for k in range(arr.shape[1]):
            cols[f"{name}_{k + 1}"] = arr[:, k]
    cols.update(traj.observables)
    return cols


def write_csv(traj, config, path):
    cols = _columns(traj)
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n# version={__version__}\n")
    for k, v in config.items():
        buf.write(f"# {k}={json.dumps(_to_jsonable(v))}\n")
    if traj.truncated:
        buf.write(f"# truncated={json.dumps(traj.note)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols.keys())
    data = np.column_stack([np.asarray(c, dtype=float) for c in cols.values()])
    for row in data:
        writer.writerow([f"{v:.17g}" for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path):
    """Parse a simulate CSV back into a :class:`~hopfred.dynamics.Trajectory`."""
    config, rows, header = {}, [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                try:
                    config[key] = json.loads(val)
                except json.JSONDecodeError:
                    config[key] = val
            elif header is None:
                header = next(csv.reader([line]))
            elif line.strip():
                rows.append([float(v) for v in line.strip().split(",")])
    if header is None:
        raise UsageError(f"{path}: no column header")
    data = np.array(rows).reshape(-1, len(header))
    col = {h: data[:, k] for k, h in enumerate(header)}
    n = sum(1 for h in header if h.startswith("x_")) - 1

    def block(name, size):
        return np.column_stack([col[f"{name}_{k + 1}"] for k in range(size)]) if len(data) else np.zeros((0, size))

    traj = dyn.Trajectory(n, col["t"], block("x", n + 1), block("xdot", n + 1), block("y", n - 1), block("p", n - 1))
    skip = {"t"} | {h for h in header if h.split("_")[0] in ("x", "xdot", "y", "p")}
    traj.observables = {h: col[h] for h in header if h not in skip}
    traj.truncated = "truncated" in config
    return traj, config


def _classification_summary(report):
    cls = report.classification()
    return {
        "casimir": cls.get("casimir"),
        "I": {k: v for k, v in cls.items() if k.startswith("I_")},
        "max_rel_drift_I": report.group_max("I"),
    }


def cmd_simulate(args):
    traj = _simulate(args)
    cfg = _config(args)
    write_csv(traj, cfg, args.out)
    rep = dyn.drift_report(traj, args.threshold)
    body = {"csv": args.out, "report": rep.to_dict(), "summary": _classification_summary(rep)}
    if traj.truncated:
        body["note"] = traj.note
    _emit(_envelope(args, body), args.report)
    return 0


def cmd_report(args):
    try:
        traj, cfg = read_csv(args.path)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    rep = dyn.drift_report(traj, args.threshold)
    _emit(_envelope(args, {"source_config": cfg, "report": rep.to_dict(), "summary": _classification_summary(rep)}), args.out)
    return 0


# -- parser ------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="hopfred", description="Division algebras, Hopf maps and reduced particle systems.")
    p.add_argument("--version", action="version", version=f"hopfred {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="structure constants C_{mu nu lambda}")
    t.add_argument("--n", type=int, default=8, choices=(1, 2, 4, 8))
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run seeded property suites")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.add_argument("--n", type=int, choices=(1, 2, 4, 8))
    v.add_argument("--trials", type=_positive(int), default=1000)
    v.add_argument("--seed", type=_seed)
    v.add_argument("--steps", type=_positive(int), default=10_000, help="RK4 steps / free-flow samples")
    v.add_argument("--dt", type=_positive(float), default=1e-3)
    v.add_argument("--seeds", type=_positive(int), default=10, help="seeds for the n=8 audit")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("project", help="Hopf projection of (u1, u2)")
    pr.add_argument("--u", type=_floats, required=True)
    pr.set_defaults(func=cmd_project)

    li = sub.add_parser("lift", help="north-chart lift of a base point")
    li.add_argument("--x", type=_floats, required=True)
    li.add_argument("--g", type=_floats, help="unit fiber element (default 1)")
    li.set_defaults(func=cmd_lift)

    f = sub.add_parser("field", help="monopole potential at a base point")
    f.add_argument("--x", type=_floats, required=True)
    f.add_argument("--xdot", type=_floats)
    f.add_argument("--reduce", action="store_true")
    f.set_defaults(func=cmd_field)

    s = sub.add_parser("simulate", help="sample a trajectory to CSV")
    s.add_argument("--n", type=int, choices=(2, 4, 8), required=True)
    s.add_argument("--mode", choices=("free-pullback", "reduced"), default="free-pullback")
    s.add_argument("--form", choices=dyn.FORMS, default="lint", help="reduced Lagrangian form")
    s.add_argument("--dt", type=_positive(float), default=1e-3)
    s.add_argument("--steps", type=_positive(int), default=10_000)
    s.add_argument("--seed", type=_seed)
    s.add_argument("--s", type=float, default=0.5, help="isospin level for reduced mode")
    s.add_argument("--g0", type=_positive(float), default=1.0)
    s.add_argument("--fd-step", type=_positive(float), default=1e-6)
    s.add_argument("--record-every", type=_positive(int), default=1)
    s.add_argument("--threshold", type=_positive(float), default=dyn.DEFAULT_THRESHOLD)
    s.add_argument("--out", required=True)
    s.add_argument("--report", help="also write the JSON report here")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("report", help="conservation report for a simulate CSV")
    r.add_argument("path")
    r.add_argument("--threshold", type=_positive(float), default=dyn.DEFAULT_THRESHOLD)
    r.add_argument("--out")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed"):
            args.seed = _resolve_seed(args)
        return args.func(args)
    except (UsageError, HopfError) as exc:
        sys.stderr.write(f"hopfred: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
