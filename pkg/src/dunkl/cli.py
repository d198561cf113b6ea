"""Command-line front end.

Subcommands ``basis``, ``kernel``, ``heat``, ``transform`` and ``check``.  A
YAML config file supplies defaults and flags override it::

    system:
      family: Z2          # Z2 | A | B | dihedral
      rank: 1
      multiplicity: [1]   # one value per root orbit; "5/2" style strings allowed
      order: null         # dihedral order m
    nmax: 4
    qpoints: 40
    tol: 1.0e-13
    grid: "-2:2:9"        # per-axis lo:hi:count, tensor product over the axes
    times: [0.1, 0.5, 1.0]
    profile: gaussian
    format: csv

Exit codes: 0 success, 1 a check failed, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .groups import build_root_system

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "system": {"family": "Z2", "rank": 1, "multiplicity": [1], "order": None},
    "nmax": 4,
    "qpoints": None,
    "tol": 1e-13,
    "grid": "-2:2:9",
    "times": [0.1, 0.5, 1.0],
    "profile": "gaussian",
    "format": None,
    "out": None,
}


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


# configuration ------------------------------------------------------------------------
def _scalar(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(repr(v))
    try:
        return Fraction(str(v).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad multiplicity value {v!r}") from exc


def _values(text):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [_scalar(v) for v in text]
    return [_scalar(v) for v in str(text).split(",") if v.strip()]


def load_config(args) -> dict:
    """Merge defaults, the YAML file (if any) and command-line flags; validate."""
    import yaml

    cfg = json.loads(json.dumps(DEFAULTS))
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        sysc = loaded.pop("system", None) or {}
        if not isinstance(sysc, dict):
            raise ConfigError("'system' must be a mapping")
        cfg["system"].update(sysc)
        cfg.update(loaded)
    s = cfg["system"]
    if args.system:
        s["family"] = args.system
    if args.rank is not None:
        s["rank"] = args.rank
    if args.order is not None:
        s["order"] = args.order
    fam = str(s["family"]).lower()
    if args.mu is not None:
        s["multiplicity"] = _values(args.mu)
    if args.alpha is not None:
        alpha = _scalar(args.alpha)
        if alpha <= 0:
            raise ConfigError("--alpha must be positive (multiplicity 1/alpha)")
        s["multiplicity"] = [1 / alpha]
    if args.k0 is not None or args.k1 is not None:
        old = _values(s.get("multiplicity")) or [0, 0]
        old = (old + [old[-1]])[:2] if len(old) < 2 else old[:2]
        s["multiplicity"] = [_scalar(args.k0) if args.k0 is not None else old[0],
                             _scalar(args.k1) if args.k1 is not None else old[1]]
    for key in ("nmax", "qpoints", "tol", "grid", "profile", "format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if getattr(args, "times", None) is not None:
        cfg["times"] = [float(v) for v in str(args.times).split(",") if v.strip()]
    mult = _values(s.get("multiplicity"))
    if mult is None:
        mult = [Fraction(0)]
    rank = int(s.get("rank", 1))
    if fam in ("z2", "z2_product") and len(mult) == 1 and rank > 1:
        mult = mult * rank  # one value broadcast over the axes
    try:
        cfg["_system"] = build_root_system(s["family"], rank, mult, s.get("order"))
    except (ValueError, RuntimeError) as exc:
        raise ConfigError(str(exc)) from exc
    try:
        cfg["nmax"] = int(cfg["nmax"])
        cfg["tol"] = float(cfg["tol"])
        cfg["times"] = [float(t) for t in cfg["times"]]
        if cfg["qpoints"] is not None:
            cfg["qpoints"] = int(cfg["qpoints"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric option: {exc}") from exc
    if cfg["nmax"] < 0 or cfg["nmax"] > 64:
        raise ConfigError("nmax must lie in [0, 64]")
    if not cfg["tol"] > 0:
        raise ConfigError("tol must be positive")
    if any(t <= 0 for t in cfg["times"]):
        raise ConfigError("times must be positive")
    if cfg["qpoints"] is not None and cfg["qpoints"] < 1:
        raise ConfigError("qpoints must be >= 1")
    return cfg


def parse_grid(spec: str, dim: int) -> np.ndarray:
    """``"lo:hi:n"`` (every axis) or ``"lo:hi:n;lo:hi:n"`` (per axis) to ``(M, dim)`` points."""
    parts = [p for p in str(spec).split(";") if p.strip()]
    if len(parts) == 1:
        parts = parts * dim
    if len(parts) != dim:
        raise ConfigError(f"grid has {len(parts)} axes, system has {dim}")
    axes = []
    for p in parts:
        try:
            lo, hi, n = p.split(":")
            axes.append(np.linspace(float(lo), float(hi), int(n)))
        except ValueError as exc:
            raise ConfigError(f"bad grid axis {p!r}; expected lo:hi:count") from exc
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _qpoints(cfg):
    return cfg["qpoints"] or {1: 60, 2: 40}.get(cfg["_system"].dimension, 20)


# output ---------------------------------------------------------------------------------
def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_table(header, rows, cfg, stream):
    fmt = cfg["format"] or "csv"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    elif fmt == "json":
        recs = [{h: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v)) for h, v in zip(header, row)}
                for row in rows]
        text = json.dumps(recs, indent=1) + "\n"
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    _emit(text, cfg, stream)


def _emit(text, cfg, stream):
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def _strip_seconds(obj):
    if isinstance(obj, dict):
        return {k: _strip_seconds(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, list):
        return [_strip_seconds(v) for v in obj]
    return obj


# commands -------------------------------------------------------------------------------
def cmd_basis(cfg, args, stream):
    from .hermite import HermiteSystem
    from .operators import OperatorContext

    system = cfg["_system"]
    hs = HermiteSystem(OperatorContext(system), cfg["nmax"])
    report = json.loads(hs.to_json())
    report["gram_identity_deviation"] = str(hs.gram_identity_residual())
    _emit(json.dumps(report, indent=1) + "\n", cfg, stream)
    return EXIT_OK


def cmd_kernel(cfg, args, stream):
    from .kernel import KernelEvaluator, kernel_eval_z2

    system = cfg["_system"]
    N = system.dimension
    pts = parse_grid(cfg["grid"], N)
    X = np.repeat(pts, len(pts), axis=0)
    Y = np.tile(pts, (len(pts), 1))
    ke = KernelEvaluator(system)
    vals, tail, conv, _ = ke.eval_many(X, Y, cfg["tol"])
    header = [f"x{i + 1}" for i in range(N)] + [f"y{i + 1}" for i in range(N)] + ["K", "tail_bound", "converged"]
    closed = system.family == "Z2_product" and N == 1
    if closed:
        header.append("K_closed")
    rows = []
    for p in range(len(X)):
        row = list(X[p]) + list(Y[p]) + [float(np.real(vals[p])), float(tail[p]), bool(conv[p])]
        if closed:
            row.append(kernel_eval_z2(system.orbit_multiplicities[0], X[p, 0], Y[p, 0]).real)
        rows.append(row)
    write_table(header, rows, cfg, stream)
    return EXIT_OK if np.all(conv) else EXIT_FAIL


def cmd_heat(cfg, args, stream):
    from .checks import _semigroup_points, check_heat
    from .heat import HeatModel
    from .profiles import named_profile

    system = cfg["_system"]
    N = system.dimension
    npts = _qpoints(cfg)
    if args.mode == "check":
        res = check_heat(system, npts, 1e-6 if system.family == "Z2_product" else 1e-4,
                         semigroup_npoints=_semigroup_points(N, npts))
        d = res.to_dict() if args.timings else _strip_seconds(res.to_dict())
        _emit(json.dumps(d, indent=1) + "\n", cfg, stream)
        return EXIT_OK if res.passed else EXIT_FAIL
    try:
        f = named_profile(cfg["profile"], N)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    model = HeatModel(system, npts, tol=min(cfg["tol"], 1e-15))
    pts = parse_grid(cfg["grid"], N)
    header = [f"x{i + 1}" for i in range(N)] + ["t", "u", "mass"]
    rows = []
    for t in cfg["times"]:
        u = model.heat_solve(f, pts, t)
        mass = model.mass(pts, t)
        rows.extend(list(pts[p]) + [t, float(u[p]), float(mass[p])] for p in range(len(pts)))
    write_table(header, rows, cfg, stream)
    return EXIT_OK


def cmd_transform(cfg, args, stream):
    from .hermite import HermiteSystem
    from .operators import OperatorContext
    from .profiles import named_profile
    from .transform import TransformContext

    system = cfg["_system"]
    N = system.dimension
    hs = None
    if str(cfg["profile"]).startswith("h:"):
        nu = [int(v) for v in str(cfg["profile"])[2:].split(",")]
        hs = HermiteSystem(OperatorContext(system), max(sum(nu), 0))
    try:
        f = named_profile(cfg["profile"], N, hs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if f.rate <= 0:
        raise ConfigError("the transform needs a profile with Gaussian decay")
    tc = TransformContext(system, _qpoints(cfg))
    xi = parse_grid(cfg["grid"], N)
    D = np.asarray(tc.dunkl_transform(f, xi))
    header = [f"xi{i + 1}" for i in range(N)] + ["re", "im"]
    rows = [list(xi[p]) + [float(D[p].real), float(D[p].imag)] for p in range(len(xi))]
    write_table(header, rows, cfg, stream)
    return EXIT_OK


def cmd_check(cfg, args, stream):
    from . import checks

    echo = (lambda line: print(line, file=sys.stderr)) if not args.quiet else None
    if args.suite == "acceptance":
        sel = [int(v) for v in args.criteria.split(",")] if args.criteria else None
        if sel and any(i not in checks.CRITERIA for i in sel):
            raise ConfigError("criteria are numbered 1 to 14")
        results = checks.run_acceptance(sel, echo=echo)
        sysdesc = "acceptance catalogue"
    else:
        mut = args.mutate
        op_mut = mut if mut in ("flip_difference_sign", "flip_difference_sign_all") else None
        h_mut = mut if mut == "flip_rodrigues_sign" else None
        results = checks.system_report(cfg["_system"], cfg["nmax"], cfg["qpoints"], op_mut, h_mut)
        if echo:
            for r in results:
                echo(r.line())
        sysdesc = cfg["_system"].describe()
    report = {
        "system": sysdesc,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    if not args.timings:
        report = _strip_seconds(report)
    _emit(json.dumps(report, indent=1, default=str) + "\n", cfg, stream)
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {"basis": cmd_basis, "kernel": cmd_kernel, "heat": cmd_heat,
            "transform": cmd_transform, "check": cmd_check}


# parser -----------------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("system and run options")
    g.add_argument("--config", help="YAML config file")
    g.add_argument("--system", help="root system family: Z2, A, B or dihedral")
    g.add_argument("--rank", type=int, help="dimension N")
    g.add_argument("--order", type=int, help="dihedral order m")
    g.add_argument("--mu", help="Z2 multiplicities, comma separated (one value is broadcast)")
    g.add_argument("--alpha", help="S_N parameter alpha (multiplicity 1/alpha)")
    g.add_argument("--k0", help="first orbit multiplicity (B: roots e_i +- e_j)")
    g.add_argument("--k1", help="second orbit multiplicity (B: roots e_i)")
    g.add_argument("--nmax", type=int, help="largest polynomial degree")
    g.add_argument("--qpoints", type=int, help="quadrature points per coordinate")
    g.add_argument("--tol", type=float, help="kernel truncation tolerance")
    g.add_argument("--grid", help="grid lo:hi:count (per axis, ';' separated, or one for all)")
    g.add_argument("--out", help="output file (default stdout)")
    g.add_argument("--format", choices=["csv", "json"], help="table format")
    g.add_argument("--timings", action="store_true", help="include run times in JSON reports")

    p = argparse.ArgumentParser(prog="dunkl", description="Rational Dunkl theory toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("basis", parents=[common], help="orthonormal basis and Hermite table (JSON)")
    sub.add_parser("kernel", parents=[common], help="Dunkl kernel on grid pairs (CSV)")
    h = sub.add_parser("heat", parents=[common], help="heat solution on a grid, or the heat checks")
    h.add_argument("mode", nargs="?", choices=["solve", "check"], default="solve")
    h.add_argument("--profile", help="initial data: one, gaussian, gaussian_half, shifted")
    h.add_argument("--times", help="comma separated times")
    t = sub.add_parser("transform", parents=[common], help="Dunkl transform on a grid (CSV)")
    t.add_argument("--profile", help="gaussian, gaussian_half, shifted or h:<i,j,...>")
    c = sub.add_parser("check", parents=[common], help="identity checks (JSON verdict)")
    c.add_argument("--suite", choices=["system", "acceptance"], default="system")
    c.add_argument("--criteria", help="acceptance criteria to run, e.g. 1,2,3")
    c.add_argument("--quiet", action="store_true", help="no progress lines on stderr")
    c.add_argument("--mutate", choices=["flip_difference_sign", "flip_difference_sign_all",
                                        "flip_rodrigues_sign"], help=argparse.SUPPRESS)
    return p


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    for name in ("profile", "times", "mode"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](cfg, args, stream)
    except ConfigError as exc:
        print(f"dunkl: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
