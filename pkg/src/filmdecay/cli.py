"""
Command-line front end.

    filmdecay rate   ...            one evaluated row
    filmdecay sweep  --axis ...     rows over z, H, T, omega or kz
    filmdecay fig2                  perfect-conductor rate ratio vs kz, two spin orientations

Parameters come from flags, optionally layered over a flat TOML file
(``--config``) whose keys are the flag names without dashes, e.g.
``lambda-L = 5e-8`` or ``orient = [0.0, 0.5, 0.5]``. ``--dump-config``
writes the effective parameters back out in the same format.

Exit status: 0 ok, 1 invalid input or failed rows, 2 quadrature did not converge.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import math
import os
import sys
import warnings

import numpy as np

from . import __version__, limits, medium
from .core import OrientationWeights, ThermalEnvironment, TransitionKind, TransitionSpec
from .quad import QuadratureConfig, QuadratureWarning
from .rates import SlabGeometry, total_rate

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["main", "COLUMNS", "FIG2_COLUMNS", "ROW_SCHEMA", "FIG2_SCHEMA"]

COLUMNS = (
    "sweep_value",
    "kz",
    "kH",
    "integral_par",
    "integral_perp",
    "gamma0",
    "slab_correction",
    "n_th",
    "total",
    "rate_ratio",
    "quad_error",
    "lambda_L",
    "delta",
    "eps_re",
    "eps_im",
    "flags",
    "status",
)
FIG2_COLUMNS = ("kz", "rate_ratio_upper", "rate_ratio_lower")

_NUM = {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}]}
_NUM_OR_NULL = {"oneOf": [{"type": "number"}, {"enum": ["inf", "-inf", "nan"]}, {"type": "null"}]}
ROW_SCHEMA = {
    "type": "object",
    "properties": {
        **{c: _NUM_OR_NULL for c in COLUMNS if c not in ("flags", "status")},
        "kz": _NUM,
        "kH": _NUM,
        "flags": {"type": "array", "items": {"type": "string"}},
        "status": {"type": "string"},
    },
    "required": list(COLUMNS),
    "additionalProperties": False,
}
FIG2_SCHEMA = {
    "type": "object",
    "properties": {c: {"type": "number"} for c in FIG2_COLUMNS},
    "required": list(FIG2_COLUMNS),
    "additionalProperties": False,
}

AXES = ("z", "H", "T", "omega", "kz")
THREADS_ENV = "FILMDECAY_THREADS"


class UsageError(ValueError):
    pass


def _float(text):
    return float(text)


def _floats(n):
    def parse(text):
        parts = [p for p in str(text).split(",")]
        if len(parts) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return [float(p) for p in parts]

    return parse


# name -> (parser for flag text, kind of value for config files)
PARAMS = {
    "kind": (str, "str"),
    "freq": (_float, "float"),
    "orient": (_floats(3), "floats3"),
    "z": (_float, "float"),
    "H": (_float, "float"),
    "lambda-L": (_float, "float"),
    "delta": (_float, "float"),
    "eps-re": (_float, "float"),
    "eps-im": (_float, "float"),
    "perfect-conductor": (bool, "bool"),
    "two-fluid": (_floats(4), "floats4"),
    "gap-frequency": (_float, "float"),
    "temp": (_float, "float"),
    "dimensionless": (bool, "bool"),
    "kz": (_float, "float"),
    "kH": (_float, "float"),
    "k-lambda-L": (_float, "float"),
    "k-delta": (_float, "float"),
    "rel-tol": (_float, "float"),
    "abs-tol": (_float, "float"),
    "max-subdivisions": (int, "int"),
    "tail-cut": (_float, "float"),
    "format": (str, "str"),
    "axis": (str, "str"),
    "start": (_float, "float"),
    "stop": (_float, "float"),
    "points": (int, "int"),
    "spacing": (str, "str"),
}
SWEEP_KEYS = ("axis", "start", "stop", "points", "spacing")
DEFAULTS = {"kind": "magnetic", "format": "csv", "spacing": "linear"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p):
    g = p.add_argument_group("transition")
    g.add_argument("--kind", choices=["magnetic", "electric"], default=argparse.SUPPRESS)
    g.add_argument("--freq", type=_float, default=argparse.SUPPRESS, help="transition frequency in Hz")
    g.add_argument("--orient", type=_floats(3), default=argparse.SUPPRESS, metavar="WX,WY,WZ",
                   help="squared matrix elements (C^2 m^2 for electric)")
    g = p.add_argument_group("geometry (SI)")
    g.add_argument("--z", type=_float, default=argparse.SUPPRESS, help="atom height in m")
    g.add_argument("--H", type=_float, default=argparse.SUPPRESS, help="film thickness in m, or inf")
    g = p.add_argument_group("medium (pick one kind)")
    g.add_argument("--lambda-L", dest="lambda-L", type=_float, default=argparse.SUPPRESS,
                   help="London length in m (two-fluid; add --delta for normal electrons)")
    g.add_argument("--delta", type=_float, default=argparse.SUPPRESS, help="skin depth in m (alone: normal metal)")
    g.add_argument("--eps-re", dest="eps-re", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--eps-im", dest="eps-im", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--perfect-conductor", dest="perfect-conductor", action="store_true", default=argparse.SUPPRESS)
    g.add_argument("--two-fluid", dest="two-fluid", type=_floats(4), default=argparse.SUPPRESS,
                   metavar="T,TC,LAMBDAL0,DELTAC", help="Gorter-Casimir two-fluid film")
    g.add_argument("--gap-frequency", dest="gap-frequency", type=_float, default=argparse.SUPPRESS,
                   help="gap angular frequency in rad/s (warns when omega is not well below it)")
    g.add_argument("--temp", type=_float, default=argparse.SUPPRESS, help="temperature in K")
    g = p.add_argument_group("dimensionless mode")
    g.add_argument("--dimensionless", action="store_true", default=argparse.SUPPRESS,
                   help="take kz, kH, k*lambda_L, k*delta instead of lengths")
    g.add_argument("--kz", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--kH", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--k-lambda-L", dest="k-lambda-L", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--k-delta", dest="k-delta", type=_float, default=argparse.SUPPRESS)
    g = p.add_argument_group("quadrature")
    g.add_argument("--rel-tol", dest="rel-tol", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--abs-tol", dest="abs-tol", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--max-subdivisions", dest="max-subdivisions", type=int, default=argparse.SUPPRESS)
    g.add_argument("--tail-cut", dest="tail-cut", type=_float, default=argparse.SUPPRESS)
    g = p.add_argument_group("input/output")
    g.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS)
    g.add_argument("--config", metavar="FILE", help="flat TOML file of parameters; flags override it")
    g.add_argument("--dump-config", dest="dump_config", metavar="PATH", help="write the effective parameters as TOML")
    g.add_argument("--out", metavar="PATH", help="output file (default: standard output)")


def build_parser():
    p = _Parser(prog="filmdecay", description="Atom spin-flip and dipole-flip rates near a thin film.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("rate", help="evaluate one configuration")
    _add_common(r)
    s = sub.add_parser("sweep", help="evaluate a parameter sweep")
    _add_common(s)
    g = s.add_argument_group("sweep")
    g.add_argument("--axis", choices=AXES, default=argparse.SUPPRESS)
    g.add_argument("--start", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--stop", type=_float, default=argparse.SUPPRESS)
    g.add_argument("--points", type=int, default=argparse.SUPPRESS)
    g.add_argument("--spacing", choices=["linear", "log"], default=argparse.SUPPRESS)
    g.add_argument("--threads", type=int, default=None, help=f"worker count (capped by ${THREADS_ENV})")
    f = sub.add_parser("fig2", help="perfect-conductor rate ratio vs kz for the two standard spin orientations")
    f.add_argument("--points", type=int, default=500)
    f.add_argument("--format", choices=["csv", "json"], default="csv")
    f.add_argument("--out", metavar="PATH")
    return p


# ---------------------------------------------------------------- config I/O

def read_config(path):
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    out = {}
    for key, value in raw.items():
        if key not in PARAMS:
            raise UsageError(f"unknown config key {key!r} in {path}")
        kind = PARAMS[key][1]
        try:
            if kind == "float":
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise TypeError
                value = float(value)
            elif kind == "int":
                if isinstance(value, bool) or not isinstance(value, int):
                    raise TypeError
            elif kind == "bool":
                if not isinstance(value, bool):
                    raise TypeError
            elif kind == "str":
                if not isinstance(value, str):
                    raise TypeError
            else:
                n = 3 if kind == "floats3" else 4
                if not isinstance(value, list) or len(value) != n:
                    raise TypeError
                value = [float(v) for v in value]
        except (TypeError, ValueError):
            raise UsageError(f"config key {key!r} has an invalid value {value!r}") from None
        out[key] = value
    return out


def _toml_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        # repr round-trips every float; inf and nan are valid TOML floats
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    return "[" + ", ".join(_toml_value(float(v)) for v in value) + "]"


def dump_config(params, path):
    lines = [f"{key} = {_toml_value(params[key])}" for key in PARAMS if key in params]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ----------------------------------------------------------- model building

_SI_MEDIUM = {"lambda-L": "lambda", "delta": "lambda", "eps-re": "eps", "eps-im": "eps",
              "perfect-conductor": "pc", "two-fluid": "two-fluid"}
_DIM_MEDIUM = {"k-lambda-L": "lambda", "k-delta": "lambda", "eps-re": "eps", "eps-im": "eps",
               "perfect-conductor": "pc"}


def _medium_group(p, table):
    groups = {}
    for key, group in table.items():
        if key in p and p[key] is not False:
            groups.setdefault(group, []).append(key)
    if len(groups) > 1:
        names = ", ".join("/".join("--" + k for k in keys) for keys in groups.values())
        raise UsageError(f"medium flags are mutually exclusive: got {names}")
    if not groups:
        raise UsageError("no medium given (use --lambda-L/--delta, --eps-re/--eps-im, --perfect-conductor or --two-fluid)")
    return next(iter(groups))


def validate(p, command):
    """Check a merged parameter record; raises UsageError."""
    if p.get("kind") not in ("magnetic", "electric"):
        raise UsageError(f"--kind must be magnetic or electric, got {p.get('kind')!r}")
    if p.get("format") not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {p.get('format')!r}")
    if "orient" not in p:
        raise UsageError("--orient is required")
    dim = bool(p.get("dimensionless", False))
    si_only = [k for k in ("z", "H", "lambda-L", "delta", "two-fluid") if k in p]
    dim_only = [k for k in ("kz", "kH", "k-lambda-L", "k-delta") if k in p]
    if dim and si_only:
        raise UsageError("--dimensionless cannot be combined with " + ", ".join("--" + k for k in si_only))
    if not dim and dim_only:
        raise UsageError(", ".join("--" + k for k in dim_only) + " need --dimensionless")
    if not dim and "freq" not in p:
        raise UsageError("--freq is required")
    group = _medium_group(p, _DIM_MEDIUM if dim else _SI_MEDIUM)
    if group == "two-fluid" and "temp" in p and p["temp"] != p["two-fluid"][0]:
        raise UsageError("--temp differs from the temperature given in --two-fluid")
    if command == "sweep":
        missing = [k for k in ("axis", "start", "stop", "points") if k not in p]
        if missing:
            raise UsageError("sweep needs " + ", ".join("--" + k for k in missing))
        if p["axis"] not in AXES:
            raise UsageError(f"--axis must be one of {', '.join(AXES)}")
        if p["spacing"] not in ("linear", "log"):
            raise UsageError("--spacing must be linear or log")
        if p["points"] < 2:
            raise UsageError("--points must be >= 2")
        if not p["start"] < p["stop"]:
            raise UsageError("--start must be < --stop")
        if p["spacing"] == "log" and not p["start"] > 0:
            raise UsageError("log spacing needs --start > 0")
        if dim and p["axis"] in ("z", "H", "omega"):
            raise UsageError(f"axis {p['axis']} is not available in dimensionless mode")
    height_swept = command == "sweep" and p["axis"] in (("kz",) if dim else ("z", "kz"))
    if not height_swept:
        if dim and "kz" not in p:
            raise UsageError("--kz is required in dimensionless mode")
        if not dim and "z" not in p:
            raise UsageError("--z is required")
    return group


def _freq(p):
    return p.get("freq", 1e9)


def build_point(p, group):
    """Library objects for one parameter record, plus the medium columns."""
    kind = TransitionKind(p["kind"])
    spec = TransitionSpec.from_frequency(_freq(p), kind)
    k = spec.k
    ori = OrientationWeights(*p["orient"])
    gap = p.get("gap-frequency")
    temp = p.get("temp", 0.0)
    info = {"lambda_L": None, "delta": None}
    if p.get("dimensionless"):
        geo = SlabGeometry.from_dimensionless(p["kz"], p.get("kH", math.inf), k)
        if group == "lambda":
            if "k-lambda-L" in p:
                model = medium.TwoFluid(p["k-lambda-L"] / k, p.get("k-delta", math.inf) / k, gap)
            else:
                model = medium.Drude(p["k-delta"] / k, gap)
    else:
        geo = SlabGeometry(p["z"], p.get("H", math.inf))
        if group == "lambda":
            if "lambda-L" in p:
                model = medium.TwoFluid(p["lambda-L"], p.get("delta", math.inf), gap)
            else:
                model = medium.Drude(p["delta"], gap)
        elif group == "two-fluid":
            T, Tc, lam0, dc = p["two-fluid"]
            model = medium.two_fluid_at_temperature(medium.TwoFluidState(T, Tc, lam0, dc))
            if gap is not None:
                model = dataclasses.replace(model, gap_frequency=gap)
            temp = p.get("temp", T)
    if group == "eps":
        model = medium.FixedEpsilon(complex(p.get("eps-re", 0.0), p.get("eps-im", 0.0)), gap)
    elif group == "pc":
        model = medium.PerfectConductor()
    if isinstance(model, medium.TwoFluid):
        info = {"lambda_L": model.lambda_L, "delta": model.delta}
    elif isinstance(model, medium.Drude):
        info["delta"] = model.delta
    cfg_kw = {}
    for key, field in (("rel-tol", "rel_tol"), ("abs-tol", "abs_tol"),
                       ("max-subdivisions", "max_subdivisions"), ("tail-cut", "tail_cut_epsilon")):
        if key in p:
            cfg_kw[field] = p[key]
    return spec, ori, model, geo, ThermalEnvironment(temp), QuadratureConfig(**cfg_kw), info


def evaluate(p, group, sweep_value=None):
    """One output row (dict keyed by COLUMNS); errors become a row-level marker."""
    row = dict.fromkeys(COLUMNS)
    row["sweep_value"] = sweep_value
    row["flags"] = []
    try:
        spec, ori, model, geo, env, cfg, info = build_point(p, group)
        kz, kH = geo.scaled(spec.k)
        row.update(kz=kz, kH=kH, **info)
        if not isinstance(model, medium.PerfectConductor):
            eps = medium.permittivity(model, spec)
            row.update(eps_re=eps.real, eps_im=eps.imag)
        res = total_rate(spec, ori, model, geo, env, cfg)
    except (ValueError, ArithmeticError) as exc:
        row["status"] = f"error: {exc}"
        return row
    row.update(
        integral_par=res.integral_par,
        integral_perp=res.integral_perp,
        gamma0=res.gamma0,
        slab_correction=res.slab_correction,
        n_th=res.n_th,
        total=res.total,
        rate_ratio=res.ratio,
        quad_error=res.quad_error,
        flags=list(res.flags),
        status="ok" if res.converged else "not-converged",
    )
    return row


def sweep_values(p):
    if p["spacing"] == "log":
        return np.geomspace(p["start"], p["stop"], p["points"])
    return np.linspace(p["start"], p["stop"], p["points"])


def _at(p, axis, value):
    q = dict(p)
    if axis == "kz" and not q.get("dimensionless"):
        q["z"] = value / TransitionSpec.from_frequency(q["freq"]).k
    elif axis in ("z", "H", "kz"):
        q[axis] = value
    elif axis == "T":
        q["temp"] = value
        if "two-fluid" in q:
            q["two-fluid"] = [value] + list(q["two-fluid"][1:])
    elif axis == "omega":
        f_new = value / (2.0 * math.pi)
        # normal-state skin depth scales as omega^(-1/2); London length is frequency independent
        scale = math.sqrt(q["freq"] / f_new)
        if "delta" in q:
            q["delta"] = q["delta"] * scale
        if "two-fluid" in q:
            T, Tc, lam0, dc = q["two-fluid"]
            q["two-fluid"] = [T, Tc, lam0, dc * scale]
        q["freq"] = f_new
    return q


def _workers(requested, n_rows):
    n = requested if requested else (os.cpu_count() or 1)
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"${THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, min(n, n_rows))


def run_sweep(p, group, threads=None):
    values = [float(v) for v in sweep_values(p)]
    axis = p["axis"]
    if axis == "T" and any(v < 0 for v in values):
        raise UsageError("temperatures must be >= 0")
    jobs = [(_at(p, axis, v), v) for v in values]
    n = _workers(threads, len(jobs))
    if n == 1:
        return [evaluate(q, group, v) for q, v in jobs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n) as pool:
        # map keeps input order whatever the completion order
        return list(pool.map(lambda job: evaluate(job[0], group, job[1]), jobs))


# ------------------------------------------------------------------- output

def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return ";".join(value)
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, (np.floating,)):
        return _json_value(float(value))
    return value


def write_rows(rows, columns, fmt, fh):
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_csv_cell(row[c]) for c in columns])
    else:
        for row in rows:
            fh.write(json.dumps({c: _json_value(row[c]) for c in columns}, allow_nan=False) + "\n")


def _emit(rows, columns, fmt, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            write_rows(rows, columns, fmt, fh)
    else:
        write_rows(rows, columns, fmt, sys.stdout)
        sys.stdout.flush()


def fig2_grid(points=500):
    """kz = 0, log-spaced points up to 1, then linear points up to 10."""
    if points < 4:
        raise UsageError("fig2 needs at least 4 points")
    n_log = (points - 1) * 2 // 5
    n_lin = points - 1 - n_log
    log_part = np.geomspace(1e-4, 1.0, n_log, endpoint=False)
    lin_part = np.linspace(1.0, 10.0, n_lin)
    return np.concatenate([[0.0], log_part, lin_part])


def fig2_rows(points=500):
    kz = fig2_grid(points)
    upper_par, upper_perp = limits.pc_factors("magnetic", kz)
    # orientation (0, 1/2, 1/2): half the weight in-plane, half normal
    upper = 0.5 * upper_par + 0.5 * upper_perp
    lower = upper_perp
    return [{"kz": float(a), "rate_ratio_upper": float(b), "rate_ratio_lower": float(c)}
            for a, b, c in zip(kz, upper, lower)]


def _exit_code(rows):
    statuses = [r["status"] for r in rows]
    if any(s.startswith("error") for s in statuses):
        return 1
    if any(s == "not-converged" for s in statuses):
        return 2
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    ns = vars(args)
    # the library reports non-convergence through the status column instead
    warnings.simplefilter("ignore", QuadratureWarning)
    try:
        if args.command == "fig2":
            _emit(fig2_rows(args.points), FIG2_COLUMNS, args.format, args.out)
            return 0
        params = dict(DEFAULTS)
        if args.config:
            params.update(read_config(args.config))
        params.update({k: v for k, v in ns.items() if k in PARAMS})
        group = validate(params, args.command)
        if args.dump_config:
            keep = {k: v for k, v in params.items() if args.command == "sweep" or k not in SWEEP_KEYS}
            dump_config(keep, args.dump_config)
        if args.command == "rate":
            row = evaluate(params, group)
            if row["status"].startswith("error"):
                raise UsageError(row["status"][len("error: "):])
            rows = [row]
        else:
            rows = run_sweep(params, group, args.threads)
        _emit(rows, COLUMNS, params["format"], args.out)
        for r in rows:
            if r["status"].startswith("error"):
                print(f"filmdecay: row {r['sweep_value']!r}: {r['status']}", file=sys.stderr)
        return _exit_code(rows)
    except (UsageError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"filmdecay: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
