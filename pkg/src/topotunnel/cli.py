"""Command-line entry point.

Exit status: 0 on success, 1 on a failed check or domain error, 2 on a usage
error. Settings resolve as command-line flag, then ``--config`` file, then
built-in default.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .diagram import DiagramError, evaluate
from .doublewell import WellParams, independent_wells_limit, map_well
from .dynamics import tunneling_time, tunneling_trace, zeno_run
from .hamiltonian import ModelParams, spectrum, splitting
from .numerics import TOL_ABS, TOL_EIG
from .tl_algebra import TLParams
from .topo_basis import DegenerateSpectrum
from .verify import run_verification

DEFAULTS = {
    "J": 1.0,
    "delta": 0.1,
    "phi": 0.0,
    "eps": 1,
    "hbar": 1.0,
    "m": 1.0,
    "L": 2.0,
    "a": 0.5,
    "V0": 10.0,
    "t_max": None,
    "steps": 101,
    "tol_abs": TOL_ABS,
    "tol_eig": TOL_EIG,
    "format": None,
}

CASTS = {"eps": int, "steps": int, "format": str}

DEFAULT_FORMAT = {
    "verify": "json",
    "spectrum": "table",
    "evolve": "csv",
    "zeno": "csv",
    "well": "json",
    "diagram": "json",
}


class DomainError(Exception):
    pass


def read_config(path) -> dict:
    """Flat ``key = value`` file; blank lines and ``#`` comments ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            cast = CASTS.get(key, float)
            try:
                out[key] = cast(value)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def resolve(args) -> dict:
    settings = dict(DEFAULTS)
    config = getattr(args, "config", None)
    if config:
        try:
            settings.update(read_config(config))
        except OSError as exc:
            raise DomainError(f"cannot read config: {exc}") from None
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if settings["format"] is None:
        sweep = getattr(args, "sweep", None)
        settings["format"] = "csv" if sweep else DEFAULT_FORMAT[args.command]
    return settings


def model_params(s) -> ModelParams:
    return ModelParams(J=s["J"], delta=s["delta"], phi=s["phi"], eps=s["eps"], hbar=s["hbar"])


def well_params(s) -> WellParams:
    return WellParams(m=s["m"], L=s["L"], a=s["a"], V0=s["V0"], hbar=s["hbar"])


# --- output helpers -----------------------------------------------------------


def _num(x):
    return repr(float(x))


def write_csv(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating)) else v for v in row])
    out.write(buf.getvalue())


def write_table(out, header, rows):
    cells = [[str(h) for h in header]]
    cells += [[_num(v) if isinstance(v, (float, np.floating)) else str(v) for v in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    for r in cells:
        out.write("  ".join(c.rjust(wd) for c, wd in zip(r, widths)).rstrip() + "\n")


def write_json(out, obj):
    out.write(json.dumps(obj, indent=2) + "\n")


def emit(out, fmt, header, rows, json_obj):
    if fmt == "json":
        write_json(out, json_obj)
    elif fmt == "csv":
        write_csv(out, header, rows)
    else:
        write_table(out, header, rows)


# --- subcommands ------------------------------------------------------------


def cmd_verify(args, s, out) -> int:
    report = run_verification(
        phi=args.phi,
        eps=args.eps,
        J=s["J"],
        delta=s["delta"],
        hbar=s["hbar"],
        tol_abs=s["tol_abs"],
        tol_eig=s["tol_eig"],
        perturb=args.perturb,
    )
    header = ("name", "max_residual", "tol", "passed", "mandatory")
    rows = [tuple(c[k] for k in header) for c in report["checks"]]
    emit(out, s["format"], header, rows, report)
    return 0 if report["passed"] else 1


def cmd_spectrum(args, s, out) -> int:
    mp = model_params(s)
    sp = spectrum(mp)
    wp, wm, dfreq = splitting(mp)
    levels = [{"value": lv.value, "multiplicity": lv.multiplicity} for lv in sp.levels]
    obj = {
        "params": {"J": mp.J, "delta": mp.delta, "phi": mp.phi, "eps": mp.eps, "hbar": mp.hbar},
        "levels": levels,
        "omega_plus": wp,
        "omega_minus": wm,
        "delta_freq": dfreq,
    }
    rows = [(lv.value, lv.multiplicity) for lv in sp.levels]
    emit(out, s["format"], ("value", "multiplicity"), rows, obj)
    return 0


def cmd_evolve(args, s, out) -> int:
    mp = model_params(s)
    t_max = s["t_max"]
    if t_max is None:
        t_max = 2 * tunneling_time(mp)
    tr = tunneling_trace(mp, t_max, s["steps"])
    rows = list(tr.rows())
    obj = {"header": list(tr.HEADER), "rows": [[float(v) for v in r] for r in rows]}
    emit(out, s["format"], tr.HEADER, rows, obj)
    return 0


def _parse_n_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n expects integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("--n values must be positive integers")
    return values


def cmd_zeno(args, s, out) -> int:
    mp = model_params(s)
    runs = [zeno_run(mp, n) for n in args.n]
    header = runs[0].HEADER
    rows = [r.row() for r in runs]
    obj = {"header": list(header), "rows": [list(r) for r in rows]}
    emit(out, s["format"], header, rows, obj)
    return 0


def _parse_sweep(text):
    """``V0=lo:hi:log10`` (points at each decade) or ``V0=lo:hi:log10:count``."""
    try:
        key, spec = text.split("=", 1)
        parts = spec.split(":")
        lo, hi = float(parts[0]), float(parts[1])
        scale = parts[2] if len(parts) > 2 else "log10"
        count = int(parts[3]) if len(parts) > 3 else None
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"bad sweep {text!r}; expected V0=lo:hi:log10[:count]") from None
    if key.strip() != "V0":
        raise argparse.ArgumentTypeError("only V0 can be swept")
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError("sweep needs 0 < lo < hi")
    if scale == "log10":
        if count is None:
            count = int(round(np.log10(hi / lo))) + 1
        values = np.geomspace(lo, hi, max(count, 2))
    elif scale == "lin":
        values = np.linspace(lo, hi, max(count or 10, 2))
    else:
        raise argparse.ArgumentTypeError(f"unknown sweep scale {scale!r}")
    return [float(v) for v in values]


def cmd_well(args, s, out) -> int:
    w = well_params(s)
    if args.sweep:
        rows = independent_wells_limit(w, args.sweep)
        header = ("V0", "delta", "tau", "note")
        obj = {"header": list(header), "rows": [list(r) for r in rows]}
        emit(out, s["format"], header, rows, obj)
        return 0
    wm = map_well(w)
    obj = wm.as_dict()
    emit(out, s["format"], tuple(obj), [tuple(obj.values())], obj)
    return 0


def cmd_diagram(args, s, out) -> int:
    src = args.expression if args.expression is not None else sys.stdin.read()
    res = evaluate(src, TLParams(s["phi"], s["eps"]))
    obj = res.to_json()
    header = ("index", "re", "im")
    rows = [(k, re, im) for k, (re, im) in enumerate(obj["data"])]
    emit(out, s["format"], header, rows, obj)
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "zeno": cmd_zeno,
    "well": cmd_well,
    "diagram": cmd_diagram,
}


def _eps(text):
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("eps must be 1 or -1")
    return v


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting a flag given before it.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv", "table"))
    common.add_argument("--config", metavar="PATH", help="flat key=value settings file")
    common.add_argument("--tol-abs", dest="tol_abs", type=float)
    common.add_argument("--tol-eig", dest="tol_eig", type=float)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--J", type=float)
    model.add_argument("--delta", type=float)
    model.add_argument("--phi", type=float)
    model.add_argument("--eps", type=_eps)
    model.add_argument("--hbar", type=float)

    parser = argparse.ArgumentParser(
        prog="topotunnel",
        description="Temperley-Lieb spin model: checks, spectrum, tunneling and Zeno dynamics.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common, model], help="run all algebraic and spectral checks")
    p.add_argument("--perturb", type=float, default=0.0, help="add noise of this size to the generator")

    sub.add_parser("spectrum", parents=[common, model], help="exact spectrum of the 4-site Hamiltonian")

    p = sub.add_parser("evolve", parents=[common, model], help="e1 -> e3 tunneling trace")
    p.add_argument("--t-max", dest="t_max", type=float, help="default: two tunneling times")
    p.add_argument("--steps", type=int)

    p = sub.add_parser("zeno", parents=[common, model], help="repeated projective measurement")
    p.add_argument("--n", type=_parse_n_list, default=[10], help="one or more n, comma separated")

    p = sub.add_parser("well", parents=[common], help="double-well to model parameter map")
    p.add_argument("--m", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--V0", type=float)
    p.add_argument("--hbar", type=float)
    p.add_argument("--sweep", type=_parse_sweep, help="V0=lo:hi:log10[:count]")

    p = sub.add_parser("diagram", parents=[common], help="evaluate a cup/cap expression")
    p.add_argument("expression", nargs="?", help="DSL source; read from stdin when omitted")
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=_eps)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve(args)
        if args.command == "evolve" and settings["steps"] < 2:
            parser.error("--steps must be at least 2")
        return COMMANDS[args.command](args, settings, out)
    except (DomainError, DegenerateSpectrum, DiagramError, ValueError) as exc:
        print(f"topotunnel {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
