"""Command-line front end.

Every command writes CSV (or JSON) whose header lines start with '#': tool
version, the full parameter echo and the strategy used.  Exit codes: 0 on
success, 2 on usage errors, 3 when the mathematics refuses (poles,
divergence, no zero found).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import warnings
from typing import Optional, Sequence

from . import __version__
from .errors import DomainError, ParamError, QZetaError
from .qcore import DirichletCharacter, make_character, principal_character
from .qzeta import (
    EvalParams,
    SeriesSpec,
    auto_params,
    crystal_value,
    f_direct,
    remainder_bound,
    rounding_estimate,
    special_value_neg_int,
    tsumura_zeta,
    zeta_em,
    zeta_expansion,
)
from .reference import KNOWN_ZEROS, dirichlet_L, hurwitz_zeta, riemann_zeta
from .zeros import (
    QSchedule,
    ScanMode,
    crystal_classifier,
    find_complex_zero,
    find_real_zero,
    scan_rectangle,
    track_trajectory,
)

# 0.99 down to 0.01 in steps of 0.01, then 1e-3, 1e-4, 1e-5
SCHEDULE_PRESETS = ("standard", "paper")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    return "" if x is None else str(x)


def parse_complex(text: str) -> complex:
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected RE,IM but got {text!r}")


def parse_floats(text: str, count: Optional[int] = None) -> list:
    try:
        vals = [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} numbers, got {text!r}")
    return vals


def load_character(spec: Optional[str]) -> DirichletCharacter:
    """``principal:N`` or a file: modulus on line one, then ``k re im`` lines."""
    if spec is None:
        return principal_character(1)
    m = re.fullmatch(r"principal:(\d+)", spec)
    if m:
        return principal_character(int(m.group(1)))
    try:
        with open(spec) as fh:
            lines = [ln.split("#")[0].strip() for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read character file {spec!r}: {exc}") from None
    lines = [ln for ln in lines if ln]
    try:
        N = int(lines[0])
        values = [0j] * N
        for ln in lines[1:]:
            k, re_, im_ = ln.replace(",", " ").split()
            k = int(k)
            if not 1 <= k <= N:
                raise UsageError(f"character index {k} outside 1..{N}")
            values[k - 1] = complex(float(re_), float(im_))
    except (ValueError, IndexError):
        raise UsageError(f"malformed character file {spec!r}") from None
    return make_character(N, values)


def read_config(path: str) -> dict:
    cfg = {}
    try:
        with open(path) as fh:
            for ln in fh:
                ln = ln.split("#")[0].strip()
                if not ln:
                    continue
                if "=" not in ln:
                    raise UsageError(f"config line without '=': {ln!r}")
                k, v = ln.split("=", 1)
                cfg[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    return cfg


# ----------------------------------------------------------------------------
# output


class Table:
    def __init__(self, command: str, params: dict, columns: Sequence[str]):
        self.command = command
        self.params = params
        self.columns = list(columns)
        self.rows = []
        self.meta = {}
        self.trailer = []

    def add(self, *row):
        self.rows.append(list(row))

    def render(self, form: str) -> str:
        if form == "json":
            doc = {
                "tool": "qzeta",
                "version": __version__,
                "command": self.command,
                "params": {k: fmt(v) for k, v in self.params.items()},
                "meta": {k: fmt(v) for k, v in self.meta.items()},
                "columns": self.columns,
                "rows": [[_json_value(v) for v in r] for r in self.rows],
            }
            if self.trailer:
                doc["summary"] = dict(self.trailer)
            return json.dumps(doc, indent=1) + "\n"
        out = [f"# qzeta {__version__}", f"# command={self.command}"]
        out += [f"# {k}={fmt(v)}" for k, v in self.params.items()]
        out += [f"# {k}={fmt(v)}" for k, v in self.meta.items()]
        out.append(",".join(self.columns))
        out += [",".join(fmt(v) for v in r) for r in self.rows]
        if self.trailer:
            out.append("# " + " ".join(f"{k}={fmt(v)}" for k, v in self.trailer))
        return "\n".join(out) + "\n"


def _json_value(v):
    if isinstance(v, float):
        return v if math.isfinite(v) else fmt(v)
    return v


def emit(table: Table, args) -> None:
    text = table.render(args.format)
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)


def echo(args, *names) -> dict:
    return {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}


# ----------------------------------------------------------------------------
# commands


def cmd_eval(args) -> int:
    s = parse_complex(args.s)
    chi = load_character(args.chi)
    kind = args.kind
    strategy = args.strategy
    table = Table("eval", echo(args, "kind", "s", "nu", "mu", "t", "q", "chi", "a", "strategy", "tol"),
                  ["re", "im", "bound", "terms_used"])
    bound = None
    if kind == "zeta" and strategy == "em":
        params = auto_params(s, args.nu, args.q)
        out = zeta_em(s, args.nu, args.q, params)
        table.meta.update(N=params.N, M=params.M, n=params.n, l0=params.l0, l1=params.l1)
        value, bound, used = out.value, out.bound, out.terms_used
    elif strategy == "em":
        raise UsageError("--strategy em is only available for --kind zeta")
    else:
        if kind == "zeta":
            spec = SeriesSpec.zeta(s, args.nu)
        elif kind == "L":
            spec = SeriesSpec.L(s, args.nu, chi)
        elif kind == "f":
            spec = SeriesSpec.f(s, _need(args.t, "--t"), chi)
        elif kind == "g":
            spec = SeriesSpec.g(s, _need(args.t, "--t"), args.a)
            strategy = "direct"
        else:
            spec = None
        if kind == "tsumura":
            value, used = tsumura_zeta(s, args.mu, args.a, args.q, args.tol), 0
            strategy = "direct"
        else:
            ev = f_direct if strategy == "direct" else zeta_expansion
            out = ev(spec, args.q, args.tol)
            value, used, strategy = out.value, out.terms_used, out.strategy.value
    table.meta["strategy_used"] = strategy
    table.add(value.real, value.imag, bound, used)
    emit(table, args)
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this kind")
    return parse_complex(value)


def cmd_certify(args) -> int:
    s = parse_complex(args.s)
    if args.N is not None:
        if args.M is None:
            raise UsageError("--N needs --M as well")
        p = EvalParams(args.N, args.M, args.n or 2, -1 if args.l0 is None else args.l0,
                       1 if args.l1 is None else args.l1, args.target)
    else:
        p = auto_params(s, args.nu, args.q, args.target)
    out = zeta_em(s, args.nu, args.q, p)
    table = Table("certify", echo(args, "s", "nu", "q", "target"),
                  ["N", "M", "n", "l0", "l1", "bound", "rounding", "re", "im"])
    table.meta["strategy_used"] = "em"
    table.add(p.N, p.M, p.n, p.l0, p.l1, remainder_bound(s, args.nu, args.q, p),
              rounding_estimate(s, args.nu, args.q, p), out.value.real, out.value.imag)
    emit(table, args)
    return EXIT_OK


def cmd_zero(args) -> int:
    table = Table("zero", echo(args, "nu", "q", "guess", "bracket", "tol"),
                  ["re_s", "im_s", "residual", "method", "iterations"])
    if args.bracket:
        a, b = parse_floats(args.bracket, 2)
        z = find_real_zero(args.nu, args.q, (a, b))
    elif args.guess:
        z = find_complex_zero(args.nu, args.q, parse_complex(args.guess), args.tol)
    else:
        raise UsageError("give --guess RE,IM or --bracket A,B")
    table.meta["strategy_used"] = z.method.value
    table.add(z.s.real, z.s.imag, z.residual, z.method.value, z.iterations)
    emit(table, args)
    return EXIT_OK


def parse_origin(text: str) -> complex:
    m = re.fullmatch(r"(trivial|rho):(\d+)", text)
    if m:
        j = int(m.group(2))
        try:
            return KNOWN_ZEROS.trivial(j) if m.group(1) == "trivial" else KNOWN_ZEROS.rho(j)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return parse_complex(text)


def cmd_trajectory(args) -> int:
    origin = parse_origin(args.origin)
    if args.schedule in SCHEDULE_PRESETS:
        sched = QSchedule.standard()
    else:
        try:
            with open(args.schedule) as fh:
                sched = QSchedule.parse(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read schedule {args.schedule!r}: {exc}") from None
    traj = track_trajectory(args.nu, origin, sched, tol=args.tol)
    table = Table("trajectory", echo(args, "origin", "nu", "schedule", "tol"),
                  ["q", "re_s", "im_s", "residual", "status", "newton_iters", "slope_estimate"])
    table.meta["strategy_used"] = "newton-continuation"
    for p in traj.points:
        table.add(p.q, p.s.real, p.s.imag, p.residual, p.status.value, p.newton_iters, p.slope_estimate)
    try:
        c = crystal_classifier(traj)
        table.trailer = [("crystal_classifier", "yes"), ("nearest_integer", c.nearest_integer),
                         ("final_distance", c.final_distance), ("tangency_slope", c.tangency_slope)]
    except DomainError as exc:
        table.trailer = [("crystal_classifier", "none"), ("reason", str(exc).replace(" ", "_"))]
    emit(table, args)
    return EXIT_OK


def cmd_scan(args) -> int:
    x0, y0, x1, y1 = parse_floats(args.rect, 4)
    nx, ny = (int(v) for v in parse_floats(args.grid, 2))
    mode = ScanMode(args.mode)
    rect = (complex(x0, y0), complex(x1, y1))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = scan_rectangle(args.nu, args.q, rect, (nx, ny), mode)
    table_params = echo(args, "mode", "rect", "grid", "q", "nu")
    if mode is ScanMode.FIELD:
        table = Table("scan", table_params, ["re", "im", "log10_abs"])
        for i, y in enumerate(result.im):
            for j, x in enumerate(result.re):
                table.add(float(x), float(y), float(result.log10_abs[i, j]))
    else:
        table = Table("scan", table_params, ["re0", "re1", "im0", "im1", "re_s", "im_s", "residual"])
        for cell in result:
            try:
                z = find_complex_zero(args.nu, args.q, cell.centre)
                table.add(cell.re0, cell.re1, cell.im0, cell.im1, z.s.real, z.s.imag, z.residual)
            except DomainError:
                table.add(cell.re0, cell.re1, cell.im0, cell.im1, None, None, None)
    table.meta["strategy_used"] = "expansion-grid"
    for w in caught:
        table.meta.setdefault("warning", f"{w.category.__name__}: {w.message}")
        print(f"warning: {w.message}", file=sys.stderr)
    emit(table, args)
    return EXIT_OK


def cmd_crystal(args) -> int:
    s = parse_complex(args.s)
    chi = load_character(args.chi)
    v = crystal_value(s, args.nu, chi)
    table = Table("crystal", echo(args, "s", "nu", "chi"), ["re", "im"])
    table.meta["strategy_used"] = "closed-form"
    table.add(float(v.real), float(v.imag))
    emit(table, args)
    return EXIT_OK


def cmd_special(args) -> int:
    chi = load_character(args.chi)
    v = special_value_neg_int(args.m, args.nu, chi, args.q)
    table = Table("special", echo(args, "m", "nu", "q", "chi"), ["re", "im"])
    table.meta["strategy_used"] = "closed-form"
    table.add(v.real, v.imag)
    emit(table, args)
    return EXIT_OK


def cmd_compare_classical(args) -> int:
    s = parse_complex(args.s)
    chi = load_character(args.chi)
    qs = parse_floats(args.q_list)
    if args.kind == "zeta":
        classical = riemann_zeta(s)
    elif args.kind == "hurwitz":
        classical = hurwitz_zeta(s, args.a)
    else:
        classical = dirichlet_L(s, chi)
    table = Table("compare-classical", echo(args, "kind", "s", "nu", "chi", "a", "q_list"),
                  ["q", "re", "im", "classical_re", "classical_im", "abs_err"])
    table.meta["strategy_used"] = "expansion"
    for q in qs:
        if args.kind == "zeta":
            spec = SeriesSpec.zeta(s, args.nu)
        elif args.kind == "hurwitz":
            spec = SeriesSpec.g(s, s - args.nu, args.a)
        else:
            spec = SeriesSpec.L(s, args.nu, chi)
        v = (f_direct if args.kind == "hurwitz" else zeta_expansion)(spec, q).value
        table.add(q, v.real, v.imag, classical.real, classical.imag, abs(v - classical))
    emit(table, args)
    return EXIT_OK


# ----------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser):
    p.add_argument("--output", "-o", help="also write the result to this file")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--config", help="key=value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qzeta", description="q-analogues of zeta and L-functions")
    parser.add_argument("--version", action="version", version=f"qzeta {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one member of the family")
    p.add_argument("--kind", choices=["zeta", "L", "f", "g", "tsumura"], default="zeta")
    p.add_argument("--s", required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--t")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--chi")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--strategy", choices=["auto", "expansion", "direct", "em"], default="auto")
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("certify", help="Euler-Maclaurin parameters with a remainder bound")
    p.add_argument("--s", required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--target", type=float, default=1e-5)
    p.add_argument("--N", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--l0", type=int)
    p.add_argument("--l1", type=int)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("zero", help="locate one zero")
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--guess")
    p.add_argument("--bracket")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_zero)

    p = sub.add_parser("trajectory", help="continue a zero from q near 1 toward 0")
    p.add_argument("--origin", required=True, help="trivial:J, rho:J or RE,IM")
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--schedule", default="standard", help="'standard' (alias 'paper') or a file of q values")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("scan", help="sample a rectangle")
    p.add_argument("--rect", required=True, help="RE1,IM1,RE2,IM2")
    p.add_argument("--grid", required=True, help="NX,NY")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--mode", choices=["field", "candidates"], default="candidates")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("crystal", help="the q -> 0 limit")
    p.add_argument("--s", required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--chi")
    p.set_defaults(func=cmd_crystal)

    p = sub.add_parser("special", help="value at s = -m")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--chi")
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("compare-classical", help="errors against the classical function along a q list")
    p.add_argument("--kind", choices=["zeta", "L", "hurwitz"], default="zeta")
    p.add_argument("--s", required=True)
    p.add_argument("--nu", type=int, default=1)
    p.add_argument("--chi")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--q-list", required=True)
    p.set_defaults(func=cmd_compare_classical)

    for p in sub.choices.values():
        _common(p)
    return parser


_NEGATIVE = re.compile(r"-[\d.]")


def normalize_argv(argv: Sequence[str]) -> list:
    """Glue ``--flag -0.5,0`` into ``--flag=-0.5,0`` so negative values parse."""
    out = []
    i = 0
    argv = list(argv)
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for i, a in enumerate(argv):
        if a.startswith("--config="):
            return a.split("=", 1)[1]
        if a == "--config" and i + 1 < len(argv):
            return argv[i + 1]
    return None


def parse_args(argv: Sequence[str]):
    argv = normalize_argv(argv)
    parser = build_parser()
    path = _config_path(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    if path and command in sub.choices:
        cfg = read_config(path)
        target = sub.choices[command]
        known = {a.dest: a for a in target._actions}
        defaults = {}
        for k, v in cfg.items():
            if k not in known or k in ("config", "help"):
                raise UsageError(f"unknown config key {k!r} for {command}")
            act = known[k]
            if act.choices is not None and v not in act.choices:
                raise UsageError(f"config {k}={v!r}: choose from {list(act.choices)}")
            try:
                defaults[k] = act.type(v) if act.type else v
            except ValueError:
                raise UsageError(f"config {k}={v!r} has the wrong type") from None
            # a config value satisfies a required flag
            act.required = False
        target.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    except UsageError as exc:
        print(f"qzeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ParamError) as exc:
        print(f"qzeta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, QZetaError) as exc:
        print(f"qzeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
