"""Command-line interface: ``ncps {distance,verify,sweep,export}``.

Exit codes: 0 success, 1 verification failure, 2 bad arguments,
3 singular regime (theta >= hbar), 4 numeric solver did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .closed_form import distance, optimal_element_general
from .errors import NCPSError, NotConverged, SingularRegime
from .hilbert import FockLabel, make_params, make_params_mu_nu
from .numeric import SupSolverConfig, default_cutoff, sup_distance
from .triple import diagonal_commutator_norm
from .verification import DEFAULT_THETAS, VerifyConfig, run_checks

CSV_FIELDS = ("m", "n", "k", "l", "theta", "closed_form", "numeric_sup", "ball_norm")

EXIT_VERIFY, EXIT_USAGE, EXIT_SINGULAR, EXIT_NOT_CONVERGED = 1, 2, 3, 4


def _label(text: str) -> FockLabel:
    try:
        return FockLabel.parse(text)
    except NCPSError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _pair(text: str) -> tuple[FockLabel, FockLabel]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"pair {text!r} must look like 'm,n:k,l'")
    return _label(parts[0]), _label(parts[1])


def _common(p: argparse.ArgumentParser):
    p.add_argument("--hbar", type=float, default=1.0)
    g = p.add_argument_group("deformation (theta, or mu and nu with theta = sqrt(mu nu))")
    g.add_argument("--theta", type=float, default=None)
    g.add_argument("--mu", type=float, default=None)
    g.add_argument("--nu", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=None, help="Fock levels per mode (default 24)")
    p.add_argument("--buffer", type=int, default=8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--out", default=None, help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncps", description="Spectral distances between Fock states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="distance between two Fock states")
    _common(p)
    p.add_argument("--from", dest="source", type=_label, required=True, metavar="M,N")
    p.add_argument("--to", dest="target", type=_label, required=True, metavar="K,L")
    p.add_argument("--verify", action="store_true", help="also run the numeric supremum and ball check")

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p)
    p.add_argument("--max-label", type=int, default=3)

    p = sub.add_parser("sweep", help="distances across a range of theta")
    _common(p)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=0.9)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--pair", dest="pairs", type=_pair, action="append", metavar="M,N:K,L")
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("export", help="table of distances from a base state to a label grid")
    _common(p)
    p.add_argument("--base", type=_label, default=FockLabel(0, 0), metavar="M,N")
    p.add_argument("--max-label", type=int, default=3)
    p.add_argument("--verify", action="store_true")
    return parser


def _params(args, theta=None):
    if args.theta is not None and (args.mu is not None or args.nu is not None):
        raise _Usage("--theta cannot be combined with --mu/--nu")
    if (args.mu is None) != (args.nu is None):
        raise _Usage("--mu and --nu must be given together")
    if theta is not None:
        return make_params(args.hbar, theta)
    if args.mu is not None:
        return make_params_mu_nu(args.hbar, args.mu, args.nu)
    return make_params(args.hbar, 0.0 if args.theta is None else args.theta)


class _Usage(Exception):
    pass


def _cutoff(args) -> int:
    return default_cutoff() if args.cutoff is None else args.cutoff


def _row(params, a, b, verify, cfg=None):
    rep = distance(params, a, b)
    row = dict(m=a.m, n=a.n, k=b.m, l=b.n, theta=params.theta, closed_form=rep.closed_form,
               numeric_sup=None, ball_norm=None)
    if verify:
        res = sup_distance(params, a, b, cfg)
        row["numeric_sup"] = res.value
        if a != b:
            el = optimal_element_general(params, a, b, cfg.cutoff, cfg.buffer)
            row["ball_norm"] = diagonal_commutator_norm(el.coeffs, params)
        else:
            row["ball_norm"] = 0.0
    return row


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.8g}"


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))  # same shortest round-trip text as the JSON encoder


def render(fmt: str, config: dict, rows: list[dict], checks: list[dict] | None = None,
           notes: list[str] | None = None) -> str:
    if fmt == "json":
        doc = {"config": config, "rows": rows}
        if checks is not None:
            doc["checks"] = checks
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in rows:
            w.writerow([_csv_cell(r[f]) for f in CSV_FIELDS])
        return buf.getvalue()
    lines = list(notes or [])
    if rows:
        table = [list(CSV_FIELDS)] + [[_fmt(r[f]) for f in CSV_FIELDS] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(CSV_FIELDS))]
        lines += ["  ".join(c.rjust(wd) for c, wd in zip(row, widths)).rstrip() for row in table]
    for c in checks or []:
        status = "PASS" if c["passed"] else "FAIL"
        line = f"{status}  {c['name']}  residual={_fmt(c['residual'])}  tol={_fmt(c['tolerance'])}"
        if c.get("detail"):
            line += f"  ({c['detail']})"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args, **extra) -> dict:
    cfg = dict(command=args.command, hbar=args.hbar, theta=args.theta, mu=args.mu, nu=args.nu,
               cutoff=_cutoff(args), buffer=args.buffer, seed=args.seed)
    cfg.update(extra)
    return cfg


def _solver_cfg(args) -> SupSolverConfig:
    return SupSolverConfig(cutoff=_cutoff(args), buffer=args.buffer, seed=args.seed)


def cmd_distance(args) -> int:
    params = _params(args)
    cfg = _solver_cfg(args) if args.verify else None
    row = _row(params, args.source, args.target, args.verify, cfg)
    _emit(args, render(args.format, _config_dict(args, theta=params.theta), [row]))
    return 0


def cmd_verify(args) -> int:
    if args.mu is not None or args.theta is not None:
        thetas = (_params(args).theta,)
    else:
        thetas = tuple(th * args.hbar for th in DEFAULT_THETAS)
    cfg = VerifyConfig(hbar=args.hbar, thetas=thetas, cutoff=_cutoff(args), buffer=args.buffer,
                       max_label=args.max_label, seed=args.seed)
    for th in thetas:
        make_params(args.hbar, th)  # surface a singular regime before any work
    checks, rows = run_checks(cfg)
    notes = []
    if any(th == 0 for th in thetas):
        notes.append("mode: Moyal limit (theta = 0) included" if len(thetas) > 1
                     else "mode: Moyal limit (theta = 0)")
    failed = [c.name for c in checks if not c.passed]
    notes.append(f"{len(checks) - len(failed)} of {len(checks)} checks passed")
    config = _config_dict(args, thetas=list(thetas), max_label=args.max_label)
    _emit(args, render(args.format, config, rows, [c.as_dict() for c in checks], notes))
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return 0


def cmd_sweep(args) -> int:
    if args.steps < 1:
        raise _Usage("--steps must be at least 1")
    if not 0 <= args.theta_min <= args.theta_max:
        raise _Usage("need 0 <= theta-min <= theta-max")
    if args.steps == 1:
        thetas = [args.theta_min]
    else:
        thetas = list(np.linspace(args.theta_min, args.theta_max, args.steps))
    pairs = args.pairs or [(FockLabel(0, 0), FockLabel(1, 0))]
    cfg = _solver_cfg(args) if args.verify else None
    rows, checks = [], []
    for a, b in pairs:
        base = None
        worst = 0.0
        for th in thetas:
            params = _params(args, theta=float(th))
            row = _row(params, a, b, args.verify, cfg)
            rows.append(row)
            if th == 0:
                base = row["closed_form"]
            elif base is not None:
                worst = max(worst, abs(row["closed_form"] - base * params.shortening))
        if base is not None:
            checks.append(dict(name=f"shortening-ratio[{a}->{b}]", passed=worst <= 1e-9,
                               residual=worst, tolerance=1e-9, detail=""))
    config = _config_dict(args, theta_min=args.theta_min, theta_max=args.theta_max, steps=args.steps,
                          pairs=[f"{a}:{b}" for a, b in pairs])
    _emit(args, render(args.format, config, rows, checks))
    return 0 if all(c["passed"] for c in checks) else EXIT_VERIFY


def cmd_export(args) -> int:
    params = _params(args)
    cfg = _solver_cfg(args) if args.verify else None
    rows = [
        _row(params, args.base, FockLabel(k, l), args.verify, cfg)
        for k in range(args.max_label + 1) for l in range(args.max_label + 1)
    ]
    config = _config_dict(args, theta=params.theta, base=str(args.base), max_label=args.max_label)
    _emit(args, render(args.format, config, rows))
    return 0


COMMANDS = {"distance": cmd_distance, "verify": cmd_verify, "sweep": cmd_sweep, "export": cmd_export}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on malformed arguments
    try:
        return COMMANDS[args.command](args)
    except SingularRegime as exc:
        print(f"error: singular regime: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except NotConverged as exc:
        print(f"error: numeric supremum did not converge: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (_Usage, NCPSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
