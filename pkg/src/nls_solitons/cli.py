"""Command-line front end.

Subcommands: solve, sweep, ep-curve, ansatz, regularize, check.
Exit codes: 0 on certified success, 1 on numeric failure, 2 on usage error.
Flags override an optional flat key=value config file (--config).  Worker
pool size for sweeps comes from NLS_SOLITON_THREADS.
"""

import argparse
import json
import sys
from pathlib import Path

from . import checks, families, fieldio
from .ansatz import make_wr
from .errors import ParameterError, SolitonError
from .functionals import SOUND_SPEED, evaluate
from .grid import Grid
from .minimizer import MinimizeConfig, certify, solve
from .nonlinearity import from_config
from .regularize import regularize


def _parse_config_file(path):
    """Flat key = value file; '#' starts a comment; keys use - or _."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line is not key = value: {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def _add_common(p):
    p.add_argument("--N", type=int, default=3, dest="dim_N",
                   help="ambient dimension (default 3)")
    p.add_argument("--L1", type=float, default=20.0,
                   help="half-length of the box in x1 (default 20)")
    p.add_argument("--L2", type=float, default=20.0,
                   help="transverse extent (default 20)")
    p.add_argument("--n1", type=int, default=256,
                   help="nodes along x1 (default 256)")
    p.add_argument("--n2", type=int, default=128,
                   help="radial nodes (default 128)")
    p.add_argument("--nonlinearity", choices=("gp", "cubic-quintic"),
                   default="gp", help="nonlinear term (default gp)")
    p.add_argument("--c1", type=float, default=1.0,
                   help="cubic-quintic parameter c1 (default 1.0)")
    p.add_argument("--output", type=str, default="out",
                   help="output directory (default ./out)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized suites (default 0)")
    p.add_argument("--config", type=str, default=None,
                   help="flat key=value config file; flags override it")


def _add_solver_knobs(p):
    p.add_argument("--max-iters", type=int, default=400_000)
    p.add_argument("--step", type=float, default=None,
                   help="initial gradient step (default 0.125 min(h)^2)")
    p.add_argument("--tol-grad", type=float, default=0.0,
                   help="absolute projected-gradient stop (0 = use pde-target)")
    p.add_argument("--pde-target", type=float, default=5e-4,
                   help="certified PDE-residual stop (default 5e-4)")
    p.add_argument("--restore-every", type=int, default=10,
                   help="constraint restoration cadence (default 10)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="nls-solitons",
        description="Traveling-wave solitons of NLS equations with nonvanishing "
                    "boundary conditions, by constrained minimization. "
                    "Physical defaults: N=3, GP nonlinearity, grid 256x128, "
                    "L1=L2=20 healing lengths.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one constrained solve (mode A or B)")
    p.add_argument("--mode", choices=("A", "B"), required=True,
                   help="A: min T at J=j (N>=4); B: min E at P=q")
    p.add_argument("--j", type=float, default=None, help="constraint value j > 0")
    p.add_argument("--q", type=float, default=None, help="constraint value q < 0")
    p.add_argument("--nu", type=float, default=None,
                   help="speed in (0, sqrt(2)) (mode A)")
    _add_solver_knobs(p)
    _add_common(p)

    p = sub.add_parser("sweep", help="fixed-J sweep: T_min curve and S0")
    p.add_argument("--mode", choices=("A",), default="A")
    p.add_argument("--j", type=str, required=True,
                   help="comma-separated j values, e.g. 0.5,1,2,4")
    p.add_argument("--nu", type=float, required=True)
    _add_solver_knobs(p)
    _add_common(p)

    p = sub.add_parser("ep-curve", help="fixed-P sweep: energy-momentum branch")
    p.add_argument("--q", type=str, required=True,
                   help="comma-separated negative momenta, e.g. -20,-30,-45")
    _add_solver_knobs(p)
    _add_common(p)

    p = sub.add_parser("ansatz", help="emit the ring field w_r and its report")
    p.add_argument("--r", type=float, required=True, help="ring radius >= 2")
    p.add_argument("--nu", type=float, default=0.5,
                   help="speed used in the J entry of the report")
    _add_common(p)

    p = sub.add_parser("regularize", help="smooth a field at scale h")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--input", type=str, required=True,
                   help="field header (.json) to smooth")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_common(p)

    p = sub.add_parser("check", help="run the invariant self-check suites")
    p.add_argument("--all", action="store_true", help="run every suite")
    p.add_argument("--suite", action="append", default=None,
                   help=f"suite name(s): {', '.join(checks.SUITES)}")
    _add_common(p)

    return ap


def _coerce(raw):
    for conv in (int, float):
        try:
            return conv(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    return raw


def _apply_config_file(args, argv):
    """Fill args from the config file; explicit flags keep precedence."""
    if getattr(args, "config", None) is None:
        return args
    file_vals = _parse_config_file(args.config)
    passed = {a[2:].split("=")[0].replace("-", "_")
              for a in argv if a.startswith("--")}
    for key, raw in file_vals.items():
        dest = "dim_N" if key.lower() in ("n", "dim_n") else key
        if not hasattr(args, dest) or dest in passed or key in passed:
            continue
        setattr(args, dest, _coerce(raw))
    return args


def _grid(args):
    return Grid(args.dim_N, args.L1, args.L2, args.n1, args.n2)


def _nl(args):
    params = (args.c1,) if args.nonlinearity == "cubic-quintic" else ()
    return from_config(args.nonlinearity, params)


def _validate_solve(args):
    if args.mode == "A":
        if args.dim_N < 4:
            raise ParameterError("mode A requires N >= 4")
        if args.nu is None:
            raise ParameterError("mode A requires --nu")
        if not (0.0 < args.nu < SOUND_SPEED):
            raise ParameterError(
                f"mode A requires 0 < nu < sqrt(2) = {SOUND_SPEED:.6f} "
                f"(nonexistence for supersonic velocities), got {args.nu}")
        if args.j is None or args.j <= 0:
            raise ParameterError("mode A requires --j > 0")
        return args.j
    if args.q is None or args.q >= 0:
        raise ParameterError("mode B requires --q < 0")
    return args.q


def _cfg_from_args(args, mode, value):
    return MinimizeConfig(
        mode=mode, constraint_value=value,
        nu=args.nu if mode == "A" else None,
        max_iters=args.max_iters, step=args.step, tol_grad=args.tol_grad,
        pde_target=args.pde_target, restore_every=args.restore_every)


def _print_record(rec):
    rep = rec.report
    print(f"family={rec.family} nu={rec.nu:.6g} lambda0={rec.lambda0:.6g} "
          f"multiplier={rec.multiplier:.6g} iterations={rec.iterations}")
    print(f"E={rep.e:.6g} P={rep.p:.6g} T={rep.t:.6g} J={rep.j:.6g} "
          f"S={rep.s:.6g} Poh={rep.poh:.3e}")
    print(f"residual_pde={rec.residual_pde:.3e} residual_poh={rec.residual_poh:.3e} "
          f"flags={list(rec.flags)}")


def _cmd_solve(args):
    value = _validate_solve(args)
    grid = _grid(args)
    nl = _nl(args)
    cfg = _cfg_from_args(args, args.mode, value)
    rec = solve(cfg, nl, grid)
    cert = certify(rec, nl)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    fieldio.save_field(rec.field, out / "solution")
    key = fieldio.record_key(rec.family, value, cfg.nu, grid, nl)
    payload = fieldio.record_to_dict(rec, key=key, field_file="solution.json")
    payload["certification"] = cert.as_dict()
    (out / "record.json").write_text(fieldio.dumps(payload) + "\n")
    _print_record(rec)
    for c in cert.checks:
        print(f"  certify {c.name}: {'PASS' if c.passed else 'FAIL'} "
              f"(residual {c.residual:.3e}, tol {c.tol:.3e})")
    ok = cert.ok and rec.converged and not rec.flags
    print("certified" if ok else "NOT certified")
    return 0 if ok else 1


def _cmd_sweep(args):
    values = [float(s) for s in args.j.split(",") if s.strip()]
    if args.dim_N < 4:
        raise ParameterError("mode A requires N >= 4")
    grid = _grid(args)
    nl = _nl(args)
    cfg = _cfg_from_args(args, "A", max(values))
    res = families.sweep_tmin(values, args.nu, nl, grid, cfg_template=cfg,
                              out_dir=args.output)
    coef, p = res.t_min_fit
    print(f"T_min(j) fit: {coef:.6g} * j^{p:.6g}")
    print(f"S0 estimate {res.s0_estimate:.6g} at j* = {res.j_star:.6g}; "
          f"mean record action {res.s0_from_actions:.6g}")
    rep = families.verify_section8(res, args.dim_N)
    for c in rep.checks:
        print(f"  {c.name}: {'PASS' if c.passed else 'FAIL'} "
              f"({c.lhs:.6g} vs {c.rhs:.6g})")
    if res.failed:
        for value, msg in res.failed:
            print(f"  FAILED solve at j={value}: {msg}")
    return 0 if rep.ok and not res.failed else 1


def _cmd_ep_curve(args):
    values = [float(s) for s in args.q.split(",") if s.strip()]
    grid = _grid(args)
    nl = _nl(args)
    cfg = _cfg_from_args(args, "B", min(values))
    res = families.ep_curve(values, nl, grid, cfg_template=cfg,
                            out_dir=args.output)
    for q, rec in zip(res.axis, res.records):
        if rec is None:
            print(f"q={q:g}: FAILED")
            continue
        print(f"q={q:g}: E={rec.report.e:.6g} |P|={abs(rec.report.p):.6g} "
              f"nu={rec.nu:.6g} residual={rec.residual_pde:.3e} "
              f"flags={list(rec.flags)}")
    ok = res.branch_ok() and not res.failed
    print("branch OK" if ok else "branch NOT OK")
    return 0 if ok else 1


def _cmd_ansatz(args):
    grid = _grid(args)
    nl = _nl(args)
    w = make_wr(grid, args.r)
    rep = evaluate(w, nl, args.nu)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    fieldio.save_field(w, out / f"ring_r{args.r:g}")
    (out / f"ring_r{args.r:g}_report.json").write_text(
        fieldio.dumps(rep.to_dict()) + "\n")
    print(fieldio.dumps(rep.to_dict()))
    return 0


def _cmd_regularize(args):
    w = fieldio.load_field(args.input)
    u, rep = regularize(w, args.h, tol_rel=args.tol)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    fieldio.save_field(u, out / "smoothed")
    (out / "regularize_report.json").write_text(
        fieldio.dumps(rep.as_dict()) + "\n")
    print(fieldio.dumps(rep.as_dict()))
    return 0


def _cmd_check(args):
    names = None if args.all or not args.suite else set(args.suite)
    rows = checks.run_suites(names)
    n_bad = 0
    for name, passed, detail in rows:
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        n_bad += 0 if passed else 1
    print(f"{len(rows) - n_bad}/{len(rows)} checks passed")
    return 0 if n_bad == 0 else 1


_COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "ep-curve": _cmd_ep_curve,
    "ansatz": _cmd_ansatz,
    "regularize": _cmd_regularize,
    "check": _cmd_check,
}


def parse_and_dispatch(argv=None):
    ap = build_parser()
    raw_argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = ap.parse_args(raw_argv)
        args = _apply_config_file(args, raw_argv)
        return _COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolitonError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
