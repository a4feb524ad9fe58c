"""``d4``: batch front end for the D4 family toolkit.

Exit codes: 0 success, 1 a self-check failed, 2 usage error (including
invalid a, b), 3 domain error, 4 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import platform
import sys
import time
from importlib import metadata
from pathlib import Path

from . import analytic, family, frobenius, lseries, normcond, selftest
from .arith import check_squarefree_int, prime_sieve
from .dihedral import CLASSES
from .errors import D4Error, DomainError, InconsistentFrobeniusError, ResourceBudgetError
from .quartic import BiquadraticContext, build_field

SCHEMA = "d4/v1"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def real(text: str) -> int | float:
    """Parse '1e10', '1000' or '2.5'; integral values come back as int."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return int(v) if v.is_integer() else v


def real_list(text: str) -> list:
    return [real(t) for t in text.split(",") if t.strip()]


def int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------- output


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _context(args) -> BiquadraticContext:
    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required")
    try:
        check_squarefree_int(args.a, "a")
        check_squarefree_int(args.b, "b")
        return BiquadraticContext(args.a, args.b)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _field(args):
    ctx = _context(args)
    triple = normcond.phi(ctx.a, ctx.b)
    return build_field(ctx, triple, args.m)


# ---------------------------------------------------------------- subcommands


def cmd_norm_test(args):
    ctx = _context(args)
    crit = normcond.check_condition_1234(ctx.a, ctx.b)
    try:
        triple = normcond.phi(ctx.a, ctx.b).as_dict()
    except normcond.EmptyFamilyError:
        triple = None
    out = {"schema": SCHEMA, "kind": "norm-test", "a": ctx.a, "b": ctx.b, **crit.as_dict()}
    out["triple"] = triple
    out["six_decomposition"] = [
        {"label": f.label, "nonempty": f.nonempty} for f in family.six_decomposition(ctx)
    ]
    return _json_text(out), EXIT_OK


def cmd_enumerate(args):
    ctx = _context(args)
    sl = family.enumerate_family(ctx, X=args.X)
    rows = [(K.m, K.g, K.h, K.n, K.poly[0], K.poly[2], K.disc_bound) for K in sl.members]
    header = ("m", "g", "h", "n", "poly_c0", "poly_c2", "disc_bound")
    return _csv_text(header, rows), EXIT_OK


def cmd_count(args):
    ctx = _context(args)
    rep = family.verify_lower_bound(ctx, args.X_grid)
    if rep.empty:
        raise normcond.EmptyFamilyError(f"condition 1234 fails for ({ctx.a}, {ctx.b})")
    rows = [(r.X, r.m_bound, r.count, repr(r.ratio), repr(rep.limit)) for r in rep.rows]
    return _csv_text(("X", "m_bound", "count", "ratio", "limit"), rows), EXIT_OK


def cmd_frobenius(args):
    K = _field(args)
    table = frobenius.scan_primes(K, args.x, args.threads)
    return _csv_text(frobenius.CSV_COLUMNS, (rec.as_row() for rec in table)), EXIT_OK


def cmd_chebotarev(args):
    K = _field(args)
    return _json_text(lseries.chebotarev_report(K, args.x, args.threads).as_dict()), EXIT_OK


def cmd_zeta_check(args):
    K = _field(args)
    checked, failures = 0, []
    by_class = {c.value: 0 for c in CLASSES}
    for p in prime_sieve(int(args.x))[1:].tolist():
        if not K.is_admissible(p):
            continue
        ef = lseries.euler_factors(K, p)
        checked += 1
        by_class[ef.cls.value] += 1
        if not ef.equal:
            failures.append(p)
    out = {
        "schema": SCHEMA,
        "kind": "zeta-check",
        "field": K.as_dict(),
        "x": args.x,
        "checked": checked,
        "by_class": by_class,
        "all_equal": not failures,
        "failures": failures,
    }
    return _json_text(out), EXIT_OK if not failures else EXIT_CHECK_FAILED


def cmd_rho_coeffs(args):
    K = _field(args)
    return _csv_text(("p", "a_p"), lseries.rho_coefficients(K, args.x, args.threads)), EXIT_OK


def cmd_thresholds(args):
    ctx = _context(args)
    cfg = analytic.AnalyticConfig(args.eps0, args.C0, args.C1, args.C5, args.beta_max)
    rep = analytic.thresholds(cfg, ctx)
    out = rep.as_dict()
    out["a"], out["b"] = ctx.a, ctx.b
    out["log_x_threshold"] = [{"D": D, "log_x": rep.log_x_threshold(D)} for D in args.D]
    out["zero_free_boundary"] = [{"t": t, "sigma": rep.zero_free_boundary(t)} for t in args.t]
    return _json_text(out), EXIT_OK


def cmd_ev(args):
    K = _field(args)
    out = analytic.ev_split_count(K, args.ell, args.eta).as_dict()
    out["field"] = K.as_dict()
    return _json_text(out), EXIT_OK


def cmd_ingest_cl(args):
    records = analytic.ingest_class_groups(args.file, tuple(args.ells))
    out = {"schema": SCHEMA, "kind": "ingest-cl", "file": str(args.file), "records": records}
    return _json_text(out), EXIT_OK


def cmd_selftest(args):
    results = selftest.run_selftest(args.seed)
    out = {"schema": SCHEMA, "kind": "selftest", "checks": results, "passed": all(results.values())}
    return _json_text(out), EXIT_OK if out["passed"] else EXIT_CHECK_FAILED


# ---------------------------------------------------------------- parser


def _add_ab(p, m=False):
    p.add_argument("--a", type=int, help="square-free integer, not 0 or 1")
    p.add_argument("--b", type=int, help="square-free integer, not 0 or 1, distinct from a")
    if m:
        p.add_argument("--m", type=int, default=1, help="family parameter (default 1)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat key=value file; flags take precedence")
    common.add_argument("--out", type=Path, help="write the artifact here instead of stdout")
    common.add_argument("--manifest", type=Path, help="manifest path (default: <out>.manifest.json)")
    common.add_argument("--threads", type=int, help="worker threads (env D4_THREADS)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = argparse.ArgumentParser(prog="d4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=fn)
        return p

    p = add("norm-test", cmd_norm_test, "norm criteria and the minimal generator triple (JSON)")
    _add_ab(p)
    p = add("enumerate", cmd_enumerate, "family members with discriminant bound <= X (CSV)")
    _add_ab(p)
    p.add_argument("--X", type=real, required=True)
    p = add("count", cmd_count, "|T(X)| / X^(1/2) against its limit over a grid of X (CSV)")
    _add_ab(p)
    p.add_argument("--X-grid", dest="X_grid", type=real_list, required=True, help="comma list")
    p = add("frobenius", cmd_frobenius, "Frobenius data for odd p <= x (CSV)")
    _add_ab(p, m=True)
    p.add_argument("--x", type=real, required=True)
    p = add("chebotarev", cmd_chebotarev, "Chebotarev class counts against |C|/8 Li(x) (JSON)")
    _add_ab(p, m=True)
    p.add_argument("--x", type=real, required=True)
    p = add("zeta-check", cmd_zeta_check, "local zeta factorization at admissible p <= x (JSON)")
    _add_ab(p, m=True)
    p.add_argument("--x", type=real, default=10_000)
    p = add("rho-coeffs", cmd_rho_coeffs, "trace of rho(Frob_p) for admissible p <= x (CSV)")
    _add_ab(p, m=True)
    p.add_argument("--x", type=real, required=True)
    p = add("thresholds", cmd_thresholds, "delta, T0 and kappa1..kappa3 (JSON, kappa1 in logs)")
    _add_ab(p)
    p.add_argument("--eps0", type=float, default=0.1)
    p.add_argument("--C0", type=float, default=1.0)
    p.add_argument("--C1", type=float, default=1.0)
    p.add_argument("--C5", type=float, default=1.0)
    p.add_argument("--beta-max", dest="beta_max", type=float, default=0.75)
    p.add_argument("--D", type=real_list, default=[], help="closure discriminants for log x")
    p.add_argument("--t", type=real_list, default=[0, 1, 10, 100], help="heights for the region")
    p = add("ev", cmd_ev, "split primes p <= disc_bound^eta and the torsion exponent (JSON)")
    _add_ab(p, m=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--eta", type=float, required=True)
    p = add("ingest-cl", cmd_ingest_cl, "torsion ratios from an external class-group CSV (JSON)")
    p.add_argument("--file", type=Path, required=True)
    p.add_argument("--ells", type=int_list, default=[1, 2, 3, 4, 5])
    add("selftest", cmd_selftest, "fast invariant checks (JSON)")
    return parser


def read_config(path: Path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    """Install config-file values as subcommand defaults, so explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    try:
        config = read_config(known.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    subparsers = parser._subparsers._group_actions[0].choices
    dests = {a.dest for sp in subparsers.values() for a in sp._actions}
    unknown = sorted(set(config) - dests - {"config", "help"})
    if unknown:
        raise UsageError(f"unknown config keys: {unknown}")
    for sp in subparsers.values():
        mine = {a.dest for a in sp._actions} & set(config)
        # string defaults pass through each option's type converter
        sp.set_defaults(**{k: config[k] for k in mine})
        for action in sp._actions:
            if action.dest in mine:
                action.required = False


def _parse(argv) -> argparse.Namespace:
    parser = build_parser()
    _apply_config(parser, sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = int(os.environ.get("D4_THREADS", 1))
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    return args


def _check_writable(path: Path | None) -> None:
    if path is None:
        return
    parent = path.resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise UsageError(f"cannot write to {path}")


def _versions() -> dict:
    import numpy
    import scipy

    try:
        pkg = metadata.version("d4fields")
    except metadata.PackageNotFoundError:
        pkg = "unknown"
    return {
        "d4fields": pkg,
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
    }


def _inputs(args) -> dict:
    skip = {"func", "config", "out", "manifest"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k not in skip:
            out[k] = str(v) if isinstance(v, Path) else v
    if args.config is not None:
        out["config_file"] = str(args.config)
    return out


def write_manifest(path: Path, args, artifacts: list[Path], elapsed: float, status: int) -> None:
    manifest = {
        "schema": SCHEMA,
        "kind": "manifest",
        "subcommand": args.subcommand,
        "argv": sys.argv[1:],
        "inputs": _inputs(args),
        "versions": _versions(),
        "timings": {"wall_seconds": elapsed},
        "exit_status": status,
        "artifacts": [
            {
                "path": str(p),
                "bytes": p.stat().st_size,
                "sha256": hashlib.sha256(p.read_bytes()).hexdigest(),
            }
            for p in artifacts
        ],
    }
    path.write_text(_json_text(manifest))


def main(argv=None) -> int:
    try:
        args = _parse(argv)
        manifest = args.manifest
        if manifest is None and args.out is not None:
            manifest = args.out.with_name(args.out.name + ".manifest.json")
        _check_writable(args.out)
        _check_writable(manifest)
        start = time.perf_counter()
        text, status = args.func(args)
        elapsed = time.perf_counter() - start
    except UsageError as exc:
        print(f"d4: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except InconsistentFrobeniusError as exc:
        print(f"d4: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except DomainError as exc:
        print(f"d4: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ResourceBudgetError, MemoryError) as exc:
        print(f"d4: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except D4Error as exc:
        print(f"d4: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    artifacts = []
    if args.out is not None:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        artifacts.append(args.out)
    else:
        sys.stdout.write(text)
    if manifest is not None:
        write_manifest(manifest, args, artifacts, elapsed, status)
    return status


if __name__ == "__main__":
    sys.exit(main())
