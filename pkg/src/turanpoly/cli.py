"""Command-line front end.

Exit codes: 0 success, 1 a check failed (JSON detail on stderr), 2 usage error.
The main artifact (CSV or JSON, per ``--format``) goes to ``--output`` or,
when no output path is given, to stdout.  With ``--output`` a JSON summary is
printed to stdout instead.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from gmpy2 import mpq

from . import arithfn, classical, favard, polycore, turan, zeros
from .errors import TuranPolyError
from .scalar import DEFAULT_PRECISION, MIN_PRECISION, as_scalar, is_exact, format_scalar, parse_rational, precision

SUBCOMMANDS = ("gen", "favard", "moments", "verify", "turan", "bounds", "zeros", "trajectory")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    h: list = field(default_factory=list)
    g: str = "id"
    n: int | None = None
    n_max: int | None = None
    s_grid: str | None = None
    x_grid: str | None = None
    precision: int = DEFAULT_PRECISION
    tol: str | None = None
    output: str | None = None
    format: str = "json"
    extra: dict = field(default_factory=dict)


def parse_grid(text: str, lower=None, upper=None) -> list[mpq]:
    """``a:b:step`` (inclusive) or a comma list of rationals."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [parse_rational(p) for p in text.split(":")]
            if len(parts) != 3:
                raise UsageError(f"grid {text!r} must be a:b:step")
            a, b, step = parts
            if step <= 0 or b < a:
                raise UsageError(f"grid {text!r} needs step > 0 and a <= b")
            count = int((b - a) / step + mpq(1, 2))
            if count > 10**6:
                raise UsageError(f"grid {text!r} has too many points")
            pts = [a + k * step for k in range(count + 1)]
            pts = [p for p in pts if p <= b]
        else:
            pts = sorted({parse_rational(p) for p in text.split(",") if p.strip()})
    except ValueError as exc:
        raise UsageError(f"malformed grid {text!r}: {exc}") from exc
    if not pts:
        raise UsageError(f"grid {text!r} is empty")
    if lower is not None and pts[0] < lower or upper is not None and pts[-1] > upper:
        raise UsageError(f"grid {text!r} leaves [{lower}, {upper}]")
    return pts


def _specs(cfg: RunConfig, default=("id",)) -> list[arithfn.ArithmeticFunctionSpec]:
    names = list(cfg.h)
    if cfg.s_grid:
        names += [f"power:{format_scalar(s)}" for s in parse_grid(cfg.s_grid, 0)]
    names = names or list(default)
    try:
        return [arithfn.parse_spec(t) for t in names]
    except arithfn.SpecError as exc:
        raise UsageError(str(exc)) from exc


def _x_grid(cfg: RunConfig):
    return parse_grid(cfg.x_grid, lower=None) if cfg.x_grid else turan.default_x_grid()


def _require(value, name):
    if value is None:
        raise UsageError(f"--{name} is required for this subcommand")
    return value


def _csv_rows(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_scalar(v) if not isinstance(v, (str, int)) else str(v) for v in row))
    return "\n".join(lines) + "\n"


# --- subcommands: each returns (artifact_text, summary_dict, ok) -------------


def cmd_gen(cfg: RunConfig):
    n = _require(cfg.n, "n")
    g = arithfn.parse_spec(cfg.g)
    method = cfg.extra.get("method", "three-term")
    families, comparisons = [], []
    for h in _specs(cfg):
        fam = polycore.generate(g, h, n, method if g.kind is arithfn.Kind.IDENTITY else "convolution")
        families.append(fam)
        if cfg.extra.get("check_generators"):
            polycore.require_identity_g(g)
            conv = polycore.generate_convolution(g, h, n)
            three = polycore.generate_three_term(h, n)
            rel = as_scalar(cfg.extra.get("rel") or "1e-20")
            ok, first = polycore.families_agree(conv, three, rel)
            comparisons.append({"h": str(h), "agree": ok, "first_mismatch": first, "rel": format_scalar(rel)})
    ok = all(c["agree"] for c in comparisons)
    summary = {"family_count": len(families), "generator_comparison": comparisons, "passed": ok}
    if cfg.format == "csv":
        if len(families) == 1:
            text = families[0].to_csv()
        else:
            rows = ["h,n,k,coefficient"]
            for f in families:
                rows += [f"{f.h},{line}" for line in f.to_csv().splitlines()[1:]]
            text = "\n".join(rows) + "\n"
    else:
        text = _json({"families": [f.to_dict() for f in families], **summary}, cfg)
    return text, summary, ok


def cmd_favard(cfg: RunConfig):
    n = _require(cfg.n, "n")
    reports, ok = [], True
    for h in _specs(cfg):
        rep = favard.favard_report(h, n)
        rec = favard.q_recurrence(h, 2 * n)
        if all(is_exact(v) for v in rec.c + rec.lam):
            off, diag = favard.orthogonality_defects(rec, n)
            rep["orthogonality"] = {"checked_up_to": n, "nonzero_off_diagonal": [list(p) for p in off], "vanishing_norms": diag}
            consistent = not off and not diag and rep["verdict"] == rep["hankel_verdict"]
        else:
            consistent = rep["verdict"] == rep["hankel_verdict"] or bool(rep["uncertain"])
        rep["consistent"] = consistent
        ok = ok and consistent
        reports.append(rep)
    doc = {"reports": reports, "passed": ok}
    return _json(doc, cfg), {"passed": ok, "verdicts": {r["h"]: r["verdict"] for r in reports}}, ok


def cmd_moments(cfg: RunConfig):
    n = _require(cfg.n, "n")
    rows = []
    for h in _specs(cfg):
        rec = favard.q_recurrence(h, n)
        mu = favard.moments_from_recurrence(rec, n, as_scalar(cfg.extra.get("mu0") or "1"))
        if cfg.extra.get("affine"):
            try:
                a, b = (parse_rational(t) for t in cfg.extra["affine"].split(","))
            except ValueError as exc:
                raise UsageError(f"--affine expects a,b: {exc}") from exc
            mu = favard.affine_transform_moments(mu, a, b)
        rows += [(str(h), k, m) for k, m in enumerate(mu)]
    if cfg.format == "csv":
        text = _csv_rows(["h", "k", "mu"], rows)
    else:
        text = _json({"moments": [{"h": h, "k": k, "mu": format_scalar(m)} for h, k, m in rows]}, cfg)
    return text, {"passed": True, "count": len(rows)}, True


def cmd_verify(cfg: RunConfig):
    n = cfg.n_max or cfg.n or 20
    report = classical.verify_identities(n)
    doc = report.to_dict()
    doc["passed"] = report.all_hold
    return _json(doc, cfg), {"passed": report.all_hold, "N": n}, report.all_hold


def cmd_turan(cfg: RunConfig):
    n_max = _require(cfg.n_max, "n-max")
    grid = _x_grid(cfg)
    reports = [turan.turan_sweep(h, n_max, grid, cfg.extra.get("negative_x", False)) for h in _specs(cfg)]
    ok = all(r.passed for r in reports)
    summary = {"passed": ok, "reports": [r.to_dict() for r in reports]}
    if cfg.format == "csv":
        rows = [(r.h, n, x, t) for r in reports for n, x, t in r.values]
        text = _csv_rows(["h", "n", "x", "T"], rows)
    else:
        text = _json(summary, cfg)
    return text, summary, ok


def cmd_bounds(cfg: RunConfig):
    n_max = _require(cfg.n_max, "n-max")
    grid = _x_grid(cfg)
    checks = set(cfg.extra.get("checks") or ("monotone", "ratio", "d"))
    reports, rows, ok = [], [], True
    for h in _specs(cfg):
        entry = {"h": str(h)}
        if "monotone" in checks:
            mono = turan.check_v_monotone(h, n_max, grid)
            entry["v_monotone"] = mono.to_dict()
            ok = ok and mono.passed
        if "ratio" in checks:
            ratio = turan.check_ratio_bound(h, n_max, grid)
            entry["ratio_bound"] = ratio.to_dict()
            ok = ok and ratio.passed
            rows += [(str(h), n, x, v2, r, m) for n, x, v2, r, m in ratio.rows]
        if "d" in checks:
            agree = turan.d_sign_agreement(h, n_max)
            bad = [r.n for r in agree if not r.agrees]
            entry["d_criterion"] = {
                "agrees": not bad,
                "disagreements": bad,
                "signs": [r.d_sign for r in agree],
                "values": [format_scalar(r.d_value) for r in agree],
            }
            ok = ok and not bad
        if "lemma" in checks:
            lem = arithfn.lemma_side_conditions(h, n_max)
            entry["lemma_side_conditions"] = lem.to_dict()
            ok = ok and lem.all_hold
        reports.append(entry)
    summary = {"passed": ok, "reports": reports}
    if cfg.format == "csv":
        text = _csv_rows(["h", "n", "x", "v2", "ratio", "margin"], rows)
    else:
        text = _json(summary, cfg)
    return text, summary, ok


def cmd_zeros(cfg: RunConfig):
    tol = as_scalar(cfg.tol or "1e-12")
    oracle_max = int(cfg.extra.get("oracle_max") or 12)
    if cfg.n_max is None:
        n_lo = n_hi = _require(cfg.n, "n")
    else:
        n_lo, n_hi = 1, cfg.n_max
    reports, rows, ok = [], [], True
    for h in _specs(cfg):
        prev = None
        entry = {"h": str(h), "n_range": [n_lo, n_hi], "nonpositive": True, "simple": True,
                 "interlacing": True, "oracle_max_error": None, "oracle_degrees": 0}
        worst = mpq(0)
        fam = polycore.generate_three_term(h, min(n_hi, oracle_max + 1) + 1)
        for n in range(n_lo, n_hi + 1):
            zs = zeros.zeros_of_P(h, n, tol)
            rows.append((str(h), n, zs))
            if any(z > tol for z in zs):
                entry["nonpositive"] = False
            gap = zeros.min_gap(zs)
            if gap is not None and gap <= 10 * tol:
                entry["simple"] = False
            inner = zs[:-1]
            if prev is not None and not zeros.interlacing_check(prev, inner):
                entry["interlacing"] = False
            prev = inner
            if 2 <= n <= oracle_max + 1:
                oracle = zeros.sturm_roots(favard.q_from_family(h, fam, n - 1), tol)
                err = max((abs(a - b) for a, b in zip(inner, oracle)), default=mpq(0))
                if len(oracle) != len(inner):
                    err = as_scalar(10**9)
                worst = max(worst, err)
                entry["oracle_degrees"] += 1
        entry["oracle_max_error"] = format_scalar(worst)
        entry["oracle_agrees"] = worst <= 10 * tol
        entry["passed"] = all(entry[k] for k in ("nonpositive", "simple", "interlacing", "oracle_agrees"))
        ok = ok and entry["passed"]
        reports.append(entry)
    summary = {"passed": ok, "tol": format_scalar(tol), "reports": reports}
    if cfg.format == "csv":
        text = _csv_rows(["h", "n", "index", "zero"], [(h, n, i, z) for h, n, zs in rows for i, z in enumerate(zs)])
    else:
        text = _json(summary, cfg)
    return text, summary, ok


def cmd_trajectory(cfg: RunConfig):
    n = _require(cfg.n, "n")
    tol = as_scalar(cfg.tol or "1e-12")
    grid = parse_grid(cfg.s_grid or "0:1:1/100", 0, 1)
    traj = zeros.trajectory(n, grid, tol)
    checks = {}
    if grid[0] == 0:
        ref = zeros.chebyshev_zeros_of_P(n)
        checks["chebyshev_endpoint_error"] = max(abs(a - b) for a, b in zip(traj.zeros[0], ref))
    if grid[-1] == 1:
        fam = polycore.generate_three_term(arithfn.IDENTITY, n)
        ref = zeros.sturm_roots(fam[n].div_x(), tol) + [mpq(0)]
        checks["laguerre_endpoint_error"] = max(abs(a - b) for a, b in zip(traj.zeros[-1], ref))
    limit = as_scalar(cfg.extra.get("endpoint_tol") or "1e-10")
    ok = all(v <= limit for v in checks.values())
    summary = {
        "passed": ok,
        "n": n,
        "points": len(grid),
        "endpoint_tol": format_scalar(limit),
        **{k: format_scalar(v) for k, v in checks.items()},
        "max_step": format_scalar(traj.max_step) if traj.max_step is not None else None,
        "continuity_bound": format_scalar(traj.continuity_bound),
        "flags": traj.flags,
    }
    text = traj.to_csv() if cfg.format == "csv" else _json({**summary, "zeros": [[format_scalar(z) for z in zs] for zs in traj.zeros]}, cfg)
    return text, summary, ok


COMMANDS = {
    "gen": cmd_gen,
    "favard": cmd_favard,
    "moments": cmd_moments,
    "verify": cmd_verify,
    "turan": cmd_turan,
    "bounds": cmd_bounds,
    "zeros": cmd_zeros,
    "trajectory": cmd_trajectory,
}

DEFAULT_FORMATS = {"gen": "csv", "moments": "csv", "trajectory": "csv", "zeros": "json"}


def _json(doc: dict, cfg: RunConfig) -> str:
    return json.dumps({"config": asdict(cfg), **doc}, indent=2, sort_keys=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="turanpoly", description="Orthogonal polynomials P_n^{g,h} and Turan inequality checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, n=False, n_max=False):
        p.add_argument("--h", action="append", default=[], metavar="SPEC",
                       help="h spec: power:S, one, id, sigma, altsign, table:PATH (repeatable)")
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="big-float precision in bits")
        p.add_argument("--output", "-o", help="write the artifact here")
        p.add_argument("--format", choices=("csv", "json"))
        if n:
            p.add_argument("--n", type=int)
        if n_max:
            p.add_argument("--n-max", type=int)
        return p

    p = common(sub.add_parser("gen", help="generate P_0..P_n"), n=True)
    p.add_argument("--g", default="id")
    p.add_argument("--method", choices=("three-term", "convolution"), default="three-term")
    p.add_argument("--check-generators", action="store_true", help="compare convolution and three-term output")
    p.add_argument("--rel", help="relative tolerance for float comparison (default 1e-20)")

    common(sub.add_parser("favard", help="Favard classification and Hankel determinants"), n=True)

    p = common(sub.add_parser("moments", help="moment sequence of q_n^h"), n=True)
    p.add_argument("--mu0", default="1")
    p.add_argument("--affine", metavar="A,B", help="transform moments for a^{-n} p_n(a x + b)")

    common(sub.add_parser("verify", help="Chebyshev/Laguerre identity report"), n_max=True)

    p = common(sub.add_parser("turan", help="Turan sweep T_n(x) >= 0"), n_max=True)
    p.add_argument("--s-grid", help="also sweep h = power:s for s in a:b:step")
    p.add_argument("--x-grid")
    p.add_argument("--negative-x", action="store_true", help="exploratory sweep of x < 0 (never fails)")

    p = common(sub.add_parser("bounds", help="v-root monotonicity, ratio bound, D criterion"), n_max=True)
    p.add_argument("--s-grid")
    p.add_argument("--x-grid")
    p.add_argument("--checks", default="monotone,ratio,d", help="comma list of monotone, ratio, d, lemma")

    p = common(sub.add_parser("zeros", help="zeros of P_n with reality/interlacing/oracle checks"), n=True, n_max=True)
    p.add_argument("--s-grid")
    p.add_argument("--tol")
    p.add_argument("--oracle-max", type=int, default=12)

    p = common(sub.add_parser("trajectory", help="zeros of P_n^{id,h_s} across s"), n=True)
    p.add_argument("--s-grid", default="0:1:0.01")
    p.add_argument("--tol")
    p.add_argument("--endpoint-tol", default="1e-10")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = {"subcommand", "h", "g", "n", "n_max", "s_grid", "x_grid", "precision", "tol", "output", "format"}
    extra = {k: v for k, v in sorted(vars(args).items()) if k not in known}
    if "checks" in extra:
        extra["checks"] = sorted(c.strip() for c in extra["checks"].split(",") if c.strip())
        unknown = set(extra["checks"]) - {"monotone", "ratio", "d", "lemma"}
        if unknown:
            raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    cfg = RunConfig(
        subcommand=args.subcommand,
        h=list(args.h),
        g=getattr(args, "g", "id"),
        n=getattr(args, "n", None),
        n_max=getattr(args, "n_max", None),
        s_grid=getattr(args, "s_grid", None),
        x_grid=getattr(args, "x_grid", None),
        precision=args.precision,
        tol=getattr(args, "tol", None),
        output=args.output,
        format=args.format or DEFAULT_FORMATS.get(args.subcommand, "json"),
        extra=extra,
    )
    if cfg.precision < MIN_PRECISION:
        raise UsageError(f"--precision must be at least {MIN_PRECISION}")
    for name in ("n", "n_max"):
        v = getattr(cfg, name)
        if v is not None and v < 0:
            raise UsageError(f"--{name.replace('_', '-')} must be non-negative")
    return cfg


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        with precision(cfg.precision):
            text, summary, ok = COMMANDS[cfg.subcommand](cfg)
    except (UsageError, arithfn.SpecError) as exc:
        print(f"turanpoly: error: {exc}", file=sys.stderr)
        return 2
    except TuranPolyError as exc:
        print(json.dumps({"passed": False, "error": type(exc).__name__, "detail": str(exc)}), file=sys.stderr)
        return 1
    if cfg.output:
        Path(cfg.output).write_text(text)
        sys.stdout.write(_json(summary, cfg))
    else:
        sys.stdout.write(text)
    if not ok:
        sys.stderr.write(json.dumps({"passed": False, "detail": summary}, indent=2) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())
