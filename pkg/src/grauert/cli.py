"""Command line front end.

Exit codes: 0 success, 1 a claim failed, 2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .claims import RunConfig, run_claims
from .curvature import extremal_hsc, kappa_closed_on_S, kappa_fd, leaf_density, leaf_point
from .errors import DomainError, NumericError, SearchError
from .geometry import DiagonalField, GrauertPunctured, as_point, check_domain, sample_S, sample_S_w
from .profiles import kappa_profile_ball, kappa_profile_cn, kappa_profile_cstar
from .radial import DEFAULT_TOL, eval_eta, eval_u, eval_v

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

PROFILE_FIELDS = ["t", "u", "v", "eta", "f_cn", "f_cstar", "f_ball"]
SCAN_FIELDS = ["t", "kappa_leaf", "k_minus", "k_plus"]
CLAIM_FIELDS = ["id", "status", "threshold", "description", "computed"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def parse_complex_list(text: str) -> tuple:
    """``"0.1:0.2,0.3"`` or ``"0.1+0.2j,0.3"`` -> tuple of complex."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if ":" in item:
            re_, im = item.split(":", 1)
            out.append(complex(float(re_), float(im)))
        else:
            out.append(complex(item.replace(" ", "")))
    return tuple(out)


def parse_float_list(text: str) -> tuple:
    return tuple(float(s) for s in text.split(",") if s.strip())


# -- commands ------------------------------------------------------------------

def cmd_profiles(cfg: RunConfig) -> list[dict]:
    r2 = cfg.slice_kind().r2
    rows = []
    for t in np.geomspace(cfg.t_min, cfg.t_max, cfg.steps):
        t = float(t)
        (u,) = eval_u(t)
        rows.append({
            "t": t,
            "u": u,
            "v": eval_v(t, cfg.tol),
            "eta": eval_eta(t, cfg.tol),
            "f_cn": kappa_profile_cn(t, cfg.tol),
            "f_cstar": kappa_profile_cstar(t).f,
            "f_ball": kappa_profile_ball(cfg.N, r2, t, cfg.tol) if t < r2 else None,
        })
    return rows


def default_radius_list():
    return (1e-4, 1e-2, 1.0, 15.0, 100.0)


def cmd_scan(cfg: RunConfig, samples: int = 256, refine_iters: int = 50) -> list[dict]:
    if not cfg.radius_list:
        raise DomainError("radius list is empty")
    kind = GrauertPunctured(cfg.n)
    F = DiagonalField(cfg.n, cfg.alpha)
    rows = []
    for i, t in enumerate(cfg.radius_list):
        z = sample_S(F, t, cfg.seed + i)
        est = extremal_hsc(kind, z, samples, refine_iters, seed=cfg.seed + i, tol=cfg.tol)
        rows.append({"t": t, "kappa_leaf": kappa_closed_on_S(kind, F, z, cfg.tol),
                     "k_minus": est.k_minus, "k_plus": est.k_plus})
    return rows


def cmd_flow(cfg: RunConfig, metric: str = "grauert", base=None, imaginary: bool = False,
             radius: float = 0.5) -> list[dict]:
    """Trace along real (or imaginary) times ``T`` in ``[t_min, t_max]``."""
    F = DiagonalField(cfg.n, cfg.alpha)
    if metric == "grauert":
        kind = GrauertPunctured(cfg.n)
        z = as_point(base) if base is not None else sample_S(F, radius, cfg.seed)
    else:
        kind = cfg.slice_kind()
        if base is not None:
            z = as_point(base)
            if z.size == kind.n:
                z = kind.embed(z)
        else:
            z = sample_S_w(kind, F, radius * kind.r2, cfg.seed)
    z = check_domain(kind, z)
    rows = []
    for T in np.linspace(cfg.t_min, cfg.t_max, cfg.steps):
        Tc = complex(0.0, T) if imaginary else complex(T, 0.0)
        row = {"T_re": Tc.real, "T_im": Tc.imag}
        try:
            Z, _ = leaf_point(kind, F, z, Tc)
        except DomainError:
            row["status"] = "left-domain"
            rows.append(row)
            break
        for j, c in enumerate(Z):
            row[f"Z{j + 1}_re"] = c.real
            row[f"Z{j + 1}_im"] = c.imag
        row["h"] = leaf_density(kind, F, z, Tc, cfg.tol)
        try:
            row["kappa_fd"] = kappa_fd(kind, F, Z, tol=cfg.tol)
            row["status"] = "ok"
        except DomainError:
            row["kappa_fd"] = None
            row["status"] = "stencil-left-domain"
        rows.append(row)
    return rows


def flow_fields(rows: list[dict], dim: int) -> list[str]:
    coords = [f"Z{j + 1}_{p}" for j in range(dim) for p in ("re", "im")]
    return ["T_re", "T_im", *coords, "h", "kappa_fd", "status"]


# -- output -------------------------------------------------------------------------

def write_csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r.get(f)) for f in fields])
    return buf.getvalue()


def write_json(cfg: RunConfig, key: str, items: list[dict]) -> str:
    def clean(v):
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, str) or v is None:
            return v
        return _json_num(v)

    doc = {"version": __version__, "config": cfg.as_dict(), key: [clean(i) for i in items]}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="number of projected coordinates")
    common.add_argument("--N", type=int, default=2, help="ambient dimension of the ball")
    common.add_argument("--alpha", type=float, default=-1.0, help="field exponent (< 0)")
    common.add_argument("--w", type=parse_complex_list, default=(),
                        help="slice point, comma separated; items 're:im' or Python complex")
    common.add_argument("--steps", type=int, default=None)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="quadrature tolerance")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="grauert", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profiles", parents=[common], help="table of radial profiles")
    sp.add_argument("--t-min", type=float, default=1e-6)
    sp.add_argument("--t-max", type=float, default=1e3)

    sub.add_parser("claims", parents=[common], help="check the claim registry")

    ss = sub.add_parser("scan", parents=[common], help="extremal HSC per radius")
    ss.add_argument("--radius-list", type=parse_float_list, default=default_radius_list())
    ss.add_argument("--samples", type=int, default=256)
    ss.add_argument("--refine-iters", type=int, default=50)

    sf = sub.add_parser("flow", parents=[common], help="trace along one leaf")
    sf.add_argument("--t-min", type=float, default=-1.0, help="first time on the T grid")
    sf.add_argument("--t-max", type=float, default=1.0, help="last time on the T grid")
    sf.add_argument("--metric", choices=("grauert", "ball"), default="grauert")
    sf.add_argument("--base", type=parse_complex_list, default=None, help="base point")
    sf.add_argument("--radius", type=float, default=0.5,
                    help="|z|^2 of the sampled base point (fraction of r^2 for the ball)")
    sf.add_argument("--imaginary", action="store_true", help="move along imaginary times")
    return p


def _config(args) -> RunConfig:
    steps = args.steps if args.steps is not None else {"flow": 21}.get(args.command, 64)
    cfg = RunConfig(n=args.n, N=args.N, alpha=args.alpha, w=args.w, steps=steps,
                    t_min=getattr(args, "t_min", 1e-6), t_max=getattr(args, "t_max", 1e3),
                    radius_list=tuple(getattr(args, "radius_list", ())), seed=args.seed,
                    tol=args.tol, format=args.format)
    # flow reuses the range flags for complex time, which may be negative
    return cfg.validate(positive_range=args.command != "flow")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _config(args)
    except DomainError as exc:
        print(f"grauert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    code = EXIT_OK
    try:
        if args.command == "profiles":
            rows, fields, key = cmd_profiles(cfg), PROFILE_FIELDS, "rows"
        elif args.command == "scan":
            rows, fields, key = cmd_scan(cfg, args.samples, args.refine_iters), SCAN_FIELDS, "rows"
        elif args.command == "flow":
            rows = cmd_flow(cfg, args.metric, args.base, args.imaginary, args.radius)
            dim = args.n if args.metric == "grauert" else args.N
            fields, key = flow_fields(rows, dim), "rows"
            if rows and rows[-1].get("status") == "left-domain":
                print("grauert: warning: leaf left the domain; trace truncated", file=sys.stderr)
        else:
            results = run_claims(cfg)
            rows = [{"id": r.id, "status": r.status, "threshold": r.threshold,
                     "description": r.description, "computed": r.computed} for r in results]
            fields, key = CLAIM_FIELDS, "claims"
            failed = [r.id for r in results if not r.passed]
            if failed:
                print("grauert: failing claims: " + ", ".join(failed), file=sys.stderr)
                code = EXIT_CLAIM
    except DomainError as exc:
        print(f"grauert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, SearchError, ArithmeticError) as exc:
        print(f"grauert: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if cfg.format == "json":
        text = write_json(cfg, key, rows)
    else:
        if key == "claims":
            rows = [dict(r, computed=json.dumps({k: _json_num(v) for k, v in r["computed"].items()}))
                    for r in rows]
        text = write_csv(rows, fields)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
