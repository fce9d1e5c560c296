"""Command-line front end.

Subcommands:
    pmf       pmf table for a time-changed Poisson process (CSV or JSON)
    simulate  sample paths of a subordinator or time-changed counts (CSV)
    verify    run a verification campaign, one residual report per request
    moments   closed-form IG time-change moments plus a pmf cross-check

Exit codes: 0 success, 2 input error, 3 capability error (method not
available for the spec), 4 verification failure.  The TCPP_SEED environment
variable provides a seed when --seed is absent.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import re
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DomainError,
    NoDensityError,
    RejectionBudgetError,
    UnknownEquationError,
)
from .subordinators.densities import density_for_spec
from .subordinators.sampling import rng_stream, sample_path
from .subordinators.spec import InverseGaussian, SubordinatorSpec, spec_from_json
from .timechange import (
    PmfTable,
    _auto_kmax,
    ig_moment_table,
    mixture_rule,
    moments_ig,
    pmf_bessel_ig,
    pmf_monte_carlo,
    pmf_table,
)
from .verify.registry import REGISTRY, check_equation
from .verify.report import GridSpec

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAPABILITY = 3
EXIT_VERIFY = 4


from dataclasses import dataclass, field


@dataclass
class CampaignConfig:
    """A parsed verification campaign: requests plus run-wide settings."""

    requests: list
    out_dir: str
    seed: int = 0
    tolerances: dict = field(default_factory=dict)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _load_spec(text: str) -> SubordinatorSpec:
    path = Path(text)
    if path.exists() and path.is_file():
        text = path.read_text()
    return spec_from_json(text)


def _default_seed(value) -> int:
    if value is not None:
        return int(value)
    return int(os.environ.get("TCPP_SEED", "0"))


def _write_table(table: PmfTable, out: str):
    out_path = Path(out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if out_path.suffix.lower() == ".json":
        out_path.write_text(table.to_json() + "\n")
    else:
        with out_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            for row in table.csv_rows():
                writer.writerow(row)


def cmd_pmf(args) -> int:
    try:
        spec = _load_spec(args.spec)
    except DomainError as exc:
        print(f"error: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INPUT
    lam, t = args.lam, args.t
    if lam is None or t is None or lam <= 0 or t <= 0:
        print("error: need --lambda > 0 and --t > 0", file=sys.stderr)
        return EXIT_INPUT
    method = args.method
    is_bessel_capable = isinstance(spec, InverseGaussian) and spec.gamma > 0
    has_density = density_for_spec(spec) is not None
    if method == "auto":
        method = "bessel" if is_bessel_capable else ("quadrature" if has_density else "mc")
    try:
        if method == "bessel":
            if not is_bessel_capable:
                print(
                    "error: Bessel closed form needs an IG spec with gamma > 0; "
                    "use --method quadrature",
                    file=sys.stderr,
                )
                return EXIT_CAPABILITY
            kmax = args.kmax
            rule = mixture_rule(spec, lam, t, t, kmax if kmax is not None else 64)
            if kmax is None:
                kmax = _auto_kmax(rule, t)
            values = np.array([pmf_bessel_ig(k, t, lam, spec.delta, spec.gamma)
                               for k in range(kmax + 1)])
            table = PmfTable(spec=spec, lam=lam, t=t, kmax=kmax, values=values,
                             tail_bound=max(0.0, 1.0 - float(values.sum())),
                             method="bessel")
        elif method == "quadrature":
            if not has_density:
                print(f"error: {spec.label()} has no density evaluator; use --method mc",
                      file=sys.stderr)
                return EXIT_CAPABILITY
            table = pmf_table(t, lam, spec, kmax=args.kmax)
        elif method == "mc":
            count = args.count if args.count is not None else 100000
            table = pmf_monte_carlo(t, lam, spec, count, _default_seed(args.seed),
                                    kmax=args.kmax)
        else:  # pragma: no cover - argparse restricts choices
            return EXIT_INPUT
    except (RejectionBudgetError, NoDensityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_table(table, args.out)
    print(f"wrote {args.out}: kmax={table.kmax} sum+tail={1.0 + table.normalization_defect:.12f}")
    return EXIT_OK


def _parse_t_grid(text: str) -> np.ndarray:
    if ":" in text:
        start, stop, num = text.split(":")
        return np.linspace(float(start), float(stop), int(num))
    return np.array([float(v) for v in text.split(",")])


def cmd_simulate(args) -> int:
    try:
        spec = _load_spec(args.spec)
        t_grid = _parse_t_grid(args.t_grid)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.paths < 1:
        print("error: --paths must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    seed = _default_seed(args.seed)
    try:
        values = sample_path(spec, t_grid, args.paths, seed, rtol=args.rtol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.lam is not None:
        # time-changed Poisson counts: accumulate Poisson increments over the
        # nondecreasing clock increments so each row is a genuine count path
        rng = rng_stream(seed, 1)
        inc = np.diff(np.concatenate([np.zeros((args.paths, 1)), values], axis=1), axis=1)
        values = np.cumsum(rng.poisson(args.lam * inc), axis=1).astype(float)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path"] + [_fmt(t) for t in t_grid])
        for i in range(args.paths):
            writer.writerow([str(i)] + [_fmt(v) for v in values[i]])
    print(f"wrote {args.out}: {args.paths} paths x {t_grid.size} times")
    return EXIT_OK


def _load_campaign(path: str | None, out_dir: str) -> CampaignConfig:
    if path is None:
        text = resources.files("tcpp.data").joinpath("default_campaign.json").read_text()
    else:
        text = Path(path).read_text()
    cfg = json.loads(text)
    requests = cfg["requests"] if isinstance(cfg, dict) else cfg
    if not isinstance(requests, list) or not requests:
        raise DomainError("campaign config must hold a nonempty request list")
    for req in requests:
        eq = req.get("equation_id")
        if eq not in REGISTRY:
            raise UnknownEquationError(f"unknown equation_id '{eq}' in campaign")
        if "grid" in req:
            GridSpec(**req["grid"])  # validate early: no partial runs on bad input
    seed = cfg.get("seed", 0) if isinstance(cfg, dict) else 0
    tolerances = cfg.get("tolerances", {}) if isinstance(cfg, dict) else {}
    return CampaignConfig(requests=requests, out_dir=out_dir, seed=seed,
                          tolerances=tolerances)


def _run_request(req: dict):
    grid = GridSpec(**req["grid"]) if "grid" in req else None
    return check_equation(
        req["equation_id"],
        params=req.get("params"),
        grid=grid,
        k_range=req.get("k_range"),
    )


def cmd_verify(args) -> int:
    try:
        campaign = _load_campaign(args.config, args.out_dir)
    except (DomainError, UnknownEquationError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: invalid campaign config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    requests = campaign.requests
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = [None] * len(requests)
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        futures = {pool.submit(_run_request, req): i for i, req in enumerate(requests)}
        for fut in concurrent.futures.as_completed(futures):
            reports[futures[fut]] = fut.result()
    for report in reports:
        fname = re.sub(r"[^A-Za-z0-9._-]", "_", report.equation_id) + ".json"
        (out_dir / fname).write_text(report.to_json() + "\n")
    with (out_dir / "summary.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["equation_id", "finest_residual", "order", "pass"])
        for report in reports:
            order = "" if report.estimated_order is None else _fmt(report.estimated_order)
            writer.writerow([report.equation_id, _fmt(report.finest_residual),
                             order, str(bool(report.passed)).lower()])
    n_pass = sum(1 for r in reports if r.passed)
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        extra = "floor-limited" if report.floor_limited else (
            f"order={report.estimated_order:.2f}" if report.estimated_order is not None else ""
        )
        print(f"{report.equation_id:22s} {status}  finest={report.finest_residual:.3e}  {extra}")
    print(f"{n_pass}/{len(reports)} equations pass; reports in {out_dir}")
    return EXIT_OK if n_pass == len(reports) else EXIT_VERIFY


def cmd_moments(args) -> int:
    if args.gamma is None or args.gamma <= 0:
        print("error: moments need gamma > 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        mean, var = moments_ig(args.t, args.lam, args.delta, args.gamma)
        table = ig_moment_table(args.t, args.lam, args.delta, args.gamma)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    ks = np.arange(table.kmax + 1, dtype=float)
    m1 = float(np.sum(ks * table.values))
    m2 = float(np.sum(ks * ks * table.values))
    check = max(abs(m1 - mean), abs(m2 - m1 * m1 - var))
    payload = {"mean": mean, "variance": var, "pmf_check": check}
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcpp",
        description="Time-changed Poisson processes: pmf tables, path simulation, "
                    "and numerical certification of the governing equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pmf", help="pmf table of N(X(t))")
    p.add_argument("--spec", required=True, help="subordinator spec JSON (inline or file path)")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--method", choices=["auto", "bessel", "quadrature", "mc"], default="auto")
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--count", type=int, default=None, help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output file (.csv or .json)")
    p.set_defaults(fn=cmd_pmf)

    p = sub.add_parser("simulate", help="sample paths on a time grid")
    p.add_argument("--spec", required=True)
    p.add_argument("--t-grid", dest="t_grid", required=True,
                   help="'start:stop:num' or comma-separated times")
    p.add_argument("--paths", type=int, default=8)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="if given, emit time-changed Poisson count paths")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rtol", type=float, default=1e-4,
                   help="bracketing tolerance for inverse-process paths")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run a residual-verification campaign")
    p.add_argument("--config", default=None,
                   help="campaign JSON (default: the packaged standard campaign)")
    p.add_argument("--out-dir", dest="out_dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("moments", help="closed-form IG time-change moments")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_moments)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
