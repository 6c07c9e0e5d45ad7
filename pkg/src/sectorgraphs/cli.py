"""Command-line front end.

Commands: ``predict``, ``simulate``, ``verify``, ``bound``, ``sweep``.
Exit codes: 0 success / verification PASS, 1 configuration error,
2 verification FAIL, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from .bounds import (
    TruncationBudgetExceeded,
    empirical_tv,
    empirical_tv_bootstrap_se,
    tv_bound,
)
from .config import (
    ConfigError,
    RunConfig,
    apply_overrides,
    load_config,
    parse_alpha,
    resolve_params,
    serialize_config,
    validate_config,
)
from .degree_sets import DegreeSet
from .harness import (
    TrialOptions,
    TrialRecord,
    compare,
    run_trials,
    sweep as run_sweep,
    verify as run_verify,
    write_trials_csv,
)
from .theory import (
    FocusingPrediction,
    TWO_POINT_CONVENTION,
    check_regime,
    poisson_upper_tail,
    predict,
)


def to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out) if cfg.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _persist(cfg: RunConfig, out: Path, payload: dict) -> None:
    (out / "config.txt").write_text(serialize_config(cfg))
    (out / "report.json").write_text(
        json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"
    )


def cmd_predict(cfg: RunConfig) -> int:
    validate_config(cfg)
    params = resolve_params(cfg, cfg.modes()[0])
    pred = predict(params)
    regime = check_regime(params, cfg.epsilon)
    print(
        f"n={params.n} alpha={params.alpha:.9g} r={params.r:.9g} "
        f"v={params.v} q={params.q}"
    )
    print(f"mu={pred.mu:.9g} j={pred.j} k={pred.k} xi(k)={pred.xi_k:.9g} a={pred.a:.9g}")
    print(f"P(max={pred.k - 1})={pred.p_km1:.6f}  P(max={pred.k})={pred.p_k:.6f}")
    print(f"convention: {TWO_POINT_CONVENTION}")
    print(
        f"regime: mu^(1+eps)/ln n={regime.focusing_ratio:.6g} "
        f"mu/n^(1/6)={regime.mu_over_pow:.6g}"
    )
    for w in regime.warnings:
        print(f"warning: {w}")
    if cfg.out:
        _persist(cfg, _out_dir(cfg), {"params": params, "prediction": pred, "regime": regime})
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    validate_config(cfg)
    if cfg.mode == "both":
        raise ConfigError("mode: simulate needs a single mode")
    params = resolve_params(cfg, cfg.mode)
    records = run_trials(params, cfg.trials, cfg.parallelism)
    out = _out_dir(cfg)
    write_trials_csv(records, out / "trials.csv")
    hist_out: dict[int, int] = {}
    hist_in: dict[int, int] = {}
    for rec in records:
        hist_out[rec.max_out] = hist_out.get(rec.max_out, 0) + 1
        hist_in[rec.max_in] = hist_in.get(rec.max_in, 0) + 1
    _persist(
        cfg,
        out,
        {
            "params": params,
            "trials": cfg.trials,
            "max_out_hist": dict(sorted(hist_out.items())),
            "max_in_hist": dict(sorted(hist_in.items())),
        },
    )
    print(f"wrote {out / 'trials.csv'} ({cfg.trials} trials)")
    return 0


def _selftest_records(pred: FocusingPrediction, trials: int) -> list[TrialRecord]:
    """Records drawn exactly from the predicted two-point law (rounded)."""
    n_low = round(trials * pred.p_km1)
    records = []
    for t in range(trials):
        value = pred.k - 1 if t < n_low else pred.k
        records.append(
            TrialRecord(
                trial_index=t,
                seed=0,
                realized_count=0,
                alive_count=0,
                max_out=value,
                max_in=value,
                empty=False,
            )
        )
    return records


def _force_k(pred: FocusingPrediction, params, k: int) -> FocusingPrediction:
    xi = poisson_upper_tail(pred.mu, k)
    a = params.n * (1.0 - params.v) * xi
    p = math.exp(-a)
    return FocusingPrediction(mu=pred.mu, j=pred.j, k=k, xi_k=xi, a=a, p_km1=p, p_k=1.0 - p)


def cmd_verify(cfg: RunConfig, selftest: bool = False, override_k: int | None = None) -> int:
    validate_config(cfg)
    params0 = resolve_params(cfg, cfg.modes()[0])
    pred = predict(params0)
    if override_k is not None:
        pred = _force_k(pred, params0, override_k)
    out = _out_dir(cfg)
    reports = {}
    if selftest:
        records = _selftest_records(pred, cfg.trials)
        reports["selftest"] = compare(records, pred, cfg.slack, params=params0, sides=cfg.sides())
        write_trials_csv(records, out / "trials.csv")
    else:
        single = len(cfg.modes()) == 1
        for mode in cfg.modes():
            params = resolve_params(cfg, mode)
            report, records = run_verify(
                params,
                cfg.trials,
                slack=cfg.slack,
                parallelism=cfg.parallelism,
                sides=cfg.sides(),
                prediction=pred,
            )
            reports[mode] = report
            name = "trials.csv" if single else f"trials_{mode}.csv"
            write_trials_csv(records, out / name)
    _persist(cfg, out, {"prediction": pred, "reports": reports})
    all_pass = all(rep.overall_pass for rep in reports.values())
    for label, rep in reports.items():
        for side, sc in rep.sides.items():
            print(
                f"{label}/{side}: mass(k-1)={sc.mass_km1:.4f} (predicted "
                f"{pred.p_km1:.4f}), two-point={sc.two_point:.4f}, {sc.verdict}"
            )
    print("verdict:", "PASS" if all_pass else "FAIL")
    return 0 if all_pass else 2


def cmd_bound(cfg: RunConfig, with_empirical: bool = False) -> int:
    validate_config(cfg)
    params = resolve_params(cfg, "poisson")
    descriptors = cfg.a_sets or (f"tail:{predict(params).k}",)
    pairs = [(DegreeSet.parse(d), side) for d in descriptors for side in cfg.sides()]
    records = None
    if with_empirical:
        records = run_trials(
            params,
            cfg.trials,
            cfg.parallelism,
            TrialOptions(w_sets=tuple(pairs)),
        )
    rows = []
    for ds, side in pairs:
        rep = tv_bound(
            params,
            ds,
            side,
            outer_samples=cfg.outer_samples,
            area_samples=cfg.area_samples,
            ew_samples=cfg.ew_samples,
            trunc_cap=cfg.trunc_cap,
        )
        row = dataclasses.asdict(rep)
        if records is not None:
            key = f"{ds.descriptor()}|{side}"
            samples = [rec.w_counts[key] for rec in records]
            tv = empirical_tv(samples, rep.ew) if rep.ew > 0 else 0.0
            boot = empirical_tv_bootstrap_se(samples, rep.ew, seed=cfg.seed) if rep.ew > 0 else 0.0
            row["empirical_tv"] = tv
            row["empirical_se"] = boot
            row["dominated"] = bool(tv <= rep.bound + 3.0 * math.hypot(rep.bound_se, boot))
        rows.append(row)
        print(
            f"{side} A={ds.descriptor()}: EW={rep.ew:.4f}±{rep.ew_se:.4f} "
            f"I1={rep.i1:.5f} I2={rep.i2:.5f} bound={rep.bound:.5f}"
        )
    _persist(cfg, _out_dir(cfg), {"params": params, "bounds": rows})
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    validate_config(cfg, need_radius=False)
    if not cfg.n_grid:
        raise ConfigError("n_grid: must be nonempty for sweep")
    if cfg.mode == "both":
        raise ConfigError("mode: sweep needs a single mode")
    if (cfg.mu_target is None) == (not cfg.r_grid):
        raise ConfigError("sweep needs exactly one of 'mu_target' or 'r_grid'")
    base = resolve_params(
        dataclasses.replace(cfg, r=0.01, mu_target=None, n=max(cfg.n_grid)), cfg.mode
    )
    points = run_sweep(
        base,
        list(cfg.n_grid),
        cfg.trials,
        mu_target=cfg.mu_target,
        r_list=list(cfg.r_grid) if cfg.r_grid else None,
        slack=cfg.slack,
        parallelism=cfg.parallelism,
        sides=cfg.sides(),
    )
    out = _out_dir(cfg)
    lines = ["n,r,mu,j,k,a,two_point_out,two_point_in,verdict"]
    failed = 0
    for pt in points:
        if pt.error is not None or pt.report is None:
            lines.append(f"{pt.n},,,,,,,,ERROR:{pt.error}")
            failed += 1
            continue
        rep = pt.report
        pr = rep.prediction
        two_out = rep.sides["out"].two_point if "out" in rep.sides else float("nan")
        two_in = rep.sides["in"].two_point if "in" in rep.sides else float("nan")
        verdict = "PASS" if rep.overall_pass else "FAIL"
        if not rep.overall_pass:
            failed += 1
        lines.append(
            f"{pt.n},{pt.r:.9g},{pr.mu:.9g},{pr.j},{pr.k},{pr.a:.9g},"
            f"{two_out:.6f},{two_in:.6f},{verdict}"
        )
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    _persist(cfg, out, {"points": points})
    print("\n".join(lines))
    return 2 if failed == len(points) else 0


class _Parser(argparse.ArgumentParser):
    # Argument problems are configuration errors (exit 1), not argparse's 2.
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sectorgraphs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="path to key = value config file")
    common.add_argument("--n", type=int)
    common.add_argument("--alpha", type=str, help="radians; accepts pi forms like pi/2")
    common.add_argument("--r", type=float)
    common.add_argument("--mu-target", dest="mu_target", type=float)
    common.add_argument("--v", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--mode", choices=["binomial", "poisson", "both"])
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--parallelism", type=int)
    common.add_argument("--out", type=str)
    common.add_argument("--slack", type=float)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--side", choices=["out", "in", "both"])
    common.add_argument(
        "--a-set", dest="a_sets", action="append", metavar="DESC",
        help="degree set, tail:T or set:a,b,c (repeatable)",
    )
    common.add_argument("--outer-samples", dest="outer_samples", type=int)
    common.add_argument("--area-samples", dest="area_samples", type=int)
    common.add_argument("--ew-samples", dest="ew_samples", type=int)
    common.add_argument("--trunc-cap", dest="trunc_cap", type=float)
    common.add_argument("--n-grid", dest="n_grid", type=str, help="comma list of n")
    common.add_argument("--r-grid", dest="r_grid", type=str, help="comma list of r")

    sub.add_parser("predict", parents=[common])
    sub.add_parser("simulate", parents=[common])
    p_verify = sub.add_parser("verify", parents=[common])
    p_verify.add_argument("--selftest", action="store_true")
    p_verify.add_argument("--override-k", dest="override_k", type=int)
    p_bound = sub.add_parser("bound", parents=[common])
    p_bound.add_argument("--with-empirical", dest="with_empirical", action="store_true")
    sub.add_parser("sweep", parents=[common])
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for key in (
        "n", "r", "mu_target", "v", "q", "mode", "seed", "trials", "parallelism",
        "out", "slack", "epsilon", "side", "outer_samples", "area_samples",
        "ew_samples", "trunc_cap",
    ):
        overrides[key] = getattr(args, key, None)
    if getattr(args, "alpha", None) is not None:
        overrides["alpha"] = parse_alpha(args.alpha)
    if getattr(args, "a_sets", None):
        overrides["a_sets"] = tuple(args.a_sets)
    if getattr(args, "n_grid", None):
        overrides["n_grid"] = tuple(int(s) for s in args.n_grid.split(",") if s.strip())
    if getattr(args, "r_grid", None):
        overrides["r_grid"] = tuple(float(s) for s in args.r_grid.split(",") if s.strip())
    return apply_overrides(cfg, overrides)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        if args.command == "predict":
            return cmd_predict(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, selftest=args.selftest, override_k=args.override_k)
        if args.command == "bound":
            return cmd_bound(cfg, with_empirical=args.with_empirical)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except TruncationBudgetExceeded as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except FloatingPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
