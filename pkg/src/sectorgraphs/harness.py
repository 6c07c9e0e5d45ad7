"""Seeded parallel Monte Carlo experiments over graph realizations.

Trial ``t`` of a run is fully determined by ``(master_seed, t)``, so worker
count and execution order never change any record. Aggregation compares
empirical max-degree laws against the two-point focusing prediction with
exact binomial confidence intervals.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import beta

from .degree_sets import DegreeSet
from .model import (
    ModelParams,
    degree_summary,
    interior_out_degree_stats,
    sample_graph,
)
from .randomness import TrialStream, substream
from .theory import TWO_POINT_CONVENTION, FocusingPrediction, predict

_DOM_AGREE_BOOT = 0xA61


@dataclass(frozen=True)
class TrialOptions:
    """What to record per trial beyond counts and maxima."""

    collect_hist: bool = False
    w_sets: tuple[tuple[DegreeSet, str], ...] = ()
    interior_degrees: bool = False


@dataclass
class TrialRecord:
    trial_index: int
    seed: int
    realized_count: int
    alive_count: int
    max_out: int
    max_in: int
    empty: bool
    hist_out: dict[int, int] | None = None
    hist_in: dict[int, int] | None = None
    w_counts: dict[str, int] | None = None
    interior_sum: int | None = None
    interior_count: int | None = None


@dataclass
class SideComparison:
    side: str
    mass_km1: float
    mass_k: float
    mass_other: float
    se_km1: float
    ci_half_km1: float
    two_point: float
    ci_half_two_point: float
    hist: dict[int, int]
    point_pass: bool
    two_point_pass: bool
    verdict: str
    thresholds: str


@dataclass
class ExperimentReport:
    params: ModelParams
    prediction: FocusingPrediction
    trials: int
    slack: float
    ci_level: float
    sides: dict[str, SideComparison]
    overall_pass: bool
    convention: str = TWO_POINT_CONVENTION
    wall_clock_seconds: float = 0.0
    tv_cross_checks: list | None = None


@dataclass
class ModeAgreementReport:
    trials: int
    distance_out: float
    bootstrap_se_out: float
    distance_in: float
    bootstrap_se_in: float


@dataclass
class SweepPoint:
    n: int
    r: float
    report: ExperimentReport | None = None
    error: str | None = None


def _w_key(degree_set: DegreeSet, side: str) -> str:
    return f"{degree_set.descriptor()}|{side}"


def run_one_trial(
    params: ModelParams, trial_index: int, options: TrialOptions
) -> TrialRecord:
    stream = TrialStream(params.master_seed, trial_index)
    g = sample_graph(params, stream)
    summary = degree_summary(g)
    rec = TrialRecord(
        trial_index=trial_index,
        seed=stream.trial_seed,
        realized_count=g.realized_count,
        alive_count=summary.alive_count,
        max_out=summary.max_out,
        max_in=summary.max_in,
        empty=summary.empty,
    )
    if options.collect_hist:
        out_counts = np.bincount(summary.out_degrees) if not summary.empty else np.zeros(1, dtype=np.int64)
        in_counts = np.bincount(summary.in_degrees) if not summary.empty else np.zeros(1, dtype=np.int64)
        rec.hist_out = {int(k): int(c) for k, c in enumerate(out_counts) if c}
        rec.hist_in = {int(k): int(c) for k, c in enumerate(in_counts) if c}
    if options.w_sets:
        rec.w_counts = {}
        for ds, side in options.w_sets:
            degrees = summary.out_degrees if side == "out" else summary.in_degrees
            rec.w_counts[_w_key(ds, side)] = ds.count_in(degrees)
    if options.interior_degrees:
        rec.interior_sum, rec.interior_count = interior_out_degree_stats(g)
    return rec


def _worker(args) -> TrialRecord:
    params, trial_index, options = args
    return run_one_trial(params, trial_index, options)


def run_trials(
    params: ModelParams,
    trials: int,
    parallelism: int = 1,
    options: TrialOptions | None = None,
) -> list[TrialRecord]:
    """Run ``trials`` independent trials; records are identical for any
    ``parallelism``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    options = options or TrialOptions()
    if parallelism <= 1:
        return [run_one_trial(params, t, options) for t in range(trials)]
    jobs = ((params, t, options) for t in range(trials))
    chunk = max(1, trials // (parallelism * 8))
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        records = list(pool.map(_worker, jobs, chunksize=chunk))
    records.sort(key=lambda rec: rec.trial_index)
    return records


def clopper_pearson(successes: int, trials: int, level: float = 0.99) -> tuple[float, float]:
    """Exact binomial confidence interval."""
    alpha = 1.0 - level
    lo = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


def _max_hist(records: list[TrialRecord], side: str) -> dict[int, int]:
    values = [rec.max_out if side == "out" else rec.max_in for rec in records]
    hist: dict[int, int] = {}
    for v in values:
        hist[v] = hist.get(v, 0) + 1
    return hist


def _compare_side(
    records: list[TrialRecord],
    prediction: FocusingPrediction,
    slack: float,
    side: str,
    ci_level: float,
) -> SideComparison:
    t = len(records)
    hist = _max_hist(records, side)
    n_km1 = hist.get(prediction.k - 1, 0)
    n_k = hist.get(prediction.k, 0)
    mass_km1 = n_km1 / t
    mass_k = n_k / t
    two = (n_km1 + n_k) / t
    lo1, hi1 = clopper_pearson(n_km1, t, ci_level)
    lo2, hi2 = clopper_pearson(n_km1 + n_k, t, ci_level)
    half1 = 0.5 * (hi1 - lo1)
    half2 = 0.5 * (hi2 - lo2)
    point_pass = abs(mass_km1 - prediction.p_km1) <= slack + half1
    two_pass = two >= 1.0 - 2.0 * slack
    thresholds = (
        f"|mass(k-1) - exp(-a)| <= slack {slack} + CP half-width {half1:.4f} "
        f"at level {ci_level}; two-point mass >= 1 - 2*{slack}"
    )
    return SideComparison(
        side=side,
        mass_km1=mass_km1,
        mass_k=mass_k,
        mass_other=1.0 - two,
        se_km1=math.sqrt(max(mass_km1 * (1.0 - mass_km1), 1e-300) / t),
        ci_half_km1=half1,
        two_point=two,
        ci_half_two_point=half2,
        hist=dict(sorted(hist.items())),
        point_pass=bool(point_pass),
        two_point_pass=bool(two_pass),
        verdict="PASS" if (point_pass and two_pass) else "FAIL",
        thresholds=thresholds,
    )


def compare(
    records: list[TrialRecord],
    prediction: FocusingPrediction,
    slack: float,
    params: ModelParams | None = None,
    sides: tuple[str, ...] = ("out", "in"),
    ci_level: float = 0.99,
    wall_clock_seconds: float = 0.0,
) -> ExperimentReport:
    """Score empirical max-degree masses against the two-point prediction."""
    if not records:
        raise ValueError("records must be nonempty")
    out = {
        side: _compare_side(records, prediction, slack, side, ci_level)
        for side in sides
    }
    return ExperimentReport(
        params=params,
        prediction=prediction,
        trials=len(records),
        slack=slack,
        ci_level=ci_level,
        sides=out,
        overall_pass=all(sc.verdict == "PASS" for sc in out.values()),
        wall_clock_seconds=wall_clock_seconds,
    )


def verify(
    params: ModelParams,
    trials: int,
    slack: float = 0.08,
    parallelism: int = 1,
    sides: tuple[str, ...] = ("out", "in"),
    ci_level: float = 0.99,
    prediction: FocusingPrediction | None = None,
) -> tuple[ExperimentReport, list[TrialRecord]]:
    """Predict, simulate and compare in one step."""
    started = time.perf_counter()
    pred = prediction if prediction is not None else predict(params)
    records = run_trials(params, trials, parallelism)
    report = compare(
        records,
        pred,
        slack,
        params=params,
        sides=sides,
        ci_level=ci_level,
        wall_clock_seconds=time.perf_counter() - started,
    )
    return report, records


def sweep(
    params: ModelParams,
    n_grid: list[int],
    trials: int,
    mu_target: float | None = None,
    r_list: list[float] | None = None,
    slack: float = 0.08,
    parallelism: int = 1,
    sides: tuple[str, ...] = ("out", "in"),
) -> list[SweepPoint]:
    """One verification per grid point; a failing point records its error
    and does not abort the rest.

    The radius schedule is either fixed mean degree (``mu_target``) or an
    explicit ``r_list`` aligned with ``n_grid``.
    """
    from .theory import radius_for_mean_degree

    if not n_grid:
        raise ValueError("n_grid must be nonempty")
    if (mu_target is None) == (r_list is None):
        raise ValueError("exactly one of mu_target / r_list is required")
    if r_list is not None and len(r_list) != len(n_grid):
        raise ValueError("r_list must align with n_grid")
    points: list[SweepPoint] = []
    for pos, n in enumerate(n_grid):
        try:
            r = (
                radius_for_mean_degree(n, params.alpha, params.v, params.q, mu_target)
                if mu_target is not None
                else r_list[pos]
            )
            p = replace(params, n=int(n), r=r)
            report, _ = verify(p, trials, slack=slack, parallelism=parallelism, sides=sides)
            points.append(SweepPoint(n=int(n), r=r, report=report))
        except Exception as exc:  # per-point isolation
            points.append(SweepPoint(n=int(n), r=float("nan"), error=str(exc)))
    return points


def half_l1(hist_a: dict[int, int], hist_b: dict[int, int]) -> float:
    """Half L1 distance between two empirical integer laws."""
    total_a = sum(hist_a.values())
    total_b = sum(hist_b.values())
    keys = set(hist_a) | set(hist_b)
    return 0.5 * sum(
        abs(hist_a.get(k, 0) / total_a - hist_b.get(k, 0) / total_b) for k in keys
    )


def mode_agreement(
    params: ModelParams,
    trials: int,
    parallelism: int = 1,
    bootstrap: int = 200,
) -> ModeAgreementReport:
    """Distance between binomial-mode and Poisson-mode empirical
    max-degree laws, with a bootstrap error bar."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rec_b = run_trials(params.with_mode("binomial"), trials, parallelism)
    rec_p = run_trials(params.with_mode("poisson"), trials, parallelism)
    rng = substream(params.master_seed, _DOM_AGREE_BOOT)
    report = {}
    for side in ("out", "in"):
        vals_b = np.array([r.max_out if side == "out" else r.max_in for r in rec_b])
        vals_p = np.array([r.max_out if side == "out" else r.max_in for r in rec_p])
        dist = half_l1(_hist_of(vals_b), _hist_of(vals_p))
        reps = np.empty(bootstrap)
        for i in range(bootstrap):
            rb = vals_b[rng.integers(0, trials, trials)]
            rp = vals_p[rng.integers(0, trials, trials)]
            reps[i] = half_l1(_hist_of(rb), _hist_of(rp))
        report[side] = (dist, float(np.std(reps)))
    return ModeAgreementReport(
        trials=trials,
        distance_out=report["out"][0],
        bootstrap_se_out=report["out"][1],
        distance_in=report["in"][0],
        bootstrap_se_in=report["in"][1],
    )


def _hist_of(values: np.ndarray) -> dict[int, int]:
    uniq, counts = np.unique(values, return_counts=True)
    return {int(u): int(c) for u, c in zip(uniq, counts)}


def write_trials_csv(records: list[TrialRecord], path) -> None:
    """Per-trial CSV: trial, seed, N, alive, max_out, max_in, empty."""
    with open(path, "w") as fh:
        fh.write("trial,seed,N,alive,max_out,max_in,empty\n")
        for rec in records:
            fh.write(
                f"{rec.trial_index},{rec.seed},{rec.realized_count},"
                f"{rec.alive_count},{rec.max_out},{rec.max_in},{int(rec.empty)}\n"
            )
