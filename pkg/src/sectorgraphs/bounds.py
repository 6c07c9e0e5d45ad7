"""Total-variation bounds for the Poisson approximation of degree counts.

In Poisson mode with intensity ``lam = n``, let ``W`` be the number of
alive vertices whose out- (or in-) degree lies in a degree set ``A``. The
bound evaluated here is

    d_TV(W, Poi(E W)) <= min(1, 1/EW) * (I1 + I2)

where ``I1`` integrates the product of two marginal count probabilities
over ordered pairs of locations within distance ``3r``, and ``I2``
integrates the joint probability that both locations' counts land in
``A``. The two counts share the Poisson points of the overlap region and
each gains the mutual-arc indicator of the other location, so the joint
probability is evaluated exactly from the three-piece area decomposition
of the two regions (out side: the two sectors; in side: the two disks,
counted by the orientation-thinned process of intensity ``lam * alpha/2pi``).

All estimators are plain Monte Carlo with reported standard errors and
are deterministic given their seeds.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from .degree_sets import DegreeSet, _poisson_pmf, poisson_upper_tail_vec
from .geometry import (
    TWO_PI,
    clipped_sector_areas,
    in_unit_square,
    points_in_sector,
    Sector,
)
from .model import ModelParams
from .randomness import derive_key, substream
from .theory import poisson_upper_tail_log

_DOM_EW = 0xB01
_DOM_TV = 0xB02
_DOM_DECOMP = 0xB03
_DOM_BOOT = 0xB04

_SIDES = ("out", "in")


class TruncationBudgetExceeded(RuntimeError):
    """The joint-count summation cannot reach the tail cap within the term limit."""


@dataclass(frozen=True)
class ArcIndicator:
    """Degree shift of a conditioned location: present geometrically or not,
    and surviving its own fault coin when present."""

    present: bool
    survive_prob: float

    @property
    def prob(self) -> float:
        return self.survive_prob if self.present else 0.0


@dataclass(frozen=True)
class JointRegionDecomposition:
    """Areas (inside the unit square) of overlap, region-1-only and
    region-2-only pieces of two equal-radius regions."""

    area_common: float
    area_only1: float
    area_only2: float
    se_common: float
    se_only1: float
    se_only2: float


@dataclass
class TVBoundReport:
    side: str
    degree_set: str
    ew: float
    ew_se: float
    i1: float
    i1_se: float
    i2: float
    i2_se: float
    truncation_error: float
    bound_raw: float
    bound: float
    bound_se: float


def _check_side(side: str) -> None:
    if side not in _SIDES:
        raise ValueError("side must be 'out' or 'in'")


def _seed_for(params: ModelParams, domain: int, side: str, degree_set: DegreeSet) -> int:
    tag = zlib.crc32(degree_set.descriptor().encode())
    return derive_key(params.master_seed, domain, _SIDES.index(side), tag)


def expected_count(
    params: ModelParams,
    degree_set: DegreeSet,
    side: str,
    samples: int = 20_000,
    area_samples: int = 20_000,
    seed: int | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate of ``E W`` with its standard error.

    Out side: ``(1-v) * lam * E_{x,y} P[Poi(lam*(1-q)*(1-v)*|S(x,y,r) ∩ Q|) in A]``.
    In side: the sector area is replaced by ``(alpha/2pi) * |B(x,r) ∩ Q|``
    and there is no orientation average.
    """
    _check_side(side)
    if seed is None:
        seed = _seed_for(params, _DOM_EW, side, degree_set)
    rng = substream(seed)
    lam = float(params.n)
    thin = lam * (1.0 - params.q) * (1.0 - params.v)
    x = rng.random((samples, 2))
    if side == "out":
        y = TWO_PI * rng.random(samples)
        areas, _ = clipped_sector_areas(x, y, params.alpha, params.r, area_samples, rng)
        means = thin * areas
    else:
        areas, _ = clipped_sector_areas(
            x, np.zeros(samples), TWO_PI, params.r, area_samples, rng
        )
        means = thin * (params.alpha / TWO_PI) * areas
    vals = degree_set.poisson_prob(means)
    pref = (1.0 - params.v) * lam
    return pref * float(np.mean(vals)), pref * float(np.std(vals) / math.sqrt(samples))


def _sector_point_batch(
    apex: np.ndarray,
    elev: np.ndarray,
    angle: float,
    radius: float,
    k: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """(m, k, 2) uniform points of each row's sector."""
    m = apex.shape[0]
    rad = radius * np.sqrt(rng.random((m, k)))
    ang = elev[:, None] + angle * rng.random((m, k))
    return np.stack(
        [apex[:, 0, None] + rad * np.cos(ang), apex[:, 1, None] + rad * np.sin(ang)],
        axis=-1,
    )


def decompose_regions(
    region1: Sector,
    region2: Sector,
    samples: int = 100_000,
    seed: int = 0,
) -> JointRegionDecomposition:
    """Monte Carlo areas of the three disjoint pieces of two equal-radius
    regions inside the unit square."""
    if region1.radius != region2.radius:
        raise ValueError("regions must share one radius")
    rng = substream(seed, _DOM_DECOMP)
    a1 = np.array([[region1.apex.x, region1.apex.y]])
    a2 = np.array([[region2.apex.x, region2.apex.y]])
    e1 = np.array([region1.elevation])
    e2 = np.array([region2.elevation])

    p = _sector_point_batch(a1, e1, region1.central_angle, region1.radius, samples, rng)[0]
    in_q = in_unit_square(p)
    in_r2 = points_in_sector(a2[0], region2.elevation, region2.central_angle, region2.radius, p)
    f_common = float(np.mean(in_q & in_r2))
    f_only1 = float(np.mean(in_q & ~in_r2))

    p2 = _sector_point_batch(a2, e2, region2.central_angle, region2.radius, samples, rng)[0]
    in_q2 = in_unit_square(p2)
    in_r1 = points_in_sector(a1[0], region1.elevation, region1.central_angle, region1.radius, p2)
    f_only2 = float(np.mean(in_q2 & ~in_r1))

    def se(area: float, f: float) -> float:
        return area * math.sqrt(f * (1.0 - f) / samples)

    return JointRegionDecomposition(
        area_common=region1.area * f_common,
        area_only1=region1.area * f_only1,
        area_only2=region2.area * f_only2,
        se_common=se(region1.area, f_common),
        se_only1=se(region1.area, f_only1),
        se_only2=se(region2.area, f_only2),
    )


def _terms_needed(m_max: float, cap: float, max_terms: int) -> int:
    """Terms of the shared-count summation so the residual ``P(Nc >= n)``
    falls below ``cap``; raises when ``max_terms`` cannot reach it."""
    if m_max <= 0.0:
        return 1
    log_cap = math.log(cap)
    if poisson_upper_tail_log(m_max, max_terms) > log_cap:
        raise TruncationBudgetExceeded(
            f"residual above cap {cap:g} after {max_terms} terms at mean {m_max:.4g}"
        )
    n = min(max(2, int(m_max) + 1), max_terms)
    while poisson_upper_tail_log(m_max, n) > log_cap:
        n = min(int(n * 1.4) + 1, max_terms)
    return n


def _joint_prob_batch(
    mean_common: np.ndarray,
    mean_only1: np.ndarray,
    mean_only2: np.ndarray,
    p1: np.ndarray,
    p2: np.ndarray,
    degree_set: DegreeSet,
    trunc_cap: float,
    max_terms: int,
) -> tuple[np.ndarray, float]:
    """P[{Nc+N1+B1 in A} and {Nc+N2+B2 in A}] for vectors of Poisson means.

    Sums over the shared count ``Nc`` until residual mass is below
    ``trunc_cap`` for every row; returns the probabilities and the worst
    residual, which bounds the truncation error.
    """
    mc = np.asarray(mean_common, dtype=float)
    m_max = float(mc.max()) if mc.size else 0.0
    n_terms = _terms_needed(m_max, trunc_cap, max_terms)
    probs = np.zeros_like(mc)
    cum = np.zeros_like(mc)
    pmf = np.exp(-mc)
    for c in range(n_terms):
        f1 = (1.0 - p1) * degree_set.poisson_prob(mean_only1, shift=c) + p1 * degree_set.poisson_prob(mean_only1, shift=c + 1)
        f2 = (1.0 - p2) * degree_set.poisson_prob(mean_only2, shift=c) + p2 * degree_set.poisson_prob(mean_only2, shift=c + 1)
        probs += pmf * f1 * f2
        cum += pmf
        pmf = pmf * mc / (c + 1.0)
    residual = float(np.max(1.0 - cum)) if mc.size else 0.0
    return probs, max(residual, 0.0)


def joint_count_prob(
    dec: JointRegionDecomposition,
    lambda_eff: float,
    degree_set: DegreeSet,
    b1: ArcIndicator,
    b2: ArcIndicator,
    trunc_cap: float = 1e-8,
    max_terms: int = 10_000,
) -> float:
    """Probability that both counts land in the degree set.

    ``Nc``, ``N1``, ``N2`` are independent Poisson with means ``lambda_eff``
    times the piece areas; count 1 is ``Nc + N1 + B1``, count 2 is
    ``Nc + N2 + B2`` with the indicator Bernoullis of ``b1``/``b2``.
    """
    probs, _ = _joint_prob_batch(
        np.array([lambda_eff * dec.area_common]),
        np.array([lambda_eff * dec.area_only1]),
        np.array([lambda_eff * dec.area_only2]),
        np.array([b1.prob]),
        np.array([b2.prob]),
        degree_set,
        trunc_cap,
        max_terms,
    )
    return float(probs[0])


def _decompose_batch(
    apex1: np.ndarray,
    elev1: np.ndarray,
    apex2: np.ndarray,
    elev2: np.ndarray,
    angle: float,
    radius: float,
    samples: int,
    rng: np.random.Generator,
    chunk: int = 128,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Row-wise three-piece areas for many region pairs (fresh samples per
    row, so row errors are independent)."""
    m = apex1.shape[0]
    area_full = 0.5 * angle * radius * radius
    common = np.zeros(m)
    only1 = np.zeros(m)
    only2 = np.zeros(m)
    for lo in range(0, m, chunk):
        sl = slice(lo, min(lo + chunk, m))
        a1, e1 = apex1[sl], elev1[sl]
        a2, e2 = apex2[sl], elev2[sl]
        p = _sector_point_batch(a1, e1, angle, radius, samples, rng)
        in_q = in_unit_square(p)
        in_r2 = points_in_sector(a2[:, None, :], e2[:, None], angle, radius, p)
        common[sl] = area_full * np.mean(in_q & in_r2, axis=1)
        only1[sl] = area_full * np.mean(in_q & ~in_r2, axis=1)
        p = _sector_point_batch(a2, e2, angle, radius, samples, rng)
        in_q = in_unit_square(p)
        in_r1 = points_in_sector(a1[:, None, :], e1[:, None], angle, radius, p)
        only2[sl] = area_full * np.mean(in_q & ~in_r1, axis=1)
    return common, only1, only2


def tv_bound(
    params: ModelParams,
    degree_set: DegreeSet,
    side: str,
    outer_samples: int = 10_000,
    area_samples: int = 10_000,
    ew_samples: int = 20_000,
    trunc_cap: float = 1e-8,
    max_terms: int = 10_000,
    seed: int | None = None,
) -> TVBoundReport:
    """Evaluate the full bound ``min(1, 1/EW) * (I1 + I2)`` for one side.

    The second location is drawn by rejection from the bounding square of
    the radius-``3r`` ball around the first, with the square's measure
    ``(6r)^2`` folded into the integrand weight. The reported ``bound`` is
    additionally capped at 1 (a total-variation distance never exceeds 1);
    ``bound_raw`` keeps the uncapped value.
    """
    _check_side(side)
    if seed is None:
        seed = _seed_for(params, _DOM_TV, side, degree_set)
    rng = substream(seed)
    lam = float(params.n)
    r = params.r
    thin = lam * (1.0 - params.q) * (1.0 - params.v)
    lam_eff = thin if side == "out" else thin * params.alpha / TWO_PI
    pref = (1.0 - params.v) ** 2 * lam * lam
    weight = (6.0 * r) ** 2

    x1 = rng.random((outer_samples, 2))
    y1 = TWO_PI * rng.random(outer_samples)
    x2 = x1 + 6.0 * r * (rng.random((outer_samples, 2)) - 0.5)
    y2 = TWO_PI * rng.random(outer_samples)
    d2 = np.sum((x2 - x1) ** 2, axis=1)
    accept = (d2 <= (3.0 * r) ** 2) & in_unit_square(x2)
    acc = np.nonzero(accept)[0]

    # Marginal count probabilities for I1.
    if side == "out":
        areas1, _ = clipped_sector_areas(x1, y1, params.alpha, r, area_samples, rng)
        means1 = lam_eff * areas1
        areas2, _ = clipped_sector_areas(
            x2[acc], y2[acc], params.alpha, r, area_samples, rng
        )
        means2_acc = lam_eff * areas2
    else:
        disk1, _ = clipped_sector_areas(
            x1, np.zeros(outer_samples), TWO_PI, r, area_samples, rng
        )
        means1 = lam_eff * disk1
        disk2, _ = clipped_sector_areas(
            x2[acc], np.zeros(acc.size), TWO_PI, r, area_samples, rng
        )
        means2_acc = lam_eff * disk2
    prob1 = degree_set.poisson_prob(means1)
    prob2 = np.zeros(outer_samples)
    prob2[acc] = degree_set.poisson_prob(means2_acc)
    i1_vals = weight * accept * prob1 * prob2
    i1 = pref * float(np.mean(i1_vals))
    i1_se = pref * float(np.std(i1_vals) / math.sqrt(outer_samples))

    # Joint probabilities for I2 on the accepted pairs.
    truncation = 0.0
    joint = np.zeros(outer_samples)
    if acc.size:
        if side == "out":
            c_area, o1_area, o2_area = _decompose_batch(
                x1[acc], y1[acc], x2[acc], y2[acc], params.alpha, r, area_samples, rng
            )
        else:
            zeros = np.zeros(acc.size)
            c_area, o1_area, o2_area = _decompose_batch(
                x1[acc], zeros, x2[acc], zeros, TWO_PI, r, area_samples, rng
            )
        in_s1 = points_in_sector(x1[acc], y1[acc], params.alpha, r, x2[acc])
        in_s2 = points_in_sector(x2[acc], y2[acc], params.alpha, r, x1[acc])
        if side == "out":
            # Count 1 is the out-degree at x1: shifted when x2 sits in x1's sector.
            p_b1 = in_s1 * (1.0 - params.q)
            p_b2 = in_s2 * (1.0 - params.q)
        else:
            # Count 1 is the in-degree at x1: shifted when x2's sector covers x1.
            p_b1 = in_s2 * (1.0 - params.q)
            p_b2 = in_s1 * (1.0 - params.q)
        probs, truncation = _joint_prob_batch(
            lam_eff * c_area,
            lam_eff * o1_area,
            lam_eff * o2_area,
            p_b1,
            p_b2,
            degree_set,
            trunc_cap,
            max_terms,
        )
        joint[acc] = probs
    i2_vals = weight * joint
    i2 = pref * float(np.mean(i2_vals))
    i2_se = pref * float(np.std(i2_vals) / math.sqrt(outer_samples))

    ew, ew_se = expected_count(
        params, degree_set, side, samples=ew_samples, area_samples=area_samples
    )
    factor = min(1.0, 1.0 / ew) if ew > 0.0 else 1.0
    bound_raw = factor * (i1 + i2)
    dfactor = 0.0 if ew <= 1.0 else 1.0 / (ew * ew)
    bound_se = math.sqrt(
        factor**2 * (i1_se**2 + i2_se**2) + (dfactor * (i1 + i2)) ** 2 * ew_se**2
    )
    return TVBoundReport(
        side=side,
        degree_set=degree_set.descriptor(),
        ew=ew,
        ew_se=ew_se,
        i1=i1,
        i1_se=i1_se,
        i2=i2,
        i2_se=i2_se,
        truncation_error=truncation,
        bound_raw=bound_raw,
        bound=min(1.0, bound_raw),
        bound_se=bound_se,
    )


def empirical_tv(samples, mean: float) -> float:
    """Half L1 distance between the empirical law of integer samples and
    ``Poi(mean)``, with the Poisson mass beyond the sample maximum included
    in full."""
    values = np.asarray(samples, dtype=np.int64)
    if values.size == 0:
        raise ValueError("samples must be nonempty")
    if mean <= 0.0:
        raise ValueError("mean must be positive")
    counts = np.bincount(values)
    emp = counts / values.size
    ks = np.arange(counts.size)
    pois = _poisson_pmf(ks, mean)
    tail = float(poisson_upper_tail_vec(mean, counts.size))
    return 0.5 * (float(np.sum(np.abs(emp - pois))) + tail)


def empirical_tv_bootstrap_se(
    samples, mean: float, replicates: int = 200, seed: int = 0
) -> float:
    """Bootstrap standard error of ``empirical_tv`` over resampled data."""
    values = np.asarray(samples, dtype=np.int64)
    rng = substream(seed, _DOM_BOOT)
    tvs = np.empty(replicates)
    for b in range(replicates):
        resample = values[rng.integers(0, values.size, values.size)]
        tvs[b] = empirical_tv(resample, mean)
    return float(np.std(tvs))
