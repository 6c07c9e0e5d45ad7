"""Analytic quantities of the model: mean degree, Poisson tails, and the
two-point focusing prediction for the maximum out/in-degree.

For mean degree ``mu = (alpha/2) * n * r**2 * (1-v) * (1-q)`` bounded away
from zero and growing slower than any power of ``ln n``, the maximum degree
concentrates on two consecutive integers ``k-1`` and ``k``. The index ``j``
is the smallest integer with ``n * P(Poi(mu) >= j) <= 1/(1-v)``; ``k`` is
``j-1`` or ``j`` depending on a threshold rule, and the limiting masses are
``exp(-a)`` at ``k-1`` and ``1 - exp(-a)`` at ``k`` with
``a = n * (1-v) * P(Poi(mu) >= k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams

# Convention used by every report: the lower mass sits at k-1.
TWO_POINT_CONVENTION = (
    "P(max = k-1) -> exp(-a), P(max = k) -> 1 - exp(-a), "
    "a = n*(1-v)*P(Poi(mu) >= k)"
)

# A term below this fraction of the partial sum stops tail accumulation.
_TAIL_STOP = 1e-17


class RadiusOutOfRange(ValueError):
    """Requested mean degree needs a radius at or above 0.5."""


class NoFocusingIndex(ValueError):
    """n*(1-v) <= 1: no index j with n*tail(j) <= 1/(1-v) and tail(j-1) above it."""


@dataclass(frozen=True)
class FocusingPrediction:
    """Two-point limit law of the maximum degree (either side, either mode)."""

    mu: float
    j: int
    k: int
    xi_k: float
    a: float
    p_km1: float
    p_k: float


@dataclass(frozen=True)
class RegimeReport:
    """Finite-size diagnostics for the asymptotic hypotheses (heuristic
    thresholds, not correctness gates)."""

    mu: float
    mu_over_pow: float
    focusing_ratio: float
    warnings: tuple[str, ...]


def mean_degree_value(n: float, alpha: float, r: float, v: float, q: float) -> float:
    """Raw formula ``(alpha/2) * n * r**2 * (1-v) * (1-q)`` without the
    parameter-range checks of ``ModelParams``."""
    return 0.5 * alpha * n * r * r * (1.0 - v) * (1.0 - q)


def mean_degree(params: ModelParams) -> float:
    """``(alpha/2) * n * r**2 * (1-v) * (1-q)``; also the asymptotic mean
    out-degree of an interior alive vertex."""
    return mean_degree_value(params.n, params.alpha, params.r, params.v, params.q)


def radius_for_mean_degree(
    n: int, alpha: float, v: float, q: float, mu_target: float
) -> float:
    """Radius r < 0.5 that makes ``mean_degree`` equal ``mu_target``."""
    if mu_target <= 0.0:
        raise ValueError("mu_target must be positive")
    r = math.sqrt(2.0 * mu_target / (alpha * n * (1.0 - v) * (1.0 - q)))
    if r >= 0.5:
        raise RadiusOutOfRange(
            f"mu_target {mu_target} needs r = {r:.6g} >= 0.5 at n = {n}"
        )
    return r


def _upper_sum_log(mean: float, start: int) -> float:
    """log of ``sum_{i >= start} pmf(i)`` for ``start > mean`` (terms decrease)."""
    lead = -mean + start * math.log(mean) - math.lgamma(start + 1)
    acc = 1.0
    term = 1.0
    i = start
    while True:
        i += 1
        term *= mean / i
        acc += term
        if term < _TAIL_STOP * acc:
            break
    return lead + math.log(acc)


def _lower_sum_log(mean: float, last: int) -> float:
    """log of ``sum_{i <= last} pmf(i)`` for ``last < mean`` (terms decrease
    moving down from ``last``)."""
    lead = -mean + last * math.log(mean) - math.lgamma(last + 1)
    acc = 1.0
    term = 1.0
    for i in range(last, 0, -1):
        term *= i / mean
        acc += term
        if term < _TAIL_STOP * acc:
            break
    return lead + math.log(acc)


def poisson_upper_tail_log(mean: float, j: int) -> float:
    """``log P(Poi(mean) >= j)`` by log-space accumulation away from the mode."""
    if mean <= 0.0:
        raise ValueError("mean must be positive")
    j = int(j)
    if j <= 0:
        return 0.0
    if j > mean:
        return _upper_sum_log(mean, j)
    lower = math.exp(_lower_sum_log(mean, j - 1))
    return math.log1p(-lower)


def poisson_upper_tail(mean: float, j: int) -> float:
    """``P(Poi(mean) >= j)``; underflows to 0 below the float range."""
    return math.exp(poisson_upper_tail_log(mean, j))


def focusing_index(n: int, v: float, mu: float) -> tuple[int, int]:
    """The pair ``(j, k)`` locating the two-point concentration.

    ``j`` is the smallest integer with ``n * tail(j) <= 1/(1-v)`` (it exists
    and is >= 1 when ``n*(1-v) > 1`` since ``tail(0) = 1``); ``k = j-1``
    when ``(1-v)*n*tail(j) <= sqrt(tail(j)/tail(j-1))``, else ``k = j``.
    Exact threshold equality keeps ``k = j-1``.
    """
    if n * (1.0 - v) <= 1.0:
        raise NoFocusingIndex(f"n*(1-v) = {n * (1.0 - v):.6g} must exceed 1")
    bound = 1.0 / (1.0 - v)
    xi_prev = 1.0  # tail(0)
    j = 0
    while True:
        j += 1
        xi_j = poisson_upper_tail(mu, j)
        if n * xi_j <= bound:
            break
        xi_prev = xi_j
    k = j - 1 if (1.0 - v) * n * xi_j <= math.sqrt(xi_j / xi_prev) else j
    return j, k


def predict(params: ModelParams) -> FocusingPrediction:
    """Assemble the two-point prediction for the given parameters.

    Applies to the maximum out-degree and in-degree alike, in both
    point-process modes.
    """
    mu = mean_degree(params)
    j, k = focusing_index(params.n, params.v, mu)
    xi_k = poisson_upper_tail(mu, k)
    a = params.n * (1.0 - params.v) * xi_k
    p_km1 = math.exp(-a)
    return FocusingPrediction(mu=mu, j=j, k=k, xi_k=xi_k, a=a, p_km1=p_km1, p_k=1.0 - p_km1)


def check_regime(params: ModelParams, epsilon: float) -> RegimeReport:
    """Diagnostics ``mu``, ``mu**(1+eps)/ln n`` and ``mu/n**(1/6)``.

    Warnings fire when either ratio exceeds 1 or ``mu < 0.01``; the
    thresholds are heuristics for desk-scale use.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    mu = mean_degree(params)
    log_n = math.log(params.n)
    focusing_ratio = mu ** (1.0 + epsilon) / log_n if log_n > 0.0 else math.inf
    mu_over_pow = mu / params.n ** (1.0 / 6.0)
    warnings = []
    if focusing_ratio > 1.0:
        warnings.append(
            f"mu^(1+eps)/ln n = {focusing_ratio:.4g} > 1: mean degree grows too "
            "fast relative to ln n for the two-point focusing regime"
        )
    if mu_over_pow > 1.0:
        warnings.append(
            f"mu/n^(1/6) = {mu_over_pow:.4g} > 1: fixed-count and Poisson modes "
            "may disagree at this size"
        )
    if mu < 0.01:
        warnings.append(f"mu = {mu:.4g} < 0.01: degenerate near-empty graphs")
    return RegimeReport(
        mu=mu,
        mu_over_pow=mu_over_pow,
        focusing_ratio=focusing_ratio,
        warnings=tuple(warnings),
    )
