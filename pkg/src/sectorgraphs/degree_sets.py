"""Degree sets: finite sets or upper tails of nonnegative integers.

Used both for counting vertices whose degree falls in a set and for the
Poisson probabilities ``P(Poi(mean) + shift in A)`` that drive the
total-variation bound integrands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special


def _poisson_pmf(k: np.ndarray, mean: np.ndarray) -> np.ndarray:
    """Vectorized Poisson pmf, exact at mean 0."""
    k = np.asarray(k, dtype=float)
    mean = np.asarray(mean, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = k * np.log(mean) - mean - special.gammaln(k + 1.0)
    out = np.exp(logp)
    if mean.ndim == 0:
        if mean == 0.0:
            return np.where(k == 0, 1.0, 0.0)
        return out
    zero = mean == 0.0
    if np.any(zero):
        out = np.where(zero, np.where(k == 0, 1.0, 0.0), out)
    return out


def poisson_upper_tail_vec(mean, threshold) -> np.ndarray:
    """``P(Poi(mean) >= threshold)`` for array inputs via incomplete gamma."""
    mean = np.asarray(mean, dtype=float)
    t = np.asarray(threshold, dtype=float)
    t_clip = np.maximum(t, 1.0)
    tail = special.gammainc(t_clip, mean)
    return np.where(t <= 0, 1.0, tail)


@dataclass(frozen=True)
class DegreeSet:
    """Either the finite set ``members`` or the upper tail ``{j >= threshold}``."""

    kind: str  # "finite" | "tail"
    members: frozenset[int] = frozenset()
    threshold: int = 0

    @classmethod
    def upper_tail(cls, threshold: int) -> "DegreeSet":
        return cls(kind="tail", threshold=max(int(threshold), 0))

    @classmethod
    def finite(cls, values) -> "DegreeSet":
        vals = frozenset(int(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("degree sets contain nonnegative integers only")
        return cls(kind="finite", members=vals)

    @classmethod
    def empty(cls) -> "DegreeSet":
        return cls.finite(())

    @classmethod
    def all(cls) -> "DegreeSet":
        return cls.upper_tail(0)

    def contains(self, j: int) -> bool:
        if self.kind == "tail":
            return j >= self.threshold
        return j in self.members

    def count_in(self, degrees: np.ndarray) -> int:
        """How many entries of ``degrees`` lie in the set."""
        degrees = np.asarray(degrees)
        if degrees.size == 0:
            return 0
        if self.kind == "tail":
            return int(np.count_nonzero(degrees >= self.threshold))
        if not self.members:
            return 0
        return int(np.count_nonzero(np.isin(degrees, sorted(self.members))))

    def poisson_prob(self, mean, shift: int = 0) -> np.ndarray:
        """``P(Poi(mean) + shift in A)``, vectorized over ``mean``."""
        mean = np.asarray(mean, dtype=float)
        if self.kind == "tail":
            return poisson_upper_tail_vec(mean, self.threshold - shift)
        total = np.zeros_like(mean, dtype=float)
        for m in self.members:
            k = m - shift
            if k >= 0:
                total = total + _poisson_pmf(k, mean)
        return total

    def descriptor(self) -> str:
        if self.kind == "tail":
            return f"tail:{self.threshold}"
        return "set:" + ",".join(str(v) for v in sorted(self.members))

    @classmethod
    def parse(cls, text: str) -> "DegreeSet":
        """Inverse of ``descriptor``: ``tail:T`` or ``set:a,b,c`` (``set:`` is empty)."""
        text = text.strip()
        if text.startswith("tail:"):
            return cls.upper_tail(int(text[5:]))
        if text.startswith("set:"):
            body = text[4:].strip()
            return cls.finite(int(v) for v in body.split(",") if v != "")
        raise ValueError(f"unrecognized degree-set descriptor {text!r}")
