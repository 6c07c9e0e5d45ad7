"""Sampling of random faulty scaled sector graphs and their degree statistics.

A realization places ``N`` points uniformly on the unit square (``N = n``
in binomial mode, ``N ~ Poisson(n)`` in poisson mode), gives each an
independent uniform orientation, kills each vertex independently with
probability ``v``, and keeps the arc ``(i, j)`` when both endpoints are
alive, ``j`` lies in ``i``'s sector of angle ``alpha`` and radius ``r``,
and the arc survives an independent fault of probability ``q``. A dead
vertex carries no arcs in either direction and is excluded from all
degree statistics.

Randomness follows the draw-order contract in ``randomness``: count,
positions, orientations, alive flags from the per-trial generator, then
counter-based per-pair fault uniforms (arc fails iff its uniform is
below ``q``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .degree_sets import DegreeSet
from .geometry import TWO_PI, angle_in_arc, build_index, ordered_pairs_within
from .randomness import TrialStream

MODES = ("binomial", "poisson")


@dataclass(frozen=True)
class ModelParams:
    """Inputs of the random faulty scaled sector graph."""

    n: int
    alpha: float
    r: float
    v: float
    q: float
    mode: str = "binomial"
    master_seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if not (0.0 < self.alpha <= TWO_PI):
            raise ValueError("alpha must lie in (0, 2*pi]")
        if not (0.0 < self.r < 0.5):
            raise ValueError("r must lie in (0, 0.5)")
        if not (0.0 <= self.v < 1.0):
            raise ValueError("v must lie in [0, 1)")
        if not (0.0 <= self.q < 1.0):
            raise ValueError("q must lie in [0, 1)")
        if self.mode not in MODES:
            raise ValueError("mode must be 'binomial' or 'poisson'")
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValueError("master_seed must be an unsigned 64-bit integer")

    def with_mode(self, mode: str) -> "ModelParams":
        return replace(self, mode=mode)


@dataclass
class FaultySectorGraph:
    """One realization: positions, orientations, alive flags and arcs.

    ``arcs`` is an ``(m, 2)`` integer array of ordered pairs, each present
    at most once.
    """

    params: ModelParams
    realized_count: int
    positions: np.ndarray
    orientations: np.ndarray
    alive: np.ndarray
    arcs: np.ndarray

    def arc_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.arcs}


@dataclass
class DegreeSummary:
    """Degrees of the alive vertices; dead vertices are absent."""

    alive_indices: np.ndarray
    out_degrees: np.ndarray
    in_degrees: np.ndarray
    max_out: int
    max_in: int
    alive_count: int
    empty: bool


def sample_graph(params: ModelParams, stream: TrialStream) -> FaultySectorGraph:
    """Draw one realization from the given trial stream."""
    gen = stream.generator
    if params.mode == "poisson":
        realized = int(gen.poisson(params.n))
    else:
        realized = int(params.n)
    positions = gen.random((realized, 2))
    orientations = TWO_PI * gen.random(realized)
    alive = gen.random(realized) < 1.0 - params.v

    alive_idx = np.nonzero(alive)[0]
    if alive_idx.size < 2:
        arcs = np.empty((0, 2), dtype=np.int64)
        return FaultySectorGraph(params, realized, positions, orientations, alive, arcs)

    # Dead vertices neither send nor receive, so index only the alive ones.
    alive_pos = positions[alive_idx]
    idx = build_index(alive_pos, params.r)
    ia, ja = ordered_pairs_within(idx, alive_pos, params.r)
    i, j = alive_idx[ia], alive_idx[ja]
    dx = positions[j, 0] - positions[i, 0]
    dy = positions[j, 1] - positions[i, 1]
    # Coincident points are excluded like the sector apex.
    keep = ((dx != 0.0) | (dy != 0.0)) & angle_in_arc(
        dx, dy, orientations[i], params.alpha
    )
    i, j = i[keep], j[keep]
    if params.q > 0.0 and i.size:
        survives = stream.pair_uniforms(i, j) >= params.q
        i, j = i[survives], j[survives]
    arcs = np.stack([i, j], axis=1) if i.size else np.empty((0, 2), dtype=np.int64)
    return FaultySectorGraph(params, realized, positions, orientations, alive, arcs)


def sample_trial(params: ModelParams, trial_index: int) -> FaultySectorGraph:
    """Realization of trial ``trial_index`` under ``params.master_seed``."""
    return sample_graph(params, TrialStream(params.master_seed, trial_index))


def _degree_arrays(g: FaultySectorGraph) -> tuple[np.ndarray, np.ndarray]:
    n = g.realized_count
    if g.arcs.shape[0] == 0:
        z = np.zeros(n, dtype=np.int64)
        return z, z.copy()
    out_all = np.bincount(g.arcs[:, 0], minlength=n)
    in_all = np.bincount(g.arcs[:, 1], minlength=n)
    return out_all, in_all


def degree_summary(g: FaultySectorGraph) -> DegreeSummary:
    """Out/in degree of every alive vertex plus the maxima.

    An empty alive set reports maxima 0 with the ``empty`` flag set.
    """
    out_all, in_all = _degree_arrays(g)
    alive_idx = np.nonzero(g.alive)[0]
    out_deg = out_all[alive_idx]
    in_deg = in_all[alive_idx]
    empty = alive_idx.size == 0
    return DegreeSummary(
        alive_indices=alive_idx,
        out_degrees=out_deg,
        in_degrees=in_deg,
        max_out=0 if empty else int(out_deg.max()),
        max_in=0 if empty else int(in_deg.max()),
        alive_count=int(alive_idx.size),
        empty=empty,
    )


def degree_count(g: FaultySectorGraph, degree_set: DegreeSet, side: str) -> int:
    """Number of alive vertices whose out- or in-degree lies in the set."""
    if side not in ("out", "in"):
        raise ValueError("side must be 'out' or 'in'")
    summary = degree_summary(g)
    degrees = summary.out_degrees if side == "out" else summary.in_degrees
    return degree_set.count_in(degrees)


def interior_out_degree_stats(g: FaultySectorGraph) -> tuple[int, int]:
    """(sum of out-degrees, vertex count) over alive vertices farther than
    ``r`` from every side of the square."""
    out_all, _ = _degree_arrays(g)
    r = g.params.r
    p = g.positions
    mask = (
        g.alive
        & (p[:, 0] > r)
        & (p[:, 0] < 1.0 - r)
        & (p[:, 1] > r)
        & (p[:, 1] < 1.0 - r)
    )
    return int(out_all[mask].sum()), int(np.count_nonzero(mask))


def write_edge_list(g: FaultySectorGraph, path) -> None:
    """Text dump: header ``N alive_count``, then one arc ``i j`` per line."""
    summary = degree_summary(g)
    with open(path, "w") as fh:
        fh.write(f"{g.realized_count} {summary.alive_count}\n")
        for a, b in g.arcs:
            fh.write(f"{int(a)} {int(b)}\n")


def write_vertex_csv(g: FaultySectorGraph, path) -> None:
    """CSV dump with columns index, x, y, theta, alive."""
    with open(path, "w") as fh:
        fh.write("index,x,y,theta,alive\n")
        for k in range(g.realized_count):
            fh.write(
                f"{k},{g.positions[k, 0]:.17g},{g.positions[k, 1]:.17g},"
                f"{g.orientations[k]:.17g},{int(g.alive[k])}\n"
            )


def mean_alive_count(params: ModelParams) -> float:
    """Expected number of alive vertices."""
    return params.n * (1.0 - params.v)


def boundary_strip_fraction(r: float) -> float:
    """Area of the strip within ``r`` of the square boundary."""
    return 1.0 - (1.0 - 2.0 * r) ** 2 if r < 0.5 else 1.0


def check_structure(g: FaultySectorGraph) -> None:
    """Raise AssertionError if a structural invariant fails.

    Checks arc-degree conservation, no dead endpoints, distance bound, and
    sector membership of every arc.
    """
    out_all, in_all = _degree_arrays(g)
    assert out_all.sum() == in_all.sum() == g.arcs.shape[0]
    if g.arcs.shape[0]:
        i, j = g.arcs[:, 0], g.arcs[:, 1]
        assert bool(np.all(g.alive[i]) and np.all(g.alive[j]))
        d = g.positions[j] - g.positions[i]
        d2 = d[:, 0] ** 2 + d[:, 1] ** 2
        assert bool(np.all(d2 <= g.params.r**2) and np.all(d2 > 0.0))
        ok = angle_in_arc(d[:, 0], d[:, 1], g.orientations[i], g.params.alpha)
        assert bool(np.all(ok))
