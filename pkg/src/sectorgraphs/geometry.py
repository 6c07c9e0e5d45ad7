"""Planar primitives on the unit square: sectors, clipped areas, grid index.

All geometry lives in ``Q = [0, 1]^2`` with the Euclidean norm. A sector is
the set of points within ``radius`` of its apex whose displacement angle,
measured anticlockwise from horizontal, falls in the half-open arc
``[elevation, elevation + central_angle)`` taken mod ``2*pi``. The apex
itself is excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

# Area of the unit disk.
UNIT_DISK_AREA = math.pi


@dataclass(frozen=True)
class Point2:
    """A point of the unit square."""

    x: float
    y: float

    def __post_init__(self):
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise ValueError(f"point ({self.x}, {self.y}) outside [0,1]^2")


@dataclass(frozen=True)
class Sector:
    """Circular sector with apex, anticlockwise elevation, angle and radius.

    ``central_angle == 2*pi`` makes the sector the full disk around the apex.
    """

    apex: Point2
    elevation: float
    central_angle: float
    radius: float

    def __post_init__(self):
        if not (0.0 <= self.elevation < TWO_PI):
            raise ValueError(f"elevation {self.elevation} outside [0, 2*pi)")
        if not (0.0 < self.central_angle <= TWO_PI):
            raise ValueError(f"central_angle {self.central_angle} outside (0, 2*pi]")
        if not self.radius > 0.0:
            raise ValueError(f"radius {self.radius} must be positive")

    @classmethod
    def disk(cls, apex: Point2, radius: float) -> "Sector":
        return cls(apex=apex, elevation=0.0, central_angle=TWO_PI, radius=radius)

    @property
    def area(self) -> float:
        """Unclipped area, ``central_angle / 2 * radius**2``."""
        return 0.5 * self.central_angle * self.radius**2


def angle_in_arc(dx, dy, elevation, width):
    """True where the direction of ``(dx, dy)`` lies in ``[elevation, elevation+width) mod 2*pi``.

    Broadcasts over array inputs. ``width == 2*pi`` always passes because the
    reduced relative angle lives in ``[0, 2*pi)``.
    """
    rel = np.mod(np.arctan2(dy, dx) - elevation, TWO_PI)
    return rel < width


def sector_contains(s: Sector, p: Point2) -> bool:
    """Membership test; the apex itself is never contained."""
    dx = p.x - s.apex.x
    dy = p.y - s.apex.y
    d2 = dx * dx + dy * dy
    if d2 == 0.0 or d2 > s.radius * s.radius:
        return False
    return bool(angle_in_arc(dx, dy, s.elevation, s.central_angle))


def points_in_sector(
    apex_xy: np.ndarray,
    elevation,
    central_angle: float,
    radius: float,
    points: np.ndarray,
) -> np.ndarray:
    """Vectorized ``sector_contains`` over the last axis being (x, y).

    ``apex_xy`` and ``points`` broadcast against each other; coincident
    points are excluded like the scalar test.
    """
    delta = np.asarray(points, dtype=float) - np.asarray(apex_xy, dtype=float)
    d2 = delta[..., 0] ** 2 + delta[..., 1] ** 2
    inside = (d2 > 0.0) & (d2 <= radius * radius)
    return inside & angle_in_arc(delta[..., 0], delta[..., 1], elevation, central_angle)


def in_unit_square(points: np.ndarray) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    return (
        (p[..., 0] >= 0.0) & (p[..., 0] <= 1.0) & (p[..., 1] >= 0.0) & (p[..., 1] <= 1.0)
    )


def _sector_samples(s: Sector, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of the sector by area-preserving polar sampling."""
    u = rng.random(n)
    w = rng.random(n)
    rad = s.radius * np.sqrt(u)
    ang = s.elevation + s.central_angle * w
    return np.stack(
        [s.apex.x + rad * np.cos(ang), s.apex.y + rad * np.sin(ang)], axis=-1
    )


def clipped_area(
    s: Sector, samples: int = 100_000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of ``|sector ∩ [0,1]^2|`` with its standard error.

    Uniform samples are drawn inside the sector and rejected against the
    square, so the estimate is ``sector.area`` times a binomial fraction.
    Deterministic for a fixed ``seed``. Sectors whose enclosing disk lies
    inside the square need no sampling and return standard error 0.
    """
    r = s.radius
    if (
        s.apex.x - r >= 0.0
        and s.apex.x + r <= 1.0
        and s.apex.y - r >= 0.0
        and s.apex.y + r <= 1.0
    ):
        return s.area, 0.0
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = _sector_samples(s, samples, rng)
    frac = float(np.mean(in_unit_square(pts)))
    se = s.area * math.sqrt(frac * (1.0 - frac) / samples)
    return s.area * frac, se


def clipped_sector_areas(
    apex_xy: np.ndarray,
    elevation: np.ndarray,
    central_angle: float,
    radius: float,
    samples: int,
    rng: np.random.Generator,
    chunk: int = 512,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched ``clipped_area`` for many sectors sharing angle and radius.

    Returns per-sector area estimates and standard errors. Rows whose
    enclosing disk is interior to the square are exact with zero error;
    the rest share no samples, so row errors are independent.
    """
    apex = np.asarray(apex_xy, dtype=float)
    elev = np.broadcast_to(np.asarray(elevation, dtype=float), apex.shape[:1]).copy()
    m = apex.shape[0]
    full = 0.5 * central_angle * radius * radius
    areas = np.full(m, full)
    ses = np.zeros(m)
    clipped = ~(
        (apex[:, 0] >= radius)
        & (apex[:, 0] <= 1.0 - radius)
        & (apex[:, 1] >= radius)
        & (apex[:, 1] <= 1.0 - radius)
    )
    idx = np.nonzero(clipped)[0]
    for lo in range(0, idx.size, chunk):
        rows = idx[lo : lo + chunk]
        u = rng.random((rows.size, samples))
        w = rng.random((rows.size, samples))
        rad = radius * np.sqrt(u)
        ang = elev[rows, None] + central_angle * w
        x = apex[rows, 0, None] + rad * np.cos(ang)
        y = apex[rows, 1, None] + rad * np.sin(ang)
        ok = (x >= 0.0) & (x <= 1.0) & (y >= 0.0) & (y <= 1.0)
        frac = ok.mean(axis=1)
        areas[rows] = full * frac
        ses[rows] = full * np.sqrt(frac * (1.0 - frac) / samples)
    return areas, ses


@dataclass
class GridIndex:
    """Uniform-grid point index; a range query with radius <= cell_size
    inspects only the 3x3 cell neighborhood of the query point."""

    cell_size: float
    count: int
    _keys: np.ndarray = field(repr=False)
    _order: np.ndarray = field(repr=False)
    _stride: int = field(repr=False)

    @property
    def buckets(self) -> dict[tuple[int, int], list[int]]:
        """Cell coordinates -> indices of the points in that cell."""
        out: dict[tuple[int, int], list[int]] = {}
        if self.count == 0:
            return out
        edges = np.nonzero(np.diff(self._keys))[0] + 1
        starts = np.concatenate(([0], edges))
        stops = np.concatenate((edges, [self.count]))
        for a, b in zip(starts, stops):
            key = int(self._keys[a])
            cell = (key // self._stride - 1, key % self._stride - 1)
            out[cell] = sorted(int(i) for i in self._order[a:b])
        return out


def _cell_keys(points: np.ndarray, cell_size: float, stride: int) -> np.ndarray:
    cells = np.floor(points / cell_size).astype(np.int64)
    return (cells[:, 0] + 1) * stride + (cells[:, 1] + 1)


def as_xy_array(points) -> np.ndarray:
    """Accept an (N, 2) array or a sequence of Point2."""
    if isinstance(points, np.ndarray):
        return points.reshape(-1, 2).astype(float, copy=False)
    return np.array([(p.x, p.y) for p in points], dtype=float).reshape(-1, 2)


def build_index(points, cell_size: float) -> GridIndex:
    """Index points on a grid of the given cell size (must be positive)."""
    if not cell_size > 0.0:
        raise ValueError("cell_size must be positive")
    xy = as_xy_array(points)
    stride = int(math.floor(1.0 / cell_size)) + 4
    if xy.shape[0] == 0:
        empty = np.empty(0, dtype=np.int64)
        return GridIndex(cell_size, 0, empty, empty, stride)
    keys = _cell_keys(xy, cell_size, stride)
    order = np.argsort(keys, kind="stable")
    return GridIndex(cell_size, xy.shape[0], keys[order], order, stride)


_NEIGHBOR_OFFSETS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]


def neighbors_within(idx: GridIndex, points, center, radius: float) -> np.ndarray:
    """Indices of all points within ``radius`` of ``center`` (inclusive).

    Requires ``radius <= cell_size``; a point equal to the center is
    included, so callers exclude self by index.
    """
    if radius > idx.cell_size:
        raise ValueError("radius must not exceed the index cell size")
    if idx.count == 0:
        return np.empty(0, dtype=np.int64)
    xy = as_xy_array(points)
    cx, cy = (
        (center.x, center.y) if isinstance(center, Point2) else (center[0], center[1])
    )
    ix = math.floor(cx / idx.cell_size)
    iy = math.floor(cy / idx.cell_size)
    chunks = []
    for dx, dy in _NEIGHBOR_OFFSETS:
        key = (ix + dx + 1) * idx._stride + (iy + dy + 1)
        a = np.searchsorted(idx._keys, key, "left")
        b = np.searchsorted(idx._keys, key, "right")
        if b > a:
            chunks.append(idx._order[a:b])
    if not chunks:
        return np.empty(0, dtype=np.int64)
    cand = np.concatenate(chunks)
    d2 = (xy[cand, 0] - cx) ** 2 + (xy[cand, 1] - cy) ** 2
    return np.sort(cand[d2 <= radius * radius])


def _expand_ranges(starts: np.ndarray, stops: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    counts = stops - starts
    total = int(counts.sum())
    if total == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e
    rows = np.repeat(np.arange(starts.size, dtype=np.int64), counts)
    excl = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pos = np.arange(total, dtype=np.int64) - np.repeat(excl, counts) + np.repeat(starts, counts)
    return rows, pos


def ordered_pairs_within(
    idx: GridIndex, points, radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """All ordered pairs ``(i, j)``, ``i != j``, with ``|p_i - p_j| <= radius``.

    Bulk companion to ``neighbors_within`` used by the graph sampler;
    requires ``radius <= cell_size``. The three neighbor keys of one cell
    row are consecutive integers, so each row contributes one contiguous
    range of the sorted key array.
    """
    if radius > idx.cell_size:
        raise ValueError("radius must not exceed the index cell size")
    xy = as_xy_array(points)
    n = xy.shape[0]
    if n == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e
    cells = np.floor(xy / idx.cell_size).astype(np.int64)
    base = (cells[:, 0] + 1) * idx._stride + (cells[:, 1] + 1)
    out_i = []
    out_j = []
    for dx in (-1, 0, 1):
        nkey = base + dx * idx._stride
        starts = np.searchsorted(idx._keys, nkey - 1, "left")
        stops = np.searchsorted(idx._keys, nkey + 2, "left")
        rows, pos = _expand_ranges(starts, stops)
        out_i.append(rows)
        out_j.append(idx._order[pos])
    i = np.concatenate(out_i)
    j = np.concatenate(out_j)
    dx_ = xy[j, 0] - xy[i, 0]
    dy_ = xy[j, 1] - xy[i, 1]
    keep = (i != j) & (dx_ * dx_ + dy_ * dy_ <= radius * radius)
    return i[keep], j[keep]
