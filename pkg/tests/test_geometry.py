import math

import mpmath as mp
import numpy as np
import pytest

from sectorgraphs.geometry import (
    Point2,
    Sector,
    TWO_PI,
    UNIT_DISK_AREA,
    build_index,
    clipped_area,
    neighbors_within,
    ordered_pairs_within,
    sector_contains,
)


def test_unit_disk_area_is_pi():
    assert UNIT_DISK_AREA == math.pi


class TestTypes:
    def test_point_outside_square_rejected(self):
        with pytest.raises(ValueError):
            Point2(1.2, 0.5)
        with pytest.raises(ValueError):
            Point2(0.5, -0.001)

    def test_sector_field_validation(self):
        apex = Point2(0.5, 0.5)
        with pytest.raises(ValueError):
            Sector(apex, -0.1, math.pi, 0.1)
        with pytest.raises(ValueError):
            Sector(apex, 0.0, 0.0, 0.1)
        with pytest.raises(ValueError):
            Sector(apex, 0.0, 2.5 * TWO_PI, 0.1)
        with pytest.raises(ValueError):
            Sector(apex, 0.0, math.pi, 0.0)


class TestSectorContains:
    def test_interior_point(self):
        s = Sector(Point2(0.5, 0.5), 0.0, math.pi / 2, 0.1)
        assert sector_contains(s, Point2(0.55, 0.55))

    def test_outside_radius(self):
        s = Sector(Point2(0.5, 0.5), 0.0, math.pi / 2, 0.1)
        assert not sector_contains(s, Point2(0.5, 0.39))

    def test_wraparound_arc(self):
        s = Sector(Point2(0.5, 0.5), 7 * math.pi / 4, math.pi / 2, 0.1)
        assert sector_contains(s, Point2(0.58, 0.5))

    def test_apex_excluded(self):
        s = Sector(Point2(0.5, 0.5), 0.0, TWO_PI, 0.1)
        assert not sector_contains(s, Point2(0.5, 0.5))

    def test_full_disk_ignores_angle(self):
        s = Sector(Point2(0.5, 0.5), 1.234, TWO_PI, 0.2)
        for ang in np.linspace(0, TWO_PI, 17, endpoint=False):
            p = Point2(0.5 + 0.15 * math.cos(ang), 0.5 + 0.15 * math.sin(ang))
            assert sector_contains(s, p)

    def test_matches_extended_precision(self):
        # Direct evaluation of distance and reduced angle at 50 digits.
        rng = np.random.default_rng(20240831)
        two_pi_mp = 2 * mp.pi
        with mp.workdps(50):
            for _ in range(10_000):
                ax, ay = rng.random(2)
                elev = float(TWO_PI * rng.random())
                width = float(TWO_PI * rng.random()) or 1e-3
                radius = float(0.01 + 0.3 * rng.random())
                px, py = rng.random(2)
                s = Sector(Point2(ax, ay), elev, width, radius)
                got = sector_contains(s, Point2(px, py))
                dx, dy = mp.mpf(px) - mp.mpf(ax), mp.mpf(py) - mp.mpf(ay)
                d2 = dx * dx + dy * dy
                if d2 == 0 or d2 > mp.mpf(radius) ** 2:
                    expected = False
                else:
                    rel = (mp.atan2(dy, dx) - mp.mpf(elev)) % two_pi_mp
                    expected = rel < mp.mpf(width)
                assert got == expected


class TestClippedArea:
    def test_interior_full_disk(self):
        s = Sector.disk(Point2(0.5, 0.5), 0.1)
        est, se = clipped_area(s)
        assert se == 0.0
        assert est == pytest.approx(math.pi * 0.01, rel=1e-15)

    def test_interior_half_disk(self):
        s = Sector(Point2(0.5, 0.5), 1.0, math.pi, 0.1)
        est, se = clipped_area(s)
        assert est == pytest.approx(0.5 * math.pi * 0.01, rel=1e-15)

    def test_corner_quarter_disk(self):
        s = Sector.disk(Point2(0.0, 0.0), 0.1)
        est, se = clipped_area(s, samples=200_000, seed=3)
        assert se > 0.0
        assert abs(est - 0.25 * math.pi * 0.01) <= 4.0 * se

    def test_monotone_in_radius_shared_stream(self):
        apex = Point2(0.03, 0.4)
        radii = [0.05, 0.1, 0.15, 0.2, 0.3, 0.4]
        estimates = [
            clipped_area(Sector(apex, 0.7, 4.0, r), samples=50_000, seed=11)[0]
            for r in radii
        ]
        assert all(b >= a for a, b in zip(estimates, estimates[1:]))

    def test_quadrant_additivity(self):
        apex = Point2(0.06, 0.35)
        radius = 0.15
        full, se_full = clipped_area(Sector.disk(apex, radius), seed=5)
        parts = [
            clipped_area(
                Sector(apex, k * math.pi / 2, math.pi / 2, radius), seed=50 + k
            )
            for k in range(4)
        ]
        total = sum(p[0] for p in parts)
        combined = math.sqrt(se_full**2 + sum(p[1] ** 2 for p in parts))
        assert abs(full - total) <= 4.0 * combined


class TestGridIndex:
    def test_empty(self):
        idx = build_index([], 0.1)
        assert idx.count == 0
        assert idx.buckets == {}
        assert neighbors_within(idx, [], Point2(0.5, 0.5), 0.1).size == 0

    def test_three_points_one_cell(self):
        pts = [Point2(0.51, 0.51), Point2(0.52, 0.52), Point2(0.53, 0.53)]
        idx = build_index(pts, 0.1)
        assert idx.count == 3
        assert len(idx.buckets) == 1
        (bucket,) = idx.buckets.values()
        assert bucket == [0, 1, 2]

    def test_buckets_partition_points(self):
        rng = np.random.default_rng(7)
        pts = rng.random((10_000, 2))
        idx = build_index(pts, 0.03)
        seen = [i for bucket in idx.buckets.values() for i in bucket]
        assert sorted(seen) == list(range(10_000))

    def test_rejects_nonpositive_cell(self):
        with pytest.raises(ValueError):
            build_index([], 0.0)

    def test_rejects_oversized_radius(self):
        pts = np.array([[0.5, 0.5]])
        idx = build_index(pts, 0.1)
        with pytest.raises(ValueError):
            neighbors_within(idx, pts, Point2(0.5, 0.5), 0.2)
        with pytest.raises(ValueError):
            ordered_pairs_within(idx, pts, 0.2)

    def test_isolated_point(self):
        pts = np.array([[0.5, 0.5], [0.9, 0.9]])
        idx = build_index(pts, 0.05)
        got = neighbors_within(idx, pts, Point2(0.5, 0.5), 0.05)
        assert got.tolist() == [0]

    def test_all_points_identical(self):
        pts = np.full((25, 2), 0.4)
        idx = build_index(pts, 0.01)
        got = neighbors_within(idx, pts, Point2(0.4, 0.4), 0.01)
        assert got.tolist() == list(range(25))

    def test_queries_match_linear_scan(self):
        rng = np.random.default_rng(123)
        pts = rng.random((500, 2))
        radius = 0.07
        idx = build_index(pts, radius)
        for _ in range(100):
            c = rng.random(2)
            got = set(neighbors_within(idx, pts, c, radius).tolist())
            d2 = np.sum((pts - c) ** 2, axis=1)
            want = set(np.nonzero(d2 <= radius * radius)[0].tolist())
            assert got == want

    def test_ordered_pairs_match_linear_scan(self):
        rng = np.random.default_rng(321)
        pts = rng.random((400, 2))
        radius = 0.06
        idx = build_index(pts, radius)
        gi, gj = ordered_pairs_within(idx, pts, radius)
        got = set(zip(gi.tolist(), gj.tolist()))
        dx = pts[None, :, 0] - pts[:, None, 0]
        dy = pts[None, :, 1] - pts[:, None, 1]
        close = dx * dx + dy * dy <= radius * radius
        np.fill_diagonal(close, False)
        want = set(zip(*[a.tolist() for a in np.nonzero(close)]))
        assert got == want

    def test_point_on_square_border_indexed(self):
        pts = np.array([[1.0, 1.0], [0.98, 0.98]])
        idx = build_index(pts, 0.05)
        got = neighbors_within(idx, pts, Point2(1.0, 1.0), 0.05)
        assert got.tolist() == [0, 1]
