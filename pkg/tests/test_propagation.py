import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from encircle.engagement import wrap_angle
from encircle.propagation import (
    GeometryError,
    ObservationSet,
    flood,
    pair_geometry_from_positions,
    propagate_los,
    propagate_range,
)
from encircle.topology import CommGraph


def relative_geometry(xs, ys, tx, ty):
    """Ground-truth (range, LOS) of every attacker, straight from positions."""
    r = np.hypot(tx - xs, ty - ys)
    los = np.arctan2(ty - ys, tx - xs)
    return r, los


coord = st.floats(-20.0, 20.0)


class TestPropagateRange:
    def test_right_triangle(self):
        # target ahead of the near attacker at range 3, far attacker 4 to the
        # side: the far range closes the 3-4-5 triangle
        assert propagate_range(3.0, 4.0, math.pi / 2, 0.0) == pytest.approx(5.0)

    def test_degenerate_baseline(self):
        assert propagate_range(2.5, 0.0, 1.0, -2.0) == pytest.approx(2.5)

    def test_collinear_shrinks(self):
        # far attacker sits between near attacker and target
        assert propagate_range(7.0, 3.0, 0.4, 0.4) == pytest.approx(4.0)

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            propagate_range(0.0, 1.0, 0.0, 0.0)

    def test_rejects_negative_baseline(self):
        with pytest.raises(ValueError):
            propagate_range(1.0, -1.0, 0.0, 0.0)


class TestPropagateLos:
    def test_right_triangle(self):
        los_j = propagate_los(math.pi / 2, 0.0, 4.0, 5.0, 3.0)
        assert los_j == pytest.approx(math.pi / 2 + math.atan2(4.0, 3.0))

    def test_obtuse_branch(self):
        """The naive arcsin branch fails when the triangle's angle at the
        target exceeds pi/2; check against exact coordinates."""
        xs = np.array([0.0, 3.0])
        ys = np.array([0.0, 0.5])
        tx, ty = 1.0, 0.0
        r, los = relative_geometry(xs, ys, tx, ty)
        b, br = pair_geometry_from_positions(xs, ys)
        got = propagate_los(los[0], br[0, 1], b[0, 1], r[1], r[0])
        assert got == pytest.approx(wrap_angle(los[1]), abs=1e-12)
        # the principal arcsin branch is indeed wrong here
        naive = los[0] + math.asin(b[0, 1] * math.sin(los[0] - br[0, 1]) / r[1])
        assert abs(wrap_angle(naive - los[1])) > 0.1

    def test_rejects_inconsistent_triangle(self):
        with pytest.raises(GeometryError):
            propagate_los(math.pi / 2, 0.0, 10.0, 1.0, 3.0)

    @given(coord, coord, coord, coord, coord, coord)
    @settings(max_examples=300)
    def test_round_trip_from_positions(self, x0, y0, x1, y1, tx, ty):
        xs, ys = np.array([x0, x1]), np.array([y0, y1])
        r, los = relative_geometry(xs, ys, tx, ty)
        if r.min() < 1e-3:
            return
        b, br = pair_geometry_from_positions(xs, ys)
        r1 = propagate_range(r[0], b[0, 1], los[0], br[0, 1])
        assert r1 == pytest.approx(r[1], abs=1e-8)
        los1 = propagate_los(los[0], br[0, 1], b[0, 1], r1, r[0])
        assert wrap_angle(los1 - los[1]) == pytest.approx(0.0, abs=1e-6)


class TestObservationSet:
    def test_requires_an_observer(self):
        with pytest.raises(ValueError, match="at least one observer"):
            ObservationSet(observers=frozenset(), known={})

    def test_observer_needs_data(self):
        with pytest.raises(ValueError, match="no observation"):
            ObservationSet(observers=frozenset({0}), known={1: (1.0, 0.0)})

    def test_complete_flag(self):
        obs = ObservationSet(observers=frozenset({0}), known={0: (1.0, 0.0)})
        assert obs.complete
        partial = ObservationSet(
            observers=frozenset({0}), known={0: (1.0, 0.0)}, uncovered=frozenset({2})
        )
        assert not partial.complete


class TestFlood:
    def _setup(self, weights, xs, ys, tx=6.5, ty=0.5, observers=(0,)):
        g = CommGraph(np.asarray(weights, dtype=float))
        r, los = relative_geometry(xs, ys, tx, ty)
        b, br = pair_geometry_from_positions(xs, ys)
        known = {i: (float(r[i]), float(los[i])) for i in observers}
        obs = ObservationSet(observers=frozenset(observers), known=known)
        return g, obs, b, br, r, los

    def test_chain_reaches_everyone(self):
        xs = np.array([0.0, 1.0, -2.0, 3.5])
        ys = np.array([0.0, 4.0, 1.0, -2.0])
        chain = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
        g, obs, b, br, r, los = self._setup(chain, xs, ys)
        out = flood(g, obs, b, br)
        assert out.complete
        for i in range(4):
            got_r, got_los = out.known[i]
            assert got_r == pytest.approx(r[i], abs=1e-9)
            assert wrap_angle(got_los - los[i]) == pytest.approx(0.0, abs=1e-9)

    def test_unreachable_node_reported(self):
        xs = np.array([0.0, 1.0, -2.0])
        ys = np.array([0.0, 4.0, 1.0])
        # node 2 has no in-edge from the informed side
        w = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
        g, obs, b, br, _, _ = self._setup(w, xs, ys)
        out = flood(g, obs, b, br)
        assert out.uncovered == frozenset({2})
        assert 1 in out.known and 2 not in out.known

    def test_two_observers_cover_split_graph(self):
        xs = np.array([0.0, 1.0, -2.0, 3.5])
        ys = np.array([0.0, 4.0, 1.0, -2.0])
        w = [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]
        g, obs, b, br, _, _ = self._setup(w, xs, ys, observers=(0, 2))
        assert flood(g, obs, b, br).complete

    def test_preserves_observer_data(self):
        xs = np.array([0.0, 1.0])
        ys = np.array([0.0, 4.0])
        g, obs, b, br, r, los = self._setup([[0, 0], [1, 0]], xs, ys)
        out = flood(g, obs, b, br)
        assert out.known[0] == obs.known[0]
        assert out.observers == obs.observers

    @given(st.lists(st.tuples(coord, coord), min_size=3, max_size=5), coord, coord)
    @settings(max_examples=100, deadline=None)
    def test_ring_flood_recovers_geometry(self, pts, tx, ty):
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        n = len(pts)
        r, los = relative_geometry(xs, ys, tx, ty)
        if r.min() < 1e-2:
            return
        ring = np.roll(np.eye(n), 1, axis=1)
        g, obs, b, br, _, _ = self._setup(ring, xs, ys, tx=tx, ty=ty)
        out = flood(g, obs, b, br)
        assert out.complete
        for i in range(n):
            assert out.known[i][0] == pytest.approx(r[i], rel=1e-6, abs=1e-6)
