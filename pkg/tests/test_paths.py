import math

import numpy as np
import pytest
from _oracles import connection_integral_quad, inverse_radius_quad, random_star_loop

from wirespin import (
    OpenPathError,
    PhaseGauge,
    SingularityError,
    line_integral_connection,
    winding_number,
)
from wirespin.paths import inverse_radius_integral, path_clearance, unwound_angles


def circle(radius=0.3, n=400, clockwise=False, center=(0.0, 0.0)):
    th = np.linspace(0.0, 2 * math.pi, n)
    if clockwise:
        th = th[::-1]
    return np.column_stack(
        [center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)]
    )


class TestUnwoundAngles:
    def test_multiturn_spiral(self):
        th = np.linspace(0.0, 6 * math.pi, 1000)
        pts = np.column_stack([np.cos(th), np.sin(th)])
        rec = unwound_angles(pts)
        assert rec[-1] - rec[0] == pytest.approx(6 * math.pi, abs=1e-9)

    def test_straight_segment_below_pi(self):
        pts = np.array([[-5.0, 0.01], [5.0, 0.01]])
        rec = unwound_angles(pts)
        assert abs(rec[-1] - rec[0]) < math.pi


class TestLineIntegral:
    def test_straight_segment_vs_quadrature(self, rng):
        for _ in range(10):
            p0 = rng.uniform(-1, 1, 2)
            p1 = rng.uniform(-1, 1, 2)
            pts = np.vstack([p0, p1])
            if path_clearance(pts) < 0.05:
                continue
            ours = line_integral_connection(pts)
            oracle = connection_integral_quad(pts)
            assert ours == pytest.approx(oracle, abs=1e-10)

    def test_equals_half_angle_change(self):
        pts = np.array([[-0.4, 0.1], [0.4, 0.1]])
        th = unwound_angles(pts)
        assert line_integral_connection(pts) == pytest.approx(
            -0.5 * (th[-1] - th[0]), abs=1e-15
        )

    def test_counterclockwise_circle(self):
        assert line_integral_connection(circle()) == pytest.approx(-math.pi, abs=1e-12)

    def test_clockwise_circle(self):
        assert line_integral_connection(circle(clockwise=True)) == pytest.approx(
            math.pi, abs=1e-12
        )

    def test_non_enclosing_loop(self):
        loop = circle(radius=0.2, center=(1.0, 0.5))
        assert abs(line_integral_connection(loop)) <= 1e-10

    def test_additive_over_concatenation(self, rng):
        pts = np.array([[0.5, 0.0], [0.4, 0.6], [-0.7, 0.2], [-0.3, -0.8]])
        whole = line_integral_connection(pts)
        parts = sum(
            line_integral_connection(pts[i : i + 2]) for i in range(len(pts) - 1)
        )
        assert whole == pytest.approx(parts, abs=1e-14)

    def test_reversal_negates(self):
        pts = np.array([[0.5, 0.0], [0.4, 0.6], [-0.7, 0.2]])
        assert line_integral_connection(pts[::-1]) == pytest.approx(
            -line_integral_connection(pts), abs=1e-15
        )

    def test_wire_clearance_enforced(self):
        pts = np.array([[-1.0, 1e-4], [1.0, 1e-4]])
        with pytest.raises(SingularityError):
            line_integral_connection(pts)

    def test_quantization_mod_2pi(self, rng):
        # any closed loop avoiding the wire: integral mod 2pi is 0 or pi
        for k in range(25):
            enclosing = k % 2 == 0
            center = (0.0, 0.0) if enclosing else (2.0, -1.0)
            loop = random_star_loop(rng, center=center, clockwise=bool(k % 3))
            val = line_integral_connection(loop)
            frac = val % (2 * math.pi)
            dist = min(frac, 2 * math.pi - frac, abs(frac - math.pi))
            assert dist <= 1e-8

    def test_gauge_shifts_open_paths_only(self, rng):
        gauge = PhaseGauge(
            chi=lambda th: 0.4 * math.sin(th),
            dchi=lambda th: 0.4 * math.cos(th),
        )
        open_path = np.array([[0.5, 0.1], [0.1, 0.4], [-0.5, 0.2]])
        plain = line_integral_connection(open_path)
        twisted = line_integral_connection(open_path, gauge=gauge)
        assert abs(twisted - plain) > 1e-3
        assert twisted == pytest.approx(
            connection_integral_quad(open_path, gauge), abs=1e-9
        )
        for clockwise in (False, True):
            loop = random_star_loop(rng, clockwise=clockwise)
            assert line_integral_connection(loop, gauge=gauge) == pytest.approx(
                line_integral_connection(loop), abs=1e-10
            )


class TestWindingNumber:
    def test_unit_circle(self):
        assert winding_number(circle()) == 1
        assert winding_number(circle(clockwise=True)) == -1

    def test_two_turns(self):
        th = np.linspace(0.0, 4 * math.pi, 800)
        pts = np.column_stack([0.3 * np.cos(th), 0.3 * np.sin(th)])
        assert winding_number(pts) == 2

    def test_interferometer_style_loop(self):
        loop = np.array(
            [[-0.2, 0.0], [0.0, -0.1], [0.2, 0.0], [0.0, 0.1], [-0.2, 0.0]]
        )
        assert winding_number(loop) == 1
        assert winding_number(loop[::-1]) == -1

    def test_wire_outside(self):
        assert winding_number(circle(radius=0.2, center=(1.0, 0.0))) == 0

    def test_open_path_rejected(self):
        pts = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(OpenPathError):
            winding_number(pts)

    def test_origin_crossing_rejected(self):
        square = np.array(
            [[1.0, 1e-6], [-1.0, 1e-6], [-1.0, -1e-6], [1.0, -1e-6], [1.0, 1e-6]]
        )
        with pytest.raises(SingularityError):
            winding_number(square)


class TestInverseRadiusIntegral:
    def test_vs_quadrature(self, rng):
        for _ in range(10):
            pts = rng.uniform(-1, 1, (3, 2))
            if path_clearance(pts) < 0.05:
                continue
            assert inverse_radius_integral(pts) == pytest.approx(
                inverse_radius_quad(pts), rel=1e-10
            )

    def test_radial_segment(self):
        pts = np.array([[0.1, 0.0], [1.0, 0.0]])
        assert inverse_radius_integral(pts) == pytest.approx(math.log(10.0), rel=1e-12)

    def test_close_passage_stable(self):
        pts = np.array([[-1.0, 6e-3], [1.0, 6e-3]])
        assert inverse_radius_integral(pts) == pytest.approx(
            inverse_radius_quad(pts), rel=1e-9
        )
