import math

import numpy as np
import pytest

from wirespin import (
    ConicRangeError,
    ConservationError,
    EmptyWindowError,
    OrbitParams,
    PlanarState,
    ValidationError,
    WireCollisionError,
    analytic_orbit,
    asymptote_angles,
    conic_radius,
    current_window,
    eccentricity,
    eccentricity_from_conserved,
    integrate_orbit,
    integrate_orbit_from,
    launch_state,
    wire_feasibility,
)

NOMINAL = dict(speed=2000.0, impact_parameter=0.1, current=400.0)


class TestEccentricity:
    def test_reference_point(self, consts):
        # independent scalar oracle: q = m v^2 b / (c0 I); eps ~ q for q >> 1
        q = consts.m_n * 2000.0**2 * 0.1 / (consts.c0 * 400.0)
        eps = eccentricity(OrbitParams(**NOMINAL), consts)
        assert q == pytest.approx(1.74e9, rel=5e-3)
        assert eps == pytest.approx(math.sqrt(1.0 + q * q), rel=1e-12)

    def test_slow_limit_tends_to_one(self, consts):
        values = [
            eccentricity(OrbitParams(v, 0.1, 400.0), consts)
            for v in (100.0, 10.0, 1.0, 0.001)
        ]
        assert all(e > 1.0 for e in values)
        assert values[-1] == pytest.approx(1.0, abs=1e-6)
        assert np.all(np.diff(values) < 0)

    def test_matches_conserved_quantity_form(self, consts, rng):
        for _ in range(50):
            v = rng.uniform(1.0, 5000.0)
            b = rng.uniform(0.01, 1.0)
            current = rng.uniform(1.0, 1e6)
            params = OrbitParams(v, b, current)
            e1 = eccentricity(params, consts)
            e2 = eccentricity_from_conserved(
                0.5 * consts.m_n * v**2, consts.m_n * v * b, current, consts
            )
            assert e1 == pytest.approx(e2, rel=1e-12)

    def test_hyperbolic_for_positive_energy(self, consts, rng):
        for _ in range(50):
            params = OrbitParams(
                rng.uniform(0.1, 4000.0), rng.uniform(0.02, 0.5), rng.uniform(1, 1e8)
            )
            assert eccentricity(params, consts) > 1.0


class TestConicSolution:
    def test_radius_where_sine_vanishes(self, consts):
        # attractive branch includes theta = pi: r = L^2 / (m c0 I) there
        params = OrbitParams(500.0, 0.05, 2e7, branch=-1)
        p = params.latus_rectum(consts)
        assert conic_radius(math.pi, params, consts) == pytest.approx(p, rel=1e-12)

    def test_asymptote_condition(self, consts):
        params = OrbitParams(500.0, 0.05, 2e7, branch=-1)
        eps = eccentricity(params, consts)
        lo, hi = asymptote_angles(params, consts)
        assert 1.0 + eps * math.sin(hi) == pytest.approx(0.0, abs=1e-9 * eps)
        assert 1.0 + eps * math.sin(lo) == pytest.approx(0.0, abs=1e-9 * eps)

    def test_range_error_past_asymptote(self, consts):
        params = OrbitParams(500.0, 0.05, 2e7, branch=-1)
        lo, hi = asymptote_angles(params, consts)
        with pytest.raises(ConicRangeError) as err:
            conic_radius(hi + 0.1, params, consts)
        assert f"{hi:.6f}" in str(err.value)

    def test_grid_must_decrease(self, consts):
        params = OrbitParams(**NOMINAL)
        with pytest.raises(ValidationError):
            analytic_orbit(params, consts, np.linspace(0.5, 2.5, 50))


def draw_params(rng, consts, log_eps):
    """Orbit parameters hitting a target eccentricity decade."""
    eps = 10.0**log_eps
    v = rng.uniform(500.0, 4000.0)
    b = rng.uniform(0.02, 0.3)
    branch = int(rng.choice([-1, 1]))
    current = consts.m_n * v * v * b / (consts.c0 * math.sqrt(eps**2 - 1.0))
    return OrbitParams(v, b, current, branch=branch)


class TestCrossValidation:
    def test_analytic_vs_integrated(self, consts, rng):
        # the module's central consistency check, spanning eps over ten decades
        for trial in range(20):
            log_eps = rng.uniform(math.log10(1.5), 10.0)
            params = draw_params(rng, consts, log_eps)
            lo, hi = asymptote_angles(params, consts)
            span = 0.8
            theta_grid = np.linspace(
                math.pi / 2 + span * (hi - math.pi / 2),
                math.pi / 2 - span * (math.pi / 2 - lo),
                400,
            )
            reference = analytic_orbit(params, consts, theta_grid)
            _, start = reference.state(0)
            integrated = integrate_orbit_from(
                start,
                params.branch,
                params.current,
                consts,
                (0.0, reference.duration),
                n_samples=300,
                wire_radius=0.0,
            )
            r_conic = conic_radius(integrated.theta, params, consts)
            rel = np.max(np.abs(integrated.r - r_conic) / r_conic)
            assert rel < 1e-8, f"trial {trial}: mismatch {rel}"
            de, dl = integrated.conservation_drift()
            assert de < 1e-9 and dl < 1e-9

    def test_analytic_orbit_conserves_exactly(self, consts):
        params = OrbitParams(800.0, 0.08, 5e6, branch=-1)
        lo, hi = asymptote_angles(params, consts)
        grid = np.linspace(math.pi / 2 + 0.9 * (hi - math.pi / 2), lo + 0.05, 500)
        traj = analytic_orbit(params, consts, grid)
        de, dl = traj.conservation_drift()
        assert de < 1e-12 and dl < 1e-12


class TestIntegration:
    def test_force_free_straight_line(self, consts):
        start = PlanarState(-2.0, 0.1, vx=2000.0, vy=0.0)
        traj = integrate_orbit_from(start, 1, 0.0, consts, (0.0, 2e-3), n_samples=200)
        assert np.all(traj.y == 0.1)
        assert np.allclose(traj.x, -2.0 + 2000.0 * traj.t, rtol=0, atol=1e-12)

    def test_straight_line_regime_deflection(self, consts):
        params = OrbitParams(**NOMINAL, branch=1)
        eps = eccentricity(params, consts)
        start = PlanarState(-0.2, 0.1, vx=2000.0, vy=0.0)
        traj = integrate_orbit_from(
            start, 1, 400.0, consts, (0.0, 0.4 / 2000.0), n_samples=400
        )
        deviation = np.max(np.abs(traj.y - 0.1))
        # small-angle oracle: deflection angle ~ 2/eps over the window
        bound = 3.0 * 0.4 / eps
        assert 0.0 < deviation < bound

    def test_branch_mirror_symmetry(self, consts):
        start = PlanarState(-0.2, 0.1, vx=2000.0, vy=0.0)
        span = (0.0, 0.4 / 2000.0)
        up = integrate_orbit_from(start, 1, 400.0, consts, span, n_samples=300)
        down = integrate_orbit_from(start, -1, 400.0, consts, span, n_samples=300)
        dev_up = up.y - 0.1
        dev_down = down.y - 0.1
        scale = np.max(np.abs(dev_up))
        # 1e-8 relative, with an absolute floor at the float resolution of y
        assert np.max(np.abs(dev_up + dev_down)) <= 1e-8 * scale + 1e-15

    def test_default_launch_runs_and_conserves(self, consts):
        params = OrbitParams(**NOMINAL)
        traj = integrate_orbit(params, consts, n_samples=500)
        de, dl = traj.conservation_drift()
        assert de < 1e-9 and dl < 1e-9
        assert traj.x[0] == pytest.approx(-20 * 0.1)
        assert traj.branch == 1

    def test_wire_collision_detected(self, consts):
        # head almost straight at the wire on the attracted branch
        start = PlanarState(-0.5, 1e-4, vx=50.0, vy=0.0)
        with pytest.raises(WireCollisionError):
            integrate_orbit_from(start, -1, 5e4, consts, (0.0, 0.5), n_samples=100)

    def test_conservation_gate_trips_on_sloppy_tolerance(self, consts):
        params = OrbitParams(100.0, 0.05, 1e7, branch=-1)
        with pytest.raises(ConservationError):
            integrate_orbit(
                params, consts, n_samples=50, rtol=1e-3, conservation_tol=1e-12
            )

    def test_launch_state_geometry(self):
        params = OrbitParams(**NOMINAL)
        s = launch_state(params)
        assert (s.x, s.y, s.vx, s.vy) == (-2.0, 0.1, 2000.0, 0.0)


class TestCurrentWindow:
    def test_reference_numbers(self, consts):
        i_low, i_high = current_window(2000.0, 0.1, consts)
        assert 47.0 <= i_low <= 60.0
        assert i_low == pytest.approx(54.64, rel=1e-3)
        assert 6.3e11 <= i_high <= 7.6e11

    def test_ratio_independent_of_coupling(self, consts, rng):
        for _ in range(20):
            v = rng.uniform(10.0, 5000.0)
            b = rng.uniform(1e-3, 1.0)
            i_low, i_high = current_window(v, b, consts, margin=1.0)
            assert i_high / i_low == pytest.approx(
                4.0 * consts.m_n * v * b / consts.hbar, rel=1e-12
            )

    def test_scaling_with_speed(self, consts):
        lo1, hi1 = current_window(2000.0, 0.1, consts)
        lo2, hi2 = current_window(1000.0, 0.1, consts)
        assert lo2 == pytest.approx(lo1 / 2, rel=1e-12)
        assert hi2 == pytest.approx(hi1 / 4, rel=1e-12)

    def test_empty_window_diagnostic(self, consts):
        with pytest.raises(EmptyWindowError) as err:
            current_window(2000.0, 1e-12, consts)
        assert "margin" in str(err.value)

    def test_margin_ten_still_open(self, consts):
        current_window(2000.0, 0.1, consts, margin=10.0)


class TestWireFeasibility:
    def test_copper_sizing_estimate(self):
        # 500 A/cm^2 = 5e6 A/m^2 on a 0.5 cm radius section
        value = wire_feasibility(5e6, 5e-3)
        assert value == pytest.approx(5e6 * math.pi * 2.5e-5, rel=1e-12)
        assert value == pytest.approx(393.0, rel=0.05)

    def test_zero_radius(self):
        assert wire_feasibility(5e6, 0.0) == 0.0

    def test_quadratic_in_radius(self):
        assert wire_feasibility(5e6, 2e-3) * 4 == pytest.approx(
            wire_feasibility(5e6, 4e-3), rel=1e-12
        )
