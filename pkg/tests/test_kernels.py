import math

import numpy as np
import pytest

from wirespin import StepControlError, circular_loop, polyline_trajectory, straight_path
from wirespin import kernels
from wirespin.kernels import available_backends, get_backend

HBAR = 1.054571817e-34
COUPLING = 9.65e-34 * 400.0  # c0 * I at the nominal operating point

pytestmark = pytest.mark.filterwarnings("ignore::DeprecationWarning")


def run(backend, traj, psi0, coupling=COUPLING, density=1.0, max_steps=50_000_000):
    return backend(
        traj.t,
        traj.x,
        traj.y,
        traj.vx,
        traj.vy,
        np.asarray(psi0, complex),
        coupling,
        HBAR,
        50.0,
        100.0,
        density,
        max_steps,
        traj.interpolation == "linear",
    )


def sample_paths():
    yield straight_path((-0.4, 0.1), (0.4, 0.1), 2000.0, 65)
    yield polyline_trajectory([(-0.2, 0.0), (0.0, 0.1), (0.2, 0.0)], 2000.0, 16)
    yield circular_loop(0.1, 2000.0, 512)


class TestBackendSelection:
    def test_active_backend_is_available(self):
        assert kernels.BACKEND in available_backends()

    def test_python_backend_always_present(self):
        assert "python" in available_backends()
        assert callable(get_backend("python"))

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            get_backend("fortran")


@pytest.mark.skipif(
    "cython" not in available_backends(), reason="compiled kernel not built"
)
class TestBackendParity:
    def test_states_and_actions_match(self, rng):
        py = get_backend("python")
        cy = get_backend("cython")
        for traj in sample_paths():
            for _ in range(3):
                raw = rng.normal(size=4)
                psi0 = (raw[:2] + 1j * raw[2:]).astype(complex)
                psi0 /= np.linalg.norm(psi0)
                hist_p, act_p, n_p = run(py, traj, psi0)
                hist_c, act_c, n_c = run(cy, traj, psi0)
                assert n_p == n_c
                assert np.max(np.abs(hist_p - hist_c)) < 1e-11
                assert np.max(np.abs(act_p - act_c)) <= 1e-12 * max(act_p[-1], 1e-300)


class TestKernelPhysics:
    @pytest.mark.parametrize("backend_name", available_backends())
    def test_unitarity_at_rounding_level(self, backend_name):
        backend = get_backend(backend_name)
        for traj in sample_paths():
            hist, _, _ = run(backend, traj, [1.0, 0.0])
            norms = np.linalg.norm(hist, axis=1)
            assert np.max(np.abs(norms - 1.0)) < 1e-12

    @pytest.mark.parametrize("backend_name", available_backends())
    def test_zero_coupling_is_identity(self, backend_name):
        backend = get_backend(backend_name)
        # radial path: no precession (K=0) and no frame rotation (v_theta=0),
        # so neither step bound subdivides the intervals
        traj = straight_path((0.05, 0.0), (0.5, 0.0), 2000.0, 17)
        psi0 = np.array([0.6, 0.8j])
        hist, act, steps = run(backend, traj, psi0, coupling=0.0)
        assert np.allclose(hist, psi0[None, :])
        assert np.all(act == 0.0)
        assert steps == len(traj) - 1

    def test_step_budget_enforced(self):
        traj = circular_loop(0.1, 2000.0, 256)
        with pytest.raises(StepControlError):
            run(kernels.propagate_path, traj, [1.0, 0.0], max_steps=100)

    def test_action_equals_constant_radius_integral(self):
        # on a circle the level splitting is constant: action = K/r * T
        traj = circular_loop(0.25, 1000.0, 512)
        _, act, _ = run(kernels.propagate_path, traj, [1.0, 0.0])
        expected = COUPLING / 0.25 * traj.duration
        assert act[-1] == pytest.approx(expected, rel=1e-9)


def rotating_frame_oracle(radius, speed, theta0, turns, coupling, psi0):
    """Closed-form evolution on a circle via the corotating frame.

    In the frame following the field direction the Hamiltonian is constant,
    H_eff = (K/r) sigma_y - (hbar w / 2) sigma_z, so the lab evolution is
    U = R(theta_T) exp(-i H_eff T / hbar) R(theta_0)^dagger with
    R(t) = exp(-i sigma_z t / 2).
    """
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    omega = speed / radius
    T = turns * 2 * math.pi / omega
    h_eff = coupling / radius * sy - 0.5 * HBAR * omega * sz

    def expm_su2(m, t):
        # m = a*sy + b*sz herm.; exp(-i m t / hbar) by Rodrigues
        a = m[0, 1].imag * -1.0  # coefficient of sigma_y
        b = m[0, 0].real
        mag = math.hypot(a, b) * t / HBAR
        n_y, n_z = (a, b) / np.hypot(a, b)
        return math.cos(mag) * np.eye(2) - 1j * math.sin(mag) * (n_y * sy + n_z * sz)

    def rot(angle):
        return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])

    u = rot(theta0 + omega * T) @ expm_su2(h_eff, T) @ rot(theta0).conj().T
    return u @ np.asarray(psi0, complex)


class TestAgainstClosedForm:
    @pytest.mark.parametrize("backend_name", available_backends())
    def test_circle_vs_rotating_frame(self, backend_name):
        backend = get_backend(backend_name)
        radius, speed, theta0 = 0.1, 2000.0, 0.4
        traj = circular_loop(radius, speed, 4096, theta0=theta0)
        for psi0 in ([1.0, 0.0], [0.6, 0.8], [1 / math.sqrt(2), 1j / math.sqrt(2)]):
            hist, _, _ = run(backend, traj, psi0, density=4.0)
            exact = rotating_frame_oracle(radius, speed, theta0, 1.0, COUPLING, psi0)
            assert np.max(np.abs(hist[-1] - exact)) < 5e-8
