import math

import numpy as np
import pytest

from scattertomo.closedform import (
    direct_qfi,
    ea_cartesian,
    ea_cr,
    ea_polar,
    nea_qfi,
    phase_bound,
    purity_bound,
)
from scattertomo.qfi import qfi_numeric, qfi_single
from scattertomo.scatter import DetectionMode, apply_channel, channel_derivatives
from scattertomo.states import BlochVector, ProbeConfig, bloch_to_density

from conftest import log_uniform, relerr

MODES = (DetectionMode.TRANSMISSION, DetectionMode.REFLECTION, DetectionMode.BOTH)


class TestDirectQfi:
    def test_maximally_mixed(self):
        coeffs = direct_qfi(0.0)
        assert (coeffs.c_r, coeffs.c_theta) == (1.0, 0.0)

    def test_r_06(self):
        coeffs = direct_qfi(0.6)
        assert abs(coeffs.c_r - 1.5625) < 1e-15
        assert abs(coeffs.c_theta - 0.36) < 1e-15

    def test_angle_independent(self):
        assert direct_qfi(0.4, theta=0.3) == direct_qfi(0.4, theta=2.2)

    def test_boundary_and_domain(self):
        assert direct_qfi(1.0).c_r == math.inf
        with pytest.raises(ValueError):
            direct_qfi(-0.1)
        with pytest.raises(ValueError):
            direct_qfi(1.2)

    def test_polar_matrix_layout(self):
        h = direct_qfi(0.5).matrix(math.pi / 3)
        assert h.basis == "polar"
        assert abs(h.h[2, 2] - 0.25 * math.sin(math.pi / 3) ** 2) < 1e-15


class TestEaPolar:
    def test_vanishes_at_momentum_extremes(self):
        for om in (1e-4, 1e4):
            for mode in MODES:
                coeffs = ea_polar(0.5, om, mode)
                assert coeffs.c_r < 1e-6
                assert coeffs.c_theta < 1e-6

    def test_both_mode_rescaled_cr_is_r_independent(self):
        om = 0.73
        values = [(1 - r * r) * ea_polar(r, om, DetectionMode.BOTH).c_r
                  for r in (0.0, 0.3, 0.6, 0.9)]
        assert max(values) - min(values) < 1e-14

    def test_single_mode_rescaled_cr_depends_on_r(self):
        om = 0.73
        for mode in (DetectionMode.TRANSMISSION, DetectionMode.REFLECTION):
            values = [(1 - r * r) * ea_polar(r, om, mode).c_r for r in (0.0, 0.9)]
            assert abs(values[0] - values[1]) > 1e-3

    def test_pure_boundary(self):
        coeffs = ea_polar(1.0, 0.7, DetectionMode.BOTH)
        assert coeffs.c_r == math.inf
        assert math.isfinite(coeffs.c_theta)

    def test_domain(self):
        with pytest.raises(ValueError):
            ea_polar(0.5, -1.0, DetectionMode.BOTH)
        with pytest.raises(ValueError):
            ea_polar(1.1, 1.0, DetectionMode.BOTH)

    def test_matches_numeric_oracle(self):
        rng = np.random.default_rng(97)
        probe = ProbeConfig(entangled=True)
        for _ in range(10):
            r = rng.uniform(0.05, 0.9)
            om = log_uniform(rng, 0.05, 20)
            rho = bloch_to_density(BlochVector(0, 0, r))
            for mode in MODES:
                h = qfi_numeric(apply_channel(rho, probe, om, mode),
                                channel_derivatives(probe, om, mode))
                coeffs = ea_polar(r, om, mode)
                # on the z axis the polar radial/angular directions are the
                # cartesian z and x/y directions
                assert abs(h.h[2, 2] - coeffs.c_r) < 1e-9 * max(1, coeffs.c_r)
                c_theta_over_r2 = h.h[0, 0]  # c_theta / r^2 in cartesian form
                assert abs(c_theta_over_r2 * r * r - coeffs.c_theta) \
                    < 1e-9 * max(1, coeffs.c_theta)


class TestNeaQfi:
    def test_vanishes_at_momentum_extremes(self):
        for om in (1e-4, 1e4):
            for mode in MODES:
                assert nea_qfi(0.4, 0.6, om, mode) < 1e-6

    def test_symmetry_under_inversion(self):
        # flipping the target through the origin and the probe with it leaves
        # the information unchanged: H(-v_z, pi - theta_a) = H(v_z, theta_a)
        rng = np.random.default_rng(101)
        for _ in range(20):
            vz = rng.uniform(-0.9, 0.9)
            ta = rng.uniform(0, math.pi)
            om = log_uniform(rng, 0.05, 20)
            for mode in MODES:
                a = nea_qfi(vz, ta, om, mode)
                b = nea_qfi(-vz, math.pi - ta, om, mode)
                assert abs(a - b) < 1e-12 * max(1.0, abs(a))

    def test_divergence_toward_pure_aligned_target(self):
        # grows without bound as v_z -> 1 with theta_a = 0 (like 1/(1 - v_z^2))
        for mode in MODES:
            near = nea_qfi(0.999, 0.0, 0.5, mode)
            nearer = nea_qfi(0.9999, 0.0, 0.5, mode)
            assert near > 1e2
            assert nearer > 1e3
            ratio = nearer / near
            assert 8.0 < ratio < 12.0

    def test_matches_numeric_oracle(self):
        rng = np.random.default_rng(103)
        for _ in range(10):
            vz = rng.uniform(-0.9, 0.9)
            ta = rng.uniform(0, math.pi)
            om = log_uniform(rng, 0.05, 20)
            probe = ProbeConfig(theta_a=ta)
            rho = bloch_to_density(BlochVector(0, 0, vz))
            for mode in MODES:
                val = qfi_single(apply_channel(rho, probe, om, mode),
                                 channel_derivatives(probe, om, mode), "z")
                expected = nea_qfi(vz, ta, om, mode)
                assert abs(val - expected) < 1e-9 * max(1.0, abs(expected))

    def test_domain(self):
        with pytest.raises(ValueError):
            nea_qfi(1.0, 0.0, 0.5, DetectionMode.BOTH)
        with pytest.raises(ValueError):
            nea_qfi(0.5, 0.0, 0.0, DetectionMode.BOTH)

    def test_broadcasts(self):
        out = nea_qfi(0.3, np.linspace(0, math.pi, 5)[:, None],
                      np.array([0.5, 1.0])[None, :], DetectionMode.BOTH)
        assert out.shape == (5, 2)


class TestEaCartesian:
    def test_diagonal_on_axis(self):
        for mode in MODES:
            h = ea_cartesian(BlochVector(0, 0, 0.4), 0.8, mode)
            off = h.h - np.diag(np.diag(h.h))
            assert np.max(np.abs(off)) < 1e-14

    def test_zz_entry_equals_radial_coefficient(self):
        for mode in MODES:
            h = ea_cartesian(BlochVector(0, 0, 0.4), 0.8, mode)
            assert abs(h.h[2, 2] - ea_polar(0.4, 0.8, mode).c_r) < 1e-12

    def test_axis_isotropy(self):
        rng = np.random.default_rng(107)
        for _ in range(10):
            r = rng.uniform(0.05, 0.9)
            om = log_uniform(rng, 0.05, 20)
            for mode in MODES:
                rescaled = []
                for axis in range(3):
                    v = np.zeros(3)
                    v[axis] = r
                    h = ea_cartesian(BlochVector.from_array(v), om, mode)
                    rescaled.append((1 - r * r) * h.h[axis, axis])
                expected = (1 - r * r) * ea_polar(r, om, mode).c_r
                for val in rescaled:
                    assert abs(val - expected) < 1e-9 * max(1, expected)

    def test_matches_numeric_oracle(self):
        rng = np.random.default_rng(109)
        probe = ProbeConfig(entangled=True)
        for _ in range(15):
            v = rng.normal(size=3)
            v *= rng.uniform(0.05, 0.95) / np.linalg.norm(v)
            om = log_uniform(rng, 0.05, 20)
            rho = bloch_to_density(BlochVector.from_array(v))
            for mode in MODES:
                h_num = qfi_numeric(apply_channel(rho, probe, om, mode),
                                    channel_derivatives(probe, om, mode))
                h_closed = ea_cartesian(BlochVector.from_array(v), om, mode)
                assert relerr(h_num.h, h_closed.h) < 1e-8

    def test_domain(self):
        with pytest.raises(ValueError):
            ea_cartesian(BlochVector(1.0, 0, 0), 0.5, DetectionMode.BOTH)


class TestPurityBound:
    def test_direct_baseline(self):
        # the comparison baseline (1/M)(1/c_r_dir) is (1 - r^2)/M
        for r, m in ((0.0, 1), (0.5, 10)):
            coeffs = direct_qfi(r)
            assert abs(1.0 / (m * coeffs.c_r) - (1 - r * r) / m) < 1e-15

    def test_quoted_optimal_ratio(self):
        r, m = 0.3, 1
        bound = purity_bound(r, 0.616, m)
        ratio = bound / ((1 - r * r) / m)
        assert abs(ratio - 1.52) < 0.01

    def test_ratio_always_at_least_one(self):
        r = 0.45
        for om in np.geomspace(0.05, 20, 40):
            ratio = purity_bound(r, float(om), 1) / (1 - r * r)
            assert ratio >= 1.0

    def test_m_scaling(self):
        assert abs(purity_bound(0.2, 0.7, 5) - purity_bound(0.2, 0.7, 1) / 5) < 1e-15


class TestPhaseBound:
    def test_always_above_direct_threshold(self):
        for om in np.geomspace(0.05, 20, 40):
            assert phase_bound(float(om), 1) > 1.0

    def test_diverges_at_small_momentum(self):
        assert phase_bound(1e-6, 1) > 1e9

    def test_equals_inverse_angular_coefficient_at_boundary(self):
        for om in (0.3, 0.7, 1.3, 2.5):
            c_theta = ea_polar(1.0, om, DetectionMode.BOTH).c_theta
            assert abs(phase_bound(om, 1) - 1.0 / c_theta) < 1e-12 * (1.0 / c_theta)

    def test_m_scaling(self):
        assert abs(phase_bound(0.7, 4) - phase_bound(0.7, 1) / 4) < 1e-15


def test_vectorized_radial_kernel_matches_scalar():
    rs = np.array([0.0, 0.3, 0.8])
    oms = np.array([0.2, 1.0, 5.0])
    for mode in MODES:
        grid = ea_cr(rs[:, None], oms[None, :], mode)
        for i, r in enumerate(rs):
            for j, om in enumerate(oms):
                assert abs(grid[i, j] - ea_polar(float(r), float(om), mode).c_r) < 1e-14
