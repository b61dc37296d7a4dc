"""Evolved packet amplitudes and densities."""

import math

import numpy as np
import pytest

from sgcoherence import (
    ExperimentParams,
    kinematics,
    packet_amplitude,
    packet_density,
    packet_norm_quadrature,
    total_position_density,
)

# phi_+(z = 1.3e-5 m, t = 2 ns) at typical parameters, frozen from a
# 50-digit mpmath evaluation.
PHI_PLUS_RE = -85.891629543758212
PHI_PLUS_IM = 98.790117970677337


def test_initial_packet_at_origin(typical):
    value = packet_amplitude(typical, +1, 0.0, 0.0)
    assert value.imag == 0.0
    assert value.real == pytest.approx((2 * math.pi * typical.sigma0**2) ** -0.25, rel=1e-15)


def test_branches_coincide_at_t0(typical):
    z = np.linspace(-3e-5, 3e-5, 101)
    plus = packet_amplitude(typical, +1, z, 0.0)
    minus = packet_amplitude(typical, -1, z, 0.0)
    np.testing.assert_array_equal(plus, minus)


@pytest.mark.parametrize("t", [2e-9, 1e-6, 1e-5, 1e-4])
@pytest.mark.parametrize("branch", [+1, -1])
def test_modulus_at_center(typical, t, branch):
    k = kinematics(typical, t)
    center = branch * k.delta_z_bar
    value = packet_amplitude(typical, branch, center, t)
    assert abs(value) ** 2 == pytest.approx(
        1.0 / (math.sqrt(2 * math.pi) * k.sigma_t), rel=1e-13
    )


def test_frozen_amplitude_value(typical):
    # The raw phase is ~7e7 rad here, so double evaluation carries a few
    # 1e-8 rad of rounding; the modulus is fully conditioned.
    value = packet_amplitude(typical, +1, 1.3e-5, 2e-9)
    reference = complex(PHI_PLUS_RE, PHI_PLUS_IM)
    assert abs(value) == pytest.approx(abs(reference), rel=1e-12)
    assert value.real == pytest.approx(PHI_PLUS_RE, abs=abs(reference) * 2e-7)
    assert value.imag == pytest.approx(PHI_PLUS_IM, abs=abs(reference) * 2e-7)


def test_density_peak_and_one_sigma_point(typical):
    t = 1e-5
    k = kinematics(typical, t)
    peak = 1.0 / (math.sqrt(2 * math.pi) * k.sigma_t)
    assert packet_density(typical, +1, k.delta_z_bar, t) == pytest.approx(peak, rel=1e-13)
    assert packet_density(typical, +1, k.delta_z_bar + k.sigma_t, t) == pytest.approx(
        peak * math.exp(-0.5), rel=1e-13
    )
    assert packet_density(typical, -1, -k.delta_z_bar, t) == pytest.approx(peak, rel=1e-13)


def test_density_equals_modulus_squared_on_grid(typical):
    # Two independent routes: the Gaussian law vs |amplitude|^2.
    t = 1e-6
    k = kinematics(typical, t)
    z = np.linspace(-k.delta_z_bar - 8 * k.sigma_t, k.delta_z_bar + 8 * k.sigma_t, 1000)
    for branch in (+1, -1):
        density = packet_density(typical, branch, z, t)
        modulus = np.abs(packet_amplitude(typical, branch, z, t)) ** 2
        np.testing.assert_allclose(modulus, density, rtol=1e-10, atol=1e-300)


def test_amplitude_finite_for_finite_inputs(typical):
    z = np.linspace(-1e-3, 1e-3, 401)
    for t in (0.0, 1e-12, 2e-9, 1e-4, 1.0):
        values = packet_amplitude(typical, +1, z, t)
        assert np.all(np.isfinite(values.real)) and np.all(np.isfinite(values.imag))


def test_norm_preserved(typical):
    for t in (2e-9, 1e-5):
        norm, err = packet_norm_quadrature(typical, +1, t)
        assert abs(norm - 1.0) < 1e-8
        assert err < 1e-8


def test_total_density_no_interference(typical):
    t = 1e-5
    z = np.linspace(-5e-5, 5e-5, 301)
    total = total_position_density(typical, z, t)
    explicit = 0.5 * packet_density(typical, +1, z, t) + 0.5 * packet_density(typical, -1, z, t)
    np.testing.assert_allclose(total, explicit, rtol=1e-14)


def test_total_density_reduces_to_single_branch():
    p = ExperimentParams(mass=1.8e-25, field_gradient=1e3, sigma0=1e-5,
                         alpha=1.0, beta=0.0)
    z = np.linspace(-5e-5, 5e-5, 101)
    np.testing.assert_allclose(
        total_position_density(p, z, 1e-5),
        packet_density(p, +1, z, 1e-5),
        rtol=1e-14,
    )


def test_total_density_single_gaussian_at_t0(typical):
    z = np.linspace(-4e-5, 4e-5, 101)
    np.testing.assert_allclose(
        total_position_density(typical, z, 0.0),
        np.abs(packet_amplitude(typical, +1, z, 0.0)) ** 2,
        rtol=1e-13,
    )


def test_bad_branch_rejected(typical):
    with pytest.raises(ValueError):
        packet_amplitude(typical, 0, 0.0, 1e-9)
    with pytest.raises(ValueError):
        packet_density(typical, 2, 0.0, 1e-9)


def test_negative_time_rejected(typical):
    with pytest.raises(ValueError):
        packet_amplitude(typical, +1, 0.0, -1e-9)
