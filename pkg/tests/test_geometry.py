import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorasat.config import PhysicalConstants
from lorasat.geometry import (
    PassGeometry,
    angular_velocity_eci,
    central_angle_from_elevation,
    orbit_period,
    safe_arccos,
    sample_pass,
    slant_range,
)


def elevation(gamma, R, H):
    # independent: elevation of a point at height H seen across central angle gamma
    return np.arctan2(np.cos(gamma) - R / (R + H), np.sin(gamma))


@given(theta=st.floats(0.0, np.pi / 2 - 1e-6), H=st.floats(200e3, 2000e3))
def test_central_angle_inverts_elevation(theta, H):
    R = 6_371_000.0
    g = central_angle_from_elevation(theta, R, H)
    assert elevation(g, R, H) == pytest.approx(theta, abs=1e-9)


def test_zenith_pass_has_zero_central_angle_and_range_H():
    assert float(central_angle_from_elevation(np.pi / 2, 6.371e6, 550e3)) == pytest.approx(0.0, abs=1e-7)
    assert float(slant_range(0.0, 6.371e6, 550e3)) == pytest.approx(550e3)


def test_kepler_period():
    k = PhysicalConstants()
    # circular orbit: T^2 = 4 pi^2 r^3 / (g R^2)
    r = k.R + 550e3
    assert orbit_period(k, 550e3) == pytest.approx(2 * np.pi * np.sqrt(r**3 / (k.g * k.R**2)))
    assert angular_velocity_eci(k, 550e3) == pytest.approx(2 * np.pi / orbit_period(k, 550e3))


def test_velocity_is_derivative_of_range(scenario):
    g = PassGeometry.for_device(scenario, "A")
    t = np.linspace(-240, 240, 37)
    h = 1e-3
    fd = (g.slant_range(t + h) - g.slant_range(t - h)) / (2 * h)
    assert np.allclose(g.velocity(t), fd, rtol=1e-6, atol=1e-3)


def test_doppler_sign_and_zero_at_closest_approach(scenario):
    g = PassGeometry.for_device(scenario, "A")
    f = scenario.radio_A.f_c
    assert g.doppler(g.t_cv, f) == pytest.approx(0.0, abs=1e-6)
    assert g.doppler(g.t_cv - 100, f) > 0  # approaching: blue shift
    assert g.doppler(g.t_cv + 100, f) < 0
    # symmetric pass
    assert g.doppler(g.t_cv - 77, f) == pytest.approx(-g.doppler(g.t_cv + 77, f))


def test_doppler_rate_is_largest_at_closest_approach(scenario):
    g = PassGeometry.for_device(scenario, "A")
    t = np.linspace(-300, 300, 601)
    rate = np.abs(g.doppler_rate(t, 868e6))
    assert abs(t[np.argmax(rate)] - g.t_cv) <= 1.0


def test_sample_pass_fields(scenario):
    g = PassGeometry.for_device(scenario, "B")
    s = sample_pass(g, [0.0, 10.0], 868e6)
    assert s.f_d.shape == (2,)
    assert np.allclose(s.f_d, g.doppler(s.t, 868e6))


def test_safe_arccos_clamps_and_rejects():
    assert safe_arccos(1 + 1e-13) == 0.0
    with pytest.raises(ValueError):
        safe_arccos(1.01)
