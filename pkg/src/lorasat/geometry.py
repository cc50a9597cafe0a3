"""Satellite pass kinematics on a spherical Earth with a circular orbit.

All functions accept scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import GroundDevice, PhysicalConstants, ScenarioConfig

ACOS_TOL = 1e-12


def safe_arccos(x):
    """arccos with arguments within ACOS_TOL of [-1, 1] clamped onto it."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + ACOS_TOL):
        raise ValueError(f"arccos argument out of range: {x[np.abs(x) > 1 + ACOS_TOL].ravel()[:3]}")
    return np.arccos(np.clip(x, -1.0, 1.0))


def angular_velocity_eci(constants: PhysicalConstants, H: float) -> float:
    """Orbital angular rate sqrt(g R^2 / (R + H)^3) in rad/s."""
    R = constants.R
    return float(np.sqrt(constants.g * R**2 / (R + H) ** 3))


def orbit_period(constants: PhysicalConstants, H: float) -> float:
    """Inertial orbit period in seconds."""
    return 2 * np.pi / angular_velocity_eci(constants, H)


def angular_velocity_ecef(omega_S: float, omega_E: float, inclination: float) -> float:
    return omega_S - omega_E * np.cos(inclination)


def central_angle_from_elevation(theta, R: float, H: float):
    """Earth central angle between a ground point and the satellite seen at elevation ``theta``."""
    theta = np.asarray(theta, dtype=float)
    return safe_arccos(R / (R + H) * np.cos(theta)) - theta


def central_angle_at(t, t_cv: float, gamma_cv: float, omega_F: float):
    return safe_arccos(np.cos(gamma_cv) * np.cos(omega_F * (np.asarray(t, dtype=float) - t_cv)))


def slant_range(gamma, R: float, H: float):
    return np.sqrt((R + H) ** 2 + R**2 - 2 * R * (R + H) * np.cos(gamma))


def relative_velocity(t, t_cv: float, gamma_cv: float, omega_F: float, R: float, H: float):
    """Range rate d(rho)/dt; positive while the satellite recedes."""
    phi = omega_F * (np.asarray(t, dtype=float) - t_cv)
    rho = np.sqrt((R + H) ** 2 + R**2 - 2 * R * (R + H) * np.cos(phi) * np.cos(gamma_cv))
    return R * (R + H) * np.sin(phi) * np.cos(gamma_cv) * omega_F / rho


@dataclass(frozen=True)
class PassGeometry:
    """One device's view of a single pass: everything needed to evaluate f_d(t)."""

    R: float
    H: float
    omega_F: float
    t_cv: float
    gamma_cv: float
    c: float

    @classmethod
    def for_device(cls, scenario: ScenarioConfig, device: GroundDevice | str = "A") -> "PassGeometry":
        if isinstance(device, str):
            device = scenario.device_A if device == "A" else scenario.device_B
        k = scenario.constants
        H = scenario.orbit.H
        omega_F = angular_velocity_ecef(
            angular_velocity_eci(k, H), k.omega_E, scenario.orbit.inclination
        )
        gamma_cv = float(central_angle_from_elevation(device.theta_c, k.R, H))
        return cls(R=k.R, H=H, omega_F=float(omega_F), t_cv=device.t_cv, gamma_cv=gamma_cv, c=k.c)

    def gamma(self, t):
        return central_angle_at(t, self.t_cv, self.gamma_cv, self.omega_F)

    def slant_range(self, t):
        return slant_range(self.gamma(t), self.R, self.H)

    def velocity(self, t):
        return relative_velocity(t, self.t_cv, self.gamma_cv, self.omega_F, self.R, self.H)

    def doppler(self, t, f_ref):
        """Doppler shift -f_ref * v(t) / c. ``f_ref`` may be an array matching ``t``."""
        return -np.asarray(f_ref, dtype=float) * self.velocity(t) / self.c

    def doppler_rate(self, t, f_ref, dt: float = 0.1):
        if not dt > 0:
            raise ValueError("dt must be > 0")
        t = np.asarray(t, dtype=float)
        return (self.doppler(t + dt, f_ref) - self.doppler(t - dt, f_ref)) / (2 * dt)


def doppler_shift(t, f_ref, geom: PassGeometry):
    if np.any(np.asarray(f_ref) <= 0):
        raise ValueError("f_ref must be > 0")
    return geom.doppler(t, f_ref)


def doppler_rate(t, f_ref, geom: PassGeometry, dt: float = 0.1):
    return geom.doppler_rate(t, f_ref, dt)


@dataclass(frozen=True)
class GeometrySample:
    t: np.ndarray
    gamma: np.ndarray
    rho: np.ndarray
    v: np.ndarray
    f_d: np.ndarray
    f_d_rate: np.ndarray


def sample_pass(geom: PassGeometry, t, f_ref: float, dt: float = 0.1) -> GeometrySample:
    t = np.asarray(t, dtype=float)
    gamma = geom.gamma(t)
    v = geom.velocity(t)
    return GeometrySample(
        t=t,
        gamma=gamma,
        rho=slant_range(gamma, geom.R, geom.H),
        v=v,
        f_d=-f_ref * v / geom.c,
        f_d_rate=geom.doppler_rate(t, f_ref, dt),
    )
