"""Single and shared visibility windows, and the offset between two devices' passes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .config import GroundDevice, OrbitConfig, PhysicalConstants
from .geometry import (
    ACOS_TOL,
    PassGeometry,
    angular_velocity_ecef,
    angular_velocity_eci,
    central_angle_from_elevation,
)


class InconsistentGeometry(ValueError):
    """Device distance and central angles cannot coexist on one pass."""


class EmptyWindow(ValueError):
    pass


@dataclass(frozen=True)
class VisibilityWindow:
    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals if b > a)
        for (_, e0), (s1, _) in zip(ivs, ivs[1:]):
            if s1 < e0:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @property
    def duration(self) -> float:
        return sum(b - a for a, b in self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, t, tol: float = 0.0):
        t = np.asarray(t, dtype=float)
        inside = np.zeros(t.shape, dtype=bool)
        for a, b in self.intervals:
            inside |= (t >= a - tol) & (t <= b + tol)
        return inside

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)


def _omega_F(constants: PhysicalConstants, orbit: OrbitConfig) -> float:
    return float(angular_velocity_ecef(angular_velocity_eci(constants, orbit.H), constants.omega_E, orbit.inclination))


def window_offsets(device: GroundDevice, constants: PhysicalConstants, orbit: OrbitConfig) -> tuple[float, float]:
    """(dt_out, dt_in): time from the central instant to the outer and inner window edges."""
    R, H = constants.R, orbit.H
    cos_gc = np.cos(central_angle_from_elevation(device.theta_c, R, H))
    w = abs(_omega_F(constants, orbit))

    def offset(theta):
        ratio = np.cos(central_angle_from_elevation(theta, R, H)) / cos_gc
        return float(np.arccos(np.clip(ratio, -1.0, 1.0)) / w)

    return offset(device.theta_min), offset(device.theta_max)


def single_window(device: GroundDevice, constants: PhysicalConstants, orbit: OrbitConfig) -> VisibilityWindow:
    dt_out, dt_in = window_offsets(device, constants, orbit)
    t = device.t_cv
    if dt_in == 0.0:
        return VisibilityWindow(((t - dt_out, t + dt_out),))
    return VisibilityWindow(((t - dt_out, t - dt_in), (t + dt_in, t + dt_out)))


def delta_t_AB(d: float, gamma_cvA: float, gamma_cvB: float, omega_F: float, R: float) -> float:
    """Time between the two devices' central visibility instants.

    Raises InconsistentGeometry when the spherical-triangle cosine leaves
    [-1, 1] by more than the clamp tolerance.
    """
    num = np.cos(d / R) - np.sin(gamma_cvB) * np.sin(gamma_cvA)
    arg = num / (np.cos(gamma_cvB) * np.cos(gamma_cvA))
    if abs(arg) > 1 + ACOS_TOL:
        raise InconsistentGeometry(
            f"distance {d} m is incompatible with central angles {gamma_cvA:.6g}, {gamma_cvB:.6g} rad"
        )
    return float(np.arccos(np.clip(arg, -1.0, 1.0)) / abs(omega_F))


def delta_t_AB_for(constants, orbit, device_A, device_B, d) -> float:
    R, H = constants.R, orbit.H
    gA = float(central_angle_from_elevation(device_A.theta_c, R, H))
    gB = float(central_angle_from_elevation(device_B.theta_c, R, H))
    return delta_t_AB(d, gA, gB, _omega_F(constants, orbit), R)


def intersect(a: Iterable[tuple[float, float]], b: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    a, b = list(a), list(b)
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def shared_window(W_A: VisibilityWindow, W_B: VisibilityWindow) -> VisibilityWindow:
    return VisibilityWindow(tuple(intersect(W_A.intervals, W_B.intervals)))


def scenario_windows(scenario) -> tuple[VisibilityWindow, VisibilityWindow, VisibilityWindow]:
    k, o = scenario.constants, scenario.orbit
    W_A = single_window(scenario.device_A, k, o)
    W_B = single_window(scenario.device_B, k, o)
    return W_A, W_B, shared_window(W_A, W_B)


Part = Literal["approach", "recede"]


def window_part(W_sh: VisibilityWindow, part: Part = "recede") -> tuple[float, float]:
    """Contiguous shared-window segment used for start-time sweeps.

    ``"approach"`` is the earliest interval, ``"recede"`` the latest.
    """
    if W_sh.is_empty:
        raise EmptyWindow("shared visibility window is empty")
    if part == "approach":
        return W_sh.intervals[0]
    if part == "recede":
        return W_sh.intervals[-1]
    raise ValueError(f"unknown window part {part!r}")


def operating_points(W_sh: VisibilityWindow, geom_A: PassGeometry, f_ref: float,
                     part: Part = "recede") -> tuple[float, float]:
    """(t_high_shift, t_high_rate) on the chosen segment of the shared window.

    The high-shift point is the segment edge where device A sees the larger
    |f_d|; the high-rate point is the opposite edge, nearest closest approach.
    """
    lo, hi = window_part(W_sh, part)
    f_lo, f_hi = np.abs(geom_A.doppler(np.array([lo, hi]), f_ref))
    return (lo, hi) if f_lo >= f_hi else (hi, lo)


def start_time(t_norm, t_high_shift: float, t_high_rate: float):
    """Map normalized start time (0 = high shift, 1 = high rate) to seconds."""
    t_norm = np.asarray(t_norm, dtype=float)
    return t_high_shift + t_norm * (t_high_rate - t_high_shift)
