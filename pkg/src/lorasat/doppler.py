"""Per-symbol piecewise-linear Doppler models and the differential Doppler shift."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .config import RadioConfig, ScenarioConfig
from .geometry import PassGeometry
from .visibility import VisibilityWindow, operating_points, scenario_windows, start_time, window_part
from .waveform import chirp_frequency, chirp_frequency_discrete, shrink_index, shrink_time

Reference = Literal["chirp", "carrier"]


class OutsideWindow(ValueError):
    pass


class StraddleWarning(UserWarning):
    """A symbol starts inside a visibility window but ends outside it."""


@dataclass(frozen=True)
class DopplerLinearModel:
    """Linear Doppler f_dl(u) = c_d*u + v_d, minus delta_f_k after the shrink point.

    ``u`` is time since the symbol start in seconds for both domains; the
    discrete model is evaluated at u = n*T_d. ``c_d`` is always in Hz/s.
    """

    v_d: float
    c_d: float = 0.0
    delta_f_k: float = 0.0
    start: float = 0.0
    shrink: float = math.inf
    domain: Literal["continuous", "discrete"] = "continuous"
    straddles: bool = False
    degenerate: bool = False

    @classmethod
    def static(cls, offset: float) -> "DopplerLinearModel":
        """Constant frequency offset: no rate, no shrink-point step."""
        return cls(v_d=float(offset))

    def frequency(self, u, after_shrink=None):
        u = np.asarray(u, dtype=float)
        if after_shrink is None:
            after_shrink = u > self.shrink
        return self.c_d * u + self.v_d - np.where(after_shrink, self.delta_f_k, 0.0)


NO_DOPPLER = DopplerLinearModel(v_d=0.0)


def chirp_doppler(t, t0: float, k: int, radio: RadioConfig, geom: PassGeometry):
    """Exact Doppler shift of the chirp's instantaneous frequency at absolute times ``t``."""
    t = np.asarray(t, dtype=float)
    f_inst = chirp_frequency(radio, k, t - t0)
    return geom.doppler(t, f_inst)


def _check_window(t0: float, t_end: float, window: VisibilityWindow | None) -> bool:
    if window is None:
        return False
    if not window.contains(t0, tol=1e-9):
        raise OutsideWindow(f"symbol start {t0} s lies outside the visibility window")
    straddles = not bool(window.contains(t_end, tol=1e-9))
    if straddles:
        warnings.warn(f"symbol starting at {t0} s leaves the visibility window", StraddleWarning, stacklevel=3)
    return straddles


def linearize_continuous(t0: float, k: int, radio: RadioConfig, geom: PassGeometry,
                         reference: Reference = "chirp",
                         window: VisibilityWindow | None = None) -> DopplerLinearModel:
    straddles = _check_window(t0, t0 + radio.Ts, window)
    T = radio.T
    t_k = shrink_time(radio, k)
    if reference == "carrier":
        f0 = f1 = radio.f_c
        step = 0.0
    else:
        f0, f1 = chirp_frequency(radio, k, np.array([0.0, T]))
        # Doppler falls with the instantaneous frequency when the chirp wraps by -B
        step = -radio.B * geom.velocity(t0 + t_k) / geom.c
    fd0 = geom.doppler(t0, f0)
    fd1 = geom.doppler(t0 + T, f1)
    return DopplerLinearModel(
        v_d=float(fd0),
        c_d=float((fd1 - fd0) / T),
        delta_f_k=float(step),
        start=t0,
        shrink=t_k,
        domain="continuous",
        straddles=straddles,
    )


def linearize_discrete(m0: float, k: int, radio: RadioConfig, geom: PassGeometry,
                       reference: Reference = "chirp",
                       window: VisibilityWindow | None = None) -> DopplerLinearModel:
    Td = radio.Td
    t0 = m0 * Td
    straddles = _check_window(t0, t0 + radio.Ts, window)
    m_k = shrink_index(radio, k)
    m_SD = radio.N - 1

    def fd(u, continuation=False):
        u = np.asarray(u, dtype=float)
        if reference == "carrier":
            f = np.full(u.shape, radio.f_c)
        else:
            f = chirp_frequency_discrete(radio, k, u, continuation=continuation)
        return geom.doppler(t0 + u * Td, f)

    degenerate = False
    if m_k + 1 >= m_SD - m_k:
        if m_k >= 1:
            dfd = fd(m_k) - fd(m_k - 1)
        else:
            # one-sample first branch: slope from the branch-1 continuation instead
            degenerate = True
            dfd = fd(1, continuation=True) - fd(0)
    else:
        dfd = fd(m_k + 2) - fd(m_k + 1)
    if reference == "carrier":
        step = 0.0
    else:
        step = -radio.B * geom.velocity(t0 + m_k * Td) / geom.c
    return DopplerLinearModel(
        v_d=float(fd(0)),
        c_d=float(dfd / Td),
        delta_f_k=float(step),
        start=float(m0),
        shrink=float(m_k * Td),
        domain="discrete",
        straddles=straddles,
        degenerate=degenerate,
    )


def approximation_error(t0: float, k: int, radio: RadioConfig, geom: PassGeometry,
                        n_eval: int = 4097) -> tuple[float, float]:
    """(MAE, max abs error) between the linear model and the exact chirp Doppler over one symbol."""
    model = linearize_continuous(t0, k, radio, geom)
    u = np.linspace(0.0, radio.Ts, n_eval)
    # branch chosen from u itself: t0 + u - t0 can round across the shrink instant
    exact = geom.doppler(t0 + u, chirp_frequency(radio, k, u))
    err = np.abs(model.frequency(u) - exact)
    return float(err.mean()), float(err.max())


@dataclass(frozen=True)
class DifferentialDoppler:
    t_start: float
    D_d: float
    D_f: float


def differential_doppler(t_start, scenario: ScenarioConfig,
                         window: VisibilityWindow | None = None) -> DifferentialDoppler:
    """D_d = v_d1 - v_d2 at the carrier frequencies, plus the start-frequency difference."""
    if window is not None and not np.all(window.contains(t_start, tol=1e-9)):
        raise OutsideWindow(f"start time {t_start} s is outside the shared window")
    gA = PassGeometry.for_device(scenario, "A")
    gB = PassGeometry.for_device(scenario, "B")
    D_d = gA.doppler(t_start, scenario.radio_A.f_c) - gB.doppler(t_start, scenario.radio_B.f_c)
    D_f = scenario.radio_A.f_min - scenario.radio_B.f_min
    return DifferentialDoppler(t_start=t_start, D_d=D_d if np.ndim(D_d) else float(D_d), D_f=D_f)


def scenario_operating_points(scenario: ScenarioConfig, part="recede") -> tuple[float, float]:
    _, _, W_sh = scenario_windows(scenario)
    gA = PassGeometry.for_device(scenario, "A")
    return operating_points(W_sh, gA, scenario.radio_A.f_c, part)


def dd_curve(scenario: ScenarioConfig, n: int = 101, part="recede"):
    """(t_norm, t_start, D_d) over the chosen shared-window segment."""
    t_hs, t_hr = scenario_operating_points(scenario, part)
    t_norm = np.linspace(0.0, 1.0, n)
    t = start_time(t_norm, t_hs, t_hr)
    return t_norm, t, differential_doppler(t, scenario).D_d


def symbol_models(scenario: ScenarioConfig, t_start: float, ks1, ks2, domain="discrete",
                  reference: Reference = "chirp"):
    """Doppler models for device A's symbols ``ks1`` and device B's symbols ``ks2`` starting at ``t_start``."""
    gA = PassGeometry.for_device(scenario, "A")
    gB = PassGeometry.for_device(scenario, "B")
    rA, rB = scenario.radio_A, scenario.radio_B
    if domain == "discrete":
        m1, m2 = t_start / rA.Td, t_start / rB.Td
        return ([linearize_discrete(m1, int(k), rA, gA, reference) for k in ks1],
                [linearize_discrete(m2, int(k), rB, gB, reference) for k in ks2])
    return ([linearize_continuous(t_start, int(k), rA, gA, reference) for k in ks1],
            [linearize_continuous(t_start, int(k), rB, gB, reference) for k in ks2])


__all__ = [
    "DopplerLinearModel", "NO_DOPPLER", "OutsideWindow", "StraddleWarning", "DifferentialDoppler",
    "chirp_doppler", "linearize_continuous", "linearize_discrete", "approximation_error",
    "differential_doppler", "dd_curve", "scenario_operating_points", "symbol_models", "window_part",
]
