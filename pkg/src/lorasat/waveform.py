"""LoRa symbol synthesis in continuous time (callable) and discrete time (sample vectors).

Phases are evaluated in closed form per branch, in cycles, and reduced
modulo one before exponentiation so that the large carrier term keeps
full precision.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .config import RadioConfig

if TYPE_CHECKING:
    from .doppler import DopplerLinearModel


class OutOfSymbol(ValueError):
    pass


def shrink_time(radio: RadioConfig, k: int) -> float:
    return (radio.M - k) / radio.B


def shrink_index(radio: RadioConfig, k: int) -> int:
    return (radio.M - k - 1) >> radio.s_exp


def _check_symbol(radio: RadioConfig, k) -> None:
    k = np.asarray(k)
    if np.any((k < 0) | (k >= radio.M)):
        raise ValueError(f"symbol out of range [0, {radio.M})")


def chirp_frequency(radio: RadioConfig, k: int, u, continuation: bool = False):
    """Instantaneous no-Doppler frequency at time ``u`` after the symbol start."""
    u = np.asarray(u, dtype=float)
    f = radio.f_min + radio.B / radio.M * (u / radio.T + k)
    if continuation:
        return f
    return f - np.where(u > shrink_time(radio, k), radio.B, 0.0)


def chirp_frequency_discrete(radio: RadioConfig, k: int, u, continuation: bool = False):
    u = np.asarray(u, dtype=float)
    f = radio.f_min + radio.B * (1 << radio.s_exp) / radio.M * (u + k / (1 << radio.s_exp))
    if continuation:
        return f
    return f - np.where(u > shrink_index(radio, k), radio.B, 0.0)


def _as_time(u):
    """Time offsets as an array, keeping extended precision when supplied."""
    u = np.asarray(u)
    return u.astype(np.longdouble) if u.dtype != np.longdouble else u


def _cis(cycles):
    cycles = np.asarray(cycles, dtype=float)
    return np.exp(2j * np.pi * (cycles - np.floor(cycles)))


def _model_terms(model, size=None):
    if model is None:
        return 0.0, 0.0, 0.0
    if isinstance(model, (list, tuple)):
        return (np.array([m.v_d for m in model])[:, None],
                np.array([m.c_d for m in model])[:, None],
                np.array([m.delta_f_k for m in model])[:, None])
    return model.v_d, model.c_d, model.delta_f_k


@dataclass(frozen=True)
class ContinuousSymbol:
    """Callable s(t) for one symbol, zero outside [t0, t0 + Ts]."""

    radio: RadioConfig
    k: int
    doppler: "DopplerLinearModel | None" = None

    def __post_init__(self):
        _check_symbol(self.radio, self.k)

    @property
    def t_k(self) -> float:
        return shrink_time(self.radio, self.k)

    def phase_cycles(self, u, branch=None):
        """Phase in cycles at offsets ``u``; ``branch`` forces 1 or 2, else chosen by u."""
        r = self.radio
        v_d, c_d, dfk = _model_terms(self.doppler)
        u = _as_time(u)
        if branch is None:
            second = u > self.t_k
        else:
            second = np.full(u.shape, branch == 2)
        sym = np.where(second, self.k - r.M, self.k)
        # the carrier term runs to ~1e7 cycles; extended precision keeps the
        # reduced phase accurate to ~1e-12 cycles
        ld = np.longdouble
        lin = (ld(r.f_min) + ld(v_d) + ld(r.B) / r.M * (u / (2 * ld(r.T)) + sym)
               + ld(c_d) * u / 2 - np.where(second, ld(dfk), ld(0)))
        cyc = lin * u
        return (cyc - np.floor(cyc)).astype(float)

    def frequency(self, u):
        f = chirp_frequency(self.radio, self.k, u)
        if self.doppler is not None:
            f = f + self.doppler.frequency(u, after_shrink=np.asarray(u) > self.t_k)
        return f

    def __call__(self, t, branch=None):
        u = _as_time(t) - np.longdouble(self.radio.t0)
        out = _cis(self.phase_cycles(u, branch)) / np.sqrt(self.radio.Ts)
        return np.where((u >= 0) & (u <= self.radio.Ts), out, 0.0)


def synthesize_continuous(radio: RadioConfig, k: int, doppler=None) -> ContinuousSymbol:
    return ContinuousSymbol(radio, int(k), doppler)


def frequency_at(radio: RadioConfig, k: int, u, doppler=None, discrete: bool = False):
    """Instantaneous frequency at offset ``u`` (seconds, or samples when ``discrete``)."""
    u = np.asarray(u, dtype=float)
    if discrete:
        if np.any((u < 0) | (u > radio.N - 1)):
            raise OutOfSymbol("sample offset outside the symbol")
        f = chirp_frequency_discrete(radio, k, u)
        if doppler is not None:
            f = f + doppler.frequency(u * radio.Td, after_shrink=u > shrink_index(radio, k))
        return f
    if np.any((u < 0) | (u > radio.Ts)):
        raise OutOfSymbol("time offset outside the symbol")
    return ContinuousSymbol(radio, int(k), doppler).frequency(u)


def discrete_phase_cycles(radio: RadioConfig, k, u, doppler=None):
    """Phase in cycles of the sampled symbol(s). ``k`` may be an array (rows)."""
    k = np.asarray(k)
    u = np.asarray(u, dtype=float)
    if k.ndim:
        k = k[:, None]
    v_d, c_d, dfk = _model_terms(doppler)
    Td = radio.Td
    p = 1 << radio.s_exp
    m_k = (radio.M - k - 1) >> radio.s_exp
    second = u > m_k
    sym = np.where(second, k - radio.M, k)
    # u is integral at sample instants, so only the fractional part of f_min*T_d matters
    carrier = (radio.f_min * Td) % 1.0 if np.all(u == np.round(u)) else radio.f_min * Td
    lin = (carrier + v_d * Td + p * p / radio.M * (u / 2 + sym / p)
           + c_d * Td**2 * u / 2 - np.where(second, dfk * Td, 0.0))
    return lin * u


def synthesize_discrete(radio: RadioConfig, k: int, doppler=None) -> np.ndarray:
    _check_symbol(radio, k)
    u = np.arange(radio.N)
    return _cis(discrete_phase_cycles(radio, int(k), u, doppler)) / np.sqrt(radio.N)


def synthesize_discrete_batch(radio: RadioConfig, ks: Sequence[int], dopplers=None) -> np.ndarray:
    """Rows of sampled symbols, one per entry of ``ks`` (with matching Doppler models)."""
    ks = np.asarray(ks, dtype=np.int64)
    _check_symbol(radio, ks)
    if dopplers is not None and not isinstance(dopplers, (list, tuple)):
        dopplers = [dopplers] * len(ks)
    u = np.arange(radio.N)
    return _cis(discrete_phase_cycles(radio, ks, u, dopplers)) / np.sqrt(radio.N)


def exact_doppler_phase_cycles(t0: float, k: int, radio: RadioConfig, geom, u, n_grid: int = 20001):
    """Integral of the exact chirp Doppler over [0, u], in cycles (validation oracle)."""
    from scipy.integrate import cumulative_trapezoid

    from .doppler import chirp_doppler

    grid = np.linspace(0.0, radio.Ts, n_grid)
    # integrate each branch separately: the Doppler steps at the shrink time
    t_k = shrink_time(radio, k)
    grid = np.union1d(grid, [t_k, np.nextafter(t_k, np.inf)]) if 0 < t_k < radio.Ts else grid
    fd = chirp_doppler(t0 + grid, t0, k, radio, geom)
    acc = cumulative_trapezoid(fd, grid, initial=0.0)
    return np.interp(np.asarray(u, dtype=float), grid, acc)


def write_waveform_csv(path: str | Path, x, samples) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for xi, s in zip(np.asarray(x), np.asarray(samples)):
            w.writerow([repr(float(xi)), repr(float(s.real)), repr(float(s.imag))])
