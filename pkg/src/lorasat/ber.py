"""Monte Carlo bit error rate of a dechirp-FFT LoRa receiver under noise, interference and Doppler.

The receiver is Doppler-unaware: it multiplies by the conjugate base chirp,
takes an N-point DFT and picks the strongest bin. Symbols map to bits in
natural binary, so bit errors are popcount(k xor k_hat).
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from .config import RadioConfig, ScenarioConfig
from .geometry import PassGeometry
from .xcorr import DopplerTable, doppler_table
from .doppler import scenario_operating_points
from .waveform import discrete_phase_cycles, synthesize_discrete

DopplerTag = Literal["none", "high_shift", "high_rate"]

BLOCK = 1000  # symbols per RNG block


class LengthMismatch(ValueError):
    pass


def tolerable_threshold(radio: RadioConfig) -> float:
    """Largest frequency offset that leaves the dechirp-DFT decision unchanged: B / 2**(SF+1)."""
    return radio.B / (1 << (radio.SF + 1))


@lru_cache(maxsize=32)
def _downchirp(radio: RadioConfig) -> np.ndarray:
    return np.conj(synthesize_discrete(radio, 0)) * np.sqrt(radio.N)


def demodulate(received, radio: RadioConfig):
    """Symbol decision(s) for one received vector of length N, or a batch of rows.

    With s_exp > 0 the symbols k and k + N produce identical samples, so the
    decision is the DFT bin itself, i.e. k modulo N.
    """
    x = np.asarray(received)
    if x.shape[-1] != radio.N:
        raise LengthMismatch(f"expected {radio.N} samples, got {x.shape[-1]}")
    k_hat = np.argmax(np.abs(np.fft.fft(x * _downchirp(radio), axis=-1)), axis=-1)
    return int(k_hat) if np.ndim(k_hat) == 0 else k_hat


@dataclass(frozen=True)
class BerConfig:
    sf1: int
    snr_db: Sequence[float] = (0.0,)
    sf2: int | None = None
    sir_db: Sequence[float] | None = None
    n_symbols: int = 10_000
    doppler_tag: DopplerTag = "none"
    seed: int = 0
    static_cfo: float | None = None  # overrides the geometry Doppler with a constant offset
    noiseless: bool = False

    def __post_init__(self):
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")
        grids = [self.snr_db] + ([self.sir_db] if self.sir_db is not None else [])
        for g in grids:
            if len(g) == 0 or not np.all(np.isfinite(np.asarray(g, dtype=float))):
                raise ValueError("SNR/SIR grids must be nonempty and finite")
        if self.doppler_tag not in ("none", "high_shift", "high_rate"):
            raise ValueError(f"unknown doppler tag {self.doppler_tag!r}")

    @property
    def axis_name(self) -> str:
        return "sir_db" if self.sir_db is not None else "snr_db"

    def points(self) -> list[tuple[float, float | None]]:
        """(snr, sir) per grid point; the SIR grid is the axis when given (SNR fixed to its first value)."""
        if self.sir_db is not None:
            return [(float(self.snr_db[0]), float(s)) for s in self.sir_db]
        return [(float(s), None) for s in self.snr_db]


@dataclass
class BerCurve:
    axis: np.ndarray
    errors: np.ndarray
    bits: np.ndarray
    axis_name: str = "snr_db"
    config: BerConfig | None = None
    meta: dict = field(default_factory=dict)

    @property
    def ber(self) -> np.ndarray:
        return self.errors / self.bits

    def confidence(self, z: float = 1.96) -> np.ndarray:
        """Normal-approximation half-width of the BER estimate."""
        p = self.ber
        return z * np.sqrt(np.maximum(p * (1 - p), 1e-300) / self.bits)


class _SignalSource:
    """Synthesizes a device's symbols with the Doppler of its pass at a given start time."""

    def __init__(self, radio: RadioConfig, geom: PassGeometry | None, t_start: float | None,
                 static_cfo: float | None = None):
        self.radio = radio
        self.geom = geom
        self.t_start = t_start
        self.static_cfo = static_cfo
        self._tables: dict[int, DopplerTable | None] = {}

    def table(self, slot: int) -> DopplerTable | None:
        if slot not in self._tables:
            if self.static_cfo is not None:
                self._tables[slot] = DopplerTable.static(self.radio, self.static_cfo)
            elif self.geom is None:
                self._tables[slot] = None
            else:
                t = self.t_start + slot * self.radio.Ts
                self._tables[slot] = doppler_table(self.radio, self.geom, t, "discrete")
        return self._tables[slot]

    def symbols(self, ks: np.ndarray, slot: int = 0) -> np.ndarray:
        tab = self.table(slot)
        u = np.arange(self.radio.N)
        if tab is None:
            cyc = discrete_phase_cycles(self.radio, ks, u)
        else:
            ks = np.asarray(ks)
            models = [tab.model(int(k)) for k in ks]
            cyc = discrete_phase_cycles(self.radio, ks, u, models)
        return np.exp(2j * np.pi * (cyc - np.floor(cyc))) / np.sqrt(self.radio.N)


def _sources(config: BerConfig, scenario: ScenarioConfig):
    r1 = scenario.radio_A if scenario.radio_A.SF == config.sf1 else RadioConfig(
        f_c=scenario.radio_A.f_c, B=scenario.radio_A.B, SF=config.sf1)
    r2 = None
    if config.sf2 is not None:
        r2 = RadioConfig(f_c=scenario.radio_B.f_c, B=scenario.radio_B.B, SF=config.sf2)
        if abs(r2.Td - r1.Td) > 1e-15:
            raise ValueError("desired and interfering radios need a common sample period")
    if config.static_cfo is not None:
        return (_SignalSource(r1, None, None, config.static_cfo),
                _SignalSource(r2, None, None, None) if r2 else None, None)
    if config.doppler_tag == "none":
        return _SignalSource(r1, None, None), (_SignalSource(r2, None, None) if r2 else None), None
    t_hs, t_hr = scenario_operating_points(scenario)
    t = t_hs if config.doppler_tag == "high_shift" else t_hr
    gA = PassGeometry.for_device(scenario, "A")
    gB = PassGeometry.for_device(scenario, "B")
    return (_SignalSource(r1, gA, t), (_SignalSource(r2, gB, t) if r2 else None), t)


def _interference(src: _SignalSource, n_rows: int, n_samples: int, rng) -> np.ndarray:
    """Interferer samples aligned with the desired symbol, unit energy per interferer symbol."""
    N2 = src.radio.N
    if N2 >= n_samples:
        ks = rng.integers(0, src.radio.M, n_rows)
        return src.symbols(ks)[:, :n_samples]
    reps = n_samples // N2
    parts = [src.symbols(rng.integers(0, src.radio.M, n_rows), slot=j) for j in range(reps)]
    return np.concatenate(parts, axis=1)


def _run_block(config, src1, src2, snr, sir, n, point, block):
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(point, block)))
    r1 = src1.radio
    N = r1.N
    ks = rng.integers(0, r1.M, n)
    x = src1.symbols(ks)
    if src2 is not None and sir is not None:
        # per-sample interferer power = desired per-sample power * 10^(-SIR/10)
        gain = np.sqrt(src2.radio.N / N * 10 ** (-sir / 10))
        x = x + gain * _interference(src2, n, N, rng)
    if not config.noiseless:
        sigma = np.sqrt(10 ** (-snr / 10) / N)
        noise = rng.standard_normal((n, N)) + 1j * rng.standard_normal((n, N))
        x = x + sigma / np.sqrt(2) * noise
    k_hat = demodulate(x, r1)
    errors = int(np.bitwise_count(np.asarray(ks ^ k_hat, dtype=np.uint64)).sum())
    return errors, n * r1.SF


def run_ber(config: BerConfig, scenario: ScenarioConfig, threads: int | None = None) -> BerCurve:
    """Bit error counts per grid point; deterministic for a given seed whatever the thread count."""
    if threads is None:
        threads = int(os.environ.get("LDS_THREADS", "1") or 1)
    src1, src2, t_start = _sources(config, scenario)
    points = config.points()
    jobs = []
    for p, (snr, sir) in enumerate(points):
        for b, lo in enumerate(range(0, config.n_symbols, BLOCK)):
            jobs.append((p, b, snr, sir, min(BLOCK, config.n_symbols - lo)))
    # warm the Doppler caches so worker threads only read them
    if src1.geom is not None:
        src1.table(0)
    if src2 is not None and src2.geom is not None:
        for j in range(max(1, src1.radio.N // src2.radio.N)):
            src2.table(j)

    def work(job):
        p, b, snr, sir, n = job
        return p, _run_block(config, src1, src2, snr, sir, n, p, b)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]
    errors = np.zeros(len(points), dtype=np.int64)
    bits = np.zeros(len(points), dtype=np.int64)
    for p, (e, nb) in results:
        errors[p] += e
        bits[p] += nb
    axis = np.array([sir if sir is not None else snr for snr, sir in points])
    meta = {"t_start": t_start}
    return BerCurve(axis, errors, bits, config.axis_name, config, meta)


CSV_FIELDS = ["axis_db", "errors", "bits", "ber", "sf1", "sf2", "doppler_tag", "seed"]


def write_ber_csv(path: str | Path, curves: Sequence[BerCurve]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_FIELDS)
        for c in curves:
            cfg = c.config
            for a, e, b in zip(c.axis, c.errors, c.bits):
                w.writerow([repr(float(a)), int(e), int(b), repr(float(e / b)), cfg.sf1,
                            "" if cfg.sf2 is None else cfg.sf2, cfg.doppler_tag, cfg.seed])
