"""Cross-correlation of two LoRa symbols, by definition and by the piecewise case table.

Time is measured from the start of signal 2 (t0 = 0). Signal 1 is read at
t + tau, so it occupies [-tau, Ts1 - tau]. Boundary names follow the case
table: a, b, c are signal 1's start, shrink point and end; x, y, z are the
same for signal 2. In the discrete domain the ranges are half-open: b and
y are the first index of the second branch, c and z one past the last
sample.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from .chirp_integral import chirp_integral, chirp_sum
from .config import RadioConfig
from .waveform import ContinuousSymbol, synthesize_discrete, synthesize_discrete_batch

Domain = Literal["continuous", "discrete"]

DEFAULT_PAIR_BUDGET = 1 << 18
DEFAULT_SEED = 0xC0FFEE
MIN_OSF = 16
CONVERGENCE_TOL = 1e-6


class NoCaseMatched(RuntimeError):
    pass


class AmbiguousCase(RuntimeError):
    pass


class NonConvergent(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Per-symbol Doppler parameters


@dataclass(frozen=True)
class DopplerTable:
    """Linear Doppler parameters indexed by symbol value (arrays of length 2**SF)."""

    v_d: np.ndarray
    c_d: np.ndarray
    delta_f_k: np.ndarray
    tag: str = "custom"

    @classmethod
    def none(cls, radio: RadioConfig) -> "DopplerTable":
        z = np.zeros(radio.M)
        return cls(z, z, z, "none")

    @classmethod
    def static(cls, radio: RadioConfig, offset: float) -> "DopplerTable":
        z = np.zeros(radio.M)
        return cls(np.full(radio.M, float(offset)), z, z, f"cfo{offset:g}")

    @classmethod
    def from_models(cls, models, tag: str = "custom") -> "DopplerTable":
        return cls(np.array([m.v_d for m in models]), np.array([m.c_d for m in models]),
                   np.array([m.delta_f_k for m in models]), tag)

    def take(self, ks):
        ks = np.asarray(ks)
        return self.v_d[ks], self.c_d[ks], self.delta_f_k[ks]

    def model(self, k: int):
        from .doppler import DopplerLinearModel

        return DopplerLinearModel(v_d=float(self.v_d[k]), c_d=float(self.c_d[k]),
                                  delta_f_k=float(self.delta_f_k[k]))


def doppler_table(radio: RadioConfig, geom, t_start: float, domain: Domain = "discrete",
                  reference: str = "chirp", tag: str = "custom") -> DopplerTable:
    """Linearized Doppler for every symbol value of ``radio`` starting at ``t_start``."""
    from .doppler import linearize_continuous, linearize_discrete

    if domain == "discrete":
        m0 = t_start / radio.Td
        models = [linearize_discrete(m0, k, radio, geom, reference) for k in range(radio.M)]
    else:
        models = [linearize_continuous(t_start, k, radio, geom, reference) for k in range(radio.M)]
    return DopplerTable.from_models(models, tag)


def _params(table: DopplerTable | None, radio: RadioConfig, ks):
    ks = np.asarray(ks)
    if table is None:
        z = np.zeros(ks.shape)
        return z, z, z
    return table.take(ks)


# ---------------------------------------------------------------------------
# Case table


class Piece(NamedTuple):
    lo: str
    hi: str
    i: int
    j: int
    sign: float = 1.0


class Row(NamedTuple):
    name: str
    order: tuple[str, ...]
    pieces: tuple[Piece, ...]


ROWS: tuple[Row, ...] = (
    Row("L1", ("b", "x", "c", "y"), (Piece("be", "en", 2, 1),)),
    Row("L2", ("y", "a", "z", "b"), (Piece("be", "en", 1, 2),)),
    Row("L3", ("x", "b", "c", "y"), (Piece("be", "b", 1, 1), Piece("b", "en", 2, 1))),
    Row("L4", ("y", "a", "b", "z"), (Piece("be", "b", 1, 2), Piece("b", "en", 2, 2))),
    Row("L5", ("a", "y", "z", "b"), (Piece("be", "y", 1, 1), Piece("y", "en", 1, 2))),
    Row("L6", ("b", "x", "y", "c"), (Piece("be", "y", 2, 1), Piece("y", "en", 2, 2))),
    Row("L7", ("x", "b", "y", "c"), (Piece("be", "b", 1, 1), Piece("b", "y", 2, 1), Piece("y", "en", 2, 2))),
    Row("L8", ("a", "y", "b", "z"), (Piece("be", "y", 1, 1), Piece("y", "b", 1, 2), Piece("b", "en", 2, 2))),
)


def mutate_row(rows: Sequence[Row], name: str, piece: int = -1, sign: float = -1.0) -> tuple[Row, ...]:
    """Copy of ``rows`` with one piece of row ``name`` scaled by ``sign`` (for mutation checks)."""
    out = []
    for row in rows:
        if row.name == name:
            pieces = list(row.pieces)
            pieces[piece] = pieces[piece]._replace(sign=sign)
            row = row._replace(pieces=tuple(pieces))
        out.append(row)
    return tuple(out)


def boundaries(radio1: RadioConfig, radio2: RadioConfig, k1, k2, tau: float = 0.0,
               domain: Domain = "continuous") -> dict[str, np.ndarray]:
    k1, k2 = np.broadcast_arrays(np.asarray(k1), np.asarray(k2))
    if domain == "discrete":
        m_tau = int(tau)
        b = {
            "a": np.full(k1.shape, -m_tau),
            "b": ((radio1.M - k1 - 1) >> radio1.s_exp) + 1 - m_tau,
            "c": np.full(k1.shape, radio1.N - m_tau),
            "x": np.zeros(k1.shape, dtype=np.int64),
            "y": ((radio2.M - k2 - 1) >> radio2.s_exp) + 1,
            "z": np.full(k1.shape, radio2.N),
        }
    else:
        b = {
            "a": np.full(k1.shape, -tau, dtype=float),
            "b": (radio1.M - k1) / radio1.B - tau,
            "c": np.full(k1.shape, radio1.Ts - tau),
            "x": np.zeros(k1.shape),
            "y": (radio2.M - k2) / radio2.B,
            "z": np.full(k1.shape, radio2.Ts),
        }
    b["be"] = np.maximum(b["a"], b["x"])
    b["en"] = np.minimum(b["c"], b["z"])
    return b


def matching_rows(bounds: dict[str, np.ndarray], rows: Sequence[Row] = ROWS) -> np.ndarray:
    """Boolean array (len(rows), *shape): which row conditions hold for each pair."""
    out = []
    for row in rows:
        ok = np.ones(np.shape(bounds["a"]), dtype=bool)
        for lo, hi in zip(row.order, row.order[1:]):
            ok &= bounds[lo] <= bounds[hi]
        out.append(ok)
    return np.array(out)


def dispatch(bounds: dict[str, np.ndarray], rows: Sequence[Row] = ROWS) -> np.ndarray:
    """Index of the lowest-numbered matching row per pair; -1 for an empty overlap."""
    match = matching_rows(bounds, rows)
    nonempty = bounds["be"] < bounds["en"]
    idx = np.where(match.any(axis=0), match.argmax(axis=0), -2)
    if np.any(nonempty & (idx == -2)):
        raise NoCaseMatched("no case row matches the boundary ordering")
    return np.where(nonempty, idx, -1)


# ---------------------------------------------------------------------------
# Integrand coefficients


@dataclass(frozen=True)
class IntegrandCoefficients:
    """exp(2j*pi*(y*u**2 + w[i,j]*u)) * prefactor[i] / norm, u measured from signal 2's start.

    ``z`` is the common linear coefficient (D_f + D_d + symbol offsets + h_tau);
    the branch-specific coefficients are ``w[(i, j)]``. ``prefactor[1]`` and
    ``prefactor[2]`` are mu and delta (continuous) or xi and gamma_coef (discrete).
    """

    y: np.ndarray
    z: np.ndarray
    h_tau: np.ndarray
    w: dict
    prefactor: dict
    norm: float
    domain: str

    @property
    def mu(self):
        return self.prefactor[1]

    @property
    def delta(self):
        return self.prefactor[2]

    xi = mu
    gamma_coef = delta


def _cis(cycles):
    cycles = np.asarray(cycles, dtype=float)
    return np.exp(2j * np.pi * (cycles - np.floor(cycles)))


def integrand_coefficients(radio1: RadioConfig, radio2: RadioConfig, k1, k2,
                           doppler1: DopplerTable | None = None, doppler2: DopplerTable | None = None,
                           tau: float = 0.0, domain: Domain = "continuous") -> IntegrandCoefficients:
    k1, k2 = np.broadcast_arrays(np.asarray(k1), np.asarray(k2))
    v1, c1, f1 = _params(doppler1, radio1, k1)
    v2, c2, f2 = _params(doppler2, radio2, k2)
    if domain == "discrete":
        if not math.isclose(radio1.Td, radio2.Td, rel_tol=1e-12):
            raise ValueError("discrete correlation needs a common sample period")
        Td = radio1.Td
        p1, p2 = 1 << radio1.s_exp, 1 << radio2.s_exp
        alpha1 = p1 * p1 / (2 * radio1.M) + c1 * Td * Td / 2
        alpha2 = p2 * p2 / (2 * radio2.M) + c2 * Td * Td / 2
        # differences first: the carrier terms cancel exactly for equal f_min
        z0 = (radio1.f_min - radio2.f_min) * Td + (v1 - v2) * Td + p1 * k1 / radio1.M - p2 * k2 / radio2.M
        step1, step2 = p1 + f1 * Td, p2 + f2 * Td
        base1 = (radio1.f_min * Td) % 1.0 + v1 * Td + p1 * k1 / radio1.M
        norm = math.sqrt(radio1.N * radio2.N)
        tau = float(int(tau))
    else:
        alpha1 = radio1.B / (2 * radio1.M * radio1.T) + c1 / 2
        alpha2 = radio2.B / (2 * radio2.M * radio2.T) + c2 / 2
        z0 = (radio1.f_min - radio2.f_min) + (v1 - v2) + radio1.B * k1 / radio1.M - radio2.B * k2 / radio2.M
        step1, step2 = radio1.B + f1, radio2.B + f2
        base1 = radio1.f_min + v1 + radio1.B * k1 / radio1.M
        norm = math.sqrt(radio1.Ts * radio2.Ts)
    y = alpha1 - alpha2
    h_tau = 2 * alpha1 * tau
    z = z0 + h_tau
    w = {(1, 1): z, (1, 2): z + step2, (2, 1): z - step1, (2, 2): z - step1 + step2}
    prefactor = {1: _cis((alpha1 * tau + base1) * tau), 2: _cis((alpha1 * tau + base1 - step1) * tau)}
    return IntegrandCoefficients(y=y, z=z, h_tau=h_tau, w=w, prefactor=prefactor, norm=norm, domain=domain)


# ---------------------------------------------------------------------------
# Analytic (case-table) evaluation


def _evaluate_rows(bounds, coef: IntegrandCoefficients, row_idx, rows, discrete: bool):
    out = np.zeros(row_idx.shape, dtype=complex)
    for r, row in enumerate(rows):
        sel = row_idx == r
        if not np.any(sel):
            continue
        acc = np.zeros(int(sel.sum()), dtype=complex)
        y = np.broadcast_to(coef.y, row_idx.shape)[sel]
        for piece in row.pieces:
            lo = bounds[piece.lo][sel]
            hi = bounds[piece.hi][sel]
            w = np.broadcast_to(coef.w[(piece.i, piece.j)], row_idx.shape)[sel]
            pref = np.broadcast_to(coef.prefactor[piece.i], row_idx.shape)[sel]
            if discrete:
                part = chirp_sum(y, w, lo, hi)
            else:
                part = np.where(hi > lo, chirp_integral(y, w, lo, np.maximum(hi, lo)), 0)
            acc += piece.sign * pref * part
        out[sel] = acc / coef.norm
    return out


def _analytic(radio1, radio2, k1, k2, doppler1, doppler2, tau, domain, rows, strict, tol):
    k1, k2 = np.broadcast_arrays(np.asarray(k1), np.asarray(k2))
    bounds = boundaries(radio1, radio2, k1, k2, tau, domain)
    coef = integrand_coefficients(radio1, radio2, k1, k2, doppler1, doppler2, tau, domain)
    discrete = domain == "discrete"
    idx = dispatch(bounds, rows)
    out = _evaluate_rows(bounds, coef, idx, rows, discrete)
    if strict:
        match = matching_rows(bounds, rows) & (idx >= 0)
        for r, row in enumerate(rows):
            alt_sel = match[r] & (idx != r)
            if not np.any(alt_sel):
                continue
            alt_idx = np.where(alt_sel, r, -1)
            alt = _evaluate_rows(bounds, coef, alt_idx, rows, discrete)
            bad = alt_sel & (np.abs(alt - out) > tol)
            if np.any(bad):
                first = rows[int(idx[bad].ravel()[0])].name
                raise AmbiguousCase(f"rows {first} and {row.name} both match but disagree")
    return out[()] if out.ndim == 0 else out


def xcorr_analytic_discrete(radio1: RadioConfig, radio2: RadioConfig, k1, k2,
                            doppler1: DopplerTable | None = None, doppler2: DopplerTable | None = None,
                            m_tau: int = 0, rows: Sequence[Row] = ROWS, strict: bool = False):
    """Case-table cross-correlation in the discrete domain (vectorized over k1, k2)."""
    return _analytic(radio1, radio2, k1, k2, doppler1, doppler2, m_tau, "discrete", rows, strict, 1e-9)


def xcorr_analytic_continuous(radio1: RadioConfig, radio2: RadioConfig, k1, k2,
                              doppler1: DopplerTable | None = None, doppler2: DopplerTable | None = None,
                              tau: float = 0.0, rows: Sequence[Row] = ROWS, strict: bool = False):
    """Case-table cross-correlation in the continuous domain using closed-form chirp integrals."""
    return _analytic(radio1, radio2, k1, k2, doppler1, doppler2, tau, "continuous", rows, strict, 1e-6)


def case_of(radio1, radio2, k1, k2, tau=0.0, domain: Domain = "continuous", rows=ROWS):
    """Name of the dispatched row ("" for no overlap)."""
    idx = dispatch(boundaries(radio1, radio2, k1, k2, tau, domain), rows)
    return np.vectorize(lambda i: rows[i].name if i >= 0 else "")(idx)


# ---------------------------------------------------------------------------
# Defining formulas


def xcorr_defining_discrete(radio1: RadioConfig, radio2: RadioConfig, k1: int, k2: int,
                            doppler1=None, doppler2=None, m_tau: int = 0) -> complex:
    """sum_n s1(n + m_tau) * conj(s2(n)) over the overlap of the two sample vectors."""
    if not math.isclose(radio1.Td, radio2.Td, rel_tol=1e-12):
        raise ValueError("discrete correlation needs a common sample period")
    m1 = doppler1.model(k1) if isinstance(doppler1, DopplerTable) else doppler1
    m2 = doppler2.model(k2) if isinstance(doppler2, DopplerTable) else doppler2
    s1 = synthesize_discrete(radio1, k1, m1)
    s2 = synthesize_discrete(radio2, k2, m2)
    m_tau = int(m_tau)
    lo = max(0, -m_tau)
    hi = min(radio2.N, radio1.N - m_tau)
    if hi <= lo:
        return 0j
    return complex(np.sum(s1[lo + m_tau:hi + m_tau] * np.conj(s2[lo:hi])))


_GL_ORDER = 16
_GL_NODES, _GL_WEIGHTS = leggauss(_GL_ORDER)


def _quad_segment(f, lo, hi, cycles, osf):
    panels = max(1, math.ceil(osf * cycles / _GL_ORDER) + 1)
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2
    nodes = (edges[:-1, None] + half[:, None] * (_GL_NODES[None, :] + 1)).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return np.sum(weights * f(nodes))


def _defining_continuous_once(sym1, sym2, tau, osf):
    r1, r2 = sym1.radio, sym2.radio
    lo, hi = max(-tau, 0.0), min(r1.Ts - tau, r2.Ts)
    if hi <= lo:
        return 0j
    cuts = [sym1.t_k - tau, sym2.t_k]
    edges = np.unique(np.clip([lo, hi, *cuts], lo, hi))
    total = 0j
    norm = math.sqrt(r1.Ts * r2.Ts)

    def integrand(t):
        t = t.astype(np.longdouble)
        ph = sym1.phase_cycles(t + np.longdouble(tau)) - sym2.phase_cycles(t)
        return np.exp(2j * np.pi * (ph - np.floor(ph)))

    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        eps = (b - a) * 1e-9
        probe = np.array([a + eps, b - eps])
        df = np.abs(sym1.frequency(probe + tau) - sym2.frequency(probe))
        cycles = float(df.max()) * (b - a) + 1.0
        total += _quad_segment(integrand, a, b, cycles, osf)
    return total / norm


def xcorr_defining_continuous(radio1: RadioConfig, radio2: RadioConfig, k1: int, k2: int,
                              doppler1=None, doppler2=None, tau: float = 0.0, osf: int = MIN_OSF) -> complex:
    """Integral of s1(t + tau) * conj(s2(t)) by composite Gauss-Legendre quadrature.

    The overlap is split at every branch boundary; each segment gets at least
    ``osf`` nodes per cycle of the integrand's highest frequency. The result
    is accepted only if doubling ``osf`` moves it by less than 1e-6.
    """
    if osf < MIN_OSF:
        raise NonConvergent(f"oversampling factor {osf} is below the minimum {MIN_OSF}")
    m1 = doppler1.model(k1) if isinstance(doppler1, DopplerTable) else doppler1
    m2 = doppler2.model(k2) if isinstance(doppler2, DopplerTable) else doppler2
    sym1 = ContinuousSymbol(radio1, int(k1), m1)
    sym2 = ContinuousSymbol(radio2, int(k2), m2)
    coarse = _defining_continuous_once(sym1, sym2, tau, osf)
    fine = _defining_continuous_once(sym1, sym2, tau, 2 * osf)
    if abs(fine - coarse) >= CONVERGENCE_TOL:
        raise NonConvergent(f"quadrature moved by {abs(fine - coarse):.3g} when doubling OSF")
    return complex(fine)


# ---------------------------------------------------------------------------
# Aggregation over symbol pairs


@dataclass
class XcorrMatrix:
    sf1: int
    sf2: int
    k1: np.ndarray
    k2: np.ndarray
    values: np.ndarray  # |R| on the k1 x k2 grid
    domain: str
    doppler_tag: str = "none"
    meta: dict = field(default_factory=dict)
    complex_mean: complex = 0j  # mean of the complex R over the same pairs

    @property
    def mean_complex_abs(self) -> float:
        """|mean R|: averaging before taking the magnitude (alternative convention)."""
        return float(abs(self.complex_mean))

    @property
    def max_corr(self) -> float:
        return float(self.values.max())

    @property
    def mean_corr(self) -> float:
        return float(self.values.mean())

    @property
    def subsampled(self) -> bool:
        return bool(self.meta.get("subsampled", False))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("LDS_THREADS", "1") or 1)
    return max(1, int(threads))


def pair_grid(M1: int, M2: int, pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = DEFAULT_SEED):
    """Symbol values to enumerate: the full grid, or a seeded random sub-grid within budget.

    The sub-grid draws rows and columns uniformly without replacement, so every
    (k1, k2) pair is equally likely to be included.
    """
    if pair_budget < 1:
        raise ValueError("pair_budget must be >= 1")
    if M1 * M2 <= pair_budget:
        return np.arange(M1), np.arange(M2), False
    n1 = int(min(M1, max(1, math.isqrt(pair_budget * M1 // M2))))
    n2 = int(min(M2, max(1, pair_budget // n1)))
    rng = np.random.default_rng(seed)
    k1 = np.sort(rng.choice(M1, size=n1, replace=False))
    k2 = np.sort(rng.choice(M2, size=n2, replace=False))
    return k1, k2, True


def _chunks(n: int, size: int):
    return [slice(i, min(n, i + size)) for i in range(0, n, size)]


def aggregate_matrix(radio1: RadioConfig, radio2: RadioConfig,
                     doppler1: DopplerTable | None = None, doppler2: DopplerTable | None = None,
                     tau: float = 0.0, domain: Domain = "discrete",
                     pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = DEFAULT_SEED,
                     threads: int | None = None, doppler_tag: str | None = None) -> XcorrMatrix:
    """|R| over all (or a seeded subsample of) symbol pairs; max and mean on the result."""
    k1, k2, sub = pair_grid(radio1.M, radio2.M, pair_budget, seed)
    workers = _resolve_threads(threads)
    values = np.empty((k1.size, k2.size))
    sums = np.zeros(k1.size, dtype=complex)

    if domain == "discrete":
        if not math.isclose(radio1.Td, radio2.Td, rel_tol=1e-12):
            raise ValueError("discrete correlation needs a common sample period")
        m_tau = int(tau)
        lo, hi = max(0, -m_tau), min(radio2.N, radio1.N - m_tau)
        d2 = None if doppler2 is None else [doppler2.model(int(k)) for k in k2]
        S2 = synthesize_discrete_batch(radio2, k2, d2)[:, lo:hi].conj().T if hi > lo else None

        def work(sl):
            if S2 is None:
                values[sl] = 0.0
                return
            ks = k1[sl]
            d1 = None if doppler1 is None else [doppler1.model(int(k)) for k in ks]
            S1 = synthesize_discrete_batch(radio1, ks, d1)[:, lo + m_tau:hi + m_tau]
            R = S1 @ S2
            values[sl] = np.abs(R)
            sums[sl] = R.sum(axis=1)

        rows_per_chunk = max(1, (1 << 22) // max(1, radio1.N))
    else:
        K2 = np.broadcast_to(k2, (1, k2.size))

        def work(sl):
            K1 = k1[sl, None]
            R = xcorr_analytic_continuous(radio1, radio2, K1, K2, doppler1, doppler2, tau)
            values[sl] = np.abs(R)
            sums[sl] = R.sum(axis=1)

        rows_per_chunk = max(1, (1 << 16) // max(1, k2.size))

    chunks = _chunks(k1.size, rows_per_chunk)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(work, chunks))
    else:
        for sl in chunks:
            work(sl)

    tag = doppler_tag or (doppler1.tag if doppler1 is not None else "none")
    meta = {"pair_budget": pair_budget, "seed": seed, "subsampled": sub, "n_pairs": int(values.size),
            "tau": tau, "B1": radio1.B, "B2": radio2.B}
    return XcorrMatrix(radio1.SF, radio2.SF, k1, k2, values, domain, tag, meta, complex(sums.sum() / values.size))


def cfo_sweep(radio1: RadioConfig, radio2: RadioConfig, deltas, domain: Domain = "discrete",
              pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = DEFAULT_SEED, threads: int | None = None):
    """Max and mean correlation with a static frequency offset ``delta`` on signal 1."""
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size == 0 or not np.all(np.isfinite(deltas)):
        raise ValueError("CFO grid must be nonempty and finite")
    mx = np.empty(deltas.size)
    mn = np.empty(deltas.size)
    mc = np.empty(deltas.size)
    for i, d in enumerate(deltas):
        m = aggregate_matrix(radio1, radio2, DopplerTable.static(radio1, d), None, 0.0, domain,
                             pair_budget, seed, threads)
        mx[i], mn[i], mc[i] = m.max_corr, m.mean_corr, m.mean_complex_abs
    return CfoSweep(deltas, mx, mn, mc, radio1.SF, radio2.SF, domain)


@dataclass(frozen=True)
class CfoSweep:
    delta: np.ndarray
    max_corr: np.ndarray
    mean_corr: np.ndarray
    mean_complex_abs: np.ndarray
    sf1: int
    sf2: int
    domain: str


def dominant_period(x, curve) -> float:
    """Period of the strongest non-DC Fourier component of a uniformly sampled curve."""
    x = np.asarray(x, dtype=float)
    c = np.asarray(curve, dtype=float)
    step = x[1] - x[0]
    spec = np.abs(np.fft.rfft(c - c.mean()))
    freqs = np.fft.rfftfreq(c.size, step)
    i = int(np.argmax(spec[1:]) + 1)
    # refine the peak by parabolic interpolation of the log magnitude
    if 1 < i < spec.size - 1:
        a, b, g = np.log(spec[i - 1:i + 2] + 1e-300)
        i = i + 0.5 * (a - g) / (a - 2 * b + g)
    return float(1.0 / (i * (freqs[1] - freqs[0])))


# ---------------------------------------------------------------------------
# Output


SUMMARY_FIELDS = ["sf1", "sf2", "max", "mean", "mean_complex_abs", "domain", "doppler_tag", "n_pairs", "subsampled"]


def write_summary_csv(path: str | Path, matrices: Sequence[XcorrMatrix]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_FIELDS)
        for m in matrices:
            w.writerow([m.sf1, m.sf2, repr(m.max_corr), repr(m.mean_corr), repr(m.mean_complex_abs), m.domain, m.doppler_tag,
                        m.meta.get("n_pairs"), int(m.subsampled)])


def write_grid_csv(path: str | Path, m: XcorrMatrix) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k1", "k2", "abs_R"])
        for i, a in enumerate(m.k1):
            for j, b in enumerate(m.k2):
                w.writerow([int(a), int(b), repr(float(m.values[i, j]))])


def write_sidecar(path: str | Path, config: dict, matrices: Sequence[XcorrMatrix] = ()) -> None:
    payload = dict(config)
    payload["matrices"] = [{"sf1": m.sf1, "sf2": m.sf2, **m.meta} for m in matrices]
    Path(path).write_text(json.dumps(payload, indent=2, default=str))
