"""Self-check suites: case-table paths against the defining formulas, plus waveform and Doppler checks."""

from __future__ import annotations

import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import RadioConfig, preset_scenario
from .doppler import approximation_error, scenario_operating_points
from .geometry import PassGeometry
from .waveform import ContinuousSymbol, synthesize_discrete
from .xcorr import (
    MIN_OSF,
    ROWS,
    DopplerTable,
    NonConvergent,
    Row,
    boundaries,
    dispatch,
    xcorr_analytic_continuous,
    xcorr_analytic_discrete,
    xcorr_defining_continuous,
    xcorr_defining_discrete,
)

DISCRETE_TOL = 1e-9
CONTINUOUS_TOL = 1e-6
MIN_ROW_HITS = 50


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_error: float
    n: int
    seconds: float
    row_hits: dict = field(default_factory=dict)
    row_errors: dict = field(default_factory=dict)
    failing_rows: list = field(default_factory=list)
    message: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        txt = f"[{status}] {self.name}: n={self.n} max_err={self.max_error:.3g} ({self.seconds:.1f} s)"
        if self.failing_rows:
            txt += " failing rows: " + ", ".join(self.failing_rows)
        if self.message:
            txt += f" -- {self.message}"
        return txt


def _random_table(rng, radio: RadioConfig) -> DopplerTable | None:
    if rng.random() < 0.25:
        return None
    v = rng.uniform(-2.0e4, 2.0e4, radio.M)
    if rng.random() < 0.3:  # static offsets, the CFO-sweep regime
        return DopplerTable(v, np.zeros(radio.M), np.zeros(radio.M))
    return DopplerTable(v, rng.uniform(-400.0, 400.0, radio.M), rng.uniform(-5.0, 5.0, radio.M))


def _draw_case(rng, domain: str, target: int, rows: Sequence[Row], max_sf: int, tries: int = 500):
    """Random correlation problem whose dispatched row is ``target`` (rejection sampling)."""
    for _ in range(tries):
        sf1, sf2 = (int(v) for v in rng.integers(5, max_sf + 1, 2))
        if domain == "discrete":
            s = int(rng.integers(0, 3)) if rng.random() < 0.2 else 0
            B = 250e3
            r1 = RadioConfig(B=B, SF=sf1, s_exp=min(s, sf1))
            r2 = RadioConfig(B=B, SF=sf2, s_exp=min(s, sf2))
            if r1.s_exp != r2.s_exp:
                continue
        else:
            B1, B2 = (float(v) for v in rng.choice([125e3, 250e3, 500e3], 2)) if rng.random() < 0.3 else (250e3, 250e3)
            r1 = RadioConfig(B=B1, SF=sf1)
            r2 = RadioConfig(B=B2, SF=sf2)
        k1 = int(rng.integers(r1.M))
        k2 = int(rng.integers(r2.M))
        if rng.random() < 0.15:
            tau = 0
        elif domain == "discrete":
            tau = int(rng.integers(-r1.N + 1, r2.N))
        else:
            tau = float(rng.uniform(-r1.Ts, r2.Ts))
        idx = int(dispatch(boundaries(r1, r2, k1, k2, tau, domain), rows))
        if idx == target:
            return r1, r2, k1, k2, tau
    raise RuntimeError(f"could not draw a problem for row {rows[target].name}")


def oracle_suite(domain: str, n_draws: int = 10_000, seed: int = 2024, rows: Sequence[Row] = ROWS,
                 osf: int = MIN_OSF, max_sf: int = 12) -> SuiteResult:
    """Analytic case-table results against the defining formula over stratified random draws."""
    tol = DISCRETE_TOL if domain == "discrete" else CONTINUOUS_TOL
    rng = np.random.default_rng(seed)
    hits: Counter = Counter()
    errs: dict = defaultdict(float)
    t_start = time.perf_counter()
    worst = 0.0
    message = ""
    for i in range(n_draws):
        target = i % len(rows)
        r1, r2, k1, k2, tau = _draw_case(rng, domain, target, rows, max_sf)
        d1, d2 = _random_table(rng, r1), _random_table(rng, r2)
        name = rows[target].name
        try:
            if domain == "discrete":
                a = xcorr_analytic_discrete(r1, r2, k1, k2, d1, d2, tau, rows=rows)
                b = xcorr_defining_discrete(r1, r2, k1, k2, d1, d2, tau)
            else:
                a = xcorr_analytic_continuous(r1, r2, k1, k2, d1, d2, tau, rows=rows)
                b = xcorr_defining_continuous(r1, r2, k1, k2, d1, d2, tau, osf=osf)
        except NonConvergent as exc:
            message = f"NonConvergent: {exc}"
            return SuiteResult(f"{domain} oracle equivalence", False, float("nan"), i,
                               time.perf_counter() - t_start, dict(hits), dict(errs), [], message)
        e = abs(complex(a) - complex(b))
        hits[name] += 1
        errs[name] = max(errs[name], e)
        worst = max(worst, e)
    failing = [r.name for r in rows if errs.get(r.name, 0.0) >= tol]
    thin = [r.name for r in rows if hits.get(r.name, 0) < MIN_ROW_HITS]
    if thin:
        message = "rows hit fewer than %d times: %s" % (MIN_ROW_HITS, ", ".join(thin))
    passed = not failing and not thin
    return SuiteResult(f"{domain} oracle equivalence", passed, worst, n_draws,
                       time.perf_counter() - t_start, dict(hits), dict(errs), failing, message)


def pointwise_suite(seed: int = 7, n_draws: int = 200) -> SuiteResult:
    """Sampled continuous evaluator equals the discrete synthesizer at t = n*T_d (s = 0)."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(n_draws):
        r = RadioConfig(SF=int(rng.integers(5, 13)))
        k = int(rng.integers(r.M))
        tab = _random_table(rng, r)
        model = tab.model(k) if tab is not None else None
        d = synthesize_discrete(r, k, model) * np.sqrt(r.N)
        n = np.arange(r.N)
        # sample instants n/B in extended precision (a double T_d is itself rounded)
        c = ContinuousSymbol(r, k, model)(n.astype(np.longdouble) / np.longdouble(r.B)) * np.sqrt(r.Ts)
        # the sample at u = t_k sits on the continuous branch-1 side but the discrete branch-2 side
        keep = n != (r.M - k)
        worst = max(worst, float(np.max(np.abs(d[keep] - c[keep]))))
    return SuiteResult("continuous vs discrete samples", worst < 1e-9, worst, n_draws, time.perf_counter() - t0)


def approximation_suite(sfs=(7, 9, 12), positions: int = 20, scenario=None) -> SuiteResult:
    """Piecewise-linear Doppler MAE over the shared window segment: < 1 Hz and < 1e-7 relative."""
    scenario = scenario or preset_scenario()
    geom = PassGeometry.for_device(scenario, "A")
    t_hs, t_hr = scenario_operating_points(scenario)
    t0 = time.perf_counter()
    worst_rel = 0.0
    worst_abs = 0.0
    n = 0
    for sf in sfs:
        r = RadioConfig(f_c=scenario.radio_A.f_c, B=scenario.radio_A.B, SF=sf)
        lo, hi = sorted((t_hs, t_hr))
        for t in np.linspace(lo, hi - r.Ts, positions):
            scale = abs(float(geom.doppler(t, r.f_c)))
            for k in sorted({0, 1, r.M // 4, r.M // 2, r.M - 1}):
                mae, _ = approximation_error(float(t), k, r, geom)
                worst_abs = max(worst_abs, mae)
                worst_rel = max(worst_rel, mae / scale)
                n += 1
    ok = worst_abs < 1.0 and worst_rel < 1e-7
    return SuiteResult("Doppler approximation MAE", ok, worst_rel, n, time.perf_counter() - t0,
                       message=f"max MAE {worst_abs:.3g} Hz, max relative {worst_rel:.3g}")


def run_all(n_draws: int = 10_000, seed: int = 2024, rows: Sequence[Row] = ROWS, osf: int = MIN_OSF,
            quick: bool = False) -> list[SuiteResult]:
    if quick:
        n_draws = min(n_draws, 8 * MIN_ROW_HITS)
    return [
        oracle_suite("discrete", n_draws, seed, rows),
        oracle_suite("continuous", n_draws, seed + 1, rows, osf=osf),
        pointwise_suite(),
        approximation_suite(),
    ]
