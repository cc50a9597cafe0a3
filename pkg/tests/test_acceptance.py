"""Acceptance criteria 1-12, one test each.

Every test records a single "[PASS]/[FAIL] criterion N: ..." line (printed
in the pytest terminal summary, or directly when run as a script) and then
asserts the criterion at its stated tolerance.
"""

import time

import numpy as np
import pytest

from lorasat import RadioConfig, preset_scenario
from lorasat.ber import BerConfig, demodulate, run_ber, tolerable_threshold
from lorasat.doppler import dd_curve, differential_doppler, scenario_operating_points
from lorasat.geometry import PassGeometry, orbit_period, sample_pass
from lorasat.validate import approximation_suite, oracle_suite
from lorasat.waveform import synthesize_discrete_batch
from lorasat.xcorr import DopplerTable, aggregate_matrix, cfo_sweep, dominant_period
from lorasat.visibility import scenario_windows

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

THREADS = 4
CFO_GRID = np.arange(-2000.0, 2000.1, 25.0)  # grid of the cfo-sweep CLI preset
WIDE_GRID = np.arange(-8192.0, 8192.1, 32.0)  # long enough for several SF7 periods


def report(n: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def within(value, target, tol):
    return abs(value - target) <= tol


@pytest.fixture(scope="module")
def default_scenario():
    return preset_scenario("default")


@pytest.fixture(scope="module")
def ber_scenario():
    return preset_scenario("ber-paper")


@pytest.fixture(scope="module")
def wide_sweeps():
    return {sf: cfo_sweep(RadioConfig(SF=sf), RadioConfig(SF=sf), WIDE_GRID, threads=THREADS) for sf in (7, 8, 9)}


def test_criterion_01_window_duration(default_scenario):
    t0 = time.perf_counter()
    W_A, _, _ = scenario_windows(default_scenario)
    dt = time.perf_counter() - t0
    ok = within(W_A.duration, 422.0, 2.0) and dt < 1.0
    report(1, ok, f"single window {W_A.duration:.2f} s (target 422 +/- 2 s), runtime {dt * 1e3:.1f} ms")


def test_criterion_02_doppler_extrema(default_scenario):
    W_A, _, _ = scenario_windows(default_scenario)
    g = PassGeometry.for_device(default_scenario, "A")
    t = np.concatenate([np.linspace(a, b, 50_001) for a, b in W_A])
    s = sample_pass(g, t, default_scenario.radio_A.f_c)
    fd = np.abs(s.f_d) / 1e3
    rate = np.abs(s.f_d_rate)
    checks = {
        "min|f_d|": (fd.min(), 7.6, 0.01 * 7.6),
        "max|f_d|": (fd.max(), 18.2, 0.01 * 18.2),
        "min|rate|": (rate.min(), 8.3, 0.05 * 8.3),
        "max|rate|": (rate.max(), 165.1, 0.05 * 165.1),
    }
    ok = all(within(v, t_, tol) for v, t_, tol in checks.values())
    detail = ", ".join(f"{k} {v:.3f} (target {t_} +/- {tol:.3g})" for k, (v, t_, tol) in checks.items())
    report(2, ok, detail + " [kHz, Hz/s]")


def test_criterion_03_orbit_period(default_scenario):
    hours = orbit_period(default_scenario.constants, 500e3) / 3600
    report(3, within(hours, 1.57, 0.01), f"period at H = 500 km {hours:.4f} h (target 1.57 +/- 0.01 h)")


def test_criterion_04_doppler_approximation(default_scenario):
    r = approximation_suite(sfs=(7, 9, 12), positions=20, scenario=default_scenario)
    ok = r.passed and r.seconds < 10.0
    report(4, ok, f"{r.message}; {r.n} symbol periods; runtime {r.seconds:.2f} s")


def test_criterion_05_no_doppler_matrices():
    t0 = time.perf_counter()
    sfs = range(5, 10)
    disc = {(a, b): aggregate_matrix(RadioConfig(SF=a), RadioConfig(SF=b), threads=THREADS)
            for a in sfs for b in sfs}
    dt = time.perf_counter() - t0
    same_min = min(disc[a, a].max_corr for a in sfs)
    swap = max(np.max(np.abs(disc[a, b].values - disc[b, a].values.T)) for a in sfs for b in sfs)
    bw = 0.0
    for a in sfs:
        for b in sfs:
            ref = aggregate_matrix(RadioConfig(SF=a), RadioConfig(SF=b), domain="continuous", threads=THREADS)
            for B in (125e3, 500e3):
                m = aggregate_matrix(RadioConfig(SF=a, B=B), RadioConfig(SF=b, B=B), domain="continuous",
                                     threads=THREADS)
                bw = max(bw, float(np.max(np.abs(m.values - ref.values))))
    ok = same_min >= 0.999 and swap <= 1e-9 and bw <= 1e-6 and dt < 300
    report(5, ok, f"same-SF max >= {same_min:.6f}; swap asymmetry {swap:.2e}; bandwidth deviation {bw:.2e}; "
                  f"SF 5-9 grid in {dt:.2f} s")


def test_criterion_06_cross_bandwidth():
    vals = []
    for sf2 in (5, 6, 7, 8):
        # B1 = 2 B2 with equal chirp rate B^2/2^SF  =>  SF1 = SF2 + 2
        m = aggregate_matrix(RadioConfig(SF=sf2 + 2, B=500e3), RadioConfig(SF=sf2, B=250e3), domain="continuous",
                             threads=THREADS)
        vals.append(m.max_corr)
    ok = all(within(v, 0.707, 0.01) for v in vals)
    report(6, ok, "max |R| " + ", ".join(f"{v:.4f}" for v in vals) + " for SF2 = 5..8 (target 0.707 +/- 0.01)")


def test_criterion_07_cfo_anchor(wide_sweeps):
    r = RadioConfig(SF=9)
    anchor = aggregate_matrix(r, r, DopplerTable.static(r, -230.0), None, threads=THREADS).max_corr
    lo = min(sw.max_corr.min() for sw in wide_sweeps.values())
    hi = max(sw.max_corr.max() for sw in wide_sweeps.values())
    ok = within(anchor, 0.67, 0.02) and lo >= 0.58 and hi <= 1.0 + 1e-9
    report(7, ok, f"SF9 at -230 Hz: {anchor:.4f} (target 0.67 +/- 0.02); same-SF sweep range "
                  f"[{lo:.4f}, {hi:.4f}] within [0.58, 1.0]")


def test_criterion_08_period_halving(wide_sweeps):
    P = {sf: dominant_period(WIDE_GRID, sw.max_corr) for sf, sw in wide_sweeps.items()}
    parts, ok = [], True
    for m, n in ((7, 8), (8, 9)):
        ratio = P[n] / P[m]
        want = 1 / 2 ** (n - m)
        ok &= abs(ratio / want - 1) <= 0.05
        parts.append(f"P{n}/P{m} = {ratio:.4f} (target {want} +/- 5%)")
    report(8, ok, "; ".join(parts) + " | periods " + ", ".join(f"SF{k}: {v:.1f} Hz" for k, v in P.items()))


def test_criterion_09_dd_anchors(default_scenario):
    t_hs, t_hr = scenario_operating_points(default_scenario)
    d_hs = differential_doppler(t_hs, default_scenario).D_d
    d_hr = differential_doppler(t_hr, default_scenario).D_d
    far = default_scenario.rederive(distance_d=50e3)
    _, _, D = dd_curve(far, 2)
    ok = within(d_hs, -6.0, 10.0) and within(d_hr, -230.0, 10.0) and within(abs(D[-1]), 1200.0, 120.0)
    report(9, ok, f"D_d {d_hs:.2f} Hz at high shift (target -6 +/- 10), {d_hr:.2f} Hz at high rate "
                  f"(target -230 +/- 10); d = 50 km: |D_d| {abs(D[-1]):.1f} Hz (target 1200 +/- 10%)")


def test_criterion_10_oracle_equivalence():
    t0 = time.perf_counter()
    disc = oracle_suite("discrete", n_draws=10_000, seed=2024)
    cont = oracle_suite("continuous", n_draws=10_000, seed=2025)
    dt = time.perf_counter() - t0
    hits = min(min(disc.row_hits.values()), min(cont.row_hits.values()))
    ok = disc.passed and cont.passed and disc.max_error < 1e-9 and cont.max_error < 1e-6 and dt < 300
    report(10, ok, f"discrete max err {disc.max_error:.2e} (< 1e-9), continuous {cont.max_error:.2e} (< 1e-6) "
                   f"over 2 x 10^4 draws, min row hits {hits}, runtime {dt:.1f} s")


def test_criterion_11_ber_properties(ber_scenario):
    t0 = time.perf_counter()
    n = 10_000
    # (a) exhaustive noiseless demodulation
    a_ok = all(np.array_equal(demodulate(synthesize_discrete_batch(r, np.arange(r.M)), r), np.arange(r.M))
               for r in (RadioConfig(SF=sf) for sf in range(5, 10)))
    # (b) static CFO just below / at / above the tolerable threshold, no noise
    b_ok, b_parts = True, []
    for sf in (7, 9, 12):
        th = tolerable_threshold(RadioConfig(SF=sf))
        for cfo, want_zero in ((th * (1 - 1e-3), True), (th, False), (th * (1 + 1e-3), False)):
            c = run_ber(BerConfig(sf1=sf, noiseless=True, static_cfo=cfo, n_symbols=n), ber_scenario, THREADS)
            b_ok &= (c.errors[0] == 0) == want_zero
        b_parts.append(f"SF{sf}")
    # (c) high shift is no better than high rate at 95% confidence
    snr = tuple(range(-30, 1, 5))
    c_ok, worst = True, np.inf
    for sf in (7, 9):
        hs = run_ber(BerConfig(sf1=sf, snr_db=snr, doppler_tag="high_shift", n_symbols=n), ber_scenario, THREADS)
        hr = run_ber(BerConfig(sf1=sf, snr_db=snr, doppler_tag="high_rate", n_symbols=n), ber_scenario, THREADS)
        margin = hs.ber - hr.ber + np.hypot(hs.confidence(), hr.confidence())
        worst = min(worst, float(margin.min()))
        c_ok &= bool(np.all(margin >= 0))
    # (d) a same-SF interferer is the most harmful at SNR = SIR = 0 dB
    d_ok, d_parts = True, []
    for sf1 in range(5, 10):
        ber = {sf2: run_ber(BerConfig(sf1=sf1, sf2=sf2, snr_db=(0.0,), sir_db=(0.0,), n_symbols=n),
                            ber_scenario, THREADS).ber[0] for sf2 in range(5, 10)}
        others = max(v for k, v in ber.items() if k != sf1)
        d_ok &= ber[sf1] > others
        d_parts.append(f"SF{sf1}: {ber[sf1]:.3f} vs <= {others:.3f}")
    dt = time.perf_counter() - t0
    ok = a_ok and b_ok and c_ok and d_ok and dt < 600
    report(11, ok, f"(a) {'ok' if a_ok else 'FAIL'}; (b) threshold {'ok' if b_ok else 'FAIL'} for "
                   f"{', '.join(b_parts)}; (c) {'ok' if c_ok else 'FAIL'} (min margin {worst:.4f}); "
                   f"(d) {'ok' if d_ok else 'FAIL'} ({'; '.join(d_parts)}); runtime {dt:.1f} s")


def test_criterion_12_mean_correlation_immunity():
    worst, worst_pair, failing = 0.0, None, []
    alt_worst = 0.0
    for a in range(5, 10):
        for b in range(5, 10):
            sw = cfo_sweep(RadioConfig(SF=a), RadioConfig(SF=b), CFO_GRID, threads=THREADS)
            spread = float(sw.mean_corr.max() - sw.mean_corr.min())
            alt_worst = max(alt_worst, float(sw.mean_complex_abs.max() - sw.mean_complex_abs.min()))
            if spread > worst:
                worst, worst_pair = spread, (a, b)
            if spread >= 1e-2:
                failing.append(f"({a},{b}): {spread:.4f}")
    ok = not failing
    detail = (f"max variation of mean |R| over the CFO sweep {worst:.4f} at SF{worst_pair} (target < 1e-2)"
              + (f"; failing pairs {', '.join(failing)}" if failing else "")
              + f" | info: |mean R| convention varies by at most {alt_worst:.2e}")
    report(12, ok, detail)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
