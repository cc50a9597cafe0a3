import csv

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorasat.config import RadioConfig
from lorasat.geometry import PassGeometry
from lorasat.xcorr import (
    ROWS,
    AmbiguousCase,
    DopplerTable,
    NonConvergent,
    aggregate_matrix,
    boundaries,
    case_of,
    cfo_sweep,
    dispatch,
    dominant_period,
    doppler_table,
    mutate_row,
    pair_grid,
    write_grid_csv,
    write_summary_csv,
    xcorr_analytic_continuous,
    xcorr_analytic_discrete,
    xcorr_defining_continuous,
    xcorr_defining_discrete,
)


def random_table(rng, r):
    return DopplerTable(rng.uniform(-2e4, 2e4, r.M), rng.uniform(-300, 300, r.M), rng.uniform(-5, 5, r.M))


@given(sf1=st.integers(5, 8), sf2=st.integers(5, 8), seed=st.integers(0, 2**32 - 1), data=st.data())
@settings(max_examples=150, deadline=None)
def test_discrete_analytic_matches_definition(sf1, sf2, seed, data):
    rng = np.random.default_rng(seed)
    r1, r2 = RadioConfig(SF=sf1), RadioConfig(SF=sf2)
    k1 = data.draw(st.integers(0, r1.M - 1))
    k2 = data.draw(st.integers(0, r2.M - 1))
    m_tau = data.draw(st.integers(-r1.N - 2, r2.N + 2))
    d1 = random_table(rng, r1) if data.draw(st.booleans()) else None
    d2 = random_table(rng, r2) if data.draw(st.booleans()) else None
    a = xcorr_analytic_discrete(r1, r2, k1, k2, d1, d2, m_tau)
    b = xcorr_defining_discrete(r1, r2, k1, k2, d1, d2, m_tau)
    assert abs(a - b) < 1e-9


@given(sf1=st.integers(5, 7), sf2=st.integers(5, 7), seed=st.integers(0, 2**32 - 1), data=st.data())
@settings(max_examples=40, deadline=None)
def test_continuous_analytic_matches_definition(sf1, sf2, seed, data):
    rng = np.random.default_rng(seed)
    r1, r2 = RadioConfig(SF=sf1), RadioConfig(SF=sf2, B=data.draw(st.sampled_from([125e3, 250e3, 500e3])))
    k1 = data.draw(st.integers(0, r1.M - 1))
    k2 = data.draw(st.integers(0, r2.M - 1))
    tau = data.draw(st.floats(-r1.Ts, r2.Ts))
    d1 = random_table(rng, r1) if data.draw(st.booleans()) else None
    a = xcorr_analytic_continuous(r1, r2, k1, k2, d1, None, tau)
    b = xcorr_defining_continuous(r1, r2, k1, k2, d1, None, tau)
    assert abs(a - b) < 1e-6


def test_same_symbol_autocorrelation_is_one():
    r = RadioConfig(SF=8)
    for k in (0, 17, 255):
        assert xcorr_analytic_discrete(r, r, k, k) == pytest.approx(1.0)
        assert xcorr_analytic_continuous(r, r, k, k) == pytest.approx(1.0)


def test_no_overlap_is_zero():
    r = RadioConfig(SF=7)
    assert xcorr_analytic_discrete(r, r, 3, 4, m_tau=r.N) == 0
    assert xcorr_analytic_continuous(r, r, 3, 4, tau=-r.Ts * 1.5) == 0
    assert case_of(r, r, 3, 4, tau=r.Ts * 2) == ""


def test_every_row_reachable():
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(4000):
        sf1, sf2 = rng.integers(5, 10, 2)
        r1, r2 = RadioConfig(SF=int(sf1)), RadioConfig(SF=int(sf2))
        tau = rng.uniform(-r1.Ts, r2.Ts)
        seen.add(str(case_of(r1, r2, rng.integers(r1.M), rng.integers(r2.M), tau)))
    assert {r.name for r in ROWS} <= seen


def test_dispatch_prefers_lowest_row_and_strict_detects_disagreement():
    r = RadioConfig(SF=7)
    # equal symbols, no delay: both L7 and L8 hold with equality
    b = boundaries(r, r, 10, 10, 0.0, "discrete")
    assert ROWS[int(dispatch(b))].name == "L7"
    bad = mutate_row(ROWS, "L8")
    xcorr_analytic_discrete(r, r, 10, 10, rows=bad)  # lowest row wins, no complaint
    xcorr_analytic_discrete(r, r, 10, 10, strict=True)
    with pytest.raises(AmbiguousCase):
        xcorr_analytic_discrete(r, r, 10, 10, rows=bad, strict=True)


def test_mutated_row_is_caught_by_definition():
    r1, r2 = RadioConfig(SF=7), RadioConfig(SF=7)
    k1 = np.arange(r1.M)[:, None]
    k2 = np.arange(r2.M)[None, :]
    cases = case_of(r1, r2, k1, k2, 5, "discrete")
    b = boundaries(r1, r2, k1, k2, 5, "discrete")
    # a pair whose two pieces both have samples
    i, j = np.argwhere((cases == "L3") & (b["be"] < b["b"] - 4) & (b["b"] < b["en"] - 4))[0]
    bad = mutate_row(ROWS, "L3")
    good = xcorr_defining_discrete(r1, r2, int(i), int(j), m_tau=5)
    assert abs(xcorr_analytic_discrete(r1, r2, int(i), int(j), m_tau=5) - good) < 1e-9
    assert abs(xcorr_analytic_discrete(r1, r2, int(i), int(j), m_tau=5, rows=bad) - good) > 1e-3


def test_quadrature_refuses_low_oversampling():
    r = RadioConfig(SF=5)
    with pytest.raises(NonConvergent):
        xcorr_defining_continuous(r, r, 1, 2, osf=8)


def test_aggregate_discrete_matches_pairwise_definition(scenario):
    r1, r2 = RadioConfig(SF=5), RadioConfig(SF=6)
    g = PassGeometry.for_device(scenario, "A")
    d1 = doppler_table(r1, g, 150.0, "discrete")
    m = aggregate_matrix(r1, r2, d1, None, tau=3, domain="discrete")
    want = np.array([[abs(xcorr_defining_discrete(r1, r2, a, b, d1, None, 3)) for b in range(r2.M)]
                     for a in range(r1.M)])
    assert np.allclose(m.values, want, atol=1e-12)
    assert m.max_corr == pytest.approx(want.max())
    assert m.mean_corr == pytest.approx(want.mean())


def test_aggregate_continuous_matches_analytic():
    r1, r2 = RadioConfig(SF=6), RadioConfig(SF=5)
    m = aggregate_matrix(r1, r2, domain="continuous", tau=1e-5)
    a = np.abs(xcorr_analytic_continuous(r1, r2, np.arange(r1.M)[:, None], np.arange(r2.M)[None, :], tau=1e-5))
    assert np.allclose(m.values, a)


def test_threads_do_not_change_results():
    r = RadioConfig(SF=8)
    tab = DopplerTable.static(r, 300.0)
    a = aggregate_matrix(r, r, tab, None, threads=1)
    b = aggregate_matrix(r, r, tab, None, threads=4)
    assert np.array_equal(a.values, b.values)


def test_pair_grid_budget():
    k1, k2, sub = pair_grid(64, 64, 1 << 20)
    assert not sub and k1.size == 64
    k1, k2, sub = pair_grid(4096, 4096, 1 << 18, seed=5)
    assert sub and k1.size * k2.size <= 1 << 18
    assert len(set(k1)) == k1.size
    again = pair_grid(4096, 4096, 1 << 18, seed=5)
    assert np.array_equal(again[0], k1) and np.array_equal(again[1], k2)


def test_pair_grid_is_unbiased():
    # every row index appears in the sub-grid with equal probability
    counts = np.zeros(64)
    for seed in range(2000):
        counts[pair_grid(64, 64, 256, seed)[0]] += 1
    p = counts / 2000
    assert np.all(np.abs(p - 16 / 64) < 0.05)


def test_subsampled_matrix_flagged():
    r = RadioConfig(SF=9)
    m = aggregate_matrix(r, r, pair_budget=1000)
    assert m.subsampled and m.values.size <= 1000


def test_zero_cfo_sweep_reproduces_no_doppler():
    r = RadioConfig(SF=7)
    sw = cfo_sweep(r, r, [0.0, 100.0])
    base = aggregate_matrix(r, r)
    assert sw.max_corr[0] == pytest.approx(base.max_corr)
    assert sw.mean_corr[0] == pytest.approx(base.mean_corr)
    with pytest.raises(ValueError):
        cfo_sweep(r, r, [])


def test_dominant_period_of_sinusoid():
    x = np.arange(0, 4000, 8.0)
    assert dominant_period(x, np.cos(2 * np.pi * x / 250) + 0.1) == pytest.approx(250, rel=0.01)


def test_csv_writers(tmp_path):
    r = RadioConfig(SF=5)
    m = aggregate_matrix(r, r)
    write_summary_csv(tmp_path / "s.csv", [m])
    write_grid_csv(tmp_path / "g.csv", m)
    rows = list(csv.DictReader(open(tmp_path / "s.csv")))
    assert float(rows[0]["max"]) == pytest.approx(1.0)
    assert len(list(csv.reader(open(tmp_path / "g.csv")))) == 1 + r.M * r.M


@pytest.mark.parametrize("sf", [5, 7, 9])
def test_same_sf_mean_agrees_across_domains_when_averaged_before_magnitude(sf):
    r = RadioConfig(SF=sf)
    a = aggregate_matrix(r, r, domain="discrete")
    b = aggregate_matrix(r, r, domain="continuous")
    assert abs(a.mean_complex_abs - b.mean_complex_abs) < 1e-3


@pytest.mark.xfail(strict=True, reason="per-pair |R| differs between domains: off-diagonal discrete pairs "
                                       "are exactly orthogonal, continuous ones are not (see decisions ledger)")
@pytest.mark.parametrize("sf", [5, 7, 9])
def test_same_sf_mean_agrees_across_domains_per_pair(sf):
    r = RadioConfig(SF=sf)
    a = aggregate_matrix(r, r, domain="discrete")
    b = aggregate_matrix(r, r, domain="continuous")
    assert abs(a.mean_corr - b.mean_corr) < 1e-3
