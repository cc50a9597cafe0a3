"""Command-line front end: window | xcorr | sweep | ber | validate.

Exit codes: 0 success, 1 validation failure, 2 usage or configuration error.
Every CSV is written next to a JSON sidecar holding the resolved scenario and
the command options needed to reproduce it.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .ber import BerConfig, run_ber, write_ber_csv
from .config import ConfigError, ScenarioConfig, load_scenario, preset_scenario, scenario_to_dict
from .doppler import dd_curve, scenario_operating_points
from .geometry import PassGeometry, sample_pass
from .visibility import EmptyWindow, InconsistentGeometry, scenario_windows
from .xcorr import (
    DEFAULT_PAIR_BUDGET,
    DEFAULT_SEED,
    ROWS,
    aggregate_matrix,
    cfo_sweep,
    doppler_table,
    mutate_row,
    write_grid_csv,
    write_summary_csv,
)

log = logging.getLogger("lorasat")


class UsageError(Exception):
    pass


# Figure-reproduction recipes. Each names its subcommand, the scenario preset
# it runs on and option defaults; explicit command-line options win.
FIGURE_PRESETS: dict[str, dict[str, Any]] = {
    "window": {"command": "window", "scenario": "default"},
    "xcorr-nodoppler": {"command": "xcorr", "scenario": "default", "doppler": "none", "sf": "5-12"},
    "xcorr-doppler": {"command": "xcorr", "scenario": "default", "doppler": "high_rate", "sf": "5-12"},
    "dd-curve": {"command": "sweep", "scenario": "default", "target": "start_time", "values": "0"},
    "cfo-sweep": {"command": "sweep", "scenario": "default", "target": "cfo",
                  "values": ",".join(str(v) for v in range(-2000, 2001, 25)), "sf": "7-12"},
    "param-H": {"command": "sweep", "scenario": "default", "target": "orbit_height",
                "values": "200e3,300e3,400e3,550e3,700e3,900e3", "sf": "7-12"},
    "param-i": {"command": "sweep", "scenario": "default", "target": "inclination",
                "values": "0,15,30,45,60,75,90", "sf": "7-12"},
    "param-d": {"command": "sweep", "scenario": "default", "target": "device_distance",
                "values": "10e3,20e3,30e3,40e3,50e3", "sf": "7-12"},
    "ber-snr": {"command": "ber", "scenario": "ber-paper", "doppler": "high_rate", "sf": "5-12",
                "snr": ",".join(str(v) for v in range(-30, 1, 2))},
    "ber-sir": {"command": "ber", "scenario": "ber-paper", "doppler": "high_rate", "sf": "5,10",
                "sf2": "5-12", "snr": "0", "sir": ",".join(str(v) for v in range(-20, 11, 2))},
}
FIGURE_PRESETS["fig12a"] = dict(FIGURE_PRESETS["ber-snr"])
FIGURE_PRESETS["fig12b"] = dict(FIGURE_PRESETS["ber-snr"], doppler="high_shift")
FIGURE_PRESETS["fig13"] = dict(FIGURE_PRESETS["ber-sir"])

SWEEP_TARGETS = ("orbit_height", "inclination", "device_distance", "start_time", "cfo", "snr", "sir")


# ---------------------------------------------------------------------------
# helpers


def parse_ints(text: str) -> list[int]:
    """'5-9' or '5,7,9' or a mix ('5-7,12')."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, part)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def parse_floats(text: str) -> list[float]:
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}: {exc}") from None
    if not vals or not np.all(np.isfinite(vals)):
        raise UsageError(f"grid must be nonempty and finite: {text!r}")
    return vals


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    return max(1, int(os.environ.get("LDS_THREADS", "1") or 1))


def _domain(args) -> str:
    return {"cont": "continuous", "disc": "discrete"}[args.domain]


def _option(args, name: str, default=None):
    """Explicit option, else the figure preset's value, else ``default``."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return args.recipe.get(name, default)


def _resolve_scenario(args) -> ScenarioConfig:
    if args.config:
        return load_scenario(args.config)
    name = args.recipe.get("scenario", "default") if args.recipe else "default"
    if args.preset and args.preset in ("default", "ber-paper"):
        name = args.preset
    return preset_scenario(name)


class Emitter:
    """Writes CSVs into the output directory, each with a JSON sidecar."""

    def __init__(self, out: Path, scenario: ScenarioConfig, args):
        self.out = out
        self.out.mkdir(parents=True, exist_ok=True)
        opts = {k: v for k, v in vars(args).items() if k not in ("func", "recipe") and v is not None}
        self.context = {
            "lorasat_version": __version__,
            "command": args.command,
            "options": opts,
            "preset": args.recipe,
            "scenario": scenario_to_dict(scenario),
        }
        self.files: list[str] = []

    def path(self, name: str) -> Path:
        self.files.append(name)
        return self.out / name

    def sidecar(self, name: str, extra: dict | None = None) -> None:
        payload = dict(self.context)
        if extra:
            payload.update(extra)
        (self.out / (Path(name).stem + ".json")).write_text(json.dumps(payload, indent=2, default=_jsonable))

    def csv(self, name: str, header: Sequence[str], rows, extra: dict | None = None) -> Path:
        p = self.path(name)
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
        self.sidecar(name, extra)
        return p


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return int(v)
    return v


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return str(v)


# ---------------------------------------------------------------------------
# subcommands


def cmd_window(args, scenario: ScenarioConfig) -> int:
    step = args.step
    if not step > 0:
        raise UsageError("--step must be > 0")
    W_A, W_B, W_sh = scenario_windows(scenario)
    em = Emitter(Path(args.out), scenario, args)
    rows = [(a, b, dev) for dev, W in (("A", W_A), ("B", W_B), ("shared", W_sh)) for a, b in W]
    em.csv("windows.csv", ["start_s", "end_s", "device"], rows,
           {"durations_s": {"A": W_A.duration, "B": W_B.duration, "shared": W_sh.duration}})
    lo = min(a for a, _ in list(W_A) + list(W_B)) - args.margin
    hi = max(b for _, b in list(W_A) + list(W_B)) + args.margin
    t = np.arange(lo, hi + step / 2, step)
    f_ref = scenario.radio_A.f_c
    sA = sample_pass(PassGeometry.for_device(scenario, "A"), t, f_ref)
    sB = sample_pass(PassGeometry.for_device(scenario, "B"), t, scenario.radio_B.f_c)
    em.csv("doppler_timeseries.csv",
           ["t_s", "f_d_A_hz", "rate_A_hz_s", "in_window_A", "f_d_B_hz", "rate_B_hz_s", "in_window_B"],
           zip(t, sA.f_d, sA.f_d_rate, W_A.contains(t).astype(int), sB.f_d, sB.f_d_rate,
               W_B.contains(t).astype(int)))
    print(f"window A: {W_A.duration:.2f} s in {len(W_A)} part(s); B: {W_B.duration:.2f} s; "
          f"shared: {W_sh.duration:.2f} s in {len(W_sh)} part(s)")
    if W_sh.is_empty:
        print("warning: the shared visibility window is empty", file=sys.stderr)
    return 0


def _doppler_tables(scenario, r1, r2, tag: str, domain: str, part: str):
    if tag == "none":
        return None, None, None
    t_hs, t_hr = scenario_operating_points(scenario, part)
    t = t_hs if tag == "high_shift" else t_hr
    gA = PassGeometry.for_device(scenario, "A")
    gB = PassGeometry.for_device(scenario, "B")
    return doppler_table(r1, gA, t, domain, tag=tag), doppler_table(r2, gB, t, domain, tag=tag), t


def _tau(scenario, radio, domain: str):
    # the scenario stores the delay in seconds; the discrete engine wants samples
    if domain == "discrete":
        return int(round(scenario.tau / radio.Td))
    return scenario.tau


def _radio(scenario, which: str, sf: int):
    base = scenario.radio_A if which == "A" else scenario.radio_B
    return replace(base, SF=sf)


def cmd_xcorr(args, scenario: ScenarioConfig) -> int:
    domain = _domain(args)
    tag = _option(args, "doppler", "none")
    sf1s = parse_ints(_option(args, "sf", "5-9"))
    sf2s = parse_ints(args.sf2) if args.sf2 else sf1s
    em = Emitter(Path(args.out), scenario, args)
    mats = []
    cache: dict = {}
    for sf1 in sf1s:
        for sf2 in sf2s:
            r1, r2 = _radio(scenario, "A", sf1), _radio(scenario, "B", sf2)
            key1, key2 = ("A", sf1), ("B", sf2)
            if key1 not in cache or key2 not in cache:
                d1, d2, t = _doppler_tables(scenario, r1, r2, tag, domain, args.part)
                cache.setdefault(key1, d1)
                cache.setdefault(key2, d2)
            m = aggregate_matrix(r1, r2, cache[key1], cache[key2], _tau(scenario, r1, domain), domain,
                                 args.pair_budget, args.seed, _threads(args), tag)
            mats.append(m)
            log.info("SF%d x SF%d: max %.4f mean %.4f", sf1, sf2, m.max_corr, m.mean_corr)
            if args.grid:
                write_grid_csv(em.path(f"grid_sf{sf1}_sf{sf2}.csv"), m)
                em.sidecar(f"grid_sf{sf1}_sf{sf2}.csv", {"matrix": {"sf1": sf1, "sf2": sf2, **m.meta}})
    write_summary_csv(em.path("xcorr_summary.csv"), mats)
    em.sidecar("xcorr_summary.csv", {"matrices": [{"sf1": m.sf1, "sf2": m.sf2, **m.meta} for m in mats]})
    for m in mats:
        print(f"SF{m.sf1} x SF{m.sf2} [{m.domain}, {m.doppler_tag}]: max {m.max_corr:.4f} mean {m.mean_corr:.4f}")
    return 0


def _geometry_variant(scenario: ScenarioConfig, target: str, value: float) -> ScenarioConfig:
    if target == "orbit_height":
        if not 200e3 <= value <= 900e3:
            raise UsageError(f"orbit height {value} m outside [200, 900] km")
        return scenario.rederive(orbit=replace(scenario.orbit, H=value))
    if target == "inclination":
        return scenario.rederive(orbit=replace(scenario.orbit, inclination_deg=value))
    if target == "device_distance":
        return scenario.rederive(distance_d=value)
    return scenario


def cmd_sweep(args, scenario: ScenarioConfig) -> int:
    target = _option(args, "target")
    if target not in SWEEP_TARGETS:
        raise UsageError(f"--target must be one of {', '.join(SWEEP_TARGETS)}")
    values = parse_floats(_option(args, "values", "0"))
    em = Emitter(Path(args.out), scenario, args)
    domain = _domain(args)
    sfs = parse_ints(_option(args, "sf")) if _option(args, "sf") else []

    if target in ("snr", "sir"):
        sf1 = sfs[0] if sfs else scenario.radio_A.SF
        cfg = BerConfig(sf1=sf1, snr_db=values if target == "snr" else (args.snr_fixed,),
                        sf2=(args.sf2_int if target == "sir" else None) or (sf1 if target == "sir" else None),
                        sir_db=values if target == "sir" else None, n_symbols=args.n_symbols,
                        doppler_tag=args.doppler or "none", seed=args.seed)
        curve = run_ber(cfg, scenario, _threads(args))
        write_ber_csv(em.path(f"sweep_{target}.csv"), [curve])
        em.sidecar(f"sweep_{target}.csv")
        return 0

    if target == "cfo":
        rows = []
        for sf in sfs or [scenario.radio_A.SF]:
            r = _radio(scenario, "A", sf)
            sw = cfo_sweep(r, r, values, domain, args.pair_budget, args.seed, _threads(args))
            rows += [(sf, d, mx, mn, mc) for d, mx, mn, mc in zip(sw.delta, sw.max_corr, sw.mean_corr,
                                                                   sw.mean_complex_abs)]
            print(f"SF{sf}: max |R| in [{sw.max_corr.min():.4f}, {sw.max_corr.max():.4f}], "
                  f"mean |R| in [{sw.mean_corr.min():.5f}, {sw.mean_corr.max():.5f}]")
        em.csv("cfo_sweep.csv", ["sf", "delta_hz", "max", "mean", "mean_complex_abs"], rows)
        return 0

    grid = values if target != "start_time" else [0.0]
    dd_rows, corr_rows, curves = [], [], []
    for v in grid:
        scen = _geometry_variant(scenario, target, v)
        try:
            t_norm, t, D_d = dd_curve(scen, args.n_points, args.part)
        except EmptyWindow:
            print(f"warning: {target}={v:g}: empty shared window", file=sys.stderr)
            continue
        dd_rows += [(v, a, b, c) for a, b, c in zip(t_norm, t, D_d)]
        curves.append(D_d)
        print(f"{target}={v:g}: D_d from {D_d[0]:.2f} Hz (high shift) to {D_d[-1]:.2f} Hz (high rate)")
        if sfs:
            for tn in np.linspace(0.0, 1.0, args.n_corr_points):
                ts = t[0] + tn * (t[-1] - t[0])
                for sf in sfs:
                    r1, r2 = _radio(scen, "A", sf), _radio(scen, "B", sf)
                    gA, gB = PassGeometry.for_device(scen, "A"), PassGeometry.for_device(scen, "B")
                    m = aggregate_matrix(r1, r2, doppler_table(r1, gA, ts, domain), doppler_table(r2, gB, ts, domain),
                                         0.0, domain, args.pair_budget, args.seed, _threads(args))
                    corr_rows.append((v, tn, ts, sf, m.max_corr, m.mean_corr))
    spread = float(np.max(np.ptp(np.array(curves), axis=0))) if len(curves) > 1 else 0.0
    if len(curves) > 1:
        print(f"max spread of D_d across {target} values at equal t_norm: {spread:.3f} Hz")
    em.csv("dd_curve.csv", [target, "t_norm", "t_start_s", "D_d_hz"], dd_rows, {"max_spread_hz": spread})
    if corr_rows:
        em.csv("same_sf_max.csv", [target, "t_norm", "t_start_s", "sf", "max", "mean"], corr_rows)
    return 0


def cmd_ber(args, scenario: ScenarioConfig) -> int:
    sf1s = parse_ints(_option(args, "sf", str(scenario.radio_A.SF)))
    sf2_text = _option(args, "sf2")
    sf2s = parse_ints(sf2_text) if sf2_text else [None]
    snr = parse_floats(_option(args, "snr", "0"))
    sir_text = _option(args, "sir")
    sir = parse_floats(sir_text) if sir_text else None
    tag = _option(args, "doppler", "none")
    em = Emitter(Path(args.out), scenario, args)
    curves = []
    for sf1 in sf1s:
        for sf2 in sf2s:
            cfg = BerConfig(sf1=sf1, snr_db=snr, sf2=sf2, sir_db=sir if sf2 is not None else None,
                            n_symbols=args.n_symbols, doppler_tag=tag, seed=args.seed)
            c = run_ber(cfg, scenario, _threads(args))
            curves.append(c)
            print(f"SF1={sf1} SF2={sf2} [{tag}]: BER " + " ".join(f"{b:.4g}" for b in c.ber))
    write_ber_csv(em.path("ber.csv"), curves)
    em.sidecar("ber.csv", {"t_start_s": curves[0].meta.get("t_start") if curves else None})
    return 0


def cmd_validate(args, scenario: ScenarioConfig) -> int:
    from .validate import run_all

    rows = ROWS
    if args.mutate:
        names = [r.name for r in ROWS]
        if args.mutate not in names:
            raise UsageError(f"--mutate must name a row ({', '.join(names)})")
        rows = mutate_row(ROWS, args.mutate)
    results = run_all(args.draws, args.seed if args.seed != DEFAULT_SEED else 2024, rows, args.osf, args.quick)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print("validate: " + ("all suites passed" if ok else "FAILED"))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="scenario JSON file")
    common.add_argument("--preset", metavar="NAME",
                        help="figure recipe (%s) or scenario preset (default, ber-paper)" % ", ".join(FIGURE_PRESETS))
    common.add_argument("--out", metavar="DIR", default="out", help="output directory (default: out)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (default 0xC0FFEE)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (fallback: LDS_THREADS)")
    common.add_argument("--domain", choices=("cont", "disc"), default="disc")
    common.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    common.add_argument("--part", choices=("approach", "recede"), default="recede",
                        help="shared-window segment used for start times")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="lorasat", description="LoRa cross-correlation and BER under LEO Doppler")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("window", parents=[common], help="visibility windows and Doppler time series")
    w.add_argument("--step", type=float, default=1.0, help="time-series step in s")
    w.add_argument("--margin", type=float, default=0.0, help="extra time beyond the windows in s")
    w.set_defaults(func=cmd_window)

    x = sub.add_parser("xcorr", parents=[common], help="max/mean cross-correlation over an SF grid")
    x.add_argument("--doppler", choices=("none", "high_shift", "high_rate"))
    x.add_argument("--sf", help="SF list for signal 1, e.g. 5-12")
    x.add_argument("--sf2", help="SF list for signal 2 (default: same as --sf)")
    x.add_argument("--grid", action="store_true", help="also write full |R| grids")
    x.set_defaults(func=cmd_xcorr)

    s = sub.add_parser("sweep", parents=[common], help="parameter sweeps")
    s.add_argument("--target", choices=SWEEP_TARGETS)
    s.add_argument("--values", help="comma-separated grid (SI units: m, deg, Hz, dB)")
    s.add_argument("--sf", help="SF list for correlation curves")
    s.add_argument("--n-points", type=int, default=101, help="start-time samples for D_d curves")
    s.add_argument("--n-corr-points", type=int, default=11, help="start-time samples for correlation curves")
    s.add_argument("--doppler", choices=("none", "high_shift", "high_rate"))
    s.add_argument("--sf2", dest="sf2_int", type=int, help="interferer SF for an SIR sweep")
    s.add_argument("--snr-fixed", type=float, default=0.0, help="SNR for an SIR sweep")
    s.add_argument("--n-symbols", type=int, default=10_000)
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("ber", parents=[common], help="Monte Carlo BER")
    b.add_argument("--sf", help="desired SF list")
    b.add_argument("--sf2", help="interferer SF list")
    b.add_argument("--snr", help="SNR grid in dB")
    b.add_argument("--sir", help="SIR grid in dB (makes SIR the axis)")
    b.add_argument("--doppler", choices=("none", "high_shift", "high_rate"))
    b.add_argument("--n-symbols", type=int, default=10_000)
    b.set_defaults(func=cmd_ber)

    v = sub.add_parser("validate", parents=[common], help="oracle-equivalence self checks")
    v.add_argument("--draws", type=int, default=10_000, help="fuzz draws per table")
    v.add_argument("--osf", type=int, default=16, help="quadrature oversampling factor")
    v.add_argument("--mutate", metavar="ROW", help="flip the sign of one case-table row's last piece")
    v.add_argument("--quick", action="store_true", help="reduced draw count")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    args.recipe = {}
    try:
        if args.preset and args.preset not in ("default", "ber-paper"):
            if args.preset not in FIGURE_PRESETS:
                raise UsageError(f"unknown preset {args.preset!r}")
            recipe = FIGURE_PRESETS[args.preset]
            if recipe["command"] != args.command:
                raise UsageError(f"preset {args.preset!r} belongs to the {recipe['command']!r} command")
            args.recipe = recipe
        if args.pair_budget < 1:
            raise UsageError("--pair-budget must be >= 1")
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        scenario = _resolve_scenario(args)
        return args.func(args, scenario)
    except (UsageError, ConfigError, InconsistentGeometry, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
