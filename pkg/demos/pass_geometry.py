"""Walk through one satellite pass: visibility windows, Doppler shift and rate.

Run:  python demos/pass_geometry.py
"""
import numpy as np

from lorasat import PassGeometry, preset_scenario, scenario_windows
from lorasat.doppler import dd_curve, scenario_operating_points
from lorasat.geometry import orbit_period, sample_pass

scen = preset_scenario("default")
print(f"orbit height {scen.orbit.H / 1e3:.0f} km, period {orbit_period(scen.constants, scen.orbit.H) / 3600:.3f} h")

W_A, W_B, W_sh = scenario_windows(scen)
print("device A window:", [(round(a, 1), round(b, 1)) for a, b in W_A], f"total {W_A.duration:.1f} s")
print("device B window:", [(round(a, 1), round(b, 1)) for a, b in W_B], f"total {W_B.duration:.1f} s")
print("shared window:  ", [(round(a, 1), round(b, 1)) for a, b in W_sh], f"total {W_sh.duration:.1f} s")

# Doppler seen by device A over its window (f_c = 868 MHz)
g = PassGeometry.for_device(scen, "A")
t = np.concatenate([np.linspace(a, b, 2001) for a, b in W_A])
s = sample_pass(g, t, scen.radio_A.f_c)
print(f"|f_d| between {np.abs(s.f_d).min() / 1e3:.2f} and {np.abs(s.f_d).max() / 1e3:.2f} kHz")
print(f"|df_d/dt| between {np.abs(s.f_d_rate).min():.1f} and {np.abs(s.f_d_rate).max():.1f} Hz/s")

# Differential Doppler between the two devices across the receding half of the shared window
t_hs, t_hr = scenario_operating_points(scen)
print(f"\nhigh-shift start {t_hs:.2f} s, high-rate start {t_hr:.2f} s")
t_norm, ts, D = dd_curve(scen, 6)
for a, b, c in zip(t_norm, ts, D):
    print(f"  t_norm {a:.1f}  t {b:7.2f} s  D_d {c:8.2f} Hz")

for d in (10e3, 30e3, 50e3):
    _, _, D = dd_curve(scen.rederive(distance_d=d), 2)
    print(f"d = {d / 1e3:.0f} km: D_d at high rate {D[-1]:.1f} Hz")
