"""Cross-correlation between LoRa symbols of different spreading factors.

Shows the no-Doppler matrices in both time domains, then what the Doppler of
a real pass does to same-SF orthogonality.

Run:  python demos/xcorr_matrices.py
"""

from lorasat import PassGeometry, RadioConfig, aggregate_matrix, preset_scenario
from lorasat.doppler import scenario_operating_points
from lorasat.xcorr import doppler_table

sfs = range(5, 10)

def table(domain, d1=None, d2=None):
    print(f"{'':6s}" + "".join(f"SF{b:<11d}" for b in sfs))
    for a in sfs:
        row = []
        for b in sfs:
            m = aggregate_matrix(RadioConfig(SF=a), RadioConfig(SF=b), domain=domain)
            row.append(f"{m.max_corr:.3f}/{m.mean_corr:.4f}")
        print(f"SF{a:<4d}" + " ".join(row))

print("max / mean |R|, no Doppler, discrete time")
table("discrete")
print("\nmax / mean |R|, no Doppler, continuous time")
table("continuous")

# Same-SF pairs under the Doppler of the pass at the two operating points
scen = preset_scenario("default")
gA, gB = PassGeometry.for_device(scen, "A"), PassGeometry.for_device(scen, "B")
t_hs, t_hr = scenario_operating_points(scen)
print("\nsame-SF max |R| with pass Doppler (discrete)")
for name, t in (("high shift", t_hs), ("high rate", t_hr)):
    vals = []
    for sf in range(5, 13):
        r = RadioConfig(SF=sf)
        m = aggregate_matrix(r, r, doppler_table(r, gA, t), doppler_table(r, gB, t))
        vals.append(m.max_corr)
    print(f"{name:10s}", " ".join(f"SF{sf}:{v:.3f}" for sf, v in zip(range(5, 13), vals)))
