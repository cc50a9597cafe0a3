"""Bit error rate of a Doppler-unaware dechirp receiver during a pass.

Run:  python demos/ber_curves.py   (about half a minute)
"""
from lorasat import BerConfig, preset_scenario, run_ber

scen = preset_scenario("ber-paper")
snr = tuple(range(-25, 1, 5))
print("SNR [dB]      " + " ".join(f"{s:7d}" for s in snr))
for tag in ("none", "high_rate", "high_shift"):
    for sf in (7, 9):
        c = run_ber(BerConfig(sf1=sf, snr_db=snr, doppler_tag=tag, n_symbols=5000), scen)
        print(f"{tag:10s} SF{sf:<2d}" + " ".join(f"{b:7.4f}" for b in c.ber))

print("\nSF7 desired signal, interferer at SIR = 0 dB and SNR = 0 dB")
for sf2 in range(5, 10):
    c = run_ber(BerConfig(sf1=7, sf2=sf2, snr_db=(0.0,), sir_db=(0.0,), n_symbols=5000), scen)
    print(f"  interferer SF{sf2}: BER {c.ber[0]:.4f}")
