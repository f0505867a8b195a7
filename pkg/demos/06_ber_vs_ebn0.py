"""BER measurements: calibration against theory, then the clipping penalty.

First verifies that the unclipped QPSK chain sits on the textbook AWGN
curve, then shows how clipping depth trades peak power for error rate.

Run:  python demos/06_ber_vs_ebn0.py
"""
import numpy as np
from scipy.special import erfc

from paprsim import ExperimentSpec, ModScheme, OfdmParams, experiment_hpf, simulate_chain_ber

qpsk = ModScheme.from_name("qpsk")
no_cp = OfdmParams(cp_len=0)

print("unclipped QPSK over AWGN (no guard interval), 1e5 bits per point:")
print(f"{'Eb/N0':>6} {'measured':>10} {'theory':>10}")
for ebn0 in (0.0, 2.0, 4.0, 6.0):
    errors, total = simulate_chain_ber(no_cp, qpsk, ebn0_db=ebn0, min_bits=100_000, seed=42)
    theory = 0.5 * erfc(np.sqrt(10 ** (ebn0 / 10)))
    print(f"{ebn0:>6g} {errors/total:>10.5f} {theory:>10.5f}")

params = OfdmParams()
hpf = experiment_hpf(ExperimentSpec())
print("\n16qam with clipping and filtering at Eb/N0 = 12 dB, 1e5 bits per point:")
print(f"{'CR':>5} {'BER':>10}")
for cr in (0.8, 1.0, 1.2, 1.4, 1.6):
    errors, total = simulate_chain_ber(
        params, ModScheme.from_name("16qam"), ebn0_db=12.0, cr=cr,
        min_bits=100_000, seed=43, hpf=hpf,
    )
    print(f"{cr:>5g} {errors/total:>10.5f}")
print("\nsmaller CR clips harder: lower peak power, higher error floor.")
