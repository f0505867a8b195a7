"""A small PAPR experiment: CCDF curves and quantiles per clipping ratio.

This is the per-cell machinery behind the full sweep, sized to finish in
about half a minute. The full reference run is `paprsim` (no arguments).

Run:  python demos/05_papr_ccdf_sweep.py
"""
from paprsim import ExperimentSpec, ModScheme, ccdf_quantile, run_papr_experiment

spec = ExperimentSpec(
    schemes=(ModScheme.from_name("qpsk"), ModScheme.from_name("16qam")),
    cr_values=(0.8, 1.2, 1.6),
    n_symbols=2000,
    ccdf_read_point=1e-2,  # read higher on the curve for this small batch
)

result = run_papr_experiment(spec)

print("clipped+filtered vs unclipped PAPR at the 1e-2 CCDF point, 2000 symbols:\n")
print(f"{'scheme':>8} {'CR':>5} {'processed dB':>13} {'unclipped dB':>13}")
for row in result.rows:
    print(f"{row.scheme:>8} {row.cr:>5g} {row.papr_db_clipped_filtered:>13.2f} "
          f"{row.papr_db_unclipped:>13.2f}")

print("\nreading one curve at a few probabilities (qpsk, CR=0.8):")
curve = result.curves[("qpsk", 0.8)].clipped
for p in (0.5, 0.1, 1e-2):
    print(f"  P(PAPR > t) = {p:g} at t = {ccdf_quantile(curve, p):.2f} dB")
print(f"  curve spans {curve.sample_count} symbols, "
      f"{curve.thresholds_db.size} thresholds")
