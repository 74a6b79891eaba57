"""Impact of transmit power and residual-noise variance on secrecy capacity.

With alpha fixed at 0.5 and a weaker eavesdropper channel, secrecy capacity
grows with transmit power and shrinks as the aggregated artificial-noise
variance sigma_A2 (the part that survives cancellation at the server) grows.
The sigma_A2 = 0 dB curve is the perfect-cancellation ceiling.
"""
from airfl import SecrecySweep, monte_carlo_secrecy

sweep = SecrecySweep(
    alpha_grid=(0.5,),
    power_db_grid=tuple(float(p) for p in range(0, 31, 5)),
    delta_h_grid=(1.0,),
    sigma_A2_db_grid=(0.0, 5.0, 10.0, 15.0, 20.0),
    sigma_a2_db=25.0,
)
results = monte_carlo_secrecy(sweep, n_samples=100_000, seed=0)

curves: dict[float, list] = {}
for r in results:
    curves.setdefault(r.sigma_A2_db, []).append((r.power_db, r.mean_c))

header = "P [dB] " + "  ".join(f"sA2={s:>4.0f}dB" for s in sorted(curves))
print(header)
powers = sorted({p for pts in curves.values() for p, _ in pts})
for p in powers:
    row = [f"{dict(curves[s])[p]:>9.4f}" for s in sorted(curves)]
    print(f"{p:>6.0f} " + "  ".join(row))
