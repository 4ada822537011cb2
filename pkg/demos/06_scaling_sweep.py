"""How many frequencies does a faithful surrogate actually need?

For each qubit count the sweep searches for the smallest frequency
budget whose surrogate stays within 10% of the circuit's own test MSE,
median over seeds. The answer grows far more slowly than the lattice,
which is the whole point of the sampled route. Desk-scale settings keep
this demo under a minute; the command-line `sweep` runs the full size.
"""

from fourier_surrogates import (
    CircuitConfig,
    canonical_count,
    linear_fit,
    omega_max_of,
    sweep,
)

report = sweep(
    "frequencies",
    qubit_range=(2, 3, 4, 5),
    thresholds=(0.1,),
    seeds=8,
    dataset_size=300,
)

print("minimal frequency budget for a 10% relative MSE deviation:")
print(f"{'qubits':>6} {'median D':>9} {'mean':>8} {'lattice share':>14}")
for rec in report.records:
    n = rec["n_qubits"]
    canon = canonical_count(omega_max_of(CircuitConfig(n_qubits=n, n_layers=2)))
    share = rec["required_quantity"] / canon
    print(f"{n:>6} {rec['required_quantity']:>9.1f} {rec['mean']:>8.1f} "
          f"{share:>13.2%}")

fit = report.fits[0]
print(f"\nlinear fit over the medians: slope {fit['slope']:.2f} per qubit, "
      f"r^2 = {fit['r2']:.3f}")

xs = [rec["n_qubits"] for rec in report.records]
ys = [canonical_count(omega_max_of(CircuitConfig(n_qubits=n, n_layers=2)))
      for n in xs]
print("canonical lattice sizes over the same range:", ys)
print("(the requirement grows roughly linearly while the lattice "
      "grows five-fold per qubit)")
