"""Capacity-style energy sums and the kernel-expectation scaling law.

The energy sum over a graph cloud stabilizes with sample size when the
exponent sits below the graph dimension and diverges above it; the kernel
expectation E (max(t^H, t^alpha ||N||_inf))^(-gamma/H) decays with two
distinct exponents on either side of gamma = H d.
"""

import numpy as np

import parafbm as pf

# --- energy growth separates the two capacity regimes -----------------------

print("energy of alpha=H=0.5 graph clouds (graph dimension 1):")
for gamma in (0.5, 1.7):
    values = []
    for n in (512, 1024, 2048):
        grid = pf.TimeGrid.regular(n)
        pts = pf.WeightedTimeSet(times=grid.times, weights=np.full(n, 1.0 / n))
        es = [
            pf.energy_integral_mc(
                pts, pf.generate_fbm_path(0.5, grid, seed=s).values[0], gamma, 0.5
            )
            for s in range(3)
        ]
        values.append(np.median(es))
    growth = values[-1] / values[0]
    regime = "below dim: stabilizes" if gamma < 1 else "above dim: diverges"
    print(f"  gamma={gamma}: energies {np.round(values, 2)} "
          f"(x{growth:.2f} over 4x points; {regime})")

# --- kernel expectation scaling ---------------------------------------------

print("\nkernel expectation decay, n = 200k draws per point:")
ts = 2.0 ** -np.arange(1, 9)
for alpha, hurst, gamma, d in (
    (0.85, 0.9, 0.36, 2),   # gamma < H d
    (0.2, 0.8, 3.0, 1),     # gamma > H d
):
    vals = [
        pf.kernel_expectation_mc(t, alpha, hurst, gamma, d, 200_000, seed=i)
        for i, t in enumerate(ts)
    ]
    slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
    if gamma < hurst * d:
        theory = -gamma * alpha / hurst
        branch = "gamma < Hd"
    else:
        theory = d * (hurst - alpha) - gamma
        branch = "gamma > Hd"
    print(f"  {branch}: slope {slope:+.4f}  theory {theory:+.4f}")
