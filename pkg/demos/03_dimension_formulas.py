"""The closed-form layer: anisotropic metric, graph-dimension formula, bounds.

Everything here is exact arithmetic; these functions are the oracles the
empirical estimators are judged against.
"""

import numpy as np

import parafbm as pf

# The space-time distance: time gaps are snowflaked by H.
u = (0.0, np.array([0.0, 0.0]))
v = (0.25, np.array([0.6, 0.1]))
print("rho_H(u, v) at H=0.5:", pf.rho_h(u, v, 0.5), " (time part 0.5, space part 0.6)")

# Graph dimension of an alpha-rough sample over a set of dimension dim_a:
# min((H/alpha) dim_a, dim_a + d (H - alpha)).
print("\ngraph dimension of B^alpha over [0,1] measured with H-boxes:")
for alpha, hurst, d in ((0.5, 0.5, 1), (0.3, 0.6, 1), (0.4, 0.8, 2)):
    v = pf.theoretical_graph_dimension(alpha, hurst, 1.0, d)
    print(f"  alpha={alpha} H={hurst} d={d}: {v:.4f}")

cdim = pf.middle_thirds_cantor(0).theoretical_dim
print(f"\nover the middle-thirds set (dim {cdim:.4f}):")
for alpha, hurst, d in ((0.3, 0.6, 1), (0.4, 0.8, 2)):
    v = pf.theoretical_graph_dimension(alpha, hurst, cdim, d)
    print(f"  alpha={alpha} H={hurst} d={d}: {v:.4f}  "
          f"(exceeds H*d={hurst * d}: {v > hurst * d})")

# A rougher-than-H sample strictly increases the graph dimension above dim_a.
print("\nroughness premium (alpha < H):",
      pf.theoretical_graph_dimension(0.3, 0.6, 0.4, 1), "> 0.4")

# Changing the box anisotropy H -> H' brackets the new dimension.
lo, up = pf.comparison_bounds(1.3, 0.5, 0.75, 2)
print("\ndim at H=0.5 is 1.3 -> dim at H'=0.75 lies in", (round(lo, 4), round(up, 4)))

# Holder functions: sandwich between dim_a and the formula value.
lo, up = pf.holder_graph_bounds(0.25, 0.5, 0.5, 2)
print("0.25-Holder graph over a dim-0.5 set, H=0.5, d=2: bounds", (lo, up))

# Parabolic and metric dimensions convert by a factor of H.
print("\npsi-dim of a full graph (metric dim d+1=2, H=0.5):",
      pf.psi_dim_from_metric_dim(2.0, 0.5))
