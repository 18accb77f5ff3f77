"""Cantor-type time sets with prescribed dimension and their natural measure."""

import parafbm as pf

# The classical middle-thirds set: dimension ln 2 / ln 3.
cantor = pf.middle_thirds_cantor(4)
print("middle thirds, generation 4:")
print("  intervals:", cantor.intervals.shape[0], "of length 3^-4 =", 3.0**-4)
print("  dimension:", cantor.theoretical_dim)

# Any dimension in (0, 1) is reachable with m branches of ratio r.
for dim in (0.3, 0.5, 0.7, 0.9):
    s = pf.cantor_with_dimension(dim, k=6)
    print(f"  target {dim}: m={s.params[0]} r={s.params[1]:.4f} "
          f"-> dim {s.theoretical_dim:.4f}")

# Sampling the self-similar measure: every generation-k interval carries
# equal mass, uniform within.
pts = pf.sample_natural_measure(cantor, 20_000, seed=1)
inside = cantor.contains(pts.times)
print("\nnatural-measure sample: all points inside the set:", bool(inside.all()))
left_mass = pts.weights[pts.times <= 1 / 3].sum()
print("mass of the left third (exact 0.5):", round(float(left_mass), 4))

# Generation is a resolution parameter: interval lengths shrink geometrically.
for k in (2, 6, 10):
    s = pf.middle_thirds_cantor(k)
    print(f"generation {k}: {s.intervals.shape[0]} intervals, "
          f"length {s.intervals[0, 1] - s.intervals[0, 0]:.2e}")
