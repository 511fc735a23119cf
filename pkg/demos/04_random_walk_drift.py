"""
Random walk drift
=================

A simple random walk on the free group of rank 2 escapes to infinity at
linear speed: d(e, w_n)/n -> 1/2 almost surely for the uniform measure
on the four generators.  The distance process is a birth-death chain, so
the walk-length distribution is also computable exactly.
"""

import numpy as np

from hypwalk import (birth_death_distance_distribution, derive_seed,
                     drift_estimate, drift_oracle_for, free_group,
                     sample_walk, uniform_generators, walk_geodesic)

F = free_group(2)
mu = uniform_generators(F)
print("support:", len(mu.support), "atoms, probabilities", mu.probabilities[0])

# one walk, fully reproducible from its seed
seed = derive_seed(2024, "demo-walk", 0)
walk = sample_walk(F, mu, 40, seed)
print("n=40 walk endpoint distance:", F.word_length(walk.endpoint))
print("geodesic to the endpoint has", walk_geodesic(F, walk).length, "edges")

# Monte Carlo drift estimate vs the exact oracle value
oracle = drift_oracle_for(F, mu)
est = drift_estimate(F, mu, n=400, trials=200, seed=7)
print(f"\noracle drift: {oracle} = {float(oracle):.3f}")
print(f"estimate at n=400, 200 trials: {float(est.mean_normalized_distance):.4f}"
      f"  (se {est.std_error:.4f})")

# the distance process is a birth-death chain, so the full law of d(e, w_n)
# is computable exactly; the 10%-band tail collapses as n grows
print("\nexact chain law: P(d outside [0.45n, 0.55n])")
for n in (400, 1000, 2000):
    dist = birth_death_distance_distribution(2, n)
    lo, hi = int(0.9 * n / 2), int(1.1 * n / 2)
    tail = dist[:lo].sum() + dist[hi + 1:].sum()
    mean = float(np.arange(n + 1) @ dist)
    print(f"  n={n:<5d} mean {mean:7.2f}   tail {tail:.2e}")
