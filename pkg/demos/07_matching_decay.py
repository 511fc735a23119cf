"""
Matching decay between independent walks
========================================

An (A, B)-match between two geodesics is a pair of subsegments of length
at least A that agree up to a translation within Hausdorff distance B.
Two independent random walk geodesics quickly stop sharing long exact
(B = 0) matches: the probability decays as n grows while the threshold
A = ceil(0.5 * D * n) grows with it.
"""

import math
from fractions import Fraction

from hypwalk import (derive_seed, find_match, free_group, path_from_vertices,
                     sample_walk, uniform_generators, walk_geodesic,
                     wilson_interval)

F = free_group(2)
mu = uniform_generators(F)
D = Fraction(1, 2)            # exact drift for the uniform walk
candidates = F.ball(3)        # translations g to try
trials = 300

print(f"translating over {len(candidates)} candidates, {trials} trials per n")
print("n    A    match rate   wilson 95% interval")
for n in (20, 40, 80):
    A = max(1, math.ceil(Fraction(1, 2) * D * n))
    hits = 0
    for t in range(trials):
        seed = derive_seed(72, "matching-demo", n, t)
        geos = [walk_geodesic(F, sample_walk(F, mu, n,
                                             derive_seed(seed, "walk", i)))
                for i in range(2)]
        witness = find_match(F, geos[0], geos[1], A, 0, candidates)
        hits += witness is not None
    lo, hi = wilson_interval(hits, trials)
    print(f"{n:<4d} {A:<4d} {hits / trials:<12.4f} [{lo:.4f}, {hi:.4f}]")

# a planted match is always found and comes with an explicit witness
walk = sample_walk(F, mu, 30, derive_seed(72, "planted", 0))
p = walk_geodesic(F, walk)
g = F.parse_word("a^1.b^-1")
q = path_from_vertices(F, [F.multiply(g, v) for v in p.vertices])
witness = find_match(F, p, q, p.length, 0, candidates)
print("\nplanted translate recovered:", witness is not None,
      " g =", witness and witness.g)
