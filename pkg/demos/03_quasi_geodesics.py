"""
Quasi-geodesics, axes, and broken concatenations
================================================

A (lambda, c)-quasi-geodesic distorts parameter distance by at most a
multiplicative lambda and additive c.  Loxodromic elements translate
along quasi-geodesic axes, and concatenations of long geodesic pieces
with small backtracking (junction Gromov products <= C0) stay uniformly
quasi-geodesic.
"""

from hypwalk import (IDENTITY, QGConstants, broken_concat_constants,
                     broken_concat_verify, free_group, is_quasi_geodesic,
                     min_additive_constant, morse_bound, serialize_word)

F = free_group(2)

# a cyclically reduced element: its axis is a genuine geodesic line
f = F.parse_word("a^1.b^1")
print("f =", serialize_word(f), " translation length =", F.translation_length(f))
axis = F.axis_path(f, (-3, 3))
print("axis constants:", axis.qg, " is (1,0)-geodesic:", is_quasi_geodesic(F, axis, QGConstants(1, 0)))

# an unreduced conjugate b a^3 b^-1 wobbles: the axis needs slack
g = F.parse_word("b^1.a^3.b^-1")
axis_g = F.axis_path(g, (-3, 3))
print("g =", serialize_word(g), " axis constants:", axis_g.qg)
print("least additive constant at lambda=1:", min_additive_constant(F, axis_g, 1))

# Morse stability: a (2,3)-quasi-geodesic in a 0-hyperbolic space stays
# within 92 * 2^2 * (3+0) = 1104 of the geodesic with the same endpoints
print("\nmorse_bound(0, (2,3)) =", morse_bound(0, QGConstants(2, 3)))

# broken concatenation: two geodesic legs meeting with bounded backtrack
k = QGConstants(1, 0)
consts = broken_concat_constants(0, k, 3)
print("C0=3 gives piece threshold c1 =", consts.c1,
      "and predicted constants", consts.geodesic_case, "for geodesic pieces")

u = F.power(F.parse_word("a^1"), 40)
v = F.multiply(u, F.power(F.parse_word("b^1"), 40))
legs = [F.geodesic_path(IDENTITY, u), F.geodesic_path(u, v)]
out = broken_concat_verify(F, legs, 0, 3, k)
print("orthogonal legs: hypotheses met:", out.hypotheses_met,
      " prediction holds:", out.prediction_holds)

# a concatenation that doubles back 10 steps has junction product 10 > 3,
# so the hypotheses fail (a distinguished outcome, not an error)
w = F.multiply(u, F.parse_word("a^-10.b^30"))
legs = [F.geodesic_path(IDENTITY, u), F.geodesic_path(u, w)]
out = broken_concat_verify(F, legs, 0, 3, k)
print("backtracking legs: hypotheses met:", out.hypotheses_met)
