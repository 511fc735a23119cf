"""
Gromov products and hyperbolicity
=================================

The Gromov product (x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2 measures how
long geodesics from z to x and to y travel together.  In a tree it equals
the distance from z to the geodesic [x, y] exactly, and the four-point
condition holds with delta = 0.
"""

from hypwalk import IDENTITY, four_point_delta, free_group, free_product, gromov_product

F = free_group(2)
x = F.parse_word("a^3.b^1")
y = F.parse_word("a^3.b^-2")
z = IDENTITY

gp = gromov_product(F, x, y, z)
print(f"(x|y)_e = {gp}  (exact rational)")

side = F.geodesic_path(x, y)
print("d(e, [x,y]) =", min(F.distance(z, v) for v in side.vertices))
# both equal 3: the geodesics share the prefix a^3

# the four-point condition (x|y)_w >= min((x|z)_w, (y|z)_w) - delta
# is exact with delta = 0 on the whole ball of radius 2
print("four_point_delta over ball(2):", four_point_delta(F, F.ball(2)))

# the free product Z/2 * Z/3 is quasi-tree-like; its configured constant
# delta = 1 is certified at construction by the same four-point scan
P = free_product(2, 3)
print("\nproduct model delta:", P.delta, " validation:", P.delta_validation)
print("four_point_delta over product ball(3):", four_point_delta(P, P.ball(3)))
