"""
Transversality, separation, and loxodromic products
===================================================

The axis of a loxodromic element f is transverse to the subgroup
H = <a>: the part of the axis within K of any coset g*H has bounded
diameter.  Distinct coset orbits are likewise geometrically separated.
Powers of independent loxodromics multiply to new loxodromics.
"""

from hypwalk import (free_group, lox_product_word, separation_profile,
                     serialize_word, transversality_profile)

F = free_group(2)
f = F.parse_word("b^1")
H = [F.parse_word("a^1")]
candidates = F.ball(6)

print(f"axis of f = b against cosets g<a>, g over ball(6) "
      f"({len(candidates)} elements)")
print("K    max diameter   bound 2K+2")
for K in (0, 1, 2):
    prof = transversality_profile(F, f, H, K, candidates, (-8, 8), 12)
    print(f"{K:<4d} {prof.max_diameter:<14d} {2 * K + 2}")

print("\nseparation of g<a> from <a> (excluding g in <a> itself)")
for kappa in (0, 1):
    prof = separation_profile(F, H, kappa, candidates, 12)
    print(f"kappa={kappa}: max diameter {prof.max_diameter} over "
          f"{len(prof.records)} cosets ({prof.excluded} excluded)")

# products of powers of independent loxodromics are loxodromic
y1 = F.parse_word("a^1.b^1")
y2 = F.parse_word("a^1.b^-1")
res = lox_product_word(F, [y1, y2], [(0, 3), (1, 4), (0, 2), (1, 1)])
print(f"\nz = y1^3 y2^4 y1^2 y2 = {serialize_word(res.z)}")
print("loxodromic:", res.loxodromic,
      " translation length:", F.translation_length(res.z))
print("the defining path is a", res.qg_measured, "quasi-geodesic")
