"""
Words, normal forms, and tree geodesics
=======================================

Build the two group models (a free group and a free product of finite
cyclic groups), multiply and reduce words, and walk along geodesics in
the Cayley graph.
"""

from hypwalk import IDENTITY, free_group, free_product, serialize_word

F = free_group(2)
print("model:", F.spec_string(), "generators:", [serialize_word(g) for g in F.generators()])

# words are parsed from a dotted power notation and kept in normal form
g = F.parse_word("a^2.b^-1.a^1")
h = F.parse_word("a^-1.b^1")
print("g =", serialize_word(g), " h =", serialize_word(h))
print("g*h =", serialize_word(F.multiply(g, h)))       # the b-letters cancel
print("g^-1 =", serialize_word(F.invert(g)))
print("g^3 =", serialize_word(F.power(g, 3)))
print("|g| =", F.word_length(g), " d(g,h) =", F.distance(g, h))

# geodesics in the Cayley graph of a free group are unique tree paths
path = F.geodesic_path(g, h)
print("geodesic g -> h:", " , ".join(serialize_word(v) for v in path.vertices))
assert path.length == F.distance(g, h)

# balls grow like 4 * 3^(r-1): [1, 5, 17, 53, ...]
print("ball sizes:", [F.ball_size(r) for r in range(5)])

# the free product Z/2 * Z/3 measures length in syllables
P = free_product(2, 3)
print("\nmodel:", P.spec_string())
w = P.parse_word("a^1.b^2.a^1.b^1")
print("w =", serialize_word(w), " |w| =", P.word_length(w), "syllables")
print("w * w =", serialize_word(P.multiply(w, w)))
print("a^1 squared is trivial:", P.multiply(P.parse_word("a^1"), P.parse_word("a^1")) == IDENTITY)
print("ball sizes:", [P.ball_size(r) for r in range(6)])
