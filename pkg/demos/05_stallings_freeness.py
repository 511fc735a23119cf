"""
Stallings cores and freeness certificates
=========================================

A folded core graph decides membership and computes the rank of any
finitely generated subgroup of a free group.  That exact oracle powers a
freeness certificate: H together with k independent random walk
endpoints generates a free product H * F_k exactly when the combined
core has rank |gens(H)| + k.  The certificate rate climbs to 1 as the
walk length grows.
"""

from hypwalk import (derive_seed, free_group, free_product_certificate,
                     member, sample_walk, serialize_word, stallings_core,
                     uniform_generators)

F = free_group(2)

core = stallings_core(F, [F.parse_word("a^2"), F.parse_word("b^3")])
print("H = <a^2, b^3>: rank", core.rank())
for text in ("a^6", "a^3", "b^3.a^2", "a^1.b^1"):
    w = F.parse_word(text)
    print(f"  {text:8s} in H: {member(F, core, w)}")

# a distorted generator: <ab> is infinite cyclic, membership still exact
core2 = stallings_core(F, [F.parse_word("a^1.b^1")])
print("<ab> rank:", core2.rank(), " contains (ab)^5:",
      member(F, core2, F.power(F.parse_word("a^1.b^1"), 5)))

# freeness certificate for H = <a> joined with two walk endpoints
mu = uniform_generators(F)
H = [F.parse_word("a^1")]
print("\nn    certificate rate (100 trials)")
for n in (5, 15, 50):
    hits = 0
    for t in range(100):
        seed = derive_seed(5, "freeness-demo", n, t)
        walks = [sample_walk(F, mu, n, derive_seed(seed, "walk", i)).endpoint
                 for i in range(2)]
        hits += free_product_certificate(F, H, walks)
    print(f"{n:<4d} {hits / 100:.2f}")

# short walks can land inside <a> or collide; exhibit one failure
walks = [F.parse_word("a^2"), F.parse_word("b^1")]
print("\nwalks", [serialize_word(w) for w in walks],
      "-> certificate:", free_product_certificate(F, H, walks),
      "(a^2 already lies in <a>)")
