"""
Mixed words, relation search, and quasi-geodesic certificates
=============================================================

Mixed words alternate subgroup letters s_i (exponent +-1) and walk
letters x_j (bounded nonzero exponents) with no two subgroup letters
adjacent.  Enumerating them in graded order gives both a relation search
(does any mixed word evaluate to the identity?) and a quasi-geodesic
check: under the theorem constants, every mixed word labels an
(8, c_final)-quasi-geodesic path.
"""

from fractions import Fraction

from hypwalk import (count_mixed_words, enumerate_mixed_words, evaluate,
                     free_group, mixed_word_path, qg_enumeration_check,
                     relation_search, serialize_word, theorem_constants)

F = free_group(2)

# the alphabet grows fast: counts for 1 subgroup letter, 2 walk letters
print("max syllables -> mixed word count (l=1, k=2, exponents <= 3)")
for ms in range(1, 7):
    print(f"  {ms}: {count_mixed_words(1, 2, ms, 3)}")

first = [repr(w) for w in enumerate_mixed_words(1, 2, 1, 2)]
print("length-1 words in order:", ", ".join(first))

# plant a relation: with s1 = a^2 and x1 evaluating to a^2, the word
# x1 s1^-1 collapses; the search returns the first witness in graded order
s_vals = [F.parse_word("a^2")]
walks = [F.parse_word("a^2"), F.parse_word("b^5")]
rep = relation_search(F, s_vals, walks, 4, 2)
print("\nplanted relation found:", rep.found, " witness:", rep.witness)
print("evaluates to:", serialize_word(evaluate(F, rep.witness, s_vals, walks)))

# independent values admit no relation at these bounds
walks = [F.parse_word("b^1.a^1.b^-1"), F.parse_word("b^2.a^1.b^-2")]
rep = relation_search(F, s_vals, walks, 4, 2)
print("independent walks: found =", rep.found,
      f"({rep.nodes_scanned} nodes scanned)")

# the quasi-geodesic certificate at n = 100 with the standard constants
consts = theorem_constants(100, Fraction(1, 10), Fraction(1, 20),
                           Fraction(1, 2), 0)
print("\ntheorem constants: c' =", consts.c_prime, " M =", consts.M,
      " c_final =", consts.c_final)
check = qg_enumeration_check(F, [F.parse_word("a^1")], walks, 4, 2, consts)
print(f"{check.count} words: all (8, c_final)-quasi-geodesic:",
      check.qg_all_pass, " via arc-length bound:", check.qg_via_arc_bound)

# each mixed word labels a concrete path through the Cayley graph
word = next(iter(enumerate_mixed_words(1, 2, 3, 2, start_index=40)))
p = mixed_word_path(F, word, [F.parse_word("a^1")], walks)
print("\nexample:", word, "labels a path of", p.length, "edges ending at",
      serialize_word(p.end))
