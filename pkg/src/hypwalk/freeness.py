"""Freeness certificates, mixed-word enumeration, relation search, the
quasi-geodesic constant chain, and transversality/separation profiles.

Mixed words are normal-form words over S-letters (a finite list of group
elements with sign) and X-letters (walk variables with exponent): no two
consecutive S-letters, no two consecutive X-letters with the same variable.
Substituting concrete group elements for the variables turns statements
about abstract free products into finite, checkable computations:
`relation_search` looks for a substitution collapse, and
`free_product_certificate` decides freeness exactly via Stallings cores
(rank additivity; a rank-r subgroup generated by r elements is free on
them, so additivity is equivalent to the free-product conclusion).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import (BudgetExceededError, InvalidEpsilonError,
                     NotABasisError, NotLoxodromicError, WrongModelError)
from .geometry import is_quasi_geodesic, min_additive_constant, morse_bound
from .groups import GroupModel, IDENTITY, Word, serialize_word
from .paths import Path, QGConstants, _as_fraction, path_from_vertices
from .stallings import member, stallings_core

ENUM_BUDGET = 2_000_000        # mixed-word enumeration cap
ORBIT_BUDGET = 200_000         # truncated-orbit element cap


# ---------------------------------------------------------------------------
# Mixed words


@dataclass(frozen=True, slots=True)
class Syllable:
    """One syllable: S-letter s_index^exponent (exponent +-1) or X-letter
    x_index^exponent (exponent any nonzero integer)."""

    is_s: bool
    index: int
    exponent: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("negative letter index")
        if self.is_s and self.exponent not in (1, -1):
            raise ValueError("S-letters carry sign +-1 only")
        if not self.is_s and self.exponent == 0:
            raise ValueError("X-letters need a nonzero exponent")

    def __repr__(self):
        base = "s" if self.is_s else "x"
        return f"{base}{self.index + 1}^{self.exponent}"


@dataclass(frozen=True, slots=True)
class MixedWord:
    """Normal-form word over S union {x_1, ..., x_k}."""

    syllables: Tuple[Syllable, ...]

    def __post_init__(self):
        prev: Optional[Syllable] = None
        for syl in self.syllables:
            if prev is not None:
                if prev.is_s and syl.is_s:
                    raise ValueError("consecutive S-letters")
                if (not prev.is_s and not syl.is_s
                        and prev.index == syl.index):
                    raise ValueError("consecutive X-letters with one index")
            prev = syl

    @property
    def syllable_length(self) -> int:
        return len(self.syllables)

    def __repr__(self):
        if not self.syllables:
            return "MixedWord(1)"
        return "MixedWord(" + ".".join(repr(s) for s in self.syllables) + ")"


def _catalog(l: int, k: int, exponent_bound: int) -> List[Syllable]:
    """Letter catalog in enumeration order: S-letters by index with + before
    -, then X-letters by index with exponents +1, -1, +2, -2, ..."""
    letters = []
    for j in range(l):
        letters.append(Syllable(True, j, 1))
        letters.append(Syllable(True, j, -1))
    for i in range(k):
        for e in range(1, exponent_bound + 1):
            letters.append(Syllable(False, i, e))
            letters.append(Syllable(False, i, -e))
    return letters


def _letter_class(syl: Syllable) -> int:
    return -1 if syl.is_s else syl.index


def _suffix_counts(letters: Sequence[Syllable], k: int,
                   max_syllables: int) -> List[Dict[int, int]]:
    """counts[m][class] = number of valid length-m continuations after a
    syllable of the given class (class -2 = start-of-word)."""
    classes = sorted({-2, -1, *range(k)})
    counts: List[Dict[int, int]] = [{c: 1 for c in classes}]
    for _ in range(max_syllables):
        prev = counts[-1]
        nxt = {}
        for c in classes:
            total = 0
            for syl in letters:
                c2 = _letter_class(syl)
                if (c == -1 and c2 == -1) or (c >= 0 and c2 == c):
                    continue
                total += prev[c2]
            nxt[c] = total
        counts.append(nxt)
    return counts


def count_mixed_words(l: int, k: int, max_syllables: int,
                      exponent_bound: int) -> int:
    """Number of normal-form mixed words with 1..max_syllables syllables."""
    if min(l, k) < 0 or k < 1 or max_syllables < 0 or exponent_bound < 1:
        raise ValueError("invalid enumeration bounds")
    letters = _catalog(l, k, exponent_bound)
    counts = _suffix_counts(letters, k, max_syllables)
    return sum(counts[m][-2] for m in range(1, max_syllables + 1))


def enumerate_mixed_words(l: int, k: int, max_syllables: int,
                          exponent_bound: int, start_index: int = 0,
                          budget: int = ENUM_BUDGET) -> Iterator[MixedWord]:
    """All normal-form mixed words within bounds, each exactly once, in
    graded-lexicographic order (shorter first; within a length, catalog
    order).  ``start_index`` skips ahead in that order at O(length) cost per
    skipped subtree, so workers can partition the stream."""
    total = count_mixed_words(l, k, max_syllables, exponent_bound)
    if total > budget:
        raise BudgetExceededError(
            f"{total} mixed words exceed enumeration budget {budget}")
    if start_index < 0:
        raise ValueError("start_index must be >= 0")
    letters = _catalog(l, k, exponent_bound)
    counts = _suffix_counts(letters, k, max_syllables)
    skip = start_index

    def walk(length: int, depth: int, prev_class: int,
             prefix: List[Syllable]) -> Iterator[MixedWord]:
        nonlocal skip
        remaining = length - depth
        for syl in letters:
            c2 = _letter_class(syl)
            if (prev_class == -1 and c2 == -1) or \
                    (prev_class >= 0 and c2 == prev_class):
                continue
            subtree = counts[remaining - 1][c2]
            if skip >= subtree:
                skip -= subtree
                continue
            prefix.append(syl)
            if remaining == 1:
                yield MixedWord(tuple(prefix))
            else:
                yield from walk(length, depth + 1, c2, prefix)
            prefix.pop()

    for length in range(1, max_syllables + 1):
        level = counts[length][-2]
        if skip >= level:
            skip -= level
            continue
        yield from walk(length, 0, -2, [])


def evaluate(model: GroupModel, word: MixedWord, s_values: Sequence[Word],
             walk_values: Sequence[Word]) -> Word:
    """Substitute concrete elements for the letters and reduce."""
    parts = []
    for syl in word.syllables:
        if syl.is_s:
            if syl.index >= len(s_values):
                raise IndexError(f"S-letter index {syl.index} out of range")
            parts.append(model.power(s_values[syl.index], syl.exponent))
        else:
            if syl.index >= len(walk_values):
                raise IndexError(f"X-letter index {syl.index} out of range")
            parts.append(model.power(walk_values[syl.index], syl.exponent))
    return model.multiply_all(parts)


# ---------------------------------------------------------------------------
# Relation search


@dataclass(frozen=True, slots=True)
class SearchBounds:
    max_syllables: int
    exponent_bound: int
    s_words: Tuple[str, ...]


@dataclass(frozen=True, slots=True)
class RelationReport:
    found: bool
    witness: Optional[MixedWord]
    syllable_length: Optional[int]
    search_bounds: SearchBounds
    nodes_scanned: int


def _letter_values(model: GroupModel, letters: Sequence[Syllable],
                   s_values: Sequence[Word],
                   walk_values: Sequence[Word]) -> List[Word]:
    vals = []
    for syl in letters:
        src = s_values if syl.is_s else walk_values
        vals.append(model.power(src[syl.index], syl.exponent))
    return vals


def _kernel_arrays(model: GroupModel, letters: Sequence[Syllable],
                   values: Sequence[Word]):
    spells = [model.spelling(v) for v in values]
    wmax = max(1, max((len(s) for s in spells), default=1))
    codes = np.zeros((len(letters), wmax), dtype=np.int64)
    lens = np.zeros(len(letters), dtype=np.int64)
    for i, s in enumerate(spells):
        codes[i, : len(s)] = s
        lens[i] = len(s)
    classes = np.array([_letter_class(s) for s in letters], dtype=np.int64)
    return codes, lens, classes


def relation_search(model: GroupModel, s_values: Sequence[Word],
                    walk_values: Sequence[Word], max_syllables: int,
                    exponent_bound: int,
                    budget: int = ENUM_BUDGET) -> RelationReport:
    """Scan mixed words in graded-lexicographic order for one that evaluates
    to the identity; report the first (hence shortest) witness."""
    bounds = SearchBounds(max_syllables, exponent_bound,
                          tuple(serialize_word(s) for s in s_values))
    l, k = len(s_values), len(walk_values)
    if k < 1:
        return RelationReport(False, None, None, bounds, 0)
    total = count_mixed_words(l, k, max_syllables, exponent_bound)
    if total > budget:
        raise BudgetExceededError(
            f"{total} mixed words exceed search budget {budget}")
    letters = _catalog(l, k, exponent_bound)
    if model.kind == "free" and _kernels.HAVE_NUMBA:
        values = _letter_values(model, letters, s_values, walk_values)
        codes, lens, classes = _kernel_arrays(model, letters, values)
        status, best_len, witness_idx, nodes = _kernels.relation_dfs_free(
            codes, lens, classes, max_syllables, False, 4 * total + 4)
        if status == 1:
            syls = tuple(letters[int(j)] for j in witness_idx[:best_len])
            return RelationReport(True, MixedWord(syls), best_len, bounds,
                                  int(nodes))
        return RelationReport(False, None, None, bounds, int(nodes))
    nodes = 0
    for word in enumerate_mixed_words(l, k, max_syllables, exponent_bound,
                                      budget=budget):
        nodes += 1
        if evaluate(model, word, s_values, walk_values).is_identity:
            return RelationReport(True, word, word.syllable_length, bounds,
                                  nodes)
    return RelationReport(False, None, None, bounds, nodes)


# ---------------------------------------------------------------------------
# Theorem constant chain


@dataclass(frozen=True, slots=True)
class TheoremConstants:
    n: int
    epsilon: Fraction
    epsilon_prime: Fraction
    D: Fraction
    delta: Fraction
    c_prime: Fraction
    M: Fraction
    C0: Fraction
    C1: Fraction
    c_final: Fraction
    qg: QGConstants


def theorem_constants(n: int, epsilon, epsilon_prime, D,
                      delta) -> TheoremConstants:
    """The exact rational constant chain for the quasi-geodesic criterion:

        c' = 24*eps'*D*n + 24*delta + 2
        M  = morse_bound(delta, (2, c'))
        C0 = eps*D*n + 4*M
        C1 = 12*(C0 + delta) + c' + 1
        c_final = 2.5*M + C1,  certified constants qg = (8, c_final)
    """
    epsilon = _as_fraction(epsilon)
    epsilon_prime = _as_fraction(epsilon_prime)
    D = _as_fraction(D)
    delta = _as_fraction(delta)
    if not (0 < epsilon_prime < epsilon < 1):
        raise InvalidEpsilonError(
            f"need 0 < eps' < eps < 1, got eps'={epsilon_prime}, "
            f"eps={epsilon}")
    if D <= 0:
        raise ValueError("D must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    c_prime = 24 * epsilon_prime * D * n + 24 * delta + 2
    M = morse_bound(delta, QGConstants(2, c_prime))
    C0 = epsilon * D * n + 4 * M
    C1 = 12 * (C0 + delta) + c_prime + 1
    c_final = Fraction(5, 2) * M + C1
    return TheoremConstants(n, epsilon, epsilon_prime, D, delta, c_prime, M,
                            C0, C1, c_final, QGConstants(Fraction(8), c_final))


# ---------------------------------------------------------------------------
# Quasi-geodesic word check


@dataclass(frozen=True, slots=True)
class QGWordCheck:
    qg_bound_holds: bool
    measured: QGConstants
    endpoint_distance: int


def mixed_word_path(model: GroupModel, word: MixedWord,
                    s_values: Sequence[Word],
                    walk_values: Sequence[Word]) -> Path:
    """The path labeled by the word: one geodesic segment per letter, with
    X-letters of exponent e contributing |e| copies of the variable's
    geodesic."""
    verts = [IDENTITY]
    cur = IDENTITY
    for syl in word.syllables:
        if syl.is_s:
            steps = [model.power(s_values[syl.index], syl.exponent)]
        else:
            base = walk_values[syl.index]
            step = base if syl.exponent > 0 else model.invert(base)
            steps = [step] * abs(syl.exponent)
        for g in steps:
            nxt = model.multiply(cur, g)
            seg = model.geodesic_path(cur, nxt)
            verts.extend(seg.vertices[1:])
            cur = nxt
    return path_from_vertices(model, verts)


def qg_word_check(model: GroupModel, word: MixedWord,
                  s_values: Sequence[Word], walk_values: Sequence[Word],
                  constants: TheoremConstants) -> QGWordCheck:
    """Check the labeled path against the certified (8, c_final) constants
    and report the measured minimal additive constant at lambda = 8."""
    path = mixed_word_path(model, word, s_values, walk_values)
    holds = is_quasi_geodesic(model, path, constants.qg)
    measured = QGConstants(Fraction(8),
                           min_additive_constant(model, path, 8))
    endpoint = model.distance(path.start, path.end)
    return QGWordCheck(holds, measured, endpoint)


@dataclass(frozen=True, slots=True)
class EnumerationCheck:
    """Outcome of checking every enumerated mixed word against the certified
    constants for one concrete substitution."""

    count: int
    arc_bound: int                 # max possible labeled-path arc length
    qg_all_pass: bool
    qg_via_arc_bound: bool         # True when arc_bound <= lambda * c
    relation: RelationReport


def qg_enumeration_check(model: GroupModel, s_values: Sequence[Word],
                         walk_values: Sequence[Word], max_syllables: int,
                         exponent_bound: int, constants: TheoremConstants,
                         budget: int = ENUM_BUDGET) -> EnumerationCheck:
    """Exhaustive form of qg_word_check over enumerate_mixed_words.

    Quasi-geodesity: any unit-speed path of arc length T <= lambda*c is a
    (lambda, c)-quasi-geodesic outright, so when the worst-case labeled-path
    arc (max_syllables * longest letter value) is within 8 * c_final the
    whole family passes by that exact inequality; otherwise each word is
    checked individually.  Nontriviality of endpoints is a relation scan:
    some endpoint is trivial iff a relation exists within bounds.
    """
    letters = _catalog(len(s_values), len(walk_values), exponent_bound)
    values = _letter_values(model, letters, s_values, walk_values)
    longest = max((model.word_length(v) for v in values), default=0)
    arc_bound = max_syllables * longest
    lam, c = constants.qg
    qg_via_arc = arc_bound <= lam * c
    relation = relation_search(model, s_values, walk_values, max_syllables,
                               exponent_bound, budget=budget)
    if qg_via_arc:
        all_pass = True
    else:
        all_pass = True
        for word in enumerate_mixed_words(len(s_values), len(walk_values),
                                          max_syllables, exponent_bound,
                                          budget=budget):
            res = qg_word_check(model, word, s_values, walk_values, constants)
            if not res.qg_bound_holds:
                all_pass = False
                break
    count = count_mixed_words(len(s_values), len(walk_values), max_syllables,
                              exponent_bound)
    return EnumerationCheck(count, arc_bound, all_pass, qg_via_arc, relation)


# ---------------------------------------------------------------------------
# Free-product certificate (exact, free kind)


def free_product_certificate(model: GroupModel, h_gens: Sequence[Word],
                             walk_values: Sequence[Word]) -> bool:
    """True iff <h_gens union walks> is the free product of H = <h_gens> and
    a rank-k free group on the walks: exact via Stallings rank additivity.

    Requires the free kind and that h_gens is a basis of H (rank of its core
    equals |h_gens|); then the combined core has rank |h_gens| + k iff the
    combined set is a basis, which is the free-product conclusion.
    """
    if model.kind != "free":
        raise WrongModelError("certificate requires a free-group model")
    h_gens = list(h_gens)
    walk_values = list(walk_values)
    core_h = stallings_core(model, h_gens)
    if core_h.rank() != len(h_gens):
        raise NotABasisError(
            f"h_gens span a rank-{core_h.rank()} subgroup, not a basis of "
            f"size {len(h_gens)}")
    combined = stallings_core(model, h_gens + walk_values)
    return combined.rank() == len(h_gens) + len(walk_values)


# ---------------------------------------------------------------------------
# Truncated orbits and membership


def subgroup_orbit(model: GroupModel, gens: Sequence[Word], radius: int,
                   budget: int = ORBIT_BUDGET) -> Tuple[Word, ...]:
    """pi(H) intersected with the radius-ball, H = <gens>.

    Free kind: exact, by enumerating non-backtracking loops of the Stallings
    core (every subgroup element's reduced spelling traces one).  Product
    kind: breadth-first closure under the generators, keeping elements of
    length <= radius; exact for undistorted gens and always a subset of H.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if model.kind == "free":
        core = stallings_core(model, gens)
        out = [IDENTITY]
        # stack of (state, last_code, codes so far)
        stack: List[Tuple[int, int, Tuple[int, ...]]] = [(core.base, 0, ())]
        while stack:
            state, last, codes = stack.pop()
            if len(codes) >= radius:
                continue
            for (src, code), dst in core.transitions.items():
                if src != state or code == -last:
                    continue
                ncodes = codes + (code,)
                if dst == core.base:
                    out.append(model.unspell(ncodes))
                    if len(out) > budget:
                        raise BudgetExceededError(
                            f"orbit exceeds {budget} elements")
                stack.append((dst, code, ncodes))
        return tuple(sorted(set(out), key=serialize_word))
    seen = {IDENTITY}
    frontier = [IDENTITY]
    steps = [g for g in gens] + [model.invert(g) for g in gens]
    while frontier:
        nxt = []
        for h in frontier:
            for g in steps:
                cand = model.multiply(h, g)
                if cand in seen or model.word_length(cand) > radius:
                    continue
                seen.add(cand)
                nxt.append(cand)
                if len(seen) > budget:
                    raise BudgetExceededError(
                        f"orbit exceeds {budget} elements")
        frontier = nxt
    return tuple(sorted(seen, key=serialize_word))


def subgroup_member(model: GroupModel, gens: Sequence[Word], g: Word,
                    radius: Optional[int] = None) -> bool:
    """Membership in <gens>: exact Stallings query in the free kind; bounded
    orbit scan (radius defaults to |g|) in the product kind."""
    if model.kind == "free":
        core = stallings_core(model, gens)
        return member(model, core, g)
    r = model.word_length(g) if radius is None else radius
    return g in subgroup_orbit(model, gens, r)


# ---------------------------------------------------------------------------
# Profiles


@dataclass(frozen=True, slots=True)
class TransversalityProfile:
    f: Word
    K: Fraction
    axis_range: Tuple[int, int]
    coset_truncation: int
    records: Tuple[Tuple[Word, int], ...]
    max_diameter: int


@dataclass(frozen=True, slots=True)
class SeparationProfile:
    kappa: Fraction
    orbit_truncation: int
    records: Tuple[Tuple[Word, int], ...]
    max_diameter: int
    excluded: int       # candidates dropped because they lie in H


def _line_diameters(model: GroupModel, line: Sequence[Word],
                    cands: Sequence[Word], orbit: Sequence[Word],
                    K) -> List[int]:
    """For each candidate g: diam { p in line : d(p, g*orbit) <= K }.

    The kernel computes hit masks; diameters use exact pairwise distances
    between the hit line points, so no collinearity is assumed.
    """
    kf = math.floor(_as_fraction(K))  # distances are integers
    n_line = len(line)
    line_spells = [model.spelling(p) for p in line]
    if model.kind == "free" and _kernels.HAVE_NUMBA and line and cands:
        inv_line = [tuple(-c for c in reversed(s)) for s in line_spells]
        cand_spells = [model.spelling(g) for g in cands]
        orbit_spells = [model.spelling(h) for h in orbit]

        def pad(rows):
            w = max(1, max((len(r) for r in rows), default=1))
            arr = np.zeros((len(rows), w), dtype=np.int64)
            lens = np.zeros(len(rows), dtype=np.int64)
            for i, r in enumerate(rows):
                arr[i, : len(r)] = r
                lens[i] = len(r)
            return arr, lens

        il, ill = pad(inv_line)
        cs, csl = pad(cand_spells)
        os_, osl = pad(orbit_spells)
        masks = _kernels.hit_masks_free(il, ill, cs, csl, os_, osl, kf)
    else:
        masks = np.zeros((len(cands), n_line), dtype=np.uint8)
        orbit_spells = [model.spelling(h) for h in orbit]
        for ci, g in enumerate(cands):
            translated = [model.spelling(model.multiply(g, h))
                          for h in orbit]
            for li, sp in enumerate(line_spells):
                if any(model.distance_from_spellings(sp, t) <= kf
                       for t in translated):
                    masks[ci, li] = 1
    pair = np.zeros((n_line, n_line), dtype=np.int64)
    for i in range(n_line):
        for j in range(i + 1, n_line):
            pair[i, j] = pair[j, i] = model.distance_from_spellings(
                line_spells[i], line_spells[j])
    out = []
    for ci in range(len(cands)):
        idx = np.nonzero(masks[ci])[0]
        if len(idx) <= 1:
            out.append(0)
        else:
            out.append(int(pair[np.ix_(idx, idx)].max()))
    return out


def transversality_profile(model: GroupModel, f: Word,
                           target_gens: Sequence[Word], K,
                           coset_reps: Iterable[Word],
                           axis_range: Tuple[int, int],
                           coset_truncation: int) -> TransversalityProfile:
    """Diameter of the axis of f inside the K-neighborhood of each coset
    g * (truncated orbit of <target_gens>), for each candidate g."""
    if not model.is_loxodromic(f):
        raise NotLoxodromicError(f"{serialize_word(f)} is not loxodromic")
    axis = model.axis_path(f, axis_range)
    orbit = subgroup_orbit(model, target_gens, coset_truncation)
    cands = sorted(set(coset_reps), key=serialize_word)
    diams = _line_diameters(model, list(axis.vertices), cands, orbit, K)
    records = tuple(zip(cands, diams))
    return TransversalityProfile(
        f=f, K=_as_fraction(K), axis_range=tuple(axis_range),
        coset_truncation=coset_truncation, records=records,
        max_diameter=max(diams, default=0))


def separation_profile(model: GroupModel, h_gens: Sequence[Word], kappa,
                       g_candidates: Iterable[Word],
                       orbit_truncation: int) -> SeparationProfile:
    """Diameter of pi(H) inside the kappa-neighborhood of g*pi(H) for each
    candidate g outside H (orbit truncated to the given radius)."""
    orbit = subgroup_orbit(model, h_gens, orbit_truncation)
    cands_all = sorted(set(g_candidates), key=serialize_word)
    cands = [g for g in cands_all
             if not subgroup_member(model, h_gens, g)]
    excluded = len(cands_all) - len(cands)
    diams = _line_diameters(model, list(orbit), cands, orbit, kappa)
    records = tuple(zip(cands, diams))
    return SeparationProfile(
        kappa=_as_fraction(kappa), orbit_truncation=orbit_truncation,
        records=records, max_diameter=max(diams, default=0),
        excluded=excluded)


# ---------------------------------------------------------------------------
# Loxodromic products


@dataclass(frozen=True, slots=True)
class LoxProduct:
    z: Word
    path: Path
    qg_measured: QGConstants
    loxodromic: bool


def lox_product_word(model: GroupModel, y_values: Sequence[Word],
                     sequence: Sequence[Tuple[int, int]]) -> LoxProduct:
    """z = y_{i_1}^{m_1} ... y_{i_t}^{m_t} with the path through partial
    products; adjacent indices must differ (cyclically) and every y must be
    loxodromic.  ``qg_measured`` is (1, c) with c the measured minimal
    additive constant, and ``loxodromic`` reports translation_length(z) > 0.
    """
    if not sequence:
        raise ValueError("empty sequence")
    for y in y_values:
        if not model.is_loxodromic(y):
            raise NotLoxodromicError(
                f"{serialize_word(y)} is not loxodromic")
    idxs = [i for i, _ in sequence]
    for a, b in zip(idxs, idxs[1:]):
        if a == b:
            raise ValueError("adjacent sequence indices must differ")
    if len(idxs) > 1 and idxs[0] == idxs[-1]:
        raise ValueError("adjacent sequence indices must differ cyclically")
    for i, m in sequence:
        if not 0 <= i < len(y_values):
            raise IndexError(f"sequence index {i} out of range")
        if m == 0:
            raise ValueError("exponents must be nonzero")
    verts = [IDENTITY]
    cur = IDENTITY
    for i, m in sequence:
        nxt = model.multiply(cur, model.power(y_values[i], m))
        seg = model.geodesic_path(cur, nxt)
        verts.extend(seg.vertices[1:])
        cur = nxt
    path = path_from_vertices(model, verts)
    measured = QGConstants(Fraction(1),
                           min_additive_constant(model, path, 1))
    return LoxProduct(z=cur, path=path, qg_measured=measured,
                      loxodromic=model.translation_length(cur) > 0)
