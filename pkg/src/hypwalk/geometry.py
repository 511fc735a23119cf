"""Metric geometry on Cayley graphs: Gromov products, quasi-geodesic
certification, Morse and broken-concatenation constants, central segments,
Hausdorff distance, match detection, and four-point delta estimation.

All checks operate on vertex sequences (unit-speed integer parameters);
continuous paths are discretized at unit speed, which perturbs nothing by
more than 1/2 and is absorbed into additive constants.  Everything is exact
integer / rational arithmetic; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BudgetExceededError, HypothesisViolatedError
from .groups import GroupModel, Word, serialize_word
from .paths import Path, QGConstants, _as_fraction

FOUR_POINT_BUDGET = 256      # |points| cap for the exhaustive quadruple scan
CANDIDATE_BUDGET = 100_000   # cap on match-candidate sets


# ---------------------------------------------------------------------------
# Gromov product


def gromov_product(model: GroupModel, x: Word, y: Word, z: Word) -> Fraction:
    """(x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2, exactly."""
    return Fraction(
        model.distance(x, z) + model.distance(y, z) - model.distance(x, y), 2)


# ---------------------------------------------------------------------------
# Quasi-geodesic checks

def _path_spellings(model: GroupModel, p: Path) -> List[Tuple[int, ...]]:
    return [model.spelling(v) for v in p.vertices]


def _sweep_max(model: GroupModel, spells: Sequence[Tuple[int, ...]],
               cum: Sequence[int], A: int, B: int) -> int:
    """max over vertex pairs i < j of  A*(t_j - t_i) - B*d(v_i, v_j).

    The inner loop updates the common prefix of spellings incrementally
    (consecutive path vertices differ by at most one unit step), so the whole
    scan is O(n^2) integer work with no distance recomputation.
    """
    n = len(spells)
    best = -(1 << 62)
    product_kind = model.kind == "product"
    lens = [len(s) for s in spells]
    # precompute step classification j -> j+1
    steps = []
    for j in range(n - 1):
        s, t = spells[j], spells[j + 1]
        if s == t:
            steps.append((0, 0))          # repeated vertex
        elif len(t) == len(s) + 1 and t[: len(s)] == s:
            steps.append((1, t[-1]))      # append
        elif len(t) == len(s) - 1 and s[: len(t)] == t:
            steps.append((2, 0))          # remove
        elif len(t) == len(s) and t[:-1] == s[:-1]:
            steps.append((3, t[-1]))      # modify last syllable (product)
        else:
            raise ValueError("consecutive path vertices differ by more "
                             "than one unit step")
    for i in range(n):
        si = spells[i]
        li = lens[i]
        # walk j upward, maintaining cp = |common prefix of si and sj|
        cp = li
        for j in range(i, n):
            if j > i:
                kind, code = steps[j - 1]
                lj = lens[j]
                if kind == 1:
                    if cp == lj - 1 and cp < li and si[cp] == code:
                        cp += 1
                elif kind == 2:
                    if cp > lj:
                        cp = lj
                elif kind == 3:
                    if cp >= lj - 1:
                        cp = lj - 1
                        if cp < li and si[cp] == code:
                            cp += 1
                d = (li - cp) + (lj - cp)
                if (product_kind and cp < li and cp < lj
                        and model.step_factor(si[cp])
                        == model.step_factor(spells[j][cp])):
                    d -= 1
                val = A * (cum[j] - cum[i]) - B * d
                if val > best:
                    best = val
    return best


def is_quasi_geodesic(model: GroupModel, p: Path, k: QGConstants) -> bool:
    """Exact lower-bound check: (t-s)/lambda - c <= d(p(s), p(t)) for all
    vertex parameter pairs.  (The upper bound is automatic at unit speed.)
    """
    lam, c = k.lam, k.c
    if p.length <= lam * c:
        # every parameter gap is at most lambda*c, so the bound is vacuous
        return True
    ln, ld = lam.numerator, lam.denominator
    cn, cd = c.numerator, c.denominator
    spells = _path_spellings(model, p)
    worst = _sweep_max(model, spells, p.cum, ld * cd, ln * cd)
    return worst <= ln * cn


def min_additive_constant(model: GroupModel, p: Path, lam) -> Fraction:
    """The least c >= 0 such that p is a (lambda, c)-quasi-geodesic."""
    lam = _as_fraction(lam)
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    spells = _path_spellings(model, p)
    worst = _sweep_max(model, spells, p.cum, lam.denominator, lam.numerator)
    if worst <= 0:
        return Fraction(0)
    return Fraction(worst, lam.numerator)


def morse_bound(delta, k: QGConstants) -> Fraction:
    """Stability constant 92 * lambda^2 * (c + delta) for (lambda, c)
    quasi-geodesics in a delta-hyperbolic space."""
    delta = _as_fraction(delta)
    return 92 * k.lam * k.lam * (k.c + delta)


# ---------------------------------------------------------------------------
# Hausdorff distance and central segments


def hausdorff_distance(model: GroupModel, p: Path, q: Path) -> int:
    """Vertex-level Hausdorff distance between the two vertex sets."""
    sp = _path_spellings(model, p)
    sq = _path_spellings(model, q)

    def one_sided(a, b):
        worst = 0
        for u in a:
            best = None
            for v in b:
                d = model.distance_from_spellings(u, v)
                if best is None or d < best:
                    best = d
                    if best == 0:
                        break
            worst = max(worst, best)
        return worst

    return max(one_sided(sp, sq), one_sided(sq, sp))


def _require_geodesic(model: GroupModel, p: Path):
    if p.length != model.distance(p.start, p.end):
        raise ValueError("path is not geodesic")


def central_segment(model: GroupModel, p: Path, K) -> Optional[Path]:
    """Subpath of a geodesic on parameters [K, n-K]; None when K > n/2."""
    _require_geodesic(model, p)
    K = _as_fraction(K)
    if K < 0:
        raise ValueError("K must be >= 0")
    n = p.length
    lo = math.ceil(K)
    hi = math.floor(n - K)
    if lo > hi:
        return None
    # geodesic => cum == 0..n, so parameters are vertex indices
    return p.subpath(lo, hi)


def central_segment_containment_check(model: GroupModel, p1: Path, p2: Path,
                                      delta) -> bool:
    """Geodesics with endpoints K apart: the (K+2*delta)-central segment of
    p1 must lie in the 2*delta-neighborhood of p2.  Always true in a
    delta-hyperbolic space; exposed as a checkable property."""
    _require_geodesic(model, p1)
    _require_geodesic(model, p2)
    delta = _as_fraction(delta)
    K = max(model.distance(p1.start, p2.start),
            model.distance(p1.end, p2.end))
    seg = central_segment(model, p1, K + 2 * delta)
    if seg is None:
        return True
    sq = _path_spellings(model, p2)
    for v in seg.vertices:
        sv = model.spelling(v)
        if min(model.distance_from_spellings(sv, u) for u in sq) > 2 * delta:
            return False
    return True


# ---------------------------------------------------------------------------
# Broken quasi-geodesic concatenations


@dataclass(frozen=True, slots=True)
class BrokenConstants:
    c1: Fraction
    general: QGConstants        # (4*lambda, 2.5*M + C1)
    geodesic_case: QGConstants  # (2, 2*C1)


def broken_concat_constants(delta, k: QGConstants, C0) -> BrokenConstants:
    """Constants for concatenations of (lambda, c)-quasi-geodesic pieces with
    junction Gromov products <= C0: C1 = 12*(C0 + delta) + c + 1, the
    concatenation is a (4*lambda, 2.5*M + C1)-quasi-geodesic (M the Morse
    bound of the pieces), and a (2, 2*C1)-quasi-geodesic when the pieces are
    geodesics.  Requires C0 >= 14*delta."""
    delta = _as_fraction(delta)
    C0 = _as_fraction(C0)
    if C0 < 14 * delta:
        raise HypothesisViolatedError(f"need C0 >= 14*delta, got C0={C0}, "
                                      f"delta={delta}")
    c1 = 12 * (C0 + delta) + k.c + 1
    M = morse_bound(delta, k)
    general = QGConstants(4 * k.lam, Fraction(5, 2) * M + c1)
    geodesic_case = QGConstants(Fraction(2), 2 * c1)
    return BrokenConstants(c1=c1, general=general, geodesic_case=geodesic_case)


@dataclass(frozen=True, slots=True)
class BrokenConcatOutcome:
    hypotheses_met: bool
    prediction_holds: Optional[bool]  # None when hypotheses are not met


def broken_concat_verify(model: GroupModel, segments: Sequence[Path], delta,
                         C0, k: QGConstants) -> BrokenConcatOutcome:
    """Check the concatenation hypotheses (pieces are (lambda, c)-quasi-
    geodesics of length >= lambda*C1 with junction Gromov products <= C0)
    and, when they hold, that the concatenation satisfies the predicted
    constants.  The prediction must always hold; a hypothesis failure is a
    distinguished outcome, not an error."""
    delta = _as_fraction(delta)
    C0 = _as_fraction(C0)
    segments = list(segments)
    if not segments:
        raise ValueError("need at least one segment")
    if C0 < 14 * delta:
        return BrokenConcatOutcome(False, None)
    consts = broken_concat_constants(delta, k, C0)
    if len(segments) == 1:
        seg = segments[0]
        ok = is_quasi_geodesic(model, seg, k)
        if not ok or seg.length < k.lam * consts.c1:
            return BrokenConcatOutcome(False, None)
        return BrokenConcatOutcome(True, _prediction(model, seg, k, consts))
    for seg in segments:
        if seg.length < k.lam * consts.c1 or not is_quasi_geodesic(model, seg, k):
            return BrokenConcatOutcome(False, None)
    for s, t in zip(segments, segments[1:]):
        if s.end != t.start:
            raise ValueError("segments do not share junction vertices")
        gp = gromov_product(model, s.start, t.end, s.end)
        if gp > C0:
            return BrokenConcatOutcome(False, None)
    from .paths import concat_paths

    whole = concat_paths(segments)
    return BrokenConcatOutcome(True, _prediction(model, whole, k, consts))


def _prediction(model, path, k, consts: BrokenConstants) -> bool:
    ok = is_quasi_geodesic(model, path, consts.general)
    if k.lam == 1 and k.c == 0:
        ok = ok and is_quasi_geodesic(model, path, consts.geodesic_case)
    return ok


# ---------------------------------------------------------------------------
# Neighborhood diameters (transversality / separation primitives)


def neighborhood_diameter(model: GroupModel, p: Path,
                          targets: Iterable[Word], K) -> int:
    """diam { vertices v of p : d(v, targets) <= K }; 0 for empty/singleton
    intersections (diam(emptyset) = 0 convention)."""
    K = _as_fraction(K)
    spells_t = [model.spelling(t) for t in targets]
    if not spells_t:
        return 0
    hits = []
    for v in p.vertices:
        sv = model.spelling(v)
        if min(model.distance_from_spellings(sv, u) for u in spells_t) <= K:
            hits.append(sv)
    if len(hits) <= 1:
        return 0
    return max(model.distance_from_spellings(u, v)
               for i, u in enumerate(hits) for v in hits[i + 1:])


# ---------------------------------------------------------------------------
# Match detection


@dataclass(frozen=True, slots=True)
class MatchWitness:
    """An (A, B)-match: g * p[range_p] and q[range_q] are vertex sets at
    Hausdorff distance <= B, both subsegments of arc length >= A.  Ranges are
    inclusive vertex-index intervals into the original paths."""

    g: Word
    range_p: Tuple[int, int]
    range_q: Tuple[int, int]
    hausdorff: int


def _tree_overlap_edges(model, a0, a1, b0, b1) -> int:
    """Edge length of the overlap of tree geodesics [a0,a1] and [b0,b1]."""
    s1 = model.distance(a0, b0) + model.distance(a1, b1)
    s2 = model.distance(a0, b1) + model.distance(a1, b0)
    return abs(s1 - s2) // 2


def _monotone_runs(flags: List[Optional[int]]) -> List[Tuple[int, int]]:
    """Maximal runs i..j where flags are non-None and step by a constant +-1."""
    out = []
    n = len(flags)
    i = 0
    while i < n:
        if flags[i] is None:
            i += 1
            continue
        j = i
        direction = 0
        while j + 1 < n and flags[j + 1] is not None:
            step = flags[j + 1] - flags[j]
            if step not in (1, -1) or (direction and step != direction):
                break
            direction = step
            j += 1
        out.append((i, j))
        i = j + 1
    return out


def find_match(model: GroupModel, p: Path, q: Path, A, B,
               candidates: Iterable[Word],
               exclude_identity: bool = False) -> Optional[MatchWitness]:
    """Search for an (A, B)-match between p and q over candidate translates.

    Deterministic scan order: candidates in serialized-word lexicographic
    order; per candidate, forward then reversed alignment of q, alignment
    offsets ascending, maximal runs by start ascending (each maximal run is
    the longest witness at its start).  Returns the first witness found.

    For B = 0 in the free kind the search is exact and fast: the translated
    segment g*p and q are geodesics in a tree, so their intersection is a
    single common subsegment computed from endpoint distances.
    """
    if A <= 0:
        raise ValueError("A must be > 0")
    B = _as_fraction(B)
    cands = sorted(set(candidates), key=serialize_word)
    if len(cands) > CANDIDATE_BUDGET:
        raise BudgetExceededError(
            f"{len(cands)} match candidates exceed cap {CANDIDATE_BUDGET}")
    if exclude_identity:
        cands = [g for g in cands if not g.is_identity]
    tree_fast = (model.kind == "free" and B == 0
                 and p.length == model.distance(p.start, p.end)
                 and q.length == model.distance(q.start, q.end))
    for g in cands:
        if tree_fast:
            w = _tree_match_witness(model, g, p, q, A)
        else:
            w = _sliding_match_witness(model, g, p, q, A, B)
        if w is not None:
            return w
    return None


def find_self_match(model: GroupModel, p: Path, A, B,
                    candidates: Iterable[Word]) -> Optional[MatchWitness]:
    """A match of p against itself by a nontrivial element (g != 1)."""
    return find_match(model, p, p, A, B, candidates, exclude_identity=True)


def _tree_match_witness(model, g, p, q, A) -> Optional[MatchWitness]:
    gp0 = model.multiply(g, p.start)
    gp1 = model.multiply(g, p.end)
    if _tree_overlap_edges(model, gp0, gp1, q.start, q.end) < A:
        return None
    # overlap is long enough; locate it by indexing q's vertices
    qindex: Dict[Word, int] = {}
    for j, v in enumerate(q.vertices):
        qindex.setdefault(v, j)
    flags = [qindex.get(model.multiply(g, v)) for v in p.vertices]
    best = None
    for s, e in _monotone_runs(flags):
        arc_p = p.cum[e] - p.cum[s]
        js, je = flags[s], flags[e]
        arc_q = abs(q.cum[je] - q.cum[js])
        if arc_p >= A and arc_q >= A:
            best = MatchWitness(g=g, range_p=(s, e),
                                range_q=(min(js, je), max(js, je)),
                                hausdorff=0)
            break
    return best


def _sliding_match_witness(model, g, p, q, A, B) -> Optional[MatchWitness]:
    gsp = [model.spelling(model.multiply(g, v)) for v in p.vertices]
    for reverse in (False, True):
        qv = list(q.vertices)[::-1] if reverse else list(q.vertices)
        qcum = list(q.cum)
        sq = [model.spelling(v) for v in qv]
        np_, nq = len(gsp), len(sq)
        for off in range(-(np_ - 1), nq):
            i0 = max(0, -off)
            i1 = min(np_, nq - off)
            run_start = None
            i = i0
            while i <= i1:
                ok = (i < i1 and model.distance_from_spellings(
                    gsp[i], sq[i + off]) <= B)
                if ok and run_start is None:
                    run_start = i
                if not ok and run_start is not None:
                    w = _run_witness(model, g, p, q, qcum, reverse,
                                     run_start, i - 1, off, A, B, nq)
                    if w is not None:
                        return w
                    run_start = None
                i += 1
        # (runs reaching i1 are closed by the loop's final iteration)
    return None


def _run_witness(model, g, p, q, qcum, reverse, s, e, off, A, B, nq):
    arc_p = p.cum[e] - p.cum[s]
    if reverse:
        j0, j1 = nq - 1 - (e + off), nq - 1 - (s + off)
    else:
        j0, j1 = s + off, e + off
    arc_q = abs(qcum[j1] - qcum[j0])
    if arc_p < A or arc_q < A:
        return None
    sub_p = p.subpath(s, e)
    translated = Path(tuple(model.multiply(g, v) for v in sub_p.vertices),
                      sub_p.cum)
    hd = hausdorff_distance(model, translated, q.subpath(j0, j1))
    if hd > B:
        return None
    return MatchWitness(g=g, range_p=(s, e), range_q=(j0, j1), hausdorff=hd)


# ---------------------------------------------------------------------------
# Four-point hyperbolicity estimation


def _spell_matrix(model: GroupModel, words: Sequence[Word]):
    spells = [model.spelling(w) for w in words]
    lens = np.array([len(s) for s in spells], dtype=np.int32)
    width = max(1, int(lens.max()) if len(lens) else 1)
    mat = np.zeros((len(spells), width), dtype=np.int64)
    for i, s in enumerate(spells):
        mat[i, : len(s)] = s
    return mat, lens


def distance_matrix(model: GroupModel, words: Sequence[Word]) -> np.ndarray:
    """All-pairs word-metric distances, vectorized via common prefixes."""
    mat, lens = _spell_matrix(model, words)
    n, width = mat.shape
    out = np.zeros((n, n), dtype=np.int32)
    block = max(1, int(2_000_000 // max(1, n * width)))
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        eq = mat[lo:hi, None, :] == mat[None, :, :]
        pos = np.arange(width, dtype=np.int32)
        valid = (pos[None, None, :] < np.minimum(lens[lo:hi, None],
                                                 lens[None, :])[:, :, None])
        cp = (np.cumprod(eq & valid, axis=2)).sum(axis=2).astype(np.int32)
        d = (lens[lo:hi, None] - cp) + (lens[None, :] - cp)
        if model.kind == "product":
            li = lens[lo:hi, None]
            lj = lens[None, :]
            both = (cp < li) & (cp < lj)
            cps = np.minimum(cp, width - 1)
            fi = mat[lo:hi][np.arange(hi - lo)[:, None], cps] // 1024
            fj = mat[np.arange(n)[None, :], cps] // 1024
            d = d - (both & (fi == fj)).astype(np.int32)
        out[lo:hi] = d
    return out


def four_point_delta(model: GroupModel, points: Sequence[Word],
                     budget: int = FOUR_POINT_BUDGET) -> Fraction:
    """Least delta4 with (x|y)_w >= min((x|z)_w, (y|z)_w) - delta4 over all
    quadruples of the given points.  Exhaustive; trees give exactly 0."""
    points = list(points)
    n = len(points)
    if n > budget:
        raise BudgetExceededError(
            f"four-point scan over {n} points exceeds cap {budget}")
    if n < 4:
        return Fraction(0)
    D = distance_matrix(model, points).astype(np.int32)
    worst2 = 0  # in units of 2*(gromov product)
    for w in range(n):
        row = D[w]
        G2 = row[:, None] + row[None, :] - D  # 2 * (x|y)_w
        # max over z of min(G2[x,z], G2[y,z]), blocked over x for memory
        blk = max(1, 8_000_000 // (n * n))
        for lo in range(0, n, blk):
            hi = min(n, lo + blk)
            mm = np.minimum(G2[lo:hi, None, :], G2[None, :, :]).max(axis=2)
            deficit = int((mm - G2[lo:hi]).max())
            if deficit > worst2:
                worst2 = deficit
    return Fraction(max(0, worst2), 2)
