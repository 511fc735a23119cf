"""Exact word arithmetic and geodesics for two group families.

Implemented models:

* ``free(k)`` -- the free group of rank k >= 2.  Generating set: the 2k
  one-letter words.  Words are tuples of syllables ``(factor, power)`` with
  nonzero integer powers and adjacent factors distinct; the word length
  (= Cayley-graph distance from the identity) is the sum of |power|.

* ``product(m1, ..., ms)`` -- the free product Z/m1 * ... * Z/ms with s >= 2
  factors (the elementary case s = 2, m1 = m2 = 2 is excluded).  Generating
  set: every nontrivial element of every factor, so each syllable is one
  edge and the word length is the syllable count.  Powers are stored in
  [1, m_i - 1].

Both Cayley graphs are trees of cliques (a tree for the free kind), which is
what makes every metric question here exactly computable.  Words, models and
paths are immutable values.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    BudgetExceededError,
    InvalidLetterError,
    NotLoxodromicError,
)
from .paths import Path, QGConstants, concat_paths

BALL_BUDGET = 10**7  # default element cap for ball enumeration

# Encoded syllable for the free-product kind: factor * _CODE_BASE + power.
# Orders above _CODE_BASE - 1 are rejected at model construction.
_CODE_BASE = 1024


class Letter(NamedTuple):
    """One syllable: generator factor index and a nonzero power."""

    factor: int
    power: int


@dataclass(frozen=True, slots=True)
class Word:
    """A group element in normal form: a tuple of Letters."""

    letters: Tuple[Letter, ...] = ()

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def syllable_count(self) -> int:
        return len(self.letters)

    def __repr__(self):
        return f"Word({serialize_word(self)!r})"


IDENTITY = Word(())


def serialize_word(w: Word) -> str:
    """Syllable string like ``a^2.b^-1.a^1``; the identity is ``"e"``."""
    if w.is_identity:
        return "e"
    return ".".join(f"{string.ascii_lowercase[f]}^{p}" for f, p in w.letters)


_SYLLABLE_RE = re.compile(r"^([a-z])\^(-?\d+)$")


@dataclass(frozen=True, slots=True)
class GroupModel:
    """A free group or a free product of finite cyclic groups.

    ``delta`` is the hyperbolicity constant the model certifies for its
    Cayley graph: 0 for the free kind (a tree); for the product kind it is a
    configured value validated against the four-point estimator on a ball at
    construction time (see :func:`free_product`).  ``delta_validation``
    records (radius, estimated value) of that check when it ran.

    Model metadata trusted rather than computed: the maximal finite normal
    subgroup E(G) is trivial for both kinds, and the action on the Cayley
    graph is acylindrical (tree-like actions qualify).
    """

    kind: str  # "free" | "product"
    rank: int = 0
    orders: Tuple[int, ...] = ()
    delta: Fraction = Fraction(0)
    delta_validation: Optional[Tuple[int, Fraction]] = None

    # -- construction helpers ------------------------------------------------

    @property
    def n_factors(self) -> int:
        return self.rank if self.kind == "free" else len(self.orders)

    @property
    def trivial_finite_radical(self) -> bool:
        """E(G) = {1} for every implemented model."""
        return True

    def spec_string(self) -> str:
        if self.kind == "free":
            return f"free({self.rank})"
        return f"product({','.join(str(m) for m in self.orders)})"

    def _order(self, factor: int) -> Optional[int]:
        return None if self.kind == "free" else self.orders[factor]

    def _check_factor(self, factor: int):
        if not (0 <= factor < self.n_factors):
            raise InvalidLetterError(
                f"factor index {factor} out of range for {self.spec_string()}")

    def _norm_power(self, factor: int, power: int) -> int:
        """Normalize a raw power; 0 means the letter vanishes."""
        if self.kind == "free":
            return power
        return power % self.orders[factor]

    # -- normal forms ---------------------------------------------------------

    def reduce(self, w: Word | Iterable[Tuple[int, int]]) -> Word:
        """Unique normal form of a raw letter sequence (idempotent)."""
        letters = w.letters if isinstance(w, Word) else tuple(w)
        stack: List[Letter] = []
        for f, p in letters:
            self._check_factor(f)
            p = self._norm_power(f, p)
            if p == 0:
                continue
            if stack and stack[-1].factor == f:
                q = self._norm_power(f, stack[-1].power + p)
                stack.pop()
                if q != 0:
                    stack.append(Letter(f, q))
            else:
                stack.append(Letter(f, p))
        return Word(tuple(stack))

    def word(self, letters: Iterable[Tuple[int, int]]) -> Word:
        """Reduced Word from raw (factor, power) pairs."""
        return self.reduce(letters)

    def invert(self, g: Word) -> Word:
        inv = []
        for f, p in reversed(g.letters):
            self._check_factor(f)
            q = -p if self.kind == "free" else self.orders[f] - p
            inv.append(Letter(f, q))
        return Word(tuple(inv))

    def multiply(self, g: Word, h: Word) -> Word:
        return self.reduce(g.letters + h.letters)

    def multiply_all(self, words: Sequence[Word]) -> Word:
        acc = IDENTITY
        for w in words:
            acc = self.multiply(acc, w)
        return acc

    def power(self, g: Word, m: int) -> Word:
        if m == 0:
            return IDENTITY
        base = g if m > 0 else self.invert(g)
        acc = base
        for _ in range(abs(m) - 1):
            acc = self.multiply(acc, base)
        return acc

    def word_length(self, g: Word) -> int:
        """Cayley-graph distance from the identity."""
        if self.kind == "free":
            return sum(abs(p) for _, p in g.letters)
        return len(g.letters)

    def distance(self, g: Word, h: Word) -> int:
        return self.distance_from_spellings(self.spelling(g), self.spelling(h))

    # -- spellings (unit-step encodings) --------------------------------------

    def spelling(self, g: Word) -> Tuple[int, ...]:
        """Unit-step codes of the geodesic from the identity to g.

        Free kind: one code per generator letter, ``sign * (factor + 1)``.
        Product kind: one code per syllable, ``(factor+1) * 1024 + power``.
        Two reduced words share a prefix iff their spellings do, which is the
        basis of all vectorized distance computations.
        """
        codes: List[int] = []
        if self.kind == "free":
            for f, p in g.letters:
                c = (f + 1) if p > 0 else -(f + 1)
                codes.extend([c] * abs(p))
        else:
            for f, p in g.letters:
                codes.append((f + 1) * _CODE_BASE + p)
        return tuple(codes)

    def unspell(self, codes: Sequence[int]) -> Word:
        """Inverse of :meth:`spelling` (codes must be a valid spelling)."""
        if self.kind == "free":
            return self.reduce((abs(c) - 1, 1 if c > 0 else -1) for c in codes)
        return self.reduce(
            (c // _CODE_BASE - 1, c % _CODE_BASE) for c in codes)

    def step_factor(self, code: int) -> int:
        """Factor index of a spelling code (for merge tests)."""
        if self.kind == "free":
            return abs(code) - 1
        return code // _CODE_BASE - 1

    def distance_from_spellings(self, a: Sequence[int], b: Sequence[int]) -> int:
        """d(u, v) from the spellings of u and v, via their common prefix."""
        cp = 0
        lim = min(len(a), len(b))
        while cp < lim and a[cp] == b[cp]:
            cp += 1
        d = (len(a) - cp) + (len(b) - cp)
        if (self.kind == "product" and cp < len(a) and cp < len(b)
                and self.step_factor(a[cp]) == self.step_factor(b[cp])):
            d -= 1  # differing syllables in the same factor merge into one
        return d

    # -- geodesics ------------------------------------------------------------

    def geodesic_path(self, g: Word, h: Word) -> Path:
        """The geodesic from g to h as a vertex path.

        Vertices are ``g * prefix`` over the unit-step spelling of
        ``g^-1 h``.  In the free kind this geodesic is unique; in the product
        kind the normal-form spelling is used (leftmost convention), which is
        deterministic.
        """
        rel = self.multiply(self.invert(g), h)
        verts = [g]
        cur = list(g.letters)
        for code in self.spelling(rel):
            if self.kind == "free":
                f, p = abs(code) - 1, (1 if code > 0 else -1)
            else:
                f, p = code // _CODE_BASE - 1, code % _CODE_BASE
            if cur and cur[-1].factor == f:
                q = self._norm_power(f, cur[-1].power + p)
                cur.pop()
                if q != 0:
                    cur.append(Letter(f, q))
            else:
                cur.append(Letter(f, p))
            verts.append(Word(tuple(cur)))
        cum = tuple(range(len(verts)))
        return Path(tuple(verts), cum)

    # -- enumeration ----------------------------------------------------------

    def generators(self) -> List[Word]:
        """The model's generating set, in the documented deterministic order.

        Free kind: a, a^-1, b, b^-1, ...  Product kind: all nontrivial factor
        elements, factor-major, ascending powers.
        """
        gens = []
        if self.kind == "free":
            for f in range(self.rank):
                gens.append(Word((Letter(f, 1),)))
                gens.append(Word((Letter(f, -1),)))
        else:
            for f, m in enumerate(self.orders):
                for p in range(1, m):
                    gens.append(Word((Letter(f, p),)))
        return gens

    def sphere_sizes(self, r: int) -> List[int]:
        """|sphere(j)| for j = 0..r, from the growth recursion."""
        sizes = [1]
        if self.kind == "free":
            k = self.rank
            for j in range(1, r + 1):
                sizes.append(2 * k if j == 1 else sizes[-1] * (2 * k - 1))
        else:
            # count[f] = words of the current length ending in factor f
            count = {f: 0 for f in range(len(self.orders))}
            for j in range(1, r + 1):
                if j == 1:
                    nxt = {f: m - 1 for f, m in enumerate(self.orders)}
                else:
                    total = sum(count.values())
                    nxt = {
                        f: (total - count[f]) * (m - 1)
                        for f, m in enumerate(self.orders)
                    }
                count = nxt
                sizes.append(sum(count.values()))
        return sizes

    def ball_size(self, r: int) -> int:
        return sum(self.sphere_sizes(r))

    def ball(self, r: int, budget: int = BALL_BUDGET) -> List[Word]:
        """All reduced words of length <= r, in deterministic graded order."""
        if r < 0:
            raise ValueError("radius must be >= 0")
        total = self.ball_size(r)
        if total > budget:
            raise BudgetExceededError(
                f"ball({r}) of {self.spec_string()} has {total} elements, "
                f"budget is {budget}")
        out = [IDENTITY]
        layer = [IDENTITY]
        for _ in range(r):
            nxt = []
            for w in layer:
                last = w.letters[-1] if w.letters else None
                if self.kind == "free":
                    for f in range(self.rank):
                        for s in (1, -1):
                            if last is not None and last.factor == f:
                                # stay reduced: extend the run, never cancel
                                if (last.power > 0) != (s > 0):
                                    continue
                                nxt.append(Word(w.letters[:-1] +
                                                (Letter(f, last.power + s),)))
                            else:
                                nxt.append(Word(w.letters + (Letter(f, s),)))
                else:
                    for f, m in enumerate(self.orders):
                        if last is not None and last.factor == f:
                            continue
                        for p in range(1, m):
                            nxt.append(Word(w.letters + (Letter(f, p),)))
            layer = nxt
            out.extend(layer)
        return out

    # -- conjugacy and axes ----------------------------------------------------

    def cyclic_reduce(self, g: Word) -> Tuple[Word, Word]:
        """Split g = conjugator * core * conjugator^-1, core cyclically reduced."""
        core = list(self.reduce(g).letters)
        conj: List[Letter] = []
        while len(core) >= 2 and core[0].factor == core[-1].factor:
            f = core[0].factor
            first, last = core[0], core[-1]
            q = self._norm_power(f, last.power + first.power)
            mid = core[1:-1]
            conj.append(first)
            core = mid if q == 0 else mid + [Letter(f, q)]
        return Word(tuple(conj)), Word(tuple(core))

    def translation_length(self, g: Word) -> int:
        """Stable translation length; > 0 exactly for loxodromic elements.

        Free kind: the cyclically reduced length (every nontrivial element is
        loxodromic).  Product kind: single-syllable cores are torsion
        (elliptic), so only cores with >= 2 syllables translate.
        """
        _, core = self.cyclic_reduce(g)
        if self.kind == "free":
            return self.word_length(core)
        return len(core.letters) if len(core.letters) >= 2 else 0

    def is_loxodromic(self, g: Word) -> bool:
        return self.translation_length(g) > 0

    def axis_path(self, f: Word, m_range: Tuple[int, int]) -> Path:
        """Quasi-geodesic axis piece: geodesics through f^m for m in the range.

        The result records the certified constants lambda_f = |f| / tau(f)
        and c_f = 2 |f|.
        """
        tau = self.translation_length(f)
        if tau == 0:
            raise NotLoxodromicError(
                f"{serialize_word(f)} has translation length 0")
        lo, hi = m_range
        if lo > hi:
            raise ValueError("empty power range")
        segments = []
        cur = self.power(f, lo)
        for m in range(lo, hi):
            nxt = self.multiply(cur, f)
            segments.append(self.geodesic_path(cur, nxt))
            cur = nxt
        if not segments:  # degenerate range [m, m]
            single = self.power(f, lo)
            return Path((single,), (0,),
                        qg=QGConstants(Fraction(self.word_length(f), tau),
                                       2 * self.word_length(f)))
        path = concat_paths(segments)
        return Path(path.vertices, path.cum,
                    qg=QGConstants(Fraction(self.word_length(f), tau),
                                   2 * self.word_length(f)))

    # -- random words -----------------------------------------------------------

    def random_reduced_word(self, length: int, rng) -> Word:
        """Uniform-ish random reduced word of exactly the given length.

        Each step extends by a uniformly chosen non-cancelling generator;
        deterministic given the numpy Generator state.
        """
        letters: List[Letter] = []
        for _ in range(length):
            if self.kind == "free":
                while True:
                    f = int(rng.integers(0, self.rank))
                    s = 1 if int(rng.integers(0, 2)) == 0 else -1
                    if letters and letters[-1].factor == f:
                        if (letters[-1].power > 0) != (s > 0):
                            continue
                        letters[-1] = Letter(f, letters[-1].power + s)
                    else:
                        letters.append(Letter(f, s))
                    break
            else:
                while True:
                    f = int(rng.integers(0, len(self.orders)))
                    if letters and letters[-1].factor == f:
                        continue
                    p = int(rng.integers(1, self.orders[f]))
                    letters.append(Letter(f, p))
                    break
        return Word(tuple(letters))

    # -- parsing / serialization -------------------------------------------------

    def parse_word(self, text: str) -> Word:
        """Parse ``a^2.b^-1.a^1`` (or ``e`` for the identity) and reduce."""
        text = text.strip()
        if text in ("", "e"):
            return IDENTITY
        letters = []
        for part in text.split("."):
            m = _SYLLABLE_RE.match(part.strip())
            if m is None:
                raise ValueError(f"bad syllable {part!r} in word {text!r}")
            f = string.ascii_lowercase.index(m.group(1))
            self._check_factor(f)
            letters.append((f, int(m.group(2))))
        return self.reduce(letters)


def free_group(k: int) -> GroupModel:
    """The free group of rank k >= 2; delta = 0 (the Cayley graph is a tree)."""
    if k < 2:
        raise ValueError("free-group rank must be >= 2")
    if k > 26:
        raise ValueError("at most 26 factors supported (letter names a..z)")
    return GroupModel(kind="free", rank=k, delta=Fraction(0))


def free_product(*orders: int, delta=1, validate_delta: bool = True,
                 validation_radius: int = 5) -> GroupModel:
    """Free product of finite cyclic groups Z/m1 * ... * Z/ms.

    ``delta`` is a configured hyperbolicity constant; unless
    ``validate_delta=False`` it is certified at construction by running the
    four-point estimator on ``ball(validation_radius)`` and requiring the
    estimate to be <= 2 * delta.  The validation radius shrinks if the ball
    would blow the element budget; the radius actually used is recorded in
    ``delta_validation``.
    """
    orders = tuple(int(m) for m in orders)
    if len(orders) < 2:
        raise ValueError("a free product needs at least two factors")
    if any(m < 2 for m in orders):
        raise ValueError("cyclic factor orders must be >= 2")
    if orders == (2, 2):
        raise ValueError("Z/2 * Z/2 is elementary (virtually cyclic); excluded")
    if len(orders) > 26:
        raise ValueError("at most 26 factors supported (letter names a..z)")
    if max(orders) >= _CODE_BASE:
        raise ValueError(f"factor orders must be < {_CODE_BASE}")
    delta = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    model = GroupModel(kind="product", orders=orders, delta=delta)
    if validate_delta:
        from .geometry import four_point_delta  # deferred: geometry uses groups

        r = validation_radius
        while r > 1 and model.ball_size(r) > 2000:
            r -= 1  # keep the exhaustive quadruple check affordable
        pts = model.ball(r)
        est = four_point_delta(model, pts)
        if est > 2 * delta:
            raise ValueError(
                f"configured delta={delta} rejected: four-point estimate on "
                f"ball({r}) is {est} > 2*delta")
        model = GroupModel(kind="product", orders=orders, delta=delta,
                           delta_validation=(r, est))
    return model


_GROUP_RE = re.compile(r"^\s*(free|product)\s*\(\s*([0-9,\s]*)\s*\)\s*$")


def parse_group_spec(text: str, **kwargs) -> GroupModel:
    """Parse the config grammar ``free(k)`` / ``product(m1,m2,...)``."""
    m = _GROUP_RE.match(text)
    if m is None:
        raise ValueError(f"bad group spec {text!r}; "
                         "expected free(k) or product(m1,m2,...)")
    args = [int(x) for x in m.group(2).split(",") if x.strip()]
    if m.group(1) == "free":
        if len(args) != 1:
            raise ValueError("free(k) takes exactly one rank")
        return free_group(args[0])
    return free_product(*args, **kwargs)
