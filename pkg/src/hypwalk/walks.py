"""Seeded random walks on group models.

Step distributions are finite lists of (word, probability) atoms.  Every
stochastic quantity is a pure function of its inputs: streams come from a
counter-based generator (Philox) keyed by a 64-bit seed, and substreams are
derived by hashing (master_seed, label, ...) with SHA-256, so trials can be
executed in any order, on any number of workers, with identical results.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidProbabilitiesError, WrongDistributionError
from .groups import _CODE_BASE, GroupModel, IDENTITY, Word
from .paths import Path

PROB_SUM_TOL = 1e-12
Z95 = 1.959963984540054  # two-sided 95% normal quantile


# ---------------------------------------------------------------------------
# Seed derivation


def derive_seed(master_seed: int, *components) -> int:
    """Derive a 64-bit substream seed from a master seed and labels.

    SHA-256 over the decimal master seed and the string forms of the
    components, joined with an unambiguous separator; the first 8 digest
    bytes (big-endian) form the seed.  Deterministic across platforms and
    processes, and distinct labels give independent Philox streams.
    """
    parts = [str(int(master_seed))] + [str(c) for c in components]
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


# ---------------------------------------------------------------------------
# Step distributions


@dataclass(frozen=True, slots=True)
class Distribution:
    """Finite step distribution: parallel (support, probabilities) tuples.

    ``symmetric`` means closed under inversion with equal mass;
    ``full_support_generators`` means every model generator carries positive
    probability.  Both flags are computed by the factories below.  Finite
    symmetric full-support distributions are the permissible class for the
    walk experiments (bounded and reversible by construction, and the
    support generates the whole group).
    """

    support: Tuple[Word, ...]
    probabilities: Tuple[float, ...]
    symmetric: bool
    full_support_generators: bool

    @property
    def pairs(self) -> Tuple[Tuple[Word, float], ...]:
        return tuple(zip(self.support, self.probabilities))

    @property
    def identity_in_support(self) -> bool:
        return any(w.is_identity for w in self.support)


def _check_probabilities(probs: Sequence[float]):
    if not probs:
        raise InvalidProbabilitiesError("empty support")
    if any(p <= 0 for p in probs):
        raise InvalidProbabilitiesError("probabilities must be positive")
    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise InvalidProbabilitiesError(
            f"probabilities sum to {total!r}, not 1")


def _flags(model: GroupModel, support: Sequence[Word],
           probs: Sequence[float]) -> Tuple[bool, bool]:
    mass = {}
    for w, p in zip(support, probs):
        mass[w] = mass.get(w, 0.0) + p
    symmetric = all(
        abs(p - mass.get(model.invert(w), 0.0)) <= PROB_SUM_TOL
        for w, p in mass.items())
    gens = set(model.generators())
    full = gens.issubset(mass.keys())
    return symmetric, full


def make_distribution(model: GroupModel,
                      pairs: Sequence[Tuple[Word, float]]) -> Distribution:
    """Build a distribution from (word, weight) pairs, normalizing weights."""
    words = [model.reduce(w.letters) for w, _ in pairs]
    weights = [float(p) for _, p in pairs]
    if any(p <= 0 for p in weights):
        raise InvalidProbabilitiesError("weights must be positive")
    if len(set(words)) != len(words):
        raise InvalidProbabilitiesError("duplicate words in support")
    total = math.fsum(weights)
    if not math.isfinite(total) or total <= 0:
        raise InvalidProbabilitiesError(f"weights sum to {total!r}")
    probs = [p / total for p in weights]
    _check_probabilities(probs)
    symmetric, full = _flags(model, words, probs)
    return Distribution(tuple(words), tuple(probs), symmetric, full)


def uniform_generators(model: GroupModel) -> Distribution:
    """Uniform distribution on the model's standard generating set."""
    gens = model.generators()
    return make_distribution(model, [(g, 1.0) for g in gens])


@dataclass(frozen=True, slots=True)
class DistributionReport:
    probabilities_ok: bool
    symmetric: bool
    full_support_generators: bool
    identity_in_support: bool
    permissible: bool


def validate_distribution(model: GroupModel,
                          dist: Distribution) -> DistributionReport:
    """Check permissibility of a step distribution.

    Raises invalid-probabilities when the mass function is broken; otherwise
    reports the symmetry and full-support flags.  ``permissible`` is the
    sufficient condition used throughout: symmetric + support containing all
    generators (hence generating; non-elementarity follows in these models).
    """
    _check_probabilities(dist.probabilities)
    symmetric, full = _flags(model, dist.support, dist.probabilities)
    identity = dist.identity_in_support
    return DistributionReport(
        probabilities_ok=True,
        symmetric=symmetric,
        full_support_generators=full,
        identity_in_support=identity,
        permissible=symmetric and full,
    )


# ---------------------------------------------------------------------------
# Walk sampling


class WalkSample:
    """One sampled trajectory w(j) = g_1 ... g_j, j = 0..n.

    ``increments`` and ``endpoint`` are materialized; ``prefixes`` is
    computed on first access (it is an O(n^2)-letter object for long walks),
    while ``prefix_lengths`` runs in O(n) total via the spelling stack.
    """

    __slots__ = ("seed", "n", "increments", "endpoint", "_model", "_prefixes")

    def __init__(self, model: GroupModel, seed: int, n: int,
                 increments: Tuple[Word, ...], endpoint: Word):
        self.seed = seed
        self.n = n
        self.increments = increments
        self.endpoint = endpoint
        self._model = model
        self._prefixes: Optional[Tuple[Word, ...]] = None

    def __eq__(self, other):
        return (isinstance(other, WalkSample)
                and (self.seed, self.n, self.increments)
                == (other.seed, other.n, other.increments))

    def __hash__(self):
        return hash((self.seed, self.n, self.increments))

    def __repr__(self):
        return (f"WalkSample(seed={self.seed}, n={self.n}, "
                f"endpoint={self.endpoint!r})")

    @property
    def prefixes(self) -> Tuple[Word, ...]:
        if self._prefixes is None:
            model = self._model
            out = [IDENTITY]
            for g in self.increments:
                out.append(model.multiply(out[-1], g))
            self._prefixes = tuple(out)
        return self._prefixes

    def prefix(self, j: int) -> Word:
        if not 0 <= j <= self.n:
            raise IndexError(f"prefix index {j} out of range 0..{self.n}")
        if self._prefixes is not None:
            return self._prefixes[j]
        return self._model.multiply_all(self.increments[:j])

    def prefix_lengths(self) -> List[int]:
        """d(x0, w(j) x0) for j = 0..n, in O(n) stack updates."""
        model = self._model
        stack: List[int] = []
        out = [0]
        for g in self.increments:
            for code in model.spelling(g):
                _push_code(model, stack, code)
            out.append(len(stack))
        return out


def _push_code(model: GroupModel, stack: List[int], code: int):
    if model.kind == "free":
        if stack and stack[-1] == -code:
            stack.pop()
        else:
            stack.append(code)
    else:
        f, p = code // _CODE_BASE, code % _CODE_BASE
        if stack and stack[-1] // _CODE_BASE == f:
            q = (stack[-1] % _CODE_BASE + p) % model.orders[f - 1]
            stack.pop()
            if q:
                stack.append(f * _CODE_BASE + q)
        else:
            stack.append(code)


def _sample_indices(dist: Distribution, n: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(key=seed))
    cum = np.cumsum(np.asarray(dist.probabilities, dtype=np.float64))
    cum[-1] = 1.0  # guard against rounding; rng.random() < 1
    u = rng.random(n)
    return np.searchsorted(cum, u, side="right")


def sample_walk(model: GroupModel, dist: Distribution, n: int,
                seed: int) -> WalkSample:
    """Sample n i.i.d. increments from the Philox stream keyed by seed."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return WalkSample(model, seed, 0, (), IDENTITY)
    idx = _sample_indices(dist, n, seed)
    increments = tuple(dist.support[i] for i in idx)
    spells = [model.spelling(w) for w in dist.support]
    stack: List[int] = []
    for i in idx:
        for code in spells[i]:
            _push_code(model, stack, code)
    endpoint = model.unspell(stack)
    return WalkSample(model, seed, n, increments, endpoint)


def walk_distance(model: GroupModel, dist: Distribution, n: int,
                  seed: int) -> int:
    """d(x0, w(n) x0) without materializing words (same stream as
    sample_walk: identical seed gives the identical endpoint)."""
    if n == 0:
        return 0
    idx = _sample_indices(dist, n, seed)
    spells = [model.spelling(w) for w in dist.support]
    stack: List[int] = []
    for i in idx:
        for code in spells[i]:
            _push_code(model, stack, code)
    return len(stack)


def walk_geodesic(model: GroupModel, sample: WalkSample) -> Path:
    """Geodesic from the basepoint to the walk endpoint."""
    return model.geodesic_path(IDENTITY, sample.endpoint)


# ---------------------------------------------------------------------------
# Estimators


def wilson_interval(successes: int, trials: int) -> Tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    n = float(trials)
    p = successes / n
    z2 = Z95 * Z95
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = (Z95 / denom) * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n))
    # at the boundary the exact interval endpoint is the boundary itself
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return (lo, hi)


@dataclass(frozen=True, slots=True)
class BernoulliEstimate:
    successes: int
    trials: int
    p_hat: Fraction
    wilson: Tuple[float, float]


def bernoulli_estimate(successes: int, trials: int) -> BernoulliEstimate:
    return BernoulliEstimate(successes, trials, Fraction(successes, trials),
                             wilson_interval(successes, trials))


@dataclass(frozen=True, slots=True)
class DriftEstimate:
    n: int
    trials: int
    mean_normalized_distance: Fraction
    std_error: float
    distances: Tuple[int, ...] = field(repr=False)


def drift_estimate(model: GroupModel, dist: Distribution, n: int, trials: int,
                   seed: int) -> DriftEstimate:
    """Monte Carlo estimate of the walk speed d(x0, w(n) x0) / n.

    Trial t draws from the stream keyed by derive_seed(seed, "drift", n, t),
    so the estimate is reproducible and mergeable across workers.
    """
    if trials < 30:
        raise ValueError("need trials >= 30")
    distances = tuple(
        walk_distance(model, dist, n, derive_seed(seed, "drift", n, t))
        for t in range(trials))
    mean = Fraction(sum(distances), n * trials)
    mu = float(mean)
    var = math.fsum((d / n - mu) ** 2 for d in distances) / (trials - 1)
    return DriftEstimate(n, trials, mean, math.sqrt(var / trials), distances)


def drift_oracle_uniform_free(k: int) -> Fraction:
    """Exact speed of the uniform walk on the 2k one-letter generators of
    the free group of rank k.

    The distance from the basepoint is a birth--death chain: from m >= 1 it
    moves up with probability (2k-1)/2k and down with 1/2k, so the speed is
    the mean increment (2k-2)/2k; the chain is transient, visits 0 finitely
    often, and the boundary correction vanishes in the limit (the DP in
    ``birth_death_distance_distribution`` converges to this value).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    return Fraction(2 * k - 2, 2 * k)


def drift_oracle_for(model: GroupModel, dist: Distribution) -> Fraction:
    """The exact drift when available: uniform one-letter support on a free
    model.  Raises wrong-distribution otherwise."""
    if model.kind != "free":
        raise WrongDistributionError("oracle defined only for free models")
    gens = set(model.generators())
    if set(dist.support) != gens or len(dist.support) != len(gens):
        raise WrongDistributionError(
            "oracle needs the uniform distribution on the one-letter "
            "generators")
    expected = 1.0 / len(dist.support)
    if any(abs(p - expected) > PROB_SUM_TOL for p in dist.probabilities):
        raise WrongDistributionError("oracle needs uniform probabilities")
    return drift_oracle_uniform_free(model.rank)


def birth_death_distance_distribution(k: int, n: int) -> np.ndarray:
    """Distribution of d(x0, w(n) x0) for the uniform walk on free-group(k):
    vector P[m] = Prob(d = m), m = 0..n, by exact-chain float DP."""
    if k < 2 or n < 0:
        raise ValueError("need k >= 2, n >= 0")
    up = (2 * k - 1) / (2 * k)
    down = 1 / (2 * k)
    p = np.zeros(n + 1)
    p[0] = 1.0
    for _ in range(n):
        q = np.zeros_like(p)
        q[1] += p[0]              # from 0 every step increases distance
        q[2:] += p[1:-1] * up     # m >= 1 -> m+1
        q[:-1] += p[1:] * down    # m >= 1 -> m-1
        p = q
    return p


def event_probability(model: GroupModel, dists: Sequence[Distribution],
                      n: int, trials: int, seed: int,
                      predicate: Callable[[Tuple[WalkSample, ...]], bool],
                      ) -> BernoulliEstimate:
    """Estimate Prob(predicate(w_1(n), ..., w_k(n))) over independent walks.

    Walk i of trial t uses the stream derive_seed(seed, "event", n, t, i).
    """
    successes = 0
    for t in range(trials):
        samples = tuple(
            sample_walk(model, d, n, derive_seed(seed, "event", n, t, i))
            for i, d in enumerate(dists))
        if predicate(samples):
            successes += 1
    return bernoulli_estimate(successes, trials)
