"""Exception types shared across the package."""


class HypwalkError(Exception):
    """Base class for all package-specific errors."""


class InvalidLetterError(HypwalkError):
    """A letter's factor index or power is out of range for the model."""


class BudgetExceededError(HypwalkError):
    """An enumeration would exceed its configured element budget."""


class NotLoxodromicError(HypwalkError):
    """An axis or product construction was asked for a non-loxodromic element."""


class WrongModelError(HypwalkError):
    """An operation only defined for one group kind was called on the other."""


class WrongDistributionError(HypwalkError):
    """The exact drift oracle only covers uniform single-letter distributions."""


class InvalidProbabilitiesError(HypwalkError):
    """Distribution weights are not positive or do not normalize."""


class HypothesisViolatedError(HypwalkError):
    """An arithmetic hypothesis of a bound (e.g. C0 >= 14*delta) fails."""


class InvalidEpsilonError(HypwalkError):
    """Constant-chain epsilons must satisfy 0 < eps' < eps < 1."""


class NotABasisError(HypwalkError):
    """Subgroup generators passed where a free basis is required."""


class SchemaError(HypwalkError):
    """Experiment config failed validation.

    Carries a list of (key, reason) pairs so callers can report every
    problem at once.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "; ".join(f"{key}: {reason}" for key, reason in self.problems)
        super().__init__(f"invalid config: {lines}")
