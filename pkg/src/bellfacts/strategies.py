"""Local deterministic answer strategies for the non-communicating students game.

Both students leave the room with the same answer sheet
``[R(0), R(30), R(60)]``.  The eight possible sheets fall into four classes
(alpha..delta); within a class the two sheets are complements of each other
and produce identical agree/disagree patterns.

A mixture ``(alpha, beta, gamma, delta)`` over the classes maps to facts

    F1 = 1
    F2 = 1 - (beta + 2 gamma + delta) / 2
    F3 = 1 - beta - delta

and the reachable (F2, F3) set is the triangle ``|2 F2 - 1| <= F3``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidInputError, InvalidQuestionError
from .quantum import FactsTriple

QUESTIONS: tuple[float, float, float] = (0.0, 30.0, 60.0)
SIMPLEX_TOL = 1e-12
FEASIBLE_SUM_TOL = 1e-10


class Answer(str, enum.Enum):
    ABSORB = "A"
    PASS = "P"

    def flipped(self) -> "Answer":
        return Answer.PASS if self is Answer.ABSORB else Answer.ABSORB


@dataclass(frozen=True)
class DeterministicStrategy:
    """Answer sheet for the three questions 0, 30 and 60 degrees."""

    answers: tuple[Answer, Answer, Answer]

    def __post_init__(self) -> None:
        answers = tuple(Answer(a) for a in self.answers)
        if len(answers) != 3:
            raise InvalidInputError("a strategy answers exactly three questions")
        object.__setattr__(self, "answers", answers)

    @classmethod
    def from_string(cls, text: str) -> "DeterministicStrategy":
        """``"APP"`` or ``"[A,P,P]"`` -> strategy."""
        letters = [c for c in text.upper() if c in "AP"]
        return cls(tuple(Answer(c) for c in letters))

    def complement(self) -> "DeterministicStrategy":
        return DeterministicStrategy(tuple(a.flipped() for a in self.answers))

    def __str__(self) -> str:
        return "[" + ",".join(a.value for a in self.answers) + "]"


# numbered (1)..(8) as in the usual listing; index = number - 1
STRATEGIES: tuple[DeterministicStrategy, ...] = tuple(
    DeterministicStrategy.from_string(s)
    for s in ("PPP", "AAA", "APP", "PAA", "PAP", "APA", "PPA", "AAP")
)


class StrategyClass(str, enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    DELTA = "delta"

    @property
    def index(self) -> int:
        return list(StrategyClass).index(self)

    @property
    def members(self) -> tuple[DeterministicStrategy, DeterministicStrategy]:
        k = self.index
        return STRATEGIES[2 * k], STRATEGIES[2 * k + 1]


def strategy_class(strategy: DeterministicStrategy) -> StrategyClass:
    for cls in StrategyClass:
        if strategy in cls.members:
            return cls
    raise InvalidInputError(f"unknown strategy {strategy}")  # unreachable for valid sheets


def question_index(question: float) -> int:
    try:
        q = float(question)
    except (TypeError, ValueError):
        raise InvalidQuestionError(f"question must be an angle, got {question!r}") from None
    for n, angle in enumerate(QUESTIONS):
        if q == angle:
            return n
    raise InvalidQuestionError(f"question {question!r} is not one of {QUESTIONS}")


def answer(strategy: DeterministicStrategy, question: float) -> Answer:
    return strategy.answers[question_index(question)]


@dataclass(frozen=True)
class MixturePoint:
    """Probabilities of playing each strategy class."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self) -> None:
        vals = []
        for name in ("alpha", "beta", "gamma", "delta"):
            raw = getattr(self, name)
            try:
                x = float(raw)
            except (TypeError, ValueError):
                raise InvalidInputError(f"{name} must be a number, got {raw!r}") from None
            if not math.isfinite(x) or x < 0:
                raise InvalidInputError(f"{name}={raw!r} must be a nonnegative probability")
            object.__setattr__(self, name, x)
            vals.append(x)
        total = math.fsum(vals)
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise InvalidInputError(f"mixture sums to {total!r}, expected 1")

    @classmethod
    def _trusted(cls, alpha: float, beta: float, gamma: float, delta: float) -> "MixturePoint":
        # skips validation; only for points that lie on the simplex by construction
        obj = object.__new__(cls)
        obj.__dict__.update(alpha=alpha, beta=beta, gamma=gamma, delta=delta)
        return obj

    def __iter__(self):
        return iter((self.alpha, self.beta, self.gamma, self.delta))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    @classmethod
    def parse(cls, text: str) -> "MixturePoint":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 4:
            raise InvalidInputError(f"mixture needs four comma-separated values, got {text!r}")
        return cls(*parts)


class FeasibilityResult(NamedTuple):
    mixture: tuple[float, float, float, float]
    feasible: bool

    @property
    def gamma(self) -> float:
        return self.mixture[2]


def disagreements(mixture: MixturePoint) -> tuple[float, float, float]:
    """Disagreement rates for question pairs (0,30), (30,60), (0,60)."""
    _, b, c, d = mixture
    return (b + c, c + d, b + d)


def facts_of_mixture(mixture: MixturePoint) -> FactsTriple:
    _, b, c, d = mixture
    return FactsTriple(1.0, 1.0 - (b + 2.0 * c + d) / 2.0, 1.0 - b - d)


def _check_unit(name: str, value: float) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x) or x < 0.0 or x > 1.0:
        raise InvalidInputError(f"{name}={value!r} must lie in [0, 1]")
    return x


def solve_mixture_for_facts(f2: float, f3: float) -> FeasibilityResult:
    """Invert the disagreement system assuming both 30-degree pairs disagree equally.

    >>> solve_mixture_for_facts(0.75, 0.25)
    FeasibilityResult(mixture=(0.375, 0.375, -0.125, 0.375), feasible=False)
    """
    f2, f3 = _check_unit("f2", f2), _check_unit("f3", f3)
    d30 = 1.0 - f2
    d60 = 1.0 - f3
    gamma = (2.0 * d30 - d60) / 2.0
    beta = delta = d60 / 2.0
    alpha = 1.0 - beta - gamma - delta
    mix = (alpha, beta, gamma, delta)
    feasible = all(x >= -SIMPLEX_TOL for x in mix) and abs(math.fsum(mix) - 1.0) <= FEASIBLE_SUM_TOL
    if feasible:
        mix = tuple(max(x, 0.0) + 0.0 for x in mix)
    return FeasibilityResult(mix, feasible)


def classical_inequality(f2: float, f3: float) -> tuple[bool, float]:
    """Check ``|2 F2 - 1| <= F3``; returns ``(satisfied, F3 - |2 F2 - 1|)``."""
    f2, f3 = _check_unit("f2", f2), _check_unit("f3", f3)
    margin = f3 - abs(2.0 * f2 - 1.0)
    return margin >= -SIMPLEX_TOL, margin


class BoundaryLine(NamedTuple):
    """``F2 = slope * F3 + intercept``."""

    slope: float
    intercept: float

    def __call__(self, f3: float) -> float:
        return self.slope * f3 + self.intercept


class BoundaryLines(NamedTuple):
    upper: BoundaryLine
    lower: BoundaryLine


def boundary_lines() -> BoundaryLines:
    """Upper ``F2 = (F3 + 1)/2`` and lower ``F2 = (1 - F3)/2`` edges of the classical region."""
    return BoundaryLines(BoundaryLine(0.5, 0.5), BoundaryLine(-0.5, 0.5))


def agreement_table() -> dict[tuple[StrategyClass, float, float], bool]:
    """Whether the two students agree, per class and ordered question pair.

    Built by asking the first member of each class directly, so it doubles as
    an enumeration reference for :func:`facts_of_mixture`.
    """
    table = {}
    for cls in StrategyClass:
        strat = cls.members[0]
        for qa in QUESTIONS:
            for qb in QUESTIONS:
                table[cls, qa, qb] = answer(strat, qa) is answer(strat, qb)
    return table

