"""Run-by-run Monte Carlo of the students game and of quantum measurements.

Randomness is split into fixed-size blocks of runs.  Block ``j`` of a
simulation draws from ``SeedSequence(seed, spawn_key=(*stream, j))``, so the
draws for any run depend only on the seed, the stream key and the run index.
Worker count therefore never changes a result.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Sequence, TextIO, Union

import numpy as np

from .errors import InvalidConfigError, InvalidInputError
from .quantum import (
    DEFAULT_PROTOCOL,
    FactsTriple,
    MeasurementProtocol,
    NamedState,
    TwoPhotonState,
    outcome_distribution,
)
from .strategies import STRATEGIES, Answer, MixturePoint
from .sweep import GridSpec, fmt12, simplex_grid

BLOCK_SIZE = 1 << 16
MAX_SEED = (1 << 64) - 1
# outcome probabilities below this are round-off from exact zeros
_ZERO_SNAP = 1e-15

# True where strategy k answers P to question q
_PASS_TABLE = np.array([[a is Answer.PASS for a in s.answers] for s in STRATEGIES])


@dataclass(frozen=True)
class SimConfig:
    runs: int
    seed: int = 0
    protocol: MeasurementProtocol = DEFAULT_PROTOCOL
    workers: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.runs, bool) or not isinstance(self.runs, (int, np.integer)) or self.runs < 1:
            raise InvalidConfigError(f"runs must be a positive integer, got {self.runs!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.workers < 1:
            raise InvalidConfigError("workers must be >= 1")
        object.__setattr__(self, "runs", int(self.runs))
        object.__setattr__(self, "seed", int(self.seed))


class RunRecord(NamedTuple):
    theta_a: float
    theta_b: float
    r_a: Answer
    r_b: Answer


@dataclass(frozen=True)
class SimReport:
    """Per-offset-class tallies of agreements.

    Reports over the same protocol add with ``+`` (tallies sum; the seed of
    the left operand is kept).
    """

    offsets: tuple[float, ...]
    counts: tuple[int, ...]
    agreements: tuple[int, ...]
    runs: int
    seed: int

    def __post_init__(self) -> None:
        if sum(self.counts) != self.runs:
            raise InvalidConfigError("class counts do not add up to the number of runs")
        if any(not 0 <= a <= n for a, n in zip(self.agreements, self.counts)):
            raise InvalidConfigError("agreements exceed class counts")

    @property
    def defined(self) -> tuple[bool, ...]:
        return tuple(n > 0 for n in self.counts)

    @property
    def facts(self) -> tuple[float, ...]:
        """Empirical agreement fraction per class; NaN for classes never sampled."""
        return tuple(a / n if n else math.nan for a, n in zip(self.agreements, self.counts))

    @property
    def stderr(self) -> tuple[float, ...]:
        return tuple(
            math.sqrt(f * (1.0 - f) / n) if n else math.nan
            for f, n in zip(self.facts, self.counts)
        )

    def facts_triple(self) -> FactsTriple:
        if len(self.offsets) != 3 or not all(self.defined):
            raise InvalidInputError("report does not define exactly three facts")
        return FactsTriple(*self.facts)

    def __add__(self, other: "SimReport") -> "SimReport":
        if self.offsets != other.offsets:
            raise InvalidInputError("cannot merge reports over different offset classes")
        return SimReport(
            self.offsets,
            tuple(a + b for a, b in zip(self.counts, other.counts)),
            tuple(a + b for a, b in zip(self.agreements, other.agreements)),
            self.runs + other.runs,
            self.seed,
        )

    def as_dict(self) -> dict:
        classes = []
        for off, n, a, f, se in zip(self.offsets, self.counts, self.agreements, self.facts, self.stderr):
            classes.append({
                "offset": off,
                "count": n,
                "agreements": a,
                "fact": None if math.isnan(f) else float(fmt12(f)),
                "stderr": None if math.isnan(se) else float(fmt12(se)),
            })
        return {"runs": self.runs, "seed": self.seed, "classes": classes}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1) + "\n"

    def to_csv(self) -> str:
        lines = ["offset,count,agreements,fact,stderr"]
        for off, n, a, f, se in zip(self.offsets, self.counts, self.agreements, self.facts, self.stderr):
            fact = "" if math.isnan(f) else fmt12(f)
            err = "" if math.isnan(se) else fmt12(se)
            lines.append(f"{fmt12(off)},{n},{a},{fact},{err}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunLog:
    """Every run of a simulation, in run order."""

    angles: tuple[float, ...]
    question_a: np.ndarray = field(repr=False)
    question_b: np.ndarray = field(repr=False)
    pass_a: np.ndarray = field(repr=False)
    pass_b: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.question_a)

    def records(self) -> Iterator[RunRecord]:
        for qa, qb, pa, pb in zip(self.question_a, self.question_b, self.pass_a, self.pass_b):
            yield RunRecord(
                self.angles[qa], self.angles[qb],
                Answer.PASS if pa else Answer.ABSORB,
                Answer.PASS if pb else Answer.ABSORB,
            )

    def write_csv(self, fh: TextIO) -> None:
        fh.write("run,theta_a,theta_b,r_a,r_b\n")
        labels = [format(a, "g") for a in self.angles]
        for n, (qa, qb, pa, pb) in enumerate(zip(self.question_a, self.question_b, self.pass_a, self.pass_b)):
            fh.write(f"{n},{labels[qa]},{labels[qb]},{'P' if pa else 'A'},{'P' if pb else 'A'}\n")

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _block_rng(seed: int, stream: tuple[int, ...], block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(*stream, block)))


def _run_blocks(config: SimConfig, stream: tuple[int, ...], simulate_block, keep_log: bool):
    protocol = config.protocol
    offset_index = protocol.offset_index()
    n_classes = len(protocol.offsets)
    n_blocks = -(-config.runs // BLOCK_SIZE)

    def one(block: int):
        size = min(BLOCK_SIZE, config.runs - block * BLOCK_SIZE)
        rng = _block_rng(config.seed, stream, block)
        qa, qb, pa, pb = simulate_block(rng, size)
        cls = offset_index[qa, qb]
        agree = pa == pb
        counts = np.bincount(cls, minlength=n_classes)
        agreements = np.bincount(cls, weights=agree, minlength=n_classes).astype(np.int64)
        log = (qa, qb, pa, pb) if keep_log else None
        return counts, agreements, log

    if config.workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(one, range(n_blocks)))
    else:
        parts = [one(b) for b in range(n_blocks)]

    counts = np.sum([p[0] for p in parts], axis=0)
    agreements = np.sum([p[1] for p in parts], axis=0)
    report = SimReport(
        offsets=protocol.offsets,
        counts=tuple(int(x) for x in counts),
        agreements=tuple(int(x) for x in agreements),
        runs=config.runs,
        seed=config.seed,
    )
    if not keep_log:
        return report
    logs = [p[2] for p in parts]
    log = RunLog(protocol.angles, *(np.concatenate([lg[k] for lg in logs]) for k in range(4)))
    return report, log


def simulate_students(mixture: MixturePoint, config: SimConfig, log: bool = False,
                      stream: tuple[int, ...] = ()):
    """Play the students game ``config.runs`` times with strategy classes drawn from ``mixture``.

    Each run draws a class, then one of its two answer sheets, then an
    independent uniform question for each student.  Returns a
    :class:`SimReport`, or ``(SimReport, RunLog)`` when ``log`` is true.
    ``stream`` selects an independent substream for the same seed.
    """
    if not isinstance(mixture, MixturePoint):
        mixture = MixturePoint(*mixture)
    k = len(config.protocol.angles)
    if k != 3:
        raise InvalidConfigError(f"answer sheets cover three questions; protocol has {k} angles")
    cum = np.cumsum(mixture.as_tuple()[:3])

    def block(rng: np.random.Generator, size: int):
        cls = np.searchsorted(cum, rng.random(size), side="right")
        strategy = 2 * cls + rng.integers(0, 2, size)
        qa = rng.integers(0, k, size)
        qb = rng.integers(0, k, size)
        return qa, qb, _PASS_TABLE[strategy, qa], _PASS_TABLE[strategy, qb]

    return _run_blocks(config, (0, *stream), block, log)


def _outcome_table(state: TwoPhotonState | NamedState | str, angles: Sequence[float]) -> np.ndarray:
    a = np.asarray(angles, dtype=float)
    probs = outcome_distribution(state, a[:, None], a[None, :])
    probs = np.where(probs < _ZERO_SNAP, 0.0, probs)
    probs /= probs.sum(axis=-1, keepdims=True)
    cum = np.cumsum(probs, axis=-1)
    cum[..., -1] = 1.0
    return cum


def simulate_quantum(state: Union[NamedState, TwoPhotonState, str], config: SimConfig,
                     log: bool = False, stream: tuple[int, ...] = ()):
    """Sample analyzer settings and pass/absorb outcomes from the Born rule."""
    if isinstance(state, str):
        state = NamedState.parse(state)
    k = len(config.protocol.angles)
    cum = _outcome_table(state, config.protocol.angles)

    def block(rng: np.random.Generator, size: int):
        qa = rng.integers(0, k, size)
        qb = rng.integers(0, k, size)
        u = rng.random(size)
        # outcome order PP, PA, AP, AA
        idx = (cum[qa, qb] <= u[:, None]).sum(axis=1)
        return qa, qb, idx <= 1, (idx == 0) | (idx == 2)

    return _run_blocks(config, (1, *stream), block, log)


class PointVerdict(NamedTuple):
    mixture: MixturePoint
    f2_hat: float
    f3_hat: float
    matches: bool


@dataclass(frozen=True)
class ProcedureVerdict:
    target_f2: float
    target_f3: float
    n_sigma: float
    points: tuple[PointVerdict, ...]

    @property
    def matching(self) -> tuple[MixturePoint, ...]:
        return tuple(p.mixture for p in self.points if p.matches)


def _within(est: float, target: float, n: int, n_sigma: float) -> bool:
    # binomial spread under the hypothesis that the target is the true rate
    sigma = math.sqrt(target * (1.0 - target) / n)
    return abs(est - target) <= n_sigma * sigma + 1e-15


def reproduce_paper_procedure(spec: GridSpec, config: SimConfig,
                              targets: Union[FactsTriple, Sequence[float]],
                              n_sigma: float = 3.0) -> ProcedureVerdict:
    """Simulate every grid mixture and keep those whose F2 and F3 both hit the targets.

    ``targets`` is either a :class:`FactsTriple` or a bare ``(F2, F3)`` pair.
    Grid point ``n`` uses substream ``n`` of ``config.seed``.
    """
    if isinstance(targets, FactsTriple):
        t2, t3 = targets.f2, targets.f3
    else:
        vals = tuple(targets)
        if len(vals) == 3:
            vals = vals[1:]
        if len(vals) != 2:
            raise InvalidInputError(f"targets must be (F2, F3) or (F1, F2, F3), got {targets!r}")
        t = FactsTriple(1.0, *vals)
        t2, t3 = t.f2, t.f3
    if config.protocol.offsets != DEFAULT_PROTOCOL.offsets:
        raise InvalidConfigError("the procedure compares against the 0/30/60 offset classes")
    verdicts = []
    for n, mix in enumerate(simplex_grid(spec)):
        rep = simulate_students(mix, config, stream=(n,))
        _, n2, n3 = rep.counts
        _, f2, f3 = rep.facts
        ok = n2 > 0 and n3 > 0 and _within(f2, t2, n2, n_sigma) and _within(f3, t3, n3, n_sigma)
        verdicts.append(PointVerdict(mix, f2, f3, ok))
    return ProcedureVerdict(t2, t3, n_sigma, tuple(verdicts))
