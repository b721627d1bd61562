"""Two-photon polarization states and their coincidence statistics.

States live on the four-dimensional space spanned by ``|HH>, |HV>, |VH>, |VV>``
(signal photon first).  Analyzer angles are given in degrees throughout.

Two independent routes produce coincidence probabilities:

* :func:`coincidence_probability` builds analyzer kets and applies the Born
  rule (``|<psi|e_s, e_i>|^2`` for pure states, ``Tr(rho P)`` for mixed ones);
* :func:`closed_form_coincidence` evaluates the textbook trigonometric kernels
  for the six named states.

They are expected to agree to round-off, which the test-suite checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import ConsistencyError, InvalidInputError, InvalidProtocolError

PROB_TOL = 1e-10
STATE_TOL = 1e-12
EIG_TOL = 1e-10

__all__ = [
    "AnalyzerSetting",
    "TwoPhotonState",
    "NamedState",
    "Outcome",
    "OutcomePair",
    "OUTCOME_PAIRS",
    "FactsTriple",
    "MeasurementProtocol",
    "DEFAULT_PROTOCOL",
    "analyzer_state",
    "projector",
    "outcome_probability",
    "outcome_distribution",
    "coincidence_probability",
    "closed_form_coincidence",
    "closed_form_expression",
    "offset_facts",
    "facts",
    "clamp_probability",
]


def clamp_probability(value):
    """Snap round-off excursions outside [0, 1] back onto the interval.

    Works on scalars and arrays.  Anything further than ``PROB_TOL`` outside
    the interval means a bug upstream and raises :class:`ConsistencyError`.
    """
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < -PROB_TOL) or np.any(arr > 1 + PROB_TOL):
        raise ConsistencyError(f"probability out of range: {value!r}")
    clipped = np.clip(arr, 0.0, 1.0)
    if clipped.ndim == 0:
        return float(clipped)
    return clipped


def _radians(deg):
    return np.radians(np.mod(deg, 360.0))


def _check_finite(*values) -> None:
    for v in values:
        if not np.all(np.isfinite(np.asarray(v, dtype=float))):
            raise InvalidInputError(f"angle must be finite, got {v!r}")


@dataclass(frozen=True)
class AnalyzerSetting:
    """Orientation of one polarization analyzer.

    ``theta`` is the polar angle and ``phase`` the ellipticity phase, both in
    degrees.  ``phase=0`` is a linear polarizer.
    """

    theta: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        try:
            theta, phase = float(self.theta), float(self.phase)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"angles must be real numbers: {exc}") from None
        _check_finite(theta, phase)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phase", phase)


def _analyzer_vectors(theta, phase, orthogonal: bool) -> np.ndarray:
    # shape (..., 2): components along H and V.  The orthogonal ket carries
    # e^{+i phase}; with e^{-i phase} it is not orthogonal for elliptical settings.
    th = _radians(np.asarray(theta, dtype=float))
    ph = _radians(np.asarray(phase, dtype=float))
    c, s = np.cos(th), np.sin(th)
    if orthogonal:
        return np.stack([s + 0j, -c * np.exp(1j * ph)], axis=-1)
    return np.stack([c + 0j, s * np.exp(1j * ph)], axis=-1)


def analyzer_state(setting: AnalyzerSetting, orthogonal: bool = False) -> np.ndarray:
    """Single-photon ket transmitted by the analyzer (or its orthogonal ket).

    >>> analyzer_state(AnalyzerSetting(90.0)).round(12)
    array([0.+0.j, 1.+0.j])
    """
    return _analyzer_vectors(setting.theta, setting.phase, orthogonal)


class Outcome(str, enum.Enum):
    PASS = "P"
    ABSORB = "A"


class OutcomePair(NamedTuple):
    signal: Outcome
    idler: Outcome

    @property
    def coincident(self) -> bool:
        return self.signal is self.idler


# fixed order: PP, PA, AP, AA
OUTCOME_PAIRS: tuple[OutcomePair, ...] = tuple(
    OutcomePair(s, i) for s, i in product((Outcome.PASS, Outcome.ABSORB), repeat=2)
)


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """Pure or mixed two-photon polarization state in the (HH, HV, VH, VV) basis.

    Build one with :meth:`pure` or :meth:`mixed`; both validate normalization
    and (for density operators) hermiticity and positivity.
    """

    vector: np.ndarray | None = None
    density: np.ndarray | None = None
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if (self.vector is None) == (self.density is None):
            raise InvalidInputError("give exactly one of a state vector or a density matrix")
        if self.vector is not None:
            vec = np.array(self.vector, dtype=complex).reshape(-1)
            if vec.shape != (4,) or not np.all(np.isfinite(vec)):
                raise InvalidInputError("pure state needs 4 finite complex amplitudes")
            norm = float(np.sum(np.abs(vec) ** 2))
            if abs(norm - 1.0) > STATE_TOL:
                raise InvalidInputError(f"state vector not normalized (norm^2 = {norm!r})")
            vec.setflags(write=False)
            object.__setattr__(self, "vector", vec)
        else:
            rho = np.array(self.density, dtype=complex)
            if rho.shape != (4, 4) or not np.all(np.isfinite(rho)):
                raise InvalidInputError("density operator must be a finite 4x4 matrix")
            if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
                raise InvalidInputError("density operator is not Hermitian")
            tr = np.trace(rho)
            if abs(tr - 1.0) > STATE_TOL:
                raise InvalidInputError(f"density operator trace is {tr!r}, expected 1")
            if np.min(np.linalg.eigvalsh(rho)) < -EIG_TOL:
                raise InvalidInputError("density operator has a negative eigenvalue")
            rho.setflags(write=False)
            object.__setattr__(self, "density", rho)

    @classmethod
    def pure(cls, amplitudes: Sequence[complex], label: str = "") -> "TwoPhotonState":
        return cls(vector=np.asarray(amplitudes, dtype=complex), label=label)

    @classmethod
    def mixed(cls, rho, label: str = "") -> "TwoPhotonState":
        return cls(density=np.asarray(rho, dtype=complex), label=label)

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density_matrix(self) -> np.ndarray:
        if self.density is not None:
            return self.density
        return np.outer(self.vector, self.vector.conj())


_SQ = 1.0 / math.sqrt(2.0)


class NamedState(str, enum.Enum):
    """The four Bell states and the two diagonal mixtures."""

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    RHO_MAX = "rhomax"
    RHO = "rho"

    @classmethod
    def parse(cls, tag: Union[str, "NamedState"]) -> "NamedState":
        if isinstance(tag, cls):
            return tag
        key = str(tag).strip().lower().replace("_", "")
        aliases = {
            "phiplus": "phi+", "phiminus": "phi-", "psiplus": "psi+",
            "psiminus": "psi-", "rhomax": "rhomax", "rho": "rho",
        }
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise InvalidInputError(f"unknown state tag {tag!r}; expected one of {names}") from None

    @property
    def pretty(self) -> str:
        return {
            "phi+": "|phi+>", "phi-": "|phi->", "psi+": "|psi+>",
            "psi-": "|psi->", "rhomax": "rho_Max", "rho": "rho",
        }[self.value]

    def state(self) -> TwoPhotonState:
        return _NAMED_STATES[self]


_NAMED_STATES = {
    NamedState.PHI_PLUS: TwoPhotonState.pure([_SQ, 0, 0, _SQ], "phi+"),
    NamedState.PHI_MINUS: TwoPhotonState.pure([_SQ, 0, 0, -_SQ], "phi-"),
    NamedState.PSI_PLUS: TwoPhotonState.pure([0, _SQ, _SQ, 0], "psi+"),
    NamedState.PSI_MINUS: TwoPhotonState.pure([0, _SQ, -_SQ, 0], "psi-"),
    NamedState.RHO_MAX: TwoPhotonState.mixed(np.eye(4) / 4, "rhomax"),
    NamedState.RHO: TwoPhotonState.mixed(np.diag([0.5, 0, 0, 0.5]), "rho"),
}

StateLike = Union[TwoPhotonState, NamedState, str]


def _as_state(state: StateLike) -> TwoPhotonState:
    if isinstance(state, TwoPhotonState):
        return state
    if isinstance(state, (NamedState, str)):
        return NamedState.parse(state).state()
    raise InvalidInputError(f"not a two-photon state: {state!r}")


def _product_kets(theta_s, phase_s, theta_i, phase_i, outcome: OutcomePair) -> np.ndarray:
    es = _analyzer_vectors(theta_s, phase_s, outcome.signal is Outcome.ABSORB)
    ei = _analyzer_vectors(theta_i, phase_i, outcome.idler is Outcome.ABSORB)
    es, ei = np.broadcast_arrays(es, ei)
    return np.einsum("...i,...j->...ij", es, ei).reshape(es.shape[:-1] + (4,))


def projector(signal: AnalyzerSetting, idler: AnalyzerSetting, outcome: OutcomePair) -> np.ndarray:
    """Rank-one projector onto the product ket selected by ``outcome``."""
    ket = _product_kets(signal.theta, signal.phase, idler.theta, idler.phase, outcome)
    return np.outer(ket, ket.conj())


def _born(state: TwoPhotonState, kets: np.ndarray) -> np.ndarray:
    if state.is_pure:
        amp = kets @ state.vector.conj()
        return np.abs(amp) ** 2
    return np.einsum("...i,ij,...j->...", kets.conj(), state.density, kets).real


def _outcome_probability_raw(state, theta_s, phase_s, theta_i, phase_i, outcome):
    _check_finite(theta_s, phase_s, theta_i, phase_i)
    kets = _product_kets(theta_s, phase_s, theta_i, phase_i, outcome)
    return clamp_probability(_born(state, kets))


def outcome_probability(
    state: StateLike,
    signal: AnalyzerSetting,
    idler: AnalyzerSetting,
    outcome: OutcomePair,
) -> float:
    """Probability of the joint pass/absorb ``outcome`` at the given settings."""
    st = _as_state(state)
    return _outcome_probability_raw(st, signal.theta, signal.phase, idler.theta, idler.phase, outcome)


def outcome_distribution(state: StateLike, theta_s, theta_i, phase_s=0.0, phase_i=0.0) -> np.ndarray:
    """All four outcome probabilities, last axis ordered as ``OUTCOME_PAIRS``.

    Accepts broadcastable arrays of angles.
    """
    st = _as_state(state)
    return np.stack(
        [_outcome_probability_raw(st, theta_s, phase_s, theta_i, phase_i, o) for o in OUTCOME_PAIRS],
        axis=-1,
    )


def coincidence_probability(state: StateLike, theta_s, theta_i):
    """P(pass, pass) + P(absorb, absorb) for linear analyzers at ``theta_s``, ``theta_i``.

    Angle arguments may be numpy arrays; they broadcast against each other.
    """
    st = _as_state(state)
    pp = _outcome_probability_raw(st, theta_s, 0.0, theta_i, 0.0, OUTCOME_PAIRS[0])
    aa = _outcome_probability_raw(st, theta_s, 0.0, theta_i, 0.0, OUTCOME_PAIRS[3])
    return clamp_probability(np.add(pp, aa))


_CLOSED_FORM_TEXT = {
    NamedState.PHI_PLUS: "cos^2(theta_s - theta_i)",
    NamedState.PHI_MINUS: "cos^2(theta_s + theta_i)",
    NamedState.PSI_PLUS: "sin^2(theta_s + theta_i)",
    NamedState.PSI_MINUS: "sin^2(theta_s - theta_i)",
    NamedState.RHO_MAX: "1/2",
    NamedState.RHO: "[cos(2 theta_s) cos(2 theta_i) + 1]/2",
}


def closed_form_expression(state: NamedState | str) -> str:
    return _CLOSED_FORM_TEXT[NamedState.parse(state)]


def closed_form_coincidence(state: NamedState | str, theta_s, theta_i):
    """Coincidence probability from the trigonometric closed forms."""
    tag = NamedState.parse(state)
    _check_finite(theta_s, theta_i)
    s, i = _radians(np.asarray(theta_s, dtype=float)), _radians(np.asarray(theta_i, dtype=float))
    if tag is NamedState.PHI_PLUS:
        val = np.cos(s - i) ** 2
    elif tag is NamedState.PHI_MINUS:
        val = np.cos(s + i) ** 2
    elif tag is NamedState.PSI_PLUS:
        val = np.sin(s + i) ** 2
    elif tag is NamedState.PSI_MINUS:
        val = np.sin(s - i) ** 2
    elif tag is NamedState.RHO_MAX:
        val = np.full(np.broadcast(s, i).shape, 0.5)
    else:
        val = 0.5 * (np.cos(2 * s) * np.cos(2 * i) + 1.0)
    return clamp_probability(val)


@dataclass(frozen=True)
class FactsTriple:
    """Coincidence facts at the three offset classes (same angle, small, large)."""

    f1: float
    f2: float
    f3: float

    def __post_init__(self) -> None:
        for name in ("f1", "f2", "f3"):
            raw = getattr(self, name)
            try:
                val = float(raw)
            except (TypeError, ValueError):
                raise InvalidInputError(f"{name} must be a number, got {raw!r}") from None
            if not math.isfinite(val) or val < -PROB_TOL or val > 1 + PROB_TOL:
                raise InvalidInputError(f"{name}={raw!r} is not a probability")
            object.__setattr__(self, name, min(max(val, 0.0), 1.0))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.f1, self.f2, self.f3)


def _offset_key(a: float, b: float) -> float:
    # rounding merges offsets that differ only by float noise
    return round(abs(a - b), 9) + 0.0


@dataclass(frozen=True)
class MeasurementProtocol:
    """Analyzer angles each side picks from, and the derived offset classes.

    >>> [(off, len(pairs)) for off, pairs in MeasurementProtocol().offset_classes]
    [(0.0, 3), (30.0, 4), (60.0, 2)]
    """

    angles: tuple[float, ...] = (0.0, 30.0, 60.0)

    def __post_init__(self) -> None:
        try:
            angles = tuple(float(a) for a in self.angles)
        except (TypeError, ValueError):
            raise InvalidProtocolError(f"angles must be numbers: {self.angles!r}") from None
        if not angles:
            raise InvalidProtocolError("protocol needs at least one angle")
        if not all(math.isfinite(a) for a in angles):
            raise InvalidProtocolError("protocol angles must be finite")
        if len(set(angles)) != len(angles):
            raise InvalidProtocolError(f"protocol angles must be distinct: {angles}")
        object.__setattr__(self, "angles", angles)

    @property
    def offset_classes(self) -> tuple[tuple[float, tuple[tuple[float, float], ...]], ...]:
        """``(offset, ordered angle pairs)`` sorted by increasing offset."""
        classes: dict[float, list[tuple[float, float]]] = {}
        for a in self.angles:
            for b in self.angles:
                classes.setdefault(_offset_key(a, b), []).append((a, b))
        return tuple((off, tuple(pairs)) for off, pairs in sorted(classes.items()))

    @property
    def offsets(self) -> tuple[float, ...]:
        return tuple(off for off, _ in self.offset_classes)

    def offset_index(self) -> np.ndarray:
        """``k x k`` integer matrix: offset class of each (angle_a, angle_b) index pair."""
        lookup = {off: n for n, off in enumerate(self.offsets)}
        return np.array([[lookup[_offset_key(a, b)] for b in self.angles] for a in self.angles])


DEFAULT_PROTOCOL = MeasurementProtocol()


def offset_facts(state: StateLike, protocol: MeasurementProtocol = DEFAULT_PROTOCOL,
                 kernel: str = "born") -> dict[float, float]:
    """Average coincidence probability per offset class, keyed by offset in degrees.

    ``kernel="born"`` uses projector math; ``kernel="closed_form"`` uses the
    trigonometric kernels and needs a named state.
    """
    if kernel == "born":
        st = _as_state(state)

        def kern(a, b):
            return coincidence_probability(st, a, b)
    elif kernel == "closed_form":
        if isinstance(state, TwoPhotonState):
            raise InvalidInputError("closed-form kernel needs a named state")
        tag = NamedState.parse(state)

        def kern(a, b):
            return closed_form_coincidence(tag, a, b)
    else:
        raise InvalidInputError(f"unknown kernel {kernel!r}")
    out = {}
    for off, pairs in protocol.offset_classes:
        a = np.array([p[0] for p in pairs])
        b = np.array([p[1] for p in pairs])
        out[off] = clamp_probability(float(np.mean(kern(a, b))))
    return out


def facts(state: StateLike, protocol: MeasurementProtocol = DEFAULT_PROTOCOL,
          kernel: str = "born") -> FactsTriple:
    """Facts (F1, F2, F3) of ``state`` under a three-offset protocol."""
    classes = offset_facts(state, protocol, kernel)
    if len(classes) != 3:
        raise InvalidProtocolError(
            f"protocol {protocol.angles} yields offset classes {sorted(classes)}; "
            "facts need exactly three (one of the F1/F2/F3 classes would be empty or ambiguous)"
        )
    return FactsTriple(*classes.values())
