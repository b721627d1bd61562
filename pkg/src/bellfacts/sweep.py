"""Exhaustive sweep of the strategy-mixture simplex and the classical facts region."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, TextIO

from .errors import ConsistencyError, InvalidInputError, InvalidResolutionError
from .quantum import FactsTriple
from .strategies import SIMPLEX_TOL, MixturePoint, classical_inequality, facts_of_mixture

COMPONENTS = ("alpha", "beta", "gamma", "delta")
CSV_HEADER = ("alpha", "beta", "gamma", "delta", "F1", "F2", "F3", "margin")

# corners of the classical region in the (F3, F2) plane
REGION_VERTICES = ((0.0, 0.5), (1.0, 0.0), (1.0, 1.0))


def tetrahedral_count(p: int) -> int:
    """Number of points on the full grid with step 1/p."""
    return math.comb(p + 3, 3)


@dataclass(frozen=True)
class GridSpec:
    """Grid resolution ``p`` (step ``1/p``) and an optional ``component = 0`` plane."""

    p: int
    restriction: Optional[str] = None

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, int) or self.p < 1:
            raise InvalidResolutionError(f"grid resolution p must be a positive integer, got {self.p!r}")
        if self.restriction is not None:
            name = parse_plane(self.restriction)
            object.__setattr__(self, "restriction", name)

    @property
    def step(self) -> float:
        return 1.0 / self.p


def parse_plane(text: str) -> str:
    """Accept ``"gamma"``, ``"gamma=0"`` and similar; return the component name."""
    key = str(text).strip().lower().replace(" ", "")
    if key.endswith("=0"):
        key = key[:-2]
    if key not in COMPONENTS:
        raise InvalidInputError(f"plane must be one of {', '.join(c + '=0' for c in COMPONENTS)}; got {text!r}")
    return key


def compositions(p: int, restriction: Optional[str] = None) -> Iterator[tuple[int, int, int, int]]:
    """Integer 4-tuples summing to ``p``, ``a`` then ``b`` then ``c`` descending.

    The first point is ``(p, 0, 0, 0)`` and the last ``(0, 0, 0, p)``.
    """
    fixed = COMPONENTS.index(restriction) if restriction is not None else None
    for a in range(p, -1, -1):
        for b in range(p - a, -1, -1):
            for c in range(p - a - b, -1, -1):
                point = (a, b, c, p - a - b - c)
                if fixed is None or point[fixed] == 0:
                    yield point


def simplex_grid(spec: GridSpec) -> Iterator[MixturePoint]:
    p = spec.p
    for a, b, c, d in compositions(p, spec.restriction):
        yield MixturePoint._trusted(a / p, b / p, c / p, d / p)


@dataclass(frozen=True)
class SweepRecord:
    mixture: MixturePoint
    facts: FactsTriple
    margin: float

    def csv_row(self) -> str:
        values = (*self.mixture.as_tuple(), *self.facts.as_tuple(), self.margin)
        return ",".join(fmt12(v) for v in values)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(CSV_HEADER, (*self.mixture.as_tuple(), *self.facts.as_tuple(), self.margin)))


def fmt12(value: float) -> str:
    """12 significant digits; round-off below 1e-15 prints as zero."""
    return format(round(float(value), 15) + 0.0, ".12g")


def sweep_facts(spec: GridSpec) -> list[SweepRecord]:
    records = []
    for mix in simplex_grid(spec):
        f = facts_of_mixture(mix)
        ok, margin = classical_inequality(f.f2, f.f3)
        if not ok:
            raise ConsistencyError(f"classical mixture {mix} violates |2F2-1| <= F3 (margin {margin})")
        records.append(SweepRecord(mix, f, margin))
    return records


def write_sweep_csv(records: Sequence[SweepRecord], fh: TextIO) -> None:
    fh.write(",".join(CSV_HEADER) + "\n")
    for rec in records:
        fh.write(rec.csv_row() + "\n")


def sweep_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    write_sweep_csv(records, buf)
    return buf.getvalue()


def sweep_json(records: Sequence[SweepRecord]) -> str:
    rows = [{k: float(fmt12(v)) for k, v in rec.as_dict().items()} for rec in records]
    return json.dumps(rows, indent=1) + "\n"


def _segment_distance(px: float, py: float, a: tuple[float, float], b: tuple[float, float]) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    t = min(max(t, 0.0), 1.0)
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def distance_to_region(f2: float, f3: float) -> float:
    """Euclidean distance from ``(F2, F3)`` to the classical triangle (0 inside)."""
    if classical_inequality(f2, f3)[0]:
        return 0.0
    v = REGION_VERTICES
    return min(_segment_distance(f3, f2, v[k], v[(k + 1) % 3]) for k in range(3))


@dataclass(frozen=True)
class RegionReport:
    target: FactsTriple
    inside: bool
    inequality_margin: float
    euclidean_distance: float
    sweep_distance: float
    f1_matches: bool

    @property
    def on_boundary(self) -> bool:
        return self.inside and abs(self.inequality_margin) <= SIMPLEX_TOL


def region_report(target: FactsTriple, spec: GridSpec = GridSpec(25)) -> RegionReport:
    """Locate ``target`` relative to the region reachable by classical mixtures.

    ``inside`` and ``euclidean_distance`` are analytic.  ``sweep_distance`` is
    the nearest grid record in the (F2, F3) plane and can never undercut the
    analytic distance; a violation raises :class:`ConsistencyError`.
    ``f1_matches`` flags whether the target's F1 equals the protocol's F1 = 1.
    """
    if not isinstance(target, FactsTriple):
        try:
            target = FactsTriple(*target)
        except TypeError:
            raise InvalidInputError(f"target must be three facts, got {target!r}") from None
    inside, margin = classical_inequality(target.f2, target.f3)
    dist = distance_to_region(target.f2, target.f3)
    sweep_dist = min(
        math.hypot(r.facts.f2 - target.f2, r.facts.f3 - target.f3) for r in sweep_facts(spec)
    )
    if sweep_dist < dist - spec.step:
        raise ConsistencyError(f"grid point at {sweep_dist} is closer than the region ({dist})")
    return RegionReport(
        target=target,
        inside=inside,
        inequality_margin=margin,
        euclidean_distance=dist,
        sweep_distance=sweep_dist,
        f1_matches=abs(target.f1 - 1.0) <= SIMPLEX_TOL,
    )
