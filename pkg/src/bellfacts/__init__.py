"""Quantum coincidence facts versus local classical strategies.

Compute Born-rule coincidence statistics for two-photon polarization states,
map mixtures of deterministic answer strategies into the same facts space,
and check, analytically, by exhaustive grid and by Monte Carlo, which facts a
local classical protocol can reach.
"""

__version__ = "0.1.0"

from .errors import (
    BellFactsError,
    ConsistencyError,
    InvalidConfigError,
    InvalidInputError,
    InvalidProtocolError,
    InvalidQuestionError,
    InvalidResolutionError,
)
from .quantum import (
    DEFAULT_PROTOCOL,
    OUTCOME_PAIRS,
    AnalyzerSetting,
    FactsTriple,
    MeasurementProtocol,
    NamedState,
    Outcome,
    OutcomePair,
    TwoPhotonState,
    analyzer_state,
    closed_form_coincidence,
    coincidence_probability,
    facts,
    offset_facts,
    outcome_probability,
    projector,
)
from .strategies import (
    STRATEGIES,
    Answer,
    DeterministicStrategy,
    FeasibilityResult,
    MixturePoint,
    StrategyClass,
    answer,
    boundary_lines,
    classical_inequality,
    disagreements,
    facts_of_mixture,
    solve_mixture_for_facts,
)
from .sweep import GridSpec, RegionReport, SweepRecord, region_report, simplex_grid, sweep_facts
from .montecarlo import (
    RunLog,
    RunRecord,
    SimConfig,
    SimReport,
    reproduce_paper_procedure,
    simulate_quantum,
    simulate_students,
)
