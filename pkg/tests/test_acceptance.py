"""Exit criteria for the package, one ``criterion`` marker per criterion.

A per-criterion PASS/FAIL summary is printed at the end of the pytest run.
"""

import itertools
import math
import time

import numpy as np
import pytest

from bellfacts import (
    FactsTriple,
    GridSpec,
    MixturePoint,
    NamedState,
    SimConfig,
    closed_form_coincidence,
    coincidence_probability,
    facts,
    facts_of_mixture,
    region_report,
    reproduce_paper_procedure,
    simplex_grid,
    simulate_quantum,
    simulate_students,
    solve_mixture_for_facts,
    sweep_facts,
)
from bellfacts.cli import main
from bellfacts.strategies import boundary_lines

TABLE2 = {
    NamedState.PHI_PLUS: (1, 3 / 4, 1 / 4),
    NamedState.PHI_MINUS: (1 / 2, 3 / 8, 1 / 4),
    NamedState.PSI_PLUS: (1 / 2, 5 / 8, 3 / 4),
    NamedState.PSI_MINUS: (0, 1, 3 / 4),
    NamedState.RHO_MAX: (1 / 2, 1 / 2, 1 / 2),
    NamedState.RHO: (3 / 4, 9 / 16, 1 / 4),
}

T2 = "Table 2 reproduction"
INFEASIBLE = "Infeasibility theorem"
GRID = "Grid combinatorics"
SOUND = "Classical soundness"
EXCLUSION = "Quantum exclusion"
MC = "Monte Carlo convergence"
DETERMINISM = "Determinism"


@pytest.mark.criterion(T2)
@pytest.mark.parametrize("kernel", ["closed_form", "born"])
@pytest.mark.parametrize("tag", list(NamedState), ids=lambda t: t.value)
def test_table2_cell_values(tag, kernel):
    got = facts(tag, kernel=kernel).as_tuple()
    assert np.max(np.abs(np.array(got) - TABLE2[tag])) <= 1e-9, f"{tag.value}: computed {got}, printed {TABLE2[tag]}"


@pytest.mark.criterion(T2)
def test_table2_two_paths_agree_and_fast():
    start = time.perf_counter()
    grid = np.arange(0.0, 181.0)
    worst = 0.0
    for tag in NamedState:
        born = coincidence_probability(tag, grid[:, None], grid[None, :])
        closed = closed_form_coincidence(tag, grid[:, None], grid[None, :])
        worst = max(worst, float(np.max(np.abs(born - closed))))
        a = facts(tag, kernel="born").as_tuple()
        b = facts(tag, kernel="closed_form").as_tuple()
        assert np.max(np.abs(np.subtract(a, b))) <= 1e-9
    elapsed = time.perf_counter() - start
    assert worst <= 1e-9
    assert elapsed < 1.0, f"{elapsed:.2f}s"


@pytest.mark.criterion(INFEASIBLE)
def test_gamma_is_minus_one_eighth():
    res = solve_mixture_for_facts(3 / 4, 1 / 4)
    assert res.gamma == -1 / 8
    assert not res.feasible


@pytest.mark.criterion(INFEASIBLE)
def test_no_grid_point_reproduces_phi_plus():
    start = time.perf_counter()
    verdict = reproduce_paper_procedure(GridSpec(10), SimConfig(100_000, seed=20240101), (3 / 4, 1 / 4), n_sigma=3.0)
    elapsed = time.perf_counter() - start
    assert len(verdict.points) == 286
    assert verdict.matching == ()
    assert elapsed < 120.0, f"{elapsed:.1f}s"


@pytest.mark.criterion(GRID)
def test_tetrahedral_counts():
    start = time.perf_counter()
    for p in range(1, 51):
        assert sum(1 for _ in simplex_grid(GridSpec(p))) == math.comb(p + 3, 3)
    assert sum(1 for _ in simplex_grid(GridSpec(10))) == 286
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"{elapsed:.2f}s"


@pytest.mark.criterion(SOUND)
def test_soundness_and_frontier():
    start = time.perf_counter()
    recs = sweep_facts(GridSpec(25))
    assert len(recs) == 3276
    for r in recs:
        assert abs(2 * r.facts.f2 - 1) <= r.facts.f3 + 1e-12
        assert r.margin >= -1e-12
    upper, lower = boundary_lines()
    for r in sweep_facts(GridSpec(25, "gamma=0")):
        assert abs(r.facts.f2 - upper(r.facts.f3)) <= 1e-12
    for r in sweep_facts(GridSpec(25, "alpha=0")):
        assert abs(r.facts.f2 - lower(r.facts.f3)) <= 1e-12
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"{elapsed:.2f}s"


@pytest.mark.criterion(EXCLUSION)
@pytest.mark.parametrize("tag", [NamedState.PHI_PLUS, NamedState.PSI_MINUS], ids=lambda t: t.value)
def test_entangled_states_outside(tag):
    rep = region_report(facts(tag), GridSpec(25))
    assert not rep.inside, f"{tag.value} facts {rep.target.as_tuple()} fall inside the classical region"
    assert rep.inequality_margin == pytest.approx(-0.25, abs=1e-9)


@pytest.mark.criterion(EXCLUSION)
def test_phi_plus_distance():
    rep = region_report(facts(NamedState.PHI_PLUS), GridSpec(25))
    assert rep.euclidean_distance == pytest.approx(0.25 / math.sqrt(5), abs=1e-9)
    assert rep.sweep_distance >= rep.euclidean_distance - 1 / 25


@pytest.mark.criterion(EXCLUSION)
@pytest.mark.parametrize("tag", [NamedState.PHI_MINUS, NamedState.PSI_PLUS, NamedState.RHO_MAX, NamedState.RHO],
                         ids=lambda t: t.value)
def test_other_states_look_classical(tag):
    rep = region_report(facts(tag), GridSpec(25))
    assert rep.inside and rep.euclidean_distance == 0.0
    assert not rep.f1_matches  # their F1 differs from the protocol's F1 = 1


@pytest.mark.criterion(MC)
def test_monte_carlo_convergence():
    start = time.perf_counter()
    n = 10**6
    for k, tag in enumerate(NamedState):
        rep = simulate_quantum(tag, SimConfig(n, seed=1000 + k))
        for f, se, e in zip(rep.facts, rep.stderr, facts(tag).as_tuple()):
            assert abs(f - e) <= 5 * se + 1e-12, (tag.value, f, e)
    for k, (a, b, c) in enumerate(t for t in itertools.product(range(5), repeat=3) if sum(t) <= 4):
        mix = MixturePoint(a / 4, b / 4, c / 4, (4 - a - b - c) / 4)
        rep = simulate_students(mix, SimConfig(n, seed=2000 + k))
        assert rep.facts[0] == 1.0
        for f, se, e, ok in zip(rep.facts, rep.stderr, facts_of_mixture(mix).as_tuple(), rep.defined):
            if ok:
                assert abs(f - e) <= 5 * se + 1e-12, (mix, f, e)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"{elapsed:.1f}s"


@pytest.mark.criterion(DETERMINISM)
@pytest.mark.parametrize("argv", [
    ("sweep", "--p", "25"),
    ("simulate", "students", "--mixture", "0.1,0.2,0.3,0.4", "--runs", "200000", "--seed", "11"),
    ("simulate", "quantum", "--state", "phi+", "--runs", "200000", "--seed", "11", "--workers", "4"),
    ("plot", "--p", "25"),
], ids=lambda a: a[0] + ("-" + a[1] if a[0] == "simulate" else ""))
def test_byte_identical_outputs(argv, tmp_path, capsys):
    first, second = tmp_path / "first", tmp_path / "second"
    assert main([*argv, "--out", str(first)]) == 0
    assert main([*argv, "--out", str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()
    assert first.stat().st_size > 0


@pytest.mark.criterion(DETERMINISM)
def test_run_log_byte_identical(tmp_path, capsys):
    logs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.csv"
        assert main(["simulate", "students", "--mixture", "0.25,0.25,0.25,0.25", "--runs", "100000",
                     "--seed", "3", "--out", str(tmp_path / f"rep-{name}.json"), "--log", str(path)]) == 0
        logs.append(path.read_bytes())
    capsys.readouterr()
    assert logs[0] == logs[1]
