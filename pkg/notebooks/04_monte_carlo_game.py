"""
Playing the game run by run
===========================

Simulate the students with a chosen mixture and the photons with a chosen
state, then repeat the grid-wide search by simulation alone.
"""

# %%
from bellfacts import GridSpec, MixturePoint, SimConfig, reproduce_paper_procedure, simulate_quantum, simulate_students

config = SimConfig(runs=200_000, seed=7)
rep = simulate_students(MixturePoint(0.25, 0.25, 0.25, 0.25), config)
for off, f, se in zip(rep.offsets, rep.facts, rep.stderr):
    print(f"students  offset {off:4.0f}: {f:.4f} +/- {se:.4f}")

rep = simulate_quantum("phi+", config)
for off, f, se in zip(rep.offsets, rep.facts, rep.stderr):
    print(f"phi+      offset {off:4.0f}: {f:.4f} +/- {se:.4f}")

# %%
# A few logged runs: {theta_a theta_b r_a r_b}
_, log = simulate_students(MixturePoint(0, 1, 0, 0), SimConfig(5, seed=1), log=True)
for rec in log.records():
    print(f"{{{rec.theta_a:g} {rec.theta_b:g} {rec.r_a.value} {rec.r_b.value}}}")

# %%
verdict = reproduce_paper_procedure(GridSpec(10), SimConfig(20_000, seed=3), (0.75, 0.25))
print("grid points reproducing F2=3/4, F3=1/4:", len(verdict.matching), "of", len(verdict.points))
