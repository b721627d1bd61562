"""
Coincidence probabilities and facts for six two-photon states
=============================================================

Two analyzers, one per photon, each pass or absorb.  A *coincidence* is both
passing or both absorbing.  We compute it from projector math and compare
with the trigonometric closed forms, then average it into the three facts.
"""

# %%
import numpy as np

from bellfacts import AnalyzerSetting, NamedState, OUTCOME_PAIRS, facts, outcome_probability
from bellfacts.quantum import closed_form_coincidence, closed_form_expression, coincidence_probability

# %%
# Joint outcome probabilities for |phi+> with both analyzers at 0 and 60 degrees.
s, i = AnalyzerSetting(0.0), AnalyzerSetting(60.0)
for outcome in OUTCOME_PAIRS:
    p = outcome_probability(NamedState.PHI_PLUS, s, i, outcome)
    print(f"{outcome.signal.value}{outcome.idler.value}: {p:.4f}")

# %%
# Projector math against the closed forms on a 1-degree grid.
grid = np.arange(0.0, 181.0)
for tag in NamedState:
    born = coincidence_probability(tag, grid[:, None], grid[None, :])
    closed = closed_form_coincidence(tag, grid[:, None], grid[None, :])
    print(f"{tag.value:7s} {closed_form_expression(tag):40s} max |diff| = {np.abs(born - closed).max():.1e}")

# %%
# Facts: same angle, 30 degrees apart, 60 degrees apart.
for tag in NamedState:
    f = facts(tag)
    print(f"{tag.value:7s} F1={f.f1:.4f} F2={f.f2:.4f} F3={f.f3:.4f}")
