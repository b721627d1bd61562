"""
Answer sheets, strategy classes and a negative probability
==========================================================

Two students agree on an answer sheet before being separated.  Eight sheets
exist, grouped into four classes with identical agree/disagree behaviour.
Asking for the |phi+> facts forces one class weight below zero.
"""

# %%
from bellfacts import StrategyClass, classical_inequality, facts, solve_mixture_for_facts

for cls in StrategyClass:
    print(cls.value, [str(s) for s in cls.members])

# %%
res = solve_mixture_for_facts(0.75, 0.25)
print("mixture for F2=3/4, F3=1/4:", res.mixture, "feasible:", res.feasible)

# %%
# The same question for every named state, plus the |2 F2 - 1| <= F3 test.
for tag in ("phi+", "phi-", "psi+", "psi-", "rhomax", "rho"):
    f = facts(tag)
    res = solve_mixture_for_facts(f.f2, f.f3)
    ok, margin = classical_inequality(f.f2, f.f3)
    print(f"{tag:7s} gamma={res.gamma:+.4f} feasible={res.feasible!s:5s} margin={margin:+.4f} F1={f.f1:.3f}")
