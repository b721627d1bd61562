"""
Sweeping every strategy mixture
===============================

Walk the (alpha, beta, gamma, delta) simplex with step 1/p, map each point to
(F2, F3), and compare the resulting region with the quantum predictions.
"""

# %%
import math
from pathlib import Path

from bellfacts import GridSpec, NamedState, facts, region_report, sweep_facts
from bellfacts.plot import facts_plane_svg

p = 25
records = sweep_facts(GridSpec(p))
print(f"p={p}: {len(records)} points (C(p+3, 3) = {math.comb(p + 3, 3)})")
print("smallest margin |2F2-1| <= F3:", min(r.margin for r in records))

# %%
# The planes gamma = 0 and alpha = 0 trace the two edges of the region.
for plane in ("gamma=0", "alpha=0"):
    recs = sweep_facts(GridSpec(p, plane))
    print(plane, sorted({(round(r.facts.f3, 3), round(r.facts.f2, 3)) for r in recs})[:4], "...")

# %%
for tag in NamedState:
    rep = region_report(facts(tag), GridSpec(p))
    where = "inside" if rep.inside else f"outside, distance {rep.euclidean_distance:.4f}"
    print(f"{tag.value:7s} {where}")

# %%
out = Path("facts_plane.svg")
out.write_text(facts_plane_svg(records, {t.value: facts(t) for t in NamedState}))
print("wrote", out.resolve())
