"""
Orbits of V_1 -> V_2 <- V_3 and their closures
===============================================

Orbits are labelled by r_1, r_2 (ranks of the two maps) and p_1 (rank of
the combined map V_1 + V_3 -> V_2). Closure inclusion is the rank
inequality test, checked here against the Hom order.
"""

import itertools

from quivercrep import CaseTag, OrbitInvariants, Quiver
from quivercrep.core import degeneration_leq, enumerate_family, in_closure, orbit_codim
from quivercrep.resolutions import ResType, closed_form_crepant, is_crepant, resolution_for_orbit

SINK = Quiver.from_case(CaseTag.A3SinkCenter)
d = (2, 2, 2)

fam = enumerate_family(SINK, d)
for dec, inv in sorted(fam, key=lambda x: orbit_codim(SINK, d, x[0])):
    print(f"{str(inv):28} codim {orbit_codim(SINK, d, dec)}   {dec}")

agree = all(
    in_closure(SINK, d, a, b) == degeneration_leq(SINK, m, n)
    for (m, a), (n, b) in itertools.product(fam, repeat=2)
)
print("rank test == Hom order:", agree)

# three displays for the same orbit; only some are crepant
inv = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=1, r2=1, p1=2)
for rt in (ResType.i, ResType.ii, ResType.iii):
    try:
        spec = resolution_for_orbit(SINK, d, inv, rt)
    except Exception as e:  # not every display applies
        print(rt.value, type(e).__name__)
        continue
    print(rt.value, spec.describe()["base"], is_crepant(spec), closed_form_crepant(SINK, d, inv, rt))
