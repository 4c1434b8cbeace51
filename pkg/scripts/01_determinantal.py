"""
Determinantal varieties as quiver orbit closures
================================================

The A_2 quiver V_1 -> V_2 has one orbit per rank. Its closure is resolved
by the Kempf collapsing over Gr(d_1 - r, V_1), and that resolution is
crepant exactly when the matrix is square.
"""

from quivercrep import CaseTag, OrbitInvariants, Quiver
from quivercrep import is_crepant, orbit_codim, resolution_for_orbit, total_space_dim
from quivercrep.core import enumerate_family

A2 = Quiver.from_case(CaseTag.A2)

# every orbit of 3 x 4 matrices, with its codimension
for dec, inv in enumerate_family(A2, (3, 4)):
    print(inv, " codim", orbit_codim(A2, (3, 4), dec))

# the rank <= 1 locus of 3 x 3 matrices
spec = resolution_for_orbit(A2, (3, 3), OrbitInvariants.of(CaseTag.A2, r1=1))
for k, v in spec.describe().items():
    print(f"{k:12} {v}")

# total space dimension = dim of the closure, so the map is generically finite
print(total_space_dim(spec), A2.rep_dim((3, 3)) - 4)

# square: crepant. Rectangular: not
for d in [(3, 3), (3, 4)]:
    spec = resolution_for_orbit(A2, d, OrbitInvariants.of(CaseTag.A2, r1=1))
    print(d, is_crepant(spec))
