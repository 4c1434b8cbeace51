"""
Rank loci versus orbits for long A_n quivers
============================================

For the one-way A_4 quiver the invariants k_i = dim ker phi_i and
t_i = dim(im phi_(i-1) meet ker phi_i) do not pin down one orbit.
At d = (1, 3, 3, 1) two orbits share them, and the one containing the
long root (1, 1, 1, 1) is bigger. The resolution covers the bigger one.
"""

from quivercrep import CaseTag, OrbitInvariants, Quiver
from quivercrep.core import decomposition_to_invariants, locus_codim, orbit_codim, orbits_with_invariants
from quivercrep.errors import PartialInvariants
from quivercrep.resolutions import resolution_for_orbit, total_space_dim

q = Quiver.from_case(CaseTag.AnOneWay, 4)
d = (1, 3, 3, 1)
inv = OrbitInvariants.of(CaseTag.AnOneWay, k1=0, k2=1, k3=2, t2=0, t3=1)

# invariants are additive, so they can be read off any decomposition
for dec in orbits_with_invariants(q, d, inv):
    try:
        decomposition_to_invariants(q, dec)
        label = "in family"
    except PartialInvariants:
        label = "uses a long root"
    print(f"{str(dec):40} codim {orbit_codim(q, d, dec)}  {label}")

spec = resolution_for_orbit(q, d, inv)
print("total space", total_space_dim(spec), " closure", q.rep_dim(d) - locus_codim(q, d, inv))
