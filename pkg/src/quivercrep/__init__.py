"""Orbit closures of Dynkin quiver representations, their crepant resolutions,
and the degeneracy loci they define on Grassmannians."""

from . import bundles, chow, core, linalg, odl, oracle, resolutions
from .core import (
    CaseTag,
    Decomposition,
    OrbitInvariants,
    Quiver,
    canonical_representative,
    degeneration_leq,
    enumerate_family,
    enumerate_orbits,
    in_closure,
    invariants_to_decomposition,
    locus_codim,
    orbits_with_invariants,
    orbit_codim,
    positive_roots,
    rank_profile,
)
from .errors import *  # noqa: F401,F403
from .odl import ODLConfig, ODLReport, odl_canonical, odl_codim, odl_invariants
from .oracle import degeneration_path_check, orbit_dim_numeric, resolution_fiber_check
from .resolutions import (
    Monomial,
    ResType,
    ResolutionSpec,
    closed_form_crepant,
    is_crepant,
    monomial_bundle,
    resolution_for_orbit,
    total_space_dim,
)

__version__ = "0.1.0"
