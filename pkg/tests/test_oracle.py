import random

import pytest

from quivercrep.core import (
    CaseTag,
    OrbitInvariants,
    Quiver,
    canonical_representative,
    enumerate_family,
    in_closure,
    invariants_to_decomposition,
    orbit_codim,
    rank_profile,
)
from quivercrep.errors import PointNotInOrbit
from quivercrep.oracle import (
    dense_point,
    degeneration_path_check,
    degeneration_path_report,
    orbit_dim_numeric,
    resolution_fiber_check,
    sweep_birationality,
    sweep_closure_order,
)
from quivercrep.resolutions import ResType, resolution_for_orbit

A2 = Quiver.from_case(CaseTag.A2)
SINK = Quiver.from_case(CaseTag.A3SinkCenter)
D4 = Quiver.from_case(CaseTag.D4SinkCenter)


def a2(r):
    return OrbitInvariants.of(CaseTag.A2, r1=r)


def sink(r1, r2, p1):
    return OrbitInvariants.of(CaseTag.A3SinkCenter, r1=r1, r2=r2, p1=p1)


def test_orbit_dim_of_zero_and_generic():
    assert orbit_dim_numeric(SINK, ([[0, 0]] * 2, [[0]] * 2), (2, 2, 1)) == 0
    rng = random.Random(1)
    d1, d2 = 3, 4
    for r in range(4):
        # random rank-r matrix as a product of d2 x r and r x d1 factors
        a = [[rng.randint(-5, 5) for _ in range(r)] for _ in range(d2)]
        b = [[rng.randint(-5, 5) for _ in range(d1)] for _ in range(r)]
        m = [[sum(a[i][k] * b[k][j] for k in range(r)) for j in range(d1)] for i in range(d2)]
        assert orbit_dim_numeric(A2, (m,), (d1, d2)) == d1 * d2 - (d1 - r) * (d2 - r)


@pytest.mark.parametrize("q,dmax", [(SINK, 3), (Quiver.from_case(CaseTag.A3SourceCenter), 3), (D4, 2)])
def test_numeric_codim_matches_ext(q, dmax):
    import itertools

    for d in itertools.product(range(dmax + 1), repeat=q.n):
        for dec, _ in enumerate_family(q, d):
            num = q.rep_dim(d) - orbit_dim_numeric(q, canonical_representative(q, dec), d)
            assert num == orbit_codim(q, d, dec)


def test_identity_scaling_drops_rank():
    rep = degeneration_path_report(A2, (2, 2), a2(2), a2(1), trials=60, seed=2)
    assert rep.ok and rep.limits_checked > 0
    assert rep.reached_target


def test_collapsing_images_lowers_only_p1():
    def family(t):
        return ([[1], [0]], [[1], [t]])

    general = rank_profile(SINK, family(1), (1, 2, 1))
    special = rank_profile(SINK, family(0), (1, 2, 1))
    assert general == sink(1, 1, 2) and special == sink(1, 1, 1)
    assert in_closure(SINK, (1, 2, 1), special, general)


def test_random_families_stay_in_closure():
    for inv in (sink(1, 1, 2), sink(2, 1, 2)):
        assert degeneration_path_check(SINK, (2, 2, 2), inv, trials=100, seed=5)


def test_closure_order_sweep_small():
    res = sweep_closure_order(dmax=2)
    assert res.ok and res.checked > 100


def test_a2_fibers():
    spec = resolution_for_orbit(A2, (2, 2), a2(1))
    assert resolution_fiber_check(spec, ([[1, 2], [2, 4]],)) == 0
    assert resolution_fiber_check(spec, ([[0, 0], [0, 0]],)) > 0
    with pytest.raises(PointNotInOrbit):
        resolution_fiber_check(spec, ([[1, 0], [0, 1]],))


def test_dense_point_fiber_sink_type_i():
    spec = resolution_for_orbit(SINK, (2, 2, 2), sink(1, 1, 2), ResType.i)
    for seed in range(5):
        assert resolution_fiber_check(spec, dense_point(spec, seed), seed) == 0


def test_boundary_point_has_positive_fiber():
    spec = resolution_for_orbit(SINK, (2, 2, 2), sink(1, 1, 2), ResType.i)
    # kernels of rank-one maps are still unique on the (1, 1, 1) orbit
    low = invariants_to_decomposition(SINK, (2, 2, 2), sink(1, 1, 1))
    assert resolution_fiber_check(spec, canonical_representative(SINK, low)) == 0
    # phi_1 = 0 leaves every line of V_1 as a candidate kernel
    low = invariants_to_decomposition(SINK, (2, 2, 2), sink(0, 1, 1))
    assert resolution_fiber_check(spec, canonical_representative(SINK, low)) == 1


def test_d4_dense_fibers():
    inv = OrbitInvariants.of(CaseTag.D4SinkCenter, r1=1, r2=1, r3=1, r12=0, r13=0, r23=0, r123=0, x=2)
    for rt in (ResType.ii, ResType.iii):
        spec = resolution_for_orbit(D4, (2, 3, 2, 2), inv, rt)
        assert resolution_fiber_check(spec, dense_point(spec, 3), 3) == 0


def test_birationality_sweep_reaches_long_roots():
    # d = (1, 3, 3, 1) on one-way A_4 is the smallest place a length-4 root dominates
    res = sweep_birationality(dmax_small=2, n_max=4, dmax_long=3, fiber_dmax=2, fiber_nmax=4)
    assert res.ok and res.per_case["AnOneWay"] > 0
