import itertools

import pytest

from quivercrep import bundles as bx
from quivercrep.bundles import FlagFactor
from quivercrep.core import CaseTag, OrbitInvariants, Quiver, enumerate_family, orbit_codim
from quivercrep.errors import InfeasibleMonomial, NoResolutionRule
from quivercrep.resolutions import (
    Monomial,
    ResType,
    canonical_base,
    citation,
    closed_form_crepant,
    det_w,
    flag_of_monomial,
    is_crepant,
    monomial_bundle,
    resolution_for_orbit,
    total_space_dim,
)

A2 = Quiver.from_case(CaseTag.A2)
SINK = Quiver.from_case(CaseTag.A3SinkCenter)
D4 = Quiver.from_case(CaseTag.D4SinkCenter)
SINK_112 = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=1, r2=1, p1=2)
D4_INV = OrbitInvariants.of(CaseTag.D4SinkCenter, r1=1, r2=1, r3=1, r12=0, r13=0, r23=0, r123=0, x=2)


def slots(pv):
    return pv.as_dict()


def test_a2_monomial_is_determinantal():
    d1, d2, r = 3, 4, 1
    m = Monomial((1,), (d1 - r,))
    (f,) = flag_of_monomial(A2, (d1, d2), m)
    assert (f.vertex, f.ambient_rank, f.steps) == (1, d1, (d1 - r,))
    spec = monomial_bundle(A2, (d1, d2), m)
    assert spec.bundle_rank() == r * d2
    assert total_space_dim(spec) == d1 * d2 - (d1 - r) * (d2 - r)


def test_empty_and_trivial_monomials():
    assert flag_of_monomial(SINK, (2, 2, 2), Monomial((), ())) == []
    spec = monomial_bundle(SINK, (2, 3, 2), Monomial((), ()))
    assert spec.bundle_rank() == SINK.rep_dim((2, 3, 2))
    assert not det_w(spec)


def test_infeasible_monomial():
    with pytest.raises(InfeasibleMonomial):
        monomial_bundle(A2, (2, 2), Monomial((1, 1), (2, 1)))


def test_five_step_monomial_matches_display():
    m = Monomial.from_cumulative((1, 3, 2, 1, 3), (1, 1, 2, 2, 2))
    mono = monomial_bundle(SINK, (2, 2, 2), m)
    disp = resolution_for_orbit(SINK, (2, 2, 2), SINK_112, ResType.i)
    assert sorted(f.label() for f in mono.base) == sorted(f.label() for f in disp.base)
    assert mono.bundle_rank() == disp.bundle_rank()
    assert det_w(mono) == det_w(disp)


def test_sink_type_ii_display():
    inv = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=3, r2=1, p1=3)
    spec = resolution_for_orbit(SINK, (4, 5, 3), inv)
    assert spec.res_type is ResType.ii
    assert sorted(f.label() for f in spec.base) == ["Gr(2, V_3)", "Gr(3, V_2)"]
    assert spec.bundle_rank() == (4 + 1) * 3
    assert closed_form_crepant(SINK, (4, 5, 3), inv, ResType.ii)
    assert is_crepant(spec)


def test_d4_type_iii_display():
    spec = resolution_for_orbit(D4, (2, 3, 2, 2), D4_INV, ResType.iii)
    assert sorted(f.label() for f in spec.base) == ["Gr(1, V_1)", "Gr(1, V_3)", "Gr(1, V_4)", "Gr(2, V_2)"]
    assert spec.bundle_rank() == 3 * 2
    for rt in (ResType.ii, ResType.iii):
        assert closed_form_crepant(D4, (2, 3, 2, 2), D4_INV, rt)
        assert is_crepant(resolution_for_orbit(D4, (2, 3, 2, 2), D4_INV, rt))


def test_sink_example_numbers():
    spec = resolution_for_orbit(SINK, (2, 2, 2), SINK_112, ResType.i)
    assert total_space_dim(spec) == 6 == SINK.rep_dim((2, 2, 2)) - 2
    expected = {"O_1,1(1)": -2, "O_2,1(1)": -2, "O_3,1(1)": -2}
    assert slots(det_w(spec)) == expected
    assert slots(canonical_base(spec.factors, spec.scene())) == expected
    assert is_crepant(spec) and closed_form_crepant(SINK, (2, 2, 2), SINK_112, ResType.i)
    assert "condition (i)" in citation(SINK, ResType.i)


def test_canonical_of_grassmannian_and_full_flag():
    g = FlagFactor(1, 5, (2,))
    assert slots(canonical_base([g], bx.Scene({1: g}))) == {"O_1,1(1)": -5}
    fl = FlagFactor(1, 3, (1, 2))
    assert slots(canonical_base([fl], bx.Scene({1: fl}))) == {"O_1,1(1)": -2, "O_1,2(1)": -2}


@pytest.mark.parametrize("d1,d2", [(2, 2), (3, 3), (2, 3), (4, 2)])
def test_determinantal_crepancy(d1, d2):
    for r in range(1, min(d1, d2)):
        spec = resolution_for_orbit(A2, (d1, d2), OrbitInvariants.of(CaseTag.A2, r1=r))
        assert is_crepant(spec) == (d1 == d2)


def test_d4_type_i_never_crepant():
    for d in itertools.product(range(4), repeat=4):
        for dec, inv in enumerate_family(D4, d):
            try:
                spec = resolution_for_orbit(D4, d, inv, ResType.i)
            except NoResolutionRule:
                continue
            assert not is_crepant(spec)
            assert not closed_form_crepant(D4, d, inv, ResType.i)


def test_birational_dimension_small_sweep():
    for d in itertools.product(range(4), repeat=3):
        for dec, inv in enumerate_family(SINK, d):
            for rt in ResType:
                try:
                    spec = resolution_for_orbit(SINK, d, inv, rt)
                except NoResolutionRule:
                    continue
                assert total_space_dim(spec) == SINK.rep_dim(d) - orbit_codim(SINK, d, dec)
