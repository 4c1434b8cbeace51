import pytest

from quivercrep import bundles as bx
from quivercrep.core import CaseTag, OrbitInvariants, Quiver
from quivercrep.errors import ExpectedDimensionNegative, NotCrepant
from quivercrep.odl import (
    CanonicalClass,
    ODLConfig,
    odl_canonical,
    odl_codim,
    odl_invariants,
    sing_codim_bound,
    table_canonical,
    table_codim,
)
from quivercrep.resolutions import ResType

SINK = Quiver.from_case(CaseTag.A3SinkCenter)
D4 = Quiver.from_case(CaseTag.D4SinkCenter)
A2 = Quiver.from_case(CaseTag.A2)


def sink(r1, r2, p1):
    return OrbitInvariants.of(CaseTag.A3SinkCenter, r1=r1, r2=r2, p1=p1)


D4_INV = OrbitInvariants.of(CaseTag.D4SinkCenter, r1=1, r2=1, r3=1, r12=0, r13=0, r23=0, r123=0, x=2)
GR48 = {"E1": "2*sum(O(-1),O)", "E2": "sum(Q,O)", "E3": "3*O"}


def parsed(spec):
    return tuple((k, bx.parse(v, label=k)) for k, v in spec.items())


def test_gr48_codim_and_canonical():
    d, inv = (4, 5, 3), sink(3, 1, 3)
    assert table_codim(SINK, d, inv) == 12 == odl_codim(SINK, d, inv)
    k = odl_canonical(SINK, d, inv)
    assert k.as_dict() == table_canonical(SINK, d, inv)
    assert k.degree(dict(parsed(GR48)), (4, 8)) == 8


def test_dense_orbit_codim_zero():
    assert odl_codim(A2, (2, 3), OrbitInvariants.of(CaseTag.A2, r1=2)) == 0


def test_singular_bound():
    # e = (d1 - r1, d2 - p1, d3 - r2) = (1, 2, 2)
    assert sing_codim_bound(SINK, (3, 4, 3), sink(2, 1, 2), ResType.i) == 3


def test_trivial_bundles_give_trivial_class():
    k = odl_canonical(SINK, (4, 5, 3), sink(3, 1, 3))
    trivial = {f"E{v}": bx.trivial(dv) for v, dv in zip((1, 2, 3), (4, 5, 3))}
    assert k.degree(trivial, (4, 8)) == 0
    assert str(CanonicalClass.of({})) == "O"


def test_d4_canonical_is_det_e2_power():
    for rt in (ResType.ii, ResType.iii):
        k = odl_canonical(D4, (2, 3, 2, 2), D4_INV, rt)
        bundles = {"E1": bx.trivial(2), "E2": bx.parse("dual(U)"), "E3": bx.trivial(2), "E4": bx.trivial(2)}
        assert k.as_dict()[2] == 2 * 2
        assert k.degree(bundles, (3, 7)) == 4


def test_twisting_invariance_of_canonical():
    # tensoring every E_v by one line bundle leaves D and hence K_{D/X} unchanged
    for d, inv in [((4, 5, 3), sink(3, 1, 3)), ((2, 2, 2), sink(1, 1, 2))]:
        k = odl_canonical(SINK, d, inv).as_dict()
        assert sum(e * d[v - 1] for v, e in k.items()) == 0


def test_not_crepant_refused():
    with pytest.raises(NotCrepant):
        odl_canonical(A2, (2, 3), OrbitInvariants.of(CaseTag.A2, r1=1))


def test_gr48_report():
    cfg = ODLConfig(SINK, (4, 5, 3), sink(3, 1, 3), parsed(GR48), base=(4, 8), name="gr48")
    rep = odl_invariants(cfg, ["chi_O"], seed=1)
    assert (rep.dim_x, rep.codim_x, rep.dim_d) == (16, 12, 4)
    assert rep.canonical_total_trivial
    assert rep.numeric == {"chi_O": 2}
    assert rep.to_json()["numeric"] == {"chi_O": 2}
    assert "gr48" in rep.to_table()


def test_negative_expected_dimension():
    trivial = parsed({"E1": "triv(4)", "E2": "triv(5)", "E3": "triv(3)"})
    cfg = ODLConfig(SINK, (4, 5, 3), sink(3, 1, 3), trivial, base=(1, 4))
    with pytest.raises(ExpectedDimensionNegative):
        odl_invariants(cfg)
