import itertools
import random

import pytest

from quivercrep.core import (
    CaseTag,
    Decomposition,
    OrbitInvariants,
    Quiver,
    canonical_representative,
    decomposition_to_invariants,
    degeneration_leq,
    enumerate_family,
    enumerate_orbits,
    hom_dim,
    in_closure,
    invariants_to_decomposition,
    locus_codim,
    orbit_codim,
    positive_roots,
    random_conjugate,
    rank_profile,
)
from quivercrep.errors import Infeasible, UnsupportedType

A2 = Quiver.from_case(CaseTag.A2)
SINK = Quiver.from_case(CaseTag.A3SinkCenter)
D4 = Quiver.from_case(CaseTag.D4SinkCenter)


def dec(*pairs):
    return Decomposition(tuple(pairs))


def test_root_counts():
    assert set(positive_roots(A2)) == {(1, 0), (0, 1), (1, 1)}
    assert len(positive_roots(SINK)) == 6 and (1, 1, 1) in positive_roots(SINK)
    roots = positive_roots(D4)
    assert len(roots) == 12
    assert max(roots, key=sum) == (1, 2, 1, 1)


def test_an_roots_count_triangular():
    for n in range(2, 8):
        q = Quiver.from_case(CaseTag.AnOneWay, n) if n >= 4 else Quiver.from_case(CaseTag.A3OneWay if n == 3 else CaseTag.A2)
        assert len(positive_roots(q)) == n * (n + 1) // 2


def test_orbits_a2_rank_stratification():
    orbits = enumerate_orbits(A2, (1, 1))
    assert sorted(map(str, orbits)) == sorted(["(1, 1)", "(0, 1) + (1, 0)"])
    assert enumerate_orbits(D4, (0, 0, 0, 0)) == [Decomposition()]
    assert len(enumerate_orbits(A2, (3, 4))) == 4


def test_orbit_count_matches_knapsack():
    d = (2, 2, 2)
    roots = positive_roots(SINK)
    brute = 0
    for ms in itertools.product(range(3), repeat=len(roots)):
        tot = tuple(sum(m * r[i] for m, r in zip(ms, roots)) for i in range(3))
        brute += tot == d
    assert len(enumerate_orbits(SINK, d)) == brute


def test_invariants_round_trip_sink():
    m = dec(((1, 1, 0), 1), ((0, 1, 1), 1), ((1, 0, 0), 1), ((0, 0, 1), 1))
    inv = decomposition_to_invariants(SINK, m)
    assert inv.as_dict() == {"r1": 1, "r2": 1, "p1": 2}
    assert invariants_to_decomposition(SINK, (2, 2, 2), inv) == m
    zero = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=0, r2=0, p1=0)
    assert invariants_to_decomposition(SINK, (3, 1, 2), zero) == dec(((1, 0, 0), 3), ((0, 1, 0), 1), ((0, 0, 1), 2))


def test_infeasible_invariants():
    with pytest.raises(Infeasible):
        invariants_to_decomposition(A2, (1, 1), OrbitInvariants.of(CaseTag.A2, r1=2))


def test_d4_round_trip():
    inv = OrbitInvariants.of(CaseTag.D4SinkCenter, r1=1, r2=1, r3=1, r12=0, r13=0, r23=0, r123=0, x=2)
    m = invariants_to_decomposition(D4, (2, 3, 2, 2), inv)
    assert decomposition_to_invariants(D4, m) == inv
    top = decomposition_to_invariants(D4, dec(((1, 2, 1, 1), 1)))
    assert top["r1"] == top["r2"] == top["r3"] == 1
    assert top == rank_profile(D4, canonical_representative(D4, dec(((1, 2, 1, 1), 1))))


def test_hom_small_cases():
    s = dec(((1, 0), 1))
    assert hom_dim(A2, s, s) == 1
    assert hom_dim(A2, dec(((1, 0), 1)), dec(((1, 1), 1))) == 0
    assert hom_dim(A2, dec(((1, 1), 1)), dec(((1, 0), 1))) == 1


def test_hom_additive():
    rng = random.Random(4)
    roots = positive_roots(SINK)
    for _ in range(20):
        a, b, c = (dec((rng.choice(roots), rng.randint(1, 2))) for _ in range(3))
        assert hom_dim(SINK, a + b, c) == hom_dim(SINK, a, c) + hom_dim(SINK, b, c)


@pytest.mark.parametrize("d1,d2", [(2, 3), (3, 3), (4, 2)])
def test_determinantal_codim(d1, d2):
    for r in range(min(d1, d2) + 1):
        m = invariants_to_decomposition(A2, (d1, d2), OrbitInvariants.of(CaseTag.A2, r1=r))
        assert orbit_codim(A2, (d1, d2), m) == (d1 - r) * (d2 - r)


def test_codim_table_row():
    inv = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=1, r2=1, p1=2)
    assert orbit_codim(SINK, (2, 2, 2), invariants_to_decomposition(SINK, (2, 2, 2), inv)) == 2


def test_representatives():
    zero = canonical_representative(SINK, dec(((0, 1, 0), 1)))
    assert all(not any(any(r) for r in m) for m in zero)
    assert canonical_representative(A2, dec(((1, 1), 1))) == ([[1]],)
    top = dec(((1, 2, 1, 1), 1))
    assert hom_dim(D4, top, top) == 1


def test_rank_profile_conjugation_invariant():
    rng = random.Random(0)
    for m, inv in enumerate_family(SINK, (2, 2, 2)):
        mats = canonical_representative(SINK, m)
        assert rank_profile(SINK, mats) == inv
        assert rank_profile(SINK, random_conjugate(SINK, (2, 2, 2), mats, rng)) == inv


def test_closure_lemma_and_hom_order():
    big = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=2, r2=1, p1=2)
    small = OrbitInvariants.of(CaseTag.A3SinkCenter, r1=1, r2=1, p1=1)
    assert in_closure(SINK, (2, 2, 2), small, big)
    assert in_closure(SINK, (2, 2, 2), big, big)
    fam = enumerate_family(SINK, (2, 2, 2))
    for (m, a), (n, b) in itertools.product(fam, repeat=2):
        assert in_closure(SINK, (2, 2, 2), a, b) == degeneration_leq(SINK, m, n)


def test_degeneration_a2():
    r1, r2 = (invariants_to_decomposition(A2, (2, 2), OrbitInvariants.of(CaseTag.A2, r1=r)) for r in (1, 2))
    assert degeneration_leq(A2, r1, r2) and not degeneration_leq(A2, r2, r1)
    assert degeneration_leq(A2, r1, r1)


def test_hom_order_is_partial_order_d4():
    orbits = enumerate_orbits(D4, (1, 2, 1, 1))
    leq = {(a, b): degeneration_leq(D4, a, b) for a in orbits for b in orbits}
    for a, b in itertools.product(orbits, repeat=2):
        if a != b:
            assert not (leq[a, b] and leq[b, a])
    for a, b, c in itertools.product(orbits, repeat=3):
        if leq[a, b] and leq[b, c]:
            assert leq[a, c]


def test_rejects_non_dynkin():
    with pytest.raises(UnsupportedType):
        Quiver((1, 2, 3), ((1, 2), (2, 3), (3, 1)))


def test_long_root_dominates_one_way_locus():
    q = Quiver.from_case(CaseTag.AnOneWay, 4)
    d = (1, 3, 3, 1)
    inv = OrbitInvariants.of(CaseTag.AnOneWay, k1=0, k2=1, k3=2, t2=0, t3=1)
    short = invariants_to_decomposition(q, d, inv)
    assert orbit_codim(q, d, short) == 2
    # (1111) + (0110) + (0100) + (0010) carries the same invariants
    assert locus_codim(q, d, inv) == 1
    shuffled = OrbitInvariants.of(CaseTag.AnOneWay, t3=1, t2=0, k3=2, k2=1, k1=0)
    assert locus_codim(q, d, shuffled) == 1


def test_locus_is_orbit_for_a3():
    for d in itertools.product(range(3), repeat=3):
        for dec, inv in enumerate_family(SINK, d):
            assert locus_codim(SINK, d, inv) == orbit_codim(SINK, d, dec)
