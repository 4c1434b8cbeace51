"""Brute-force ground truth: orbit dimensions, degenerations, resolution fibers.

Everything here works on explicit rational matrices and never consults the
closed forms it is meant to certify.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .core import (
    CaseTag,
    Decomposition,
    OrbitInvariants,
    Quiver,
    canonical_representative,
    degeneration_leq,
    identify_orbit,
    in_closure,
    invariants_to_decomposition,
    random_conjugate,
    rank_profile,
)
from .errors import PartialInvariants, PointNotInOrbit, UnsupportedCase
from .resolutions import ResType, ResolutionSpec

Vectors = list  # list of vectors spanning a subspace


# ---------------------------------------------------------------- orbit dimension


def orbit_dim_numeric(quiver: Quiver, m: Sequence, d: Sequence[int] | None = None) -> int:
    """Rank of the tangent map gl_d -> R_d, (A_v) -> (A_t phi_a - phi_a A_s)_a, at ``m``."""
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    if d is None:
        d = [0] * quiver.n
        for (s, t), phi in zip(quiver.arrows, m):
            d[pos[t]] = max(d[pos[t]], len(phi))
            d[pos[s]] = max(d[pos[s]], len(phi[0]) if phi else 0)
    offset, off = [], 0
    for x in d:
        offset.append(off)
        off += x * x
    if off == 0:
        return 0
    rows = []
    for (s, t), phi in zip(quiver.arrows, m):
        i, j = pos[s], pos[t]
        for r in range(d[j]):
            for c in range(d[i]):
                row = [0] * off
                for k in range(d[j]):  # (A_t phi)[r][c]
                    if phi[k][c]:
                        row[offset[j] + r * d[j] + k] += phi[k][c]
                for k in range(d[i]):  # (phi A_s)[r][c]
                    if phi[r][k]:
                        row[offset[i] + k * d[i] + c] -= phi[r][k]
                if any(row):
                    rows.append(row)
    return linalg.rank(rows)


# ---------------------------------------------------------------- degenerations


@dataclass
class DegenerationReport:
    trials: int
    limits_checked: int = 0
    pencils_checked: int = 0
    reached_target: bool = False
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _predicted_leq(quiver, d, small: Decomposition, big: Decomposition, small_mats, big_mats) -> list[str]:
    """Disagreements of the available closure predictors with 'small ⊂ closure(big)'."""
    bad = []
    if not degeneration_leq(quiver, small, big):
        bad.append("hom order")
    if quiver.case_tag in (CaseTag.A3SinkCenter, CaseTag.A3SourceCenter, CaseTag.A3OneWay):
        if not in_closure(quiver, d, rank_profile(quiver, small_mats, d), rank_profile(quiver, big_mats, d)):
            bad.append("rank inequalities")
    return bad


def _one_parameter_limit(quiver, d, mats, rng, tries=50):
    """lim_{t->0} lambda(t).m for a random diagonal one-parameter subgroup, if it exists."""
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    for _ in range(tries):
        w = [[rng.randint(-2, 2) for _ in range(x)] for x in d]
        out, exists = [], True
        for (s, t), phi in zip(quiver.arrows, mats):
            ws, wt = w[pos[s]], w[pos[t]]
            lim = []
            for r, row in enumerate(phi):
                new = []
                for c, x in enumerate(row):
                    e = wt[r] - ws[c]
                    if x and e < 0:
                        exists = False
                    new.append(x if e == 0 else 0)
                lim.append(new)
            out.append(lim)
        if exists:
            return tuple(out)
    return None


def degeneration_path_report(
    quiver: Quiver,
    d: Sequence[int],
    from_inv: OrbitInvariants | Decomposition,
    to_inv: OrbitInvariants | Decomposition | None = None,
    trials: int = 100,
    seed: int = 0,
) -> DegenerationReport:
    """Sample degenerations out of an orbit and compare with the closure predictors.

    Two kinds of families are used: limits of one-parameter subgroups applied
    to the sparse canonical representative, and pencils m + tX whose general
    member specializes to m at t = 0.  Every limit must lie below its source.
    """
    d = tuple(d)
    src = from_inv if isinstance(from_inv, Decomposition) else invariants_to_decomposition(quiver, d, from_inv)
    tgt = None
    if to_inv is not None:
        tgt = to_inv if isinstance(to_inv, Decomposition) else invariants_to_decomposition(quiver, d, to_inv)
    rng = random.Random(seed)
    rep = canonical_representative(quiver, src)
    report = DegenerationReport(trials)
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    for _ in range(trials):
        lim = _one_parameter_limit(quiver, d, rep, rng)
        if lim is not None:
            dec = identify_orbit(quiver, d, lim)
            report.limits_checked += 1
            bad = _predicted_leq(quiver, d, dec, src, lim, rep)
            if bad:
                report.counterexamples.append(("limit", str(dec), str(src), bad))
            if tgt is not None and dec == tgt:
                report.reached_target = True
                if not degeneration_leq(quiver, tgt, src):
                    report.counterexamples.append(("target reached but predicted unreachable", str(tgt), str(src)))
        # pencil through a random point of the orbit
        m = random_conjugate(quiver, d, rep, rng)
        x = [[[rng.randint(-3, 3) for _ in range(d[pos[s]])] for _ in range(d[pos[t]])] for s, t in quiver.arrows]
        tval = rng.randint(1, 10**6)
        gen = tuple(
            [[a + tval * b for a, b in zip(ra, rb)] for ra, rb in zip(ma, xa)] for ma, xa in zip(m, x)
        )
        big = identify_orbit(quiver, d, gen)
        report.pencils_checked += 1
        bad = _predicted_leq(quiver, d, src, big, m, gen)
        if bad:
            report.counterexamples.append(("pencil", str(src), str(big), bad))
    return report


def degeneration_path_check(quiver, d, from_inv, to_inv=None, trials: int = 100, seed: int = 0) -> bool:
    """True when no sampled family contradicts the closure predictions."""
    return degeneration_path_report(quiver, d, from_inv, to_inv, trials, seed).ok


# ---------------------------------------------------------------- subspaces


def _span(vectors: Sequence[Sequence], n: int) -> Vectors:
    vecs = [list(map(Fraction, v)) for v in vectors if any(v)]
    if not vecs:
        return []
    red, _ = linalg._rref(vecs)
    return [r for r in red if any(r)]


def _ann(U: Vectors, n: int) -> Vectors:
    """Linear forms vanishing on U."""
    return linalg.nullspace(U, n) if U else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]


def _intersect(A: Vectors, B: Vectors, n: int) -> Vectors:
    forms = _ann(A, n) + _ann(B, n)
    return linalg.nullspace(forms, n) if forms else _full(n)


def _full(n: int) -> Vectors:
    return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]


def _apply(phi, U: Vectors) -> Vectors:
    return [[sum(Fraction(phi[r][c]) * u[c] for c in range(len(u))) for r in range(len(phi))] for u in U]


def _preimage(phi, H: Vectors, ns: int, nt: int) -> Vectors:
    forms = _ann(H, nt)
    if not forms:
        return _full(ns)
    rows = [[sum(a[r] * phi[r][c] for r in range(nt)) for c in range(ns)] for a in forms]
    return linalg.nullspace(rows, ns)


def _contains(A: Vectors, B: Vectors) -> bool:
    """B ⊂ A."""
    return linalg.rank(A + B) == linalg.rank(A) if B else True


# ---------------------------------------------------------------- resolution fibers


@dataclass
class FiberResult:
    tangent_dim: int
    forced: bool  # every step determined by the point, without choices
    point: dict


def _constraints(spec: ResolutionSpec):
    """(s, i, t, j, arrow index): phi(U_{s,i}) ⊂ U_{t,j}; None = whole space, 0 = zero."""
    idx = {a: k for k, a in enumerate(spec.quiver.arrows)}
    out = []
    for ac in spec.chains:
        s, t = ac.arrow
        for i, j in ac.chain:
            if j is None:
                continue
            out.append((s, i, t, j, idx[ac.arrow]))
    return out


class _Fiber:
    def __init__(self, spec: ResolutionSpec, mats):
        self.spec = spec
        self.q = spec.quiver
        self.mats = mats
        self.dim = {v: spec.d[spec.quiver.index(v)] for v in self.q.vertices}
        self.steps = {f.vertex: f.steps for f in spec.factors}
        self.cons = _constraints(spec)

    def k(self, v, j):
        return 0 if j == 0 else self.steps[v][j - 1]

    def start(self):
        L, H = {}, {}
        for v, st in self.steps.items():
            for j in range(1, len(st) + 1):
                L[v, j] = []
                H[v, j] = _full(self.dim[v])
        return L, H

    def _sub(self, D, v, j, default_full):
        if j is None:
            return _full(self.dim[v])
        if j == 0:
            return []
        return D[v, j]

    def propagate(self, L, H):
        changed = True
        while changed:
            changed = False
            for s, i, t, j, a in self.cons:
                phi = self.mats[a]
                ns, nt = self.dim[s], self.dim[t]
                if i is not None and i != 0:
                    tgtH = [] if j == 0 else H[t, j]
                    new = _intersect(H[s, i], _preimage(phi, tgtH, ns, nt), ns)
                    if linalg.rank(new) < linalg.rank(H[s, i]):
                        H[s, i] = new
                        changed = True
                if j != 0:
                    srcL = _full(ns) if i is None else ([] if i == 0 else L[s, i])
                    new = _span(L[t, j] + _apply(phi, srcL), nt)
                    if linalg.rank(new) > linalg.rank(L[t, j]):
                        L[t, j] = new
                        changed = True
            for v, st in self.steps.items():
                n = self.dim[v]
                for j in range(1, len(st)):
                    new = _span(L[v, j + 1] + L[v, j], n)
                    if linalg.rank(new) > linalg.rank(L[v, j + 1]):
                        L[v, j + 1] = new
                        changed = True
                    new = _intersect(H[v, j], H[v, j + 1], n)
                    if linalg.rank(new) < linalg.rank(H[v, j]):
                        H[v, j] = new
                        changed = True
            for (v, j) in L:
                k = self.k(v, j)
                if linalg.rank(L[v, j]) > k or linalg.rank(H[v, j]) < k or not _contains(H[v, j], L[v, j]):
                    return False
                # a bound of the right size pins the step down
                if linalg.rank(L[v, j]) == k and linalg.rank(H[v, j]) > k:
                    H[v, j] = list(L[v, j])
                    changed = True
                elif linalg.rank(H[v, j]) == k and linalg.rank(L[v, j]) < k:
                    L[v, j] = list(H[v, j])
                    changed = True
        return True

    def unforced(self, L):
        return [(v, j) for (v, j) in L if linalg.rank(L[v, j]) < self.k(v, j)]

    def satisfied(self, U) -> bool:
        for s, i, t, j, a in self.cons:
            src = _full(self.dim[s]) if i is None else ([] if i == 0 else U[s, i])
            tgt = [] if j == 0 else U[t, j]
            img = [w for w in _apply(self.mats[a], src) if any(w)]
            if img and not _contains(tgt, img):
                return False
        for v, st in self.steps.items():
            for j in range(1, len(st)):
                if not _contains(U[v, j + 1], U[v, j]):
                    return False
        return True


def _semantic_hints(spec: ResolutionSpec, mats, dims) -> dict:
    """Steps that propagation cannot pin down but the construction names explicitly."""
    if spec.quiver.case_tag is CaseTag.D4SinkCenter and spec.res_type is ResType.i:
        n = dims[2]
        ims = [_span([list(col) for col in zip(*m)], n) for m in mats]
        pair = []
        for a in range(3):
            for b in range(a + 1, 3):
                pair += _intersect(ims[a], ims[b], n)
        return {(2, 1): _span(pair, n)}
    return {}


def find_fiber_point(spec: ResolutionSpec, mats, seed: int = 0, tries: int = 60):
    """A point of the fiber over ``mats`` and whether it was forced."""
    fb = _Fiber(spec, mats)
    rng = random.Random(seed)
    L0, H0 = fb.start()
    for key, U in _semantic_hints(spec, mats, fb.dim).items():
        if key in L0:
            L0[key] = U
            H0[key] = list(U)
    if not fb.propagate(L0, H0):
        raise PointNotInOrbit("the flag constraints have no solution over this point")
    forced = not fb.unforced(L0)
    for _ in range(tries if not forced else 1):
        L = {k: list(v) for k, v in L0.items()}
        H = {k: list(v) for k, v in H0.items()}
        ok = True
        while ok and fb.unforced(L):
            v, j = fb.unforced(L)[0]
            k = fb.k(v, j)
            U = list(L[v, j])
            while linalg.rank(U) < k:
                U = _span(U + [[sum(rng.randint(-9, 9) * h[c] for h in H[v, j]) for c in range(fb.dim[v])]], fb.dim[v])
            L[v, j] = U
            H[v, j] = list(U)
            ok = fb.propagate(L, H)
        if ok and fb.satisfied(L):
            return fb, L, forced
    raise PointNotInOrbit("no point of the fiber found")


def _tangent_dim(fb: _Fiber, U) -> int:
    """Zariski tangent dimension of the fiber at the flag point U."""
    offsets, off = {}, 0
    for (v, j), vecs in U.items():
        n, k = fb.dim[v], fb.k(v, j)
        offsets[v, j] = off
        off += n * k
    rows = []

    def basis(v, j):
        if j is None:
            return _full(fb.dim[v])
        if j == 0:
            return []
        return _span(U[v, j], fb.dim[v])

    def add(psi, s_key, t_key, s_vecs, t_vecs, ns, nt):
        # psi(B_s + eps X_s) ⊂ span(B_t + eps X_t) to first order
        ks, kt = len(s_vecs), len(t_vecs)
        forms = _ann(t_vecs, nt)
        if not forms or ks == 0:
            return
        images = _apply(psi, s_vecs)
        Bt = [list(r) for r in zip(*t_vecs)] if kt else []
        M = []
        for col in images:
            sol = linalg.solve(Bt, col) if kt else []
            M.append(sol)
        for a in forms:
            apsi = [sum(a[r] * psi[r][q] for r in range(nt)) for q in range(ns)]
            for c in range(ks):
                row = [Fraction(0)] * off
                if s_key is not None:
                    o = offsets[s_key]
                    for q in range(ns):
                        row[o + q * ks + c] += apsi[q]
                if t_key is not None:
                    o = offsets[t_key]
                    for r in range(nt):
                        for l in range(kt):
                            row[o + r * kt + l] -= a[r] * M[c][l]
                if any(row):
                    rows.append(row)

    # rewrite U with fixed bases so the unknown layout matches the basis
    U = {key: basis(*key) for key in U}
    for s, i, t, j, a in fb.cons:
        ns, nt = fb.dim[s], fb.dim[t]
        s_key = (s, i) if i not in (None, 0) else None
        t_key = (t, j) if j not in (None, 0) else None
        s_vecs = _full(ns) if i is None else ([] if i == 0 else U[s, i])
        t_vecs = [] if j == 0 else U[t, j]
        add(fb.mats[a], s_key, t_key, s_vecs, t_vecs, ns, nt)
    for v, st in fb.steps.items():
        n = fb.dim[v]
        ident = _full(n)
        for j in range(1, len(st)):
            add(ident, (v, j), (v, j + 1), U[v, j], U[v, j + 1], n, n)
    gauge = sum(fb.k(v, j) ** 2 for (v, j) in U)
    rk = linalg.rank(rows) if rows else 0
    return off - rk - gauge


def resolution_fiber(spec: ResolutionSpec, mats, seed: int = 0) -> FiberResult:
    fb, U, forced = find_fiber_point(spec, mats, seed)
    return FiberResult(_tangent_dim(fb, U), forced, U)


def resolution_fiber_check(spec: ResolutionSpec, mats, seed: int = 0) -> int:
    """Dimension of the fiber of the collapsing over ``mats`` at a point of it.

    Computed as the Zariski tangent dimension at a fiber point; 0 means the
    fiber is a reduced point (fibers of these collapsings are connected).
    Raises PointNotInOrbit when ``mats`` is outside the resolved closure.
    """
    if spec.inv is not None:
        d = spec.d
        try:
            big = invariants_to_decomposition(spec.quiver, d, spec.inv)
            if not degeneration_leq(spec.quiver, identify_orbit(spec.quiver, d, mats), big):
                raise PointNotInOrbit("point is not in the orbit closure resolved by this spec")
        except PartialInvariants:
            pass
    return resolution_fiber(spec, mats, seed).tangent_dim


def dense_point(spec: ResolutionSpec, seed: int = 0):
    """A random point of the orbit resolved by ``spec``."""
    dec = invariants_to_decomposition(spec.quiver, spec.d, spec.inv)
    return random_conjugate(spec.quiver, spec.d, canonical_representative(spec.quiver, dec), random.Random(seed))


# ---------------------------------------------------------------- sweeps

# (case, smallest n, largest n) of every case with a crepancy proposition
PROPOSITION_CASES = (
    (CaseTag.A2, 2, 2),
    (CaseTag.A3SinkCenter, 3, 3),
    (CaseTag.A3SourceCenter, 3, 3),
    (CaseTag.A3OneWay, 3, 3),
    (CaseTag.AnOneWay, 4, 7),
    (CaseTag.A2mSourceSink, 4, 6),
    (CaseTag.A2mp1TypeI, 5, 7),
    (CaseTag.A2mp1TypeII, 5, 7),
    (CaseTag.D4SinkCenter, 4, 4),
)


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    mismatches: list = field(default_factory=list)
    per_case: dict = field(default_factory=dict)  # secondary counts, keyed by case tag

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {len(self.mismatches)} mismatches"


def _dims(n: int, dmax: int):
    import itertools

    return itertools.product(range(dmax + 1), repeat=n)


def _res_types(quiver: Quiver, d, inv):
    from .resolutions import default_res_type

    if quiver.case_tag is CaseTag.D4SinkCenter:
        return [ResType.i, ResType.ii, ResType.iii]
    if quiver.case_tag is CaseTag.A3SinkCenter:
        return [ResType.i, ResType.ii, ResType.iii, ResType.iv, ResType.v]
    if quiver.case_tag is CaseTag.A3SourceCenter:
        return [ResType.i, ResType.ii, ResType.ii_mirror]
    if quiver.case_tag is CaseTag.A3OneWay:
        return [ResType.i, ResType.ii]
    return [default_res_type(quiver, d, inv)]


def covered_resolutions(dmax_small: int = 5, n_max: int = 7, dmax_long: int = 3, cases=PROPOSITION_CASES):
    """Every (quiver, d, orbit, type) with a constructed resolution.

    A_2, A_3 and D_4 use d_i <= dmax_small; the longer A_n families use d_i <= dmax_long.
    """
    from .core import enumerate_family
    from .errors import NoResolutionRule
    from .resolutions import _resolution

    for tag, n_lo, n_hi in cases:
        for n in range(n_lo, min(n_hi, n_max) + 1):
            try:
                q = Quiver.from_case(tag, n)
            except Exception:
                continue
            dmax = dmax_small if n <= 4 and tag not in (CaseTag.AnOneWay, CaseTag.A2mSourceSink) else dmax_long
            for d in _dims(n, dmax):
                for dec, inv in enumerate_family(q, d):
                    for rt in _res_types(q, d, inv):
                        try:
                            spec = _resolution(q, d, inv, rt)
                        except NoResolutionRule:
                            continue
                        yield q, d, dec, inv, rt, spec


def sweep_propositions(**kw) -> SweepResult:
    """closed_form_crepant == is_crepant on every constructed resolution."""
    from .resolutions import closed_form_crepant, is_crepant

    res = SweepResult("crepancy propositions")
    for q, d, dec, inv, rt, spec in covered_resolutions(**kw):
        res.checked += 1
        if closed_form_crepant(q, d, inv, rt) != is_crepant(spec):
            res.mismatches.append((q.case_tag.value, d, inv.as_dict(), rt.value))
    return res


TABLE_CASES = tuple(c for c in PROPOSITION_CASES if c[1] <= 4 and c[0] not in (CaseTag.AnOneWay, CaseTag.A2mSourceSink))


def sweep_codimensions(numeric_dmax: int = 5, cases=TABLE_CASES, **kw) -> SweepResult:
    """Table formula == Ext codimension == tangent-map codimension.

    Every crepant row with a closed form gets all three counts. Other orbits
    get the numeric check when all d_i <= numeric_dmax.
    """
    from .core import orbit_codim
    from .odl import table_codim
    from .resolutions import closed_form_crepant

    res = SweepResult("codimension triple")
    numeric = {}

    def num(q, d, dec):
        key = (q, d, dec)
        if key not in numeric:
            numeric[key] = q.rep_dim(d) - orbit_dim_numeric(q, canonical_representative(q, dec), d)
        return numeric[key]

    for q, d, dec, inv, rt, spec in covered_resolutions(cases=cases, **kw):
        ext = orbit_codim(q, d, dec)
        tab = None
        if closed_form_crepant(q, d, inv, rt):
            try:
                tab = table_codim(q, d, inv, rt)
            except UnsupportedCase:
                pass
        if tab is None and max(d, default=0) > numeric_dmax:
            continue
        res.checked += 1
        n = num(q, d, dec)
        if n != ext or tab not in (None, ext):
            res.mismatches.append((q.case_tag.value, d, inv.as_dict(), rt.value, tab, ext, n))
    return res


def sweep_birationality(fiber_seed: int = 0, fiber_dmax: int = 3, fiber_nmax: int = 5, **kw) -> SweepResult:
    """total_space_dim == dim R_d - codim of the rank locus everywhere; a reduced
    point over a dense-orbit point whenever all d_i <= fiber_dmax and n <= fiber_nmax.
    ``per_case`` counts the fiber checks."""
    from .core import locus_codim
    from .resolutions import total_space_dim

    res = SweepResult("birationality")
    for k, (q, d, dec, inv, rt, spec) in enumerate(covered_resolutions(**kw)):
        res.checked += 1
        if total_space_dim(spec) != q.rep_dim(d) - locus_codim(q, d, inv):
            res.mismatches.append(("dimension", q.case_tag.value, d, inv.as_dict(), rt.value))
            continue
        if max(d, default=0) > fiber_dmax or q.n > fiber_nmax:
            continue
        try:
            f = resolution_fiber(spec, dense_point(spec, fiber_seed + k), fiber_seed + k)
        except PointNotInOrbit as e:
            res.mismatches.append(("no fiber point", q.case_tag.value, d, inv.as_dict(), rt.value, str(e)))
            continue
        res.per_case[q.case_tag.value] = res.per_case.get(q.case_tag.value, 0) + 1
        if f.tangent_dim != 0:
            res.mismatches.append(("fiber", q.case_tag.value, d, inv.as_dict(), rt.value, f.tangent_dim))
    return res


def sweep_closure_order(dmax: int = 3) -> SweepResult:
    """Rank-inequality closure test == Hom order, all orbit pairs of the A_3 cases."""
    from .core import enumerate_family

    res = SweepResult("closure order (A3)")
    for tag in (CaseTag.A3SinkCenter, CaseTag.A3SourceCenter, CaseTag.A3OneWay):
        q = Quiver.from_case(tag, 3)
        for d in _dims(3, dmax):
            fam = enumerate_family(q, d)
            for da, ia in fam:
                for db, ib in fam:
                    res.checked += 1
                    if in_closure(q, d, ia, ib) != degeneration_leq(q, da, db):
                        res.mismatches.append((tag.value, d, ia.as_dict(), ib.as_dict()))
    return res


def sweep_degenerations(trials: int = 100, seed: int = 0, dmax: int = 3) -> SweepResult:
    """Sampled one-parameter limits and pencils never leave the predicted closure."""
    import random as _r

    from .core import enumerate_family

    res = SweepResult(f"degeneration paths ({trials} trials per case)")
    for tag, n in ((CaseTag.A3SinkCenter, 3), (CaseTag.A3SourceCenter, 3), (CaseTag.A3OneWay, 3), (CaseTag.D4SinkCenter, 4)):
        q = Quiver.from_case(tag, n)
        rng = _r.Random(f"{seed}/{tag.value}")
        pool = [(d, dec) for d in _dims(n, dmax if n == 3 else 2) for dec, _ in enumerate_family(q, d)]
        for t in range(trials):
            d, dec = pool[rng.randrange(len(pool))]
            rep = degeneration_path_report(q, d, dec, trials=1, seed=rng.randrange(10**9))
            res.checked += rep.limits_checked + rep.pencils_checked
            res.mismatches.extend(rep.counterexamples)
    return res
