"""Kempf collapsings (W, F) resolving orbit closures, and their crepancy.

A resolution is stored as a product of flag factors (one per vertex, possibly
with no steps) together with, for every arrow ``s -> t``, a chain of
constraints ``phi(U_{s,i}) ⊂ U_{t,j}``.  The bundle W is read off from the
chains as the graded sum of ``(U_{s,i}/U_{s,i'})^* ⊗ U_{t,j}``.  Determinants
and canonical classes are computed from these expressions, never copied from
a table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import bundles as bx
from .bundles import Bundle, FlagFactor, PicardVector, Scene
from .core import CaseTag, OrbitInvariants, Quiver, invariants_to_decomposition
from .errors import InfeasibleMonomial, NoResolutionRule, UnsupportedCase

Step = "int | None"  # 0 = zero subspace, None = whole space


class ResType(str, Enum):
    i = "i"
    ii = "ii"
    iii = "iii"
    iv = "iv"
    v = "v"
    ii_mirror = "ii'"
    monomial = "monomial"
    single = "single"  # the one display of an A_n family or of A_2


# ---------------------------------------------------------------- monomials


@dataclass(frozen=True)
class Monomial:
    """Sequence of vertices with subquotient dimensions.

    Read bottom-up: the chain 0 = G_0 ⊂ G_1 ⊂ ... ⊂ G_tau ⊂ V has
    G_k / G_{k-1} of dimension ``a_vec[k-1]`` inside ``V_{s_vec[k-1]}``.
    Whatever is left of each V_s sits on top implicitly.
    """

    s_vec: tuple[int, ...]
    a_vec: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s_vec", tuple(self.s_vec))
        object.__setattr__(self, "a_vec", tuple(int(a) for a in self.a_vec))
        if len(self.s_vec) != len(self.a_vec):
            raise InfeasibleMonomial("s_vec and a_vec differ in length")
        if any(a < 0 for a in self.a_vec):
            raise InfeasibleMonomial("negative subquotient dimension")

    @classmethod
    def from_cumulative(cls, s_vec: Sequence[int], dims: Sequence[int]) -> "Monomial":
        """Build from the dimension of G_k ∩ V_{s_k} at each step instead of the jump."""
        seen: dict[int, int] = {}
        a = []
        for s, x in zip(s_vec, dims):
            prev = seen.get(s, 0)
            if x < prev:
                raise InfeasibleMonomial("cumulative dimensions must not decrease")
            a.append(x - prev)
            seen[s] = x
        return cls(tuple(s_vec), tuple(a))

    def cumulative(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for s, a in zip(self.s_vec, self.a_vec):
            lst = out.setdefault(s, [])
            lst.append((lst[-1] if lst else 0) + a)
        return out


def flag_of_monomial(quiver: Quiver, d: Sequence[int], m: Monomial) -> list[FlagFactor]:
    """Proper flag factors of the monomial (full-rank and zero steps dropped)."""
    return [f.normalized() for f in _formal_flags(quiver, d, m).values() if f.normalized().steps]


def _formal_flags(quiver: Quiver, d: Sequence[int], m: Monomial) -> dict[int, FlagFactor]:
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    cum = m.cumulative()
    out = {}
    for v in quiver.vertices:
        steps = cum.get(v, [])
        if steps and steps[-1] > d[pos[v]]:
            raise InfeasibleMonomial(f"steps {steps} exceed dimension {d[pos[v]]} at vertex {v}")
        out[v] = FlagFactor(v, d[pos[v]], tuple(steps))
    for v in cum:
        if v not in pos:
            raise InfeasibleMonomial(f"unknown vertex {v}")
    return out


def monomial_bundle(quiver: Quiver, d: Sequence[int], m: Monomial) -> "ResolutionSpec":
    """(F, W) of a monomial: representations preserving every G_k."""
    flags = _formal_flags(quiver, d, m)
    counts = {v: 0 for v in quiver.vertices}
    # at position k, vertex s has used counts[s] steps
    history = [dict(counts)]
    for s in m.s_vec:
        counts[s] += 1
        history.append(dict(counts))
    chains = []
    for s, t in quiver.arrows:
        chain = []
        for k in range(1, len(history)):
            i, j = history[k][s], history[k][t]
            if i != history[k - 1][s]:
                chain.append((i, j))
        chain.append((None, None))
        chains.append(((s, t), _clean_chain(chain)))
    return _make_spec(quiver, d, flags, chains, ResType.monomial, None, label=f"monomial {m.s_vec}")


def _clean_chain(chain):
    """Drop constraints implied by a later one with the same target."""
    out = []
    for i, j in chain:
        while out and out[-1][1] == j:
            out.pop()
        out.append((i, j))
    return tuple(out)


# ---------------------------------------------------------------- spec


@dataclass(frozen=True)
class ArrowChain:
    arrow: tuple[int, int]
    chain: tuple  # ((src_step, tgt_step), ...), last src_step is None


@dataclass(frozen=True)
class ResolutionSpec:
    quiver: Quiver
    d: tuple[int, ...]
    factors: tuple[FlagFactor, ...]  # formal factors, one per vertex
    chains: tuple[ArrowChain, ...]
    res_type: ResType
    inv: OrbitInvariants | None = None
    label: str = ""

    @property
    def base(self) -> list[FlagFactor]:
        """The genuine flag varieties (degenerate steps dropped)."""
        return [f.normalized() for f in self.factors if f.normalized().steps]

    @property
    def ambient_rep_dim(self) -> int:
        return self.quiver.rep_dim(self.d)

    def scene(self) -> Scene:
        return Scene(factors={f.vertex: f for f in self.factors})

    @property
    def bundle(self) -> Bundle:
        parts = []
        for ac in self.chains:
            parts.extend(_chain_summands(ac))
        return bx.direct_sum(*parts) if parts else bx.ZERO

    def summands(self) -> list[Bundle]:
        out = []
        for ac in self.chains:
            out.extend(_chain_summands(ac))
        return out

    def bundle_rank(self) -> int:
        return bx.rank(self.bundle, self.scene())

    def describe(self) -> dict:
        return {
            "type": self.res_type.value,
            "label": self.label,
            "base": [f.label() for f in self.base],
            "formal_base": [f.label() for f in self.factors if f.steps],
            "W": " ⊕ ".join(bx.render(b) for b in self.summands()) or "0",
            "rank_W": self.bundle_rank(),
            "dim_F": sum(f.dim for f in self.factors),
            "dim_R": self.ambient_rep_dim,
        }


def _chain_summands(ac: ArrowChain) -> list[Bundle]:
    s, t = ac.arrow
    out = []
    prev = 0
    for i, j in ac.chain:
        if j != 0 and i != prev:
            src = bx.quot(s, prev, i)
            tgt = bx.ambient(t) if j is None else bx.taut(t, j)
            out.append(bx.tensor(bx.dual(src), tgt))
        prev = i
    return out


def _make_spec(quiver, d, flags, chains, res_type, inv, label=""):
    factors = tuple(flags.get(v) or FlagFactor(v, d[quiver.index(v)], ()) for v in quiver.vertices)
    return ResolutionSpec(
        quiver,
        tuple(d),
        factors,
        tuple(ArrowChain(a, tuple(c)) for a, c in chains),
        res_type,
        inv,
        label,
    )


def total_space_dim(spec: ResolutionSpec) -> int:
    return sum(f.dim for f in spec.factors) + spec.bundle_rank()


def det_w(spec: ResolutionSpec) -> PicardVector:
    return bx.det_vector(spec.bundle, spec.scene())


def canonical_base(base: Sequence[FlagFactor], scene: Scene | None = None) -> PicardVector:
    scene = scene or Scene(factors={f.vertex: f for f in base})
    acc = PicardVector()
    for f in base:
        acc = acc + bx.canonical_factor(f, scene)
    return acc


def is_crepant(spec: ResolutionSpec, geometric: bool = False) -> bool:
    """det W == K_F on the flag slots.

    By default every formal step keeps its own slot, which is how the crepancy
    conditions of the case propositions are derived.  With ``geometric=True``
    slots of zero or full-rank steps are ignored, since those O(1)'s are trivial.
    """
    scene = spec.scene()
    diff = det_w(spec) - canonical_base(spec.factors, scene)
    if geometric:
        def live(k):
            f = scene.factors[k[1]]
            return 0 < f.steps[k[2] - 1] < f.ambient_rank
        diff = diff.restrict(live)
    return not diff.flag_part()


def contraction_advisory(spec: ResolutionSpec) -> dict | None:
    """Check for W = U ⊗ W' over Gr(a, v) x F': the contracted locus has codim w - a + 1.

    Returns None when W is not of that shape.
    """
    scene = spec.scene()
    targets = set()
    w = 0
    for b in spec.summands():
        src, tgt = b.args
        if tgt.kind != "taut":
            return None
        targets.add(tgt.args[0])
        w += bx.rank(src, scene)
    if len(targets) != 1:
        return None
    v = targets.pop()
    f = scene.factors[v]
    if len(f.steps) != 1:
        return None
    a = f.steps[0]
    return {"vertex": v, "a": a, "w": w, "codim_E": w - a + 1, "divisor_free": w > a}


# ---------------------------------------------------------------- case displays


def _gr(v, d, *steps):
    return FlagFactor(v, d, tuple(steps))


def _dim(quiver: Quiver, d, v):
    return d[quiver.index(v)]


def default_res_type(quiver: Quiver, d: Sequence[int], inv: OrbitInvariants) -> ResType:
    tag = quiver.case_tag
    g = inv.get
    if tag is CaseTag.A3SinkCenter:
        r1, r2, p1 = g("r1"), g("r2"), g("p1")
        d3, d1 = d[2], d[0]
        if p1 != r1 and p1 != r2:
            return ResType.i
        if p1 == r1:
            return ResType.ii if r2 != d3 else ResType.iii
        return ResType.iv if r1 != d1 else ResType.v
    if tag is CaseTag.A3SourceCenter:
        k1, k2, q1 = g("k1"), g("k2"), g("q1")
        if q1 != k1 and q1 != k2:
            return ResType.i
        return ResType.ii if q1 == k1 else ResType.ii_mirror
    if tag is CaseTag.A3OneWay:
        return ResType.i if g("u1") != g("k2") else ResType.ii
    if tag is CaseTag.D4SinkCenter:
        return ResType.i if _d4_strict(inv) and _d4_x_formula(inv) else ResType.iii
    return ResType.single


def _d4_x_formula(inv) -> bool:
    g = inv.get
    return g("x") == g("r1") + g("r2") + g("r3") - g("r12") - g("r13") - g("r23") + g("r123")


def _d4_strict(inv) -> bool:
    g = inv.get
    pairs = {"r12": ("r1", "r2"), "r13": ("r1", "r3"), "r23": ("r2", "r3")}
    for p, (a, b) in pairs.items():
        if not (g("r123") < g(p) < min(g(a), g(b))):
            return False
    return True


def d4_generic_invariants(r: Sequence[int], x: int) -> dict[str, int]:
    """Intersections of three generic subspaces of dims r inside a space of dim x."""
    r1, r2, r3 = r
    r12, r13, r23 = (max(0, a + b - x) for a, b in ((r1, r2), (r1, r3), (r2, r3)))
    return {
        "r1": r1, "r2": r2, "r3": r3,
        "r12": r12, "r13": r13, "r23": r23,
        "r123": max(0, r12 + r3 - x), "x": min(x, r1 + r2 + r3),
    }


def resolution_for_orbit(
    quiver: Quiver,
    d: Sequence[int],
    inv: OrbitInvariants,
    res_type: ResType | str | None = None,
) -> ResolutionSpec:
    """The case display resolving the closure of the orbit with invariants ``inv``."""
    d = tuple(d)
    tag = quiver.case_tag
    if inv.case is not tag:
        raise UnsupportedCase("invariants belong to another case")
    rt = default_res_type(quiver, d, inv) if res_type is None else ResType(res_type)
    builder = _BUILDERS.get(tag)
    if builder is None:
        raise UnsupportedCase(f"no resolution displays for {tag}")
    invariants_to_decomposition(quiver, d, inv)  # raises Infeasible
    return _resolution(quiver, d, inv, rt)


def _resolution(quiver, d, inv, rt) -> ResolutionSpec:
    # callers guarantee that inv is realised in R_d
    flags, chains, label = _BUILDERS[quiver.case_tag](quiver, d, inv, rt)
    return _make_spec(quiver, d, flags, chains, rt, inv, label)


def _need(cond: bool, msg: str):
    if not cond:
        raise NoResolutionRule(msg)


def _build_a2(q, d, inv, rt):
    r = inv["r1"]
    return {1: _gr(1, d[0], d[0] - r)}, [((1, 2), [(1, 0), (None, None)])], "determinantal"


def _build_a3_sink(q, d, inv, rt):
    d1, d2, d3 = d
    r1, r2, p1 = inv["r1"], inv["r2"], inv["p1"]
    ker = [(1, 0), (None, 1)]
    full = [(None, 1)]
    if rt is ResType.i:
        _need(p1 != r1 and p1 != r2, "type (i) needs p1 different from r1 and r2")
        flags = {1: _gr(1, d1, d1 - r1), 2: _gr(2, d2, p1), 3: _gr(3, d3, d3 - r2)}
        return flags, [((1, 2), ker), ((3, 2), ker)], "A3 sink-center, condition (i)"
    if rt is ResType.ii:
        _need(p1 == r1, "type (ii) needs p1 = r1")
        flags = {2: _gr(2, d2, r1), 3: _gr(3, d3, d3 - r2)}
        return flags, [((1, 2), full), ((3, 2), ker)], "A3 sink-center, condition (ii)"
    if rt is ResType.iii:
        _need(p1 == r1 and r2 == d3, "type (iii) needs p1 = r1 and r2 = d3")
        return {2: _gr(2, d2, r1)}, [((1, 2), full), ((3, 2), full)], "A3 sink-center, condition (iii)"
    if rt is ResType.iv:
        _need(p1 == r2, "type (iv) needs p1 = r2")
        flags = {2: _gr(2, d2, r2), 1: _gr(1, d1, d1 - r1)}
        return flags, [((1, 2), ker), ((3, 2), full)], "A3 sink-center, condition (iv)"
    if rt is ResType.v:
        _need(p1 == r2 and r1 == d1, "type (v) needs p1 = r2 and r1 = d1")
        return {2: _gr(2, d2, r2)}, [((1, 2), full), ((3, 2), full)], "A3 sink-center, condition (v)"
    raise NoResolutionRule(f"no type {rt.value} display for this case")


def _build_a3_source(q, d, inv, rt):
    d1, d2, d3 = d
    k1, k2, q1 = inv["k1"], inv["k2"], inv["q1"]
    into_step = [(1, 0), (None, 1)]
    into_all = [(1, 0), (None, None)]
    if rt is ResType.i:
        _need(q1 != k1 and q1 != k2, "type (i) needs q1 different from k1 and k2")
        flags = {1: _gr(1, d1, d2 - k1), 2: _gr(2, d2, q1), 3: _gr(3, d3, d2 - k2)}
        return flags, [((2, 1), into_step), ((2, 3), into_step)], "A3 source-center, type (i)"
    if rt is ResType.ii:
        _need(q1 == k1, "type (ii) needs q1 = k1")
        flags = {2: _gr(2, d2, q1), 3: _gr(3, d3, d2 - k2)}
        return flags, [((2, 1), into_all), ((2, 3), into_step)], "A3 source-center, type (ii)"
    if rt is ResType.ii_mirror:
        _need(q1 == k2, "mirrored type (ii) needs q1 = k2")
        flags = {2: _gr(2, d2, q1), 1: _gr(1, d1, d2 - k1)}
        return flags, [((2, 1), into_step), ((2, 3), into_all)], "A3 source-center, type (ii) mirrored"
    raise NoResolutionRule(f"no type {rt.value} display for this case")


def _build_a3_oneway(q, d, inv, rt):
    d1, d2, d3 = d
    r1, k2, u1 = inv["r1"], inv["k2"], inv["u1"]
    if rt is ResType.i:
        _need(u1 != k2, "type (i) needs u1 different from k2")
        flags = {1: _gr(1, d1, d1 - r1), 2: _gr(2, d2, k2, u1)}
        chains = [((1, 2), [(1, 0), (None, 2)]), ((2, 3), [(1, 0), (None, None)])]
        return flags, chains, "A3 one-way, type (i)"
    if rt is ResType.ii:
        _need(u1 == k2, "type (ii) needs u1 = k2")
        flags = {1: _gr(1, d1, d1 - r1), 2: _gr(2, d2, k2)}
        chains = [((1, 2), [(1, 0), (None, 1)]), ((2, 3), [(1, 0), (None, None)])]
        return flags, chains, "A3 one-way, type (ii)"
    raise NoResolutionRule(f"no type {rt.value} display for this case")


def _build_an_oneway(q, d, inv, rt):
    n = q.n
    k = {i: inv[f"k{i}"] for i in range(1, n)}
    t = {i: inv[f"t{i}"] for i in range(2, n)}
    for i in range(2, n):
        _need(t[i] != k[i], f"one-way display needs t{i} different from k{i}")
    flags = {1: _gr(1, d[0], k[1])}
    for i in range(2, n):
        flags[i] = _gr(i, d[i - 1], k[i], d[i - 2] - k[i - 1] + k[i] - t[i])
    chains = []
    for i in range(1, n - 1):
        chains.append(((i, i + 1), [(1, 0), (None, 2 if i + 1 < n else None)]))
    chains.append(((n - 1, n), [(1, 0), (None, None)]))
    return flags, chains, f"one-way A{n}"


def _build_source_sink(q, d, inv, rt):
    tag, n = q.case_tag, q.n
    m = n // 2
    D = lambda v: d[v - 1]  # noqa: E731
    r = lambda i: inv[f"r{i}"]  # noqa: E731
    p = lambda i: inv[f"p{i}"]  # noqa: E731
    qq = lambda i: inv[f"q{i}"]  # noqa: E731
    flags = {}
    chains = []
    if tag in (CaseTag.A2mSourceSink, CaseTag.A2mp1TypeI):
        npi = m - 1 if tag is CaseTag.A2mSourceSink else m
        for i in range(1, npi + 1):
            _need(p(i) not in (r(2 * i - 1), r(2 * i)), f"display needs p{i} different from r{2*i-1}, r{2*i}")
        for i in range(1, m):
            v = 2 * i + 1
            _need(
                qq(i) not in (D(v) - r(v), D(v) - r(2 * i)),
                f"display needs q{i} different from d{v}-r{v} and d{v}-r{2*i}",
            )
        flags[1] = _gr(1, D(1), D(1) - r(1))
        for i in range(1, npi + 1):
            flags[2 * i] = _gr(2 * i, D(2 * i), r(2 * i), p(i))
        for i in range(1, m):
            v = 2 * i + 1
            flags[v] = _gr(v, D(v), qq(i), D(v) - r(v))

        def ker(v):  # step index of Ker phi_{a_v} at the source v
            return 1 if v == 1 else 2

        for i in range(1, m):
            chains.append(((2 * i - 1, 2 * i), [(ker(2 * i - 1), 0), (None, 2)]))
            chains.append(((2 * i + 1, 2 * i), [(1, 0), (None, 1)]))
        if tag is CaseTag.A2mSourceSink:
            chains.append(((2 * m - 1, 2 * m), [(ker(2 * m - 1), 0), (None, None)]))
            label = f"source-sink A{n}"
        else:
            chains.append(((2 * m - 1, 2 * m), [(ker(2 * m - 1), 0), (None, 2)]))
            chains.append(((2 * m + 1, 2 * m), [(None, 1)]))
            label = f"source-sink A{n}, type I"
        return flags, chains, label
    # type II: even vertices are sources
    for i in range(1, m):
        _need(p(i) not in (r(2 * i + 1), r(2 * i)), f"display needs p{i} different from r{2*i+1}, r{2*i}")
    for i in range(1, m + 1):
        v = 2 * i
        _need(
            qq(i) not in (D(v) - r(2 * i - 1), D(v) - r(v)),
            f"display needs q{i} different from d{v}-r{2*i-1} and d{v}-r{v}",
        )
    flags[1] = _gr(1, D(1), r(1))
    for i in range(1, m + 1):
        v = 2 * i
        flags[v] = _gr(v, D(v), qq(i), D(v) - r(v))
    for i in range(1, m):
        v = 2 * i + 1
        flags[v] = _gr(v, D(v), r(v), p(i))
    for i in range(1, m):
        chains.append(((2 * i, 2 * i - 1), [(1, 0), (None, 1)]))
        chains.append(((2 * i, 2 * i + 1), [(2, 0), (None, 2)]))
    chains.append(((2 * m, 2 * m - 1), [(1, 0), (None, 1)]))
    chains.append(((2 * m, 2 * m + 1), [(2, 0), (None, None)]))
    return flags, chains, f"source-sink A{n}, type II"


def _build_d4(q, d, inv, rt):
    d1, d2, d3, d4 = d
    g = inv.get
    r1, r2, r3, x = g("r1"), g("r2"), g("r3"), g("x")
    r12, r13, r23, r123 = g("r12"), g("r13"), g("r23"), g("r123")
    if rt is ResType.i:
        _need(_d4_strict(inv), "type (i) needs strict inclusions between the U_i, U_ij, U_123")
        _need(_d4_x_formula(inv), "type (i) needs x given by inclusion-exclusion")
        flags = {
            1: _gr(1, d1, d1 - r1, d1 - r1 + r12 + r13 - r123),
            2: _gr(2, d2, r12 + r13 + r23 - 2 * r123),
            3: _gr(3, d3, d3 - r2, d3 - r2 + r12 + r23 - r123),
            4: _gr(4, d4, d4 - r3, d4 - r3 + r13 + r23 - r123),
        }
        chain = [(1, 0), (2, 1), (None, None)]
        return flags, [((s, 2), chain) for s in (1, 3, 4)], "D4, type (i)"
    generic = d4_generic_invariants((r1, r2, r3), x)
    _need(
        inv.as_dict() == generic,
        "types (ii)/(iii) resolve only the orbit where U_1, U_2, U_3 are generic inside their x-dimensional sum",
    )
    if rt is ResType.ii:
        flags = {2: _gr(2, d2, r1, x), 3: _gr(3, d3, d3 - r2), 4: _gr(4, d4, d4 - r3)}
        chains = [((1, 2), [(None, 1)]), ((3, 2), [(1, 0), (None, 2)]), ((4, 2), [(1, 0), (None, 2)])]
        return flags, chains, "D4, type (ii)"
    if rt is ResType.iii:
        flags = {
            1: _gr(1, d1, d1 - r1),
            2: _gr(2, d2, x),
            3: _gr(3, d3, d3 - r2),
            4: _gr(4, d4, d4 - r3),
        }
        chain = [(1, 0), (None, 1)]
        return flags, [((s, 2), chain) for s in (1, 3, 4)], "D4, type (iii)"
    raise NoResolutionRule(f"no type {rt.value} display for D4")


_BUILDERS = {
    CaseTag.A2: _build_a2,
    CaseTag.A3SinkCenter: _build_a3_sink,
    CaseTag.A3SourceCenter: _build_a3_source,
    CaseTag.A3OneWay: _build_a3_oneway,
    CaseTag.AnOneWay: _build_an_oneway,
    CaseTag.A2mSourceSink: _build_source_sink,
    CaseTag.A2mp1TypeI: _build_source_sink,
    CaseTag.A2mp1TypeII: _build_source_sink,
    CaseTag.D4SinkCenter: _build_d4,
}


# ---------------------------------------------------------------- closed forms


def closed_form_crepant(
    quiver: Quiver, d: Sequence[int], inv: OrbitInvariants, res_type: ResType | str | None = None
) -> bool:
    """Crepancy conditions of the case propositions, as equalities in (d, inv)."""
    tag = quiver.case_tag
    rt = default_res_type(quiver, d, inv) if res_type is None else ResType(res_type)
    g = inv.get
    n = quiver.n
    D = lambda v: d[v - 1]  # noqa: E731
    if tag is CaseTag.A2:
        return D(1) == D(2)
    if tag is CaseTag.A3SinkCenter:
        d1, d2, d3 = d
        r1, r2, p1 = g("r1"), g("r2"), g("p1")
        return {
            ResType.i: d1 == d3 == p1 and d2 == r1 + r2,
            ResType.ii: d3 == r1 == p1 and d2 == d1 + r2,
            ResType.iii: r1 == p1 and r2 == d3 and d2 == d1 + d3,
            ResType.iv: d1 == r2 == p1 and d2 == d3 + r1,
            ResType.v: r2 == p1 and r1 == d1 and d2 == d1 + d3,
        }[_only(rt, ResType.i, ResType.ii, ResType.iii, ResType.iv, ResType.v)]
    if tag is CaseTag.A3SourceCenter:
        d1, d2, d3 = d
        k1, k2, q1 = g("k1"), g("k2"), g("q1")
        return {
            ResType.i: d1 == d3 == d2 - q1 and k1 + k2 == d2,
            ResType.ii: q1 == k1 and d1 == k2 and d3 == d2 - k1,
            ResType.ii_mirror: q1 == k2 and d3 == k1 and d1 == d2 - k2,
        }[_only(rt, ResType.i, ResType.ii, ResType.ii_mirror)]
    if tag is CaseTag.A3OneWay:
        d1, d2, d3 = d
        r1, k2, u1 = g("r1"), g("k2"), g("u1")
        return {
            ResType.i: d1 == d3 == u1 and k2 == d2 - r1,
            ResType.ii: u1 == k2 and d1 == k2 and d2 == r1 + d3,
        }[_only(rt, ResType.i, ResType.ii)]
    if tag is CaseTag.AnOneWay:
        rs = {D(i) - g(f"k{i}") for i in range(1, n)}
        return len(rs) == 1 and all(D(1) == D(n) == D(i) - g(f"t{i}") for i in range(2, n))
    if tag in (CaseTag.A2mSourceSink, CaseTag.A2mp1TypeI, CaseTag.A2mp1TypeII):
        m = n // 2
        if tag is CaseTag.A2mSourceSink:
            ps, qs, rlim = range(1, m), range(1, m), 2 * m - 2
            qval = lambda i: D(2 * i + 1) - D(1)  # noqa: E731
        elif tag is CaseTag.A2mp1TypeI:
            ps, qs, rlim = range(1, m + 1), range(1, m), 2 * m - 1
            qval = lambda i: D(2 * i + 1) - D(1)  # noqa: E731
        else:
            ps, qs, rlim = range(1, m), range(1, m + 1), 2 * m - 1
            qval = lambda i: D(2 * i) - D(1)  # noqa: E731
        return (
            D(1) == D(n)
            and all(g(f"p{i}") == D(1) for i in ps)
            and all(g(f"q{i}") == qval(i) for i in qs)
            and all(g(f"r{i}") == D(i + 1) - g(f"r{i + 1}") for i in range(1, rlim + 1))
        )
    if tag is CaseTag.D4SinkCenter:
        if rt is ResType.i:
            return False
        _only(rt, ResType.ii, ResType.iii)
        d1, d2, d3, d4 = d
        x = g("x")
        return d2 == g("r1") + g("r2") + g("r3") and d1 == d3 == d4 == x
    raise UnsupportedCase(f"no crepancy proposition for {tag}")


def _only(rt, *allowed):
    if rt not in allowed:
        raise UnsupportedCase(f"no crepancy proposition for type {rt.value}")
    return rt


def citation(quiver: Quiver, res_type: ResType) -> str:
    tag = quiver.case_tag
    names = {
        CaseTag.A2: "determinantal resolution, crepant iff d1 = d2",
        CaseTag.A3SinkCenter: f"A3 sink-center Gorenstein condition ({res_type.value})",
        CaseTag.A3SourceCenter: f"A3 source-center crepancy, type ({res_type.value})",
        CaseTag.A3OneWay: f"A3 one-way crepancy, type ({res_type.value})",
        CaseTag.AnOneWay: "one-way A_n crepancy",
        CaseTag.A2mSourceSink: "source-sink A_2m crepancy",
        CaseTag.A2mp1TypeI: "source-sink A_2m+1 type I crepancy",
        CaseTag.A2mp1TypeII: "source-sink A_2m+1 type II crepancy",
        CaseTag.D4SinkCenter: f"D4 crepancy, type ({res_type.value})",
    }
    return names.get(tag, "none")
