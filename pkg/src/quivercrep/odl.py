"""Orbital degeneracy loci: codimension, canonical class, singular locus, invariants.

Given a variety X, bundles E_v of ranks d_v and a general section s of
⊕ Hom(E_s, E_t), the locus D_Y(s) is where s lands in the orbit closure Y.
Its resolution is the zero locus Z(s̃) of the induced section of
Q_W = ⊕ Hom(E_s, E_t) / W on the relative flag bundle F(E_•) → X.

The closed-form tables (codimension, canonical class, singular locus bound)
are implemented verbatim in ``table_*`` functions.  The canonical class is
also derived directly from the relative resolution, and the two are compared
in the tests.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import bundles as bx
from . import chow
from .bundles import Bundle, FlagFactor, PicardVector, Scene
from .core import CaseTag, OrbitInvariants, Quiver
from .errors import (
    DimensionMismatch,
    ExpectedDimensionNegative,
    NotCrepant,
    UnsupportedCase,
)
from .resolutions import (
    ResType,
    ResolutionSpec,
    closed_form_crepant,
    contraction_advisory,
    default_res_type,
    resolution_for_orbit,
)


def bundle_name(v: int) -> str:
    return f"E{v}"


# ---------------------------------------------------------------- tables

_MIRROR_SINK = {ResType.iv: ResType.ii, ResType.v: ResType.iii}


def _mirror_sink(d, inv):
    d1, d2, d3 = d
    return (d3, d2, d1), {"r1": inv["r2"], "r2": inv["r1"], "p1": inv["p1"]}


def _mirror_source(d, inv):
    d1, d2, d3 = d
    return (d3, d2, d1), {"k1": inv["k2"], "k2": inv["k1"], "q1": inv["q1"]}


def _swap13(exps: dict[int, int]) -> dict[int, int]:
    return {{1: 3, 3: 1}.get(v, v): e for v, e in exps.items()}


def _rt(quiver, d, inv, res_type) -> ResType:
    return default_res_type(quiver, d, inv) if res_type is None else ResType(res_type)


def _table(quiver: Quiver, d, inv: OrbitInvariants, res_type, which: str):
    """Row ``which`` ∈ {codim, sing, K} of the table covering this case."""
    tag = quiver.case_tag
    rt = _rt(quiver, d, inv, res_type)
    g = inv.get
    d = tuple(d)
    if tag is CaseTag.A2:
        d1, d2 = d
        r = g("r1")
        return {
            "codim": (d1 - r) * (d2 - r),
            "sing": d1 + d2 - 2 * r + 1,
            "K": {1: -(d1 - r), 2: d1 - r},
        }[which]
    if tag is CaseTag.A3SinkCenter:
        if rt in _MIRROR_SINK:
            md, mi = _mirror_sink(d, inv)
            out = _sink_row(md, mi, _MIRROR_SINK[rt], which)
            return _swap13(out) if which == "K" else out
        return _sink_row(d, {k: g(k) for k in ("r1", "r2", "p1")}, rt, which)
    if tag is CaseTag.A3SourceCenter:
        if rt is ResType.ii_mirror:
            md, mi = _mirror_source(d, inv)
            out = _source_row(md, mi, ResType.ii, which)
            return _swap13(out) if which == "K" else out
        return _source_row(d, {k: g(k) for k in ("k1", "k2", "q1")}, rt, which)
    if tag is CaseTag.A3OneWay:
        return _oneway_row(d, inv, rt, which)
    if tag is CaseTag.D4SinkCenter:
        if rt not in (ResType.ii, ResType.iii):
            raise UnsupportedCase("the D4 formulas cover types (ii) and (iii)")
        d1, d2, d3, d4 = d
        r1, r2, r3, x = g("r1"), g("r2"), g("r3"), g("x")
        return {
            "codim": r1 * r1 + r2 * r2 + r3 * r3 + x * x,
            "sing": min(d1 + x - 2 * r1 + 1, d2 + r1 + r2 + r3 - 2 * x + 1, d3 + x - 2 * r2 + 1, d4 + x - 2 * r3 + 1),
            "K": {1: r1 - d2, 2: 2 * x, 3: r2 - d2, 4: r3 - d2},
        }[which]
    raise UnsupportedCase(f"no closed-form table for {tag.value}")


def _sink_row(d, inv, rt, which):
    d1, d2, d3 = d
    r1, r2, p1 = inv["r1"], inv["r2"], inv["p1"]
    e1, e2, e3 = d1 - r1, d2 - p1, d3 - r2
    rows = {
        ResType.i: (
            e1 * e1 + e2 * e2 + e3 * e3 + e2 * (e1 + e3),
            min(2 * e1 + 1, 2 * e3 + 1, 2 * e2 + 1),
            {1: -r2, 2: p1, 3: -r1},
        ),
        ResType.ii: (
            e3 * e3 + e2 * e2 + e3 * e2,
            min(2 * e3 + 1, 2 * e2 + 1),
            {1: -d2 + p1, 2: d2 - r2, 3: -d2 + r2},
        ),
        ResType.iii: (
            e2 * e2,
            2 * e2 + 1,
            {1: -d2 + p1, 2: d2 - p1, 3: -d2 + p1},
        ),
    }
    if rt not in rows:
        raise UnsupportedCase(f"no table row for type {rt.value}")
    return dict(zip(("codim", "sing", "K"), rows[rt]))[which]


def _source_row(d, inv, rt, which):
    d1, d2, d3 = d
    k1, k2, q1 = inv["k1"], inv["k2"], inv["q1"]
    e1, e2 = d2 - k1, d2 - k2
    rows = {
        ResType.i: (
            e1 * e1 + e2 * e2 + q1 * q1 - q1 * (e1 + e2),
            min(2 * (e1 - q1) + 1, 2 * (e2 - q1) + 1, 2 * q1 + 1),
            {1: d2 - k2, 2: -d2 + q1, 3: d2 - k1},
        ),
        # sign of q1^2 and the E2 exponent corrected; the printed K is not
        # invariant under E_v -> E_v ⊗ L, which any K_{D/X} must be
        ResType.ii: (
            (d3 - e2) ** 2 + q1 * q1 + (d3 - e2) * q1,
            min(2 * (d3 - e2) + 1, 2 * q1 + 1),
            {1: q1, 2: -d1, 3: d1},
        ),
    }
    if rt not in rows:
        raise UnsupportedCase(f"no table row for type {rt.value}")
    return dict(zip(("codim", "sing", "K"), rows[rt]))[which]


def _oneway_row(d, inv, rt, which):
    d1, d2, d3 = d
    r1, k2, u1 = inv["r1"], inv["k2"], inv["u1"]
    e1, e2 = k2 - d1 + r1, d2 - u1
    c = d1 - r1
    rows = {
        ResType.i: (
            k2 * k2 + c * c,
            min(2 * c + 1, 2 * (d2 - d1) + 1, k2 + 1),
            {1: -k2, 3: k2},
        ),
        ResType.ii: (
            2 * c * c + e1 * e2 + c * (e1 + e2),
            2 * c + 1,
            {1: -d2 + r1, 3: k2},
        ),
    }
    if rt not in rows:
        raise UnsupportedCase(f"no table row for type {rt.value}")
    return dict(zip(("codim", "sing", "K"), rows[rt]))[which]


def table_codim(quiver, d, inv, res_type=None) -> int:
    """Codimension as printed in the closed-form tables."""
    return _table(quiver, d, inv, res_type, "codim")


def sing_codim_bound(quiver, d, inv, res_type=None) -> int:
    """Lower bound for the codimension of Sing(D) inside D."""
    return _table(quiver, d, inv, res_type, "sing")


def table_canonical(quiver, d, inv, res_type=None) -> dict[int, int]:
    """Printed K_{D/X} as exponents of det E_v."""
    return {v: e for v, e in _table(quiver, d, inv, res_type, "K").items() if e}


def odl_codim(quiver: Quiver, d, inv: OrbitInvariants, res_type=None) -> int:
    """codim_X D_Y(s) = codim of Y in R_d.

    Uses the table formula where the case proposition makes the resolution
    crepant (the regime the tables are derived in) and the Ext count of the
    largest orbit carrying these invariants elsewhere.
    """
    try:
        crepant = closed_form_crepant(quiver, d, inv, res_type)
    except UnsupportedCase:
        crepant = False
    if crepant:
        try:
            return table_codim(quiver, d, inv, res_type)
        except UnsupportedCase:
            pass
    from .core import invariants_to_decomposition, locus_codim

    invariants_to_decomposition(quiver, tuple(d), inv)  # feasibility
    return locus_codim(quiver, tuple(d), inv)


# ---------------------------------------------------------------- relative canonical class


@dataclass(frozen=True)
class CanonicalClass:
    """A line bundle ⊗_v det(E_v)^{e_v}."""

    exponents: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, exps: Mapping[int, int]) -> "CanonicalClass":
        return cls(tuple(sorted((v, e) for v, e in exps.items() if e)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def bundle(self) -> Bundle:
        parts = []
        for v, e in self.exponents:
            b = bx.det(bx.named(bundle_name(v)))
            b = b if e > 0 else bx.dual(b)
            parts.extend([b] * abs(e))
        if not parts:
            return bx.trivial(1, "K")
        out = parts[0]
        for p in parts[1:]:
            out = bx.tensor(out, p)
        return out

    def degree(self, bundles: Mapping[str, Bundle], base) -> int:
        """Plücker degree on a Grassmannian base."""
        sc = Scene(base=base, named=dict(bundles))
        vec = PicardVector()
        for v, e in self.exponents:
            vec = vec + e * bx.det_vector(bx.named(bundle_name(v)), sc)
        return vec[("h",)]

    def __str__(self):
        if not self.exponents:
            return "O"
        return " ⊗ ".join(f"det E{v}^{e}" if e != 1 else f"det E{v}" for v, e in self.exponents)


def relativize(spec: ResolutionSpec) -> tuple[FlagFactor, ...]:
    """Flag factors over the bundles E_v instead of fixed spaces."""
    return tuple(dataclasses.replace(f, ambient=bx.named(bundle_name(f.vertex))) for f in spec.factors)


def hom_total(quiver: Quiver) -> Bundle:
    return bx.direct_sum(
        *[bx.tensor(bx.dual(bx.named(bundle_name(s))), bx.named(bundle_name(t))) for s, t in quiver.arrows]
    )


def _reduce_degenerate(vec: PicardVector, factors: Mapping[int, FlagFactor]) -> PicardVector:
    """Rewrite slots of zero, full-rank and repeated steps through genuine ones."""
    out = PicardVector()
    for key, c in vec.items():
        if key[0] != "o":
            out = out + PicardVector.slot(key, c)
            continue
        _, v, j = key
        f = factors[v]
        s = f.steps[j - 1]
        if s == 0:
            continue
        if s == f.ambient_rank:
            # det U = -o and U is the whole ambient
            amb = PicardVector.slot(("E", bundle_name(v))) if f.ambient is not None else PicardVector()
            out = out - c * amb
            continue
        first = f.steps.index(s) + 1
        out = out + PicardVector.slot(("o", v, first), c)
    return out


def relative_canonical_vector(spec: ResolutionSpec) -> PicardVector:
    """K_{F/X} + det Hom - det W on the relative flag bundle, E's kept symbolic."""
    factors = relativize(spec)
    ranks = {bundle_name(v): bx.trivial(dv) for v, dv in zip(spec.quiver.vertices, spec.d)}
    scene = Scene(factors={f.vertex: f for f in factors}, named=ranks, symbolic_named=True)
    k_rel = PicardVector()
    for f in factors:
        k_rel = k_rel + bx.canonical_factor(f, scene)
    vec = k_rel + bx.det_vector(hom_total(spec.quiver), scene) - bx.det_vector(spec.bundle, scene)
    return _reduce_degenerate(vec, scene.factors)


def odl_canonical(quiver: Quiver, d, inv: OrbitInvariants, res_type=None, bundles=None) -> CanonicalClass:
    """K_{D/X} as a monomial in the det E_v; refuses non-crepant configurations."""
    rt = _rt(quiver, d, inv, res_type)
    if not closed_form_crepant(quiver, d, inv, rt):
        raise NotCrepant("the resolution of this orbit closure is not crepant; K_D is not a pullback")
    spec = resolution_for_orbit(quiver, d, inv, rt)
    vec = relative_canonical_vector(spec)
    if vec.flag_part():
        raise NotCrepant(f"flag classes survive in K_Z: {vec}")
    exps = {}
    for v in quiver.vertices:
        e = vec[("E", bundle_name(v))]
        if e:
            exps[v] = e
    return CanonicalClass.of(exps)


# ---------------------------------------------------------------- configs and reports


@dataclass(frozen=True)
class ODLConfig:
    quiver: Quiver
    d: tuple[int, ...]
    inv: OrbitInvariants
    bundles: tuple[tuple[str, Bundle], ...]
    base: tuple[int, int] | None = None
    cuts: tuple[Bundle, ...] = ()
    res_type: ResType | None = None
    name: str = ""

    @property
    def resolved_type(self) -> ResType:
        return _rt(self.quiver, self.d, self.inv, self.res_type)

    def named(self) -> dict[str, Bundle]:
        return dict(self.bundles)

    def base_scene(self) -> Scene:
        return Scene(base=self.base, named=self.named())

    @property
    def dim_x(self) -> int:
        k, n = self.base or (0, 0)
        sc = self.base_scene()
        return k * (n - k) - sum(bx.rank(c, sc) for c in self.cuts)

    def canonical_x(self) -> int:
        """K_X as a multiple of the Plücker class (adjunction)."""
        if self.base is None:
            return 0
        sc = self.base_scene()
        return -self.base[1] + sum(bx.det_vector(c, sc)[("h",)] for c in self.cuts)

    def check(self):
        sc = self.base_scene()
        for v, dv in zip(self.quiver.vertices, self.d):
            name = bundle_name(v)
            if name not in sc.named:
                raise DimensionMismatch(f"no bundle {name} given")
            r = bx.rank(sc.named[name], sc)
            if r != dv:
                raise DimensionMismatch(f"rank {name} = {r} but d_{v} = {dv}")

    def variety(self) -> chow.VarietySpec:
        """The tower carrying Z(s̃): X, then F(E_•) over it, cut by Q_W."""
        self.check()
        spec = resolution_for_orbit(self.quiver, self.d, self.inv, self.resolved_type)
        framed = tuple((nm, bx.frame_summands(b, nm)) for nm, b in self.bundles)
        return chow.VarietySpec(
            base=self.base,
            cuts=tuple(self.cuts),
            fiber_flags=relativize(spec),
            top_cut=bx.difference(hom_total(self.quiver), spec.bundle),
            named=framed,
        )


@dataclass
class ODLReport:
    name: str
    res_type: str
    resolution: dict
    dim_x: int
    codim_x: int
    dim_d: int
    crepant: bool
    canonical_rel: str | None
    canonical_rel_degree: int | None
    canonical_x_degree: int | None
    canonical_total_trivial: bool | None
    sing_codim_bound: int | None
    generically_smooth: bool | None
    contraction: dict | None
    numeric: dict[str, int] = field(default_factory=dict)
    fixed_point_count: int | None = None
    seed: int | None = None
    wall_time: float | None = None
    caveats: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    def to_table(self) -> str:
        rows = [
            ("configuration", self.name),
            ("resolution type", self.res_type),
            ("resolution base", ", ".join(self.resolution.get("base", [])) or "point"),
            ("W", self.resolution.get("W", "")),
            ("dim X", self.dim_x),
            ("codim_X D", self.codim_x),
            ("dim D", self.dim_d),
            ("crepant resolution", self.crepant),
            ("K_{D/X}", self.canonical_rel if self.canonical_rel is not None else "refused (not crepant)"),
        ]
        if self.canonical_rel_degree is not None:
            rows.append(("K_{D/X} on the base", f"O({self.canonical_rel_degree})"))
            rows.append(("K_X", f"O({self.canonical_x_degree})"))
            rows.append(("K_D trivial", self.canonical_total_trivial))
        if self.sing_codim_bound is not None:
            s = f">= {self.sing_codim_bound}"
            if self.generically_smooth:
                s += " (D smooth for general s)"
            rows.append(("codim Sing D", s))
        for k, v in self.numeric.items():
            rows.append((f"{k} of Z(s~)", v))
        if self.fixed_point_count is not None:
            rows.append(("fixed points", self.fixed_point_count))
        width = max(len(str(k)) for k, _ in rows)
        lines = [f"{str(k).ljust(width)}  {v}" for k, v in rows]
        lines += [f"note: {c}" for c in self.caveats]
        return "\n".join(lines)


def odl_invariants(
    config: ODLConfig,
    requests: Sequence[str] = (),
    seed: int = 0,
    threads: int = 1,
    progress: Callable[[int], None] | None = None,
) -> ODLReport:
    """Full report: bookkeeping, canonical class, and requested numbers of Z(s̃)."""
    config.check()
    q, d, inv = config.quiver, tuple(config.d), config.inv
    rt = config.resolved_type
    spec = resolution_for_orbit(q, d, inv, rt)
    codim = odl_codim(q, d, inv, rt)
    dim_d = config.dim_x - codim
    if dim_d < 0:
        raise ExpectedDimensionNegative(f"codim {codim} exceeds dim X = {config.dim_x}")
    caveats = ["global generation of the Hom bundles is assumed, not checked"]
    try:
        crepant = closed_form_crepant(q, d, inv, rt)
    except UnsupportedCase:
        crepant = False
    k_rel = k_deg = k_x = None
    trivial = None
    if crepant:
        kc = odl_canonical(q, d, inv, rt)
        k_rel = str(kc)
        if config.base is not None:
            k_deg = kc.degree(config.named(), config.base)
            k_x = config.canonical_x()
            trivial = k_deg + k_x == 0
    else:
        caveats.append("resolution not crepant: canonical class not reported")
    try:
        sing = sing_codim_bound(q, d, inv, rt)
    except UnsupportedCase:
        sing = None
    # dim X + dim F - rank Q_W; equals dim D when the collapsing is birational
    z_dim = config.dim_x + sum(f.dim for f in spec.factors) - (q.rep_dim(d) - spec.bundle_rank())
    if z_dim != dim_d:
        caveats.append(f"dim Z(s~) = {z_dim} differs from dim D = {dim_d}")
    report = ODLReport(
        name=config.name,
        res_type=rt.value,
        resolution=spec.describe(),
        dim_x=config.dim_x,
        codim_x=codim,
        dim_d=dim_d,
        crepant=crepant,
        canonical_rel=k_rel,
        canonical_rel_degree=k_deg,
        canonical_x_degree=k_x,
        canonical_total_trivial=trivial,
        sing_codim_bound=sing,
        generically_smooth=None if sing is None else sing > dim_d,
        contraction=contraction_advisory(spec),
        caveats=caveats,
    )
    if requests:
        if z_dim < 0:
            raise ExpectedDimensionNegative(f"expected dimension {z_dim} < 0")
        vs = config.variety()
        if vs.dim != z_dim:
            raise AssertionError(f"tower dimension {vs.dim} differs from {z_dim}")
        if not crepant:
            caveats.append("numbers are those of the resolution Z(s~), which is not crepant here")
        t0 = time.perf_counter()
        values, count = chow.standard_quantities(vs, requests, seed=seed, threads=threads, progress=progress)
        report.numeric = values
        report.fixed_point_count = count
        report.seed = seed
        report.wall_time = round(time.perf_counter() - t0, 3)
    return report
