"""Quiver combinatorics: roots, orbits, rank invariants, Hom spaces, closure order.

Vertices are labelled by positive integers and dimension vectors are tuples
aligned with ``Quiver.vertices``.  Arrow matrices have shape
``d[target] x d[source]`` and hold exact integers or fractions.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import (
    DimensionMismatch,
    Infeasible,
    PartialInvariants,
    UnsupportedCase,
    UnsupportedType,
)

DimVector = tuple[int, ...]
MatrixTuple = tuple[list, ...]


class CaseTag(str, Enum):
    A2 = "A2"
    A3SinkCenter = "A3SinkCenter"
    A3SourceCenter = "A3SourceCenter"
    A3OneWay = "A3OneWay"
    AnOneWay = "AnOneWay"
    A2mSourceSink = "A2mSourceSink"
    A2mp1TypeI = "A2mp1TypeI"
    A2mp1TypeII = "A2mp1TypeII"
    D4SinkCenter = "D4SinkCenter"
    Other = "Other"


def _case_arrows(tag: CaseTag, n: int) -> list[tuple[int, int]]:
    """The arrow list of the picture for ``tag`` on ``n`` vertices."""
    if tag is CaseTag.A2:
        return [(1, 2)]
    if tag is CaseTag.A3SinkCenter:
        return [(1, 2), (3, 2)]
    if tag is CaseTag.A3SourceCenter:
        return [(2, 1), (2, 3)]
    if tag in (CaseTag.A3OneWay, CaseTag.AnOneWay):
        return [(i, i + 1) for i in range(1, n)]
    if tag in (CaseTag.A2mSourceSink, CaseTag.A2mp1TypeI):
        # odd vertices are sources, even vertices sinks
        return [(i, i + 1) if i % 2 else (i + 1, i) for i in range(1, n)]
    if tag is CaseTag.A2mp1TypeII:
        return [(i + 1, i) if i % 2 else (i, i + 1) for i in range(1, n)]
    if tag is CaseTag.D4SinkCenter:
        return [(1, 2), (3, 2), (4, 2)]
    raise UnsupportedCase(f"no arrow picture for case {tag}")


def _case_size_ok(tag: CaseTag, n: int) -> bool:
    return {
        CaseTag.A2: n == 2,
        CaseTag.A3SinkCenter: n == 3,
        CaseTag.A3SourceCenter: n == 3,
        CaseTag.A3OneWay: n == 3,
        CaseTag.AnOneWay: n >= 2,
        CaseTag.A2mSourceSink: n >= 2 and n % 2 == 0,
        CaseTag.A2mp1TypeI: n >= 3 and n % 2 == 1,
        CaseTag.A2mp1TypeII: n >= 3 and n % 2 == 1,
        CaseTag.D4SinkCenter: n == 4,
    }.get(tag, True)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[tuple[int, int], ...]
    case_tag: CaseTag | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if self.case_tag is not None:
            object.__setattr__(self, "case_tag", CaseTag(self.case_tag))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise UnsupportedType("repeated vertex")
        for s, t in self.arrows:
            if s not in vs or t not in vs or s == t:
                raise UnsupportedType(f"bad arrow {(s, t)}")
        self.dynkin  # validates the underlying graph
        tag = self.case_tag
        if tag is not None and tag is not CaseTag.Other:
            n = len(self.vertices)
            if self.vertices != tuple(range(1, n + 1)) or not _case_size_ok(tag, n):
                raise UnsupportedCase(f"{tag.value} does not fit {n} vertices")
            if set(self.arrows) != set(_case_arrows(tag, n)):
                raise UnsupportedCase(f"arrow orientation does not match {tag.value}")

    @classmethod
    def from_case(cls, tag: CaseTag | str, n: int | None = None) -> "Quiver":
        tag = CaseTag(tag)
        if n is None:
            n = {CaseTag.A2: 2, CaseTag.D4SinkCenter: 4}.get(tag, 3)
        return cls(tuple(range(1, n + 1)), tuple(_case_arrows(tag, n)), tag)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: int) -> int:
        return self.vertices.index(v)

    def arrow_index(self, src: int, tgt: int) -> int:
        return self.arrows.index((src, tgt))

    @cached_property
    def dynkin(self) -> tuple[str, int]:
        """Dynkin type of the underlying graph, e.g. ``("A", 3)``."""
        n = len(self.vertices)
        edges = {frozenset(a) for a in self.arrows}
        if len(edges) != len(self.arrows) or len(self.arrows) != n - 1:
            raise UnsupportedType("underlying graph is not a tree")
        adj = {v: set() for v in self.vertices}
        for s, t in self.arrows:
            adj[s].add(t)
            adj[t].add(s)
        seen, stack = {self.vertices[0]}, [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise UnsupportedType("underlying graph is disconnected")
        degs = sorted(len(a) for a in adj.values())
        if n == 1 or degs[-1] <= 2:
            return ("A", n)
        if degs[-1] == 3 and degs.count(3) == 1:
            center = next(v for v in self.vertices if len(adj[v]) == 3)
            arms = []
            for start in adj[center]:
                length, prev, cur = 1, center, start
                while len(adj[cur]) == 2:
                    prev, cur = cur, next(w for w in adj[cur] if w != prev)
                    length += 1
                arms.append(length)
            if sorted(arms)[:2] == [1, 1]:
                return ("D", n)
        raise UnsupportedType("only quivers of type A_n and D_n are supported")

    def euler_form(self, d: Sequence[int], e: Sequence[int]) -> int:
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sum(x * y for x, y in zip(d, e)) - sum(
            d[pos[s]] * e[pos[t]] for s, t in self.arrows
        )

    def rep_dim(self, d: Sequence[int]) -> int:
        """dim R_d."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        return sum(d[pos[s]] * d[pos[t]] for s, t in self.arrows)

    def group_dim(self, d: Sequence[int]) -> int:
        return sum(x * x for x in d)


# ---------------------------------------------------------------- roots


@lru_cache(maxsize=None)
def positive_roots(quiver: Quiver) -> tuple[DimVector, ...]:
    """Positive roots in the simple-root basis, by closure under adding simples."""
    quiver.dynkin
    n = quiver.n
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    edges = [(pos[s], pos[t]) for s, t in quiver.arrows]

    def tits(v):
        return sum(x * x for x in v) - sum(v[i] * v[j] for i, j in edges)

    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                gamma = tuple(b + int(i == j) for j, b in enumerate(beta))
                if gamma not in found and tits(gamma) == 1:
                    found.add(gamma)
                    nxt.append(gamma)
        frontier = nxt
    return tuple(sorted(found, key=lambda r: (sum(r), tuple(-x for x in r))))


@lru_cache(maxsize=None)
def family_roots(quiver: Quiver) -> tuple[DimVector, ...]:
    """Roots supporting the orbits described by the rank invariants of the case.

    For the A_n families only intervals of length at most three are covered.
    """
    roots = positive_roots(quiver)
    if quiver.case_tag in (
        CaseTag.AnOneWay,
        CaseTag.A2mSourceSink,
        CaseTag.A2mp1TypeI,
        CaseTag.A2mp1TypeII,
    ):
        return tuple(r for r in roots if sum(r) <= 3)
    return roots


# ---------------------------------------------------------------- decompositions


@dataclass(frozen=True)
class Decomposition:
    """Multiplicities of indecomposables (keyed by their dimension vectors)."""

    terms: tuple[tuple[DimVector, int], ...] = ()

    def __post_init__(self):
        t = tuple(sorted((tuple(r), int(m)) for r, m in self.terms if m))
        if any(m < 0 for _, m in t):
            raise ValueError("negative multiplicity")
        object.__setattr__(self, "terms", t)

    @classmethod
    def of(cls, mapping: Mapping[Sequence[int], int]) -> "Decomposition":
        return cls(tuple((tuple(r), m) for r, m in mapping.items()))

    def as_dict(self) -> dict[DimVector, int]:
        return dict(self.terms)

    def dim_vector(self, n: int) -> DimVector:
        d = [0] * n
        for r, m in self.terms:
            for i, x in enumerate(r):
                d[i] += m * x
        return tuple(d)

    def __add__(self, other: "Decomposition") -> "Decomposition":
        acc = self.as_dict()
        for r, m in other.terms:
            acc[r] = acc.get(r, 0) + m
        return Decomposition.of(acc)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{m}*{r}" if m > 1 else f"{r}" for r, m in self.terms)


def enumerate_orbits(
    quiver: Quiver, d: Sequence[int], roots: Sequence[DimVector] | None = None
) -> list[Decomposition]:
    """All decompositions of ``d`` into positive roots (one per orbit in R_d)."""
    d = tuple(d)
    if len(d) != quiver.n:
        raise DimensionMismatch("dimension vector length differs from vertex count")
    roots = list(positive_roots(quiver) if roots is None else roots)
    # the first nonzero entry of what is left can only be filled by roots
    # whose support starts there; suffixes are memoized on what is left
    groups: dict[int, list[DimVector]] = {}
    for r in roots:
        groups.setdefault(next(j for j, x in enumerate(r) if x), []).append(r)
    memo: dict[tuple, list[tuple]] = {}

    def choices(group, k, need, rest, j):
        if need == 0:
            yield (), rest
            return
        if k == len(group):
            return
        r = group[k]
        cap = min(rest[i] // r[i] for i in range(len(r)) if r[i])
        for m in range(min(cap, need // r[j]), -1, -1):
            if m:
                nrest = tuple(x - m * y for x, y in zip(rest, r))
                for head, left in choices(group, k + 1, need - m * r[j], nrest, j):
                    yield ((r, m),) + head, left
            else:
                yield from choices(group, k + 1, need, rest, j)

    def suffixes(rest):
        if rest in memo:
            return memo[rest]
        j = next((i for i, x in enumerate(rest) if x), None)
        if j is None:
            out = [()]
        else:
            out = []
            for head, left in choices(groups.get(j, []), 0, rest[j], rest, j):
                out.extend(head + tail for tail in suffixes(left))
        memo[rest] = out
        return out

    if any(x < 0 for x in d):
        return []
    return [Decomposition(t) for t in suffixes(d)]


# ---------------------------------------------------------------- representatives


def _block_diag(blocks: list[list], rows: list[int], cols: list[int]) -> list:
    out = [[0] * sum(cols) for _ in range(sum(rows))]
    r0 = c0 = 0
    for b, nr, nc in zip(blocks, rows, cols):
        for i in range(nr):
            for j in range(nc):
                out[r0 + i][c0 + j] = b[i][j]
        r0 += nr
        c0 += nc
    return out


@lru_cache(maxsize=None)
def _root_representative(quiver: Quiver, root: DimVector) -> MatrixTuple:
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    mats = []
    kind, n = quiver.dynkin
    if max(root) > 2 or (max(root) == 2 and (kind, n) != ("D", 4)):
        raise UnsupportedType("explicit indecomposables are built for A_n and D_4 only")
    if max(root) <= 1:
        for s, t in quiver.arrows:
            ds, dt = root[pos[s]], root[pos[t]]
            mats.append([[1] * ds for _ in range(dt)] if ds and dt else [[0] * ds for _ in range(dt)])
        return tuple(mats)
    # D_4 root (1,2,1,1): three pairwise distinct lines in the 2-dim center
    lines = iter([(1, 0), (0, 1), (1, 1)])
    for s, t in quiver.arrows:
        a, b = next(lines)
        if root[pos[t]] == 2:
            mats.append([[a], [b]])
        else:
            mats.append([[-b, a]])
    return tuple(mats)


def canonical_representative(quiver: Quiver, dec: Decomposition) -> MatrixTuple:
    """Block direct sum of explicit 0/1 models of the indecomposable summands."""
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    summands = []
    for r, m in dec.terms:
        summands.extend([r] * m)
    mats = []
    for k, (s, t) in enumerate(quiver.arrows):
        blocks, rows, cols = [], [], []
        for r in summands:
            blocks.append(_root_representative(quiver, r)[k])
            rows.append(r[pos[t]])
            cols.append(r[pos[s]])
        mats.append(_block_diag(blocks, rows, cols))
    return tuple(mats)


def conjugate(quiver: Quiver, mats: MatrixTuple, g: Sequence[list]) -> MatrixTuple:
    """Action of ``g = (g_s)`` on a representation: phi_a -> g_t phi_a g_s^{-1}."""
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    inv = [linalg.inverse(x) if x else [] for x in g]
    out = []
    for (s, t), m in zip(quiver.arrows, mats):
        gs, gt = pos[s], pos[t]
        ncols = len(g[gs])
        if not m or not ncols:
            out.append([[0] * ncols for _ in range(len(g[gt]))])
            continue
        out.append(linalg.matmul(linalg.matmul(g[gt], m), inv[gs]))
    return tuple(out)


def random_conjugate(
    quiver: Quiver, d: Sequence[int], mats: MatrixTuple, rng: random.Random
) -> MatrixTuple:
    g = [linalg.random_invertible(x, rng) if x else [] for x in d]
    return conjugate(quiver, mats, g)


# ---------------------------------------------------------------- Hom spaces


def hom_dim_matrices(
    quiver: Quiver, dm: Sequence[int], m: MatrixTuple, dn: Sequence[int], n: MatrixTuple
) -> int:
    """dim Hom(M, N) from the commuting-square linear system."""
    pos = {v: i for i, v in enumerate(quiver.vertices)}
    offset, off = [], 0
    for i in range(quiver.n):
        offset.append(off)
        off += dn[i] * dm[i]
    nvars = off
    if nvars == 0:
        return 0

    def var(i, r, c):  # entry (r, c) of alpha_i : M_i -> N_i
        return offset[i] + r * dm[i] + c

    rows = []
    for (s, t), phi, psi in zip(quiver.arrows, m, n):
        i, j = pos[s], pos[t]
        # (alpha_t phi - psi alpha_s)[r][c] = 0 for r < dn[t], c < dm[s]
        for r in range(dn[j]):
            for c in range(dm[i]):
                row = [0] * nvars
                for k in range(dm[j]):
                    if phi[k][c]:
                        row[var(j, r, k)] += phi[k][c]
                for k in range(dn[i]):
                    if psi[r][k]:
                        row[var(i, k, c)] -= psi[r][k]
                if any(row):
                    rows.append(row)
    return nvars - linalg.rank(rows)


@lru_cache(maxsize=None)
def _root_hom_table(quiver: Quiver) -> dict[tuple[DimVector, DimVector], int]:
    roots = positive_roots(quiver)
    table = {}
    for x in roots:
        for y in roots:
            table[x, y] = hom_dim_matrices(
                quiver, x, _root_representative(quiver, x), y, _root_representative(quiver, y)
            )
    return table


def hom_dim(quiver: Quiver, m: Decomposition, n: Decomposition) -> int:
    """dim Hom(M, N); bilinear in the multiplicities."""
    table = _root_hom_table(quiver)
    return sum(a * b * table[x, y] for x, a in m.terms for y, b in n.terms)


def orbit_codim(quiver: Quiver, d: Sequence[int], dec: Decomposition) -> int:
    if dec.dim_vector(quiver.n) != tuple(d):
        raise DimensionMismatch("decomposition does not sum to d")
    return hom_dim(quiver, dec, dec) - quiver.euler_form(d, d)


def locus_codim(quiver: Quiver, d: Sequence[int], inv: OrbitInvariants) -> int:
    """Codimension of the locus cut out by the case invariants.

    For long A_n families several orbits share one invariant vector (a long
    root can stand in for two shorter ones); the locus closure is the closure
    of the largest of them.  Everywhere else this is ``orbit_codim``.
    """
    d = tuple(d)
    group = _locus_groups(quiver, d).get(_inv_key(quiver, inv))
    if not group:
        raise Infeasible(f"no orbit of dimension vector {d} has invariants {inv}")
    return min(orbit_codim(quiver, d, dec) for dec in group)


def orbits_with_invariants(quiver: Quiver, d: Sequence[int], inv: OrbitInvariants) -> list[Decomposition]:
    """Every orbit of R_d, long roots included, whose invariants equal ``inv``."""
    return list(_locus_groups(quiver, tuple(d)).get(_inv_key(quiver, inv), ()))


def _inv_key(quiver: Quiver, inv: OrbitInvariants) -> tuple[int, ...] | None:
    try:
        return tuple(inv[k] for k in _invariant_keys(quiver))
    except KeyError:
        return None


@lru_cache(maxsize=64)
def _locus_groups(quiver: Quiver, d: DimVector) -> dict[tuple[int, ...], tuple[Decomposition, ...]]:
    roots = _root_invariants_cached(quiver)
    width = len(invariant_keys(quiver))
    out: dict[tuple[int, ...], list[Decomposition]] = {}
    for dec in enumerate_orbits(quiver, d):
        acc = [0] * width
        for r, m in dec.terms:
            for i, v in enumerate(roots[r]):
                acc[i] += m * v
        out.setdefault(tuple(acc), []).append(dec)
    return {k: tuple(v) for k, v in out.items()}


def degeneration_leq(quiver: Quiver, m: Decomposition, n: Decomposition) -> bool:
    """True iff the orbit of ``m`` lies in the closure of the orbit of ``n``.

    For Dynkin quivers this is the Hom order: [X, M] >= [X, N] for every
    indecomposable X.
    """
    if m.dim_vector(quiver.n) != n.dim_vector(quiver.n):
        raise DimensionMismatch("orbits live in different representation spaces")
    for x in positive_roots(quiver):
        xd = Decomposition(((x, 1),))
        if hom_dim(quiver, xd, m) < hom_dim(quiver, xd, n):
            return False
    return True


def identify_orbit(quiver: Quiver, d: Sequence[int], mats: MatrixTuple) -> Decomposition:
    """Decomposition of an explicit representation, via dim Hom(X, M) for all X."""
    roots = positive_roots(quiver)
    table = _root_hom_table(quiver)
    h = [
        hom_dim_matrices(quiver, x, _root_representative(quiver, x), d, mats) for x in roots
    ]
    a = [[table[x, y] for y in roots] for x in roots]
    sol = linalg.solve(a, h)
    if sol is None or any(v.denominator != 1 or v < 0 for v in sol):
        raise Infeasible("Hom data does not come from a representation")
    return Decomposition(tuple((y, int(v)) for y, v in zip(roots, sol)))


# ---------------------------------------------------------------- invariants


@dataclass(frozen=True)
class OrbitInvariants:
    """Rank/intersection data of an orbit, tagged by the quiver case.

    Entries are named as in the case pictures (``r1``, ``p1``, ``k2``, ``t3``,
    ``r12``, ``x``...).  For D_4 the entry ``x`` is dim(U_1 + U_2 + U_3).
    """

    case: CaseTag
    values: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "case", CaseTag(self.case))
        object.__setattr__(self, "values", tuple((k, int(v)) for k, v in self.values))

    @classmethod
    def of(cls, case: CaseTag | str, **values: int) -> "OrbitInvariants":
        return cls(CaseTag(case), tuple(values.items()))

    def __getitem__(self, key: str) -> int:
        for k, v in self.values:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key: str, default: int | None = None) -> int | None:
        try:
            return self[key]
        except KeyError:
            return default

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def vector(self, prefix: str, lo: int, hi: int) -> list[int]:
        return [self[f"{prefix}{i}"] for i in range(lo, hi + 1)]

    def __str__(self):
        return f"{self.case.value}(" + ", ".join(f"{k}={v}" for k, v in self.values) + ")"


def invariant_keys(quiver: Quiver) -> list[str]:
    return list(_invariant_keys(quiver))


@lru_cache(maxsize=None)
def _invariant_keys(quiver: Quiver) -> list[str]:  # cached, copied by the caller
    tag, n = quiver.case_tag, quiver.n
    if tag is None or tag is CaseTag.Other:
        raise UnsupportedCase("quiver has no case tag")
    if tag is CaseTag.A2:
        return ["r1"]
    if tag is CaseTag.A3SinkCenter:
        return ["r1", "r2", "p1"]
    if tag is CaseTag.A3SourceCenter:
        return ["k1", "k2", "q1"]
    if tag is CaseTag.A3OneWay:
        return ["r1", "k2", "u1"]
    if tag is CaseTag.AnOneWay:
        return [f"k{i}" for i in range(1, n)] + [f"t{i}" for i in range(2, n)]
    if tag is CaseTag.A2mSourceSink:
        m = n // 2
        np_, nq = m - 1, m - 1
    elif tag is CaseTag.A2mp1TypeI:
        m = n // 2
        np_, nq = m, m - 1
    elif tag is CaseTag.A2mp1TypeII:
        m = n // 2
        np_, nq = m - 1, m
    elif tag is CaseTag.D4SinkCenter:
        return ["r1", "r2", "r3", "r12", "r13", "r23", "r123", "x"]
    else:
        raise UnsupportedCase(str(tag))
    return (
        [f"r{i}" for i in range(1, n)]
        + [f"p{i}" for i in range(1, np_ + 1)]
        + [f"q{i}" for i in range(1, nq + 1)]
    )


def _cols(m: list) -> list[list]:
    return [list(c) for c in zip(*m)] if m and m[0] else []


def _stack(*ms: list) -> list:
    out = []
    for m in ms:
        out.extend(m)
    return out


def _intersection_basis(a: list[list], b: list[list], dim: int) -> list[list]:
    """Basis of span(a) ∩ span(b) (vectors of length ``dim``)."""
    if not a or not b:
        return []
    # solve sum x_i a_i = sum y_j b_j
    cols = a + [[-x for x in v] for v in b]
    mat = [[c[r] for c in cols] for r in range(dim)]
    out = []
    for sol in linalg.nullspace(mat, len(cols)):
        v = [sum(sol[i] * a[i][r] for i in range(len(a))) for r in range(dim)]
        out.append(v)
    return out


def rank_profile(quiver: Quiver, mats: MatrixTuple, d: Sequence[int] | None = None) -> OrbitInvariants:
    """Exact rank invariants of an explicit representation."""
    tag, n = quiver.case_tag, quiver.n
    if tag is None or tag is CaseTag.Other:
        raise UnsupportedCase("quiver has no case tag")
    if d is None:
        d = _dims_from_mats(quiver, mats)
    pos = {v: i for i, v in enumerate(quiver.vertices)}

    def phi(s, t):
        return mats[quiver.arrow_index(s, t)]

    def rk(m):
        return linalg.rank(m)

    def dim(v):
        return d[pos[v]]

    vals: dict[str, int] = {}
    if tag is CaseTag.A2:
        vals["r1"] = rk(phi(1, 2))
    elif tag is CaseTag.A3SinkCenter:
        a, b = phi(1, 2), phi(3, 2)
        vals.update(r1=rk(a), r2=rk(b), p1=linalg.rank(_cols(a) + _cols(b)))
    elif tag is CaseTag.A3SourceCenter:
        a, b = phi(2, 1), phi(2, 3)
        vals.update(k1=dim(2) - rk(a), k2=dim(2) - rk(b), q1=dim(2) - rk(_stack(a, b)))
    elif tag is CaseTag.A3OneWay:
        a, b = phi(1, 2), phi(2, 3)
        ker = linalg.nullspace(b, dim(2))
        vals.update(r1=rk(a), k2=dim(2) - rk(b), u1=linalg.rank(_cols(a) + ker))
    elif tag is CaseTag.AnOneWay:
        for i in range(1, n):
            vals[f"k{i}"] = dim(i) - rk(phi(i, i + 1))
        for i in range(1, n - 1):
            a, b = phi(i, i + 1), phi(i + 1, i + 2)
            comp = linalg.matmul(b, a, inner=dim(i + 1)) if b else []
            vals[f"t{i + 1}"] = rk(a) - rk(comp)
    elif tag in (CaseTag.A2mSourceSink, CaseTag.A2mp1TypeI, CaseTag.A2mp1TypeII):
        arrows = _case_arrows(tag, n)
        for i, (s, t) in enumerate(arrows, start=1):
            vals[f"r{i}"] = rk(phi(s, t))
        for key, arr_pair, vertex in _sum_and_meet_slots(tag, n):
            a1, a2 = (arrows[j - 1] for j in arr_pair)
            m1, m2 = phi(*a1), phi(*a2)
            if key.startswith("p"):
                vals[key] = linalg.rank(_cols(m1) + _cols(m2))
            else:
                vals[key] = dim(vertex) - rk(_stack(m1, m2))
    elif tag is CaseTag.D4SinkCenter:
        ims = [_cols(phi(s, 2)) for s in (1, 3, 4)]
        d2 = dim(2)
        for i in range(3):
            vals[f"r{i + 1}"] = linalg.rank(ims[i])
        for i, j in ((0, 1), (0, 2), (1, 2)):
            vals[f"r{i + 1}{j + 1}"] = linalg.intersect_dim(ims[i], ims[j])
        ab = _intersection_basis(ims[0], ims[1], d2)
        vals["r123"] = linalg.intersect_dim(ab, ims[2]) if ab else 0
        vals["x"] = linalg.rank(ims[0] + ims[1] + ims[2])
    else:
        raise UnsupportedCase(str(tag))
    keys = invariant_keys(quiver)
    return OrbitInvariants(tag, tuple((k, vals[k]) for k in keys))


def _unit_vectors(n: int) -> list[list]:
    return [[int(i == j) for i in range(n)] for j in range(n)]


def _sum_and_meet_slots(tag: CaseTag, n: int):
    """(key, (arrow i, arrow j), vertex) for the p/q invariants of source-sink cases."""
    m = n // 2
    out = []
    if tag in (CaseTag.A2mSourceSink, CaseTag.A2mp1TypeI):
        np_ = m - 1 if tag is CaseTag.A2mSourceSink else m
        for i in range(1, np_ + 1):
            out.append((f"p{i}", (2 * i - 1, 2 * i), 2 * i))
        for i in range(1, m):
            out.append((f"q{i}", (2 * i + 1, 2 * i), 2 * i + 1))
    else:
        for i in range(1, m):
            out.append((f"p{i}", (2 * i, 2 * i + 1), 2 * i + 1))
        for i in range(1, m + 1):
            out.append((f"q{i}", (2 * i, 2 * i - 1), 2 * i))
    return out


def _dims_from_mats(quiver: Quiver, mats: MatrixTuple) -> DimVector:
    d = {}
    for (s, t), m in zip(quiver.arrows, mats):
        d[t] = len(m)
        if m:
            d[s] = len(m[0])
    if len(d) != quiver.n:
        raise DimensionMismatch("cannot infer dimension vector from matrices; pass d")
    return tuple(d[v] for v in quiver.vertices)


@lru_cache(maxsize=None)
def _root_invariants(quiver: Quiver) -> dict[DimVector, tuple[int, ...]]:
    out = {}
    for r in positive_roots(quiver):
        inv = rank_profile(quiver, _root_representative(quiver, r), r)
        out[r] = tuple(v for _, v in inv.values)
    return out


@lru_cache(maxsize=None)
def _family_root_set(quiver: Quiver) -> frozenset:
    return frozenset(family_roots(quiver))


@lru_cache(maxsize=None)
def _root_invariants_cached(quiver: Quiver) -> dict[DimVector, tuple[int, ...]]:
    return _root_invariants(quiver)


def decomposition_to_invariants(quiver: Quiver, dec: Decomposition) -> OrbitInvariants:
    """Invariants of the orbit of a direct sum (they are additive in summands)."""
    keys = _invariant_keys(quiver)
    fam = _family_root_set(quiver)
    bad = [r for r, _ in dec.terms if r not in fam]
    if bad:
        raise PartialInvariants(f"summands {bad} are outside the rank-invariant family")
    table = _root_invariants_cached(quiver)
    acc = [0] * len(keys)
    for r, m in dec.terms:
        for i, v in enumerate(table[r]):
            acc[i] += m * v
    return OrbitInvariants(quiver.case_tag, tuple(zip(keys, acc)))


@lru_cache(maxsize=None)
def _invariant_system(quiver: Quiver):
    roots = family_roots(quiver)
    table = _root_invariants(quiver)
    rows = [list(r[i] for r in roots) for i in range(quiver.n)]
    nk = len(invariant_keys(quiver))
    rows += [[table[r][k] for r in roots] for k in range(nk)]
    if linalg.rank(rows) != len(roots):
        raise UnsupportedCase("rank invariants do not separate the family orbits")
    # a square invertible block of rows gives a cached left inverse
    pick = linalg._rref(linalg.transpose(rows))[1]
    left = linalg.inverse([rows[i] for i in pick])
    den = 1
    for x in (x for r in left for x in r):
        den = den * x.denominator // math.gcd(den, x.denominator)
    left = [[int(x * den) for x in r] for r in left]
    return roots, rows, pick, left, den


def invariants_to_decomposition(
    quiver: Quiver, d: Sequence[int], inv: OrbitInvariants
) -> Decomposition:
    """Unique decomposition with dimension vector ``d`` and invariants ``inv``."""
    if inv.case is not quiver.case_tag:
        raise UnsupportedCase("invariants belong to another case")
    roots, rows, pick, left, den = _invariant_system(quiver)
    rhs = list(d) + [inv[k] for k in invariant_keys(quiver)]
    sub = [rhs[i] for i in pick]
    scaled = [sum(a * b for a, b in zip(row, sub) if b) for row in left]
    if any(v % den for v in scaled):
        raise Infeasible(f"{inv} is not realised in R_{tuple(d)}")
    sol = [v // den for v in scaled]
    # the system is overdetermined, so the remaining rows must agree
    for row, b in zip(rows, rhs):
        if sum(x * y for x, y in zip(row, sol)) != b:
            raise Infeasible(f"{inv} is not realised in R_{tuple(d)}")
    if any(v < 0 for v in sol):
        raise Infeasible(f"{inv} is not realised in R_{tuple(d)}")
    return Decomposition(tuple((r, int(v)) for r, v in zip(roots, sol)))


def is_feasible(quiver: Quiver, d: Sequence[int], inv: OrbitInvariants) -> bool:
    try:
        invariants_to_decomposition(quiver, d, inv)
    except Infeasible:
        return False
    return True


def enumerate_family(quiver: Quiver, d: Sequence[int]) -> list[tuple[Decomposition, OrbitInvariants]]:
    """Orbits covered by the case invariants, with their invariants."""
    out = []
    for dec in enumerate_orbits(quiver, d, family_roots(quiver)):
        out.append((dec, decomposition_to_invariants(quiver, dec)))
    return out


# ---------------------------------------------------------------- closure lemmas


def in_closure(
    quiver: Quiver,
    d: Sequence[int],
    point_inv: OrbitInvariants,
    orbit_inv: OrbitInvariants,
) -> bool:
    """Closure membership from the rank inequalities of the A_3 cases."""
    tag = quiver.case_tag
    p, o = point_inv, orbit_inv
    if tag is CaseTag.A3SinkCenter:
        return p["r1"] <= o["r1"] and p["r2"] <= o["r2"] and p["p1"] <= o["p1"]
    if tag is CaseTag.A3SourceCenter:
        return p["k1"] >= o["k1"] and p["k2"] >= o["k2"] and p["q1"] >= o["q1"]
    if tag is CaseTag.A3OneWay:
        return (
            p["r1"] <= o["r1"]
            and p["k2"] >= o["k2"]
            and p["u1"] <= o["u1"] + p["k2"] - o["k2"]
        )
    raise UnsupportedCase("closure inequalities are only known for A_3; use degeneration_leq")
