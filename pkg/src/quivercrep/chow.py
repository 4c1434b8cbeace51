"""Intersection numbers on towers by torus fixed-point localization.

A tower is a Grassmannian Gr(k, n) (or a point), cut by zero loci of
sections of bundles on it, with relative flag bundles on top and possibly
one more zero-locus cut there.  The torus of GL_n, together with extra
"framing" characters for trivial summands, acts with isolated fixed points
on the ambient tower.  Every characteristic class is then a function of the
Chern roots at each fixed point, and

    ∫_Z α = Σ_p [h^dim Z] α|_p(h) · e(N)_p / e(T)_p

where N is the sum of all cut bundles.  Characters are specialized to
random integers (a generic one-parameter subgroup), so every quantity is an
exact rational number and integrals come out as exact integers.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from . import bundles as bx
from .bundles import Bundle, FlagFactor, Scene
from .errors import NonIntegerResult, RankError, WeightCollision

# ---------------------------------------------------------------- series


class Series:
    """Truncated power series in one variable with exact rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @classmethod
    def const(cls, x, n: int) -> "Series":
        return cls([Fraction(x)] + [Fraction(0)] * n)

    @property
    def cap(self) -> int:
        return len(self.c) - 1

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(other, self.cap)
        return Series([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Series([-a for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return Series([a * other for a in self.c])
        n = min(self.cap, other.cap)
        a, b = self.c, other.c
        return Series([sum(a[i] * b[k - i] for i in range(k + 1) if a[i] and b[k - i]) for k in range(n + 1)])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Series.const(1, self.cap)
        for _ in range(e):
            out = out * self
        return out

    def exp(self) -> "Series":
        # self must have zero constant term
        n = self.cap
        out = [Fraction(0)] * (n + 1)
        out[0] = Fraction(1)
        # f' = g' f
        for k in range(1, n + 1):
            out[k] = sum(i * self.c[i] * out[k - i] for i in range(1, k + 1)) / k
        return Series(out)

    def log(self) -> "Series":
        # self must have constant term 1
        n = self.cap
        out = [Fraction(0)] * (n + 1)
        for k in range(1, n + 1):
            acc = k * self.c[k] - sum(i * out[i] * self.c[k - i] for i in range(1, k))
            out[k] = acc / k
        return Series(out)

    def adams(self, k: int) -> "Series":
        """Degree-d part scaled by k^d (ch of the k-th Adams operation)."""
        return Series([a * k**d for d, a in enumerate(self.c)])

    def __getitem__(self, k):
        return self.c[k] if k < len(self.c) else Fraction(0)

    def __repr__(self):
        return f"Series({[str(x) for x in self.c]})"


@lru_cache(maxsize=None)
def _log_todd(n: int) -> tuple[Fraction, ...]:
    """Coefficients of log(x / (1 - e^{-x})) up to x^n."""
    # x/(1-e^{-x}) = 1 / (sum_{k>=0} (-1)^k x^k / (k+1)!)
    denom = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(n + 1)]
    inv = [Fraction(0)] * (n + 1)
    inv[0] = Fraction(1)
    for k in range(1, n + 1):
        inv[k] = -sum(denom[i] * inv[k - i] for i in range(1, k + 1))
    return tuple(Series(inv).log().c)


def _power_sums(ws: Sequence[int], n: int) -> list[int]:
    out = [len(ws)] + [0] * n
    for w in ws:
        x = 1
        for k in range(1, n + 1):
            x *= w
            out[k] += x
    return out


def ch_series(ws: Sequence[int], n: int) -> Series:
    p = _power_sums(ws, n)
    return Series([Fraction(p[k], math.factorial(k)) for k in range(n + 1)])


def chern_series(ws: Sequence[int], n: int) -> Series:
    e = [0] * (n + 1)
    e[0] = 1
    for w in ws:
        for k in range(n, 0, -1):
            e[k] += w * e[k - 1]
    return Series([Fraction(x) for x in e])


def log_td_series(ws: Sequence[int], n: int, sign: int = 1) -> Series:
    p = _power_sums(ws, n)
    c = _log_todd(n)
    return Series([Fraction(0)] + [sign * c[k] * p[k] for k in range(1, n + 1)])


# ---------------------------------------------------------------- varieties


@dataclass(frozen=True)
class VarietySpec:
    """Ambient tower and its cuts.

    ``base``: (k, n) for Gr(k, n), or None for a point.
    ``cuts``: bundles on the base; their generic sections cut the next stage.
    ``fiber_flags``: relative flag bundles; ``ambient`` of each factor is a
    bundle on the base (None means a trivial bundle of that rank).
    ``top_cut``: bundle on the whole tower cut last (e.g. Q_W).
    ``named``: named bundles (the E_s) usable inside any expression.
    """

    base: tuple[int, int] | None = None
    cuts: tuple[Bundle, ...] = ()
    fiber_flags: tuple[FlagFactor, ...] = ()
    top_cut: Bundle | None = None
    named: tuple[tuple[str, Bundle], ...] = ()

    def scene(self) -> Scene:
        return Scene(
            factors={f.vertex: f for f in self.fiber_flags},
            base=self.base,
            named=dict(self.named),
        )

    @property
    def ambient_dim(self) -> int:
        k, n = self.base or (0, 0)
        return k * (n - k) + sum(f.dim for f in self.fiber_flags)

    @property
    def cut_rank(self) -> int:
        sc = self.scene()
        r = sum(bx.rank(c, sc) for c in self.cuts)
        if self.top_cut is not None:
            r += bx.rank(self.top_cut, sc)
        return r

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.cut_rank

    def fixed_point_count(self) -> int:
        k, n = self.base or (0, 0)
        total = math.comb(n, k)
        for f in self.fiber_flags:
            p = f.pieces()
            total *= math.factorial(f.ambient_rank) // math.prod(math.factorial(x) for x in p)
        return total


@dataclass
class FixedPoint:
    """A fixed point: base subset and, per flag factor, the weights of each graded piece."""

    base_choice: tuple[int, ...]
    pieces: dict[int, list[list[int]]]


class _Weights:
    """Chern roots of bundle expressions at one fixed point."""

    def __init__(self, spec: VarietySpec, chars: "_Characters", I: tuple[int, ...], scene: Scene):
        self.spec = spec
        self.chars = chars
        self.I = I
        self.scene = scene
        k, n = spec.base or (0, 0)
        self.t = [chars.base(i) for i in range(n)]
        self.pieces: dict[int, list[list[int]]] = {}
        self._named: dict[str, list[int]] = {}

    def named(self, name: str) -> list[int]:
        if name not in self._named:
            self._named[name] = self(self.scene.named[name])
        return self._named[name]

    def __call__(self, b: Bundle) -> list[int]:
        k = b.kind
        if k == "taut":
            v, j = b.args
            return [w for piece in self.pieces[v][:j] for w in piece]
        if k == "quot":
            v, lo, hi = b.args
            pcs = self.pieces[v]
            hi = len(pcs) if hi is None else hi
            return [w for piece in pcs[lo:hi] for w in piece]
        if k == "triv":
            r, label = b.args
            return [self.chars.frame(f"{label}:{i}") for i in range(r)]
        if k == "U":
            return [self.t[i] for i in self.I]
        if k == "Q":
            return [self.t[j] for j in range(len(self.t)) if j not in self.I]
        if k == "O":
            return [-b.args[0] * sum(self.t[i] for i in self.I)]
        if k == "named":
            return self.named(b.args[0])
        if k == "twist":
            c = self.chars.frame(b.args[1])
            return [w + c for w in self(b.args[0])]
        if k == "dual":
            return [-w for w in self(b.args[0])]
        if k == "sum":
            return [w for x in b.args for w in self(x)]
        if k == "tensor":
            a, c = self(b.args[0]), self(b.args[1])
            return [x + y for x in a for y in c]
        if k == "wedge2":
            a = self(b.args[0])
            return [a[i] + a[j] for i in range(len(a)) for j in range(i + 1, len(a))]
        if k == "sym2":
            a = self(b.args[0])
            return [a[i] + a[j] for i in range(len(a)) for j in range(i, len(a))]
        if k == "det":
            return [sum(self(b.args[0]))]
        if k == "minus":
            out = list(self(b.args[0]))
            for w in self(b.args[1]):
                try:
                    out.remove(w)
                except ValueError:
                    raise ValueError(f"{bx.render(b.args[1])} is not a subbundle at a fixed point") from None
            return out
        raise ValueError(f"unknown bundle node {k}")


class _Characters:
    """Random integer values of the torus characters, reproducible per label."""

    def __init__(self, seed: int, spread: int = 10**4):
        self.seed = seed
        self.spread = spread
        self._cache: dict[str, int] = {}

    def _draw(self, label: str) -> int:
        if label not in self._cache:
            rng = random.Random(f"{self.seed}/{label}")
            self._cache[label] = rng.randint(-self.spread, self.spread)
        return self._cache[label]

    def base(self, i: int) -> int:
        return self._draw(f"t{i}")

    def frame(self, label: str) -> int:
        return self._draw(f"eps:{label}")


def _ordered_partitions(idx: Sequence[int], sizes: Sequence[int]):
    if not sizes:
        yield ()
        return
    for first in itertools.combinations(idx, sizes[0]):
        rest = [i for i in idx if i not in first]
        for tail in _ordered_partitions(rest, sizes[1:]):
            yield (first,) + tail


class PointContext:
    """Everything an integrand may ask for at one fixed point."""

    def __init__(self, weights: _Weights, tangent: list[int], normal: list[int], cap: int):
        self.w = weights
        self.tangent = tangent
        self.normal = normal
        self.cap = cap

    def weights(self, b: Bundle) -> list[int]:
        return self.w(b)

    def chern(self, b: Bundle) -> Series:
        return chern_series(self.w(b), self.cap)

    def ch(self, b: Bundle) -> Series:
        return ch_series(self.w(b), self.cap)

    def td(self) -> Series:
        """Todd class of the tangent bundle of the final stage."""
        s = log_td_series(self.tangent, self.cap) + log_td_series(self.normal, self.cap, -1)
        return s.exp()

    def c1_tangent(self) -> int:
        return sum(self.tangent) - sum(self.normal)

    def ch_cotangent(self) -> Series:
        neg = lambda ws: [-w for w in ws]  # noqa: E731
        return ch_series(neg(self.tangent), self.cap) - ch_series(neg(self.normal), self.cap)


# Integrands are closures, so workers inherit them through fork instead of pickling.
_JOB: tuple | None = None


def _point_contributions(args):
    """Worker: sum of contributions over a chunk of base subsets."""
    seed, chunk = args
    spec, integrands = _JOB
    return _sum_over(spec, integrands, seed, chunk)


def _sum_over(spec: VarietySpec, integrands, seed: int, base_choices, progress=None):
    chars = _Characters(seed)
    scene = spec.scene()
    cap = spec.dim
    totals = [Fraction(0)] * len(integrands)
    count = 0
    for I in base_choices:
        W = _Weights(spec, chars, I, scene)
        k, n = spec.base or (0, 0)
        base_tan = [W.t[j] - W.t[i] for i in I for j in range(n) if j not in I]
        cut_w = [w for c in spec.cuts for w in W(c)]
        amb = []
        for f in spec.fiber_flags:
            amb.append(W(f.ambient) if f.ambient is not None else [chars.frame(f"V{f.vertex}:{i}") for i in range(f.ambient_rank)])
        choice_lists = [
            list(_ordered_partitions(list(range(len(a))), f.pieces())) for f, a in zip(spec.fiber_flags, amb)
        ]
        for combo in itertools.product(*choice_lists):
            W.pieces = {}
            tan = list(base_tan)
            for f, a, parts in zip(spec.fiber_flags, amb, combo):
                pcs = [[a[i] for i in part] for part in parts]
                W.pieces[f.vertex] = pcs
                for x in range(len(pcs)):
                    for y in range(x + 1, len(pcs)):
                        tan.extend(v - u for u in pcs[x] for v in pcs[y])
            if any(t == 0 for t in tan):
                raise WeightCollision("zero tangent weight at a fixed point")
            normal = list(cut_w)
            if spec.top_cut is not None:
                normal.extend(W(spec.top_cut))
            ctx = PointContext(W, tan, normal, cap)
            factor = Fraction(math.prod(normal), math.prod(tan))
            count += 1
            if factor == 0:
                continue
            for i, f in enumerate(integrands):
                totals[i] += factor * f(ctx)[cap]
        if progress is not None:
            progress(count)
    return totals, count


@dataclass
class IntegrationResult:
    values: list[Fraction]
    fixed_point_count: int
    seed: int


def integrate_many(
    integrands: Sequence[Callable[[PointContext], Series]],
    spec: VarietySpec,
    seed: int = 0,
    threads: int = 1,
    retries: int = 5,
    progress: Callable[[int], None] | None = None,
) -> IntegrationResult:
    """Integrate several integrands over the final stage in one pass."""
    if spec.dim < 0:
        raise ValueError("negative expected dimension")
    k, n = spec.base or (0, 0)
    subsets = list(itertools.combinations(range(n), k))
    last: Exception | None = None
    for attempt in range(retries):
        s = seed + 7919 * attempt
        try:
            if threads > 1 and len(subsets) > 1:
                global _JOB
                _JOB = (spec, list(integrands))
                chunks = [subsets[i::threads] for i in range(threads)]
                ctx = multiprocessing.get_context("fork")
                with ProcessPoolExecutor(threads, mp_context=ctx) as ex:
                    parts = list(ex.map(_point_contributions, [(s, c) for c in chunks]))
                totals = [sum((p[0][i] for p in parts), Fraction(0)) for i in range(len(integrands))]
                count = sum(p[1] for p in parts)
            else:
                totals, count = _sum_over(spec, integrands, s, subsets, progress)
            return IntegrationResult(totals, count, s)
        except WeightCollision as e:
            last = e
    raise WeightCollision(f"weight collision after {retries} attempts: {last}")


# ---------------------------------------------------------------- integrands


class ChernExpr:
    """Polynomial in characteristic classes, evaluated fixed point by fixed point."""

    def __init__(self, fn: Callable[[PointContext], Series], text: str = "?"):
        self.fn = fn
        self.text = text

    def __call__(self, ctx: PointContext) -> Series:
        return self.fn(ctx)

    def __add__(self, other):
        other = _lift(other)
        return ChernExpr(lambda c: self(c) + other(c), f"({self.text} + {other.text})")

    __radd__ = __add__

    def __mul__(self, other):
        other = _lift(other)
        return ChernExpr(lambda c: self(c) * other(c), f"{self.text}·{other.text}")

    __rmul__ = __mul__

    def __neg__(self):
        return ChernExpr(lambda c: -self(c), f"-{self.text}")

    def __sub__(self, other):
        return self + (-_lift(other))

    def __pow__(self, e: int):
        return ChernExpr(lambda c: self(c) ** e, f"{self.text}^{e}")

    def __repr__(self):
        return f"ChernExpr({self.text})"


def _lift(x) -> ChernExpr:
    if isinstance(x, ChernExpr):
        return x
    return ChernExpr(lambda c: Series.const(x, c.cap), str(x))


def c(k: int, b: Bundle) -> ChernExpr:
    def f(ctx):
        s = ctx.chern(b)
        return Series([s[k] if i == k else Fraction(0) for i in range(ctx.cap + 1)])

    return ChernExpr(f, f"c{k}({bx.render(b)})")


def c1(b: Bundle) -> ChernExpr:
    return c(1, b)


def total_chern(b: Bundle) -> ChernExpr:
    return ChernExpr(lambda ctx: ctx.chern(b), f"c({bx.render(b)})")


def ch(b: Bundle) -> ChernExpr:
    return ChernExpr(lambda ctx: ctx.ch(b), f"ch({bx.render(b)})")


def td() -> ChernExpr:
    return ChernExpr(lambda ctx: ctx.td(), "td(T)")


def c1_tangent() -> ChernExpr:
    def f(ctx):
        s = Series.const(0, ctx.cap)
        if ctx.cap >= 1:
            s.c[1] = Fraction(ctx.c1_tangent())
        return s

    return ChernExpr(f, "c1(T)")


def ch_lambda_cotangent(p: int) -> ChernExpr:
    """ch(Λ^p Ω) from ch(Ω) by the Newton identity for Adams operations."""

    def f(ctx):
        om = ctx.ch_cotangent()
        lam = [Series.const(1, ctx.cap)]
        for q in range(1, p + 1):
            acc = Series.const(0, ctx.cap)
            for i in range(1, q + 1):
                term = om.adams(i) * lam[q - i]
                acc = acc + (term if i % 2 else -term)
            lam.append(acc * Fraction(1, q))
        return lam[p]

    return ChernExpr(f, f"ch(Λ^{p}Ω)")


def ch_anticanonical(power: int = 1) -> ChernExpr:
    """ch(ω^{-power}) of the final stage."""

    def f(ctx):
        return ch_series([power * ctx.c1_tangent()], ctx.cap)

    return ChernExpr(f, f"ch(-{power}K)")


# ---------------------------------------------------------------- public quantities


def weights_at(b: Bundle, p: FixedPoint, spec: VarietySpec, seed: int = 0) -> list[int]:
    """Chern roots of ``b`` at a fixed point, characters specialized with ``seed``."""
    chars = _Characters(seed)
    W = _Weights(spec, chars, tuple(p.base_choice), spec.scene())
    W.pieces = p.pieces
    return W(b)


def integrate(expr: ChernExpr, spec: VarietySpec, seed: int = 0, threads: int = 1) -> Fraction:
    return integrate_many([expr], spec, seed, threads).values[0]


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonIntegerResult(f"{what} came out as {x}")
    return int(x)


def chi_sheaf(b: Bundle | None, spec: VarietySpec, seed: int = 0, threads: int = 1) -> int:
    """χ(Z, b|_Z); ``None`` means the structure sheaf."""
    expr = td() if b is None else ch(b) * td()
    return _as_int(integrate(expr, spec, seed, threads), "Euler characteristic")


def chi_omega_p(p: int, spec: VarietySpec, seed: int = 0, threads: int = 1) -> int:
    if not 0 <= p <= spec.dim:
        raise ValueError("p out of range")
    return _as_int(integrate(ch_lambda_cotangent(p) * td(), spec, seed, threads), f"χ(Ω^{p})")


def top_self_intersection(L: Bundle, spec: VarietySpec, seed: int = 0, threads: int = 1) -> int:
    if bx.rank(L, spec.scene()) != 1:
        raise RankError("top self-intersection needs a line bundle")
    return _as_int(integrate(c1(L) ** spec.dim, spec, seed, threads), "self-intersection")


def anticanonical_degree(spec: VarietySpec, seed: int = 0, threads: int = 1) -> int:
    return _as_int(integrate(c1_tangent() ** spec.dim, spec, seed, threads), "(-K)^dim")


QUANTITIES = {
    "chi_O": lambda: td(),
    "chi_omega1": lambda: ch_lambda_cotangent(1) * td(),
    "chi_omega2": lambda: ch_lambda_cotangent(2) * td(),
    "chi_omega3": lambda: ch_lambda_cotangent(3) * td(),
    "chi_omega4": lambda: ch_lambda_cotangent(4) * td(),
    "chi_minus_K": lambda: ch_anticanonical(1) * td(),
    "minus_K_top": None,  # needs the dimension, see standard_quantities
}


def standard_quantities(
    spec: VarietySpec,
    names: Iterable[str],
    seed: int = 0,
    threads: int = 1,
    progress: Callable[[int], None] | None = None,
) -> tuple[dict[str, int], int]:
    """Evaluate named quantities in one localization pass; returns (values, fixed-point count)."""
    names = list(names)
    exprs = []
    for nm in names:
        if nm == "minus_K_top":
            exprs.append(c1_tangent() ** spec.dim)
        elif nm in QUANTITIES:
            exprs.append(QUANTITIES[nm]())
        else:
            raise KeyError(f"unknown quantity {nm!r}")
    res = integrate_many(exprs, spec, seed, threads, progress=progress)
    return {nm: _as_int(v, nm) for nm, v in zip(names, res.values)}, res.fixed_point_count
