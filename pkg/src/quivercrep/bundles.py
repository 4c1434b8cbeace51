"""Formal bundle expressions over products of flag varieties.

A :class:`Bundle` is an immutable expression tree.  Leaves name tautological
pieces of the flag factors, bundles on a Grassmannian base, trivial bundles
and named bundles (the ``E_s`` of a relative setting); internal nodes are
dual, direct sum, tensor, second exterior / symmetric power and determinant.

Ranks and determinants are computed against a :class:`Scene`, which says
what the flag factors and named bundles are.  Determinants live in a
:class:`PicardVector`: integer coefficients over formal slots

* ``("o", v, j)``  the line bundle O(1) of step ``j`` of the flag at vertex ``v``
  (so that det U_{v,j} = -O(1)),
* ``("h",)``        the Plücker class of the Grassmannian base,
* ``("E", name)``   det of a named bundle whose determinant is left symbolic.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ConfigError, RankError

Slot = tuple


# ---------------------------------------------------------------- Picard


class PicardVector:
    """Integer combination of Picard slots; zero coefficients are dropped."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Slot, int] | None = None):
        self._c = {k: int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def _raw(cls, c: dict) -> "PicardVector":
        # c already holds ints; only zeros need dropping
        out = cls.__new__(cls)
        out._c = {k: v for k, v in c.items() if v}
        return out

    @classmethod
    def slot(cls, key: Slot, coeff: int = 1) -> "PicardVector":
        return cls({key: coeff})

    def __getitem__(self, key: Slot) -> int:
        return self._c.get(key, 0)

    def items(self):
        return sorted(self._c.items(), key=lambda kv: _slot_order(kv[0]))

    def keys(self):
        return [k for k, _ in self.items()]

    def __add__(self, other: "PicardVector") -> "PicardVector":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return PicardVector._raw(out)

    def __neg__(self):
        return PicardVector._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        return PicardVector._raw({k: n * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PicardVector) and self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def restrict(self, pred) -> "PicardVector":
        return PicardVector({k: v for k, v in self._c.items() if pred(k)})

    def flag_part(self) -> "PicardVector":
        return self.restrict(lambda k: k[0] == "o")

    def as_dict(self) -> dict[str, int]:
        return {slot_name(k): v for k, v in self.items()}

    def __repr__(self):
        return f"PicardVector({self.as_dict()})"

    def __str__(self):
        if not self._c:
            return "O"
        return " ⊗ ".join(f"{slot_name(k)}^{v}" if v != 1 else slot_name(k) for k, v in self.items())


def _slot_order(k: Slot):
    return ({"o": 0, "h": 1, "E": 2}.get(k[0], 3), tuple(str(x) for x in k[1:]))


def slot_name(k: Slot) -> str:
    if k[0] == "o":
        return f"O_{k[1]},{k[2]}(1)"
    if k[0] == "h":
        return "O(1)"
    if k[0] == "E":
        return f"det {k[1]}"
    return str(k)


# ---------------------------------------------------------------- expressions


@dataclass(frozen=True)
class Bundle:
    """Formal bundle expression.  Build with the module-level constructors."""

    kind: str
    args: tuple = ()

    # sugar
    def __add__(self, other: "Bundle") -> "Bundle":
        return direct_sum(self, other)

    def __mul__(self, other: "Bundle") -> "Bundle":
        return tensor(self, other)

    @property
    def dual(self) -> "Bundle":
        return dual(self)

    def __str__(self):
        return render(self)


def taut(vertex: int, step: int) -> Bundle:
    """U_{v,step}; step 0 is the zero bundle."""
    return Bundle("taut", (vertex, step))


def quot(vertex: int, lo: int, hi: int | None = None) -> Bundle:
    """U_{v,hi} / U_{v,lo}; ``hi=None`` means the ambient space V_v (or E_v)."""
    return Bundle("quot", (vertex, lo, hi))


def ambient(vertex: int) -> Bundle:
    return quot(vertex, 0, None)


def trivial(rank: int, label: str = "") -> Bundle:
    return Bundle("triv", (int(rank), label))


def base_u() -> Bundle:
    return Bundle("U")


def base_q() -> Bundle:
    return Bundle("Q")


def line(m: int) -> Bundle:
    """O(m) on the Grassmannian base."""
    return Bundle("O", (int(m),))


def named(name: str) -> Bundle:
    return Bundle("named", (name,))


def twist(b: Bundle, label: str) -> Bundle:
    """``b`` tensored with a trivial line carrying its own torus character.

    Invisible to ranks and determinants; only the localization engine sees it.
    """
    return Bundle("twist", (b, label))


def difference(a: Bundle, b: Bundle) -> Bundle:
    """a - b in K-theory; used for quotients a/b of a bundle by a subbundle."""
    return Bundle("minus", (a, b))


def dual(b: Bundle) -> Bundle:
    if b.kind == "dual":
        return b.args[0]
    return Bundle("dual", (b,))


def direct_sum(*bs: Bundle) -> Bundle:
    flat: list[Bundle] = []
    for b in bs:
        flat.extend(b.args if b.kind == "sum" else (b,))
    if len(flat) == 1:
        return flat[0]
    return Bundle("sum", tuple(flat))


def tensor(a: Bundle, b: Bundle) -> Bundle:
    return Bundle("tensor", (a, b))


def wedge2(b: Bundle) -> Bundle:
    return Bundle("wedge2", (b,))


def sym2(b: Bundle) -> Bundle:
    return Bundle("sym2", (b,))


def det(b: Bundle) -> Bundle:
    return Bundle("det", (b,))


ZERO = trivial(0)


# ---------------------------------------------------------------- flag factors


@dataclass(frozen=True)
class FlagFactor:
    """Flag variety F(steps; V_vertex) of nested subspaces with ranks ``steps``.

    Steps are nondecreasing within ``[0, ambient_rank]``.  Repeated, zero or
    full-rank steps are kept as formal slots; :meth:`normalized` drops them
    to get the genuine flag variety.  ``ambient`` is ``None`` for a fixed
    vector space and a bundle expression in the relative setting.
    """

    vertex: int
    ambient_rank: int
    steps: tuple[int, ...]
    ambient: Bundle | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))
        prev = 0
        for s in self.steps:
            if s < prev or s > self.ambient_rank:
                raise ValueError(f"bad flag steps {self.steps} in dimension {self.ambient_rank}")
            prev = s

    def rank(self, j: int | None) -> int:
        if j is None:
            return self.ambient_rank
        return 0 if j == 0 else self.steps[j - 1]

    def pieces(self) -> list[int]:
        """Ranks of the successive quotients, the last one being V/U_last."""
        ranks = [0, *self.steps, self.ambient_rank]
        return [b - a for a, b in zip(ranks, ranks[1:])]

    @property
    def dim(self) -> int:
        p = self.pieces()
        return sum(p[i] * p[j] for i in range(len(p)) for j in range(i + 1, len(p)))

    def is_proper(self) -> bool:
        return self.normalized_steps() == self.steps

    def normalized_steps(self) -> tuple[int, ...]:
        out = []
        for s in self.steps:
            if 0 < s < self.ambient_rank and (not out or out[-1] != s):
                out.append(s)
        return tuple(out)

    def normalized(self) -> "FlagFactor":
        return FlagFactor(self.vertex, self.ambient_rank, self.normalized_steps(), self.ambient)

    def step_map(self) -> dict[int, int | None]:
        """Formal step index -> index in the normalized factor (0 or None at the ends)."""
        norm = self.normalized_steps()
        out = {}
        for j, s in enumerate(self.steps, start=1):
            out[j] = 0 if s == 0 else (None if s == self.ambient_rank else norm.index(s) + 1)
        return out

    def label(self) -> str:
        space = f"V_{self.vertex}" if self.ambient is None else f"E_{self.vertex}"
        if len(self.steps) == 1:
            return f"Gr({self.steps[0]}, {space})"
        return f"F({', '.join(map(str, self.steps))}; {space})"


@dataclass
class Scene:
    """Where expressions are evaluated: flag factors by vertex, a base, named bundles."""

    factors: dict[int, FlagFactor] = field(default_factory=dict)
    base: tuple[int, int] | None = None  # (k, n) for Gr(k, n)
    named: dict[str, Bundle] = field(default_factory=dict)
    symbolic_named: bool = False  # keep det of named bundles as ("E", name) slots

    def factor(self, v: int) -> FlagFactor:
        try:
            return self.factors[v]
        except KeyError:
            raise KeyError(f"no flag factor at vertex {v}") from None


# ---------------------------------------------------------------- rank and det


def rank(b: Bundle, scene: Scene) -> int:
    k = b.kind
    if k == "taut":
        v, j = b.args
        return scene.factor(v).rank(j)
    if k == "quot":
        v, lo, hi = b.args
        f = scene.factor(v)
        r = f.rank(hi) - f.rank(lo)
        if r < 0:
            raise RankError(f"negative rank for {render(b)}")
        return r
    if k == "triv":
        return b.args[0]
    if k == "U":
        return _base(scene)[0]
    if k == "Q":
        kk, n = _base(scene)
        return n - kk
    if k in ("O", "det"):
        return 1
    if k == "named":
        return rank(scene.named[b.args[0]], scene)
    if k in ("dual", "twist"):
        return rank(b.args[0], scene)
    if k == "sum":
        return sum(rank(x, scene) for x in b.args)
    if k == "tensor":
        return rank(b.args[0], scene) * rank(b.args[1], scene)
    if k == "minus":
        r = rank(b.args[0], scene) - rank(b.args[1], scene)
        if r < 0:
            raise RankError("subbundle larger than the bundle")
        return r
    if k == "wedge2":
        r = rank(b.args[0], scene)
        return r * (r - 1) // 2
    if k == "sym2":
        r = rank(b.args[0], scene)
        return r * (r + 1) // 2
    raise ValueError(f"unknown bundle node {k}")


def _base(scene: Scene) -> tuple[int, int]:
    if scene.base is None:
        raise RankError("expression uses base bundles but the base is a point")
    return scene.base


def det_vector(b: Bundle, scene: Scene) -> PicardVector:
    """First Chern class of ``b`` as a formal Picard combination."""
    acc: dict = {}
    _det_into(b, scene, acc, 1)
    return PicardVector._raw(acc)


def _bump(acc: dict, key: Slot, v: int):
    acc[key] = acc.get(key, 0) + v


def _det_into(b: Bundle, scene: Scene, acc: dict, c: int):
    # adds c * det(b) to acc
    k = b.kind
    if k == "taut":
        v, j = b.args
        if j:
            _bump(acc, ("o", v, j), -c)
    elif k == "quot":
        v, lo, hi = b.args
        f = scene.factor(v)
        for j, sign in ((hi, c), (lo, -c)):
            if j is None:
                if f.ambient is not None:
                    _det_into(f.ambient, scene, acc, sign)
            elif j:
                _bump(acc, ("o", v, j), -sign)
    elif k == "triv":
        pass
    elif k == "U":
        _bump(acc, ("h",), -c)
    elif k == "Q":
        _bump(acc, ("h",), c)
    elif k == "O":
        _bump(acc, ("h",), c * b.args[0])
    elif k == "named":
        if scene.symbolic_named:
            _bump(acc, ("E", b.args[0]), c)
        else:
            _det_into(scene.named[b.args[0]], scene, acc, c)
    elif k in ("twist", "det"):
        _det_into(b.args[0], scene, acc, c)
    elif k == "dual":
        _det_into(b.args[0], scene, acc, -c)
    elif k == "sum":
        for x in b.args:
            _det_into(x, scene, acc, c)
    elif k == "tensor":
        a, e = b.args
        _det_into(a, scene, acc, c * rank(e, scene))
        _det_into(e, scene, acc, c * rank(a, scene))
    elif k == "minus":
        _det_into(b.args[0], scene, acc, c)
        _det_into(b.args[1], scene, acc, -c)
    elif k == "wedge2":
        _det_into(b.args[0], scene, acc, c * (rank(b.args[0], scene) - 1))
    elif k == "sym2":
        _det_into(b.args[0], scene, acc, c * (rank(b.args[0], scene) + 1))
    else:
        raise ValueError(f"unknown bundle node {k}")


def canonical_factor(f: FlagFactor, scene: Scene) -> PicardVector:
    """K of one (possibly relative) flag factor from its graded tangent bundle.

    T = sum over i < j of Hom(G_i, G_j) for the graded pieces G of the flag,
    so K = -sum (rk G_i det G_j - rk G_j det G_i).
    """
    ranks = f.pieces()
    top = len(f.steps) + 1
    total = sum(ranks)
    acc: dict = {}
    below = 0
    for j in range(top):
        # det G_j enters with (ranks below j) - (ranks above j)
        coeff = below - (total - below - ranks[j])
        below += ranks[j]
        if coeff:
            _det_into(quot(f.vertex, j, j + 1 if j + 1 < top else None), scene, acc, -coeff)
    return PicardVector._raw(acc)


# ---------------------------------------------------------------- rendering


def render(b: Bundle) -> str:
    k = b.kind
    if k == "taut":
        v, j = b.args
        return "0" if j == 0 else f"U_{v},{j}"
    if k == "quot":
        v, lo, hi = b.args
        top = f"V_{v}" if hi is None else f"U_{v},{hi}"
        return top if lo == 0 else f"({top}/U_{v},{lo})"
    if k == "triv":
        return f"O^{b.args[0]}" if b.args[0] != 1 else "O"
    if k in ("U", "Q"):
        return k
    if k == "O":
        return f"O({b.args[0]})"
    if k == "named":
        return b.args[0]
    if k == "twist":
        return render(b.args[0])
    if k == "dual":
        inner = render(b.args[0])
        return f"{inner}^*" if b.args[0].kind not in ("sum", "tensor") else f"({inner})^*"
    if k == "sum":
        return "(" + " ⊕ ".join(render(x) for x in b.args) + ")"
    if k == "tensor":
        return f"{render(b.args[0])} ⊗ {render(b.args[1])}"
    if k == "wedge2":
        return f"Λ²{render(b.args[0])}"
    if k == "sym2":
        return f"Sym²{render(b.args[0])}"
    if k == "det":
        return f"det {render(b.args[0])}"
    if k == "minus":
        return f"{render(b.args[0])} / {render(b.args[1])}"
    return k


def to_json(b: Bundle):
    out = [b.kind]
    for a in b.args:
        out.append(to_json(a) if isinstance(a, Bundle) else a)
    return out


def from_json(obj) -> Bundle:
    kind, *args = obj
    return Bundle(kind, tuple(from_json(a) if isinstance(a, list) else a for a in args))


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[(),*]))")


def parse(text: str, *, names: Iterable[str] = (), label: str = "b") -> Bundle:
    """Parse the prefix grammar used in config files.

    ``U``, ``Q``, ``O``, ``O(m)``, ``triv(r)``, ``dual(x)``, ``sum(x, y, ...)``,
    ``tensor(x, y)``, ``wedge2(x)``, ``sym2(x)``, ``det(x)`` and ``n*x`` (n-fold sum).
    Names listed in ``names`` refer to previously defined bundles.
    Every trivial summand gets its own framing label derived from ``label``.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConfigError(f"cannot parse bundle expression {text!r} at column {pos}")
        toks.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    names = set(names)
    counter = itertools.count()
    i = 0

    def peek(val=None):
        if i < len(toks) and (val is None or toks[i][1] == val):
            return toks[i]
        return None

    def expect(val):
        nonlocal i
        if not peek(val):
            raise ConfigError(f"expected {val!r} in bundle expression {text!r}")
        i += 1

    def args():
        expect("(")
        out = [expr()]
        while peek(","):
            expect(",")
            out.append(expr())
        expect(")")
        return out

    def fresh():
        return f"{label}.{next(counter)}"

    def expr() -> Bundle:
        nonlocal i
        if i >= len(toks):
            raise ConfigError(f"unexpected end of bundle expression {text!r}")
        kind, val = toks[i]
        if kind == "num":
            i += 1
            expect("*")
            inner = expr()
            reps = int(val)
            if reps < 1:
                raise ConfigError("multiplicity must be positive")
            return direct_sum(*[_relabel(inner, fresh) for _ in range(reps)])
        if kind != "name":
            raise ConfigError(f"unexpected {val!r} in bundle expression {text!r}")
        i += 1
        if val == "U":
            return base_u()
        if val == "Q":
            return base_q()
        if val == "O":
            if peek("("):
                expect("(")
                if not peek() or peek()[0] != "num":
                    raise ConfigError("O(m) needs an integer twist")
                m = int(toks[i][1])
                i += 1
                expect(")")
            else:
                m = 0
            return trivial(1, fresh()) if m == 0 else line(m)
        if val == "triv":
            expect("(")
            r = int(toks[i][1])
            i += 1
            expect(")")
            return trivial(r, fresh())
        if val in names:
            return named(val)
        unary = {"dual": dual, "wedge2": wedge2, "sym2": sym2, "det": det}
        if val in unary:
            a = args()
            if len(a) != 1:
                raise ConfigError(f"{val} takes one argument")
            return unary[val](a[0])
        if val == "sum":
            return direct_sum(*args())
        if val == "tensor":
            a = args()
            if len(a) < 2:
                raise ConfigError("tensor takes at least two arguments")
            out = a[0]
            for x in a[1:]:
                out = tensor(out, x)
            return out
        raise ConfigError(f"unknown bundle {val!r} in {text!r}")

    out = expr()
    if i != len(toks):
        raise ConfigError(f"trailing input in bundle expression {text!r}")
    return out


def _relabel(b: Bundle, fresh) -> Bundle:
    if b.kind == "triv":
        return trivial(b.args[0], fresh())
    if not b.args or not any(isinstance(a, Bundle) for a in b.args):
        return b
    return Bundle(b.kind, tuple(_relabel(a, fresh) if isinstance(a, Bundle) else a for a in b.args))


def frame_summands(b: Bundle, label: str) -> Bundle:
    """Give every top-level summand its own torus character.

    Repeated summands such as ``O(-1) ⊕ O(-1)`` would otherwise share Chern
    roots, and a flag bundle built on them would have zero tangent weights.
    """
    parts = b.args if b.kind == "sum" else (b,)
    return direct_sum(*[twist(p, f"{label}#{i}") for i, p in enumerate(parts)])
