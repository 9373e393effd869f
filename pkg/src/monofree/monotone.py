"""Operators with monotone closure over a filtered algebra.

An operator is a sequence ``m -> x_m`` together with a monotone domain
sequence ``m -> e_m`` of lattice projections.  Both are produced lazily and
memoized.  Products keep a ``recipe`` recording their factors so that
homomorphic images (coproduct, leg maps) can be taken factor by factor
without ever expanding ``x_m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Union

from .algebras import F0, AlgebraPresentation
from .errors import ClosureError
from .ncpoly import DPRIME, INF, PRIME, Gen, NCPolynomial, Proj, coeff, involute, multiply

Level = Union[int, float]


def _clamp(level) -> Level:
    return 0 if level <= 0 else level


class Msdd:
    """Monotone sequence ``m -> level`` (level 0 is the zero projection, INF the unit).

    Kinds: ``lattice_shift`` (``q_{m-k}``), ``unit_shift`` (``1`` once m > k)
    and ``explicit`` (any memoized rule, optionally a finite prefix followed
    by a shift rule).
    """

    def __init__(self, kind: str, shift: int = 0, rule: Callable[[int], Level] | None = None):
        self.kind = kind
        self.shift = shift
        self._rule = rule
        self._memo: dict = {}

    @classmethod
    def lattice_shift(cls, k: int = 0) -> "Msdd":
        return cls("lattice_shift", k)

    @classmethod
    def unit_shift(cls, k: int = 0) -> "Msdd":
        return cls("unit_shift", k)

    @classmethod
    def explicit(cls, rule: Callable[[int], Level]) -> "Msdd":
        return cls("explicit", rule=rule)

    @classmethod
    def from_levels(cls, prefix, tail: "Msdd | None" = None) -> "Msdd":
        """``prefix[m-1]`` for m <= len(prefix), then ``tail``."""
        prefix = tuple(prefix)

        def rule(m):
            if m <= len(prefix):
                return prefix[m - 1]
            if tail is None:
                raise ClosureError(f"domain level {m} beyond the explicit prefix")
            return tail.level(m)

        return cls.explicit(rule)

    def level(self, m: int) -> Level:
        if m < 1:
            return 0
        if self.kind == "lattice_shift":
            return _clamp(m - self.shift)
        if self.kind == "unit_shift":
            return INF if m > self.shift else 0
        try:
            return self._memo[m]
        except KeyError:
            return self._memo.setdefault(m, self._rule(m))

    __call__ = level

    def levels(self, upto: int) -> list:
        return [self.level(m) for m in range(1, upto + 1)]

    def is_monotone(self, upto: int) -> bool:
        lv = self.levels(upto)
        return all(a <= b for a, b in zip(lv, lv[1:]))

    def same(self, other: "Msdd", upto: int) -> bool:
        return self.levels(upto) == other.levels(upto)

    def identify(self, upto: int) -> "Msdd":
        """The simplest shift descriptor agreeing with ``self`` on ``1..upto``."""
        if self.kind != "explicit":
            return self
        for k in range(upto + 1):
            for cand in (Msdd.lattice_shift(k), Msdd.unit_shift(k)):
                if self.same(cand, upto):
                    return cand
        return self

    def __repr__(self):
        if self.kind == "explicit":
            return "Msdd.explicit(...)"
        return f"Msdd.{self.kind}({self.shift})"


def meet(*domains: Msdd) -> Msdd:
    """Pointwise product (lattice meet) of domain sequences."""
    return Msdd.explicit(lambda m: min(d.level(m) for d in domains))


def lattice_poly(pres: AlgebraPresentation, level: Level, label: str | None = None) -> NCPolynomial:
    """``q_level`` as a reduced polynomial (zero for level 0, unit for INF)."""
    return pres.reduce(NCPolynomial.letter(Proj(label or pres.label, level)))


def inverse_image(x: NCPolynomial, e: Level, pres: AlgebraPresentation, label: str | None = None) -> Level:
    """Largest lattice level g with ``e x g == x g``.

    The solution set is downward closed, and ``x q_j == x`` for every j above
    the filtration level of ``x``, so checking ``INF`` and then
    ``level(x), ..., 1`` in descending order suffices.
    """
    if e == INF:
        return INF
    label = label or pres.label
    eq = lattice_poly(pres, e, label)

    def annihilated(g):
        xg = multiply(x, lattice_poly(pres, g, label), pres)
        return multiply(eq, xg, pres) == xg

    if annihilated(INF):
        return INF
    for j in range(x.level(), 0, -1):
        if annihilated(j):
            return j
    return 0


class MonotoneOp:
    """A chosen representative ``(x_m, e_m)`` of a monotone closed operator.

    ``rule(m)`` yields ``x_m`` (reduced on materialization).  With
    ``verify=True`` every materialized ``x_m`` is checked for
    ``x_m in B^(m)`` and for coherence with all previously materialized
    indices; violations raise :class:`ClosureError`.
    """

    def __init__(self, pres: AlgebraPresentation, rule: Callable[[int], NCPolynomial], msdd: Msdd,
                 cap: int | None = None, recipe=("custom",), verify: bool = True, name: str = ""):
        self.pres = pres
        self._rule = rule
        self.msdd = msdd
        self.cap = cap
        self.recipe = recipe
        self.verify = verify
        self.name = name
        self._cache: dict = {}

    def at(self, m: int) -> NCPolynomial:
        x = self._cache.get(m)
        if x is not None:
            return x
        if m < 1:
            raise ValueError("operator index starts at 1")
        if self.cap is not None and m > self.cap:
            raise ClosureError(f"index {m} exceeds the truncation cap {self.cap}")
        x = self.pres.reduce(self._rule(m))
        if self.verify:
            self._verify(m, x)
        return self._cache.setdefault(m, x)

    def star_at(self, m: int) -> NCPolynomial:
        return involute(self.at(m))

    def domain(self, m: int) -> NCPolynomial:
        return lattice_poly(self.pres, self.msdd.level(m))

    def _verify(self, m: int, x: NCPolynomial) -> None:
        if x.level() > m:
            raise ClosureError(f"{self.name or 'operator'}: x_{m} has filtration level {x.level()} > {m}")
        pres = self.pres
        xs = involute(x)
        for j, y in list(self._cache.items()):
            lo, lo_x, lo_xs, hi_x, hi_xs = (
                (j, y, involute(y), x, xs) if j < m else (m, x, xs, y, involute(y))
            )
            e = self.domain(lo)
            if multiply(hi_x, e, pres) != multiply(lo_x, e, pres) or \
                    multiply(hi_xs, e, pres) != multiply(lo_xs, e, pres):
                raise ClosureError(
                    f"{self.name or 'operator'}: coherence fails between indices {lo} and {max(j, m)}"
                )

    def check(self, upto: int) -> "MonotoneOp":
        """Materialize ``1..upto`` with verification switched on."""
        saved, self.verify = self.verify, True
        try:
            for m in range(1, upto + 1):
                if m in self._cache:
                    continue
                self.at(m)
        finally:
            self.verify = saved
        return self

    # arithmetic sugar ---------------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        if isinstance(other, MonotoneOp):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def star(self):
        return star(self)

    def __repr__(self):
        return f"MonotoneOp({self.name or self.recipe[0]}, msdd={self.msdd!r})"


def _cap(*ops) -> int | None:
    caps = [o.cap for o in ops if o.cap is not None]
    return min(caps) if caps else None


def _same_pres(a: MonotoneOp, b: MonotoneOp) -> None:
    if a.pres is not b.pres:
        raise ClosureError("operands live over different presentations")


def add(a: MonotoneOp, b: MonotoneOp) -> MonotoneOp:
    _same_pres(a, b)
    return MonotoneOp(a.pres, lambda m: a.at(m) + b.at(m), meet(a.msdd, b.msdd), _cap(a, b),
                      ("add", a, b), verify=a.verify and b.verify, name=f"({a.name}+{b.name})")


def scale(c, a: MonotoneOp) -> MonotoneOp:
    c = coeff(c)
    return MonotoneOp(a.pres, lambda m: a.at(m) * c, a.msdd, a.cap, ("scale", c, a),
                      verify=a.verify, name=f"{c}*{a.name}")


def star(a: MonotoneOp) -> MonotoneOp:
    return MonotoneOp(a.pres, lambda m: involute(a.at(m)), a.msdd, a.cap, ("star", a),
                      verify=a.verify, name=f"{a.name}*")


def product_domain(a: MonotoneOp, b: MonotoneOp) -> Msdd:
    """``k_m = f_m . y_m^{-1}(e_m) . e_m . (x_m^*)^{-1}(f_m)`` for ``a=(x,e)``, ``b=(y,f)``."""
    pres = a.pres

    def rule(m):
        e, f = a.msdd.level(m), b.msdd.level(m)
        if min(e, f) == 0:
            return 0
        g1 = inverse_image(b.at(m), e, pres)
        if g1 == 0:
            return 0
        g2 = inverse_image(a.star_at(m), f, pres)
        return min(e, f, g1, g2)

    return Msdd.explicit(rule)


def mul(a: MonotoneOp, b: MonotoneOp) -> MonotoneOp:
    _same_pres(a, b)
    pres = a.pres
    return MonotoneOp(pres, lambda m: multiply(a.at(m), b.at(m), pres), product_domain(a, b),
                      _cap(a, b), ("mul", a, b), verify=a.verify and b.verify,
                      name=f"{a.name}{b.name}")


def product(*ops: MonotoneOp) -> MonotoneOp:
    """Right-nested product ``ops[0] (ops[1] (... ops[-1]))``."""
    if not ops:
        raise ValueError("empty product")
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = mul(op, out)
    return out


def factors(op: MonotoneOp) -> list:
    """Flatten nested products into the ordered list of their factors."""
    if op.recipe[0] == "mul":
        return factors(op.recipe[1]) + factors(op.recipe[2])
    return [op]


def preimage_domain(x: MonotoneOp, f: Msdd) -> Msdd:
    """``g_m = e_m . x_m^{-1}(f_m)``; a monotone domain for coherent ``x``."""
    return Msdd.explicit(lambda m: min(x.msdd.level(m), inverse_image(x.at(m), f.level(m), x.pres)))


def embed(x: NCPolynomial, pres: AlgebraPresentation, cap: int | None = None) -> MonotoneOp:
    """``[x_m, 1_{m-k}]`` with ``x_m = 0`` for m <= k and ``x`` afterwards, k the level of x."""
    x = pres.reduce(x)
    k = x.level()
    zero = NCPolynomial.zero()
    return MonotoneOp(pres, lambda m: x if m > k else zero, Msdd.unit_shift(k), cap,
                      ("embed", x), name=pres.format(x))


def identity(pres: AlgebraPresentation, cap: int | None = None) -> MonotoneOp:
    return embed(NCPolynomial.one(), pres, cap)


def delta_letter(pres: AlgebraPresentation, gen: str, k: int, star: bool = False) -> NCPolynomial:
    """``dX(1) = X'(1)`` and ``dX(k) = X'(k) - X''(k)`` for k > 1."""
    lab = pres.label
    out = NCPolynomial.letter(Gen(lab, gen, k, PRIME, star))
    if k > 1:
        out = out - NCPolynomial.letter(Gen(lab, gen, k, DPRIME, star))
    return out


def prefree(pres: AlgebraPresentation, gen: str, cap: int | None = None) -> MonotoneOp:
    """Pre-free variable ``[sum_{k<=m} dX(k), q_m]``."""
    if pres.schema != F0:
        raise ClosureError("pre-free variables live in F0")
    cache: dict = {0: NCPolynomial.zero()}

    def rule(m):
        if m not in cache:
            cache[m] = rule(m - 1) + delta_letter(pres, gen, m)
        return cache[m]

    return MonotoneOp(pres, rule, Msdd.lattice_shift(0), cap, ("prefree", gen), name=gen)


def delayed(op: MonotoneOp, d: int = 1) -> MonotoneOp:
    """Representative ``(x_{m-d}, e_{m-d})`` of the same closed operator."""
    zero = NCPolynomial.zero()
    dom = Msdd.explicit(lambda m: op.msdd.level(m - d))
    return MonotoneOp(op.pres, lambda m: op.at(m - d) if m > d else zero, dom,
                      None if op.cap is None else op.cap + d, ("custom",), op.verify,
                      name=f"delay{d}({op.name})")


def shrunk(op: MonotoneOp, d: int = 1) -> MonotoneOp:
    """Same ``x_m`` on the smaller domain ``e_{m-d}``."""
    dom = Msdd.explicit(lambda m: min(op.msdd.level(m), op.msdd.level(m - d)))
    return MonotoneOp(op.pres, op.at, dom, op.cap, ("custom",), op.verify, name=f"shrink{d}({op.name})")


@dataclass
class Equivalence:
    """Outcome of an equivalence test on indices ``1..upto``."""

    holds: bool
    witness: Msdd
    upto: int
    first_failure: int | None = None

    def __bool__(self):
        return self.holds

    def __str__(self):
        if self.holds:
            return f"equivalent up to truncation {self.upto}"
        return f"not equivalent (first failure at m={self.first_failure})"


def equivalent(a: MonotoneOp, b: MonotoneOp, upto: int) -> Equivalence:
    """Test ``x_m g_m == y_m g_m`` and the starred analog with ``g_m = e_m f_m``."""
    _same_pres(a, b)
    pres = a.pres
    g = meet(a.msdd, b.msdd)
    for m in range(1, upto + 1):
        gm = lattice_poly(pres, g.level(m))
        if gm.is_zero():
            continue
        if multiply(a.at(m), gm, pres) != multiply(b.at(m), gm, pres) or \
                multiply(a.star_at(m), gm, pres) != multiply(b.star_at(m), gm, pres):
            return Equivalence(False, g, upto, m)
    return Equivalence(True, g, upto)


def alternative_product(ops, pres: AlgebraPresentation | None = None) -> MonotoneOp:
    """``[x1_{m+n-1} x2_{m+n-2} ... xn_m, q_m]`` for operators ``x1..xn``.

    Its entries leave ``B^(m)``, so filtration checks are off.
    """
    ops = list(ops)
    pres = pres or ops[0].pres
    n = len(ops)

    def rule(m):
        out = NCPolynomial.one()
        for i, op in enumerate(ops):
            out = multiply(out, op.at(m + n - 1 - i), pres)
        return out

    return MonotoneOp(pres, rule, Msdd.lattice_shift(0), None, ("custom",), verify=False,
                      name="alt(" + "".join(o.name for o in ops) + ")")


def shift_of(domain: Msdd, upto: int, start: int = 1):
    """Return k if ``domain`` equals ``q_{m-k}`` on ``start..upto``, else None."""
    for k in itertools.count(0):
        if k > upto:
            return None
        if all(domain.level(m) == _clamp(m - k) for m in range(start, upto + 1)):
            return k
