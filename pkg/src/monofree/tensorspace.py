"""Monotone tensor products at truncation.

``TensorPoly`` holds finite sums of simple tensors ``w_1 x ... x w_n`` of
normal words, one presentation per leg.  Arithmetic is leg-wise.  Lattices
of tensor products are diagonal: ``L^(n) = {q_j x ... x q_j}``, and domain
sequences advance on all legs with the common index m.

A one-leg ``TensorPoly`` is allowed so that single-algebra operators can share
the state-evaluation code; the product lattices need two or more legs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .algebras import F0, H0, AlgebraPresentation
from .errors import ClosureError, PresentationError
from .monotone import Level, MonotoneOp, Msdd, meet
from .ncpoly import (
    INF,
    PLAIN,
    Gen,
    NCPolynomial,
    Proj,
    _accumulate,
    _tidy,
    coeff,
    format_coeff,
    format_word,
    intern,
    star_word,
    word_key,
    word_level,
)


class TensorPoly:
    """Finite map ``(word_1, ..., word_n) -> rational`` with leg-wise normal words."""

    __slots__ = ("legs", "terms")

    def __init__(self, legs: Sequence[AlgebraPresentation], terms=None):
        self.legs = tuple(legs)
        out: dict = {}
        for ws, c in dict(terms or {}).items():
            if len(ws) != len(self.legs):
                raise PresentationError("term arity does not match the number of legs")
            red = []
            for pres, w in zip(self.legs, ws):
                w = pres.reduce_word(intern(w))
                if w is None:
                    break
                red.append(w)
            else:
                c = coeff(c)
                if c:
                    _accumulate(out, tuple(red), c)
        self.terms = out

    @classmethod
    def _raw(cls, legs, terms: dict) -> "TensorPoly":
        t = cls.__new__(cls)
        t.legs = legs
        t.terms = terms
        return t

    @classmethod
    def zero(cls, legs) -> "TensorPoly":
        return cls._raw(tuple(legs), {})

    @classmethod
    def one(cls, legs) -> "TensorPoly":
        legs = tuple(legs)
        return cls._raw(legs, {((),) * len(legs): 1})

    @classmethod
    def simple(cls, legs, polys: Sequence[NCPolynomial]) -> "TensorPoly":
        """``x_1 x x_2 x ... x x_n`` for polynomials reduced in their legs."""
        legs = tuple(legs)
        if len(polys) != len(legs):
            raise PresentationError("one polynomial per leg is required")
        terms = {(): 1}
        for pres, x in zip(legs, polys):
            x = pres.reduce(x)
            terms = {ws + (w,): _tidy(c * d) for ws, c in terms.items() for w, d in x.terms.items()}
        return cls._raw(legs, terms)

    @classmethod
    def from_poly(cls, pres: AlgebraPresentation, x: NCPolynomial) -> "TensorPoly":
        return cls._raw((pres,), {(w,): c for w, c in pres.reduce(x).terms.items()})

    @classmethod
    def lattice(cls, legs, levels) -> "TensorPoly":
        """``q_{l_1} x ... x q_{l_n}``; zero if any level is 0."""
        legs = tuple(legs)
        if isinstance(levels, (int, float)):
            levels = (levels,) * len(legs)
        ws = []
        for pres, lv in zip(legs, levels):
            if lv == 0:
                return cls.zero(legs)
            ws.append(() if lv == INF else intern((Proj(pres.label, lv),)))
        return cls._raw(legs, {tuple(ws): 1})

    # container protocol ---------------------------------------------------------
    @property
    def n_legs(self) -> int:
        return len(self.legs)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "TensorPoly"):
        if self.legs != other.legs:
            raise PresentationError("tensor polynomials have different legs")

    def __eq__(self, other):
        if isinstance(other, TensorPoly):
            return self.legs == other.legs and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == TensorPoly.one(self.legs) * other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # arithmetic ----------------------------------------------------------------------
    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        if not isinstance(other, TensorPoly):
            other = TensorPoly.one(self.legs) * other
        self._check(other)
        out = dict(self.terms)
        for ws, c in other.terms.items():
            _accumulate(out, ws, c)
        return TensorPoly._raw(self.legs, out)

    __radd__ = __add__

    def __neg__(self):
        return TensorPoly._raw(self.legs, {ws: -c for ws, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorPoly):
            other = TensorPoly.one(self.legs) * other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorPoly):
            return self.multiply(other)
        c = coeff(other)
        if not c:
            return TensorPoly.zero(self.legs)
        return TensorPoly._raw(self.legs, {ws: _tidy(v * c) for ws, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def multiply(self, other: "TensorPoly") -> "TensorPoly":
        """Leg-wise product ``(a x b)(c x d) = ac x bd``, reduced per leg."""
        self._check(other)
        concats = [p.concat for p in self.legs]
        n = len(concats)
        out: dict = {}
        for us, a in self.terms.items():
            for vs, b in other.terms.items():
                ws = []
                for i in range(n):
                    w = concats[i](us[i], vs[i])
                    if w is None:
                        break
                    ws.append(w)
                else:
                    _accumulate(out, tuple(ws), a * b)
        return TensorPoly._raw(self.legs, out)

    def star(self) -> "TensorPoly":
        """Leg-wise involution ``(a x b)* = a* x b*``."""
        return TensorPoly._raw(self.legs, {tuple(star_word(w) for w in ws): c for ws, c in self.terms.items()})

    def level(self) -> int:
        return max((word_level(w) for ws in self.terms for w in ws), default=0)

    def leg_levels(self) -> tuple:
        return tuple(max((word_level(ws[i]) for ws in self.terms), default=0) for i in range(self.n_legs))

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, ws in enumerate(sorted(self.terms, key=lambda t: tuple(word_key(w) for w in t))):
            c = self.terms[ws]
            mag = -c if c < 0 else c
            body = " (x) ".join(format_word(w) for w in ws)
            text = body if mag == 1 else f"{format_coeff(mag)} {body}"
            sign = ("-" if c < 0 else "") if i == 0 else ("- " if c < 0 else "+ ")
            parts.append(sign + text)
        return " ".join(parts)

    __str__ = format

    def __repr__(self):
        return f"TensorPoly({self.format()!r})"


def tensor(a: TensorPoly, b: TensorPoly) -> TensorPoly:
    """Concatenate legs: ``a x b`` as an ``(n_a + n_b)``-leg polynomial."""
    terms = {}
    for us, x in a.terms.items():
        for vs, y in b.terms.items():
            terms[us + vs] = _tidy(x * y)
    return TensorPoly._raw(a.legs + b.legs, terms)


def compress_left(w: TensorPoly, level: Level = 1) -> TensorPoly:
    return TensorPoly.lattice(w.legs, level).multiply(w)


def compress_right(w: TensorPoly, level: Level = 1) -> TensorPoly:
    return w.multiply(TensorPoly.lattice(w.legs, level))


def compress_E(w: TensorPoly) -> TensorPoly:
    """``E(w) = (q_1 x ... x q_1) w (q_1 x ... x q_1)``."""
    return compress_right(compress_left(w))


def contract(w: TensorPoly, leg: int, functional: Callable) -> TensorPoly:
    """Apply a scalar functional on words to one leg; that leg disappears."""
    legs = w.legs[:leg] + w.legs[leg + 1:]
    out: dict = {}
    for ws, c in w.terms.items():
        v = functional(ws[leg])
        if v:
            _accumulate(out, ws[:leg] + ws[leg + 1:], c * v)
    return TensorPoly._raw(legs, out)


def scalar_of(w: TensorPoly):
    """The coefficient of a zero-leg polynomial."""
    if w.legs:
        raise PresentationError("polynomial still has legs")
    return w.terms.get((), 0)


# ---------------------------------------------------------------------------
# leg maps


class LegMap:
    """A unital *-homomorphism between presentations, given on letters.

    ``letter_image(letter)`` returns a polynomial in ``target`` (or, when
    ``target`` is None, a scalar: the map is then a character).  Images of
    words are computed multiplicatively and memoized.
    """

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation | None,
                 letter_image: Callable, name: str = ""):
        self.source = source
        self.target = target
        self._letter = letter_image
        self.name = name
        self._memo: dict = {}

    @property
    def scalar(self) -> bool:
        return self.target is None

    def word(self, w):
        """Image of a normal word of ``source``."""
        try:
            return self._memo[w]
        except KeyError:
            pass
        if self.scalar:
            out = 1
            for a in w:
                out = _tidy(out * coeff(self._letter(a)))
                if not out:
                    break
        else:
            out = NCPolynomial.one()
            for a in w:
                out = self.target.mul(out, self._letter(a))
                if out.is_zero():
                    break
        return self._memo.setdefault(w, out)

    def __call__(self, x: NCPolynomial):
        x = self.source.reduce(x)
        if self.scalar:
            total = 0
            for w, c in x.terms.items():
                total = _tidy(total + c * self.word(w))
            return total
        out: dict = {}
        for w, c in x.terms.items():
            for v, d in self.word(w).terms.items():
                _accumulate(out, v, c * d)
        return NCPolynomial._raw(out)

    def level(self, e: Level) -> Level:
        """Level of the image of ``q_e``; raises unless it is a lattice element."""
        if e == 0:
            return 0
        if e == INF:
            return INF
        img = self.word(intern((Proj(self.source.label, e),)))
        if self.scalar:
            if img in (0, 1):
                return INF if img == 1 else 0
            raise ClosureError(f"{self.name}: image of q_{e} is not 0 or 1")
        if img.is_zero():
            return 0
        if len(img) == 1:
            (w, c), = img.terms.items()
            if c == 1 and w == ():
                return INF
            if c == 1 and len(w) == 1 and type(w[0]) is Proj:
                return w[0].level
        raise ClosureError(f"{self.name}: image of q_{e} is not in the target lattice")

    def fixes_q1(self) -> bool:
        try:
            return self.level(1) == 1
        except ClosureError:
            return False

    def __repr__(self):
        return f"LegMap({self.name})"


def identity_map(pres: AlgebraPresentation) -> LegMap:
    return LegMap(pres, pres, NCPolynomial.letter, name="id")


def identification_map(source: AlgebraPresentation, target: AlgebraPresentation) -> LegMap:
    """``i``: ``X'(k), X''(k) -> X(k)``, projections fixed.

    Applied to normal forms only, where ``X''(1)`` never occurs; on those
    the decoration-dropping map is multiplicative.
    """
    if source.schema != F0 or target.schema != H0:
        raise PresentationError("identification maps F0 into H0")
    lab = target.label

    def image(a):
        if type(a) is Proj:
            return NCPolynomial.letter(Proj(lab, a.level))
        return NCPolynomial.letter(Gen(lab, a.name, a.copy, PLAIN, a.star))

    return LegMap(source, target, image, name="i")


def shift_map(pres: AlgebraPresentation, d: int = 1) -> LegMap:
    """``X(k) -> X(k+d)``, ``q_m -> q_{m+d}``."""

    def image(a):
        if type(a) is Proj:
            return NCPolynomial.letter(a if a.level == INF else a._replace(level=a.level + d))
        return NCPolynomial.letter(a._replace(copy=a.copy + d))

    return LegMap(pres, pres, image, name=f"shift{d}")


def counit_map(pres: AlgebraPresentation) -> LegMap:
    """``eps``: generators to 0, nonzero projections to 1."""

    def image(a):
        if type(a) is Proj:
            return 1 if a.level > 0 else 0
        return 0

    return LegMap(pres, None, image, name="eps")


def apply_maps(w: TensorPoly, maps: Sequence[LegMap | None]) -> TensorPoly:
    """Apply one map per leg (``None`` = identity); scalar maps remove their leg."""
    if len(maps) != w.n_legs:
        raise PresentationError("one map per leg is required")
    out_legs = tuple(p if m is None else m.target for m, p in zip(maps, w.legs)
                     if m is None or not m.scalar)
    out: dict = {}
    for ws, c in w.terms.items():
        partial = {(): c}
        for m, v in zip(maps, ws):
            if m is None:
                partial = {k + (v,): x for k, x in partial.items()}
            elif m.scalar:
                s = m.word(v)
                partial = {k: _tidy(x * s) for k, x in partial.items()} if s else {}
            else:
                img = m.word(v)
                partial = {k + (u,): _tidy(x * d) for k, x in partial.items() for u, d in img.terms.items()}
            if not partial:
                break
        for k, x in partial.items():
            if x:
                _accumulate(out, k, x)
    return TensorPoly._raw(out_legs, out)


# ---------------------------------------------------------------------------
# domains and operators


class TensorMsdd:
    """Per-leg domain sequences advanced with the common index m."""

    def __init__(self, per_leg: Sequence[Msdd]):
        self.per_leg = tuple(per_leg)

    @classmethod
    def diagonal(cls, msdd: Msdd, n: int) -> "TensorMsdd":
        return cls((msdd,) * n)

    def level(self, m: int) -> tuple:
        return tuple(d.level(m) for d in self.per_leg)

    def levels(self, upto: int) -> list:
        return [self.level(m) for m in range(1, upto + 1)]

    def is_monotone(self, upto: int) -> bool:
        return all(d.is_monotone(upto) for d in self.per_leg)

    def same(self, other: "TensorMsdd", upto: int) -> bool:
        return self.levels(upto) == other.levels(upto)

    def __repr__(self):
        return f"TensorMsdd({list(self.per_leg)!r})"


def tensor_meet(a: TensorMsdd, b: TensorMsdd) -> TensorMsdd:
    return TensorMsdd(meet(x, y) for x, y in zip(a.per_leg, b.per_leg))


class TensorMonotoneOp:
    """Representative ``(z_m, r_m)`` of an operator affiliated with a tensor product."""

    def __init__(self, legs, rule: Callable[[int], TensorPoly], msdd: TensorMsdd,
                 cap: int | None = None, recipe=("custom",), verify: bool = True, name: str = ""):
        self.legs = tuple(legs)
        self._rule = rule
        self.msdd = msdd
        self.cap = cap
        self.recipe = recipe
        self.verify = verify
        self.name = name
        self._cache: dict = {}

    def at(self, m: int) -> TensorPoly:
        z = self._cache.get(m)
        if z is not None:
            return z
        if m < 1:
            raise ValueError("operator index starts at 1")
        if self.cap is not None and m > self.cap:
            raise ClosureError(f"index {m} exceeds the truncation cap {self.cap}")
        z = self._rule(m)
        if z.legs != self.legs:
            raise PresentationError("rule produced a polynomial over the wrong legs")
        if self.verify:
            self._verify(m, z)
        return self._cache.setdefault(m, z)

    def star_at(self, m: int) -> TensorPoly:
        return self.at(m).star()

    def domain(self, m: int) -> TensorPoly:
        return TensorPoly.lattice(self.legs, self.msdd.level(m))

    def _verify(self, m: int, z: TensorPoly) -> None:
        if z.level() > m:
            raise ClosureError(f"{self.name or 'operator'}: z_{m} has filtration level {z.level()} > {m}")
        zs = z.star()
        for j, y in list(self._cache.items()):
            lo, lo_z, lo_zs, hi_z, hi_zs = (j, y, y.star(), z, zs) if j < m else (m, z, zs, y, y.star())
            r = self.domain(lo)
            if hi_z.multiply(r) != lo_z.multiply(r) or hi_zs.multiply(r) != lo_zs.multiply(r):
                raise ClosureError(
                    f"{self.name or 'operator'}: coherence fails between indices {lo} and {max(j, m)}"
                )

    def check(self, upto: int) -> "TensorMonotoneOp":
        saved, self.verify = self.verify, True
        try:
            for m in range(1, upto + 1):
                if m not in self._cache:
                    self.at(m)
        finally:
            self.verify = saved
        return self

    def __add__(self, other):
        return tensor_add(self, other)

    def __sub__(self, other):
        return tensor_add(self, tensor_scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, TensorMonotoneOp):
            return tensor_mul(self, other)
        return tensor_scale(other, self)

    def __rmul__(self, other):
        return tensor_scale(other, self)

    def __neg__(self):
        return tensor_scale(-1, self)

    def star(self):
        return tensor_star(self)

    def __repr__(self):
        return f"TensorMonotoneOp({self.name or self.recipe[0]}, legs={len(self.legs)})"


def _cap(*ops):
    caps = [o.cap for o in ops if o.cap is not None]
    return min(caps) if caps else None


def _same_legs(a: TensorMonotoneOp, b: TensorMonotoneOp):
    if a.legs != b.legs:
        raise ClosureError("operands have different legs")


def tensor_inverse_image(w: TensorPoly, r: tuple) -> Level:
    """Largest common level j with ``r w g_j = w g_j`` for ``g_j = q_j x ... x q_j``."""
    if all(lv == INF for lv in r):
        return INF
    rp = TensorPoly.lattice(w.legs, r)

    def annihilated(j):
        wg = w.multiply(TensorPoly.lattice(w.legs, j))
        return rp.multiply(wg) == wg

    if annihilated(INF):
        return INF
    for j in range(w.level(), 0, -1):
        if annihilated(j):
            return j
    return 0


def tensor_identity(legs, cap: int | None = None) -> TensorMonotoneOp:
    legs = tuple(legs)
    one = TensorPoly.one(legs)
    return TensorMonotoneOp(legs, lambda m: one, TensorMsdd.diagonal(Msdd.unit_shift(0), len(legs)), cap,
                            ("embed", one), name="1")


def tensor_add(a: TensorMonotoneOp, b: TensorMonotoneOp) -> TensorMonotoneOp:
    _same_legs(a, b)
    return TensorMonotoneOp(a.legs, lambda m: a.at(m) + b.at(m), tensor_meet(a.msdd, b.msdd), _cap(a, b),
                            ("add", a, b), a.verify and b.verify, f"({a.name}+{b.name})")


def tensor_scale(c, a: TensorMonotoneOp) -> TensorMonotoneOp:
    c = coeff(c)
    return TensorMonotoneOp(a.legs, lambda m: a.at(m) * c, a.msdd, a.cap, ("scale", c, a), a.verify,
                            f"{c}*{a.name}")


def tensor_star(a: TensorMonotoneOp) -> TensorMonotoneOp:
    return TensorMonotoneOp(a.legs, lambda m: a.at(m).star(), a.msdd, a.cap, ("star", a), a.verify,
                            f"{a.name}*")


def tensor_product_domain(a: TensorMonotoneOp, b: TensorMonotoneOp) -> TensorMsdd:
    """``k_m = r_m s_m w_m^{-1}(r_m) (z_m^*)^{-1}(s_m)``, inverse images taken in ``L^(n)``."""
    cache: dict = {}

    def at(m):
        if m not in cache:
            r, s = a.msdd.level(m), b.msdd.level(m)
            g1 = g2 = INF
            if min(r + s) > 0:
                g1 = tensor_inverse_image(b.at(m), r)
                if g1 > 0:
                    g2 = tensor_inverse_image(a.star_at(m), s)
            cache[m] = tuple(min(x, y, g1, g2) for x, y in zip(r, s))
        return cache[m]

    return TensorMsdd(Msdd.explicit(lambda m, i=i: at(m)[i]) for i in range(len(a.legs)))


def tensor_mul(a: TensorMonotoneOp, b: TensorMonotoneOp) -> TensorMonotoneOp:
    _same_legs(a, b)
    return TensorMonotoneOp(a.legs, lambda m: a.at(m).multiply(b.at(m)), tensor_product_domain(a, b),
                            _cap(a, b), ("mul", a, b), a.verify and b.verify, f"{a.name}{b.name}")


def tensor_product(*ops: TensorMonotoneOp) -> TensorMonotoneOp:
    """Right-nested product of tensor operators."""
    if not ops:
        raise ValueError("empty product")
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = tensor_mul(op, out)
    return out


def tensor_of(a: MonotoneOp, b: MonotoneOp) -> TensorMonotoneOp:
    """``[x_m, e_m] x [y_m, f_m] = [x_m x y_m, e_m x f_m]``."""
    legs = (a.pres, b.pres)
    return TensorMonotoneOp(legs, lambda m: TensorPoly.simple(legs, (a.at(m), b.at(m))),
                            TensorMsdd((a.msdd, b.msdd)), _cap(a, b), ("custom",), a.verify and b.verify,
                            f"{a.name}(x){b.name}")


def as_tensor_op(a: MonotoneOp) -> TensorMonotoneOp:
    """A single-algebra operator viewed as a one-leg tensor operator."""
    if a.recipe[0] == "mul":
        return tensor_mul(as_tensor_op(a.recipe[1]), as_tensor_op(a.recipe[2]))
    return TensorMonotoneOp((a.pres,), lambda m: TensorPoly.from_poly(a.pres, a.at(m)), TensorMsdd((a.msdd,)),
                            a.cap, ("custom",), a.verify, a.name)


def map_legs(op: TensorMonotoneOp, maps: Sequence[LegMap | None]) -> TensorMonotoneOp:
    """``(tau x sigma x ...)[z_m, r_m] = [(tau x sigma)(z_m), tau(e_m) x sigma(f_m)]``.

    Every map must send lattice elements to lattice elements; otherwise
    the domain cannot be transported and :class:`ClosureError` is raised
    when it is requested.
    """
    maps = tuple(maps)
    if len(maps) != len(op.legs):
        raise PresentationError("one map per leg is required")
    for m, p in zip(maps, op.legs):
        if m is not None and m.source is not p:
            raise PresentationError(f"map {m.name} does not start at the leg presentation")
    legs = tuple(p if m is None else m.target for m, p in zip(maps, op.legs))
    out_legs = tuple(p for p in legs if p is not None)

    def levels(m):
        lv = op.msdd.level(m)
        out, gate = [], True
        for mp, e in zip(maps, lv):
            img = e if mp is None else mp.level(e)
            if mp is not None and mp.scalar:
                gate = gate and img != 0
            else:
                out.append(img)
        return tuple(x if gate else 0 for x in out)

    domain = TensorMsdd(Msdd.explicit(lambda m, i=i: levels(m)[i]) for i in range(len(out_legs)))
    return TensorMonotoneOp(out_legs, lambda m: apply_maps(op.at(m), maps), domain, op.cap,
                            ("map", op, maps), op.verify, f"map({op.name})")


def tensor_factors(op: TensorMonotoneOp) -> tuple:
    """``(factors, maps)``: ``op`` equals the product of ``factors`` pushed through ``maps``.

    ``maps`` is a list of per-leg map tuples applied in order; only maps
    that keep every leg and fix ``q_1`` are looked through, so compressing
    before mapping is the same as compressing after.
    """
    kind = op.recipe[0]
    if kind == "mul":
        fa, ma = tensor_factors(op.recipe[1])
        fb, mb = tensor_factors(op.recipe[2])
        if ma == mb:
            return fa + fb, ma
    if kind == "map":
        inner, maps = op.recipe[1], op.recipe[2]
        if all(m is None or (not m.scalar and m.fixes_q1()) for m in maps):
            f, ms = tensor_factors(inner)
            return f, ms + [maps]
    return [op], []


def tensor_equivalent(a: TensorMonotoneOp, b: TensorMonotoneOp, upto: int):
    """Equivalence test with ``g_m = r_m s_m``; returns ``(holds, first_failure)``."""
    _same_legs(a, b)
    g = tensor_meet(a.msdd, b.msdd)
    for m in range(1, upto + 1):
        gm = TensorPoly.lattice(a.legs, g.level(m))
        if gm.is_zero():
            continue
        if a.at(m).multiply(gm) != b.at(m).multiply(gm) or a.star_at(m).multiply(gm) != b.star_at(m).multiply(gm):
            return False, m
    return True, None
