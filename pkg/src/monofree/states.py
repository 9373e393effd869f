"""Moment functionals and their evaluation on copy algebras and tensor products.

A :class:`MomentSpec` is a state on the free *-algebra generated by its
generators, given by exact moments.  Its boolean extension adds a
projection ``P`` with ``mu~(w P v) = mu~(w) mu~(v)``.  A word of H0 is
evaluated site by site: copy ``X(i)`` sits at site ``i`` and ``q_m`` puts ``P``
on every site ``>= m`` (the map ``xi``), and the sites are multiplied.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import NonStabilizedError, ParseError, PresentationError, SpecExhaustedError
from .ncpoly import PLAIN, Gen, NCPolynomial, _tidy, coeff, format_coeff, intern
from .tensorspace import (
    TensorMonotoneOp,
    TensorPoly,
    apply_maps,
    as_tensor_op,
    tensor_factors,
)

P = None  # the boolean projection inside boolean words


def catalan_numbers(n: int) -> list:
    """``C_0..C_n`` by the convolution recursion."""
    c = [1]
    for k in range(n):
        c.append(sum(c[i] * c[k - i] for i in range(k + 1)))
    return c


class MomentSpec:
    """Exact moments of a state; ``mu(1) = 1``.

    Univariate specs (one generator, taken self-adjoint) answer ``mu(w)``
    with ``m_len(w)``.  Multivariate specs need ``word_fn``.
    """

    def __init__(self, moments: Sequence | None = None, *, label: str = "mu", generators=("X",),
                 preset: str = "custom", params: dict | None = None, max_order: int | None = None,
                 word_fn: Callable | None = None, moment_fn: Callable | None = None):
        self.label = label
        self.generators = tuple(generators)
        self.preset = preset
        self.params = dict(params or {})
        self._word_fn = word_fn
        self._moment_fn = moment_fn
        self._moments = None if moments is None else [coeff(m) for m in moments]
        if max_order is None:
            max_order = len(self._moments) if self._moments is not None else 24
        self.max_order = max_order
        self._xi_cache: dict = {}
        if word_fn is None and len(self.generators) != 1:
            raise PresentationError("multivariate specs need a word moment function")

    # presets -------------------------------------------------------------------------
    @classmethod
    def semicircle(cls, variance=1, label: str = "mu", max_order: int = 24, generator: str = "X"):
        v = coeff(variance)
        cat = catalan_numbers(max_order // 2 + 1)
        fn = (lambda n: 0 if n % 2 else _tidy(cat[n // 2] * Fraction(v) ** (n // 2)))
        return cls(label=label, generators=(generator,), preset="semicircle",
                   params={"variance": v}, max_order=max_order, moment_fn=fn)

    @classmethod
    def two_point(cls, a=-1, b=1, weight="1/2", label: str = "mu", max_order: int = 24, generator: str = "X"):
        """Mass ``weight`` at ``a`` and ``1 - weight`` at ``b``."""
        a, b, w = coeff(a), coeff(b), coeff(weight)
        fn = (lambda n: _tidy(w * Fraction(a) ** n + (1 - w) * Fraction(b) ** n))
        return cls(label=label, generators=(generator,), preset="two_point",
                   params={"a": a, "b": b, "weight": w}, max_order=max_order, moment_fn=fn)

    @classmethod
    def point(cls, c=0, label: str = "mu", max_order: int = 24, generator: str = "X"):
        c = coeff(c)
        return cls(label=label, generators=(generator,), preset="point", params={"c": c},
                   max_order=max_order, moment_fn=lambda n: _tidy(Fraction(c) ** n))

    @classmethod
    def custom(cls, moments: Sequence, label: str = "mu", generator: str = "X"):
        """Moments ``m_1, m_2, ...`` (``m_0 = 1`` is implicit)."""
        return cls(moments, label=label, generators=(generator,), preset="custom")

    @classmethod
    def from_dict(cls, data: dict) -> "MomentSpec":
        try:
            preset = data.get("preset", "custom")
            label = data.get("label", "mu")
            params = data.get("params", {})
            kw = {"label": label}
            if "max_order" in data:
                kw["max_order"] = int(data["max_order"])
            if preset == "semicircle":
                return cls.semicircle(params.get("variance", "1"), **kw)
            if preset == "two_point":
                return cls.two_point(params.get("a", "-1"), params.get("b", "1"), params.get("weight", "1/2"), **kw)
            if preset == "point":
                return cls.point(params.get("c", "0"), **kw)
            if preset == "custom":
                spec = cls.custom(data["moments"], label=label)
                if "max_order" in data:
                    spec.max_order = min(spec.max_order, int(data["max_order"]))
                return spec
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"bad moment spec {data!r}: {exc}") from exc
        raise ParseError(f"unknown preset {preset!r}")

    @classmethod
    def load(cls, path) -> "MomentSpec":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read spec {path!r}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError(f"{path}: a spec file holds a JSON object")
        return cls.from_dict(data)

    @classmethod
    def parse(cls, text: str) -> "MomentSpec":
        """A spec from inline text: ``two_point(-1,1,1/2)``, ``semicircle(2)``,
        ``point(3)``, ``custom(0,1,0,2)``, a JSON object, or a file path."""
        text = text.strip()
        if text.startswith("{"):
            try:
                return cls.from_dict(json.loads(text))
            except json.JSONDecodeError as exc:
                raise ParseError(str(exc)) from exc
        m = re.fullmatch(r"(\w+)\((.*)\)", text)
        if m is None:
            return cls.load(text)
        name, args = m.group(1), [a.strip() for a in m.group(2).split(",") if a.strip()]
        try:
            if name == "semicircle":
                return cls.semicircle(*args)
            if name == "two_point":
                return cls.two_point(*args)
            if name == "point":
                return cls.point(*args)
            if name == "custom":
                return cls.custom(args)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"bad spec {text!r}: {exc}") from exc
        raise ParseError(f"unknown preset {name!r}")

    def to_dict(self) -> dict:
        out = {"label": self.label, "preset": self.preset, "max_order": self.max_order}
        if self.preset == "custom":
            out["moments"] = [format_coeff(m) for m in self._moments]
        else:
            out["params"] = {k: format_coeff(v) for k, v in self.params.items()}
        return out

    def describe(self) -> str:
        if self.preset == "custom":
            return "custom(" + ",".join(format_coeff(m) for m in self._moments) + ")"
        return f"{self.preset}(" + ",".join(format_coeff(v) for v in self.params.values()) + ")"

    # evaluation ----------------------------------------------------------------------
    @property
    def univariate(self) -> bool:
        return self._word_fn is None

    def moment(self, n: int):
        """``m_n = mu(X^n)`` for a univariate spec."""
        if n == 0:
            return 1
        if n > self.max_order:
            raise SpecExhaustedError(f"{self.label}: moment of order {n} exceeds max_order {self.max_order}")
        if self._moments is not None:
            return self._moments[n - 1]
        return self._moment_fn(n)

    def moments(self, n: int) -> list:
        """``[m_1, ..., m_n]``."""
        return [self.moment(k) for k in range(1, n + 1)]

    def word_moment(self, word) -> Fraction:
        """``mu`` of a word given as a tuple of ``(name, starred)`` pairs."""
        if not word:
            return 1
        if self._word_fn is not None:
            if len(word) > self.max_order:
                raise SpecExhaustedError(f"{self.label}: word of length {len(word)} exceeds max_order")
            return coeff(self._word_fn(tuple(word)))
        return self.moment(len(word))

    def expect(self, a: "Element"):
        total = 0
        for w, c in a.terms.items():
            total = _tidy(total + c * self.word_moment(w))
        return total

    def hankel_psd(self, order: int | None = None) -> bool:
        """Exact PSD test of the Hankel matrix ``(m_{i+j})`` with ``i, j <= order/2``."""
        order = min(order or self.max_order, self.max_order)
        n = order // 2 + 1
        h = [[Fraction(self.moment(i + j)) for j in range(n)] for i in range(n)]
        return _is_psd(h)

    def check_psd(self, order: int | None = None) -> bool:
        ok = self.hankel_psd(order)
        if not ok:
            warnings.warn(f"moment spec {self.label} fails the Hankel positivity check", stacklevel=2)
        return ok

    def __repr__(self):
        return f"MomentSpec({self.label}: {self.describe()})"


def _is_psd(h) -> bool:
    """Symmetric Gaussian elimination; a zero pivot needs a zero row."""
    h = [row[:] for row in h]
    n = len(h)
    for k in range(n):
        piv = h[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(h[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = h[i][k] / piv
            for j in range(k + 1, n):
                h[i][j] -= f * h[k][j]
    return True


class BooleanExtension:
    """``mu~`` on words in the generators and ``P``: split at ``P`` and multiply."""

    def __init__(self, base: MomentSpec):
        self.base = base

    def __call__(self, word) -> Fraction:
        total, seg = 1, []
        for a in word:
            if a is P:
                if seg:
                    total = _tidy(total * self.base.word_moment(tuple(seg)))
                    seg = []
            else:
                seg.append(a)
        if seg:
            total = _tidy(total * self.base.word_moment(tuple(seg)))
        return total


def site_words(word) -> list:
    """``xi(word)`` as a list of boolean words, one per occupied site."""
    top = max((a.copy for a in word if type(a) is Gen), default=0)
    out = []
    for i in range(1, top + 1):
        site = []
        for a in word:
            if type(a) is Gen:
                if a.copy == i:
                    site.append((a.name, a.star))
            elif a.level <= i:
                site.append(P)
        out.append(site)
    return out


def xi_evaluate(word, mu: MomentSpec):
    """``mu^(w) = Phi(xi(w))`` for a normal word ``w`` of H0.

    Decorated F0 letters are read through the identification ``i``
    (decorations dropped), which is exact on F0 normal forms.
    """
    word = intern(word)
    cache = mu._xi_cache
    v = cache.get(word)
    if v is not None:
        return v
    if not mu.univariate:
        for a in word:
            if type(a) is Gen and a.name not in mu.generators:
                raise PresentationError(f"{a.name!r} is not a generator of {mu.label}")
    ext = BooleanExtension(mu)
    total = 1
    for site in site_words(word):
        total = _tidy(total * ext(site))
        if not total:
            break
    return cache.setdefault(word, total)


def poly_state(x: NCPolynomial, mu: MomentSpec):
    """``mu^`` extended linearly to a polynomial of normal words."""
    total = 0
    for w, c in x.terms.items():
        total = _tidy(total + c * xi_evaluate(w, mu))
    return total


def tensor_state(w: TensorPoly, specs: Sequence[MomentSpec]):
    """``(mu_1^ x ... x mu_n^)(w)``: leg-wise ``xi`` evaluation of every term."""
    if len(specs) != w.n_legs:
        raise PresentationError(f"{len(specs)} specs for {w.n_legs} legs")
    total = 0
    for ws, c in w.terms.items():
        v = c
        for word, mu in zip(ws, specs):
            v = v * xi_evaluate(word, mu)
            if not v:
                break
        if v:
            total = _tidy(total + v)
    return total


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class Certificate:
    """Evidence that the value at index K is the limit."""

    K: int
    values: tuple
    compressions_equal: bool

    @property
    def stable(self) -> bool:
        return self.compressions_equal and self.values[0] == self.values[1]

    def to_dict(self) -> dict:
        return {"K": self.K, "K+1": self.K + 1, "values": [format_coeff(v) for v in self.values],
                "compressions_equal": self.compressions_equal, "stable": self.stable}


def _as_tensor(op):
    if isinstance(op, TensorMonotoneOp):
        return op
    return as_tensor_op(op)


def compressed_product(factors: Sequence[TensorPoly], maps_chain=()) -> TensorPoly:
    """``E(f_1 ... f_n)`` computed from two compressed halves.

    The left half ``(q_1 x .. x q_1) f_1 ... f_a`` and the right half
    ``f_{a+1} ... f_n (q_1 x .. x q_1)`` are built separately, pushed
    through the leg maps, and only then multiplied; compression keeps both
    halves small.
    """
    legs = factors[0].legs
    a = len(factors) // 2
    left = TensorPoly.lattice(legs, 1)
    for f in factors[:a]:
        left = left.multiply(f)
    right = TensorPoly.lattice(legs, 1)
    for f in reversed(factors[a:]):
        right = f.multiply(right)
    for maps in maps_chain:
        left = apply_maps(left, maps)
        right = apply_maps(right, maps)
    return left.multiply(right)


def compressed_at(op, m: int) -> TensorPoly:
    """``E(z_m)`` for a (tensor) operator, using its factor structure."""
    factors, maps_chain = tensor_factors(_as_tensor(op))
    return compressed_product([f.at(m) for f in factors], maps_chain)


def state_at(op, specs, m: int):
    """``(compression, value)`` of the state at index m."""
    comp = compressed_at(op, m)
    return comp, tensor_state(comp, _spec_list(specs))


def _spec_list(specs):
    return list(specs) if isinstance(specs, (list, tuple)) else [specs]


def certified_state(op, specs, K: int):
    """Value at index K, certified by agreement with index K + 1.

    Raises :class:`NonStabilizedError` (carrying both values) unless the
    compressions and the values at K and K + 1 coincide.
    """
    c1, v1 = state_at(op, specs, K)
    c2, v2 = state_at(op, specs, K + 1)
    cert = Certificate(K, (v1, v2), c1 == c2)
    if not cert.stable:
        why = "values differ" if v1 != v2 else "compressions differ"
        raise NonStabilizedError(
            f"no stabilization between K={K} and K={K + 1}: {why}",
            values={K: v1, K + 1: v2},
        )
    return v1, cert


def mco_state(op, specs, start: int = 1, cap: int | None = None, with_certificate: bool = False):
    """``lim_m (mu^ ...)(z_m)``, declared once two consecutive indices agree
    in both the q_1-compression and the value."""
    op = _as_tensor(op)
    if cap is None:
        cap = op.cap if op.cap is not None else 2 * len(tensor_factors(op)[0]) + 2
    prev = None
    seen = {}
    for m in range(max(start, 1), cap + 1):
        comp, val = state_at(op, specs, m)
        seen[m] = val
        if prev is not None and prev[0] == comp and prev[1] == val:
            cert = Certificate(m - 1, (prev[1], val), True)
            return (val, cert) if with_certificate else val
        prev = (comp, val)
    raise NonStabilizedError(f"no stabilization up to index {cap}", values=seen)


# ---------------------------------------------------------------------------
# elements of the base algebras

_ELEM_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<op>[+\-])|(?P<name>[A-Za-z_]\w*)(?P<star>\*?)(?:\^(?P<pow>\d+))?)")


class Element:
    """Polynomial in the generators of one algebra.

    Words are tuples of ``(name, starred)`` pairs; the empty word is 1.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for w, c in dict(terms or {}).items():
            c = coeff(c)
            if c:
                out[tuple(w)] = _tidy(out.get(tuple(w), 0) + c)
        self.terms = {w: c for w, c in out.items() if c}

    @classmethod
    def constant(cls, c=1) -> "Element":
        return cls({(): c})

    @classmethod
    def gen(cls, name: str = "X", star: bool = False) -> "Element":
        return cls({((name, star),): 1})

    @classmethod
    def parse(cls, text: str) -> "Element":
        """``"X X - 1"``, ``"2 X^2 - 1/2"``, ``"X* X"``."""
        text = text.strip()
        if not text:
            raise ParseError("empty element")
        total, term, sign, seen = cls(), None, 1, False
        pos = 0
        while pos < len(text):
            m = _ELEM_TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                if not text[pos:].strip():
                    break
                raise ParseError(f"cannot parse {text[pos:]!r} in element {text!r}")
            pos = m.end()
            if m.group("op"):
                if seen:
                    total = total + (term if term is not None else cls.constant()) * sign
                elif m.group("op") == "+":
                    raise ParseError(f"leading '+' in {text!r}")
                sign = 1 if m.group("op") == "+" else -1
                term, seen = None, False
                continue
            seen = True
            if m.group("num"):
                factor = cls.constant(m.group("num"))
            else:
                factor = cls.gen(m.group("name"), bool(m.group("star")))
                if m.group("pow"):
                    factor = factor ** int(m.group("pow"))
            term = factor if term is None else term * factor
        if not seen:
            raise ParseError(f"dangling operator in {text!r}")
        return total + (term if term is not None else cls.constant()) * sign

    def __add__(self, other):
        if not isinstance(other, Element):
            other = Element.constant(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return Element(out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = Element.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            out: dict = {}
            for u, a in self.terms.items():
                for v, b in other.terms.items():
                    out[u + v] = out.get(u + v, 0) + a * b
            return Element(out)
        c = coeff(other)
        return Element({w: v * c for w, v in self.terms.items()})

    def __rmul__(self, other):
        return self * coeff(other)

    def __pow__(self, n: int):
        out = Element.constant()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def star(self) -> "Element":
        return Element({tuple((n, not s) for n, s in reversed(w)): c for w, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def constant_term(self):
        return self.terms.get((), 0)

    def names(self) -> set:
        return {n for w in self.terms for n, _ in w}

    def centered(self, mu: MomentSpec) -> "Element":
        """``a - mu(a) 1``."""
        return self - mu.expect(self)

    def copy(self, label: str, k: int, deco: int = PLAIN) -> NCPolynomial:
        """The copy ``a(k)`` with every generator letter at copy index k."""
        out: dict = {}
        for w, c in self.terms.items():
            out[intern(tuple(Gen(label, n, k, deco, s) for n, s in w))] = c
        return NCPolynomial._raw(out)

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, w in enumerate(sorted(self.terms, key=lambda w: (len(w), w))):
            c = self.terms[w]
            mag = -c if c < 0 else c
            body = " ".join(n + ("*" if s else "") for n, s in w)
            text = format_coeff(mag) if not w else (body if mag == 1 else f"{format_coeff(mag)} {body}")
            parts.append(("-" if c < 0 else "") + text if i == 0 else ("- " if c < 0 else "+ ") + text)
        return " ".join(parts)

    __str__ = format

    def __repr__(self):
        return f"Element({self.format()!r})"


def as_element(a) -> Element:
    if isinstance(a, Element):
        return a
    if isinstance(a, str):
        return Element.parse(a)
    return Element.constant(a)
