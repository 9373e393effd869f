"""Exact noncommutative polynomials over words with relation-driven reduction.

A word is a tuple of letters; the empty tuple is the unit.  Letters are
either generator copies ``X'(k)`` / ``X''(k)`` / ``X(k)`` (optionally starred)
or lattice projections ``q_m``.  ``p_k`` is never a letter: the parser expands
it to ``q_k - q_{k-1}``.

Rewrite rules are plain data objects grouped into a :class:`RewriteSystem`.
Every rule maps a word to a single word or to zero, so reduction is a map
``Word -> Word | None`` and polynomial reduction is linear extension of it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, NamedTuple, Union

from .errors import ParseError

PLAIN, PRIME, DPRIME = 0, 1, 2
INF = math.inf

Coeff = Union[int, Fraction]


class Gen(NamedTuple):
    """Copy ``copy`` of generator ``name`` of algebra ``label``."""

    label: str
    name: str
    copy: int
    deco: int = PLAIN
    star: bool = False


class Proj(NamedTuple):
    """Lattice projection ``q_level``; level 0 is zero, ``INF`` is the unit."""

    label: str
    level: Union[int, float]


Letter = Union[Gen, Proj]
Word = tuple

# ---------------------------------------------------------------------------
# hash-consing

_WORDS: dict = {(): ()}


def intern(word: Iterable) -> Word:
    """Return the canonical instance of ``word``.

    ``dict.setdefault`` is atomic under the GIL, so concurrent interning
    of equal words always yields one shared object.
    """
    w = tuple(word)
    return _WORDS.setdefault(w, w)


def letter_level(letter: Letter) -> Union[int, float]:
    if type(letter) is Proj:
        return letter.level
    return letter.copy


def word_level(word: Word) -> int:
    """Largest copy index / finite projection level occurring in ``word``."""
    best = 0
    for a in word:
        lv = a.level if type(a) is Proj else a.copy
        if lv != INF and lv > best:
            best = lv
    return best


def star_letter(a: Letter) -> Letter:
    if type(a) is Proj:
        return a
    return a._replace(star=not a.star)


def star_word(word: Word) -> Word:
    return intern(star_letter(a) for a in reversed(word))


# ---------------------------------------------------------------------------
# coefficients


def coeff(value) -> Coeff:
    """Coerce ``value`` to an exact rational, keeping integers as ``int``."""
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        value = Fraction(value.strip())
    elif isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    elif not isinstance(value, Rational):
        raise TypeError(f"not a rational coefficient: {value!r}")
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


def _tidy(c: Coeff) -> Coeff:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# rewrite rules (data)

ZERO = None  # a rule result of ZERO means the whole word vanishes


class _NoMatch:
    __slots__ = ()

    def __repr__(self):
        return "NOMATCH"


NOMATCH = _NoMatch()


@dataclass(frozen=True)
class DropUnit:
    """``q_inf`` is the unit and disappears from words."""

    label: str
    arity = 1

    def apply(self, a):
        if type(a) is Proj and a.level == INF and a.label == self.label:
            return ()
        return NOMATCH


@dataclass(frozen=True)
class KillZero:
    """``q_0`` is the zero projection."""

    label: str
    arity = 1

    def apply(self, a):
        if type(a) is Proj and a.level == 0 and a.label == self.label:
            return ZERO
        return NOMATCH


@dataclass(frozen=True)
class Vanish:
    """Letters with decoration ``deco`` and copy index ``copy`` are zero."""

    label: str
    deco: int
    copy: int
    arity = 1

    def apply(self, a):
        if type(a) is Gen and a.deco == self.deco and a.copy == self.copy and a.label == self.label:
            return ZERO
        return NOMATCH


@dataclass(frozen=True)
class LatticeMeet:
    """``q_a q_b -> q_min(a,b)``."""

    label: str
    arity = 2

    def apply(self, a, b):
        if type(a) is Proj and type(b) is Proj and a.label == self.label and b.label == self.label:
            return (a,) if a.level <= b.level else (b,)
        return NOMATCH


@dataclass(frozen=True)
class Absorb:
    """``q_m L -> L`` (side 'left') or ``L q_m -> L`` (side 'right') for m > copy(L)."""

    label: str
    side: str
    decos: frozenset
    arity = 2

    def apply(self, a, b):
        if self.side == "left":
            p, g = a, b
        else:
            g, p = a, b
        if (
            type(p) is Proj
            and type(g) is Gen
            and p.label == self.label
            and g.label == self.label
            and g.deco in self.decos
            and p.level > g.copy
        ):
            return (g,)
        return NOMATCH


@dataclass(frozen=True)
class Reorient:
    """``q_m L'' -> q_m L'`` and mirror, for m < copy(L).

    A neighbouring generator letter M of copy c counts as ``q_{c+1}``
    because ``M = q_{c+1} M = M q_{c+1}``; so ``M L'' -> M L'`` whenever
    ``c + 1 < copy(L)``.  Without this completion rule, normal forms
    would not be unique.
    """

    label: str
    side: str
    src: int = DPRIME
    dst: int = PRIME
    arity = 2

    def apply(self, a, b):
        if self.side == "left":
            p, g = a, b
        else:
            g, p = a, b
        if type(g) is not Gen or g.deco != self.src or g.label != self.label or p.label != self.label:
            return NOMATCH
        bound = p.level if type(p) is Proj else p.copy + 1
        if bound < g.copy:
            g2 = g._replace(deco=self.dst)
            return (p, g2) if self.side == "left" else (g2, p)
        return NOMATCH


class RewriteSystem:
    """A set of rewrite rules plus the memo tables of its normal forms.

    All rules have left-hand sides of length one or two, so a single
    left-to-right pass with a stack reaches the normal form.
    """

    def __init__(self, rules):
        self.rules = tuple(rules)
        self._single = tuple(r for r in self.rules if r.arity == 1)
        self._pair = tuple(r for r in self.rules if r.arity == 2)
        self._word_memo: dict = {}
        self._concat_memo: dict = {}

    # hooks -----------------------------------------------------------------
    def check_letter(self, letter: Letter) -> None:
        """Raise if ``letter`` does not belong to this system."""

    # engine ----------------------------------------------------------------
    def _single_rule(self, a):
        for r in self._single:
            out = r.apply(a)
            if out is not NOMATCH:
                return out
        return NOMATCH

    def _pair_rule(self, a, b):
        for r in self._pair:
            out = r.apply(a, b)
            if out is not NOMATCH:
                return out
        return NOMATCH

    def _run(self, stack: list, pending: list):
        single, pair = self._single_rule, self._pair_rule
        while pending:
            c = pending.pop()
            out = single(c)
            if out is not NOMATCH:
                if out is ZERO:
                    return ZERO
                pending.extend(reversed(out))
                continue
            if stack:
                out = pair(stack[-1], c)
                if out is not NOMATCH:
                    if out is ZERO:
                        return ZERO
                    stack.pop()
                    pending.extend(reversed(out))
                    continue
            stack.append(c)
        return intern(stack)

    def reduce_word(self, word: Word):
        """Normal form of ``word`` (a word) or ``None`` when it vanishes."""
        try:
            return self._word_memo[word]
        except KeyError:
            pass
        for a in word:
            self.check_letter(a)
        out = self._run([], list(reversed(word)))
        return self._word_memo.setdefault(intern(word), out)

    def concat(self, u: Word, v: Word):
        """Normal form of ``u v`` for words ``u``, ``v`` already in normal form."""
        if not v:
            return u
        if not u:
            return v
        key = (id(u), id(v))
        hit = self._concat_memo.get(key)
        if hit is not None and hit[0] is u and hit[1] is v:
            return hit[2]
        out = self._run(list(u), list(reversed(v)))
        # the stored references keep u and v alive, so their ids stay unique
        self._concat_memo[key] = (u, v, out)
        return out

    # strategies used to test confluence ---------------------------------------
    def _redexes(self, word: Word, order: Iterable[int]):
        for i in order:
            out = self._single_rule(word[i])
            if out is not NOMATCH:
                return i, 1, out
            if i + 1 < len(word):
                out = self._pair_rule(word[i], word[i + 1])
                if out is not NOMATCH:
                    return i, 2, out
        return None

    def rewrite(self, word: Word, strategy: str = "leftmost"):
        """Reduce by repeatedly firing the leftmost (or rightmost) redex.

        Independent of the stack engine; used only to cross-check it.
        """
        for a in word:
            self.check_letter(a)
        w = tuple(word)
        while True:
            n = len(w)
            order = range(n) if strategy == "leftmost" else range(n - 1, -1, -1)
            hit = self._redexes(w, order)
            if hit is None:
                return intern(w)
            i, width, out = hit
            if out is ZERO:
                return None
            w = w[:i] + tuple(out) + w[i + width:]


# ---------------------------------------------------------------------------
# polynomials


class NCPolynomial:
    """Finite map ``Word -> exact rational`` with no zero coefficients.

    Instances are treated as immutable.  Arithmetic here is free
    (unreduced); use :func:`reduce` / :func:`multiply` for the quotient.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in dict(terms).items():
                c = coeff(c)
                if c:
                    w = intern(w)
                    clean[w] = _tidy(clean.get(w, 0) + c)
                    if not clean[w]:
                        del clean[w]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "NCPolynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "NCPolynomial":
        return cls._raw({})

    @classmethod
    def one(cls) -> "NCPolynomial":
        return cls._raw({(): 1})

    @classmethod
    def word(cls, word, c=1) -> "NCPolynomial":
        c = coeff(c)
        return cls._raw({intern(word): c} if c else {})

    @classmethod
    def letter(cls, letter: Letter) -> "NCPolynomial":
        return cls._raw({intern((letter,)): 1})

    # container protocol --------------------------------------------------------
    def __iter__(self) -> Iterator:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def __getitem__(self, word):
        return self.terms.get(tuple(word), 0)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, NCPolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == NCPolynomial.one() * other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # linear structure -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, NCPolynomial):
            other = NCPolynomial.one() * other
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = _tidy(out.get(w, 0) + c)
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NCPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPolynomial):
            other = NCPolynomial.one() * other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NCPolynomial):
            return self.juxtapose(other)
        c = coeff(other)
        if not c:
            return NCPolynomial.zero()
        return NCPolynomial._raw({w: _tidy(v * c) for w, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def juxtapose(self, other: "NCPolynomial") -> "NCPolynomial":
        """Free (unreduced) product."""
        out: dict = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = intern(u + v)
                s = _tidy(out.get(w, 0) + a * b)
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        return NCPolynomial._raw(out)

    def star(self) -> "NCPolynomial":
        return involute(self)

    def level(self) -> int:
        return max((word_level(w) for w in self.terms), default=0)

    def letters(self):
        for w in self.terms:
            yield from w

    def __repr__(self):
        return f"NCPolynomial({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def _accumulate(out: dict, w, c) -> None:
    s = _tidy(out.get(w, 0) + c)
    if s:
        out[w] = s
    else:
        out.pop(w, None)


def reduce(x: NCPolynomial, rules: RewriteSystem) -> NCPolynomial:
    """Canonical normal form of ``x`` in the quotient defined by ``rules``."""
    out: dict = {}
    for w, c in x.terms.items():
        nw = rules.reduce_word(w)
        if nw is not None:
            _accumulate(out, nw, c)
    return NCPolynomial._raw(out)


def multiply(a: NCPolynomial, b: NCPolynomial, rules: RewriteSystem) -> NCPolynomial:
    """Reduced product ``a b``; operands are reduced first."""
    a = reduce(a, rules)
    b = reduce(b, rules)
    out: dict = {}
    concat = rules.concat
    for u, x in a.terms.items():
        for v, y in b.terms.items():
            w = concat(u, v)
            if w is not None:
                _accumulate(out, w, x * y)
    return NCPolynomial._raw(out)


def involute(x: NCPolynomial) -> NCPolynomial:
    """Anti-automorphic involution: reverse words, toggle stars.

    Coefficients are real rationals, so conjugation is the identity.
    """
    return NCPolynomial._raw({star_word(w): c for w, c in x.terms.items()})


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(
    r"""\s*(?:
      (?P<num>\d+(?:/\d+)?)(?![\w(])
    | (?P<op>[+\-])
    | (?:(?P<label>[A-Za-z_]\w*):)?
      (?:
        (?P<proj>[qp])(?P<lvl>\d+|inf)(?![\w('(])
      | (?P<name>[A-Za-z_]\w*)(?P<deco>'{0,2})\((?P<copy>\d+)\)(?P<star>\*?)
      )
    )""",
    re.VERBOSE,
)


def parse(text: str, default_label: str | None = None) -> NCPolynomial:
    """Parse ``"q3 X'(1) - 3/4 X''(2)* p2 + 1"`` into an unreduced polynomial.

    ``pK`` expands to ``qK - q(K-1)``.  Letters without an ``algebra:``
    prefix get ``default_label``; if that is ``None`` a prefix is required.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty expression")
    pos = 0
    total = NCPolynomial.zero()
    sign = 1
    term = None  # current term as polynomial
    term_coeff: Coeff = 1
    seen_any = False

    def flush():
        nonlocal total, term, term_coeff
        if term is None and term_coeff == 1 and not seen_any:
            raise ParseError(f"dangling operator in {text!r}")
        body = term if term is not None else NCPolynomial.one()
        total = total + body * (sign * term_coeff)
        term, term_coeff = None, 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ParseError(f"cannot parse {rest!r} in {text!r}")
        pos = m.end()
        if m.group("op"):
            if seen_any:
                flush()
            elif m.group("op") == "+":
                raise ParseError(f"leading '+' in {text!r}")
            sign = 1 if m.group("op") == "+" else -1
            seen_any = False
            continue
        seen_any = True
        if m.group("num"):
            term_coeff = term_coeff * coeff(m.group("num"))
            continue
        label = m.group("label") or default_label
        if label is None:
            raise ParseError(f"letter {m.group(0).strip()!r} needs an algebra prefix")
        if m.group("proj"):
            lvl = INF if m.group("lvl") == "inf" else int(m.group("lvl"))
            if m.group("proj") == "q":
                factor = NCPolynomial.letter(Proj(label, lvl))
            else:
                if lvl == INF or lvl < 1:
                    raise ParseError(f"p{m.group('lvl')}: p_k needs k >= 1")
                factor = NCPolynomial.letter(Proj(label, lvl)) - NCPolynomial.letter(Proj(label, lvl - 1))
        else:
            copy = int(m.group("copy"))
            if copy < 1:
                raise ParseError(f"copy index must be >= 1 in {m.group(0).strip()!r}")
            factor = NCPolynomial.letter(
                Gen(label, m.group("name"), copy, len(m.group("deco")), bool(m.group("star")))
            )
        term = factor if term is None else term.juxtapose(factor)
    if not seen_any:
        raise ParseError(f"dangling operator in {text!r}")
    flush()
    return total


def format_letter(a: Letter, show_label: bool = False) -> str:
    prefix = f"{a.label}:" if show_label else ""
    if type(a) is Proj:
        return f"{prefix}q{'inf' if a.level == INF else a.level}"
    return f"{prefix}{a.name}{chr(39) * a.deco}({a.copy}){'*' if a.star else ''}"


def format_word(word: Word, show_label: bool = False) -> str:
    if not word:
        return "1"
    return " ".join(format_letter(a, show_label) for a in word)


def letter_key(a: Letter):
    if type(a) is Proj:
        return (0, a.label, "", a.level, 0, False)
    return (1, a.label, a.name, a.copy, a.deco, a.star)


def word_key(word: Word):
    return (len(word), tuple(letter_key(a) for a in word))


def format_coeff(c: Coeff) -> str:
    c = _tidy(Fraction(c))
    return str(c)


def format_poly(x: NCPolynomial, show_label: bool | None = None) -> str:
    if not x.terms:
        return "0"
    if show_label is None:
        show_label = len({a.label for a in x.letters()}) > 1
    parts = []
    for i, w in enumerate(sorted(x.terms, key=word_key)):
        c = x.terms[w]
        neg = c < 0
        mag = -c if neg else c
        body = format_word(w, show_label)
        if not w:
            text = format_coeff(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_coeff(mag)} {body}"
        if i == 0:
            parts.append(f"-{text}" if neg else text)
        else:
            parts.append(f"- {text}" if neg else f"+ {text}")
    return " ".join(parts)
