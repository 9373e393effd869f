"""Concrete presentations: the pre-free algebra F0(G) and the copy algebras H0.

F0 words use primed / double-primed copies ``X'(k)``, ``X''(k)`` of the
generators; H0 words use plain copies ``X(k)``.  Each algebra label owns one
totally ordered projection family ``q_0 = 0 <= q_1 <= ... <= q_inf = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ncpoly
from .errors import PresentationError
from .ncpoly import (
    DPRIME,
    INF,
    PLAIN,
    PRIME,
    Absorb,
    DropUnit,
    Gen,
    KillZero,
    LatticeMeet,
    NCPolynomial,
    Proj,
    Reorient,
    RewriteSystem,
    Vanish,
)

F0, H0 = "F0", "H0"


class AlgebraPresentation(RewriteSystem):
    """Relation schema, generator sets and rewrite rules of one algebra.

    ``generators`` maps each label to the frozenset of its generator names.
    """

    def __init__(self, schema: str, generators: dict):
        if schema not in (F0, H0):
            raise PresentationError(f"unknown schema {schema!r}")
        self.schema = schema
        self.generators = {lab: frozenset(g) for lab, g in generators.items()}
        self.labels = frozenset(self.generators)
        self.decorations = frozenset({PRIME, DPRIME}) if schema == F0 else frozenset({PLAIN})
        rules = []
        for lab in sorted(self.labels):
            rules += [KillZero(lab), DropUnit(lab)]
            if schema == F0:
                rules.append(Vanish(lab, DPRIME, 1))
            rules += [
                LatticeMeet(lab),
                Absorb(lab, "left", self.decorations),
                Absorb(lab, "right", self.decorations),
            ]
            if schema == F0:
                rules += [Reorient(lab, "left"), Reorient(lab, "right")]
        super().__init__(rules)

    @property
    def label(self) -> str:
        """The single label; raises for multi-label presentations."""
        if len(self.labels) != 1:
            raise PresentationError(f"presentation has labels {sorted(self.labels)}, not one")
        return next(iter(self.labels))

    def check_letter(self, a) -> None:
        if a.label not in self.labels:
            raise PresentationError(f"label {a.label!r} not declared (have {sorted(self.labels)})")
        if type(a) is Gen:
            if a.name not in self.generators[a.label]:
                raise PresentationError(f"{a.name!r} is not a generator of {a.label!r}")
            if a.deco not in self.decorations:
                raise PresentationError(f"decoration {a.deco} not allowed in {self.schema}")
            if a.copy < 1:
                raise PresentationError("copy index must be >= 1")
        elif not (a.level == INF or (isinstance(a.level, int) and a.level >= 0)):
            raise PresentationError(f"bad projection level {a.level!r}")

    # conveniences ---------------------------------------------------------------
    def reduce(self, x: NCPolynomial) -> NCPolynomial:
        return ncpoly.reduce(x, self)

    def mul(self, *xs: NCPolynomial) -> NCPolynomial:
        out = NCPolynomial.one()
        for x in xs:
            out = ncpoly.multiply(out, x, self)
        return out

    def parse(self, text: str, reduce: bool = True) -> NCPolynomial:
        default = next(iter(self.labels)) if len(self.labels) == 1 else None
        x = ncpoly.parse(text, default)
        return self.reduce(x) if reduce else x

    def format(self, x: NCPolynomial) -> str:
        return ncpoly.format_poly(x, show_label=len(self.labels) > 1)

    def q(self, level, label: str | None = None) -> NCPolynomial:
        """The projection ``q_level`` as a reduced polynomial."""
        return self.reduce(NCPolynomial.letter(Proj(label or self.label, level)))

    def p(self, k: int, label: str | None = None) -> NCPolynomial:
        """``p_k = q_k - q_{k-1}``."""
        return self.q(k, label) - self.q(k - 1, label)

    def gen(self, name: str, copy: int, deco: int | None = None, star: bool = False,
            label: str | None = None) -> NCPolynomial:
        if deco is None:
            deco = PRIME if self.schema == F0 else PLAIN
        return self.reduce(NCPolynomial.letter(Gen(label or self.label, name, copy, deco, star)))

    def __repr__(self):
        gens = {k: sorted(v) for k, v in sorted(self.generators.items())}
        return f"AlgebraPresentation({self.schema}, {gens})"


def make_F0(generators, label: str = "F") -> AlgebraPresentation:
    """Quotient of the free product of copies ``A'(k)``, ``A''(k)`` by the ideal J."""
    gens = frozenset(generators)
    if not gens:
        raise PresentationError("F0 needs at least one generator")
    return AlgebraPresentation(F0, {label: gens})


def make_H0(family) -> AlgebraPresentation:
    """H0 for a family ``[(label, generators), ...]``; labels must be distinct."""
    family = list(family)
    if not family:
        raise PresentationError("H0 needs at least one algebra")
    gens: dict = {}
    for label, g in family:
        if label in gens:
            raise PresentationError(f"duplicate label {label!r}")
        gens[label] = frozenset(g)
    return AlgebraPresentation(H0, gens)


@dataclass(frozen=True, order=True)
class FiltrationLevel:
    """Index m of the smallest subalgebra B^(m) containing an element."""

    m: int

    def __int__(self):
        return self.m


def filtration_level(x: NCPolynomial) -> FiltrationLevel:
    return FiltrationLevel(x.level())
