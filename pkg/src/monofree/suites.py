"""Seeded property suites shared by the ``verify`` command and the test-suite.

Every suite returns a :class:`SuiteReport` listing each property with its
instance count and failures.  Instances are generated from
``random.Random(seed)`` in a fixed order, so reports are reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import bialgebra as bi
from .algebras import make_F0, make_H0
from .errors import ClosureError, NonStabilizedError
from .freeness import (
    compressed_word,
    hierarchy_sum_moments,
    leg_algebras,
    m_free_moment,
    mixed_moment,
    singleton_terms_ok,
    sum_embedding,
)
from .monotone import (
    Msdd,
    add,
    delayed,
    embed,
    equivalent,
    alternative_product,
    mul,
    prefree,
    preimage_domain,
    product,
    scale,
    shift_of,
    shrunk,
    star,
)
from .ncpoly import DPRIME, INF, PLAIN, PRIME, Gen, NCPolynomial, Proj, format_poly, involute, multiply, reduce
from .oracle import boolean_convolve_oracle, boolean_product_state, free_convolve_oracle, free_product_state
from .states import Element, MomentSpec, state_at, tensor_state
from .tensorspace import TensorPoly, tensor_product

SUITES = ("confluence", "monotone", "bialgebra", "freeness", "hierarchy")


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.instances > 0

    def record(self, ok: bool, detail: str = "") -> None:
        self.instances += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < 5:
                self.examples.append(detail)

    def to_dict(self) -> dict:
        return {"property": self.name, "instances": self.instances, "failures": self.failures,
                "passed": self.passed, "examples": self.examples}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    properties: list = field(default_factory=list)

    def prop(self, name: str) -> PropertyResult:
        for p in self.properties:
            if p.name == name:
                return p
        p = PropertyResult(name)
        self.properties.append(p)
        return p

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "properties": [p.to_dict() for p in self.properties]}


# ---------------------------------------------------------------------------
# random instances


def random_letter(rng: random.Random, label: str, gens, schema: str, max_copy: int = 4,
                  levels=(0, 1, 2, 3, 4, INF)):
    if rng.random() < 0.35:
        return Proj(label, rng.choice(levels))
    deco = PLAIN if schema == "H0" else rng.choice((PRIME, DPRIME))
    return Gen(label, rng.choice(gens), rng.randint(1, max_copy), deco, rng.random() < 0.3)


def random_word(rng, label, gens, schema, max_len=6, **kw):
    return tuple(random_letter(rng, label, gens, schema, **kw) for _ in range(rng.randint(0, max_len)))


def random_poly(rng, label, gens, schema, n_terms=3, **kw) -> NCPolynomial:
    terms = {}
    for _ in range(rng.randint(1, n_terms)):
        terms[random_word(rng, label, gens, schema, **kw)] = rng.choice((1, -1, 2, -3, "1/2", "-2/3"))
    return NCPolynomial(terms)


def _fmt(x) -> str:
    return format_poly(x) if isinstance(x, NCPolynomial) else str(x)


# ---------------------------------------------------------------------------
# confluence


def confluence_suite(seed: int = 0, size: int = 1000) -> SuiteReport:
    """Normal forms: strategy independence, idempotence, involution, lattice law, ideal."""
    rng = random.Random(seed)
    rep = SuiteReport("confluence", seed)
    F = make_F0({"X", "Y"})
    H = make_H0([("A", {"X", "Y"})])
    for i in range(size):
        pres, label, schema = (F, "F", "F0") if i % 2 == 0 else (H, "A", "H0")
        x = random_poly(rng, label, ("X", "Y"), schema)
        nf = reduce(x, pres)
        left = right = NCPolynomial.zero()
        for w, c in x.terms.items():
            lw, rw = pres.rewrite(w, "leftmost"), pres.rewrite(w, "rightmost")
            if lw is not None:
                left = left + NCPolynomial.word(lw, c)
            if rw is not None:
                right = right + NCPolynomial.word(rw, c)
        rep.prop("leftmost = rightmost = stack engine").record(left == right == nf, _fmt(x))
        rep.prop("reduce idempotent").record(reduce(nf, pres) == nf, _fmt(x))
        rep.prop("reduce commutes with involution").record(reduce(involute(x), pres) == involute(nf), _fmt(x))
        rep.prop("multiply by unit").record(
            multiply(x, NCPolynomial.one(), pres) == nf == multiply(NCPolynomial.one(), x, pres), _fmt(x))
    levels = (0, 1, 2, 3, 5, INF)
    for a, b in itertools.product(levels, repeat=2):
        for pres, lab in ((F, "F"), (H, "A")):
            got = pres.reduce(NCPolynomial.word((Proj(lab, a), Proj(lab, b))))
            rep.prop("lattice law").record(got == pres.q(min(a, b), lab), f"q{a} q{b}")
    gens = bi.ideal_generators(F, 4, 5)
    for _ in range(size):
        u = NCPolynomial.word(random_word(rng, "F", ("X", "Y"), "F0", max_len=3))
        v = NCPolynomial.word(random_word(rng, "F", ("X", "Y"), "F0", max_len=3))
        r = rng.choice(gens)
        x = u.juxtapose(r).juxtapose(v)
        rep.prop("ideal elements reduce to zero").record(reduce(x, F).is_zero(), _fmt(x))
    return rep


# ---------------------------------------------------------------------------
# monotone operators


def _random_op(rng, F, depth=0):
    kind = rng.choice(("prefree", "prefree", "embed", "star", "scale", "add", "mul") if depth < 1
                      else ("prefree", "embed"))
    if kind == "prefree":
        return prefree(F, rng.choice("XYZ"))
    if kind == "embed":
        x = random_poly(rng, "F", ("X", "Y", "Z"), "F0", n_terms=2, max_len=3, max_copy=3, levels=(1, 2, 3, INF))
        return embed(F.reduce(x), F)
    if kind == "star":
        return star(_random_op(rng, F, depth + 1))
    if kind == "scale":
        return scale(rng.choice((2, -1, "1/3")), _random_op(rng, F, depth + 1))
    a, b = _random_op(rng, F, depth + 1), _random_op(rng, F, depth + 1)
    return add(a, b) if kind == "add" else mul(a, b)


def _variant(rng, op):
    """An equivalent representative of ``op``."""
    if op.recipe[0] == "embed":
        x = op.recipe[1]
        k = x.level()
        zero = NCPolynomial.zero()
        from .monotone import MonotoneOp

        d = rng.randint(1, 2)
        return MonotoneOp(op.pres, lambda m: x if m > k + d else zero, Msdd.unit_shift(k + d), None,
                          ("custom",), name=f"embed+{d}")
    return delayed(op, rng.randint(1, 2)) if rng.random() < 0.5 else shrunk(op, 1)


def monotone_suite(seed: int = 0, size: int = 100, truncation: int = 8, max_factors: int = 5) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("monotone", seed)
    F = make_F0({"X", "Y", "Z", "U", "V"})
    names = "XYZUV"
    for n in range(1, max_factors + 1):
        ops = [prefree(F, names[i]) for i in range(n)]
        T = n + 3
        p = product(*ops)
        rep.prop("pre-free products have domain q_{m-n+1}").record(
            shift_of(p.msdd, T) == n - 1, f"n={n}: {p.msdd.levels(T)}")
    for n in range(1, 4):
        ops = [prefree(F, names[i]) for i in range(n)]
        rep.prop("alternative product form is equivalent").record(
            bool(equivalent(product(*ops), alternative_product(ops), n + 4)), f"n={n}")
    x = prefree(F, "X")
    for f in (Msdd.lattice_shift(0), Msdd.lattice_shift(1), Msdd.lattice_shift(2)):
        g = preimage_domain(x, f)
        lv = g.levels(10)
        ok = g.is_monotone(10) and lv[-1] >= 10 - 2 - f.shift
        rep.prop("preimage domains are monotone and grow").record(ok, str(lv))
    for pair in (("X", "Y"), ("Y", "X"), ("X", "X")):
        a, b = prefree(F, pair[0]), prefree(F, pair[1])
        g = preimage_domain(a, mul(a, b).msdd)
        rep.prop("preimage domains are monotone and grow").record(
            g.is_monotone(10) and g.level(10) >= 7, str(g.levels(10)))
    for _ in range(size):
        a, b = _random_op(rng, F, 1), _random_op(rng, F, 1)
        kind = rng.choice(("add", "mul", "star", "scale"))
        a2 = _variant(rng, a)
        if kind == "add":
            r1, r2 = add(a, b), add(a2, b)
        elif kind == "mul":
            if rng.random() < 0.5:
                r1, r2 = mul(a, b), mul(a2, b)
            else:
                r1, r2 = mul(b, a), mul(b, a2)
        elif kind == "star":
            r1, r2 = star(a), star(a2)
        else:
            r1, r2 = scale(3, a), scale(3, a2)
        try:
            ok = bool(equivalent(a, a2, truncation)) and bool(equivalent(r1, r2, truncation))
            detail = f"{kind}({a.name}, {b.name})"
        except ClosureError as exc:
            ok, detail = False, str(exc)
        rep.prop("operations respect equivalence").record(ok, detail)
    for _ in range(max(size // 5, 1)):
        xs = [F.reduce(random_poly(rng, "F", ("X", "Y"), "F0", n_terms=2, max_len=3, max_copy=3,
                                   levels=(1, 2, 3, INF))) for _ in range(2)]
        lhs = mul(embed(xs[0], F), embed(xs[1], F))
        rhs = embed(multiply(xs[0], xs[1], F), F)
        rep.prop("embedding is multiplicative").record(bool(equivalent(lhs, rhs, truncation)), _fmt(xs[0]))
    return rep


# ---------------------------------------------------------------------------
# bialgebra


def bialgebra_suite(seed: int = 0, size: int = 100) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("bialgebra", seed)
    F = make_F0({"X", "Y"})
    kw = dict(max_len=4, max_copy=3, levels=(1, 2, 3, INF))

    def word_poly():
        return F.reduce(NCPolynomial.word(random_word(rng, "F", ("X", "Y"), "F0", **kw)))

    for _ in range(size):
        x, y = word_poly(), word_poly()
        d = bi.coproduct(x, F)
        one = TensorPoly.from_poly(F, x)
        rep.prop("coassociativity").record(bi.split_leg(d, 0) == bi.split_leg(d, 1), _fmt(x))
        rep.prop("counit (eps x id)").record(bi.counit_leg(d, 0) == one, _fmt(x))
        rep.prop("counit (id x eps)").record(bi.counit_leg(d, 1) == one, _fmt(x))
        rep.prop("homomorphism").record(
            bi.coproduct(multiply(x, y, F), F) == d.multiply(bi.coproduct(y, F)), _fmt(x) + " ; " + _fmt(y))
        rep.prop("*-homomorphism").record(bi.coproduct(involute(x), F) == d.star(), _fmt(x))
        rep.prop("counit is a character").record(
            bi.counit(multiply(x, y, F), F) == bi.counit(x, F) * bi.counit(y, F), _fmt(x))
    gens = bi.ideal_generators(F, 3, 4)
    for _ in range(size):
        u = random_word(rng, "F", ("X", "Y"), "F0", max_len=2, max_copy=3, levels=(1, 2, 3, 4))
        v = random_word(rng, "F", ("X", "Y"), "F0", max_len=2, max_copy=3, levels=(1, 2, 3, 4))
        r = rng.choice(gens)
        x = NCPolynomial.word(u).juxtapose(r).juxtapose(NCPolynomial.word(v))
        dz = TensorPoly.zero((F, F))
        ez = 0
        for w, c in x.terms.items():
            dz = dz + bi.coproduct_word(w, F) * c
            ez += c * bi.counit_word(w)
        rep.prop("ideal preserved by Delta").record(dz.is_zero(), _fmt(x))
        rep.prop("ideal preserved by eps").record(ez == 0, _fmt(x))
    t = bi.tau(F, "X")
    lifted = bi.lift_coproduct(t)
    j = bi.J1(F, "X") + bi.J2(F, "X")
    for m in range(1, 7):
        rep.prop("Delta(tau(X)) = J1 + J2").record(lifted.at(m) == j.at(m), f"m={m}")
    for q in (bi.lift_coproduct(embed(F.q(1), F)),):
        rep.prop("lift of q1 is group-like").record(q.at(3) == TensorPoly.lattice((F, F), 1), "q1")
    for m in range(1, 5):
        x = t.at(m)
        d = bi.coproduct(x, F)
        rep.prop("coassociativity on tau(X)_m").record(bi.split_leg(d, 0) == bi.split_leg(d, 1), f"m={m}")
    # state-level identification of Delta(tau(X)) with j1(X) + j2(X)
    specs = [MomentSpec.two_point(), MomentSpec.semicircle(1)]
    s = sum_embedding(specs)
    for n in range(1, 5):
        conv = bi.convolution_operator(n)
        for m in range(1, n + 2):
            lhs = conv.at(m)
            rhs = _relabel(tensor_product(*[s] * n).at(m), lhs.legs)
            rep.prop("(i x i) Delta(tau(X))^n = (j1 + j2)^n").record(
                lhs == rhs and tensor_state(lhs, specs) == tensor_state(rhs, specs), f"n={n} m={m}")
    return rep


def _relabel(t: TensorPoly, legs) -> TensorPoly:
    """Move a tensor polynomial to other single-label legs with the same generators."""
    terms = {}
    for ws, c in t.terms.items():
        new = []
        for w, pres in zip(ws, legs):
            lab = pres.label
            new.append(tuple(a._replace(label=lab) for a in w))
        terms[tuple(new)] = c
    return TensorPoly(legs, terms)


# ---------------------------------------------------------------------------
# freeness


def _centered_pool(spec: MomentSpec) -> list:
    x = Element.gen(spec.generators[0])
    raw = [x, x * x, x ** 3, x * x + x, x ** 3 - x * 2, x ** 4 - x]
    return [a.centered(spec) for a in raw]


def freeness_suite(seed: int = 0, size: int = 200, max_len: int = 6, three_leg_max: int = 5) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("freeness", seed)
    tp, sc = MomentSpec.two_point(), MomentSpec.semicircle(1)
    pairs = [(tp, sc), (sc, tp), (tp, tp), (sc, sc)]
    lengths = list(range(2, max_len + 1))
    for i in range(size):
        specs = pairs[i % len(pairs)]
        n = lengths[i % len(lengths)]
        start = rng.randint(1, 2)
        word = []
        for t in range(n):
            leg = 1 + (start - 1 + t) % 2
            pool = _centered_pool(specs[leg - 1])
            word.append((leg, rng.choice(pool[:3] if n >= 5 else pool)))
        v, stable = _certified_moment(word, specs, rep)
        rep.prop("alternating centered words vanish (2 legs)").record(stable and v == 0, f"len={n}: {v}")
    three = [tp, sc, MomentSpec.two_point(0, 2, "1/2")]
    for i in range(max(size // 4, 1)):
        n = 2 + i % (three_leg_max - 1)
        legs_seq = [rng.randint(1, 3)]
        while len(legs_seq) < n:
            legs_seq.append(rng.choice([l for l in (1, 2, 3) if l != legs_seq[-1]]))
        word = [(leg, rng.choice(_centered_pool(three[leg - 1])[:3])) for leg in legs_seq]
        v, stable = _certified_moment(word, three, rep)
        rep.prop("alternating centered words vanish (3 legs)").record(stable and v == 0, f"legs={legs_seq}: {v}")
    x = Element.gen()
    for spec in (tp, sc):
        for other in (tp, sc):
            for n in range(1, 9):
                v, _ = _certified_moment([(1, x)] * n, [spec, other], rep)
                rep.prop("j1(X)^n has the moments of X").record(v == spec.moment(n), f"n={n}")
                v2, _ = _certified_moment([(2, x)] * n, [other, spec], rep)
                rep.prop("j2(X)^n has the moments of X").record(v2 == spec.moment(n), f"n={n}")
    for i in range(max(size // 10, 1)):
        specs = pairs[i % len(pairs)]
        n = 2 + i % 5
        word = [(rng.randint(1, 2), rng.choice(["X", "X X", "X X X - X", "2 X - 1"])) for _ in range(n)]
        oracle = free_product_state(word, specs)
        legs = leg_algebras(specs)
        v, _ = _certified_moment(word, specs, rep)
        vals = [state_at(_embedded(word, legs), list(specs), K)[1] for K in (n, n + 1, n + 2)]
        rep.prop("mixed moments equal the free product state").record(v == oracle, f"{word}: {v} vs {oracle}")
        rep.prop("values coincide at K = n, n+1, n+2").record(len(set(vals)) == 1, f"{word}: {vals}")
    for specs in pairs:
        for n in range(2, 5):
            for start in (1, 2):
                for el in ("X", "X X X"):
                    e = [Element.parse(el).centered(specs[0]), Element.parse(el).centered(specs[1])]
                    if any(a.constant_term() for a in e):
                        continue
                    word = [(1 + (start - 1 + t) % 2, e[(start - 1 + t) % 2]) for t in range(n)]
                    comp = compressed_word(word, specs, n)
                    rep.prop("compressed alternating products are singleton sums").record(
                        singleton_terms_ok(comp, specs), f"n={n} {el}")
    return rep


def _certified_moment(word, specs, rep):
    """Mixed moment plus a record of its K / K+1 certificate."""
    try:
        v, cert = mixed_moment(word, specs, with_certificate=True)
        stable = cert.stable
        detail = f"K={cert.K}: {cert.values}"
    except NonStabilizedError as exc:
        v, stable, detail = None, False, f"{exc}: {exc.values}"
    rep.prop("every value carries a stable K / K+1 certificate").record(stable, detail)
    return v, stable


def _embedded(word, legs):
    from .freeness import embedded_word, _normalize

    return embedded_word(_normalize(word), legs)


# ---------------------------------------------------------------------------
# hierarchy


def hierarchy_suite(seed: int = 0, size: int = 40, order: int = 6) -> SuiteReport:
    rng = random.Random(seed)
    rep = SuiteReport("hierarchy", seed)
    tp, sc = MomentSpec.two_point(), MomentSpec.semicircle(1)
    for specs in ((tp, tp), (sc, sc), (tp, sc)):
        got = hierarchy_sum_moments(specs, order, 1)
        want = boolean_convolve_oracle(specs[0], specs[1], order)
        rep.prop("m=1 matches the boolean convolution").record(got == want, f"{got} vs {want}")
        for m in (2, 3):
            got = hierarchy_sum_moments(specs, 2 * m, m)
            want = free_convolve_oracle(specs[0], specs[1], 2 * m)
            rep.prop("m=2,3 match free moments up to order 2m").record(got == want, f"m={m}: {got} vs {want}")
    b4 = hierarchy_sum_moments((tp, tp), 4, 1)[3]
    f4 = free_convolve_oracle(tp, tp, 4)[3]
    rep.prop("m=1 differs from free at order 4").record(b4 != f4, f"boolean {b4} vs free {f4}")
    pool = ["X", "X X", "X - 1", "X X X"]
    for _ in range(size):
        specs = [MomentSpec.two_point(*rng.choice([(-1, 1), (0, 2), (1, 3)]), "1/2"),
                 rng.choice([sc, MomentSpec.point(rng.randint(-2, 2))])]
        n = rng.randint(1, 4)
        word = [(rng.randint(1, 2), rng.choice(pool)) for _ in range(n)]
        got = m_free_moment(word, specs, 1)
        want = boolean_product_state(word, specs)
        rep.prop("m=1 mixed moments are boolean products").record(got == want, f"{word}: {got} vs {want}")
    return rep


def run_suite(name: str, seed: int = 0, size: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn = {"confluence": confluence_suite, "monotone": monotone_suite, "bialgebra": bialgebra_suite,
          "freeness": freeness_suite, "hierarchy": hierarchy_suite}[name]
    return fn(seed) if size is None else fn(seed, size)
