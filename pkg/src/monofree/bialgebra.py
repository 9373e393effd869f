"""Bialgebra structure of F0 and its lift to monotone closed operators.

The coproduct is defined on letters and extended multiplicatively:

* ``Delta(X'(k)) = X'(k) x q_k + q_k x X'(k)``
* ``Delta(X''(k)) = X''(k) x q_{k-1} + q_{k-1} x X''(k)``
* ``Delta(q_k) = q_k x q_k``

and the counit kills generators and sends nonzero projections to 1.
Applying ``Delta`` to a pre-free variable gives ``J_1(X) + J_2(X)``; after the
identification ``i`` these are the embeddings ``j_1(X) + j_2(X)``, and the
tensor product state of their powers gives the free additive convolution.
"""

from __future__ import annotations

from functools import lru_cache

from .algebras import F0, AlgebraPresentation, make_F0, make_H0
from .errors import ClosureError, PresentationError
from .monotone import Msdd, MonotoneOp, prefree, product
from .ncpoly import DPRIME, INF, PRIME, Gen, NCPolynomial, Proj, _accumulate, _tidy, intern
from .states import MomentSpec, certified_state
from .tensorspace import (
    LegMap,
    TensorMonotoneOp,
    TensorMsdd,
    TensorPoly,
    apply_maps,
    contract,
    identification_map,
    map_legs,
    tensor_add,
    tensor_mul,
    tensor_scale,
    tensor_star,
)

_DELTA_MEMO: dict = {}


def _require_f0(pres: AlgebraPresentation):
    if pres.schema != F0:
        raise PresentationError("the coproduct is defined on F0")


def _lattice_word(label, level):
    if level == INF:
        return ()
    return intern((Proj(label, level),))


def coproduct_letter(a, pres: AlgebraPresentation) -> TensorPoly:
    legs = (pres, pres)
    if type(a) is Proj:
        if a.level == 0:
            return TensorPoly.zero(legs)
        w = _lattice_word(a.label, a.level)
        return TensorPoly._raw(legs, {(w, w): 1})
    k = a.copy if a.deco == PRIME else a.copy - 1
    if a.deco not in (PRIME, DPRIME):
        raise PresentationError("coproduct needs decorated F0 letters")
    if k == 0:
        return TensorPoly.zero(legs)
    g = intern((a,))
    q = _lattice_word(a.label, k)
    return TensorPoly(legs, {(g, q): 1, (q, g): 1})


def coproduct_word(w, pres: AlgebraPresentation) -> TensorPoly:
    key = (id(pres), w)
    hit = _DELTA_MEMO.get(key)
    if hit is not None and hit[0] is pres:
        return hit[1]
    out = TensorPoly.one((pres, pres))
    for a in w:
        out = out.multiply(coproduct_letter(a, pres))
        if out.is_zero():
            break
    _DELTA_MEMO[key] = (pres, out)
    return out


def coproduct(x: NCPolynomial, pres: AlgebraPresentation) -> TensorPoly:
    """``Delta(x)``: multiplicative extension of the letter rules, reduced on both legs."""
    _require_f0(pres)
    x = pres.reduce(x)
    out: dict = {}
    for w, c in x.terms.items():
        for ws, d in coproduct_word(w, pres).terms.items():
            _accumulate(out, ws, c * d)
    return TensorPoly._raw((pres, pres), out)


def counit_word(w) -> int:
    """``eps`` on a normal word: 1 for pure projection words, else 0."""
    for a in w:
        if type(a) is Gen:
            return 0
        if a.level == 0:
            return 0
    return 1


def counit(x: NCPolynomial, pres: AlgebraPresentation):
    x = pres.reduce(x)
    total = 0
    for w, c in x.terms.items():
        total = _tidy(total + c * counit_word(w))
    return total


def split_leg(t: TensorPoly, leg: int) -> TensorPoly:
    """Apply ``Delta`` to one leg (0-based), which becomes two legs."""
    pres = t.legs[leg]
    _require_f0(pres)
    legs = t.legs[:leg] + (pres, pres) + t.legs[leg + 1:]
    out: dict = {}
    for ws, c in t.terms.items():
        for pair, d in coproduct_word(ws[leg], pres).terms.items():
            _accumulate(out, ws[:leg] + pair + ws[leg + 1:], c * d)
    return TensorPoly._raw(legs, out)


def counit_leg(t: TensorPoly, leg: int) -> TensorPoly:
    """Apply ``eps`` to one leg (0-based), which disappears."""
    return contract(t, leg, counit_word)


def iterated_coproduct(x: NCPolynomial, pres: AlgebraPresentation, n: int) -> TensorPoly:
    """``Delta^(n) = (id x Delta^(n-1)) Delta`` with n legs."""
    if n < 1:
        raise ValueError("n must be positive")
    t = TensorPoly.from_poly(pres, x)
    for leg in range(n - 1):
        t = split_leg(t, leg)
    return t


def lattice_images(pres: AlgebraPresentation, n: int, upto: int) -> list:
    """``P^(n) = Delta^(n-1)(P)`` for ``q_1..q_upto``."""
    return [iterated_coproduct(pres.q(m), pres, n) for m in range(1, upto + 1)]


# ---------------------------------------------------------------------------
# lifts to monotone closed operators


def lift_coproduct(z: MonotoneOp) -> TensorMonotoneOp:
    """``Delta[x_m, e_m] = [Delta(x_m), e_m x e_m]``.

    The lift follows the construction recipe of ``z``, so products are
    lifted factor by factor and never expanded.
    """
    pres = z.pres
    _require_f0(pres)
    legs = (pres, pres)
    domain = TensorMsdd.diagonal(z.msdd, 2)
    kind = z.recipe[0]
    if kind == "mul":
        a, b = lift_coproduct(z.recipe[1]), lift_coproduct(z.recipe[2])
        inner = tensor_mul(a, b)
        return TensorMonotoneOp(legs, inner.at, domain, z.cap, inner.recipe, z.verify, f"D({z.name})")
    if kind == "add":
        inner = tensor_add(lift_coproduct(z.recipe[1]), lift_coproduct(z.recipe[2]))
    elif kind == "scale":
        inner = tensor_scale(z.recipe[1], lift_coproduct(z.recipe[2]))
    elif kind == "star":
        inner = tensor_star(lift_coproduct(z.recipe[1]))
    else:
        inner = None
    rule = inner.at if inner is not None else (lambda m: coproduct(z.at(m), pres))
    recipe = inner.recipe if inner is not None else ("lift", z)
    return TensorMonotoneOp(legs, rule, domain, z.cap, recipe, z.verify, f"D({z.name})")


def J1(pres: AlgebraPresentation, gen: str, cap: int | None = None) -> TensorMonotoneOp:
    """``[sum_{k<=m} (X'(k) x q_k - X''(k) x q_{k-1}), q_m x q_m]``."""
    return _J(pres, gen, 0, cap)


def J2(pres: AlgebraPresentation, gen: str, cap: int | None = None) -> TensorMonotoneOp:
    """``[sum_{k<=m} (q_k x X'(k) - q_{k-1} x X''(k)), q_m x q_m]``."""
    return _J(pres, gen, 1, cap)


def _J(pres, gen, side, cap):
    _require_f0(pres)
    lab = pres.label
    legs = (pres, pres)

    def rule(m):
        terms: dict = {}
        for k in range(1, m + 1):
            for deco, level, sign in ((PRIME, k, 1), (DPRIME, k - 1, -1)):
                if level == 0:
                    continue
                g = intern((Gen(lab, gen, k, deco),))
                q = _lattice_word(lab, level)
                _accumulate(terms, (g, q) if side == 0 else (q, g), sign)
        return TensorPoly(legs, terms)

    return TensorMonotoneOp(legs, rule, TensorMsdd.diagonal(Msdd.lattice_shift(0), 2), cap,
                            ("custom",), name=f"J{side + 1}({gen})")


def tau(pres: AlgebraPresentation, gen: str = "X", cap: int | None = None) -> MonotoneOp:
    """``tau(X) = [sum_{k<=m} dX(k), q_m]``."""
    return prefree(pres, gen, cap)


@lru_cache(maxsize=None)
def _identification(source: AlgebraPresentation) -> LegMap:
    target = make_H0([(source.label, source.generators[source.label])])
    return identification_map(source, target)


def identification(source: AlgebraPresentation) -> LegMap:
    """``i`` from ``source`` (F0) into the H0 presentation with the same generators."""
    return _identification(source)


@lru_cache(maxsize=None)
def _convolution_algebra(gen: str) -> AlgebraPresentation:
    return make_F0({gen})


def convolution_operator(n: int, gen: str = "X") -> TensorMonotoneOp:
    """``(i x i) Delta(tau(X)^n)`` with the power built by monotone multiplication."""
    pres = _convolution_algebra(gen)
    t = tau(pres, gen)
    z = product(*[t] * n)
    i = identification(pres)
    return map_legs(lift_coproduct(z), (i, i))


def convolve_states(mu: MomentSpec, nu: MomentSpec, N: int, K: int | None = None,
                    with_certificates: bool = False):
    """``(mu [+] nu)(X^n)`` for ``n = 1..N`` as ``(mu^ x nu^)(Delta(tau(X)^n))``.

    Each value is read at truncation ``K = n + 1`` (or the override) and
    certified against ``K + 1``.
    """
    out, certs = [], []
    for n in range(1, N + 1):
        Kn = K if K is not None else n + 1
        v, cert = certified_state(convolution_operator(n), [mu, nu], Kn)
        out.append(v)
        certs.append(cert)
    return (out, certs) if with_certificates else out


def ideal_generators(pres: AlgebraPresentation, max_copy: int, max_level: int) -> list:
    """Generators of the ideal J as unreduced polynomials (both sides, starred and not)."""
    _require_f0(pres)
    lab = pres.label
    out = []
    for name in sorted(pres.generators[lab]):
        for star in (False, True):
            for k in range(1, max_copy + 1):
                for m in range(1, max_level + 1):
                    q = NCPolynomial.letter(Proj(lab, m))
                    for deco in (PRIME, DPRIME):
                        g = NCPolynomial.letter(Gen(lab, name, k, deco, star))
                        if k < m:
                            out.append(g - q.juxtapose(g))
                            out.append(g - g.juxtapose(q))
                    if k > m:
                        d = NCPolynomial.letter(Gen(lab, name, k, PRIME, star)) - \
                            NCPolynomial.letter(Gen(lab, name, k, DPRIME, star))
                        out.append(q.juxtapose(d))
                        out.append(d.juxtapose(q))
            out.append(NCPolynomial.letter(Gen(lab, name, 1, DPRIME, star)))
    return out


def push_identification(t: TensorPoly) -> TensorPoly:
    """``(i x ... x i)`` on every leg of an F0 tensor polynomial."""
    return apply_maps(t, [identification(p) for p in t.legs])


__all__ = [
    "J1",
    "J2",
    "ClosureError",
    "convolution_operator",
    "convolve_states",
    "coproduct",
    "coproduct_letter",
    "counit",
    "counit_leg",
    "counit_word",
    "ideal_generators",
    "identification",
    "iterated_coproduct",
    "lattice_images",
    "lift_coproduct",
    "push_identification",
    "split_leg",
    "tau",
]
