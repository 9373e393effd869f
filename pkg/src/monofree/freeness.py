"""Tensor-product representation of free random variables.

An element ``a`` of the l-th algebra is sent to
``j(a) = sum_k a(k) x p_k`` where ``a(k)`` sits on leg l and
``p_k = q_k - q_{k-1}`` is built from the composite projection
``q_k = q_k x ... x q_k`` on all the other legs.  Mixed moments are values
of the tensor product state on products of such embeddings, and the
truncated embeddings ``j^(m)`` give the m-free hierarchy.

Leg numbers are 1-based throughout this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .algebras import AlgebraPresentation, make_H0
from .errors import PresentationError
from .monotone import Msdd
from .ncpoly import Proj, _accumulate, intern
from .states import (
    Certificate,
    Element,
    MomentSpec,
    as_element,
    P,
    certified_state,
    compressed_at,
    site_words,
    state_at,
)
from .tensorspace import (
    TensorMonotoneOp,
    TensorMsdd,
    TensorPoly,
    tensor_add,
    tensor_product,
)


@lru_cache(maxsize=None)
def _algebras(key) -> tuple:
    return tuple(make_H0([(label, gens)]) for label, gens in key)


def leg_algebras(specs: Sequence[MomentSpec]) -> tuple:
    """One H0 presentation per spec; shared between calls so memo tables persist."""
    labels = [s.label for s in specs]
    key = tuple(
        (lab if labels.count(lab) == 1 else f"{lab}{i + 1}", s.generators) for i, (lab, s) in enumerate(zip(labels, specs))
    )
    return _algebras(key)


def _proj_word(pres: AlgebraPresentation, level):
    return intern((Proj(pres.label, level),))


def embed_element(a, leg: int, legs: Sequence[AlgebraPresentation], cap: int | None = None) -> TensorMonotoneOp:
    """``j(a) = [sum_{k<=m} a(k) x p_k, q_m x ... x q_m]`` with ``a`` on ``leg``."""
    a = as_element(a)
    legs = tuple(legs)
    n = len(legs)
    if not 1 <= leg <= n:
        raise PresentationError(f"leg {leg} out of range 1..{n}")
    li = leg - 1
    pres = legs[li]
    unknown = a.names() - pres.generators[pres.label]
    if unknown:
        raise PresentationError(f"{sorted(unknown)} are not generators of leg {leg}")
    sums = {0: {}}

    def block(k):
        """Terms of ``a(k) x (q_k - q_{k-1})`` on the other legs."""
        x = pres.reduce(a.copy(pres.label, k))
        out: dict = {}
        for level, sign in ((k, 1), (k - 1, -1)):
            if level == 0:
                continue
            for w, c in x.terms.items():
                ws = tuple(w if i == li else _proj_word(p, level) for i, p in enumerate(legs))
                _accumulate(out, ws, sign * c)
        return out

    def rule(m):
        top = max(sums)
        acc = dict(sums[top])
        for k in range(top + 1, m + 1):
            for ws, c in block(k).items():
                _accumulate(acc, ws, c)
            sums[k] = dict(acc)
        return TensorPoly._raw(legs, dict(sums[m]))

    return TensorMonotoneOp(legs, rule, TensorMsdd.diagonal(Msdd.lattice_shift(0), n), cap,
                            ("embed_element", a, leg), name=f"j{leg}({a})")


@dataclass(frozen=True)
class Embedding:
    """Which leg carries the algebra and at which truncation the embedding is read."""

    legs: tuple
    leg: int
    K: int | None = None

    def __call__(self, a) -> TensorMonotoneOp:
        return embed_element(a, self.leg, self.legs, self.K)


def embedded_word(word, legs) -> TensorMonotoneOp:
    """``j(a_1) j(a_2) ... j(a_n)`` for ``word = [(leg, element), ...]``."""
    if not word:
        return tensor_product(embed_element(Element.constant(), 1, legs))
    return tensor_product(*[embed_element(a, leg, legs) for leg, a in word])


def _normalize(word):
    return [(int(leg), as_element(a)) for leg, a in word]


def mixed_moment(word, specs: Sequence[MomentSpec], K: int | None = None, with_certificate: bool = False):
    """``(mu_1^ x ... x mu_n^)(j(a_1) ... j(a_n))``, certified at K against K + 1.

    ``K`` defaults to the word length.
    """
    word = _normalize(word)
    legs = leg_algebras(specs)
    K = K if K is not None else max(len(word), 1)
    value, cert = certified_state(embedded_word(word, legs), list(specs), K)
    return (value, cert) if with_certificate else value


def m_free_moment(word, specs: Sequence[MomentSpec], m: int):
    """Same pipeline, read at index m with no stabilization requirement."""
    if m < 1:
        raise ValueError("m must be at least 1")
    word = _normalize(word)
    legs = leg_algebras(specs)
    return state_at(embedded_word(word, legs), list(specs), m)[1]


def sum_embedding(specs: Sequence[MomentSpec], elements=None) -> TensorMonotoneOp:
    """``j_1(a_1) + ... + j_n(a_n)``; by default every ``a_l`` is the generator."""
    legs = leg_algebras(specs)
    if elements is None:
        elements = [Element.gen(s.generators[0]) for s in specs]
    op = None
    for leg, a in enumerate(elements, start=1):
        e = embed_element(a, leg, legs)
        op = e if op is None else tensor_add(op, e)
    return op


def free_sum_moments(specs: Sequence[MomentSpec], N: int, with_certificates: bool = False):
    """Moments of ``j_1(X) + j_2(X) + ...`` of orders ``1..N``, each certified at
    ``K = n + 1`` against ``K + 1``."""
    s = sum_embedding(specs)
    out, certs = [], []
    for n in range(1, N + 1):
        v, cert = certified_state(tensor_product(*[s] * n), list(specs), n + 1)
        out.append(v)
        certs.append(cert)
    return (out, certs) if with_certificates else out


def hierarchy_sum_moments(specs: Sequence[MomentSpec], N: int, m: int) -> list:
    """Moments of ``j^(m)_1(X) + j^(m)_2(X)`` of orders ``1..N`` (read at index m)."""
    s = sum_embedding(specs)
    return [state_at(tensor_product(*[s] * n), list(specs), m)[1] for n in range(1, N + 1)]


def compressed_word(word, specs: Sequence[MomentSpec], K: int) -> TensorPoly:
    """``E(j(a_1) ... j(a_n))`` at index K."""
    word = _normalize(word)
    return compressed_at(embedded_word(word, leg_algebras(specs)), K)


def isolated_blocks(ws):
    """Yield ``(leg, site, letters)`` for every ``P``-free segment of every site word
    that is flanked by ``P`` on both sides.

    Letters of other copies are invisible at a site, so ``q_1 X(1) X(2) q_1``
    isolates ``X`` at site 1: this is the site-wise form of a subword
    ``q_k X(k) q_k``.
    """
    for li, w in enumerate(ws):
        for site, sw in enumerate(site_words(w), start=1):
            cuts = [i for i, a in enumerate(sw) if a is P]
            for lo, hi in zip(cuts, cuts[1:]):
                if hi > lo + 1:
                    yield li, site, tuple(sw[lo + 1:hi])


def singleton_terms_ok(comp: TensorPoly, specs: Sequence[MomentSpec]) -> bool:
    """Every term has an isolated segment whose moment vanishes."""
    for ws in comp.terms:
        if not any(specs[li].word_moment(run) == 0 for li, _, run in isolated_blocks(ws)):
            return False
    return True


__all__ = [
    "Certificate",
    "Embedding",
    "compressed_word",
    "embed_element",
    "embedded_word",
    "free_sum_moments",
    "hierarchy_sum_moments",
    "isolated_blocks",
    "leg_algebras",
    "m_free_moment",
    "mixed_moment",
    "singleton_terms_ok",
    "sum_embedding",
]
