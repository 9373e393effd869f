"""Independent ground truth from partition combinatorics.

Nothing here touches words, rewriting or tensor products: free and boolean
convolutions come from cumulant additivity over non-crossing and interval
partitions, and mixed moments of free variables come from the recursive
centering rule of the free product state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .ncpoly import _tidy
from .states import Element, MomentSpec, as_element

MAX_NC = 12


@dataclass(frozen=True)
class SetPartition:
    """Blocks of ``{1..n}``, each sorted, ordered by smallest element."""

    blocks: tuple

    @classmethod
    def of(cls, blocks) -> "SetPartition":
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def non_crossing(self) -> bool:
        return is_non_crossing(self.blocks)

    @property
    def interval(self) -> bool:
        return all(b[-1] - b[0] + 1 == len(b) for b in self.blocks)

    def sizes(self) -> list:
        return [len(b) for b in self.blocks]


def is_non_crossing(blocks) -> bool:
    """No ``a < b < c < d`` with ``a, c`` in one block and ``b, d`` in another."""
    owner = {}
    for i, b in enumerate(blocks):
        for x in b:
            owner[x] = i
    pts = sorted(owner)
    for ia, a in enumerate(pts):
        for ib in range(ia + 1, len(pts)):
            b = pts[ib]
            if owner[b] == owner[a]:
                continue
            for ic in range(ib + 1, len(pts)):
                c = pts[ic]
                if owner[c] != owner[a]:
                    continue
                for d in pts[ic + 1:]:
                    if owner[d] == owner[b]:
                        return False
    return True


def set_partitions(n: int):
    """All partitions of ``{1..n}`` via restricted growth strings."""
    if n == 0:
        yield SetPartition(())
        return

    def grow(i, labels, top):
        if i == n:
            blocks = {}
            for x, lab in enumerate(labels, start=1):
                blocks.setdefault(lab, []).append(x)
            yield SetPartition.of(blocks.values())
            return
        for lab in range(top + 2):
            yield from grow(i + 1, labels + [lab], max(top, lab))

    yield from grow(1, [0], 0)


def _nc_blocks(points: tuple) -> list:
    """Non-crossing partitions of an ordered tuple of points, as block lists."""
    if not points:
        return [[]]
    first, rest = points[0], points[1:]
    out = []
    # choose the other members of the block of ``first``; gaps are filled independently
    for mask in range(1 << len(rest)):
        chosen = [rest[i] for i in range(len(rest)) if mask >> i & 1]
        block = (first,) + tuple(chosen)
        gaps = []
        idx = [0] + [i + 1 for i in range(len(rest)) if mask >> i & 1] + [len(points)]
        for lo, hi in zip(idx, idx[1:]):
            gaps.append(points[lo + 1:hi])
        partials = [[block]]
        for g in gaps:
            partials = [p + q for p in partials for q in _nc_blocks(g)]
        out.extend(partials)
    return out


@lru_cache(maxsize=None)
def enumerate_nc(n: int) -> tuple:
    """All non-crossing partitions of ``{1..n}`` (``1 <= n <= 12``)."""
    if not 1 <= n <= MAX_NC:
        raise ValueError(f"n must be in 1..{MAX_NC}")
    return tuple(sorted({SetPartition.of(b) for b in _nc_blocks(tuple(range(1, n + 1)))},
                        key=lambda p: p.blocks))


@lru_cache(maxsize=None)
def enumerate_interval(n: int) -> tuple:
    """All interval partitions of ``{1..n}`` (compositions of n)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for mask in range(1 << (n - 1)):
        blocks, start = [], 1
        for i in range(1, n):
            if mask >> (i - 1) & 1:
                blocks.append(tuple(range(start, i + 1)))
                start = i + 1
        blocks.append(tuple(range(start, n + 1)))
        out.append(SetPartition(tuple(blocks)))
    return tuple(sorted(out, key=lambda p: p.blocks))


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# moments and cumulants


def _size_profiles(partitions) -> dict:
    """Multiset of block sizes of each partition, with multiplicities."""
    prof: dict = {}
    for p in partitions:
        key = tuple(sorted(p.sizes()))
        prof[key] = prof.get(key, 0) + 1
    return prof


def _cumulants(m: Sequence, family) -> list:
    m = [Fraction(x) for x in m]
    k: list = []
    for n in range(1, len(m) + 1):
        acc = Fraction(0)
        for sizes, mult in _size_profiles(family(n)).items():
            if sizes == (n,):
                continue
            term = Fraction(mult)
            for s in sizes:
                term *= k[s - 1]
            acc += term
        k.append(m[n - 1] - acc)
    return [_tidy(x) for x in k]


def _moments(k: Sequence, family) -> list:
    k = [Fraction(x) for x in k]
    out = []
    for n in range(1, len(k) + 1):
        acc = Fraction(0)
        for sizes, mult in _size_profiles(family(n)).items():
            term = Fraction(mult)
            for s in sizes:
                term *= k[s - 1]
            acc += term
        out.append(_tidy(acc))
    return out


def moments_to_free_cumulants(m: Sequence) -> list:
    """``kappa_1..kappa_N`` from ``m_1..m_N`` (``m_0 = 1`` implicit)."""
    return _cumulants(m, enumerate_nc)


def free_cumulants_to_moments(k: Sequence) -> list:
    return _moments(k, enumerate_nc)


def moments_to_boolean_cumulants(m: Sequence) -> list:
    return _cumulants(m, enumerate_interval)


def boolean_cumulants_to_moments(k: Sequence) -> list:
    return _moments(k, enumerate_interval)


def free_convolve_oracle(mu: MomentSpec, nu: MomentSpec, N: int) -> list:
    """``m_1..m_N`` of ``mu [+] nu`` by free cumulant additivity."""
    ka = moments_to_free_cumulants(mu.moments(N))
    kb = moments_to_free_cumulants(nu.moments(N))
    return free_cumulants_to_moments([a + b for a, b in zip(ka, kb)])


def boolean_convolve_oracle(mu: MomentSpec, nu: MomentSpec, N: int) -> list:
    """``m_1..m_N`` of the boolean convolution by boolean cumulant additivity."""
    ka = moments_to_boolean_cumulants(mu.moments(N))
    kb = moments_to_boolean_cumulants(nu.moments(N))
    return boolean_cumulants_to_moments([a + b for a, b in zip(ka, kb)])


# ---------------------------------------------------------------------------
# free and boolean products of states


def _key(word) -> tuple:
    return tuple((leg, frozenset(a.terms.items())) for leg, a in word)


def _merge(word) -> tuple:
    """Multiply neighbours on the same leg and pull out scalar factors."""
    scale = 1
    out: list = []
    for leg, a in word:
        if out and out[-1][0] == leg:
            out[-1] = (leg, out[-1][1] * a)
        else:
            out.append((leg, a))
    changed = True
    while changed:
        changed = False
        for i, (leg, a) in enumerate(out):
            if a.degree() == 0:
                scale = _tidy(scale * a.constant_term())
                out.pop(i)
                if 0 < i < len(out) and out[i - 1][0] == out[i][0]:
                    out[i - 1] = (out[i - 1][0], out[i - 1][1] * out[i][1])
                    out.pop(i)
                changed = True
                break
    return scale, out


def free_product_state(word, specs: Sequence[MomentSpec]):
    """``phi(a_1 ... a_n)`` for the free product of the states ``specs``.

    ``word`` is a list of ``(leg, element)`` with 1-based legs.  The first
    uncentered factor is split as ``a = a_o + phi(a) 1``; a word of
    centered factors from alternating legs has state 0.
    """
    specs = list(specs)
    memo: dict = {}

    def phi(w):
        scale, w = _merge(w)
        if not scale:
            return 0
        if not w:
            return scale
        key = _key(w)
        if key in memo:
            return _tidy(scale * memo[key])
        if len(w) == 1:
            leg, a = w[0]
            val = specs[leg - 1].expect(a)
        else:
            val = 0
            for i, (leg, a) in enumerate(w):
                c = specs[leg - 1].expect(a)
                if c:
                    centered = w[:i] + [(leg, a - c)] + w[i + 1:]
                    rest = w[:i] + w[i + 1:]
                    val = _tidy(phi(centered) + c * phi(rest))
                    break
        memo[key] = val
        return _tidy(scale * val)

    return phi([(int(leg), as_element(a)) for leg, a in word])


def boolean_product_state(word, specs: Sequence[MomentSpec]):
    """Boolean product: merge neighbours on the same leg and multiply their states."""
    specs = list(specs)
    scale, w = 1, []
    for leg, a in word:
        a = as_element(a)
        if w and w[-1][0] == leg:
            w[-1] = (leg, w[-1][1] * a)
        else:
            w.append((int(leg), a))
    for leg, a in w:
        scale = _tidy(scale * specs[leg - 1].expect(a))
    return scale


def free_sum_moments_oracle(specs: Sequence[MomentSpec], N: int) -> list:
    """Moments of ``a_1 + ... + a_n`` for free generators, by expanding into words."""
    x = [Element.gen(s.generators[0]) for s in specs]
    out = []
    for n in range(1, N + 1):
        total = 0
        for legs in itertools.product(range(1, len(specs) + 1), repeat=n):
            total = _tidy(total + free_product_state([(leg, x[leg - 1]) for leg in legs], specs))
        out.append(total)
    return out
