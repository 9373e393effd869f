import json
import random
from fractions import Fraction

import pytest

from monofree.algebras import make_H0
from monofree.errors import NonStabilizedError, ParseError, SpecExhaustedError
from monofree.freeness import embed_element, leg_algebras
from monofree.ncpoly import NCPolynomial, involute
from monofree.monotone import embed, identity
from monofree.states import (
    P,
    BooleanExtension,
    Element,
    MomentSpec,
    catalan_numbers,
    certified_state,
    mco_state,
    poly_state,
    site_words,
    tensor_state,
)
from monofree.suites import random_word
from monofree.tensorspace import TensorPoly, compress_E, tensor_product

TP = MomentSpec.two_point()
SC = MomentSpec.semicircle(1)
SHIFTED = MomentSpec.two_point(0, 2, "1/3")  # mean 4/3


def test_presets():
    assert SC.moments(8) == [0, 1, 0, 2, 0, 5, 0, 14]
    assert TP.moments(4) == [0, 1, 0, 1]
    assert MomentSpec.point(3).moments(3) == [3, 9, 27]
    assert MomentSpec.semicircle(2).moment(4) == 8
    assert SHIFTED.moment(1) == Fraction(4, 3)
    assert catalan_numbers(5) == [1, 1, 2, 5, 14, 42]


def test_custom_spec_is_finite():
    spec = MomentSpec.custom([0, 1, 0, 2])
    assert spec.moment(4) == 2
    with pytest.raises(SpecExhaustedError):
        spec.moment(5)


def test_parse_and_round_trip(tmp_path):
    s = MomentSpec.parse("two_point(-1, 1, 1/2)")
    assert s.describe() == "two_point(-1,1,1/2)"
    again = MomentSpec.from_dict(s.to_dict())
    assert again.moments(10) == s.moments(10)
    path = tmp_path / "mu.json"
    path.write_text(json.dumps({"preset": "custom", "moments": ["0", "1", "0", "3"]}))
    assert MomentSpec.parse(str(path)).moments(4) == [0, 1, 0, 3]
    assert MomentSpec.parse('{"preset": "semicircle", "params": {"variance": "1/2"}}').moment(2) == Fraction(1, 2)


@pytest.mark.parametrize("text", ["two_point(a,b)", "gaussian(1)", "/nonexistent/spec.json", "{bad json"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        MomentSpec.parse(text)


def test_positivity_check():
    assert SC.hankel_psd(12) and TP.hankel_psd(12)
    with pytest.warns(UserWarning):
        assert not MomentSpec.custom([0, 1, 0, "1/2"]).check_psd()


def test_elements():
    a = Element.parse("2 X^2 - 1/2")
    assert a == Element.gen() * Element.gen() * 2 - Fraction(1, 2)
    assert TP.expect(a) == Fraction(3, 2)
    c = a.centered(TP)
    assert TP.expect(c) == 0
    assert Element.parse("X* X").format() == "X* X"
    with pytest.raises(ParseError):
        Element.parse("X + ")


def test_single_site_values():
    H = make_H0([("A", {"X"})])
    assert poly_state(H.parse("X(1)"), SHIFTED) == SHIFTED.moment(1)
    assert poly_state(H.parse("X(1) X(1)"), SHIFTED) == SHIFTED.moment(2)
    assert poly_state(H.parse("X(2) q1 X(2)"), SHIFTED) == SHIFTED.moment(1) ** 2


def test_site_words_and_boolean_extension():
    H = make_H0([("A", {"X"})])
    (w,) = H.parse("X(2) q1 X(1) X(2)").terms
    sites = site_words(w)
    assert sites[0] == [P, ("X", False)]
    assert sites[1] == [("X", False), P, ("X", False)]
    ext = BooleanExtension(SHIFTED)
    assert ext([P]) == 1
    assert ext([("X", False), P, ("X", False), ("X", False)]) == SHIFTED.moment(1) * SHIFTED.moment(2)


def test_product_state_on_simple_tensors():
    legs = leg_algebras([SHIFTED, MomentSpec.point(5)])
    A, B = legs
    t = TensorPoly.simple(legs, (A.parse("X(1)"), B.parse("X(1)")))
    assert tensor_state(t, [SHIFTED, MomentSpec.point(5)]) == SHIFTED.moment(1) * 5
    assert tensor_state(TensorPoly.lattice(legs, 1), [SHIFTED, SC]) == 1


def test_state_is_compression_invariant():
    specs = [SHIFTED, SC]
    legs = leg_algebras(specs)
    rng = random.Random(3)
    for _ in range(200):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            ws = tuple(
                p.reduce_word(random_word(rng, p.label, ("X",), "H0", max_len=5, max_copy=3, levels=(1, 2, 3)))
                for p in legs
            )
            if None not in ws:
                terms[ws] = rng.choice((1, -2, "3/5"))
        w = TensorPoly(legs, terms)
        assert tensor_state(compress_E(w), specs) == tensor_state(w, specs)


def test_mco_state_examples():
    H = make_H0([("A", {"X"})])
    assert mco_state(embed(H.parse("X(1)"), H), SHIFTED) == SHIFTED.moment(1)
    assert mco_state(identity(H), SHIFTED) == 1
    legs = leg_algebras([SHIFTED, SC])
    j = embed_element("X", 1, legs)
    for n in range(1, 7):
        v, cert = mco_state(tensor_product(*[j] * n), [SHIFTED, SC], with_certificate=True)
        assert v == SHIFTED.moment(n) and cert.stable


def test_value_independent_of_representative():
    specs = [SHIFTED, MomentSpec.point(5)]
    legs = leg_algebras(specs)
    x = tensor_product(embed_element("X", 1, legs), embed_element("X", 2, legs), embed_element("X", 1, legs))
    values = {certified_state(x, specs, K)[0] for K in (3, 4, 5, 6)}
    assert values == {SHIFTED.moment(2) * 5}


def test_non_stabilization_is_an_error():
    legs = leg_algebras([TP, TP])
    s = embed_element("X", 1, legs) + embed_element("X", 2, legs)
    with pytest.raises(NonStabilizedError) as info:
        certified_state(tensor_product(*[s] * 4), [TP, TP], 1)
    assert info.value.values == {1: 4, 2: 6}


def test_state_is_positive_on_random_elements():
    H = make_H0([("A", {"X"})])
    rng = random.Random(8)
    for spec in (TP, SC, SHIFTED):
        for _ in range(150):
            x = NCPolynomial()
            for _ in range(rng.randint(1, 3)):
                w = random_word(rng, "A", ("X",), "H0", max_len=3, max_copy=3, levels=(1, 2, 3))
                x = x + NCPolynomial.word(w, rng.choice((1, -1, 2, "1/2")))
            x = H.reduce(x)
            assert poly_state(H.mul(H.reduce(involute(x)), x), spec) >= 0
