import itertools
import random

import pytest

from monofree.errors import PresentationError
from monofree.freeness import (
    compressed_word,
    embed_element,
    free_sum_moments,
    hierarchy_sum_moments,
    leg_algebras,
    m_free_moment,
    mixed_moment,
    singleton_terms_ok,
)
from monofree.oracle import boolean_product_state, free_convolve_oracle, free_product_state
from monofree.states import Element, MomentSpec
from monofree.suites import freeness_suite
from monofree.tensorspace import tensor_equivalent, tensor_identity, tensor_mul, tensor_star

TP = MomentSpec.two_point()
SC = MomentSpec.semicircle(1)
MU = MomentSpec.two_point(0, 2, "1/3")
NU = MomentSpec.two_point(1, 3, "1/4")


def test_embedding_of_unit():
    legs = leg_algebras([TP, SC])
    one = embed_element(1, 1, legs)
    assert tensor_equivalent(one, tensor_identity(legs), 6)[0]


def test_embedding_is_multiplicative():
    legs = leg_algebras([MU, SC])
    a, b = Element.parse("X"), Element.parse("X X - 2")
    lhs = embed_element(a * b, 1, legs)
    rhs = tensor_mul(embed_element(a, 1, legs), embed_element(b, 1, legs))
    assert tensor_equivalent(lhs, rhs, 6)[0]


def test_embedding_commutes_with_star():
    legs = leg_algebras([MU, SC])
    x = embed_element("X", 2, legs)
    xs = embed_element(Element.gen("X", star=True), 2, legs)
    for m in range(1, 6):
        assert tensor_star(x).at(m) == xs.at(m)


def test_bad_leg():
    legs = leg_algebras([TP, SC])
    with pytest.raises(PresentationError):
        embed_element("X", 3, legs)
    with pytest.raises(PresentationError):
        embed_element("Y", 1, legs)


def test_two_factor_mixed_moment():
    assert mixed_moment([(1, "X"), (2, "X")], [MU, NU]) == MU.moment(1) * NU.moment(1)


def test_classic_length_three_case():
    a = Element.gen().centered(TP)
    v = mixed_moment([(1, a), (2, "X X"), (1, a)], [TP, NU])
    assert v == TP.expect(a * a) * NU.moment(2)


@pytest.mark.parametrize("spec", [TP, SC, MU])
def test_distribution_preserved(spec):
    for n in range(1, 9):
        assert mixed_moment([(1, "X")] * n, [spec, SC]) == spec.moment(n)
        assert mixed_moment([(2, "X")] * n, [SC, spec]) == spec.moment(n)


def test_alternating_centered_products_vanish():
    rep = freeness_suite(seed=2, size=200)
    assert rep.passed, rep.to_dict()
    assert rep.prop("alternating centered words vanish (2 legs)").instances >= 200


def test_mixed_moments_match_free_product_state():
    rng = random.Random(9)
    pool = ["X", "X X", "X - 1", "2 X X X - X"]
    for _ in range(40):
        n = rng.randint(1, 5)
        word = [(rng.randint(1, 2), rng.choice(pool)) for _ in range(n)]
        assert mixed_moment(word, [MU, NU]) == free_product_state(word, [MU, NU]), word


def test_three_legs():
    specs = [MU, SC, NU]
    for legs_seq in itertools.product((1, 2, 3), repeat=3):
        word = [(leg, "X") for leg in legs_seq]
        assert mixed_moment(word, specs) == free_product_state(word, specs)


def test_certificates_stable_beyond_word_length():
    word = [(1, "X"), (2, "X X"), (1, "X"), (2, "X")]
    values = set()
    for K in (4, 5, 6):
        v, cert = mixed_moment(word, [MU, NU], K, with_certificate=True)
        assert cert.stable and cert.compressions_equal
        values.add(v)
    assert len(values) == 1


def test_compressed_alternating_products_are_sums_of_singletons():
    for specs in ((TP, SC), (SC, TP)):
        for n in range(2, 5):
            a = [Element.gen().centered(s) for s in specs]
            word = [(1 + t % 2, a[t % 2]) for t in range(n)]
            comp = compressed_word(word, specs, n)
            assert singleton_terms_ok(comp, specs)


def test_singleton_check_detects_nonvanishing_terms():
    comp = compressed_word([(1, "X"), (2, "X")], [MU, NU], 2)
    assert not singleton_terms_ok(comp, [MU, NU])


def test_sum_moments_match_oracle():
    for a, b in ((TP, TP), (SC, SC), (MU, NU)):
        got, certs = free_sum_moments([a, b], 6, with_certificates=True)
        assert got == free_convolve_oracle(a, b, 6)
        assert all(c.stable for c in certs)


def test_hierarchy_first_layer_is_boolean():
    word = [(1, "X"), (2, "X"), (1, "X")]
    assert m_free_moment(word, [MU, NU], 1) == MU.moment(1) ** 2 * NU.moment(1)
    assert m_free_moment(word, [MU, NU], 1) == boolean_product_state(word, [MU, NU])


def test_hierarchy_agrees_with_free_up_to_order_2m():
    rng = random.Random(4)
    for _ in range(30):
        word = [(rng.randint(1, 2), "X") for _ in range(4)]
        assert m_free_moment(word, [MU, NU], 2) == mixed_moment(word, [MU, NU])
    for word in itertools.product((1, 2), repeat=5):
        w = [(leg, "X") for leg in word]
        assert m_free_moment(w, [MU, NU], 5) == mixed_moment(w, [MU, NU])


def test_hierarchy_sum_moments():
    assert hierarchy_sum_moments([TP, TP], 6, 1) == [0, 2, 0, 4, 0, 8]
    for m in (2, 3):
        assert hierarchy_sum_moments([TP, TP], 2 * m, m) == free_convolve_oracle(TP, TP, 2 * m)
    assert hierarchy_sum_moments([TP, TP], 4, 1)[3] != free_convolve_oracle(TP, TP, 4)[3]
