import random

import pytest

from monofree.algebras import make_F0, make_H0
from monofree.bialgebra import (
    J1,
    J2,
    convolution_operator,
    convolve_states,
    coproduct,
    coproduct_word,
    counit,
    counit_leg,
    iterated_coproduct,
    lattice_images,
    lift_coproduct,
    push_identification,
    split_leg,
    tau,
)
from monofree.errors import PresentationError
from monofree.freeness import free_sum_moments
from monofree.monotone import embed, prefree, product
from monofree.ncpoly import NCPolynomial, coeff
from monofree.oracle import free_convolve_oracle
from monofree.states import MomentSpec, certified_state, tensor_state
from monofree.suites import bialgebra_suite, random_word
from monofree.tensorspace import TensorPoly

F = make_F0({"X", "Y"})
TP = MomentSpec.two_point()
SC = MomentSpec.semicircle(1)


def simple(a, b):
    return TensorPoly.simple((F, F), (F.parse(a), F.parse(b)))


def test_coproduct_examples():
    assert coproduct(F.parse("q3"), F) == simple("q3", "q3")
    assert coproduct(F.parse("X''(2)"), F) == simple("X''(2)", "q1") + simple("q1", "X''(2)")
    assert coproduct(F.parse("X'(2)"), F) == simple("X'(2)", "q2") + simple("q2", "X'(2)")
    for k, m in ((1, 2), (2, 5), (3, 4)):
        (w,) = F.parse(f"q{m} X'({k})", reduce=False).terms
        assert coproduct_word(w, F) == coproduct(F.parse(f"X'({k})"), F)


def test_counit_examples():
    assert counit(F.parse("q5 X'(2) q1"), F) == 0
    assert counit(F.parse("q2 q7"), F) == 1
    assert counit(F.parse("3 + q1"), F) == 4


def test_bialgebra_laws_on_random_words():
    rep = bialgebra_suite(seed=1, size=100)
    assert rep.passed, rep.to_dict()
    for name in ("coassociativity", "counit (eps x id)", "counit (id x eps)", "homomorphism",
                 "ideal preserved by Delta"):
        assert rep.prop(name).instances >= 100


def test_counit_laws_directly():
    rng = random.Random(5)
    for _ in range(50):
        x = F.reduce(NCPolynomial.word(random_word(rng, "F", ("X", "Y"), "F0", max_len=4, max_copy=3)))
        d = coproduct(x, F)
        assert counit_leg(d, 0) == TensorPoly.from_poly(F, x) == counit_leg(d, 1)


def test_iterated_coproduct_of_projections():
    assert iterated_coproduct(F.q(2), F, 3) == TensorPoly.lattice((F, F, F), 2)
    imgs = lattice_images(F, 2, 3)
    assert imgs[2] == TensorPoly.lattice((F, F), 3)


def test_coproduct_needs_f0():
    H = make_H0([("A", {"X"})])
    with pytest.raises(PresentationError):
        coproduct(H.parse("X(1)"), H)


def test_lift_of_prefree_variable():
    t = tau(F, "X")
    lifted = lift_coproduct(t)
    j = J1(F, "X") + J2(F, "X")
    for m in range(1, 7):
        assert lifted.at(m) == j.at(m)


def test_lift_of_projection_is_group_like():
    lifted = lift_coproduct(embed(F.q(1), F))
    for m in range(2, 5):
        assert lifted.at(m) == TensorPoly.lattice((F, F), 1)


def test_coassociativity_on_truncations():
    z = product(prefree(F, "X"), prefree(F, "Y"))
    for m in range(1, 5):
        d = coproduct(z.at(m), F)
        assert split_leg(d, 0) == split_leg(d, 1)


def test_lift_follows_products():
    z = product(prefree(F, "X"), prefree(F, "Y"))
    lifted = lift_coproduct(z)
    for m in range(1, 5):
        assert lifted.at(m) == coproduct(z.at(m), F)


def test_identified_powers_are_powers_of_the_sum():
    # (i x i) Delta(tau(X)^n) against (j1(X) + j2(X))^n, n <= 4
    rep = bialgebra_suite(seed=0, size=5)
    assert rep.prop("(i x i) Delta(tau(X))^n = (j1 + j2)^n").passed


def test_identification_keeps_state_values():
    conv = convolution_operator(3)
    lifted = lift_coproduct(product(*[tau(make_F0({"X"}))] * 3))
    for m in (3, 4):
        pushed = push_identification(lifted.at(m))
        assert pushed.format() == conv.at(m).format()
        assert tensor_state(pushed, [TP, SC]) == tensor_state(conv.at(m), [TP, SC])


def test_convolution_examples():
    assert convolve_states(TP, TP, 4)[1::2] == [2, 6]
    assert convolve_states(SC, SC, 4)[3] == 8
    assert convolve_states(MomentSpec.point(1), MomentSpec.point(2), 3) == [3, 9, 27]
    assert convolve_states(MomentSpec.point(3), SC, 1) == [3]


@pytest.mark.parametrize("pair", [(TP, TP), (SC, SC), (TP, SC)])
def test_two_representation_paths_agree(pair):
    a, b = pair
    via_coproduct, certs = convolve_states(a, b, 8, with_certificates=True)
    assert via_coproduct == free_sum_moments([a, b], 8) == free_convolve_oracle(a, b, 8)
    assert all(c.stable for c in certs)


def test_polynomials_in_the_coproduct():
    # state of P(Delta(tau(X))) for P of degree <= 4 is linear in the powers
    coeffs = [3, -1, 2, "1/2", -2]
    ops = [convolution_operator(n) for n in range(1, 5)]
    value = 3 + sum(coeff(c) * certified_state(op, [TP, SC], n + 1)[0]
                    for n, (c, op) in enumerate(zip(coeffs[1:], ops), start=1))
    m = [1] + free_convolve_oracle(TP, SC, 4)
    expected = sum(coeff(c) * m[n] for n, c in enumerate(coeffs))
    assert value == expected
