import pytest

from monofree.algebras import F0, H0, AlgebraPresentation, filtration_level, make_F0, make_H0
from monofree.bialgebra import ideal_generators
from monofree.errors import PresentationError
from monofree.ncpoly import NCPolynomial


def test_filtration_levels():
    F = make_F0({"X"})
    assert int(filtration_level(F.parse("X'(3) q2"))) == 3
    assert int(filtration_level(F.parse("q1"))) == 1
    assert int(filtration_level(NCPolynomial.one())) == 0
    assert filtration_level(F.parse("q1")) < filtration_level(F.parse("X''(2)"))


def test_multi_label_h0_keeps_labels_apart():
    H = make_H0([("A", {"X"}), ("B", {"X"})])
    x = H.parse("A:q1 B:X(2) A:q1")
    assert H.format(x) == "A:q1 B:X(2) A:q1"
    # projections of different algebras never meet
    assert H.format(H.parse("A:q1 B:q2")) == "A:q1 B:q2"
    assert H.format(H.parse("A:q3 A:X(1)")) == "A:X(1)"


def test_presentation_helpers():
    F = make_F0({"X"})
    assert F.p(1) == F.q(1)
    assert F.mul(F.gen("X", 2), F.q(1)) == F.parse("X'(2) q1")
    assert F.gen("X", 1, deco=2).is_zero()
    assert F.q(0).is_zero()
    assert F.schema == F0 and make_H0([("A", {"X"})]).schema == H0


@pytest.mark.parametrize("bad", [lambda: make_F0(set()), lambda: make_H0([]),
                                 lambda: make_H0([("A", {"X"}), ("A", {"Y"})]),
                                 lambda: AlgebraPresentation("K0", {"A": {"X"}})])
def test_bad_presentations(bad):
    with pytest.raises(PresentationError):
        bad()


def test_single_label_required():
    with pytest.raises(PresentationError):
        make_H0([("A", {"X"}), ("B", {"Y"})]).label


def test_every_ideal_generator_reduces_to_zero():
    F = make_F0({"X", "Y"})
    gens = ideal_generators(F, 5, 6)
    assert len(gens) > 100
    for g in gens:
        assert F.reduce(g).is_zero(), g
