from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofree.oracle import (
    SetPartition,
    boolean_convolve_oracle,
    boolean_cumulants_to_moments,
    boolean_product_state,
    catalan,
    enumerate_interval,
    enumerate_nc,
    free_convolve_oracle,
    free_cumulants_to_moments,
    free_product_state,
    free_sum_moments_oracle,
    is_non_crossing,
    moments_to_boolean_cumulants,
    moments_to_free_cumulants,
    set_partitions,
)
from monofree.states import Element, MomentSpec

TP = MomentSpec.two_point()
SC = MomentSpec.semicircle(1)


@pytest.mark.parametrize("n,count", [(1, 1), (3, 5), (4, 14)])
def test_nc_counts(n, count):
    assert len(enumerate_nc(n)) == count


def test_nc_matches_brute_force():
    for n in range(1, 8):
        brute = {p for p in set_partitions(n) if p.non_crossing}
        assert set(enumerate_nc(n)) == brute
        assert len(brute) == catalan(n)


def test_nc_range():
    assert len(enumerate_nc(12)) == catalan(12)
    with pytest.raises(ValueError):
        enumerate_nc(13)
    with pytest.raises(ValueError):
        enumerate_nc(0)


def test_crossing_detection():
    assert not is_non_crossing([(1, 3), (2, 4)])
    assert is_non_crossing([(1, 4), (2, 3)])
    assert SetPartition.of([(2, 3), (1, 4)]).blocks == ((1, 4), (2, 3))


def test_interval_partitions():
    assert len(enumerate_interval(5)) == 16
    assert all(p.interval and p.non_crossing for p in enumerate_interval(5))


def test_free_cumulant_examples():
    assert moments_to_free_cumulants(MomentSpec.point(3).moments(5)) == [3, 0, 0, 0, 0]
    k = moments_to_free_cumulants(SC.moments(6))
    assert k[1] == 1 and k[3] == 0
    k = moments_to_free_cumulants([0, 1, 0, 1])
    assert k[1] == 1 and k[3] == -1


moment_lists = st.lists(st.fractions(max_denominator=7).map(lambda f: f.limit_denominator(7)),
                        min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(moment_lists)
def test_cumulant_round_trips(m):
    assert free_cumulants_to_moments(moments_to_free_cumulants(m)) == m
    assert boolean_cumulants_to_moments(moments_to_boolean_cumulants(m)) == m


def test_convolution_examples():
    assert free_convolve_oracle(TP, TP, 6)[1::2] == [2, 6, 20]
    assert free_convolve_oracle(SC, SC, 4)[1::2] == [2, 8]
    assert free_convolve_oracle(TP, MomentSpec.point(0), 8) == TP.moments(8)
    assert boolean_convolve_oracle(TP, TP, 4)[1::2] == [2, 4]
    assert boolean_convolve_oracle(MomentSpec.point(2), MomentSpec.point(5), 1) == [7]
    assert boolean_convolve_oracle(SC, MomentSpec.point(0), 6) == SC.moments(6)


def test_free_product_state_examples():
    mu, nu = MomentSpec.two_point(0, 2, "1/3"), MomentSpec.two_point(1, 3, "1/4")
    assert free_product_state([(1, "X"), (2, "X")], [mu, nu]) == mu.moment(1) * nu.moment(1)
    a = Element.gen().centered(mu)
    b = Element.gen().centered(nu)
    assert free_product_state([(1, a), (2, b)], [mu, nu]) == 0
    assert free_product_state([(1, a), (2, "X X"), (1, a)], [mu, nu]) == mu.expect(a * a) * nu.moment(2)


def test_boolean_product_state():
    mu, nu = MomentSpec.two_point(0, 2, "1/3"), MomentSpec.point(5)
    w = [(1, "X"), (1, "X"), (2, "X"), (1, "X")]
    assert boolean_product_state(w, [mu, nu]) == mu.moment(2) * 5 * mu.moment(1)


def test_two_oracles_agree():
    for a, b in ((TP, TP), (SC, SC), (TP, SC), (MomentSpec.two_point(0, 2, "1/3"), SC)):
        assert free_sum_moments_oracle([a, b], 6) == free_convolve_oracle(a, b, 6)
    assert isinstance(free_convolve_oracle(TP, SC, 4)[3], (int, Fraction))
