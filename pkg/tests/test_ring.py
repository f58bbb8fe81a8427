"""Weighted polynomials, normal forms, graded pieces, field coercion."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arcurves import (InputError, PrimeField, QQ, field_from_string,
                      poly_from_string, random_ring, semigroup_member)


def test_rational_field_coercion():
    assert QQ("2/3") == Fraction(2, 3)
    assert QQ(Fraction(5, 1)) == 5
    assert QQ.div(QQ.one, QQ(4)) == Fraction(1, 4)
    assert QQ.char == 0


def test_prime_field_arithmetic():
    F = PrimeField(5)
    assert F("2/3") == F.mul(F(2), F.inv(F(3)))
    assert F.add(F(4), F(3)) == F(2)
    assert F.char == 5
    with pytest.raises(ValueError):
        PrimeField(2)
    with pytest.raises(ValueError):
        PrimeField(9)


def test_field_from_string():
    assert field_from_string("Q") is QQ
    assert field_from_string("QQ") is QQ
    assert field_from_string("F7").char == 7
    with pytest.raises(ValueError):
        field_from_string("R")


def test_poly_parse_roundtrip():
    f = poly_from_string(QQ, 4, 3, "2*x^3*y^0 - 1*x^0*y^4")
    assert f.to_string() == "-1*x^0*y^4+2*x^3*y^0"
    with pytest.raises(InputError):
        poly_from_string(QQ, 4, 3, "x + +")
    with pytest.raises(InputError):
        poly_from_string(QQ, 4, 3, "")
    with pytest.raises(InputError):
        # mixed weighted degrees
        poly_from_string(QQ, 4, 3, "1*x^1*y^0+1*x^0*y^1")


def test_weighted_degrees(two_branch_ring):
    r = two_branch_ring
    assert r.wdeg(1, 0) == 4 and r.wdeg(0, 1) == 3
    assert r.deg_g == 15
    assert r.gamma_degree == 8
    assert r.ybound == 5


def test_normal_form_kills_high_y(two_branch_ring):
    r = two_branch_ring
    # y^5 = -x^3 y modulo g = x^3 y + y^5
    nf = r.normal_form(r.monomial(0, 5))
    assert nf == r.monomial(3, 1, QQ(-1))
    assert r.normal_form(r.g) == r.zero_poly()


def test_poly_division(two_branch_ring):
    r = two_branch_ring
    prod = r.g * r.monomial(2, 1)
    assert prod.div_exact(r.g) == r.monomial(2, 1)
    with pytest.raises(InputError):
        r.monomial(1, 0).div_exact(r.monomial(0, 1))


def test_quotient_field_elements(cusp_ring):
    from arcurves import QElement
    r = cusp_ring
    # y^3/x is not in R, x y^3 / x is
    assert r.q_membership(r.monomial(0, 3), r.x_poly()) is None
    assert r.q_membership(r.monomial(1, 3), r.x_poly()) == r.monomial(0, 3)
    gamma = QElement(r, r.monomial(0, 3), r.x_poly())
    assert gamma.degree == 5
    assert gamma.in_ring() is None
    xx = QElement(r, r.monomial(2, 0), r.x_poly())
    assert xx.in_ring() == r.x_poly()


def test_ring_constructor_rejects_bad_weights():
    f = poly_from_string(QQ, 4, 2, "1*x^0*y^0")
    with pytest.raises(InputError):
        HypersurfaceRing = __import__("arcurves").HypersurfaceRing
        HypersurfaceRing(QQ, p=2, q=4, b=QQ(1), f=f)


def test_ring_constructor_rejects_noncoprime():
    from arcurves import HypersurfaceRing
    f = poly_from_string(QQ, 6, 4, "1*x^0*y^0")
    with pytest.raises(InputError):
        HypersurfaceRing(QQ, p=4, q=6, b=QQ(1), f=f)


def test_window_parameter_bounds(cusp_ring):
    from arcurves import HypersurfaceRing
    f = poly_from_string(QQ, 4, 3, "1*x^0*y^0")
    with pytest.raises(InputError):
        HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f, m=2, n=2)
    with pytest.raises(InputError):
        HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f, m=1, n=4)


@given(st.integers(min_value=0, max_value=60))
def test_graded_piece_matches_semigroup_count(d):
    # monomial count in degree d with the y-exponent below q + v
    ring = _cusp()
    basis = ring.graded_piece(d)
    count = sum(1 for i in range(d // 4 + 1) for j in range(4)
                if 4 * i + 3 * j == d)
    assert len(basis) == count


def _cusp():
    f = poly_from_string(QQ, 4, 3, "1*x^0*y^0")
    from arcurves import HypersurfaceRing
    return HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f)


@given(st.sampled_from([(3, 4), (3, 5), (4, 5), (5, 7)]),
       st.integers(min_value=0, max_value=80))
def test_semigroup_membership_above_frobenius(pq, d):
    p, q = pq
    frob = p * q - p - q
    member = semigroup_member(d, p, q)
    if d > frob:
        assert member
    if member:
        assert any(d == a * p + b * q
                   for a in range(d // p + 1) for b in range(d // q + 1))


@settings(deadline=None)
@given(st.integers(min_value=0, max_value=2**30))
def test_random_ring_always_valid(seed):
    import random
    ring = random_ring(random.Random(seed))
    assert ring.p >= 3 and ring.q >= 3
    assert 1 <= ring.m <= ring.p - 2
    assert 2 <= ring.n <= ring.q - 1
    # the defining shape: f - y^v lies in (x)
    diff = ring.f - ring.monomial(0, ring.v)
    assert all(i > 0 for (i, j) in diff.terms)
