"""Branch factorization, parametrizations, semigroups, inverse different."""

import pytest

from arcurves import (BranchFraction, FormSplitError, HypersurfaceRing,
                      NotSquarefreeError, PrimeField, QQ,
                      factor_hypersurface, gamma_prime, poly_from_string,
                      singular_branch)


def test_two_branch_factorization(two_branch_ring):
    branches = factor_hypersurface(two_branch_ring)
    kinds = sorted(b.kind for b in branches)
    assert kinds == ["binomial", "y-axis"]
    axis = next(b for b in branches if b.kind == "y-axis")
    assert axis.generators == (1,)
    assert axis.frobenius == -1
    assert axis.multiplicity == 1


def test_cusp_factorization(cusp_ring):
    branches = factor_hypersurface(cusp_ring)
    assert len(branches) == 1
    br = branches[0]
    assert br.kind == "binomial"
    assert br.generators == (3, 4)
    assert br.frobenius == 5
    assert br.conductor == 6
    assert br.multiplicity == 3


def test_parametrization_kills_g(two_branch_ring):
    for br in factor_hypersurface(two_branch_ring):
        assert br.evaluate(two_branch_ring.g) is None
        assert br.evaluate(br.h) is None


def test_singular_branch_is_the_form_branch(two_branch_ring, cusp_ring):
    for ring in (two_branch_ring, cusp_ring):
        br = singular_branch(ring)
        form = ring.monomial(ring.p, 0, ring.b) + ring.monomial(0, ring.q)
        assert br.kind == "binomial"
        assert br.evaluate(form) is None


def test_singular_branch_with_two_binomials():
    # f = y^4 - x^3 gives g = (x^3 + y^4)(y^4 - x^3), both binomial
    ring = HypersurfaceRing(QQ, p=3, q=4, b=QQ(1),
                            f="1*x^0*y^4-1*x^3*y^0", m=1, n=2)
    branches = factor_hypersurface(ring)
    assert len(branches) == 2
    br = singular_branch(ring)
    form = ring.monomial(3, 0) + ring.monomial(0, 4)
    assert br.evaluate(form) is None


def test_gamma_prime_lands_on_frobenius(cusp_ring):
    br = singular_branch(cusp_ring)
    frac = gamma_prime(br)
    coeff, exp = frac.image()
    assert exp == br.frobenius
    assert not cusp_ring.field.is_zero(coeff)


def test_branch_fraction_needs_unit_denominator(two_branch_ring):
    axis = next(b for b in factor_hypersurface(two_branch_ring)
                if b.kind == "y-axis")
    from arcurves import InputError
    with pytest.raises(InputError):
        BranchFraction(axis, two_branch_ring.one(), two_branch_ring.y_poly())


def test_form_split_failure_over_small_field():
    # fourth powers in F5 are {0, 1}, so x^4 + y^5 has no branch root
    F = PrimeField(5)
    with pytest.raises(FormSplitError):
        ring = HypersurfaceRing(F, p=4, q=5, b=F(1), f="1*x^0*y^0")
        factor_hypersurface(ring)


def test_repeated_factor_rejected():
    f = poly_from_string(QQ, 4, 3, "1*x^0*y^4+1*x^3*y^0")
    with pytest.raises(NotSquarefreeError):
        HypersurfaceRing(QQ, p=3, q=4, b=QQ(1), f=f)


def test_branch_images_of_variables(cusp_ring):
    br = singular_branch(cusp_ring)
    cx, ex = br.evaluate(cusp_ring.x_poly())
    cy, ey = br.evaluate(cusp_ring.y_poly())
    assert (ex, ey) == (4, 3)
    # the parametrization satisfies b (c_x)^p + (c_y)^q = 0
    K = cusp_ring.field
    lhs = K.add(K.mul(cusp_ring.b, K.mul(K.mul(cx, cx), cx)),
                K.mul(K.mul(cy, cy), K.mul(cy, cy)))
    assert K.is_zero(lhs)
