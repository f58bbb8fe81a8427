"""Branchwise traces: integrality, valuations, the stable-zero oracle."""

from arcurves import (GradedMatrix, branch_images, end_generators,
                      factor_hypersurface, gamma_endo, hom_graded,
                      is_integral, min_t_valuation, socle_test,
                      stably_zero_bruteforce, stably_zero_trace, trace_Q,
                      trace_report)


def _identity(M):
    space = hom_graded(M, M, 0)
    return space.from_matrix(GradedMatrix.identity(M.ring, M.gens))


def test_trace_of_identity_is_one(two_branch_ring, two_branch_ideal):
    branches = factor_hypersurface(two_branch_ring)
    tr = trace_Q(_identity(two_branch_ideal), branches)
    assert tr.in_ring() == two_branch_ring.one()
    assert [img[1] for img in branch_images(tr, branches)] == [0, 0]


def test_trace_is_linear_in_the_monomial(two_branch_ring, two_branch_ideal):
    branches = factor_hypersurface(two_branch_ring)
    tr = trace_Q(_identity(two_branch_ideal).times_monomial(1, 0), branches)
    assert tr.in_ring() == two_branch_ring.x_poly()
    assert min_t_valuation(tr, branches) == 1
    assert is_integral(tr, branches)


def test_gamma_trace_is_gamma(two_branch_ideal, two_branch_datum):
    gm = gamma_endo(two_branch_ideal, two_branch_datum)
    tr = trace_Q(gm)
    assert tr == two_branch_datum.gamma
    assert tr.in_ring() is None
    assert is_integral(tr)


def test_socle_membership(two_branch_ideal, two_branch_datum):
    gm = gamma_endo(two_branch_ideal, two_branch_datum)
    assert socle_test(gm)
    assert not socle_test(_identity(two_branch_ideal))


def test_trace_oracle_matches_lifting(cusp_ideal):
    M = cusp_ideal
    branches = factor_hypersurface(M.ring)
    for d in range(-4, 9):
        for h in hom_graded(M, M, d).basis:
            assert stably_zero_trace(h, branches) == stably_zero_bruteforce(h)


def test_end_generator_degrees(two_branch_ideal):
    eg = end_generators(two_branch_ideal)
    info = eg.describe()
    assert info["generator_degrees"] == [0, 5]
    assert info["certified_through"] >= info["window"][1]
    # cached per module
    assert end_generators(two_branch_ideal) is eg


def test_trace_report_shape(two_branch_ideal, two_branch_datum):
    gm = gamma_endo(two_branch_ideal, two_branch_datum)
    rep = trace_report(gm)
    assert sorted(rep.keys()) == ["branches", "degree", "denominator",
                                  "in_ring", "integral", "numerator"]
    assert rep["integral"] is True
    assert rep["in_ring"] is None
    assert rep["degree"] == 8


def test_zero_trace_valuation_is_none(cusp_ideal):
    z = hom_graded(cusp_ideal, cusp_ideal, 1).zero()
    tr = trace_Q(z)
    assert tr.is_zero()
    assert min_t_valuation(tr) is None
