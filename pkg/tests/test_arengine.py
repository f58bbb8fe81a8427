"""Sequence construction: gamma data, pushes, transports, reports."""

import pytest

from arcurves import (GradedMatrix, InputError, decompose,
                      double_push_report, e_avg, explore_component,
                      factor_hypersurface, gamma_endo, gamma_for, hom_graded,
                      mf_from_ideal, push, stably_zero_bruteforce,
                      syz_transport, verify_main_theorem, verify_syz_gamma)


def test_gamma_datum_two_branch(two_branch_datum):
    gd = two_branch_datum
    assert gd.z.to_string() == "1*x^0*y^1"
    assert gd.gamma.num.to_string() == "1*x^0*y^4"
    assert gd.gamma.den.to_string() == "1*x^1*y^0"
    assert gd.gamma.degree == 8
    assert gd.gamma.in_ring() is None


def test_gamma_datum_cusp(cusp_datum):
    gd = cusp_datum
    assert gd.z.to_string() == "1*x^0*y^0"
    assert gd.gamma.num.to_string() == "1*x^0*y^3"
    assert gd.gamma.den.to_string() == "1*x^1*y^0"
    assert gd.gamma.degree == 5


def test_gamma_escape_certificates(two_branch_ring, two_branch_datum):
    r = two_branch_ring
    gd = two_branch_datum
    # gamma itself leaves R, but x gamma and y gamma land back inside
    assert gd.gamma.in_ring() is None
    assert (gd.gamma * r.x_poly()).in_ring() is not None
    assert (gd.gamma * r.y_poly()).in_ring() is not None


def test_push_two_branch_matrices(two_branch_ideal, two_branch_datum):
    seq = push(two_branch_ideal, two_branch_datum)
    assert seq.alpha.entry_strings() == [["0", "-1*x^1*y^2"],
                                         ["1*x^0*y^2", "0"]]
    assert seq.beta.entry_strings() == [["0", "-1*x^0*y^1"],
                                        ["1*x^1*y^3", "0"]]
    assert seq.middle.gens == (4, 6, 8, 3)
    assert seq.right.gens == (8, 3)


def test_push_cusp_matrices(cusp_ideal, cusp_datum):
    seq = push(cusp_ideal, cusp_datum)
    assert seq.alpha.entry_strings() == [["0", "-1*x^1*y^1"],
                                         ["1*x^0*y^1", "0"]]
    assert seq.beta.entry_strings() == [["0", "-1*x^0*y^1"],
                                        ["1*x^1*y^1", "0"]]
    assert seq.middle.gens == (4, 6, 5, 3)


def test_push_is_a_complex(cusp_ideal, cusp_datum):
    seq = push(cusp_ideal, cusp_datum)
    comp = seq.proj.compose(seq.inj)
    assert comp.is_zero()


def test_sequence_does_not_split(cusp_ideal, cusp_datum):
    seq = push(cusp_ideal, cusp_datum)
    ident = hom_graded(cusp_ideal, cusp_ideal, 0).from_matrix(
        GradedMatrix.identity(cusp_ideal.ring, cusp_ideal.gens))
    assert not seq.factors_through_left(ident)


def test_radical_endos_factor_through_middle(cusp_ideal, cusp_datum):
    seq = push(cusp_ideal, cusp_datum)
    ident = hom_graded(cusp_ideal, cusp_ideal, 0).from_matrix(
        GradedMatrix.identity(cusp_ideal.ring, cusp_ideal.gens))
    assert seq.factors_through_left(ident.times_monomial(1, 0))
    assert seq.factors_through_left(gamma_endo(cusp_ideal, cusp_datum))


def test_syz_transport_of_identity(cusp_ideal):
    M = cusp_ideal
    N = M.syz()
    ident = hom_graded(M, M, 0).from_matrix(
        GradedMatrix.identity(M.ring, M.gens))
    moved = syz_transport(ident, N)
    ident_N = hom_graded(N, N, 0).from_matrix(
        GradedMatrix.identity(N.ring, N.gens))
    assert moved == ident_N
    xs = syz_transport(ident.times_monomial(1, 0), N)
    assert xs == ident_N.times_monomial(1, 0)


def test_syz_transport_negates_gamma(cusp_ideal, cusp_datum):
    M = cusp_ideal
    N = M.syz()
    moved = syz_transport(gamma_endo(M, cusp_datum), N)
    gamma_N = gamma_endo(N, cusp_datum)
    assert stably_zero_bruteforce(moved + gamma_N)


def test_main_theorem_reports(two_branch_ideal, two_branch_datum,
                              cusp_ideal, cusp_datum):
    for M, gd in ((two_branch_ideal, two_branch_datum),
                  (cusp_ideal, cusp_datum)):
        rep = verify_main_theorem(M, gd)
        assert rep["pass"]
        assert rep["branch_rank"] == 1
        assert rep["socle_by_trace"] and rep["socle_by_lifting"]


def test_syz_gamma_needs_a_domain(two_branch_ideal, two_branch_datum):
    with pytest.raises(InputError):
        verify_syz_gamma(two_branch_ideal, two_branch_datum)


def test_syz_gamma_on_the_cusp(cusp_ideal, cusp_datum):
    rep = verify_syz_gamma(cusp_ideal, cusp_datum)
    assert rep["pass"]
    assert rep["ranks"] == [1, 1]
    assert rep["trace_sum_in_ring"] == "0"
    seq = push(cusp_ideal, cusp_datum)
    rep2 = verify_syz_gamma(seq.middle, cusp_datum)
    assert rep2["pass"]
    assert rep2["ranks"] == [2, 2]


def test_double_push_summands(two_branch_ideal, two_branch_datum,
                              cusp_ideal, cusp_datum):
    seq = push(two_branch_ideal, two_branch_datum)
    seq2 = push(seq.middle, two_branch_datum)
    assert seq2.middle.gens == (4, 6, 8, 3, 8, 3, 5, 7)
    parts, frees = decompose(seq2.middle)
    assert sorted(tuple(p.gens) for p in parts) == [(3, 4, 5, 6, 7, 8),
                                                    (3, 8)]
    assert frees == []

    seqc = push(cusp_ideal, cusp_datum)
    seqc2 = push(seqc.middle, cusp_datum)
    partsc, freesc = decompose(seqc2.middle)
    assert sorted(tuple(p.gens) for p in partsc) == [(2, 3, 4), (3, 5),
                                                     (4, 5, 6)]
    assert freesc == []


def test_multiplicity_averages(two_branch_ideal, cusp_ideal):
    assert e_avg(two_branch_ideal) == 4
    assert e_avg(cusp_ideal) == 3


def test_double_push_report_passes(two_branch_ring):
    rep = double_push_report(two_branch_ring)
    assert rep["pass"]
    assert rep["column_degrees"]["normalized_tail"] == [-7, -12, -10, -8,
                                                        -6, -11]
    assert rep["c4_strictly_minimal"]
    assert rep["w_corner"] == "1*x^0*y^1"
    assert rep["block_triangular"]
    assert len(rep["summands"]) == 2
    assert rep["free_summands"] == []


def test_explore_finds_the_tube(two_branch_ideal, two_branch_datum):
    rep = explore_component(two_branch_ideal, two_branch_datum, depth=3)
    assert rep["classification"] == "tube(2)"
    names = [m["name"] for m in rep["modules"]]
    assert names == ["V%d" % i for i in range(7)]
    weights = {m["name"]: m["e_avg"] for m in rep["modules"]}
    assert weights == {"V0": "4", "V1": "4", "V2": "8", "V3": "8",
                       "V4": "12", "V5": "12", "V6": "16"}
    sub = rep["subadditive"]
    assert sub["status"] == "additive"
    assert sub["checked"] == ["V0", "V2"]
    assert sub["failures"] == {}


def test_push_refuses_free_summands(cusp_ring, cusp_datum):
    from arcurves import free_module
    with pytest.raises(InputError):
        push(free_module(cusp_ring, (0,)), cusp_datum)
