import itertools
import threading
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import ideals, valuations
from newton_lct.corpus import graded_corpus, random_valuations, valuation_families
from newton_lct.errors import RefusedComputation
from newton_lct.lct import jumping, lct, multiplier_ideal
from newton_lct.monomial import MonomialIdeal, ideal_power
from newton_lct.polyhedron import NewtonPolyhedron
from newton_lct.rational import INF
from newton_lct.sequences import (
    ExplicitTerms,
    GradedSequence,
    LimitPolyhedron,
    MultiplierFamily,
    PowerFamily,
    SubadditiveSequence,
    ValuationFamily,
    arn_sandwich_check,
    asymptotic_multiplier_ideal,
    check_graded,
    check_subadditive,
    controlled_growth_check,
    lct_of_graded,
    lct_of_subadditive,
    multiplier_family,
    v_of_graded,
    v_of_subadditive,
)
from newton_lct.valuation import MonomialValuation, eval_ideal, valuation_ideal
from newton_lct.witness import (
    WitnessCertificate,
    attained_ratio,
    compute_lct_witness,
    self_computation_test,
    verify_witness,
)

x = MonomialIdeal.of
beta12 = ValuationFamily(MonomialValuation.of(1, 2), 1)


# -- graded ------------------------------------------------------------------


def test_check_graded_examples():
    assert check_graded(GradedSequence(PowerFamily(x((2, 0), (0, 3)))), 12).passed
    assert check_graded(GradedSequence(beta12), 12).passed
    bad = ExplicitTerms((x((2,)), x((1,))))  # a_1^2 = (x^4) fits, but then a_2 = (x) is too large? no: check a_3
    seq = GradedSequence(ExplicitTerms((x((1,)), x((2,)))))
    assert check_graded(seq, 4).passed
    with pytest.raises(ValueError):
        GradedSequence(ExplicitTerms((x((1, 0)), x((3, 0)))))  # a_1^2 = (x^2) not in a_2 = (x^3)
    seq = GradedSequence(ExplicitTerms((x((1, 0)), x((3, 0)))), validate=False)
    rep = check_graded(seq, 2)
    assert not rep.passed
    f = rep.failures[0]
    assert (f["i"], f["j"]) == (1, 1)
    assert not seq.term(2).contains(f["witness"])
    del bad


def test_graded_builtin_families_pass():
    for seq in graded_corpus():
        assert check_graded(seq, 16).passed


def test_explicit_graded_closure():
    seq = GradedSequence(ExplicitTerms((x((1, 1)), x((2, 2), (3, 0)))))
    # a_3 is the minimal ideal containing a_1 a_2 (and a_1^3)
    assert seq.term(3) == x((1, 1)) * x((2, 2), (3, 0))
    assert seq.limit().exact is False


def test_graded_requires_nonzero_term():
    with pytest.raises(ValueError):
        GradedSequence(PowerFamily(MonomialIdeal.zero(2)))


def test_v_of_graded_examples():
    a = x((2, 0), (0, 3))
    v = MonomialValuation.of(3, 1)
    b = v_of_graded(v, GradedSequence(PowerFamily(a)), 5)
    assert b.bound == b.exact == eval_ideal(v, a)
    b = v_of_graded(MonomialValuation.of(2, 1), GradedSequence(beta12), 12)
    assert b.exact == F(1, 2)
    assert b.bound >= b.exact


def test_v_of_graded_fekete_bound():
    for fam, v in valuation_families(10, seed=4):
        seq = GradedSequence(fam)
        prev = INF
        for J in (4, 8, 16):
            b = v_of_graded(v, seq, J)
            assert b.exact <= b.bound <= prev
            assert b.bound - b.exact <= 2 * max(v.weights) / J
            prev = b.bound


def test_zero_terms_skipped():
    fam = ValuationFamily(MonomialValuation.of(0, 1), 1)
    seq = GradedSequence(fam)
    assert v_of_graded(MonomialValuation.of(1, 1), seq, 4).bound == 1


def test_lct_of_graded_examples():
    a = x((2, 0), (0, 3))
    b = lct_of_graded(GradedSequence(PowerFamily(a)), MonomialIdeal.unit(2), 6)
    assert b.bound == b.exact == lct(a).value
    b = lct_of_graded(GradedSequence(beta12), MonomialIdeal.unit(2), 12)
    assert b.exact == 3
    lowers = [lct_of_graded(GradedSequence(beta12), MonomialIdeal.unit(2), J).bound for J in range(1, 10)]
    assert lowers == sorted(lowers)


# -- subadditive -------------------------------------------------------------


def test_check_subadditive_examples():
    b = multiplier_family(GradedSequence(PowerFamily(x((2, 0), (0, 3)))))
    assert check_subadditive(b, 10).passed
    unit = SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(2),) * 5))
    assert check_subadditive(unit, 5).passed
    with pytest.raises(ValueError):
        SubadditiveSequence(ExplicitTerms((x((1, 0)), x((1, 0)))))  # b_2 = (x) not in b_1^2 = (x^2)
    bad = SubadditiveSequence(ExplicitTerms((x((1, 0)), x((1, 0)))), validate=False)
    rep = check_subadditive(bad, 2)
    assert not rep.passed and rep.failures[0]["witness"] is not None


def test_subadditive_explicit_index_bounds():
    seq = SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(1),) * 3))
    assert seq.term(0).is_unit
    with pytest.raises(IndexError):
        seq.term(4)


def test_v_of_subadditive():
    a = x((2, 0), (0, 3))
    b = multiplier_family(GradedSequence(PowerFamily(a)))
    for v in random_valuations(5, 2, seed=1):
        prev = None
        for J in (2, 6, 12):
            bd = v_of_subadditive(v, b, J)
            assert bd.exact == eval_ideal(v, a)
            assert bd.bound <= bd.exact <= bd.bound + sum(v.weights) / J
            assert prev is None or bd.bound >= prev
            prev = bd.bound
    unit = SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(2),) * 4))
    assert v_of_subadditive(MonomialValuation.of(1, 1), unit, 4).bound == 0


def test_controlled_growth_examples():
    b = multiplier_family(GradedSequence(PowerFamily(x((2, 0), (0, 3)))))
    assert controlled_growth_check(b, random_valuations(20, 2, seed=0), 16).passed
    m = MonomialIdeal.maximal(2)
    square = SubadditiveSequence(ExplicitTerms(tuple(ideal_power(m, j * j) for j in range(1, 7))))
    rep = controlled_growth_check(square, [MonomialValuation.of(1, 1)], 6)
    assert not rep.passed
    unit = SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(2),) * 4))
    assert controlled_growth_check(unit, [MonomialValuation.of(1, 1)], 4).passed


def test_controlled_growth_uncertified_without_bound():
    m = MonomialIdeal.maximal(2)
    seq = SubadditiveSequence(ExplicitTerms(tuple(ideal_power(m, j) for j in range(1, 6))))
    v = MonomialValuation.of(1, 1)
    rep = controlled_growth_check(seq, [v], 5)
    assert rep.passed and rep.details["uncertified"] > 0
    rep = controlled_growth_check(seq, [v], 5, upper_bounds=lambda v: F(1))
    assert rep.passed and rep.details["certified"]


def test_arn_sandwich_examples():
    for q in (MonomialIdeal.unit(2), MonomialIdeal.maximal(2)):
        b = multiplier_family(GradedSequence(PowerFamily(x((2, 0), (0, 3)))))
        rep = arn_sandwich_check(b, q, 16)
        assert rep.passed
    unit = SubadditiveSequence(ExplicitTerms((MonomialIdeal.unit(2),) * 4))
    rep = arn_sandwich_check(unit, MonomialIdeal.unit(2), 4)
    assert rep.passed and rep.details["arn_limit"] == 0


def test_graded_and_multiplier_thresholds_bracket():
    for g in graded_corpus():
        if not g.limit().exact:
            continue
        b = multiplier_family(g)
        q = MonomialIdeal.unit(g.dim)
        lo = lct_of_graded(g, q, 8)
        hi = lct_of_subadditive(b, q, 8)
        assert lo.exact == hi.exact
        assert lo.bound <= lo.exact <= hi.bound


def test_asymptotic_multiplier_examples():
    a = x((2, 0), (0, 3))
    assert asymptotic_multiplier_ideal(GradedSequence(PowerFamily(a)), 3) == multiplier_ideal(a, 3)
    got = asymptotic_multiplier_ideal(GradedSequence(beta12), 3)
    brute = [b for b in itertools.product(range(8), repeat=2) if (b[0] + 1) + 2 * (b[1] + 1) > 3]
    assert got == MonomialIdeal(2, tuple(brute))
    explicit = GradedSequence(ExplicitTerms((x((1, 1)),)))
    with pytest.raises(RefusedComputation):
        asymptotic_multiplier_ideal(explicit, 2)
    assert not asymptotic_multiplier_ideal(explicit, 2, approximate=True).is_zero


def test_asymptotic_multiplier_subadditive():
    seq = GradedSequence(beta12)
    for i, j in itertools.product(range(1, 7), repeat=2):
        bi, bj = asymptotic_multiplier_ideal(seq, i), asymptotic_multiplier_ideal(seq, j)
        assert (bi * bj).contains_ideal(asymptotic_multiplier_ideal(seq, i + j))


def test_limit_polyhedra():
    lim = GradedSequence(ValuationFamily(MonomialValuation.of(F(1, 2), 3), F(3, 2))).limit()
    assert lim.exact
    assert set(lim.polyhedron.points) == {(3, 0), (0, F(1, 2))}
    for v in random_valuations(5, 2, seed=3):
        assert v_of_graded(v, GradedSequence(PowerFamily(x((1, 2)))), 3).exact == lim.__class__(
            NewtonPolyhedron.of_ideal(x((1, 2))), True
        ).support(v)


def test_memo_thread_safe():
    seq = GradedSequence(ValuationFamily(MonomialValuation.of(1, 2, 3), 2))
    out = [None] * 8

    def work(k):
        out[k] = [seq.term(j) for j in range(1, 12)]

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(o == out[0] for o in out)
    assert all(o[j] is out[0][j] for o in out for j in range(11))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(valuations(n, positive=True), valuations(n))), st.integers(2, 10))
def test_fekete_monotonicity(vs, J):
    beta, v = vs
    seq = GradedSequence(ValuationFamily(beta, 1))
    assert v_of_graded(v, seq, J).bound <= v_of_graded(v, seq, J - 1).bound


# -- witness -----------------------------------------------------------------


def test_witness_valuation_family():
    seq = GradedSequence(beta12)
    cert = compute_lct_witness(seq.limit(), MonomialIdeal.unit(2))
    assert cert.value == 3 and cert.valuation.weights == (1, 2)
    assert cert.label == "toric witness"
    rep = verify_witness(cert, seq, MonomialIdeal.unit(2), 12)
    assert rep.passed
    assert {f for f in ("attainment", "perturbation", "finite_level")}


def test_witness_tampered_certificate_fails():
    seq = GradedSequence(beta12)
    cert = compute_lct_witness(seq.limit(), MonomialIdeal.unit(2))
    fake = WitnessCertificate(cert.value, MonomialValuation.of(1, 1), None, None, None)
    rep = verify_witness(fake, seq, MonomialIdeal.unit(2), 6)
    att = [f for f in rep.failures if f.get("check") == "attainment"]
    assert att and att[0]["expected"] == 3 and att[0]["attained"] == 4


def test_witness_power_family_agrees_with_engine():
    for a in (x((2, 0), (0, 3)), x((3, 0, 0), (1, 1, 1), (0, 0, 2), (0, 4, 0))):
        seq = GradedSequence(PowerFamily(a))
        for q in (MonomialIdeal.unit(a.dim), MonomialIdeal.maximal(a.dim)):
            cert = compute_lct_witness(seq.limit(), q)
            res = jumping(a, q)
            assert cert.value == res.value
            assert cert.valuation.proportional_to(res.witness)
            rep = verify_witness(cert, seq, q, 4, samples=40)
            assert rep.passed
    # finite-level check is an equality at j = 1 for powers
    a = x((2, 0), (0, 3))
    assert jumping(a, MonomialIdeal.unit(2)).value == compute_lct_witness(
        GradedSequence(PowerFamily(a)).limit(), MonomialIdeal.unit(2)
    ).value


def test_witness_cross_module_q():
    lim = GradedSequence(PowerFamily(MonomialIdeal.maximal(2))).limit()
    assert compute_lct_witness(lim, x((1, 0))).value == 3 == jumping(MonomialIdeal.maximal(2), x((1, 0))).value


def test_witness_refuses_inexact_and_degenerate():
    seq = GradedSequence(ExplicitTerms((x((1, 1)),)))
    with pytest.raises(RefusedComputation):
        compute_lct_witness(seq.limit(), MonomialIdeal.unit(2))
    unit_lim = LimitPolyhedron(NewtonPolyhedron(2, ((0, 0),)), True)
    cert = compute_lct_witness(unit_lim, MonomialIdeal.unit(2))
    assert cert.degenerate and cert.value is INF


def test_self_computation_examples():
    for beta, lam in (((1, 2), 3), ((1, 1, 1), 3)):
        rep = self_computation_test(MonomialValuation.of(*beta))
        assert rep.passed
        assert rep.details["certificate"].value == lam


@given(st.integers(1, 4).flatmap(lambda n: valuations(n, positive=True)))
def test_self_computation_property(beta):
    assert self_computation_test(beta).passed


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(ideals(dim=n), ideals(dim=n, proper=False), st.just(n))), st.data())
def test_witness_monotone_in_q(aqn, data):
    a, q, n = aqn
    w = data.draw(st.tuples(*[st.integers(0, 4)] * n))
    lim = GradedSequence(PowerFamily(a)).limit()
    lam = compute_lct_witness(lim, q).value
    bigger = q + MonomialIdeal(n, (w,))
    piece = compute_lct_witness(lim, MonomialIdeal(n, (w,))).value
    assert compute_lct_witness(lim, bigger).value == min(lam, piece)


def test_witness_scale_invariance():
    seq = GradedSequence(ValuationFamily(MonomialValuation.of(1, 3), 2))
    lim = seq.limit()
    cert = compute_lct_witness(lim, MonomialIdeal.unit(2))
    for t in (F(1, 3), F(7, 2)):
        assert attained_ratio(cert.valuation.scaled(t), lim, MonomialIdeal.unit(2)) == cert.value
