from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from frey_sunit import errors
from frey_sunit.criteria import (
    CONJECTURAL,
    Status,
    contradiction_trace,
    corollary_q24,
    corollary_quadratic,
    corollary_ramified,
    corollary_splits3,
    expected_S,
    theoremA_check,
    theoremB_check,
    z2_layer_check,
)
from frey_sunit.qfield import QQ, abstract_field, element, fundamental_unit, make_field, primes_above
from frey_sunit.sunit import make_solution, slots_above, solve_sunit, sunit_group

from oracles import legendre_by_squares


def solve(K, n, bound):
    S = expected_S(K, n)
    return solve_sunit(sunit_group(K, S), bound)


def test_theoremA_sqrt5_holds_at_bound():
    K = make_field(5)
    (P,) = primes_above(K, 2)
    v = theoremA_check(K, 2, P, solve(K, 2, 10), 10)
    assert v.status is Status.HOLDS_AT_BOUND
    assert v.parameters["max_m"] <= 4 and v.alpha_exclusions == (4,)
    assert any("[-10, 10]" in c for c in v.caveats)


@pytest.mark.parametrize("d", [0, 5, -5, 2])
def test_theoremA_alpha_four_excluded(d):
    K = QQ if d == 0 else make_field(d)
    P = primes_above(K, 2)[0]
    v = theoremA_check(K, 16, P, solve(K, 16, 3), 3)
    assert v.status is Status.FAILS
    assert v.failed()[0].name.startswith("ord(n) != 4 ord(2)")


def test_theoremA_large_m_fails_with_witness():
    # 33 + (-32) = 1 has m = 5 at 2 once 3 and 11 are in S
    sols = solve(QQ, 66, 5)
    v = theoremA_check(QQ, 66, primes_above(QQ, 2)[0], sols, 5)
    assert v.status is Status.FAILS
    assert "m = 5" in v.failed()[0].witness


def test_theoremA_checks_S():
    K = make_field(5)
    with pytest.raises(errors.WrongS):
        theoremA_check(K, 6, primes_above(K, 2)[0], solve(K, 2, 2), 2)


def test_theoremA_monotone():
    sols = solve(QQ, 66, 5)
    P = primes_above(QQ, 2)[0]
    small = [s for s in sols if s.lambda_ in (2, -1)]
    before = theoremA_check(QQ, 66, P, small, 5).status
    after = theoremA_check(QQ, 66, P, sols, 5).status
    assert (before, after) == (Status.HOLDS_AT_BOUND, Status.FAILS)


def test_traces():
    K = make_field(5)
    eps = fundamental_unit(K)
    G = sunit_group(K, slots_above(K, [2]))
    tr = contradiction_trace(make_solution(eps**2, G), G.S[0])
    assert (tr.case, tr.bound, tr.ord_j) == ("m0", 8, 11) and tr.satisfied
    GQ = sunit_group(QQ, slots_above(QQ, [2]))
    tr = contradiction_trace(make_solution(element(QQ, 2), GQ), GQ.S[0])
    assert (tr.case, tr.v_lambda_mu, tr.bound, tr.ord_j) == ("lambda_positive", 1, 6, 6)
    tr = contradiction_trace(make_solution(element(QQ, Fraction(1, 2)), GQ), GQ.S[0])
    assert (tr.case, tr.v_lambda_mu, tr.bound, tr.ord_j) == ("both_negative", -2, 6, 6)


@pytest.mark.parametrize("d, bound", [(0, 25), (5, 6), (2, 5), (-5, 12)])
def test_trace_bound_is_sound(d, bound):
    K = QQ if d == 0 else make_field(d)
    G = sunit_group(K, slots_above(K, [2]))
    for s in solve_sunit(G, bound):
        assert contradiction_trace(s, G.S[0]).satisfied


def test_corollary_quadratic():
    assert corollary_quadratic(21, 29, 3).status is Status.HOLDS
    v = corollary_quadratic(13, 29, 3)
    assert v.status is Status.FAILS and [c.name for c in v.failed()] == ["(d/ell) = -1"]
    assert corollary_quadratic(21, 29, 4).status is Status.FAILS
    assert corollary_quadratic(21, 29, 3, bound=4).status is Status.HOLDS_AT_BOUND


@given(st.sampled_from([5, 13, 21, 29, 37, 53, 61]), st.sampled_from([3, 7, 11, 19, 23, 29, 31, 43]))
def test_corollary_quadratic_symbol_condition(d, ell):
    v = corollary_quadratic(d, ell, 1)
    symbol_ok = legendre_by_squares(d, ell) == -1
    if v.status is Status.HOLDS:
        assert symbol_ok


def test_corollary_q24():
    assert corollary_q24(97, 2).status is Status.HOLDS
    assert corollary_q24(97, 2, bound=3).status is Status.HOLDS_AT_BOUND
    assert corollary_q24(73, 2).status is Status.FAILS
    assert corollary_q24(89, 2).status is Status.FAILS


def test_corollary_ramified():
    K3 = abstract_field(3, {2: "ramified", 5: "ramified"})
    assert corollary_ramified(K3, 5, 1).status is Status.HOLDS
    K2 = abstract_field(2, {2: "ramified", 5: "ramified"})
    assert corollary_ramified(K2, 5, 1).status is Status.NOT_APPLICABLE
    K5 = abstract_field(5, {2: "ramified", 11: "ramified"})
    assert corollary_ramified(K5, 11, 1).status is Status.NOT_APPLICABLE


def test_corollary_splits3():
    assert corollary_splits3(abstract_field(3, {2: "ramified", 3: "split"}), 1).status is Status.HOLDS
    assert corollary_splits3(abstract_field(2, {2: "ramified", 3: "split"}), 1).status is Status.NOT_APPLICABLE
    assert corollary_splits3(abstract_field(3, {2: "ramified", 3: "inert"}), 1).status is Status.FAILS


def test_theoremB():
    assert theoremB_check(make_field(5), 1).status is Status.HOLDS
    v = theoremB_check(make_field(-5), 1)
    assert v.status is Status.FAILS
    v = theoremB_check(make_field(7), 1)
    assert v.status is Status.FAILS
    assert any("h+ = 2" in c for c in v.caveats)


def test_z2_layer():
    assert z2_layer_check(0).status is Status.NOT_APPLICABLE
    v = z2_layer_check(1)
    assert v.field.degree == 2
    assert v.exclusion_readings["statement"] == [2] and v.exclusion_readings["theorem_rule"] == [8]
    assert any("differs" in c for c in v.caveats)
    v2 = z2_layer_check(2)
    assert v2.field.degree == 4 and v2.parameters["ord2"] == 4


@pytest.mark.parametrize("v", [
    corollary_quadratic(21, 29, 3), corollary_quadratic(13, 29, 3), corollary_q24(89),
    z2_layer_check(0), z2_layer_check(3, 8), theoremB_check(make_field(-5)),
    corollary_ramified(abstract_field(3, {2: "ramified", 5: "ramified"}), 5),
])
def test_verdicts_replay(v):
    assert v.replay() is v.status


def test_imaginary_fields_carry_conjecture_caveat():
    assert CONJECTURAL in theoremB_check(make_field(-5), 1).caveats
    assert CONJECTURAL not in theoremB_check(make_field(5), 1).caveats
